"""Text formats: the native KB grammar, an OBO 1.2 subset, and reports.

Native grammar, one record per line, ``#`` starts a comment::

    species <id> [extant|extinct]
    related <species-id> <species-id>
    structure <id> category <organism-part|whole-organism|artifact|other> [in <species-id>] [name "<text>"]
    realizable <id> [name "<text>"]
    process <id> [name "<text>"]
    realizes <realizable-id> <process-id>
    bears <structure-id> <realizable-id> [prevalence <decimal in [0,1]>]
    designed <structure-id> for <process-id>
    homolog <structure-id> <structure-id>
    asserted_function <structure-id> <realizable-id>
"""

from __future__ import annotations

import json
import math
import shlex
from collections import defaultdict, deque
from dataclasses import dataclass, field

from .inference import ClassificationReport, Label
from .kb import (
    CATEGORIES,
    Bearing,
    DesignAssertion,
    FunctionAssertion,
    HomologyAssertion,
    KnowledgeBase,
    ProcessKind,
    RealizableKind,
    RealizationLink,
    Record,
    RelatednessAssertion,
    Species,
    Structure,
)

__all__ = [
    "KBSyntaxError",
    "OboSyntaxError",
    "MissingId",
    "ReportMismatch",
    "NativeDocument",
    "Stanza",
    "OntologyDocument",
    "UPPER_TERMS",
    "parse_native",
    "serialize_native",
    "parse_obo",
    "serialize_obo",
    "export_axiomatisation",
    "write_report",
    "AuditRow",
    "AuditResult",
    "audit_obo",
]


class KBSyntaxError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class OboSyntaxError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class MissingId(OboSyntaxError):
    pass


class ReportMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# native format


@dataclass
class NativeDocument:
    records: list[Record] = field(default_factory=list)
    lines: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def _tokens(text: str, lineno: int) -> list[str]:
    lex = shlex.shlex(text, posix=True)
    lex.whitespace_split = True
    lex.commenters = "#"
    try:
        return list(lex)
    except ValueError as e:
        raise KBSyntaxError(lineno, str(e)) from None


def _fraction(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise KBSyntaxError(lineno, f"malformed fraction {token!r}") from None
    if math.isnan(value) or not 0.0 <= value <= 1.0:
        raise KBSyntaxError(lineno, f"fraction {token} not in [0, 1]")
    return value


def _options(rest: list[str], allowed: set[str], lineno: int) -> dict[str, str]:
    if len(rest) % 2:
        raise KBSyntaxError(lineno, f"dangling token {rest[-1]!r}")
    opts: dict[str, str] = {}
    for key, value in zip(rest[::2], rest[1::2]):
        if key not in allowed:
            raise KBSyntaxError(lineno, f"unexpected {key!r}")
        if key in opts:
            raise KBSyntaxError(lineno, f"repeated {key!r}")
        opts[key] = value
    return opts


def _arity(kw: str, args: list[str], n: int, lineno: int) -> None:
    if len(args) != n:
        raise KBSyntaxError(lineno, f"{kw} expects {n} arguments, got {len(args)}")


def _parse_line(tokens: list[str], lineno: int) -> Record:
    kw, args = tokens[0], tokens[1:]
    if kw == "species":
        if len(args) not in (1, 2):
            raise KBSyntaxError(lineno, f"species expects 1 or 2 arguments, got {len(args)}")
        if len(args) == 2 and args[1] not in ("extant", "extinct"):
            raise KBSyntaxError(lineno, f"expected extant or extinct, got {args[1]!r}")
        return Species(args[0], extant=len(args) == 1 or args[1] == "extant")
    if kw == "structure":
        if len(args) < 3 or args[1] != "category":
            raise KBSyntaxError(lineno, "structure expects: <id> category <category> ...")
        if args[2] not in CATEGORIES:
            raise KBSyntaxError(lineno, f"unknown category {args[2]!r}")
        opts = _options(args[3:], {"in", "name"}, lineno)
        return Structure(args[0], args[2], opts.get("in"), opts.get("name", ""))
    if kw in ("realizable", "process"):
        if not args:
            raise KBSyntaxError(lineno, f"{kw} expects an id")
        opts = _options(args[1:], {"name"}, lineno)
        cls = RealizableKind if kw == "realizable" else ProcessKind
        return cls(args[0], opts.get("name", ""))
    if kw == "bears":
        if len(args) == 2:
            return Bearing(args[0], args[1])
        if len(args) == 4 and args[2] == "prevalence":
            return Bearing(args[0], args[1], _fraction(args[3], lineno))
        raise KBSyntaxError(lineno, "bears expects: <structure> <realizable> [prevalence <fraction>]")
    if kw == "designed":
        if len(args) != 3 or args[1] != "for":
            raise KBSyntaxError(lineno, "designed expects: <structure> for <process>")
        return DesignAssertion(args[0], args[2])
    binary = {
        "related": RelatednessAssertion,
        "realizes": RealizationLink,
        "homolog": HomologyAssertion,
        "asserted_function": FunctionAssertion,
    }
    if kw in binary:
        _arity(kw, args, 2, lineno)
        return binary[kw](*args)
    raise KBSyntaxError(lineno, f"unknown keyword {kw!r}")


def parse_native(text: str) -> NativeDocument:
    """Parse native KB text into records; no cross-record validation."""
    doc = NativeDocument()
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _tokens(line, lineno)
        if tokens:
            doc.records.append(_parse_line(tokens, lineno))
            doc.lines.append(lineno)
    return doc


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _name(text: str) -> str:
    return f" name {_quote(text)}" if text else ""


def _record_line(r: Record) -> str:
    match r:
        case Species(id=i, extant=extant):
            return f"species {i} {'extant' if extant else 'extinct'}"
        case RelatednessAssertion(a=a, b=b):
            return f"related {a} {b}"
        case Structure(id=i, category=c, species=sp, name=n):
            where = f" in {sp}" if sp is not None else ""
            return f"structure {i} category {c}{where}{_name(n)}"
        case RealizableKind(id=i, name=n):
            return f"realizable {i}{_name(n)}"
        case ProcessKind(id=i, name=n):
            return f"process {i}{_name(n)}"
        case RealizationLink(realizable=rz, process=p):
            return f"realizes {rz} {p}"
        case Bearing(structure=s, realizable=rz, prevalence=prev):
            return f"bears {s} {rz}" + ("" if prev is None else f" prevalence {prev!r}")
        case DesignAssertion(designee=s, purpose=p):
            return f"designed {s} for {p}"
        case HomologyAssertion(left=a, right=b):
            return f"homolog {a} {b}"
        case FunctionAssertion(structure=s, realizable=rz):
            return f"asserted_function {s} {rz}"
    raise TypeError(f"not a KB record: {r!r}")


def serialize_native(kb: KnowledgeBase) -> str:
    """Canonical native text for ``kb``; empty KB gives empty text."""
    lines = [_record_line(r) for r in kb.records()]
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# OBO subset


def _strip_value(value: str) -> str:
    """Drop a trailing ``! comment`` and ``{qualifiers}`` block."""
    out = []
    escaped = False
    for ch in value:
        if escaped:
            out.append(ch)
            escaped = False
        elif ch == "\\":
            out.append(ch)
            escaped = True
        elif ch == "!":
            break
        else:
            out.append(ch)
    s = "".join(out).rstrip()
    if s.endswith("}") and "{" in s:
        s = s[: s.rindex("{")].rstrip()
    return s


@dataclass
class Stanza:
    """One ``[Term]``/``[Typedef]``/other stanza; tags kept in file order."""

    kind: str
    tags: list[tuple[str, str]] = field(default_factory=list)
    line: int = 0

    def values(self, tag: str) -> list[str]:
        return [_strip_value(v) for t, v in self.tags if t == tag]

    def first(self, tag: str) -> str | None:
        vals = self.values(tag)
        return vals[0] if vals else None

    @property
    def id(self) -> str | None:
        return self.first("id")

    @property
    def name(self) -> str | None:
        return self.first("name")

    @property
    def definition(self) -> str | None:
        return self.first("def")

    @property
    def is_a(self) -> list[str]:
        return [v.split()[0] for v in self.values("is_a") if v]

    @property
    def relationship(self) -> list[tuple[str, str]]:
        out = []
        for v in self.values("relationship"):
            parts = v.split()
            out.append((parts[0], parts[1]))
        return out

    @property
    def union_of(self) -> list[str]:
        return self.values("union_of")

    @property
    def intersection_of(self) -> list[str]:
        return self.values("intersection_of")


@dataclass
class OntologyDocument:
    header: list[tuple[str, str]] = field(default_factory=list)
    stanzas: list[Stanza] = field(default_factory=list)

    @property
    def terms(self) -> list[Stanza]:
        return [s for s in self.stanzas if s.kind == "Term"]

    @property
    def typedefs(self) -> list[Stanza]:
        return [s for s in self.stanzas if s.kind == "Typedef"]

    def term(self, term_id: str) -> Stanza:
        for s in self.terms:
            if s.id == term_id:
                return s
        raise KeyError(term_id)


def _check_stanza(st: Stanza, seen: dict[tuple[str, str], int]) -> None:
    if st.id is None:
        raise MissingId(st.line, f"[{st.kind}] stanza has no id")
    if len(st.values("id")) > 1:
        raise OboSyntaxError(st.line, f"[{st.kind}] stanza has several ids")
    key = (st.kind, st.id)
    if key in seen:
        raise OboSyntaxError(st.line, f"duplicate {st.kind} id {st.id!r} (first at line {seen[key]})")
    seen[key] = st.line
    for tag in ("union_of", "intersection_of"):
        if len(st.values(tag)) == 1:
            raise OboSyntaxError(st.line, f"{st.id}: a single {tag} clause is not a valid class expression")
    for rel in st.values("relationship"):
        if len(rel.split()) < 2:
            raise OboSyntaxError(st.line, f"{st.id}: relationship needs a type and a target")


def parse_obo(text: str) -> OntologyDocument:
    """Parse the OBO subset; unrecognised tags and stanzas are kept verbatim."""
    doc = OntologyDocument()
    current: Stanza | None = None
    seen: dict[tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("!"):
            continue
        if line.startswith("["):
            if not line.endswith("]") or len(line) < 3:
                raise OboSyntaxError(lineno, f"malformed stanza header {line!r}")
            if current is not None:
                _check_stanza(current, seen)
            current = Stanza(line[1:-1].strip(), line=lineno)
            doc.stanzas.append(current)
            continue
        tag, sep, value = line.partition(":")
        if not sep or not tag.strip():
            raise OboSyntaxError(lineno, f"expected 'tag: value', got {line!r}")
        pair = (tag.strip(), value.strip())
        (current.tags if current is not None else doc.header).append(pair)
    if current is not None:
        _check_stanza(current, seen)
    return doc


def serialize_obo(doc: OntologyDocument) -> str:
    parts = ["".join(f"{t}: {v}\n" for t, v in doc.header)]
    for st in doc.stanzas:
        body = "".join(f"{t}: {v}\n" for t, v in st.tags)
        parts.append(f"[{st.kind}]\n{body}")
    return "\n".join(p for p in parts if p)


UPPER_TERMS = ("RealizableEntity", "Function", "BiologicalFunction", "ArtifactualFunction", "Role")

_PLACEMENT = {
    Label.BIOLOGICAL: ("BiologicalFunction",),
    Label.ARTIFACTUAL: ("ArtifactualFunction",),
    Label.BOTH: ("BiologicalFunction", "ArtifactualFunction"),
    Label.ROLE: ("Role",),
}


def _upper_scaffold(assert_disjoint: bool) -> list[Stanza]:
    role = Stanza("Term", [
        ("id", "Role"),
        ("name", "role"),
        ("def", '"A realizable entity borne by a continuant that is neither a biological '
                'nor an artifactual function of that continuant." []'),
        ("is_a", "RealizableEntity"),
    ])
    if assert_disjoint:
        role.tags.append(("disjoint_from", "Function"))
    return [
        Stanza("Term", [("id", "RealizableEntity"), ("name", "realizable entity")]),
        Stanza("Term", [
            ("id", "Function"),
            ("name", "function"),
            ("def", '"A realizable entity which is a biological function or an artifactual function." []'),
            ("is_a", "RealizableEntity"),
            ("union_of", "BiologicalFunction"),
            ("union_of", "ArtifactualFunction"),
        ]),
        Stanza("Term", [
            ("id", "BiologicalFunction"),
            ("name", "biological function"),
            ("def", '"A realizable entity realized in an activity, borne by a structure whose homologs in '
                    'closely related species, and most individuals of its own species, bear it too." []'),
            ("is_a", "Function"),
        ]),
        Stanza("Term", [
            ("id", "ArtifactualFunction"),
            ("name", "artifactual function"),
            ("def", '"A realizable entity of a continuant made for the kind of process that realizes it." []'),
            ("is_a", "Function"),
        ]),
        role,
    ]


def export_axiomatisation(
    kb: KnowledgeBase, report: ClassificationReport | None = None, *, assert_disjoint: bool | None = None
) -> OntologyDocument:
    """Render the class-level axiomatisation implied by ``report``.

    A realizable sits under an upper class only when every one of its
    bearings carries the same label; otherwise (or with no report) it is a
    direct child of ``RealizableEntity``.
    """
    if report is not None and set(report.labels) != set(kb.bearing_by_key):
        raise ReportMismatch("report bearings do not match the knowledge base")
    if assert_disjoint is None:
        assert_disjoint = report.params.assert_disjoint if report is not None else False

    doc = OntologyDocument(header=[
        ("format-version", "1.2"),
        ("ontology", "funcrole"),
        ("remark", "The general realizable-to-process link has no OBO equivalent; each realizable gets "
                   "its own realized_by sub-relation instead."),
    ])
    doc.stanzas.extend(_upper_scaffold(assert_disjoint))

    labels_by_realizable: dict[str, set[Label]] = defaultdict(set)
    if report is not None:
        for (_, rz), label in report.labels.items():
            labels_by_realizable[rz].add(label)

    for rk in kb.realizables:
        labels = labels_by_realizable.get(rk.id, set())
        parents: tuple[str, ...] = ("RealizableEntity",)
        if len(labels) == 1:
            parents = _PLACEMENT.get(next(iter(labels)), parents)
        st = Stanza("Term", [("id", rk.id), ("name", rk.name or rk.id)])
        st.tags.extend(("is_a", p) for p in parents)
        if rk.id in kb.realized_by:
            st.tags.append(("relationship", f"realized_by_{rk.id} {kb.realized_by[rk.id]}"))
        doc.stanzas.append(st)

    for p in kb.processes:
        doc.stanzas.append(Stanza("Term", [("id", p.id), ("name", p.name or p.id)]))

    doc.stanzas.append(Stanza("Typedef", [
        ("id", "realized_by"),
        ("name", "realized by"),
        ("domain", "RealizableEntity"),
    ]))
    doc.stanzas.append(Stanza("Typedef", [
        ("id", "is_function_of"),
        ("name", "is function of"),
        ("domain", "Function"),
    ]))
    for link in kb.realizations:
        doc.stanzas.append(Stanza("Typedef", [
            ("id", f"realized_by_{link.realizable}"),
            ("name", f"{link.realizable} realized by"),
            ("domain", link.realizable),
            ("range", link.process),
            ("is_a", "realized_by"),
        ]))
    return doc


# ---------------------------------------------------------------------------
# reports

REPORT_COLUMNS = ("structure", "realizable", "label", "rule")


def write_report(report: ClassificationReport, fmt: str = "tsv") -> str:
    """Deterministic TSV or JSON rendering, rows sorted by bearing."""
    rows = report.rows()
    if fmt == "tsv":
        lines = ["\t".join(REPORT_COLUMNS)]
        lines += [f"{s}\t{r}\t{lab.value}\t{rule}" for s, r, lab, rule in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        out = []
        for s, r, lab, rule in rows:
            trace = report.traces[(s, r)]
            out.append({
                "structure": s,
                "realizable": r,
                "label": lab.value,
                "rule": rule,
                "trace": [str(c) for c in trace.checks],
                "support_chain": [list(k) for k in trace.support_chain],
            })
        return json.dumps(out, indent=2) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


# ---------------------------------------------------------------------------
# audit

_BFO_BRANCH = {"BFO:0000023": "Role", "BFO:0000034": "Function"}


def _branch_of(term: Stanza, doc: OntologyDocument) -> str | None:
    """Nearest role/function ancestor reached by walking ``is_a``."""
    by_id = {t.id: t for t in doc.terms}
    queue = deque(term.is_a)
    seen = set()
    while queue:
        tid = queue.popleft()
        if tid in seen:
            continue
        seen.add(tid)
        if tid in _BFO_BRANCH:
            return _BFO_BRANCH[tid]
        parent = by_id.get(tid)
        name = ((parent.name if parent else None) or tid).lower().replace("_", " ")
        if name.endswith("role"):
            return "Role"
        if name.endswith("function"):
            return "Function"
        if parent is not None:
            queue.extend(parent.is_a)
    return None


@dataclass(frozen=True)
class AuditRow:
    term_id: str
    realizable: str
    branch: str | None
    labels: tuple[str, ...]
    mismatch: bool


@dataclass
class AuditResult:
    rows: list[AuditRow] = field(default_factory=list)
    skipped: int = 0

    @property
    def mismatches(self) -> list[AuditRow]:
        return [r for r in self.rows if r.mismatch]

    def render(self) -> str:
        lines = ["term\trealizable\tobo_branch\tinferred\tstatus"]
        for r in self.rows:
            status = "MISMATCH" if r.mismatch else "ok"
            lines.append(f"{r.term_id}\t{r.realizable}\t{r.branch or '-'}\t{','.join(r.labels) or '-'}\t{status}")
        lines.append(
            f"# matched {len(self.rows)}, mismatches {len(self.mismatches)}, skipped {self.skipped}"
        )
        return "\n".join(lines) + "\n"


def audit_obo(doc: OntologyDocument, kb: KnowledgeBase, report: ClassificationReport) -> AuditResult:
    """Compare OBO branch placement of realizables with inferred labels.

    Terms match a realizable by exact id first, then by case-insensitive
    name. A Role-branch term mismatches when any bearing is inferred as a
    function; a Function-branch term mismatches when any bearing is a role.
    """
    by_name: dict[str, str] = {}
    for rk in kb.realizables:
        by_name.setdefault((rk.name or rk.id).lower(), rk.id)
    labels_by_realizable: dict[str, set[Label]] = defaultdict(set)
    for (_, rz), label in report.labels.items():
        labels_by_realizable[rz].add(label)

    result = AuditResult()
    for term in doc.terms:
        if term.id in kb.realizable_by_id:
            rz = term.id
        elif term.name and term.name.lower() in by_name:
            rz = by_name[term.name.lower()]
        else:
            result.skipped += 1
            continue
        branch = _branch_of(term, doc)
        labels = labels_by_realizable.get(rz, set())
        if branch == "Role":
            mismatch = any(lab.is_function for lab in labels)
        elif branch == "Function":
            mismatch = Label.ROLE in labels
        else:
            mismatch = False
        result.rows.append(AuditRow(term.id, rz, branch, tuple(sorted(lab.value for lab in labels)), mismatch))
    result.rows.sort(key=lambda r: (r.term_id, r.realizable))
    return result
