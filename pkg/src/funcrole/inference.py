"""Function and role classification over a knowledge base.

A bearing (structure, realizable) is classified by two positive rules and
one negative one:

* artifactual: the structure was designed for the process that realizes
  the realizable;
* biological: the bearing is prevalent in its species and is supported by
  the same realizable on a homologous structure in a distinct, closely
  related species, where the supporter must itself be biological. The
  recursion is read coinductively, so the biological set is the greatest
  fixpoint of the support operator below the candidate set;
* role: neither rule fires.

Support is symmetric (homology and relatedness both are), so the greatest
fixpoint is reached after at most one shrinking round. The iteration is
still written out in full; nothing here relies on that shortcut.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .kb import Bearing, KnowledgeBase, closely_related, homology_group

__all__ = [
    "CLOSED_WORLD",
    "OPEN_WORLD",
    "Label",
    "ClassifyParams",
    "Check",
    "ExplanationTrace",
    "Conflict",
    "ClassificationReport",
    "UnknownBearing",
    "TooLargeForOracle",
    "candidate_set",
    "support_operator",
    "greatest_fixpoint",
    "biological_functions",
    "artifactual_functions",
    "brute_force_biological",
    "classify",
    "explain",
]

CLOSED_WORLD = "closed-world"
OPEN_WORLD = "open-world"
ORACLE_LIMIT = 20


class Label(str, enum.Enum):
    BIOLOGICAL = "BiologicalFunction"
    ARTIFACTUAL = "ArtifactualFunction"
    BOTH = "BothFunction"
    ROLE = "Role"
    UNDETERMINED = "Undetermined"

    def __str__(self) -> str:
        return self.value

    @property
    def is_function(self) -> bool:
        return self in (Label.BIOLOGICAL, Label.ARTIFACTUAL, Label.BOTH)


class UnknownBearing(KeyError):
    pass


class TooLargeForOracle(ValueError):
    pass


@dataclass(frozen=True)
class ClassifyParams:
    """Classification knobs.

    ``theta`` is the prevalence threshold: a bearing is prevalent when its
    prevalence is strictly greater than ``theta``.
    """

    theta: float = 0.5
    mode: str = CLOSED_WORLD
    assert_disjoint: bool = False

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if self.mode not in (CLOSED_WORLD, OPEN_WORLD):
            raise ValueError(f"mode must be {CLOSED_WORLD!r} or {OPEN_WORLD!r}, got {self.mode!r}")


@dataclass(frozen=True)
class Check:
    """One condition evaluated for a bearing.

    ``rule`` names the rule that fired (on pass) or the failure reason
    (``non-organismal``, ``drop-out``, ``drop-in``, ``no-design``).
    """

    condition: str
    passed: bool
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"[{mark}] {self.condition}: {self.rule}{tail}"


@dataclass(frozen=True)
class ExplanationTrace:
    bearing: Bearing
    label: Label
    checks: tuple[Check, ...]
    # (structure, realizable) keys; starts and ends at the explained bearing
    support_chain: tuple[tuple[str, str], ...] = ()
    unknowns: tuple[str, ...] = ()

    @property
    def failed_rules(self) -> list[str]:
        return [c.rule for c in self.checks if not c.passed]

    @property
    def summary(self) -> str:
        if self.label is Label.UNDETERMINED:
            return "undetermined:" + ",".join(self.unknowns)
        if self.label.is_function:
            return "+".join(c.rule for c in self.checks if c.passed and c.rule in ("support", "design-match"))
        return ",".join(self.failed_rules)

    def render(self) -> str:
        b = self.bearing
        lines = [f"{b.structure} / {b.realizable}: {self.label.value}"]
        lines += [f"  {c}" for c in self.checks]
        if self.support_chain:
            chain = " -> ".join(f"{s}/{r}" for s, r in self.support_chain)
            lines.append(f"  support chain: {chain}")
        if self.unknowns:
            lines.append(f"  missing information: {', '.join(self.unknowns)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Conflict:
    structure: str
    realizable: str
    inferred: Label

    def __str__(self) -> str:
        return f"asserted function ({self.structure}, {self.realizable}) but inferred {self.inferred.value}"


@dataclass(frozen=True)
class ClassificationReport:
    labels: Mapping[tuple[str, str], Label]
    traces: Mapping[tuple[str, str], ExplanationTrace] = field(repr=False)
    conflicts: tuple[Conflict, ...] = ()
    violations: tuple[str, ...] = ()
    iterations: int = 0
    params: ClassifyParams = ClassifyParams()

    def __len__(self) -> int:
        return len(self.labels)

    def label(self, structure: str, realizable: str) -> Label:
        return self.labels[(structure, realizable)]

    def rows(self) -> list[tuple[str, str, Label, str]]:
        return [(s, r, self.labels[(s, r)], self.traces[(s, r)].summary) for s, r in sorted(self.labels)]


def _prevalent(b: Bearing, theta: float) -> bool:
    return b.prevalence is not None and b.prevalence > theta


def candidate_set(kb: KnowledgeBase, params: ClassifyParams = ClassifyParams()) -> set[Bearing]:
    """Organismal bearings whose prevalence exceeds ``params.theta``.

    Bearings with unknown prevalence are never candidates; in open-world
    mode :func:`classify` reports them as undetermined instead of roles.
    """
    structures = kb.structure_by_id
    return {b for b in kb.bearings if structures[b.structure].organismal and _prevalent(b, params.theta)}


def _bucket(kb: KnowledgeBase, b: Bearing) -> tuple[frozenset[str], str]:
    return (kb.groups[b.structure], b.realizable)


def _species_present(kb: KnowledgeBase, s: Iterable[Bearing]) -> dict:
    present: dict = defaultdict(set)
    for b in s:
        present[_bucket(kb, b)].add(kb.structure_by_id[b.structure].species)
    return present


def _support(kb: KnowledgeBase, candidates: Iterable[Bearing], s: Iterable[Bearing]) -> set[Bearing]:
    present = _species_present(kb, s)
    out = set()
    for b in candidates:
        species_here = present.get(_bucket(kb, b))
        if species_here and not kb.related[kb.structure_by_id[b.structure].species].isdisjoint(species_here):
            out.add(b)
    return out


def support_operator(
    kb: KnowledgeBase, s: Iterable[Bearing], params: ClassifyParams = ClassifyParams()
) -> set[Bearing]:
    """Candidates supported by some member of ``s``.

    A candidate is supported when a bearing in ``s`` carries the same
    realizable on a homologous structure of a distinct, closely related
    species.
    """
    return _support(kb, candidate_set(kb, params), s)


def greatest_fixpoint(
    kb: KnowledgeBase, params: ClassifyParams = ClassifyParams()
) -> tuple[frozenset[Bearing], int]:
    """Iterate the support operator down from the candidate set.

    Returns the limit and the number of rounds that removed at least one
    bearing (always at most the candidate count).
    """
    candidates = candidate_set(kb, params)
    current = candidates
    shrinks = 0
    while True:
        nxt = _support(kb, current, current)
        if nxt == current:
            return frozenset(current), shrinks
        shrinks += 1
        current = nxt


def biological_functions(kb: KnowledgeBase, params: ClassifyParams = ClassifyParams()) -> frozenset[Bearing]:
    return greatest_fixpoint(kb, params)[0]


def artifactual_functions(kb: KnowledgeBase) -> set[Bearing]:
    """Bearings whose structure was designed for the realizing process."""
    out = set()
    for b in kb.bearings:
        process = kb.realized_by.get(b.realizable)
        if process is not None and process in kb.purposes.get(b.structure, ()):
            out.add(b)
    return out


def _pair_supports(kb: KnowledgeBase, b: Bearing, other: Bearing) -> bool:
    if other.realizable != b.realizable:
        return False
    if other.structure not in homology_group(kb, b.structure):
        return False
    sb, so = kb.species_of(b.structure), kb.species_of(other.structure)
    return sb != so and closely_related(kb, sb, so)


def brute_force_biological(kb: KnowledgeBase, params: ClassifyParams = ClassifyParams()) -> set[Bearing]:
    """Union of every post-fixpoint of the support operator, by enumeration.

    Exponential in the candidate count; a test oracle only. The support
    relation is recomputed pairwise from the public lookups, independently
    of the bucketed operator used by :func:`greatest_fixpoint`.
    """
    cands = sorted(candidate_set(kb, params), key=lambda b: b.key)
    n = len(cands)
    if n > ORACLE_LIMIT:
        raise TooLargeForOracle(f"{n} candidates exceeds the oracle limit of {ORACLE_LIMIT}")
    supporters = [
        sum(1 << j for j, other in enumerate(cands) if _pair_supports(kb, b, other)) for b in cands
    ]
    union = 0
    for subset in range(1 << n):
        if all(supporters[i] & subset for i in range(n) if subset >> i & 1):
            union |= subset
    return {cands[i] for i in range(n) if union >> i & 1}


class _Explainer:
    """Shared state for building traces of many bearings of one KB."""

    def __init__(self, kb: KnowledgeBase, params: ClassifyParams):
        self.kb = kb
        self.params = params
        self.bio, self.iterations = greatest_fixpoint(kb, params)
        self.art = artifactual_functions(kb)
        self.bio_by_bucket: dict = defaultdict(list)
        for b in sorted(self.bio, key=lambda b: b.key):
            self.bio_by_bucket[_bucket(kb, b)].append(b)

    def supporter(self, b: Bearing) -> Bearing:
        kb = self.kb
        related = kb.related[kb.species_of(b.structure)]
        for other in self.bio_by_bucket[_bucket(kb, b)]:
            if kb.species_of(other.structure) in related:
                return other
        raise AssertionError(f"{b.key} is in the fixpoint without a supporter")

    def trace(self, b: Bearing) -> ExplanationTrace:
        kb, theta = self.kb, self.params.theta
        structure = kb.structure_by_id[b.structure]
        checks: list[Check] = []
        unknowns: list[str] = []
        chain: tuple = ()

        if not structure.organismal:
            checks.append(Check("organismal", False, "non-organismal", structure.category))
        else:
            checks.append(Check("organismal", True, "organismal", f"{structure.category} of {structure.species}"))
            if b.prevalence is None:
                checks.append(Check("prevalent", False, "drop-out", "prevalence unknown"))
                unknowns.append("unknown-prevalence")
            elif b.prevalence <= theta:
                checks.append(Check("prevalent", False, "drop-out", f"{b.prevalence:g} <= {theta:g}"))
            else:
                checks.append(Check("prevalent", True, "prevalent", f"{b.prevalence:g} > {theta:g}"))
                if b in self.bio:
                    other = self.supporter(b)
                    chain = (b.key, other.key, b.key)
                    checks.append(
                        Check("cross-species support", True, "support",
                              f"{other.structure} in {kb.species_of(other.structure)}")
                    )
                else:
                    checks.append(
                        Check("cross-species support", False, "drop-in",
                              "no homologous bearer in a closely related species")
                    )
                    if not kb.related[structure.species]:
                        unknowns.append("no-relatedness-data")

        process = kb.realized_by.get(b.realizable)
        if b in self.art:
            checks.append(Check("design match", True, "design-match", f"designed for {process}"))
        elif process is None:
            checks.append(Check("design match", False, "no-design", "realizable has no realizing process"))
            unknowns.append("no-realization-link")
        else:
            checks.append(Check("design match", False, "no-design", f"not designed for {process}"))

        bio, art = b in self.bio, b in self.art
        if bio and art:
            label = Label.BOTH
        elif bio:
            label = Label.BIOLOGICAL
        elif art:
            label = Label.ARTIFACTUAL
        elif self.params.mode == OPEN_WORLD and unknowns:
            label = Label.UNDETERMINED
        else:
            label = Label.ROLE
        if label.is_function:
            unknowns = []
        return ExplanationTrace(b, label, tuple(checks), chain, tuple(unknowns))


def classify(kb: KnowledgeBase, params: ClassifyParams = ClassifyParams()) -> ClassificationReport:
    """Label every bearing of ``kb``.

    Conflicts (an asserted function inferred as a role) and disjointness
    violations are recorded in the report rather than raised.
    """
    ex = _Explainer(kb, params)
    traces = {b.key: ex.trace(b) for b in kb.bearings}
    labels = {k: t.label for k, t in traces.items()}
    conflicts = tuple(
        Conflict(fa.structure, fa.realizable, labels[(fa.structure, fa.realizable)])
        for fa in kb.function_assertions
        if labels[(fa.structure, fa.realizable)] is Label.ROLE
    )
    violations: tuple[str, ...] = ()
    if params.assert_disjoint:
        violations = tuple(
            f"({s}, {r}) is both BiologicalFunction and ArtifactualFunction under asserted disjointness"
            for (s, r), lab in sorted(labels.items())
            if lab is Label.BOTH
        )
    return ClassificationReport(labels, traces, conflicts, violations, ex.iterations, params)


def explain(
    kb: KnowledgeBase, structure_id: str, realizable_id: str, params: ClassifyParams = ClassifyParams()
) -> ExplanationTrace:
    b = kb.bearing_by_key.get((structure_id, realizable_id))
    if b is None:
        raise UnknownBearing(f"no bearing ({structure_id}, {realizable_id})")
    return _Explainer(kb, params).trace(b)
