"""Domain vocabulary and the validated, immutable knowledge base.

A knowledge base is built once from a flat list of declaration and
assertion records (``build_kb``). Construction validates every reference,
canonicalises the record order and derives two lookups used by inference:

* the homology partition over organismal structures, and
* a symmetric, irreflexive relatedness table over species.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Union

__all__ = [
    "ORGANISMAL",
    "CATEGORIES",
    "Species",
    "Structure",
    "RealizableKind",
    "ProcessKind",
    "Bearing",
    "HomologyAssertion",
    "RelatednessAssertion",
    "DesignAssertion",
    "RealizationLink",
    "FunctionAssertion",
    "Record",
    "KnowledgeBase",
    "KBError",
    "DuplicateId",
    "DanglingReference",
    "SpeciesOnArtifact",
    "MissingSpeciesOnOrganismal",
    "PrevalenceOutOfRange",
    "PrevalenceOnNonOrganismal",
    "SelfHomology",
    "NonOrganismalHomology",
    "SelfRelatedness",
    "DuplicateRealizationLink",
    "InvalidCategory",
    "UnknownStructure",
    "UnknownSpecies",
    "build_kb",
    "homology_group",
    "closely_related",
]

CATEGORIES = ("organism-part", "whole-organism", "artifact", "other")
ORGANISMAL = frozenset({"organism-part", "whole-organism"})


class KBError(ValueError):
    """Base class for knowledge base validation failures."""


class DuplicateId(KBError):
    pass


class DanglingReference(KBError):
    pass


class SpeciesOnArtifact(KBError):
    pass


class MissingSpeciesOnOrganismal(KBError):
    pass


class PrevalenceOutOfRange(KBError):
    pass


class PrevalenceOnNonOrganismal(KBError):
    pass


class SelfHomology(KBError):
    pass


class NonOrganismalHomology(KBError):
    pass


class SelfRelatedness(KBError):
    pass


class DuplicateRealizationLink(KBError):
    pass


class InvalidCategory(KBError):
    pass


class UnknownStructure(KBError, KeyError):
    pass


class UnknownSpecies(KBError, KeyError):
    pass


@dataclass(frozen=True, order=True)
class Species:
    id: str
    name: str = ""
    extant: bool = True


@dataclass(frozen=True, order=True)
class Structure:
    id: str
    category: str
    species: str | None = None
    name: str = ""

    @property
    def organismal(self) -> bool:
        return self.category in ORGANISMAL


@dataclass(frozen=True, order=True)
class RealizableKind:
    id: str
    name: str = ""


@dataclass(frozen=True, order=True)
class ProcessKind:
    id: str
    name: str = ""


@dataclass(frozen=True, order=True)
class Bearing:
    """A structure bearing a realizable.

    ``prevalence`` is the fraction of individuals of the structure's species
    whose instance of the structure bears the realizable. It is ``None`` when
    unknown, and must be ``None`` for artifacts and other non-organismal
    structures.
    """

    structure: str
    realizable: str
    prevalence: float | None = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.structure, self.realizable)


@dataclass(frozen=True, order=True)
class HomologyAssertion:
    left: str
    right: str


@dataclass(frozen=True, order=True)
class RelatednessAssertion:
    a: str
    b: str


@dataclass(frozen=True, order=True)
class DesignAssertion:
    designee: str
    purpose: str


@dataclass(frozen=True, order=True)
class RealizationLink:
    realizable: str
    process: str


@dataclass(frozen=True, order=True)
class FunctionAssertion:
    structure: str
    realizable: str


Record = Union[
    Species,
    Structure,
    RealizableKind,
    ProcessKind,
    Bearing,
    HomologyAssertion,
    RelatednessAssertion,
    DesignAssertion,
    RealizationLink,
    FunctionAssertion,
]


def _find(parent: dict[str, str], x: str) -> str:
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _homology_partition(
    structures: Iterable[str], pairs: Iterable[HomologyAssertion]
) -> dict[str, frozenset[str]]:
    parent = {s: s for s in structures}
    size = dict.fromkeys(parent, 1)
    for h in pairs:
        a, b = _find(parent, h.left), _find(parent, h.right)
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
    members: dict[str, set[str]] = defaultdict(set)
    for s in parent:
        members[_find(parent, s)].add(s)
    groups: dict[str, frozenset[str]] = {}
    for group in members.values():
        frozen = frozenset(group)
        for s in frozen:
            groups[s] = frozen
    return groups


@dataclass(frozen=True)
class KnowledgeBase:
    """Validated, immutable knowledge base.

    Collections are tuples in canonical (sorted, de-duplicated) order, so two
    knowledge bases built from permutations of the same records compare equal.
    Use :func:`build_kb` rather than constructing this directly.
    """

    species: tuple[Species, ...] = ()
    structures: tuple[Structure, ...] = ()
    realizables: tuple[RealizableKind, ...] = ()
    processes: tuple[ProcessKind, ...] = ()
    bearings: tuple[Bearing, ...] = ()
    homologies: tuple[HomologyAssertion, ...] = ()
    relatedness: tuple[RelatednessAssertion, ...] = ()
    designs: tuple[DesignAssertion, ...] = ()
    realizations: tuple[RealizationLink, ...] = ()
    function_assertions: tuple[FunctionAssertion, ...] = ()

    # derived lookups; excluded from equality
    species_by_id: Mapping[str, Species] = field(default_factory=dict, compare=False, repr=False)
    structure_by_id: Mapping[str, Structure] = field(default_factory=dict, compare=False, repr=False)
    realizable_by_id: Mapping[str, RealizableKind] = field(default_factory=dict, compare=False, repr=False)
    process_by_id: Mapping[str, ProcessKind] = field(default_factory=dict, compare=False, repr=False)
    bearing_by_key: Mapping[tuple[str, str], Bearing] = field(default_factory=dict, compare=False, repr=False)
    groups: Mapping[str, frozenset[str]] = field(default_factory=dict, compare=False, repr=False)
    related: Mapping[str, frozenset[str]] = field(default_factory=dict, compare=False, repr=False)
    realized_by: Mapping[str, str] = field(default_factory=dict, compare=False, repr=False)
    purposes: Mapping[str, frozenset[str]] = field(default_factory=dict, compare=False, repr=False)

    def species_of(self, structure_id: str) -> str | None:
        return self.structure_by_id[structure_id].species

    def homology_groups(self) -> list[frozenset[str]]:
        """Distinct homology groups, ordered by their smallest member."""
        seen = {id(g): g for g in self.groups.values()}
        return sorted(seen.values(), key=min)

    def records(self) -> list[Record]:
        """All primary records in canonical order."""
        return [
            *self.species,
            *self.relatedness,
            *self.structures,
            *self.realizables,
            *self.processes,
            *self.realizations,
            *self.bearings,
            *self.designs,
            *self.homologies,
            *self.function_assertions,
        ]


def _unique(items: Iterable, what: str, key=lambda x: x.id) -> dict:
    out: dict = {}
    for item in items:
        k = key(item)
        if k in out:
            raise DuplicateId(f"duplicate {what} {k!r}")
        out[k] = item
    return out


def _require(table: Mapping, ref: str, what: str, context: str) -> None:
    if ref not in table:
        raise DanglingReference(f"{context}: unknown {what} {ref!r}")


def build_kb(records: Iterable[Record]) -> KnowledgeBase:
    """Validate ``records`` and return an immutable :class:`KnowledgeBase`.

    Raises a :class:`KBError` subclass on the first invariant violation.
    Duplicate homology, relatedness, design and function assertions are
    collapsed; duplicate declarations are errors.
    """
    by_type: dict[type, list] = defaultdict(list)
    for r in records:
        by_type[type(r)].append(r)

    species = _unique(by_type[Species], "species")
    structures = _unique(by_type[Structure], "structure")
    realizables = _unique(by_type[RealizableKind], "realizable")
    processes = _unique(by_type[ProcessKind], "process")

    for s in structures.values():
        if s.category not in CATEGORIES:
            raise InvalidCategory(f"structure {s.id!r}: bad category {s.category!r}")
        if s.organismal:
            if s.species is None:
                raise MissingSpeciesOnOrganismal(
                    f"structure {s.id!r} is {s.category} but names no species"
                )
            _require(species, s.species, "species", f"structure {s.id!r}")
        elif s.species is not None:
            raise SpeciesOnArtifact(f"structure {s.id!r} is {s.category} but names species {s.species!r}")

    bearings = _unique(by_type[Bearing], "bearing", key=lambda b: b.key)
    for b in bearings.values():
        ctx = f"bearing ({b.structure}, {b.realizable})"
        _require(structures, b.structure, "structure", ctx)
        _require(realizables, b.realizable, "realizable", ctx)
        if b.prevalence is not None:
            if not 0.0 <= b.prevalence <= 1.0:
                raise PrevalenceOutOfRange(f"{ctx}: prevalence {b.prevalence} not in [0, 1]")
            if not structures[b.structure].organismal:
                raise PrevalenceOnNonOrganismal(f"{ctx}: prevalence given for non-organismal structure")

    homologies: set[HomologyAssertion] = set()
    for h in by_type[HomologyAssertion]:
        ctx = f"homolog ({h.left}, {h.right})"
        _require(structures, h.left, "structure", ctx)
        _require(structures, h.right, "structure", ctx)
        if h.left == h.right:
            raise SelfHomology(f"{ctx}: a structure cannot be its own homolog")
        for s in (h.left, h.right):
            if not structures[s].organismal:
                raise NonOrganismalHomology(f"{ctx}: {s!r} is not organismal")
        homologies.add(HomologyAssertion(*sorted((h.left, h.right))))

    relatedness: set[RelatednessAssertion] = set()
    for r in by_type[RelatednessAssertion]:
        ctx = f"related ({r.a}, {r.b})"
        _require(species, r.a, "species", ctx)
        _require(species, r.b, "species", ctx)
        if r.a == r.b:
            raise SelfRelatedness(f"{ctx}: a species is not related to itself")
        relatedness.add(RelatednessAssertion(*sorted((r.a, r.b))))

    designs: set[DesignAssertion] = set()
    for d in by_type[DesignAssertion]:
        ctx = f"design ({d.designee}, {d.purpose})"
        _require(structures, d.designee, "structure", ctx)
        _require(processes, d.purpose, "process", ctx)
        designs.add(d)

    realized_by: dict[str, str] = {}
    for link in by_type[RealizationLink]:
        ctx = f"realizes ({link.realizable}, {link.process})"
        _require(realizables, link.realizable, "realizable", ctx)
        _require(processes, link.process, "process", ctx)
        if link.realizable in realized_by:
            raise DuplicateRealizationLink(f"{ctx}: realizable already linked to {realized_by[link.realizable]!r}")
        realized_by[link.realizable] = link.process

    functions: set[FunctionAssertion] = set()
    for fa in by_type[FunctionAssertion]:
        if (fa.structure, fa.realizable) not in bearings:
            raise DanglingReference(
                f"asserted_function ({fa.structure}, {fa.realizable}): no such bearing"
            )
        functions.add(fa)

    related: dict[str, set[str]] = {s: set() for s in species}
    for r in relatedness:
        related[r.a].add(r.b)
        related[r.b].add(r.a)

    purposes: dict[str, set[str]] = defaultdict(set)
    for d in designs:
        purposes[d.designee].add(d.purpose)

    organismal = sorted(s.id for s in structures.values() if s.organismal)
    return KnowledgeBase(
        species=tuple(sorted(species.values())),
        structures=tuple(sorted(structures.values())),
        realizables=tuple(sorted(realizables.values())),
        processes=tuple(sorted(processes.values())),
        bearings=tuple(sorted(bearings.values(), key=lambda b: b.key)),
        homologies=tuple(sorted(homologies)),
        relatedness=tuple(sorted(relatedness)),
        designs=tuple(sorted(designs)),
        realizations=tuple(sorted(RealizationLink(r, p) for r, p in realized_by.items())),
        function_assertions=tuple(sorted(functions)),
        species_by_id=MappingProxyType(species),
        structure_by_id=MappingProxyType(structures),
        realizable_by_id=MappingProxyType(realizables),
        process_by_id=MappingProxyType(processes),
        bearing_by_key=MappingProxyType(bearings),
        groups=MappingProxyType(_homology_partition(organismal, homologies)),
        related=MappingProxyType({k: frozenset(v) for k, v in related.items()}),
        realized_by=MappingProxyType(realized_by),
        purposes=MappingProxyType({k: frozenset(v) for k, v in purposes.items()}),
    )


def homology_group(kb: KnowledgeBase, structure: str | Structure) -> frozenset[str]:
    """Ids of every structure sharing common descent with ``structure``.

    Non-organismal structures have no homologs and get the singleton group.
    """
    sid = structure.id if isinstance(structure, Structure) else structure
    if sid not in kb.structure_by_id:
        raise UnknownStructure(sid)
    return kb.groups.get(sid, frozenset({sid}))


def closely_related(kb: KnowledgeBase, a: str | Species, b: str | Species) -> bool:
    """True iff a relatedness assertion links two distinct species."""
    a_id = a.id if isinstance(a, Species) else a
    b_id = b.id if isinstance(b, Species) else b
    for s in (a_id, b_id):
        if s not in kb.species_by_id:
            raise UnknownSpecies(s)
    return b_id in kb.related[a_id]
