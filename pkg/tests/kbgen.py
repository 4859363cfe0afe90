"""Random knowledge-base generator shared by property and acceptance tests."""

from __future__ import annotations

import random

from funcrole.kb import (
    Bearing,
    DesignAssertion,
    FunctionAssertion,
    HomologyAssertion,
    ProcessKind,
    RealizableKind,
    RealizationLink,
    RelatednessAssertion,
    Species,
    Structure,
)

PREVALENCES = (0.0, 0.2, 0.5, 0.51, 0.8, 1.0)
HIGH_PREVALENCES = (0.5, 0.51, 0.8, 0.9, 1.0)


def random_records(
    rng: random.Random,
    *,
    max_species: int = 4,
    max_structures: int = 7,
    max_realizables: int = 3,
    max_bearings: int = 12,
    p_missing_prevalence: float = 0.0,
    p_unlinked_realizable: float = 0.0,
    dense: bool = False,
) -> list:
    """Records for a small valid KB with at most ``max_bearings`` bearings.

    Prevalence values are drawn from a grid that includes the default
    threshold itself, so strict-vs-non-strict mistakes show up. ``dense``
    KBs are mostly organismal, well connected and highly prevalent, which
    pushes the candidate count towards ``max_bearings``.
    """
    p_organismal, p_related, p_homolog = (0.95, 0.7, 0.6) if dense else (0.75, 0.5, 0.35)
    prevalences = HIGH_PREVALENCES if dense else PREVALENCES
    if dense:
        max_structures, max_realizables = max(max_structures, 8), min(max_realizables, 2)
    species = [f"sp{i}" for i in range(rng.randint(1, max_species))]
    records: list = [Species(s, extant=rng.random() < 0.8) for s in species]
    for i, a in enumerate(species):
        for b in species[i + 1:]:
            if rng.random() < p_related:
                records.append(RelatednessAssertion(a, b))

    structures = []
    organismal = []
    for i in range(rng.randint(1, max_structures)):
        sid = f"st{i}"
        if rng.random() < p_organismal:
            cat = rng.choice(("organism-part", "whole-organism"))
            records.append(Structure(sid, cat, rng.choice(species)))
            organismal.append(sid)
        else:
            records.append(Structure(sid, rng.choice(("artifact", "other"))))
        structures.append(sid)

    for i, a in enumerate(organismal):
        for b in organismal[i + 1:]:
            if rng.random() < p_homolog:
                records.append(HomologyAssertion(a, b))

    realizables = [f"rz{i}" for i in range(rng.randint(1, max_realizables))]
    processes = [f"pr{i}" for i in range(len(realizables))]
    records += [RealizableKind(r) for r in realizables]
    records += [ProcessKind(p) for p in processes]
    for r, p in zip(realizables, processes):
        if rng.random() >= p_unlinked_realizable:
            records.append(RealizationLink(r, p))

    pairs = [(s, r) for s in structures for r in realizables]
    rng.shuffle(pairs)
    bearings = []
    for s, r in pairs[: rng.randint(max_bearings // 2 if dense else 0, max_bearings)]:
        prev = None
        if s in organismal and rng.random() >= p_missing_prevalence:
            prev = rng.choice(prevalences)
        bearings.append(Bearing(s, r, prev))
    records += bearings

    for s in structures:
        if rng.random() < 0.3:
            records.append(DesignAssertion(s, rng.choice(processes)))
    for b in bearings:
        if rng.random() < 0.1:
            records.append(FunctionAssertion(b.structure, b.realizable))
    return records


def large_records(
    n_bearings: int = 10_000, n_homologies: int = 50_000, seed: int = 0
) -> list:
    """Scale-test KB: ``n_bearings`` organismal bearings, one structure each."""
    rng = random.Random(seed)
    n_species = 200
    species = [f"sp{i}" for i in range(n_species)]
    records: list = [Species(s) for s in species]
    for i in range(n_species):
        for d in (1, 2, 3):
            records.append(RelatednessAssertion(species[i], species[(i + d) % n_species]))
    realizables = [f"rz{i}" for i in range(20)]
    records += [RealizableKind(r) for r in realizables]
    records += [ProcessKind(f"pr{i}") for i in range(20)]
    records += [RealizationLink(r, f"pr{i}") for i, r in enumerate(realizables)]
    structures = [f"st{i}" for i in range(n_bearings)]
    for i, s in enumerate(structures):
        records.append(Structure(s, "organism-part", species[i % n_species]))
        # runs of 5 consecutive structures share a realizable and have related species
        records.append(Bearing(s, realizables[(i // 5) % len(realizables)], rng.choice(PREVALENCES)))
    # homologies stay inside blocks of 100 structures, so groups are large but bounded
    seen = set()
    while len(seen) < n_homologies:
        block = rng.randrange(n_bearings // 100) * 100
        a, b = rng.sample(range(block, block + 100), 2)
        if (a, b) not in seen and (b, a) not in seen:
            seen.add((a, b))
    records += [HomologyAssertion(structures[a], structures[b]) for a, b in seen]
    return records
