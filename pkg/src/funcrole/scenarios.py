"""Built-in worked examples with their expected classifications.

Each scenario's knowledge base ships as a native ``.kb`` file under
``funcrole/data/scenarios`` so it can also be fed to the command line.
Prevalence values in those files are modelling choices; only which side of
the 0.5 threshold they fall on matters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .inference import ClassifyParams, Label, classify
from .kb import KBError, KnowledgeBase, build_kb
from .obo_io import KBSyntaxError, parse_native

__all__ = [
    "Scenario",
    "ScenarioError",
    "ExpectationResult",
    "builtin_scenarios",
    "get_scenario",
    "scenario_path",
    "run_scenario",
    "gene_expression_verdict",
    "rejected_definition_contrast",
]

B, A, BOTH, R = Label.BIOLOGICAL, Label.ARTIFACTUAL, Label.BOTH, Label.ROLE


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    kb_source: str
    expectations: tuple[tuple[str, str, Label], ...]
    params: ClassifyParams = field(default_factory=ClassifyParams)
    description: str = ""

    def build(self) -> KnowledgeBase:
        try:
            return build_kb(parse_native(self.kb_source).records)
        except (KBSyntaxError, KBError) as e:
            raise ScenarioError(f"scenario {self.name!r}: {e}") from e


@dataclass(frozen=True)
class ExpectationResult:
    structure: str
    realizable: str
    expected: Label
    actual: Label | None

    @property
    def passed(self) -> bool:
        return self.expected is self.actual


_EXPECTATIONS: dict[str, tuple[str, list[tuple[str, str, Label]]]] = {
    "soles": (
        "foot soles by descent, shoe soles by design",
        [
            ("human_foot_sole", "shock_resistance", B),
            ("chimp_foot_sole", "shock_resistance", B),
            ("shoe_sole", "shock_resistance", A),
        ],
    ),
    "tumour": (
        "a tumour has no homologs and so no function",
        [("tumour", "growing", R)],
    ),
    "male_ant": (
        "whole organisms get functions from related organisms, extinct ones included",
        [
            ("male_ant", "drone_behaviour", B),
            ("male_polyctena", "drone_behaviour", B),
            ("male_fossil", "drone_behaviour", B),
        ],
    ),
    "hand_walking": (
        "drop-out: hand walking is a role in humans, a function in other apes",
        [
            ("human_hand", "walking_on", R),
            ("chimp_hand", "walking_on", B),
            ("gorilla_hand", "walking_on", B),
            ("human_hand", "shock_resistance", R),
            ("chimp_hand", "shock_resistance", B),
        ],
    ),
    "larynx_speech": (
        "drop-in: speech is unique to humans and so a role",
        [
            ("human_larynx", "speech", R),
            ("human_larynx", "vocalisation", B),
            ("chimp_larynx", "vocalisation", B),
        ],
    ),
    "phone_fingers": (
        "within-species prevalence alone does not make a function",
        [
            ("human_finger", "phone_operation", R),
            ("human_finger", "grasping", B),
        ],
    ),
    "hammer": (
        "design determines the artifactual function",
        [
            ("hammer", "to_hit", A),
            ("hammer", "to_hammer_nails", R),
            ("nail_hammer", "to_hammer_nails", A),
        ],
    ),
    "synthetic_bacterium": (
        "designed and homologous: both kinds of function at once",
        [
            ("synthetic_colony", "toxin_detection", BOTH),
            ("wild_colony", "toxin_detection", B),
        ],
    ),
    "s35_label": (
        "a manufactured label carries a function, a spilled isotope a role",
        [
            ("s35_ctp", "label_capability", A),
            ("tritiated_water", "label_capability", R),
        ],
    ),
    "reference_substance": (
        "manufactured references carry functions, ad hoc references roles",
        [
            ("lambda_hindiii", "reference_capability", A),
            ("calibration_standard", "reference_capability", A),
            ("untreated_sample", "reference_capability", R),
        ],
    ),
    "obi_table1": (
        "undesigned generic bearers of OBI functions are roles",
        [
            ("human", "perturb", R),
            ("electroporator", "perturb", A),
            ("computer", "consume_data", R),
            ("data_sink", "consume_data", A),
            ("compost_heap", "heat", R),
            ("heat_block", "heat", A),
            ("distant_galaxy", "magnify", R),
            ("microscope", "magnify", A),
        ],
    ),
}


def scenario_path(name: str):
    """Traversable for the bundled ``<name>.kb`` file."""
    return resources.files("funcrole") / "data" / "scenarios" / f"{name}.kb"


def builtin_scenarios() -> list[Scenario]:
    out = []
    for name, (description, expectations) in _EXPECTATIONS.items():
        out.append(
            Scenario(
                name=name,
                kb_source=scenario_path(name).read_text(encoding="utf-8"),
                expectations=tuple(expectations),
                description=description,
            )
        )
    return out


def get_scenario(name: str) -> Scenario:
    for s in builtin_scenarios():
        if s.name == name:
            return s
    raise KeyError(name)


def run_scenario(s: Scenario) -> list[ExpectationResult]:
    """Classify the scenario KB and compare with every expectation."""
    kb = s.build()
    report = classify(kb, s.params)
    return [
        ExpectationResult(st, rz, expected, report.labels.get((st, rz)))
        for st, rz, expected in s.expectations
    ]


def gene_expression_verdict(kb: KnowledgeBase, structure_id: str) -> bool:
    """Whether the older gene-expression definition would grant a function.

    That definition requires the bearer to be part of an organism and to owe
    its structure to coordinated gene expression. Every organismal structure
    here is taken to satisfy the second clause, so only organism parts pass.
    """
    return kb.structure_by_id[structure_id].category == "organism-part"


def rejected_definition_contrast() -> list[tuple[str, str, bool, Label]]:
    """Where the gene-expression definition and homology-based inference part ways.

    Returns ``(structure, realizable, old_verdict, label)`` for the tumour
    and male ant bearings: the tumour passes the old test yet is a role, the
    male ant fails it yet has a biological function.
    """
    out = []
    for name, st, rz in (("tumour", "tumour", "growing"), ("male_ant", "male_ant", "drone_behaviour")):
        kb = get_scenario(name).build()
        out.append((st, rz, gene_expression_verdict(kb, st), classify(kb).label(st, rz)))
    return out
