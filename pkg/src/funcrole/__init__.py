"""Classify realizable entities as biological functions, artifactual functions or roles."""

from .inference import (
    CLOSED_WORLD,
    OPEN_WORLD,
    ClassificationReport,
    ClassifyParams,
    ExplanationTrace,
    Label,
    artifactual_functions,
    biological_functions,
    brute_force_biological,
    candidate_set,
    classify,
    explain,
    greatest_fixpoint,
    support_operator,
)
from .kb import KnowledgeBase, build_kb, closely_related, homology_group
from .obo_io import (
    export_axiomatisation,
    parse_native,
    parse_obo,
    serialize_native,
    serialize_obo,
    write_report,
)
from .scenarios import builtin_scenarios, run_scenario

__version__ = "0.1.0"
