import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from funcrole.inference import ClassifyParams, classify
from funcrole.kb import Bearing, Species, Structure, build_kb
from funcrole.obo_io import (
    UPPER_TERMS,
    KBSyntaxError,
    MissingId,
    OboSyntaxError,
    ReportMismatch,
    export_axiomatisation,
    parse_native,
    parse_obo,
    serialize_native,
    serialize_obo,
    write_report,
)
from funcrole.scenarios import builtin_scenarios, get_scenario

from kbgen import random_records

COMBINED = """
species human
species chimp
species gorilla
related human chimp
related human gorilla
related chimp gorilla
structure human_foot_sole category organism-part in human
structure chimp_foot_sole category organism-part in chimp
structure human_hand category organism-part in human
structure chimp_hand category organism-part in chimp
structure shoe_sole category artifact
structure human_gonad category organism-part in human
structure gorilla_gonad category organism-part in gorilla
homolog human_foot_sole chimp_foot_sole
homolog human_hand chimp_hand
homolog human_gonad gorilla_gonad
realizable shock_resistance name "shock resistance"
realizable to_reproduce
process absorbing_shock
process reproduction
realizes shock_resistance absorbing_shock
realizes to_reproduce reproduction
designed shoe_sole for absorbing_shock
bears human_foot_sole shock_resistance prevalence 0.99
bears chimp_foot_sole shock_resistance prevalence 0.99
bears human_hand shock_resistance prevalence 0.01
bears chimp_hand shock_resistance prevalence 0.95
bears shoe_sole shock_resistance
bears human_gonad to_reproduce prevalence 0.9
bears gorilla_gonad to_reproduce prevalence 0.9
"""


def kb_from(text):
    return build_kb(parse_native(text).records)


class TestParseNative:
    def test_empty(self):
        assert len(parse_native("")) == 0

    def test_two_records(self):
        doc = parse_native("species human extant\nrelated human chimp")
        assert len(doc) == 2 and doc.lines == [1, 2]

    def test_comments_and_blanks(self):
        doc = parse_native("# header\n\nspecies human  # trailing\n   \nrealizable r name \"has # inside\"\n")
        assert doc.lines == [3, 5]
        assert doc.records[1].name == "has # inside"

    def test_extinct(self):
        assert parse_native("species neanderthal extinct").records[0] == Species("neanderthal", extant=False)

    def test_structure_options(self):
        rec = parse_native('structure h category organism-part in human name "human hand"').records[0]
        assert rec == Structure("h", "organism-part", "human", "human hand")

    def test_prevalence(self):
        assert parse_native("bears hand shock prevalence 0.25").records[0] == Bearing("hand", "shock", 0.25)

    @pytest.mark.parametrize(
        "text, line",
        [
            ("bears hand shock prevalence 1.5", 1),
            ("bears hand shock prevalence nan", 1),
            ("species a\nbears hand shock prevalence abc", 2),
            ("species a b c", 1),
            ("species a sometimes", 1),
            ("flies bird", 1),
            ("related a", 1),
            ("homolog a b c", 1),
            ("structure s category fungus", 1),
            ("structure s kind artifact", 1),
            ("structure s category artifact in", 1),
            ("structure s category artifact colour red", 1),
            ("designed hammer to hitting", 1),
            ('realizable r name "unterminated', 1),
            ("\n\nbears a", 3),
        ],
    )
    def test_syntax_errors(self, text, line):
        with pytest.raises(KBSyntaxError) as err:
            parse_native(text)
        assert err.value.line == line


class TestSerializeNative:
    def test_empty(self):
        assert serialize_native(build_kb([])) == ""

    @pytest.mark.parametrize("scenario", builtin_scenarios(), ids=lambda s: s.name)
    def test_scenario_round_trip(self, scenario):
        kb = scenario.build()
        text = serialize_native(kb)
        again = kb_from(text)
        assert again == kb
        assert serialize_native(again) == text
        assert classify(again).labels == classify(kb).labels

    def test_quoted_names_survive(self):
        kb = kb_from('realizable r name "a \\"quoted\\" \\\\ name # not a comment"')
        assert kb_from(serialize_native(kb)) == kb

    @settings(max_examples=150, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), shuffle_seed=st.integers(0, 1000))
    def test_canonical_and_round_trip(self, seed, shuffle_seed):
        records = random_records(random.Random(seed), dense=seed % 2 == 0, p_missing_prevalence=0.2)
        shuffled = list(records)
        random.Random(shuffle_seed).shuffle(shuffled)
        kb = build_kb(records)
        text = serialize_native(kb)
        assert serialize_native(build_kb(shuffled)) == text
        again = kb_from(text)
        assert again == kb
        assert again.homology_groups() == kb.homology_groups()
        assert classify(again).labels == classify(kb).labels


OBO_SAMPLE = """format-version: 1.2
ontology: test
remark: sample ! with bang

[Term]
id: X:1
name: function
def: "A function." [PMID:1]
is_a: X:0 ! realizable
relationship: part_of X:9
union_of: X:2
union_of: X:3
synonym: "fn" EXACT []

[Term]
id: X:4
name: label role
is_a: X:5 {source="OBI"} ! reagent role
intersection_of: X:5
intersection_of: realized_in X:6

[Typedef]
id: realized_in
name: realized in

[Instance]
id: i1
instance_of: X:1
"""


class TestParseObo:
    def test_minimal(self):
        doc = parse_obo("[Term]\nid: X:1\nname: function")
        assert [t.id for t in doc.terms] == ["X:1"]
        assert doc.terms[0].name == "function"

    def test_recognised_tags(self):
        doc = parse_obo(OBO_SAMPLE)
        t = doc.term("X:1")
        assert t.union_of == ["X:2", "X:3"]
        assert t.is_a == ["X:0"]
        assert t.relationship == [("part_of", "X:9")]
        assert t.definition == '"A function." [PMID:1]'
        assert doc.term("X:4").is_a == ["X:5"]
        assert doc.term("X:4").intersection_of == ["X:5", "realized_in X:6"]
        assert [td.id for td in doc.typedefs] == ["realized_in"]
        assert ("synonym", '"fn" EXACT []') in t.tags
        assert doc.header[0] == ("format-version", "1.2")

    def test_missing_id(self):
        with pytest.raises(MissingId):
            parse_obo("[Term]\nname: nameless\n")

    @pytest.mark.parametrize(
        "text",
        [
            "[Term]\nid: A\nunion_of: B\n",
            "[Term]\nid: A\n[Term]\nid: A\n",
            "[Term]\nid: A\njust words\n",
            "[Term\nid: A\n",
            "[Term]\nid: A\nrelationship: part_of\n",
        ],
    )
    def test_syntax_errors(self, text):
        with pytest.raises(OboSyntaxError):
            parse_obo(text)

    def test_lossless_reserialization(self):
        doc = parse_obo(OBO_SAMPLE)
        again = parse_obo(serialize_obo(doc))
        assert again.header == doc.header
        assert [(s.kind, s.tags) for s in again.stanzas] == [(s.kind, s.tags) for s in doc.stanzas]
        assert serialize_obo(again) == serialize_obo(doc)


class TestExport:
    def test_empty_kb(self):
        doc = export_axiomatisation(build_kb([]), classify(build_kb([])))
        assert tuple(t.id for t in doc.terms) == UPPER_TERMS

    def test_function_is_union(self):
        doc = export_axiomatisation(build_kb([]), None)
        assert doc.term("Function").union_of == ["BiologicalFunction", "ArtifactualFunction"]

    def test_placement(self):
        kb = kb_from(COMBINED)
        doc = export_axiomatisation(kb, classify(kb))
        assert doc.term("to_reproduce").is_a == ["BiologicalFunction"]
        assert doc.term("shock_resistance").is_a == ["RealizableEntity"]
        assert doc.term("shock_resistance").relationship == [("realized_by_shock_resistance", "absorbing_shock")]
        typedef = next(t for t in doc.typedefs if t.id == "realized_by_shock_resistance")
        assert typedef.is_a == ["realized_by"]

    def test_uniform_role_and_artifactual(self):
        kb = get_scenario("reference_substance").build()
        kb2 = get_scenario("hammer").build()
        assert export_axiomatisation(kb, classify(kb)).term("reference_capability").is_a == ["RealizableEntity"]
        assert export_axiomatisation(kb2, classify(kb2)).term("to_hit").is_a == ["ArtifactualFunction"]
        kb3 = get_scenario("larynx_speech").build()
        assert export_axiomatisation(kb3, classify(kb3)).term("speech").is_a == ["Role"]

    def test_no_report_puts_everything_under_realizable_entity(self):
        kb = kb_from(COMBINED)
        doc = export_axiomatisation(kb, None)
        assert doc.term("to_reproduce").is_a == ["RealizableEntity"]

    def test_disjointness_only_when_asserted(self):
        kb = kb_from(COMBINED)
        plain = export_axiomatisation(kb, classify(kb))
        strict = export_axiomatisation(kb, classify(kb, ClassifyParams(assert_disjoint=True)))
        assert plain.term("Role").values("disjoint_from") == []
        assert strict.term("Role").values("disjoint_from") == ["Function"]

    def test_report_mismatch(self):
        kb = kb_from(COMBINED)
        with pytest.raises(ReportMismatch):
            export_axiomatisation(kb, classify(get_scenario("soles").build()))

    def test_export_parses_back(self):
        kb = kb_from(COMBINED)
        doc = export_axiomatisation(kb, classify(kb))
        again = parse_obo(serialize_obo(doc))
        assert [(s.kind, s.tags) for s in again.stanzas] == [(s.kind, s.tags) for s in doc.stanzas]


class TestWriteReport:
    def test_empty_tsv(self):
        assert write_report(classify(build_kb([])), "tsv") == "structure\trealizable\tlabel\trule\n"

    def test_one_row(self):
        kb = get_scenario("tumour").build()
        lines = write_report(classify(kb), "tsv").splitlines()
        assert lines[1:] == ["tumour\tgrowing\tRole\tdrop-in,no-design"]

    def test_sorted_and_deterministic(self):
        kb = get_scenario("obi_table1").build()
        a = write_report(classify(kb), "tsv")
        assert a == write_report(classify(kb), "tsv")
        rows = [tuple(line.split("\t")[:2]) for line in a.splitlines()[1:]]
        assert rows == sorted(rows)

    def test_json(self):
        kb = get_scenario("soles").build()
        text = write_report(classify(kb), "json")
        assert text == write_report(classify(kb), "json")
        data = json.loads(text)
        assert [d["structure"] for d in data] == ["chimp_foot_sole", "human_foot_sole", "shoe_sole"]
        assert {"structure", "realizable", "label", "rule", "trace"} <= set(data[0])
        assert data[2]["label"] == "ArtifactualFunction" and data[2]["rule"] == "design-match"

    def test_bad_format(self):
        with pytest.raises(ValueError):
            write_report(classify(build_kb([])), "xml")
