"""Parser, validator, and serializer tests for the netlist format."""

import math

import pytest

from sqzsim.components import CavitySpec, LossSpec, OpaSpec
from sqzsim.netlist import (
    ComponentDecl,
    NetlistDocument,
    SignalDecl,
    parse,
    serialize,
    validate,
)

REFERENCE = """\
# squeezed-field injection chain
opa sqz pump_x=0.33 bandwidth=20MHz escape=0.90
loss injection eta=0.8835
cavity fc length=1.21m r_in=0.90 r_end=0.9992 detuning=-10MHz
cavity src length=1.21m r_in=0.90 r_end=0.9992 detuning=10MHz loss_rt=0.01
loss readout eta=0.9215
homodyne hd angle=0 qe=0.93
chain sqz -> injection -> fc -> src -> readout -> hd
signal node=src amplitude=1
"""


def errors_of(result):
    return [d for d in result.diagnostics if d.severity == "error"]


def messages(result):
    return "\n".join(d.message for d in result.diagnostics)


class TestParse:
    def test_reference_chain_parses_clean(self):
        result = parse(REFERENCE)
        assert result.ok, messages(result)
        assert result.diagnostics == ()
        doc = result.document
        assert [c.name for c in doc.components] == [
            "sqz", "injection", "fc", "src", "readout", "hd",
        ]
        assert doc.chain == ("sqz", "injection", "fc", "src", "readout", "hd")
        assert doc.signal == SignalDecl("src", 1.0)

    def test_units_are_normalized_to_si(self):
        doc = parse(REFERENCE).document
        fc = doc.component("fc")
        assert fc.attributes["detuning"] == -1.0e7
        assert fc.attributes["length"] == 1.21
        assert doc.component("sqz").attributes["bandwidth"] == 2.0e7

    def test_value_unit_may_be_space_separated(self):
        text = REFERENCE.replace("length=1.21m", "length=0.00000121e6 m")
        doc = parse(text).document
        assert doc.component("fc").attributes["length"] == 1.21

    def test_degrees_convert_to_radians(self):
        text = REFERENCE.replace("angle=0", "angle=90deg")
        doc = parse(text).document
        assert doc.component("hd").attributes["angle"] == pytest.approx(math.pi / 2)

    def test_empty_file_reports_missing_chain(self):
        result = parse("")
        assert not result.ok
        assert any("missing-chain" in d.message for d in errors_of(result))

    def test_out_of_range_and_missing_attributes_both_reported(self):
        result = parse("cavity fc r_in=1.2\nchain fc\n")
        msgs = messages(result)
        assert not result.ok
        assert "out-of-range" in msgs
        assert "missing-attribute" in msgs

    def test_unknown_kind_with_line_number(self):
        result = parse("mirror m1 r=0.5\nchain m1\n")
        diag = errors_of(result)[0]
        assert "unknown-kind" in diag.message
        assert diag.line == 1

    def test_unknown_attribute(self):
        result = parse(REFERENCE + "loss extra eta=0.5 color=3\n")
        assert any("unknown-attribute" in d.message for d in errors_of(result))

    def test_malformed_number(self):
        result = parse("loss l eta=abc\nchain l\n")
        assert any("malformed-value" in d.message for d in errors_of(result))

    def test_wrong_unit_dimension(self):
        result = parse("cavity fc length=10Hz r_in=0.9 r_end=0.9 detuning=0\nchain fc\n")
        assert any("bad-unit" in d.message for d in errors_of(result))

    def test_unknown_unit(self):
        result = parse("loss l eta=0.5furlong\nchain l\n")
        assert any("bad-unit" in d.message for d in errors_of(result))

    def test_duplicate_name(self):
        text = "loss a eta=0.5\nloss a eta=0.6\nhomodyne hd angle=0 qe=1\nchain a -> hd\n"
        result = parse(text)
        dup = [d for d in errors_of(result) if "duplicate-name" in d.message]
        assert dup and dup[0].line == 2

    def test_duplicate_attribute(self):
        result = parse("loss a eta=0.5 eta=0.6\nchain a\n")
        assert any("duplicate-attribute" in d.message for d in errors_of(result))

    def test_dangling_chain_reference(self):
        result = parse("homodyne hd angle=0 qe=1\nchain ghost -> hd\n")
        assert any("dangling-reference" in d.message for d in errors_of(result))

    def test_chain_must_end_at_homodyne(self):
        result = parse("loss a eta=0.5\nchain a\n")
        assert any("missing-homodyne" in d.message for d in errors_of(result))

    def test_homodyne_only_at_end(self):
        text = (
            "homodyne hd angle=0 qe=1\nloss a eta=0.5\n"
            "chain hd -> a\n"
        )
        result = parse(text)
        assert any(
            "homodyne" in d.message and d.severity == "error"
            for d in result.diagnostics
        )

    def test_opa_must_head_the_chain(self):
        text = (
            "opa sq pump_x=0.3 bandwidth=20MHz escape=0.9\n"
            "loss a eta=0.5\nhomodyne hd angle=0 qe=1\n"
            "chain a -> sq -> hd\n"
        )
        result = parse(text)
        assert any("misplaced-opa" in d.message for d in errors_of(result))

    def test_at_most_one_opa(self):
        text = (
            "opa s1 pump_x=0.3 bandwidth=20MHz escape=0.9\n"
            "opa s2 pump_x=0.3 bandwidth=20MHz escape=0.9\n"
            "homodyne hd angle=0 qe=1\nchain s1 -> hd\n"
        )
        result = parse(text)
        assert any("multiple-opa" in d.message for d in errors_of(result))

    def test_duplicate_chain_rejected(self):
        text = "homodyne hd angle=0 qe=1\nchain hd\nchain hd\n"
        result = parse(text)
        assert any("duplicate-chain" in d.message for d in errors_of(result))

    def test_signal_requires_cavity_node(self):
        text = (
            "loss a eta=0.5\nhomodyne hd angle=0 qe=1\n"
            "chain a -> hd\nsignal node=a amplitude=1\n"
        )
        result = parse(text)
        assert any("bad-signal-node" in d.message for d in errors_of(result))

    def test_unused_component_is_a_warning(self):
        text = "loss a eta=0.5\nhomodyne hd angle=0 qe=1\nchain hd\n"
        result = parse(text)
        assert result.ok
        warnings = [d for d in result.diagnostics if d.severity == "warning"]
        assert warnings and "unused-component" in warnings[0].message

    def test_error_lines_point_at_offending_line(self):
        text = "# comment\nloss good eta=0.5\nloss bad eta=9\nhomodyne hd angle=0 qe=1\nchain good -> bad -> hd\n"
        result = parse(text)
        bad = [d for d in errors_of(result) if "out-of-range" in d.message]
        assert bad and bad[0].line == 3
        assert bad[0].column >= 1

    def test_vacuum_chain_without_opa_is_valid(self):
        result = parse("homodyne hd angle=0 qe=0.93\nchain hd\n")
        assert result.ok

    @pytest.mark.parametrize(
        "text",
        [
            "\x00\x01\x02",
            "🎉🎉🎉",
            "chain",
            "chain ->",
            "= = =",
            "loss\n",
            "cavity\n",
            "signal node= amplitude=",
            "loss l eta=1e999\nchain l\n",
            "a" * 10000,
            "loss l eta=0.5 -> x\nchain l\n",
        ],
    )
    def test_totality_on_hostile_input(self, text):
        result = parse(text)
        assert not result.ok
        assert all(d.line >= 0 and d.column >= 1 for d in result.diagnostics)


class TestValidate:
    def test_reference_pipeline_has_six_stages(self):
        doc = parse(REFERENCE).document
        result = validate(doc)
        assert result.ok, messages(result)
        pipeline = result.pipeline
        assert isinstance(pipeline.source, OpaSpec)
        assert pipeline.source.bandwidth == 2e7
        kinds = [type(s.element) for s in pipeline.stages]
        assert kinds == [LossSpec, CavitySpec, CavitySpec, LossSpec]
        assert pipeline.detector.quantum_efficiency == 0.93
        assert pipeline.signal.node == "src"
        # six stages total: source + four passive elements + detector
        assert 1 + len(pipeline.stages) + 1 == 6

    def test_cavity_models_carry_attributes(self):
        pipeline = validate(parse(REFERENCE).document).pipeline
        src = pipeline.stage_named("src").element
        assert src.detuning == 1e7
        assert src.round_trip_loss == 0.01
        fc = pipeline.stage_named("fc").element
        assert fc.round_trip_loss == 0.0

    def test_programmatic_duplicate_names_detected(self):
        doc = NetlistDocument(
            components=(
                ComponentDecl("loss", "fc", {"eta": 0.5}),
                ComponentDecl("loss", "fc", {"eta": 0.6}),
                ComponentDecl("homodyne", "hd", {"angle": 0.0, "qe": 1.0}),
            ),
            chain=("fc", "hd"),
        )
        result = validate(doc)
        assert not result.ok
        assert any("duplicate-name" in d.message for d in result.diagnostics)

    def test_programmatic_dangling_reference_detected(self):
        doc = NetlistDocument(
            components=(ComponentDecl("homodyne", "hd", {"angle": 0.0, "qe": 1.0}),),
            chain=("ghost", "hd"),
        )
        result = validate(doc)
        assert any("dangling-reference" in d.message for d in result.diagnostics)

    def test_programmatic_range_violations_detected(self):
        doc = NetlistDocument(
            components=(
                ComponentDecl("opa", "sq", {"pump_x": 1.5, "bandwidth": 2e7, "escape": 0.9}),
                ComponentDecl("homodyne", "hd", {"angle": 0.0, "qe": 1.0}),
            ),
            chain=("sq", "hd"),
        )
        result = validate(doc)
        assert any("out-of-range" in d.message for d in result.diagnostics)

    def test_empty_document_reports_missing_chain(self):
        result = validate(NetlistDocument(components=()))
        assert not result.ok
        assert any("missing-chain" in d.message for d in result.diagnostics)


class TestSerialize:
    def test_round_trip_is_structural_identity(self):
        doc = parse(REFERENCE).document
        text = serialize(doc)
        again = parse(text)
        assert again.ok
        assert again.document == doc
        assert serialize(again.document) == text

    def test_keys_emitted_sorted(self):
        doc = parse("cavity x r_end=0.9 detuning=0 length=1m r_in=0.8\n"
                    "homodyne hd angle=0 qe=1\nchain x -> hd\n").document
        line = serialize(doc).splitlines()[0]
        assert line == "cavity x detuning=0Hz length=1m r_end=0.9 r_in=0.8"

    def test_unit_normalization(self):
        doc = parse(
            "cavity x length=0.00000121e6 m r_in=0.9 r_end=0.9 detuning=-10000kHz\n"
            "homodyne hd angle=0 qe=1\nchain x -> hd\n"
        ).document
        line = serialize(doc).splitlines()[0]
        assert "length=1.21m" in line
        assert "detuning=-10MHz" in line

    def test_parse_serialize_parse_is_parse(self):
        # canonical form is a fixed point of parse -> serialize
        result = parse(REFERENCE)
        once = serialize(result.document)
        twice = serialize(parse(once).document)
        assert once == twice
