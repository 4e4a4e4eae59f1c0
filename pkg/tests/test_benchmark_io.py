import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soctam.benchmark_io import (
    CoreSpec,
    DesignValidationError,
    ParseError,
    SocDesign,
    bundled_d695,
    bundled_text,
    load_design,
    parse_itc02,
    parse_native,
    parse_power_file,
    serialize_native,
)
from soctam.oracle import random_instance

TWO_CORES = """\
soc tiny
core 1
inputs 5
outputs 3
bidirs 0
scan
patterns 7

core 2
inputs 10
outputs 12
bidirs 2
scan 40 38 12
patterns 100
power 250
"""


def test_d695_has_ten_cores(d695):
    assert d695.core_ids == list(range(1, 11))
    assert sum(c.is_combinational for c in d695.cores) == 2


def test_d695_known_circuits(d695):
    # c6288 and s838 are the easiest to recognize
    assert (d695.core(1).num_inputs, d695.core(1).num_outputs, d695.core(1).num_patterns) == (32, 32, 12)
    assert d695.core(3).scan_chain_lengths == (32,)
    assert d695.core(6).num_patterns == 234


def test_empty_module_list():
    assert parse_itc02("SocName empty\nTotalModules 0\n").cores == ()
    assert parse_native("").cores == ()


def test_native_two_cores_echo_counts():
    d = parse_native(TWO_CORES)
    assert d.name == "tiny"
    c1, c2 = d.cores
    assert (c1.num_inputs, c1.num_outputs, c1.scan_chain_lengths, c1.num_patterns) == (5, 3, (), 7)
    assert (c2.num_bidirs, c2.scan_chain_lengths, c2.power_mw) == (2, (40, 38, 12), 250)


def test_itc02_sums_patterns_and_skips_testless_modules():
    text = """\
SocName 'demo'
Module 0 Level 0 Inputs 4 Outputs 4 Bidirs 0 ScanChains 0 :
Module 1 Level 1 Inputs 3 Outputs 2 Bidirs 1 ScanChains 2 : 10 9
Module 1 TotalTests 2
Module 1 Test 1 ScanUse 1 TamUse 1 Patterns 20
Module 1 Test 2 ScanUse 1 TamUse 1 Patterns 5
"""
    d = parse_itc02(text)
    assert d.name == "demo"
    assert d.core_ids == [1]
    assert d.core(1).num_patterns == 25
    assert d.core(1).scan_chain_lengths == (10, 9)


@pytest.mark.parametrize("line,expected", [("10 1144", {10: 1144}), ("4 275", {4: 275}), ("", {})])
def test_power_file_examples(line, expected):
    assert parse_power_file(line) == expected


def test_power_merge(d695):
    assert d695.core(3).power_mw == 823
    bare = load_design(bundled_text("d695.soc"), "")
    assert all(c.power_mw == 0 for c in bare.cores)


def test_power_for_unknown_core():
    with pytest.raises(DesignValidationError, match="unknown core 99"):
        load_design(bundled_text("d695.soc"), "99 10\n")


@pytest.mark.parametrize("text,lineno", [
    ("core 1\ninputs x\npatterns 1\n", 2),
    ("core 1\npatterns 1\nwidgets 3\n", 3),
    ("core 1\npatterns 1\npatterns 2\n", 3),
])
def test_native_errors_name_the_line(text, lineno):
    with pytest.raises(ParseError) as exc:
        parse_native(text)
    assert exc.value.lineno == lineno
    assert str(exc.value).startswith(f"line {lineno}:")


def test_power_file_errors():
    with pytest.raises(ParseError):
        parse_power_file("1 5\n1 6\n")
    with pytest.raises(ParseError):
        parse_power_file("1 lots\n")
    with pytest.raises(DesignValidationError):
        parse_power_file("1 -5\n")


def test_core_lookup_and_duplicates():
    d = bundled_d695()
    with pytest.raises(KeyError, match="unknown core 42"):
        d.core(42)
    with pytest.raises(DesignValidationError):
        SocDesign("dup", [CoreSpec(1, 1), CoreSpec(1, 2)])


cores = st.builds(
    CoreSpec,
    id=st.integers(1, 50),
    num_inputs=st.integers(0, 300),
    num_outputs=st.integers(0, 300),
    num_bidirs=st.integers(0, 80),
    scan_chain_lengths=st.lists(st.integers(1, 600), max_size=12).map(tuple),
    num_patterns=st.integers(1, 5000),
    power_mw=st.integers(0, 2000),
)
designs = st.lists(cores, max_size=8, unique_by=lambda c: c.id).map(lambda cs: SocDesign("h", cs))


@settings(max_examples=150, deadline=None)
@given(designs)
def test_native_round_trip(design):
    again = parse_native(serialize_native(design))
    assert again == design
    assert serialize_native(again) == serialize_native(design)


@settings(max_examples=60, deadline=None)
@given(designs, st.data())
def test_power_merge_touches_only_power(design, data):
    power = {c.id: data.draw(st.integers(0, 3000)) for c in design.cores}
    merged = design.with_power(power)
    for before, after in zip(design.cores, merged.cores):
        assert after.power_mw == power[before.id]
        assert after == CoreSpec(**{**before.__dict__, "power_mw": after.power_mw})


def test_random_instances_are_seeded_and_round_trip():
    assert random_instance(7) == random_instance(7)
    assert random_instance(1) != random_instance(2)
    d = random_instance(3, n_cores=12)
    assert parse_native(serialize_native(d)) == d
