import pytest
from hypothesis import given, strategies as st

from fermisim.errors import ValidationError
from fermisim.fock import (FockState, ModeSubset, OutcomeAssignment, jw_sign, parity,
                           to_bitstring)

bitstrings = st.text("01", min_size=1, max_size=12)


@pytest.mark.parametrize("x, i, sign", [("0000", 2, 1), ("1100", 2, 1), ("1000", 1, -1),
                                        ("1110", 3, -1), ("1111", 0, 1)])
def test_jw_sign(x, i, sign):
    assert jw_sign(FockState.from_string(x), i) == sign


@pytest.mark.parametrize("x, p", [("0000", 0), ("1010", 0), ("1110", 1)])
def test_parity(x, p):
    assert parity(FockState.from_string(x)) == p


def test_mode_zero_is_most_significant():
    x = FockState.from_string("100")
    assert x.index() == 4
    assert x.occupied == (0,)
    assert FockState.from_index(1, 3) == FockState.from_string("001")


def test_constructors():
    assert str(FockState.vacuum(3)) == "000"
    assert str(FockState.from_occupied(4, [3, 1])) == "0101"
    assert FockState.from_string("0110").hamming_weight == 2
    assert to_bitstring((1, 0, 1)) == "101"


@given(bitstrings)
def test_string_round_trip(text):
    x = FockState.from_string(text)
    assert str(x) == text
    assert FockState.from_index(x.index(), x.n) == x
    assert x.hamming_weight == text.count("1")


@pytest.mark.parametrize("bad", ["", "012", "1 0"])
def test_bad_strings(bad):
    with pytest.raises(ValidationError):
        FockState.from_string(bad)


def test_subset_rules():
    assert ModeSubset.of(5, [3, 1]).modes == (1, 3)
    with pytest.raises(ValidationError):
        ModeSubset(4, (2, 1))
    with pytest.raises(ValidationError):
        ModeSubset.of(4, [1, 1])
    with pytest.raises(ValidationError):
        ModeSubset(2, (2,))


def test_outcome_assignment():
    y = OutcomeAssignment.of(4, {3: 0, 1: 1})
    assert y.subset.modes == (1, 3)
    assert y.bits == (1, 0)
    assert y.as_dict() == {1: 1, 3: 0}
    assert len(OutcomeAssignment.empty(3).subset) == 0
    with pytest.raises(ValidationError):
        OutcomeAssignment(ModeSubset(3, (0,)), (2,))
    with pytest.raises(ValidationError):
        OutcomeAssignment(ModeSubset(3, (0, 1)), (1,))
