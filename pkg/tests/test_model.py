"""Core model: splittings, states, groupings, specifications."""
from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entact import (
    FamilyState,
    Grouping,
    Specification,
    Splitting,
    npt_indicator,
    parties_from_bitmask,
    party_bitmask,
    separating_splittings,
    straddles,
    validate,
)


def test_splitting_label_bounds():
    Splitting(3, 1)
    Splitting(3, 3)
    with pytest.raises(ValueError):
        Splitting(3, 0)
    with pytest.raises(ValueError):
        Splitting(3, 4)
    with pytest.raises(ValueError):
        Splitting(1, 1)


def test_splitting_sides_and_bits():
    s = Splitting(4, 5)
    assert s.side_b == {1, 3}
    assert s.side_a == {2, 4}
    assert [s.bit(i) for i in (1, 2, 3, 4)] == [1, 0, 1, 0]
    assert str(s) == "(A2A4)-(A1A3)"
    with pytest.raises(ValueError):
        s.bit(5)


def test_from_side_complements_when_anchor_included():
    # naming the side holding the anchor lands on the same splitting
    assert Splitting.from_side(4, {1, 3}).mask == 5
    assert Splitting.from_side(4, {2, 4}).mask == 5
    assert Splitting.from_side(3, {1}).mask == 1
    assert Splitting.from_side(3, {2, 3}).mask == 1
    with pytest.raises(ValueError):
        Splitting.from_side(3, {1, 2, 3})
    with pytest.raises(ValueError):
        Splitting.from_side(3, set())
    with pytest.raises(ValueError):
        Splitting.from_side(3, {0, 1})


@given(st.integers(min_value=0, max_value=1023))
def test_party_bitmask_roundtrip(mask):
    assert party_bitmask(parties_from_bitmask(mask)) == mask


def test_worked_three_party_state():
    s = FamilyState(3, 0.5, 0.0, (0.0, 0.25, 0.0))
    assert validate(s) == []
    assert s.delta == 0.5
    assert s.indicator_vector() == (1, 0, 1)
    # the middle label sits exactly on the boundary and counts as separable
    assert s.indicator(2) == 0
    assert s.coefficient(2) == 0.25
    with pytest.raises(ValueError):
        s.coefficient(4)
    assert npt_indicator(s, Splitting(3, 1)) == 1
    with pytest.raises(ValueError):
        npt_indicator(s, Splitting(4, 1))


def test_from_unnormalized_normalizes():
    s = FamilyState.from_unnormalized(3, 3.0, 1.0, (1.0, 2.0, 0.5))
    assert validate(s) == []
    assert abs(s.total_weight() - 1.0) < 1e-15
    # ratios survive normalization
    assert abs(s.lam0_plus / s.lam0_minus - 3.0) < 1e-12
    with pytest.raises(ValueError):
        FamilyState.from_unnormalized(3, 0.0, 0.0, (0.0, 0.0, 0.0))


def test_validate_reports_problems():
    assert validate(FamilyState(3, 0.5, 0.0, (0.25, 0.0)))  # wrong length
    assert any("negative" in p for p in validate(FamilyState(3, 0.6, 0.0, (-0.1, 0.25, 0.05))))
    assert any("lam0_plus < lam0_minus" in p for p in validate(FamilyState(2, 0.2, 0.4, (0.2,))))
    assert any("total weight" in p for p in validate(FamilyState(2, 0.9, 0.0, (0.3,))))
    assert validate(FamilyState(1, 1.0, 0.0, ()))


@settings(max_examples=60)
@given(st.integers(min_value=3, max_value=7), st.data())
def test_separating_count_is_power_of_two(n, data):
    parties = list(range(1, n + 1))
    csize = data.draw(st.integers(min_value=1, max_value=n - 1))
    c = data.draw(st.permutations(parties)).copy()[:csize]
    rest = [p for p in parties if p not in c]
    dsize = data.draw(st.integers(min_value=1, max_value=len(rest)))
    d = rest[:dsize]
    splits = separating_splittings(n, c, d)
    assert len(splits) == 1 << (n - len(c) - len(d))
    for sp in splits:
        cbits = {sp.bit(p) for p in c}
        dbits = {sp.bit(p) for p in d}
        assert len(cbits) == 1 and len(dbits) == 1 and cbits != dbits
    masks = [sp.mask for sp in splits]
    assert masks == sorted(masks)


def test_separating_frozen_five_party_case():
    masks = [sp.mask for sp in separating_splittings(5, {1}, {2})]
    assert masks == [1, 2, 5, 6, 9, 10, 13, 14]
    with pytest.raises(ValueError):
        separating_splittings(5, {1, 2}, {2, 3})


def test_straddles():
    s = Splitting(4, 5)  # sides {1,3} and {2,4}
    assert straddles(s, {1, 2})
    assert straddles(s, {3, 4})
    assert not straddles(s, {1, 3})
    assert not straddles(s, {2})
    with pytest.raises(ValueError):
        straddles(s, {5})


def test_grouping_partition_rules():
    g = Grouping.from_sets(4, [[3, 4], [1], [2]])
    assert g.as_lists() == [[1], [2], [3, 4]]  # canonical order by smallest member
    assert g.group_of(4) == frozenset({3, 4})
    assert str(g) == "1|2|3,4"
    assert Grouping.all_separate(3).as_lists() == [[1], [2], [3]]
    assert Grouping.with_joined(5, (2, 4)).as_lists() == [[1], [2, 4], [3], [5]]
    with pytest.raises(ValueError):
        Grouping.from_sets(4, [[1, 2], [2, 3], [4]])
    with pytest.raises(ValueError):
        Grouping.from_sets(4, [[1, 2], [3]])
    with pytest.raises(ValueError):
        Grouping.from_sets(4, [[1, 2], [3, 4, 5]])


@given(st.integers(min_value=2, max_value=6), st.data())
def test_specification_int_roundtrip(n, data):
    labels = (1 << (n - 1)) - 1
    value = data.draw(st.integers(min_value=0, max_value=(1 << labels) - 1))
    spec = Specification.from_int(n, value)
    assert spec.to_int() == value
    assert Specification(n, spec.bits) == spec
    assert set(spec.ones()) == {m for m in range(1, labels + 1) if value >> (m - 1) & 1}


def test_specification_validation():
    with pytest.raises(ValueError):
        Specification(3, (0, 1))
    with pytest.raises(ValueError):
        Specification(3, (0, 2, 1))
    with pytest.raises(ValueError):
        Specification.from_mapping(3, {1: 1, 2: 0})
    spec = Specification.from_mapping(3, {1: 1, 2: 0, 3: 1})
    assert spec.bits == (1, 0, 1)
    assert spec.value(2) == 0
    assert Specification.constant(4, 1).bits == (1,) * 7
