"""Grouping analysis: pair verdicts, reports, partition sweeps, searches."""
from __future__ import annotations

import pytest

from entact import (
    BUILTIN_REQUIREMENTS,
    FamilyState,
    Grouping,
    Specification,
    SpecificationBehavior,
    classify_groupings,
    distillation_witness,
    example_pattern,
    example_state,
    from_specification,
    ghz_groups,
    grouping_report,
    iter_set_partitions,
    necessary_distillable,
    random_family_state,
    search_specifications,
    straddles,
)

BELL = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203, 7: 877, 8: 4140}


def test_pair_verdict_worked_cases():
    state = example_state("VI")
    good = Grouping.from_sets(4, [[1], [2], [3, 4]])
    assert necessary_distillable(state, good, {1}, {2})
    assert distillation_witness(state, good, {1}, {2}) is None
    # with 3 and 4 joined even the pairs involving the joined group work
    assert necessary_distillable(state, good, {1}, {3, 4})
    assert necessary_distillable(state, good, {2}, {3, 4})

    bad = Grouping.from_sets(4, [[1, 3], [2], [4]])
    assert not necessary_distillable(state, bad, {1, 3}, {2})
    w = distillation_witness(state, bad, {1, 3}, {2})
    assert w is not None
    assert w.mask == 5
    assert str(w) == "(A2A4)-(A1A3)"


def test_pair_arguments_must_name_groups():
    state = example_state("VI")
    g = Grouping.from_sets(4, [[1], [2], [3, 4]])
    with pytest.raises(ValueError):
        necessary_distillable(state, g, {1, 2}, {3, 4})
    with pytest.raises(ValueError):
        necessary_distillable(state, g, {3, 4}, {3, 4})
    with pytest.raises(ValueError):
        necessary_distillable(state, Grouping.all_separate(3), {1}, {2})  # n mismatch


def test_witness_properties_hold_whenever_reported():
    state = random_family_state(5, seed=33)
    for part in iter_set_partitions(5):
        grouping = Grouping.from_sets(5, part)
        report = grouping_report(state, grouping)
        for pv in report.pairs:
            if pv.distillable:
                assert pv.witness is None
                continue
            w = pv.witness
            assert w is not None
            assert state.indicator(w.mask) == 0
            assert not any(straddles(w, grp) for grp in grouping.groups)
            # the witness really separates the pair
            cbits = {w.bit(p) for p in pv.c}
            dbits = {w.bit(p) for p in pv.d}
            assert len(cbits) == 1 and len(dbits) == 1 and cbits != dbits


def test_grouping_report_shape():
    state = example_state("VII")
    g = Grouping.from_sets(5, [[1, 2], [3], [4], [5]])
    report = grouping_report(state, g)
    assert len(report.pairs) == 6
    assert report.any_distillable == any(p.distillable for p in report.pairs)
    pv = report.pair({3}, {4})
    assert pv.c == frozenset({3}) and pv.d == frozenset({4})
    with pytest.raises(ValueError):
        report.pair({1, 2}, {1, 2})


def test_ghz_groups_is_a_clique():
    state = example_state("VII")
    g = Grouping.from_sets(5, [[3, 4], [1], [2], [5]])
    report = grouping_report(state, g)
    assert report.ghz == ghz_groups(state, g)
    assert frozenset({1}) in report.ghz and frozenset({2}) in report.ghz
    for a in report.ghz:
        for b in report.ghz:
            if a != b:
                assert report.pair(a, b).distillable


def test_iter_set_partitions_counts_and_order():
    for n in range(1, 7):
        parts = list(iter_set_partitions(n))
        assert len(parts) == BELL[n]
        assert parts[0] == (tuple(range(1, n + 1)),)
        assert parts[-1] == tuple((i,) for i in range(1, n + 1))
        assert len(set(parts)) == BELL[n]
    two = list(iter_set_partitions(5, blocks=2))
    assert len(two) == 15  # Stirling number of the second kind
    assert all(len(part) == 2 for part in two)
    with pytest.raises(ValueError):
        list(iter_set_partitions(0))


def test_classify_groupings_covers_every_partition():
    state = random_family_state(4, seed=0)
    reports = list(classify_groupings(state))
    assert len(reports) == BELL[4]
    assert len({rep.grouping for rep in reports}) == BELL[4]


def test_classify_groupings_guard():
    labels = (1 << 10) - 1
    big = FamilyState(11, 1.0, 0.0, (0.0,) * labels)
    with pytest.raises(ValueError):
        list(classify_groupings(big))
    head = next(classify_groupings(big, guard=11))
    assert head.grouping.groups == (frozenset(range(1, 12)),)


def test_classify_two_groups_only():
    state = example_state("III", n=5, group={1, 3, 5})
    reports = list(classify_groupings(state, two_groups_only=True))
    assert len(reports) == 15
    hits = [rep.grouping for rep in reports if rep.any_distillable]
    assert hits == [Grouping.from_sets(5, [[1, 3, 5], [2, 4]])]


def test_specification_behavior_matches_realized_state():
    spec = example_pattern("VII")
    b = SpecificationBehavior(spec)
    assert b.n == 5
    assert b.entangled()
    assert b.indicator(1) == 1 and b.indicator(3) == 0
    assert not b.any_pair_distillable(Grouping.all_separate(5))
    state = from_specification(spec)
    for part in iter_set_partitions(5):
        g = Grouping.from_sets(5, part)
        assert b.any_pair_distillable(g) == grouping_report(state, g).any_distillable
    g34 = Grouping.with_joined(5, (3, 4))
    assert b.verdict(g34, {1}, {2}) == necessary_distillable(state, g34, {1}, {2})
    assert b.verdict(g34, {1}, {2}) is True


def test_builtin_requirement_names_and_guards():
    assert set(BUILTIN_REQUIREMENTS) == {"any-two", "example-vii"}
    req = BUILTIN_REQUIREMENTS["example-vii"]()
    assert req(SpecificationBehavior(example_pattern("VII")))
    assert not req(SpecificationBehavior(Specification.constant(5, 1)))
    assert not req(SpecificationBehavior(Specification.constant(5, 0)))
    with pytest.raises(ValueError):
        req(SpecificationBehavior(Specification.constant(4, 1)))
    any_two = BUILTIN_REQUIREMENTS["any-two"]()
    assert not any_two(SpecificationBehavior(Specification.constant(5, 0)))
    with pytest.raises(ValueError):
        any_two(SpecificationBehavior(Specification.constant(4, 1)))


def test_search_returns_descending_first_match():
    found = search_specifications(4, lambda b: True)
    assert found == Specification.constant(4, 1)
    assert search_specifications(3, lambda b: False) is None


def test_search_respects_size_guard():
    with pytest.raises(ValueError):
        search_specifications(6, lambda b: True)
    found = search_specifications(6, lambda b: True, max_n=6)
    assert found == Specification.constant(6, 1)
    with pytest.raises(ValueError):
        search_specifications(1, lambda b: True)
