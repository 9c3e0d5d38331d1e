"""Grouping verdicts and searches over indicator specifications.

The central question: given a partition of the parties into cooperating
groups, can groups c and d end up with a distillable pair between them?
The answer needs only the indicator vector.  A splitting blocks the pair
when it puts c opposite d, carries indicator 0, and is straddled by no
group; the pair is distillable exactly when no splitting blocks it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .model import (
    FamilyState,
    Grouping,
    Specification,
    Splitting,
    _separating_masks,
    party_bitmask,
)


def _verdict(
    n: int,
    indicator: Sequence[int],
    group_masks: Sequence[int],
    cmask: int,
    dmask: int,
) -> tuple[bool, int | None]:
    """Core decision; returns (ok, lowest blocking label or None)."""
    full = (1 << n) - 1
    for m in _separating_masks(n, cmask, dmask):
        if indicator[m - 1]:
            continue
        comp = full ^ m
        if any(g & m and g & comp for g in group_masks):
            continue
        return False, m
    return True, None


def _grouping_masks(grouping: Grouping) -> tuple[int, ...]:
    return tuple(party_bitmask(g) for g in grouping.groups)


def _resolve_pair(grouping: Grouping, c, d) -> tuple[frozenset[int], frozenset[int]]:
    cset = frozenset(c)
    dset = frozenset(d)
    for name, s in (("c", cset), ("d", dset)):
        if s not in grouping.groups:
            raise ValueError(f"{name}={sorted(s)} is not a group of {grouping}")
    if cset == dset:
        raise ValueError("c and d must be different groups")
    return cset, dset


def necessary_distillable(state: FamilyState, grouping: Grouping, c, d) -> bool:
    """Can groups c and d of `grouping` distill a pair between them?

    True when every splitting separating c from d is either distillable
    itself or straddled by some group of the grouping.  The condition is
    clearly necessary; for this family the protocol layer realizes it,
    so it is the exact answer, and distillable_between_groups is the
    same function under the name the rest of the package uses.
    """
    if grouping.n != state.n:
        raise ValueError(f"grouping is for n={grouping.n}, state has n={state.n}")
    cset, dset = _resolve_pair(grouping, c, d)
    ok, _ = _verdict(
        state.n,
        state.indicator_vector(),
        _grouping_masks(grouping),
        party_bitmask(cset),
        party_bitmask(dset),
    )
    return ok


distillable_between_groups = necessary_distillable


def distillation_witness(state: FamilyState, grouping: Grouping, c, d) -> Splitting | None:
    """Lowest-label splitting blocking the pair, or None when none does."""
    if grouping.n != state.n:
        raise ValueError(f"grouping is for n={grouping.n}, state has n={state.n}")
    cset, dset = _resolve_pair(grouping, c, d)
    _, label = _verdict(
        state.n,
        state.indicator_vector(),
        _grouping_masks(grouping),
        party_bitmask(cset),
        party_bitmask(dset),
    )
    return None if label is None else Splitting(state.n, label)


@dataclass(frozen=True)
class PairVerdict:
    """Verdict for one unordered pair of groups."""

    c: frozenset[int]
    d: frozenset[int]
    distillable: bool
    witness: Splitting | None


@dataclass(frozen=True)
class GroupingReport:
    """All pair verdicts under one grouping plus the best joint collection."""

    grouping: Grouping
    pairs: tuple[PairVerdict, ...]
    ghz: tuple[frozenset[int], ...]

    @property
    def any_distillable(self) -> bool:
        return any(p.distillable for p in self.pairs)

    def pair(self, c, d) -> PairVerdict:
        cset = frozenset(c)
        dset = frozenset(d)
        for pv in self.pairs:
            if {pv.c, pv.d} == {cset, dset}:
                return pv
        raise ValueError(f"no pair ({sorted(cset)}, {sorted(dset)}) in this report")


def grouping_report(state: FamilyState, grouping: Grouping) -> GroupingReport:
    """Verdict for every pair of groups, plus the largest GHZ-capable clique.

    A collection of groups can share a GHZ-type state exactly when every
    pair in the collection is distillable, so the `ghz` field is the
    largest clique in the pair graph (smallest such clique on ties).
    """
    if grouping.n != state.n:
        raise ValueError(f"grouping is for n={grouping.n}, state has n={state.n}")
    indicator = state.indicator_vector()
    masks = _grouping_masks(grouping)
    k = len(masks)
    pairs = []
    adj = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            ok, label = _verdict(state.n, indicator, masks, masks[i], masks[j])
            pairs.append(
                PairVerdict(
                    grouping.groups[i],
                    grouping.groups[j],
                    ok,
                    None if label is None else Splitting(state.n, label),
                )
            )
            if ok:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    best = 0
    best_size = 0
    for sub in range(1, 1 << k):
        size = sub.bit_count()
        if size <= best_size:
            continue
        if all(sub & ~adj[i] == 1 << i for i in range(k) if sub >> i & 1):
            best, best_size = sub, size
    ghz = tuple(grouping.groups[i] for i in range(k) if best >> i & 1)
    return GroupingReport(grouping, tuple(pairs), ghz)


def ghz_groups(state: FamilyState, grouping: Grouping) -> tuple[frozenset[int], ...]:
    """Largest collection of groups whose pairs are all distillable."""
    return grouping_report(state, grouping).ghz


def iter_set_partitions(n: int, blocks: int | None = None) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All partitions of {1..n} in restricted-growth order, first-member blocks first.

    With `blocks` set, only partitions with exactly that many blocks.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if blocks is not None and blocks < 1:
        raise ValueError("blocks must be at least 1")
    a = [0] * n
    while True:
        count = max(a) + 1
        if blocks is None or count == blocks:
            sets: list[list[int]] = [[] for _ in range(count)]
            for idx, block in enumerate(a):
                sets[block].append(idx + 1)
            yield tuple(tuple(s) for s in sets)
        i = n - 1
        while i > 0 and a[i] > max(a[:i]):
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for rest in range(i + 1, n):
            a[rest] = 0


def classify_groupings(
    state: FamilyState, *, guard: int = 10, two_groups_only: bool = False
) -> Iterator[GroupingReport]:
    """Report every grouping of the parties (or every two-group split).

    The number of set partitions grows very fast, hence the guard on the
    party count; raise it knowingly.
    """
    if state.n > guard:
        raise ValueError(
            f"sweeping all groupings of {state.n} parties is a large enumeration; "
            f"pass guard={state.n} to confirm"
        )
    blocks = 2 if two_groups_only else None
    for part in iter_set_partitions(state.n, blocks):
        yield grouping_report(state, Grouping.from_sets(state.n, part))


@dataclass(frozen=True)
class SpecificationBehavior:
    """Evaluate grouping verdicts directly on a specification's bits.

    Any state realizing the specification has exactly these indicator
    values, and the verdicts depend on nothing else, so conclusions
    drawn here hold for every such state.
    """

    spec: Specification

    @property
    def n(self) -> int:
        return self.spec.n

    def indicator(self, label: int) -> int:
        return self.spec.value(label)

    def entangled(self) -> bool:
        """For this family, some splitting distillable is the same as not fully separable."""
        return any(self.spec.bits)

    def verdict(self, grouping: Grouping, c, d) -> bool:
        if grouping.n != self.n:
            raise ValueError(f"grouping is for n={grouping.n}, specification has n={self.n}")
        cset, dset = _resolve_pair(grouping, c, d)
        ok, _ = _verdict(
            self.n, self.spec.bits, _grouping_masks(grouping),
            party_bitmask(cset), party_bitmask(dset),
        )
        return ok

    def any_pair_distillable(self, grouping: Grouping) -> bool:
        if grouping.n != self.n:
            raise ValueError(f"grouping is for n={grouping.n}, specification has n={self.n}")
        masks = _grouping_masks(grouping)
        for i in range(len(masks)):
            for j in range(i + 1, len(masks)):
                ok, _ = _verdict(self.n, self.spec.bits, masks, masks[i], masks[j])
                if ok:
                    return True
        return False


Requirement = Callable[[SpecificationBehavior], bool]


def any_two_activation_requirement() -> Requirement:
    """Joining any two of parties 3, 4, 5 must activate the pair (1, 2).

    On top of that the pattern must be entangled yet give no pair at all
    when every party acts alone.  No five-party pattern meets this; the
    interest is in search_specifications certifying the exhaustion.
    """
    all_separate = Grouping.all_separate(5)
    joined = tuple(Grouping.with_joined(5, pair) for pair in ((3, 4), (3, 5), (4, 5)))

    def requirement(b: SpecificationBehavior) -> bool:
        if b.n != 5:
            raise ValueError("this requirement is defined for five parties")
        if not b.entangled():
            return False
        if b.any_pair_distillable(all_separate):
            return False
        return all(b.verdict(g, {1}, {2}) for g in joined)

    return requirement


def example_vii_requirement() -> Requirement:
    """Pin of the five-party activation pattern in the catalog.

    Behavior: entangled, nothing distillable with all parties separate,
    joining {3,4} or {3,5} activates the pair (1,2), while joining
    {4,5} activates nothing.  Structure: splittings that keep parties 1
    and 2 on the same side stay separable.  Run through
    search_specifications this recovers the catalog pattern VII.
    """
    all_separate = Grouping.all_separate(5)
    g34 = Grouping.with_joined(5, (3, 4))
    g35 = Grouping.with_joined(5, (3, 5))
    g45 = Grouping.with_joined(5, (4, 5))
    together = tuple(m for m in range(1, 16) if (m & 1) == (m >> 1 & 1))

    def requirement(b: SpecificationBehavior) -> bool:
        if b.n != 5:
            raise ValueError("this requirement is defined for five parties")
        if any(b.indicator(m) for m in together):
            return False
        if not b.entangled():
            return False
        if b.any_pair_distillable(all_separate):
            return False
        if not b.verdict(g34, {1}, {2}):
            return False
        if not b.verdict(g35, {1}, {2}):
            return False
        return not b.any_pair_distillable(g45)

    return requirement


BUILTIN_REQUIREMENTS: dict[str, Callable[[], Requirement]] = {
    "any-two": any_two_activation_requirement,
    "example-vii": example_vii_requirement,
}


def search_specifications(
    n: int, requirement: Requirement, max_n: int = 5
) -> Specification | None:
    """First specification, in descending integer order, meeting the requirement.

    Enumerates every 0/1 assignment over the 2**(n-1) - 1 labels
    starting from all-ones, so the first hit concedes separability on as
    few splittings as possible.  Returns None when the requirement is
    unsatisfiable.  The candidate count doubles with every label, hence
    the guard; raising max_n past 5 is the caller's own risk.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > max_n:
        labels = (1 << (n - 1)) - 1
        raise ValueError(
            f"searching n={n} means 2**{labels} candidates; pass max_n={n} to confirm"
        )
    for value in range((1 << ((1 << (n - 1)) - 1)) - 1, -1, -1):
        spec = Specification.from_int(n, value)
        if requirement(SpecificationBehavior(spec)):
            return spec
    return None
