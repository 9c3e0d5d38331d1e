"""Coefficient-level protocol operations.

Every operation here maps family states to family states (or to the
final two-party outcome) while tracking exactly how the coefficients and
the corner gap move.  The dense oracle mirrors each operation on full
density matrices so the two routes can be compared in tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .analysis import distillation_witness
from .model import FamilyState, Grouping, Splitting, _check_party_set

AMPLIFY_CAP = 64


class DegenerateStateError(ValueError):
    """An operation needed more corner gap than the state provides."""


def amplify(state: FamilyState, m: int) -> FamilyState:
    """Raise every coefficient-to-gap ratio to the m-th power.

    Models m rounds of the gap-preserving local filter: coefficients and
    the half-gap all become their m-th powers before renormalizing, so a
    ratio r to the threshold turns into r**m.  Indicators are unchanged
    while margins widen, which is what makes helper measurements safe.
    """
    if m < 1:
        raise ValueError(f"amplification power must be a positive integer, got {m}")
    if m == 1:
        return state
    half = 0.5 * state.delta
    if half <= 0.0:
        raise DegenerateStateError("amplification needs a positive corner gap")
    return FamilyState.from_unnormalized(
        state.n,
        state.lam0_minus ** m + 2.0 * half ** m,
        state.lam0_minus ** m,
        tuple(v ** m for v in state.lam),
    )


def _insert_bit(label: int, party: int, bit: int) -> int:
    pos = party - 1
    low = label & ((1 << pos) - 1)
    return low | (bit << pos) | ((label >> pos) << (pos + 1))


def _check_measurable(state: FamilyState, party: int) -> None:
    if state.n < 3:
        raise ValueError("measuring a party out needs at least three parties")
    if party == state.n:
        raise ValueError(
            f"party {state.n} anchors the labeling and cannot be measured out; "
            "relabel with permute_parties first"
        )
    if not 1 <= party < state.n:
        raise ValueError(f"party {party} outside 1..{state.n}")


def required_amplification(state: FamilyState, party: int) -> int:
    """Smallest power letting the merge after measuring `party` keep its indicators.

    Measuring merges the two parent coefficients of every child label by
    addition.  When both parents sit strictly below the half-gap their
    sum may still land above it; powering first shrinks sub-threshold
    ratios fast enough that some finite power always works.  Searches
    1..AMPLIFY_CAP and raises DegenerateStateError beyond the cap.
    """
    _check_measurable(state, party)
    half = 0.5 * state.delta
    pairs = []
    for child in range(1, 1 << (state.n - 2)):
        a = state.lam[_insert_bit(child, party, 0) - 1]
        b = state.lam[_insert_bit(child, party, 1) - 1]
        if a < half and b < half:
            pairs.append((a, b))
    for m in range(1, AMPLIFY_CAP + 1):
        target = half ** m
        if all(a ** m + b ** m < target for a, b in pairs):
            return m
    raise DegenerateStateError(
        f"coefficients sit too close to the half-gap; no power up to {AMPLIFY_CAP} separates them"
    )


def measure_out_party(state: FamilyState, party: int, auto_amplify: bool = True) -> FamilyState:
    """Measure one non-anchor party in the balanced basis, keep the even outcome.

    The surviving parties close ranks: labels above `party` shift down
    one position.  Each child coefficient is the sum of its two parents,
    and both corner weights absorb the coefficient of the label that
    isolated the measured party, so the corner gap and the total weight
    are preserved exactly; no renormalization happens.  With
    auto_amplify the state is first amplified by required_amplification
    so children of two distillable parents stay distillable.
    """
    _check_measurable(state, party)
    if auto_amplify:
        state = amplify(state, required_amplification(state, party))
    absorbed = state.lam[(1 << (party - 1)) - 1]
    lam = tuple(
        state.lam[_insert_bit(child, party, 0) - 1]
        + state.lam[_insert_bit(child, party, 1) - 1]
        for child in range(1, 1 << (state.n - 2))
    )
    return FamilyState(state.n - 1, state.lam0_plus + absorbed, state.lam0_minus + absorbed, lam)


def _joined_members(n: int, parties: Iterable[int]) -> list[int]:
    return sorted(_check_party_set(n, parties, "group"))


def _pattern_key(label: int, members: list[int], n: int) -> int:
    """Canonical side pattern of the members under this label.

    A pattern and its bitwise complement name the same physical split of
    the group, so the smaller integer of the two is the key; 0 means the
    group sits entirely on one side.
    """
    full = (1 << len(members)) - 1
    p = 0
    for pos, party in enumerate(members):
        if party < n and label >> (party - 1) & 1:
            p |= 1 << pos
    return min(p, p ^ full)


def auto_join_weights(state: FamilyState, parties: Iterable[int]) -> dict[int, float]:
    """Damping weights that push every label the group straddles under the threshold.

    Keyed by canonical pattern; each weight is half-gap over twice the
    largest coefficient carrying that pattern, clamped to 1.  After a
    join with these weights every straddled label sits at or below a
    quarter of the gap, leaving slack for later merges.
    """
    members = _joined_members(state.n, parties)
    half = 0.5 * state.delta
    if half <= 0.0:
        raise DegenerateStateError("join weights need a positive corner gap")
    largest: dict[int, float] = {}
    for label in range(1, state.label_count + 1):
        key = _pattern_key(label, members, state.n)
        if key == 0:
            continue
        v = state.lam[label - 1]
        if v > largest.get(key, 0.0):
            largest[key] = v
    return {key: min(1.0, half / (2.0 * v)) for key, v in largest.items() if v > 0.0}


def _check_join_weights(weights: Mapping[int, float], size: int) -> None:
    top = 1 << (size - 1)
    for key, y in weights.items():
        if not 0 <= key < top:
            raise ValueError(
                f"weight key {key} is not a canonical pattern (expected 0 <= key < {top})"
            )
        if not 0.0 < y <= 1.0:
            raise ValueError(f"weight for pattern {key} must lie in (0, 1], got {y}")
    if weights.get(0, 1.0) != 1.0:
        raise ValueError("the constant pattern must keep weight 1")


def join_povm(
    state: FamilyState, parties: Iterable[int], weights: Mapping[int, float] | None = None
) -> FamilyState:
    """Let a group of parties act as one unit by damping what it straddles.

    The group applies a diagonal filter whose weight depends only on its
    members' side pattern, with complementary patterns weighted equally
    and constant patterns untouched.  Labels the group does not straddle
    keep their threshold ratios exactly; straddled labels are scaled by
    their pattern's weight and, with the default weights from
    auto_join_weights, come out strictly distillable.
    """
    members = _joined_members(state.n, parties)
    if len(members) < 2:
        raise ValueError("joining needs at least two parties")
    if weights is None:
        weights = auto_join_weights(state, members)
    else:
        _check_join_weights(weights, len(members))
    lam = []
    for label in range(1, state.label_count + 1):
        key = _pattern_key(label, members, state.n)
        y = 1.0 if key == 0 else weights.get(key, 1.0)
        lam.append(y * state.lam[label - 1])
    return FamilyState.from_unnormalized(state.n, state.lam0_plus, state.lam0_minus, lam)


@dataclass(frozen=True)
class EffectivePairState:
    """Two-party outcome of collapsing a splitting, stored unnormalized.

    The fields are inherited verbatim from the parent state; properties
    divide by the total weight where that matters.
    """

    lam0_plus: float
    lam0_minus: float
    lam_pair: float

    @property
    def delta(self) -> float:
        return self.lam0_plus - self.lam0_minus

    def total_weight(self) -> float:
        return self.lam0_plus + self.lam0_minus + 2.0 * self.lam_pair

    @property
    def fidelity(self) -> float:
        """Overlap with the corner pair after normalization."""
        return self.lam0_plus / self.total_weight()

    @property
    def distillable(self) -> bool:
        return self.lam_pair < 0.5 * self.delta

    def normalized(self) -> "EffectivePairState":
        t = self.total_weight()
        return EffectivePairState(self.lam0_plus / t, self.lam0_minus / t, self.lam_pair / t)


def project_to_effective_pair(state: FamilyState, split: Splitting) -> EffectivePairState:
    """Collapse a splitting to its effective two-party state.

    Each side projects onto the span of its all-zero and all-one
    patterns.  Only the corner pair and the pair labeled by the
    splitting survive, so three numbers pin the outcome down.
    """
    if split.n != state.n:
        raise ValueError(f"splitting is for n={split.n}, state has n={state.n}")
    return EffectivePairState(state.lam0_plus, state.lam0_minus, state.coefficient(split.mask))


def permute_parties(state: FamilyState, order: Iterable[int]) -> FamilyState:
    """Relabel parties so that new party i is old party order[i-1].

    Pure bookkeeping.  Whenever a relabeled pattern puts the anchor
    party on the wrong side the whole pattern is complemented; that maps
    basis pairs to basis pairs and leaves the corner weights in place.
    """
    order = tuple(order)
    n = state.n
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"order must be a permutation of 1..{n}")
    full = (1 << n) - 1
    lam = []
    for new_label in range(1, 1 << (n - 1)):
        pattern = 0
        for pos in range(n - 1):
            if new_label >> pos & 1:
                pattern |= 1 << (order[pos] - 1)
        if pattern >> (n - 1) & 1:
            pattern ^= full
        lam.append(state.lam[pattern - 1])
    return FamilyState(n, state.lam0_plus, state.lam0_minus, tuple(lam))


@dataclass(frozen=True)
class PipelineStep:
    """One stage of a distillation run, with the state it produced."""

    kind: str
    note: str
    state: FamilyState
    digest: str
    party: int | None = None
    amplification: int | None = None
    order: tuple[int, ...] | None = None
    parties: tuple[int, ...] | None = None


@dataclass(frozen=True)
class PipelineTrace:
    """Full record of one pipeline run."""

    grouping: Grouping
    c: frozenset[int]
    d: frozenset[int]
    succeeded: bool
    steps: tuple[PipelineStep, ...]
    witness: Splitting | None
    outcome: EffectivePairState | None
    final_split: Splitting | None


def _digest(state: FamilyState) -> str:
    return "".join(str(b) for b in state.indicator_vector())


def distill_pipeline(state: FamilyState, grouping: Grouping, c, d) -> PipelineTrace:
    """Run the activation protocol for one pair of groups, end to end.

    Order of play: check the splitting-level verdict (bailing out with
    the lowest blocking splitting), apply the joint filter inside every
    multi-party group, relabel so the anchor party sits in c, measure
    the helper parties out from the highest label down, then collapse
    the remaining c-d splitting to its effective pair.  Whenever the
    verdict holds this ends in a distillable pair.
    """
    if grouping.n != state.n:
        raise ValueError(f"grouping is for n={grouping.n}, state has n={state.n}")
    cset = frozenset(c)
    dset = frozenset(d)
    for name, s in (("c", cset), ("d", dset)):
        if s not in grouping.groups:
            raise ValueError(f"{name}={sorted(s)} is not a group of {grouping}")
    if cset == dset:
        raise ValueError("c and d must be different groups")

    steps = [PipelineStep("start", f"input state on {state.n} parties", state, _digest(state))]
    witness = distillation_witness(state, grouping, cset, dset)
    if witness is not None:
        return PipelineTrace(grouping, cset, dset, False, tuple(steps), witness, None, None)

    cur = state
    for g in grouping.groups:
        if len(g) < 2:
            continue
        cur = join_povm(cur, g)
        steps.append(
            PipelineStep(
                "join",
                f"joint filter on parties {','.join(map(str, sorted(g)))}",
                cur,
                _digest(cur),
                parties=tuple(sorted(g)),
            )
        )

    n = cur.n
    cur_c = set(cset)
    cur_d = set(dset)
    if n not in cur_c:
        low = min(cur_c)
        order = tuple(n if q == low else low if q == n else q for q in range(1, n + 1))
        cur = permute_parties(cur, order)
        swap = {low: n, n: low}
        cur_c = {swap.get(q, q) for q in cur_c}
        cur_d = {swap.get(q, q) for q in cur_d}
        steps.append(
            PipelineStep(
                "permute",
                f"swapped parties {low} and {n} so the anchor sits in c",
                cur,
                _digest(cur),
                order=order,
            )
        )

    helpers = sorted(
        (q for q in range(1, n + 1) if q not in cur_c and q not in cur_d), reverse=True
    )
    for helper in helpers:
        power = required_amplification(cur, helper)
        if power > 1:
            cur = amplify(cur, power)
        cur = measure_out_party(cur, helper, auto_amplify=False)
        steps.append(
            PipelineStep(
                "measure",
                f"measured helper {helper} out (amplification {power})",
                cur,
                _digest(cur),
                party=helper,
                amplification=power,
            )
        )
        cur_c = {q - 1 if q > helper else q for q in cur_c}
        cur_d = {q - 1 if q > helper else q for q in cur_d}

    mask = 0
    for q in cur_d:
        mask |= 1 << (q - 1)
    final_split = Splitting(cur.n, mask)
    outcome = project_to_effective_pair(cur, final_split)
    steps.append(
        PipelineStep("project", f"collapsed the pair across {final_split}", cur, _digest(cur))
    )
    return PipelineTrace(
        grouping, cset, dset, outcome.distillable, tuple(steps), None, outcome, final_split
    )
