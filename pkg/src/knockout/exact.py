"""Exact tournament probabilities by dynamic programming over alive subsets.

States are bitmasks over *canonical* player indices.  A round with ``m``
matches draws ``2m`` participants uniformly from the alive set, pairs them
by a uniform perfect matching and resolves every match independently; players
left out receive a bye and advance.  The engine pushes the exact distribution
over alive sets forward one round at a time, so the state distribution at the
start of every round is available for reach and joint-reach queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .core import Format, GuardExceeded, PlayerValues, as_values

__all__ = [
    "EXACT_GUARD",
    "AliveState",
    "ReachMatrix",
    "WeightCheckReport",
    "TournamentEngine",
    "round_transition",
    "win_probabilities",
    "reach_probabilities",
    "reach_matrix",
    "joint_reach_probabilities",
    "special_case_win_prob",
    "weight_process_check",
]

EXACT_GUARD = 12


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _double_factorial_odd(k: int) -> int:
    """(2k - 1)!!, the number of perfect matchings of 2k items."""
    out = 1
    for t in range(1, 2 * k, 2):
        out *= t
    return out


@dataclass(frozen=True)
class AliveState:
    """Alive players (original indices) at the start of 1-based ``round``."""

    alive: frozenset[int]
    round: int


class TournamentEngine:
    """Exact engine bound to one set of player values.

    Transition tables are memoized on the instance, so reuse one engine when
    evaluating many formats for the same players.
    """

    def __init__(self, values, *, guard: int = EXACT_GUARD, force: bool = False):
        self.players = as_values(values)
        n = self.players.n
        if n > guard and not force:
            raise GuardExceeded(
                f"n={n} exceeds the exact-engine guard ({guard}); "
                "use force=True or Monte Carlo estimation"
            )
        v = self.players.values
        self._beat = [[v[a] / (v[a] + v[b]) if a != b else None for b in range(n)]
                      for a in range(n)]
        self._matching_memo: dict[int, dict[int, Fraction]] = {0: {0: Fraction(1)}}
        self._transition_memo: dict[tuple[int, int], dict[int, Fraction]] = {}
        self._forward_memo: dict[tuple[int, ...], list[dict[int, Fraction]]] = {}

    @property
    def n(self) -> int:
        return self.players.n

    # -- single round ---------------------------------------------------

    def _winner_weights(self, participants: int) -> dict[int, Fraction]:
        """Sum over perfect matchings of ``participants`` of P(winner set).

        Not normalized: dividing by the number of matchings gives the
        distribution of winners under a uniform matching.
        """
        memo = self._matching_memo
        if participants in memo:
            return memo[participants]
        low = participants & -participants
        a = low.bit_length() - 1
        rest = participants ^ low
        out: dict[int, Fraction] = {}
        for b in _bits(rest):
            sub = self._winner_weights(rest ^ (1 << b))
            pab = self._beat[a][b]
            pba = 1 - pab
            wa, wb = 1 << a, 1 << b
            for winners, w in sub.items():
                ka, kb = winners | wa, winners | wb
                out[ka] = out.get(ka, 0) + w * pab
                out[kb] = out.get(kb, 0) + w * pba
        memo[participants] = out
        return out

    def transition(self, alive: int, m: int) -> dict[int, Fraction]:
        """Distribution of the surviving set after an ``m``-match round."""
        key = (alive, m)
        if key in self._transition_memo:
            return self._transition_memo[key]
        members = _bits(alive)
        if m < 1 or 2 * m > len(members):
            raise ValueError(
                f"cannot play {m} matches among {len(members)} alive players"
            )
        out: dict[int, Fraction] = {}
        for chosen in combinations(members, 2 * m):
            part = 0
            for p in chosen:
                part |= 1 << p
            byes = alive & ~part
            for winners, w in self._winner_weights(part).items():
                surv = winners | byes
                out[surv] = out.get(surv, 0) + w
        denom = math.comb(len(members), 2 * m) * _double_factorial_odd(m)
        out = {s: Fraction(w) / denom for s, w in out.items()}
        self._transition_memo[key] = out
        return out

    # -- whole tournament -----------------------------------------------

    def _check_format(self, fmt: Format) -> None:
        if fmt.n != self.n:
            raise ValueError(f"format is for {fmt.n} players, instance has {self.n}")

    def state_distributions(self, fmt: Format) -> list[dict[int, Fraction]]:
        """Distribution over alive masks at the start of rounds 1..r+1."""
        self._check_format(fmt)
        if fmt.rounds in self._forward_memo:
            return self._forward_memo[fmt.rounds]
        dist = {(1 << self.n) - 1: Fraction(1)}
        out = [dist]
        for m in fmt.rounds:
            nxt: dict[int, Fraction] = {}
            for alive, pa in dist.items():
                for surv, pt in self.transition(alive, m).items():
                    nxt[surv] = nxt.get(surv, 0) + pa * pt
            dist = nxt
            out.append(dist)
        self._forward_memo[fmt.rounds] = out
        return out

    def win_probabilities_canonical(self, fmt: Format) -> list[Fraction]:
        final = self.state_distributions(fmt)[-1]
        out = [Fraction(0)] * self.n
        for mask, p in final.items():
            out[mask.bit_length() - 1] += p
        return out

    def win_probabilities(self, fmt: Format) -> list[Fraction]:
        return self.players.to_original(self.win_probabilities_canonical(fmt))

    def reach_canonical(self, fmt: Format) -> list[list[Fraction]]:
        """``reach[c][s]`` for canonical player ``c`` and 0-based stage ``s``."""
        dists = self.state_distributions(fmt)
        reach = [[Fraction(0)] * len(dists) for _ in range(self.n)]
        for s, dist in enumerate(dists):
            for mask, p in dist.items():
                for c in _bits(mask):
                    reach[c][s] += p
        return reach

    def joint_canonical(self, fmt: Format) -> list[list[list[Fraction]]]:
        """``joint[a][b][s]``; the diagonal holds the plain reach probability."""
        dists = self.state_distributions(fmt)
        n, stages = self.n, len(dists)
        joint = [[[Fraction(0)] * stages for _ in range(n)] for _ in range(n)]
        for s, dist in enumerate(dists):
            for mask, p in dist.items():
                members = _bits(mask)
                for a in members:
                    row = joint[a]
                    for b in members:
                        row[b][s] += p
        return joint

    def reach_matrix(self, fmt: Format) -> "ReachMatrix":
        perm = self.players.permutation
        inv = [0] * self.n
        for c, orig in enumerate(perm):
            inv[orig] = c
        reach_c = self.reach_canonical(fmt)
        joint_c = self.joint_canonical(fmt)
        reach = tuple(tuple(reach_c[inv[i]]) for i in range(self.n))
        joint = tuple(
            tuple(tuple(joint_c[inv[i]][inv[j]]) for j in range(self.n))
            for i in range(self.n)
        )
        return ReachMatrix(fmt, reach, joint)

    def weight_process_check(self, fmt: Format, i: int) -> "WeightCheckReport":
        self.players.check_index(i)
        v = self.players.values
        c = self.players.canonical_index(i)
        top, bottom = v[0], v[-1]
        if v[c] == top and v[c] == bottom:
            direction = "martingale"
        elif v[c] == top:
            direction = "submartingale"
        elif v[c] == bottom:
            direction = "supermartingale"
        else:
            raise ValueError(
                f"player {i} is neither a strongest nor a weakest player; "
                "no martingale direction applies"
            )
        bit = 1 << c
        dists = self.state_distributions(fmt)
        worst_slack: Fraction | None = None
        worst_state = None
        checked = 0
        initial_expectation = None
        for s, m in enumerate(fmt.rounds):
            for alive in dists[s]:
                if not alive & bit:
                    continue
                weight = v[c] / sum(v[b] for b in _bits(alive))
                expected = Fraction(0)
                for surv, pt in self.transition(alive, m).items():
                    if surv & bit:
                        expected += pt * v[c] / sum(v[b] for b in _bits(surv))
                if s == 0:
                    initial_expectation = (weight, expected)
                drift = expected - weight
                if direction == "submartingale":
                    slack = drift
                elif direction == "supermartingale":
                    slack = -drift
                else:
                    slack = -abs(drift)
                checked += 1
                if worst_slack is None or slack < worst_slack:
                    worst_slack = slack
                    worst_state = AliveState(
                        frozenset(self.players.permutation[b] for b in _bits(alive)),
                        s + 1,
                    )
        return WeightCheckReport(
            player=i,
            direction=direction,
            passed=worst_slack >= 0,
            min_slack=worst_slack,
            worst_state=worst_state,
            states_checked=checked,
            initial_weight=initial_expectation[0],
            initial_expected_next=initial_expectation[1],
        )


@dataclass(frozen=True)
class ReachMatrix:
    """Reach and pairwise joint-reach probabilities in original player order.

    ``reach[i][s]`` is P(player ``i`` alive at the start of round ``s + 1``);
    the last column is the win probability.  ``joint[i][j][s]`` is the
    probability both are alive; ``joint[i][i]`` equals ``reach[i]``.
    """

    format: Format
    reach: tuple[tuple[Fraction, ...], ...]
    joint: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @property
    def win(self) -> tuple[Fraction, ...]:
        return tuple(row[-1] for row in self.reach)


@dataclass(frozen=True)
class WeightCheckReport:
    """Outcome of checking the drift of a player's weight in every state.

    ``min_slack`` is the smallest signed margin by which the required
    inequality holds (negative means violated); for the martingale case it
    is minus the largest absolute drift.
    """

    player: int
    direction: str
    passed: bool
    min_slack: Fraction
    worst_state: AliveState
    states_checked: int
    initial_weight: Fraction
    initial_expected_next: Fraction


def _engine(values, force: bool) -> TournamentEngine:
    return TournamentEngine(values, force=force)


def round_transition(alive: Sequence[int], m: int, values) -> dict[frozenset[int], Fraction]:
    """Survivor distribution for one round among ``alive`` (original indices)."""
    pv = as_values(values)
    engine = TournamentEngine(pv, force=True)
    alive = set(alive)
    for i in alive:
        pv.check_index(i)
    mask = 0
    for c, orig in enumerate(pv.permutation):
        if orig in alive:
            mask |= 1 << c
    out = {}
    for surv, p in engine.transition(mask, m).items():
        out[frozenset(pv.permutation[b] for b in _bits(surv))] = p
    return out


def win_probabilities(values, fmt: Format, *, force: bool = False) -> list[Fraction]:
    """Exact tournament win probability of every player (original order)."""
    return _engine(values, force).win_probabilities(fmt)


def reach_probabilities(values, fmt: Format, *, force: bool = False) -> tuple[tuple[Fraction, ...], ...]:
    """``reach[i][s]``: P(player ``i`` alive at the start of round ``s + 1``)."""
    return _engine(values, force).reach_matrix(fmt).reach


def reach_matrix(values, fmt: Format, *, force: bool = False) -> ReachMatrix:
    return _engine(values, force).reach_matrix(fmt)


def joint_reach_probabilities(values, fmt: Format, i: int, j: int, *,
                              force: bool = False) -> list[Fraction]:
    """P(both ``i`` and ``j`` alive at the start of round ``s``), s = 1..r+1."""
    engine = _engine(values, force)
    if i == j:
        raise ValueError("joint reach needs two distinct players")
    ci, cj = engine.players.canonical_index(i), engine.players.canonical_index(j)
    both = (1 << ci) | (1 << cj)
    return [sum((p for mask, p in dist.items() if mask & both == both), Fraction(0))
            for dist in engine.state_distributions(fmt)]


def special_case_win_prob(p, fmt: Format) -> Fraction:
    """Win probability of a player who beats every (identical) rival w.p. ``p``.

    Every round the player is drawn to play with chance ``2m/r`` and then
    survives with chance ``p``; otherwise it advances on a bye.
    """
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    out = Fraction(1)
    for q in fmt.play_fractions():
        out *= q * p + 1 - q
    return out


def weight_process_check(values, fmt: Format, i: int, *, force: bool = False) -> WeightCheckReport:
    """Check the weight of player ``i`` drifts the right way in every state.

    For a strongest player the expected next-round weight must be at least the
    current weight; for a weakest player at most.  Players that are both
    (all values equal) must have zero drift.
    """
    return _engine(values, force).weight_process_check(fmt, i)
