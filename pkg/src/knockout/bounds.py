"""Closed-form bounds on tournament win probabilities, all exact.

The order-dependent bounds (the surrogate lower bound and its weaker
single-opponent relaxation) are evaluated on the canonical ordering and
reported against the caller's original index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import Format, as_values, balanced_decomposition, mean_opponent_win_prob

__all__ = [
    "SurrogateGameCount",
    "PlayerBounds",
    "BoundsReport",
    "theorem1_bounds",
    "product_bound",
    "thm2_upper",
    "poisson_binomial_pmf",
    "surrogate_game_count",
    "thm3_lower",
    "weak_lower",
    "universal_upper",
    "bounds_report",
]


def product_bound(p, fmt: Format) -> Fraction:
    """``prod_s (q_s p + 1 - q_s)`` with ``q_s = 2 m_s / r_s``."""
    p = Fraction(p)
    out = Fraction(1)
    for q in fmt.play_fractions():
        out *= q * p + 1 - q
    return out


def theorem1_bounds(values) -> tuple[Fraction, Fraction]:
    """(lower bound on the strongest player's P, upper bound on the weakest's)."""
    pv = as_values(values)
    total = sum(pv.values)
    return pv.values[0] / total, pv.values[-1] / total


def thm2_upper(values, fmt: Format, i: int) -> Fraction:
    """Upper bound from playing every match at the mean-opponent win rate."""
    return product_bound(mean_opponent_win_prob(values, i), fmt)


@dataclass(frozen=True)
class SurrogateGameCount:
    """Law of the number of matches played by a player's surrogate chain."""

    pmf: tuple[Fraction, ...]
    round_probs: tuple[Fraction, ...]

    def support(self) -> list[int]:
        return [g for g, p in enumerate(self.pmf) if p]

    def mean(self) -> Fraction:
        return sum(g * p for g, p in enumerate(self.pmf))


def poisson_binomial_pmf(probs: Sequence) -> SurrogateGameCount:
    """Exact pmf of a sum of independent Bernoulli(``probs[j]``) variables."""
    probs = tuple(Fraction(p) for p in probs)
    for p in probs:
        if not 0 <= p <= 1:
            raise ValueError(f"probability {p} outside [0, 1]")
    pmf = [Fraction(1)]
    for p in probs:
        nxt = [Fraction(0)] * (len(pmf) + 1)
        for g, w in enumerate(pmf):
            nxt[g] += w * (1 - p)
            nxt[g + 1] += w * p
        pmf = nxt
    return SurrogateGameCount(tuple(pmf), probs)


def surrogate_game_count(fmt: Format) -> SurrogateGameCount:
    return poisson_binomial_pmf(fmt.play_fractions())


def _thm3_canonical(v: Sequence[Fraction], c: int, pmf: Sequence[Fraction]) -> Fraction:
    # g games against the strongest possible opponents, skipping oneself
    vi = v[c]
    beat = [vi / (vi + vk) for vk in v]
    total = Fraction(0)
    for g, pg in enumerate(pmf):
        if not pg:
            continue
        term = Fraction(1)
        for k in range(min(g, c)):
            term *= beat[k]
        for k in range(c + 1, g + 1):
            term *= beat[k]
        total += pg * term
    return total


def thm3_lower(values, fmt: Format, i: int) -> Fraction:
    """Surrogate lower bound on ``P_i``."""
    pv = as_values(values)
    c = pv.canonical_index(i)
    return _thm3_canonical(pv.values, c, surrogate_game_count(fmt).pmf)


def weak_lower(values, fmt: Format, i: int) -> Fraction:
    """Relaxed lower bound: every opponent is the strongest player.

    Defined only for players other than the canonical strongest.
    """
    pv = as_values(values)
    c = pv.canonical_index(i)
    if c == 0:
        raise ValueError("weak lower bound is defined only for players below the strongest")
    vi = pv.values[c]
    return product_bound(vi / (vi + pv.values[0]), fmt)


def universal_upper(values, i: int) -> Fraction:
    """Upper bound on ``P_i`` valid for every format."""
    pv = as_values(values)
    p = mean_opponent_win_prob(pv, i)
    n = pv.n
    if p == Fraction(1, 2):
        return Fraction(1, n)
    if p > Fraction(1, 2):
        d = balanced_decomposition(n)
        q = Fraction(2 * d.k, n)
        return (q * p + 1 - q) * p ** d.s
    out = Fraction(1)
    for j in range(1, n):
        q = Fraction(2, n - j + 1)
        out *= q * p + 1 - q
    return out


@dataclass(frozen=True)
class PlayerBounds:
    index: int
    mean_opponent_win_prob: Fraction
    theorem1: Optional[Fraction]
    theorem1_kind: Optional[str]
    thm2_upper: Fraction
    thm3_lower: Fraction
    weak_lower: Optional[Fraction]
    universal_upper: Fraction
    corollary2: bool


@dataclass(frozen=True)
class BoundsReport:
    format: Format
    surrogate: SurrogateGameCount
    players: tuple[PlayerBounds, ...]

    def lower(self, i: int) -> Fraction:
        """Best available lower bound for original player ``i``."""
        b = self.players[i]
        cands = [b.thm3_lower]
        if b.theorem1_kind == "lower":
            cands.append(b.theorem1)
        return max(cands)

    def upper(self, i: int) -> Fraction:
        b = self.players[i]
        cands = [b.thm2_upper, b.universal_upper]
        if b.theorem1_kind == "upper":
            cands.append(b.theorem1)
        return min(cands)


def bounds_report(values, fmt: Format) -> BoundsReport:
    """Every analytic bound for every player (original order)."""
    pv = as_values(values)
    if fmt.n != pv.n:
        raise ValueError(f"format is for {fmt.n} players, instance has {pv.n}")
    surrogate = surrogate_game_count(fmt)
    lo1, hi_n = theorem1_bounds(pv)
    n = pv.n
    players = []
    for i in range(n):
        c = pv.canonical_index(i)
        p = mean_opponent_win_prob(pv, i)
        if c == 0:
            t1, kind = lo1, "lower"
        elif c == n - 1:
            t1, kind = hi_n, "upper"
        else:
            t1, kind = None, None
        uu = universal_upper(pv, i)
        players.append(PlayerBounds(
            index=i,
            mean_opponent_win_prob=p,
            theorem1=t1,
            theorem1_kind=kind,
            thm2_upper=product_bound(p, fmt),
            thm3_lower=_thm3_canonical(pv.values, c, surrogate.pmf),
            weak_lower=weak_lower(pv, fmt, i) if c > 0 else None,
            universal_upper=uu,
            corollary2=p < Fraction(1, 2) and uu < Fraction(1, n),
        ))
    return BoundsReport(fmt, surrogate, tuple(players))
