"""Players, formats and elementary Bradley-Terry match probabilities.

All strengths are held as :class:`fractions.Fraction` so that every downstream
quantity stays exact.  Player values are stored twice: in the order the user
supplied them and in canonical (non-increasing, stable) order.  Functions that
take a player index expect the *original* index; canonical order is an
internal convenience.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "KnockoutError",
    "InstanceError",
    "FormatError",
    "GuardExceeded",
    "PlayerValues",
    "Format",
    "BalancedDecomposition",
    "as_values",
    "parse_rational",
    "parse_instance",
    "parse_format",
    "match_win_prob",
    "mean_opponent_win_prob",
    "validate_format",
    "balanced_format",
    "sequential_format",
    "balanced_decomposition",
    "count_formats",
    "enumerate_formats",
    "FORMAT_ENUMERATION_GUARD",
]

RationalLike = Union[Fraction, int, str]

FORMAT_ENUMERATION_GUARD = 16


class KnockoutError(Exception):
    """Base class for errors raised by this package."""


class InstanceError(KnockoutError, ValueError):
    """Malformed or invalid player values."""


class FormatError(KnockoutError, ValueError):
    """A round schedule that violates the format constraints.

    ``round`` is the 1-based round at fault, or ``None`` when the problem is
    not tied to a single round (e.g. the match total).
    """

    def __init__(self, message: str, round: int | None = None):
        super().__init__(message)
        self.round = round


class GuardExceeded(KnockoutError):
    """Requested problem size is above a computational guard."""


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"3"``, ``"1/100"`` or ``"2.5"`` exactly.

    Floats are refused; their binary expansion is rarely what was meant.
    """
    if isinstance(text, bool):
        raise InstanceError(f"not a rational: {text!r}")
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise InstanceError(f"float {text!r} is ambiguous; pass it as a string")
    if not isinstance(text, str):
        raise InstanceError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"malformed rational {text!r}") from exc


@dataclass(frozen=True)
class PlayerValues:
    """Exact positive player strengths.

    ``values`` is canonical (sorted non-increasing, ties kept in input order);
    ``permutation[c]`` is the original index of canonical player ``c``.
    """

    values: tuple[Fraction, ...]
    permutation: tuple[int, ...]
    original: tuple[Fraction, ...] = field(repr=False)

    @classmethod
    def from_values(cls, values: Iterable[RationalLike]) -> "PlayerValues":
        parsed = []
        for pos, raw in enumerate(values):
            try:
                v = parse_rational(raw)
            except InstanceError as exc:
                raise InstanceError(f"values[{pos}]: {exc}") from None
            if v <= 0:
                raise InstanceError(f"values[{pos}] = {raw!r} is not positive")
            parsed.append(v)
        if len(parsed) < 2:
            raise InstanceError(f"need at least 2 players, got {len(parsed)}")
        order = sorted(range(len(parsed)), key=lambda k: -parsed[k])
        return cls(
            values=tuple(parsed[k] for k in order),
            permutation=tuple(order),
            original=tuple(parsed),
        )

    @property
    def n(self) -> int:
        return len(self.values)

    def canonical_index(self, i: int) -> int:
        """Canonical position of original player ``i``."""
        self.check_index(i)
        return self.permutation.index(i)

    def check_index(self, i: int) -> None:
        if not isinstance(i, int) or not 0 <= i < self.n:
            raise IndexError(f"player index {i!r} out of range for {self.n} players")

    def to_original(self, canonical: Sequence) -> list:
        """Reorder a canonically indexed sequence into input order."""
        out = [None] * self.n
        for c, orig in enumerate(self.permutation):
            out[orig] = canonical[c]
        return out

    def scaled(self, c: RationalLike) -> "PlayerValues":
        c = parse_rational(c)
        return PlayerValues.from_values(v * c for v in self.original)

    def to_json(self) -> dict:
        return {"values": [_frac_str(v) for v in self.original]}


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def as_values(values) -> PlayerValues:
    """Accept a :class:`PlayerValues` or any sequence of rational-likes."""
    if isinstance(values, PlayerValues):
        return values
    return PlayerValues.from_values(values)


def parse_instance(text: str | dict) -> PlayerValues:
    """Read an instance document ``{"values": ["2", "1/3", ...]}``."""
    if isinstance(text, dict):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"instance is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "values" not in doc:
        raise InstanceError('instance must be an object with a "values" array')
    if not isinstance(doc["values"], list):
        raise InstanceError('"values" must be an array')
    return PlayerValues.from_values(doc["values"])


def match_win_prob(vi: RationalLike, vj: RationalLike) -> Fraction:
    """Probability that strength ``vi`` beats strength ``vj``."""
    vi, vj = parse_rational(vi), parse_rational(vj)
    if vi <= 0 or vj <= 0:
        raise ValueError(f"strengths must be positive, got {vi} and {vj}")
    return vi / (vi + vj)


def mean_opponent_win_prob(values, i: int) -> Fraction:
    """Chance that player ``i`` beats an opponent drawn uniformly from the rest."""
    pv = as_values(values)
    pv.check_index(i)
    vi = pv.original[i]
    total = sum(vi / (vi + vj) for j, vj in enumerate(pv.original) if j != i)
    return total / (pv.n - 1)


@dataclass(frozen=True)
class Format:
    """Matches per round, ``rounds[s]`` for round ``s + 1``."""

    n: int
    rounds: tuple[int, ...]

    @property
    def alive_counts(self) -> tuple[int, ...]:
        """Players alive at the start of each round (length ``len(rounds)``)."""
        counts = [self.n]
        for m in self.rounds[:-1]:
            counts.append(counts[-1] - m)
        return tuple(counts)

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)

    def play_fractions(self) -> tuple[Fraction, ...]:
        """Per-round chance that a given alive player is drawn to play."""
        return tuple(
            Fraction(2 * m, r) for m, r in zip(self.rounds, self.alive_counts)
        )

    def __str__(self) -> str:
        return ",".join(map(str, self.rounds))


def validate_format(n: int, rounds: Sequence[int]) -> Format:
    if n < 2:
        raise FormatError(f"need at least 2 players, got {n}")
    rounds = tuple(rounds)
    if not rounds:
        raise FormatError("format has no rounds")
    alive = n
    for s, m in enumerate(rounds, start=1):
        if not isinstance(m, int) or m < 1:
            raise FormatError(f"round {s}: match count {m!r} must be a positive integer", s)
        if 2 * m > alive:
            raise FormatError(
                f"round {s}: {m} matches need {2 * m} players but only {alive} are alive",
                s,
            )
        alive -= m
    if sum(rounds) != n - 1:
        raise FormatError(
            f"matches sum to {sum(rounds)}, expected n - 1 = {n - 1}"
        )
    return Format(n, rounds)


def parse_format(n: int, text: str) -> Format:
    """``"balanced"``, ``"sequential"`` or a comma list such as ``"2,2,1"``."""
    key = text.strip().lower()
    if key == "balanced":
        return balanced_format(n)
    if key == "sequential":
        return sequential_format(n)
    try:
        rounds = [int(tok) for tok in key.split(",")]
    except ValueError:
        raise FormatError(f"cannot parse format {text!r}") from None
    return validate_format(n, rounds)


@dataclass(frozen=True)
class BalancedDecomposition:
    s: int
    k: int


def balanced_decomposition(n: int) -> BalancedDecomposition:
    """Unique ``(s, k)`` with ``n = 2**s + k`` and ``0 <= k < 2**s``."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    s = n.bit_length() - 1
    return BalancedDecomposition(s, n - (1 << s))


def balanced_format(n: int) -> Format:
    """``k`` matches first, then halve the field every round."""
    d = balanced_decomposition(n)
    rounds = [d.k] if d.k else []
    rounds += [1 << e for e in range(d.s - 1, -1, -1)]
    return validate_format(n, rounds)


def sequential_format(n: int) -> Format:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return validate_format(n, [1] * (n - 1))


def count_formats(n: int) -> int:
    """Number of valid formats, ``f(n) = sum_{m=1}^{n//2} f(n - m)``."""
    f = [0, 1]
    for t in range(2, n + 1):
        f.append(sum(f[t - m] for m in range(1, t // 2 + 1)))
    return f[n]


def enumerate_formats(n: int, force: bool = False) -> list[Format]:
    """All valid formats for ``n`` players in lexicographic order."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n > FORMAT_ENUMERATION_GUARD and not force:
        raise GuardExceeded(
            f"n={n} exceeds the enumeration guard ({FORMAT_ENUMERATION_GUARD}); "
            "pass force=True to enumerate anyway"
        )
    out: list[Format] = []

    def extend(prefix: list[int], alive: int) -> None:
        if alive == 1:
            out.append(Format(n, tuple(prefix)))
            return
        for m in range(1, alive // 2 + 1):
            prefix.append(m)
            extend(prefix, alive - m)
            prefix.pop()

    extend([], n)
    return out
