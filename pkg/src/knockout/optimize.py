"""Exhaustive format search and the best/worst-format verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    Format,
    GuardExceeded,
    balanced_decomposition,
    balanced_format,
    enumerate_formats,
    sequential_format,
    validate_format,
)
from .exact import EXACT_GUARD, TournamentEngine

__all__ = [
    "SearchResult",
    "Check",
    "VerificationReport",
    "search_formats",
    "verify_special_case_theorems",
    "verify_weakest_player_theorem",
    "reproduce_counterexamples",
    "nonmonotone_formula",
]


@dataclass(frozen=True)
class SearchResult:
    """Exact win probability of one player under every format."""

    player: int
    objective: str
    table: tuple[tuple[Format, Fraction], ...]
    argmax: tuple[Format, ...]
    argmin: tuple[Format, ...]

    @property
    def best(self) -> tuple[Format, ...]:
        return self.argmax if self.objective == "max" else self.argmin

    @property
    def all_tie(self) -> bool:
        return len(self.argmax) == len(self.table)

    def value(self, fmt: Format | tuple[int, ...]) -> Fraction:
        rounds = fmt.rounds if isinstance(fmt, Format) else tuple(fmt)
        for f, p in self.table:
            if f.rounds == rounds:
                return p
        raise KeyError(rounds)

    def conjecture_evidence(self) -> dict:
        """Whether balanced maximizes and sequential minimizes (evidence only)."""
        n = self.table[0][0].n
        bal, seq = balanced_format(n), sequential_format(n)
        return {
            "balancedIsMax": bal in self.argmax,
            "sequentialIsMin": seq in self.argmin,
        }


def search_formats(values, i: int, objective: str = "max", *,
                   force: bool = False, engine: TournamentEngine | None = None) -> SearchResult:
    """Evaluate ``P_i`` exactly under every valid format."""
    if objective not in ("max", "min"):
        raise ValueError(f"objective must be 'max' or 'min', got {objective!r}")
    engine = engine or TournamentEngine(values, force=force)
    engine.players.check_index(i)
    table = []
    for fmt in enumerate_formats(engine.n, force=force):
        table.append((fmt, engine.win_probabilities(fmt)[i]))
    hi = max(p for _, p in table)
    lo = min(p for _, p in table)
    return SearchResult(
        player=i,
        objective=objective,
        table=tuple(table),
        argmax=tuple(f for f, p in table if p == hi),
        argmin=tuple(f for f, p in table if p == lo),
    )


@dataclass(frozen=True)
class Check:
    name: str
    n: int | None
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    checks: tuple[Check, ...]
    observations: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _check_range(n_max: int, p: Fraction, lo: Fraction, hi: Fraction, force: bool) -> None:
    if not lo < p < hi:
        raise ValueError(f"p must lie in ({lo}, {hi}), got {p}")
    if n_max > EXACT_GUARD and not force:
        raise GuardExceeded(f"n_max={n_max} exceeds the exact-engine guard ({EXACT_GUARD})")
    if n_max < 3:
        raise ValueError(f"n_max must be at least 3, got {n_max}")


def _fmt_list(fmts) -> str:
    return " ".join(f"[{f}]" for f in fmts)


def verify_special_case_theorems(n_max: int, p=Fraction(2, 3), *,
                                 force: bool = False) -> VerificationReport:
    """Best and worst formats for a single strong player among equals.

    With values ``(p/(1-p), 1, ..., 1)`` and ``n = 2**s + k`` this checks for
    each ``n = 3..n_max`` that the balanced format attains the maximum of
    ``P_1`` (uniquely for odd ``n``), that for even ``n`` every maximizer
    opens with ``k`` or ``n/2`` matches, and that one match per round is the
    unique minimizer.
    """
    p = Fraction(p)
    _check_range(n_max, p, Fraction(1, 2), Fraction(1), force)
    v1 = p / (1 - p)
    checks = []
    observed = {}
    for n in range(3, n_max + 1):
        res = search_formats([v1] + [1] * (n - 1), 0, "max", force=force)
        bal, seq = balanced_format(n), sequential_format(n)
        k = balanced_decomposition(n).k
        observed[n] = {"argmax": [str(f) for f in res.argmax],
                       "argmin": [str(f) for f in res.argmin]}
        checks.append(Check("balanced attains max", n, bal in res.argmax,
                            f"argmax {_fmt_list(res.argmax)}"))
        if n % 2:
            checks.append(Check("unique maximizer (odd n)", n, res.argmax == (bal,),
                                f"argmax {_fmt_list(res.argmax)}"))
        else:
            allowed = {k, n // 2} - {0}
            bad = [f for f in res.argmax if f.rounds[0] not in allowed]
            checks.append(Check(f"maximizers open with {sorted(allowed)} matches (even n)", n,
                                not bad, f"argmax {_fmt_list(res.argmax)}"))
        checks.append(Check("sequential is unique minimizer", n, res.argmin == (seq,),
                            f"argmin {_fmt_list(res.argmin)}"))
    return VerificationReport(f"strongest-player formats (p={p})", tuple(checks), observed)


def verify_weakest_player_theorem(n_max: int, p=Fraction(1, 3), *,
                                  force: bool = False) -> VerificationReport:
    """Best and worst formats for a single weak player among equals.

    Values are ``(1, ..., 1, p/(1-p))``: one match per round must maximize the
    weak player's win probability and the balanced format must minimize it.
    ``p = 1/2`` is accepted as a degenerate sanity case where all formats tie.
    """
    p = Fraction(p)
    if p == Fraction(1, 2):
        lo = Fraction(0)
        hi = Fraction(1)
    else:
        lo, hi = Fraction(0), Fraction(1, 2)
    _check_range(n_max, p, lo, hi, force)
    vn = p / (1 - p)
    checks = []
    observed = {}
    for n in range(3, n_max + 1):
        res = search_formats([1] * (n - 1) + [vn], n - 1, "max", force=force)
        bal, seq = balanced_format(n), sequential_format(n)
        observed[n] = {"argmax": [str(f) for f in res.argmax],
                       "argmin": [str(f) for f in res.argmin]}
        if p == Fraction(1, 2):
            checks.append(Check("all formats tie", n, res.all_tie,
                                f"{len(res.argmax)} of {len(res.table)} formats at max"))
            continue
        checks.append(Check("sequential attains max", n, seq in res.argmax,
                            f"argmax {_fmt_list(res.argmax)}"))
        checks.append(Check("balanced attains min", n, bal in res.argmin,
                            f"argmin {_fmt_list(res.argmin)}"))
    return VerificationReport(f"weakest-player formats (p={p})", tuple(checks), observed)


def nonmonotone_formula(x) -> Fraction:
    """Closed form of ``P_1(2, 1, 1, x)`` under format ``[2, 1]``.

    Conditions on whether player 1 meets player 4 in the first round.
    """
    x = Fraction(x)
    two_thirds = Fraction(2, 3)
    meets_x = Fraction(1, 3) * (2 / (2 + x) * two_thirds)
    meets_one = two_thirds * two_thirds * (
        1 / (1 + x) * two_thirds + x / (1 + x) * 2 / (2 + x)
    )
    return meets_x + meets_one


def reproduce_counterexamples() -> VerificationReport:
    """Recompute the two published counterexamples exactly."""
    checks = []
    obs = {}

    f4 = validate_format(4, [2, 1])
    a = TournamentEngine(["2", "1", "1", "1/100"]).win_probabilities(f4)[0]
    b = TournamentEngine(["2", "1", "1", "1/99"]).win_probabilities(f4)[0]
    obs["n4-nonmonotone"] = {"P1(2,1,1,1/100)": a, "P1(2,1,1,1/99)": b}
    checks.append(Check("P1(2,1,1,1/100) = 31600/60903", 4, a == Fraction(31600, 60903), str(a)))
    checks.append(Check("P1(2,1,1,1/99) = 7744/14925", 4, b == Fraction(7744, 14925), str(b)))
    checks.append(Check("P1 increases when v4 grows from 1/100 to 1/99", 4, a < b, str(b - a)))
    c = TournamentEngine([2, 1, 1, 1]).win_probabilities(f4)[0]
    obs["n4-nonmonotone"]["P1(2,1,1,1)"] = c
    checks.append(Check("engine matches conditional formula at v4 = 1", 4,
                        c == nonmonotone_formula(1) == Fraction(4, 9), str(c)))

    values = [6, 4, 3, 1, 1, 1]
    engine = TournamentEngine(values)
    p_bal = engine.win_probabilities(validate_format(6, [2, 2, 1]))[0]
    p_alt = engine.win_probabilities(validate_format(6, [3, 1, 1]))[0]
    obs["n6-halving"] = {"P1[2,2,1]": p_bal, "P1[3,1,1]": p_alt}
    checks.append(Check("P1[2,2,1] rounds to 0.4422", 6, round(float(p_bal), 4) == 0.4422,
                        f"{float(p_bal):.6f}"))
    checks.append(Check("P1[3,1,1] rounds to 0.4412", 6, round(float(p_alt), 4) == 0.4412,
                        f"{float(p_alt):.6f}"))
    checks.append(Check("P1[2,2,1] > P1[3,1,1]", 6, p_bal > p_alt, str(p_bal - p_alt)))
    return VerificationReport("published counterexamples", tuple(checks), obs)

