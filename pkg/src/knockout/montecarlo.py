"""Seeded Monte Carlo estimation of tournament win probabilities.

Random numbers come from counter-based SplitMix64 streams: trial ``t`` of a
run seeded with ``seed`` owns the stream ``base(seed, t)``, and its ``k``-th
64-bit output is ``mix64(base + (k + 1) * GAMMA)``.  Every trial therefore
draws the same numbers no matter how trials are batched or distributed over
workers, which makes reports reproducible bit for bit.

Each round a trial draws one uniform key per alive player and sorts by it to
get a uniform random permutation; the first ``2m`` players are the
participants and consecutive pairs meet.  It then draws one uniform per match
to decide the winner.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import Format, as_values

__all__ = [
    "RNG_ALGORITHM",
    "SplitMix64",
    "EstimateReport",
    "simulate_batch",
    "simulate_once",
    "estimate",
]

RNG_ALGORITHM = "splitmix64-counter/v1"

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_STREAM_GAMMA = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_U64 = (1 << 64) - 1


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Family of independent counter-based streams keyed by a 64-bit seed."""

    algorithm = RNG_ALGORITHM

    def __init__(self, seed: int):
        if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) <= _U64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.seed = int(seed)
        with np.errstate(over="ignore"):
            self._key = _mix64(np.array([self.seed], dtype=np.uint64))[0]

    def stream_bases(self, trials: np.ndarray) -> np.ndarray:
        t = np.asarray(trials, dtype=np.uint64)
        with np.errstate(over="ignore"):
            return _mix64(self._key + (t + np.uint64(1)) * _STREAM_GAMMA)

    @staticmethod
    def uniforms(bases: np.ndarray, start: int, count: int) -> np.ndarray:
        """Draws ``start .. start+count-1`` of each stream as doubles in [0, 1)."""
        k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = _mix64(bases[:, None] + k[None, :] * _GAMMA)
        return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def simulate_batch(strengths: np.ndarray, fmt: Format, rng: SplitMix64,
                   trials: np.ndarray, log: bool = False):
    """Play one tournament per entry of ``trials``.

    Returns the winner of each trial and, when ``log`` is set, a list with one
    ``(len(trials), m_s)`` array of eliminated players per round.
    """
    v = np.asarray(strengths, dtype=np.float64)
    n = v.shape[0]
    if fmt.n != n:
        raise ValueError(f"format is for {fmt.n} players, instance has {n}")
    bases = rng.stream_bases(trials)
    count = bases.shape[0]
    alive = np.tile(np.arange(n), (count, 1))
    eliminated = []
    cursor = 0
    for m in fmt.rounds:
        width = alive.shape[1]
        keys = SplitMix64.uniforms(bases, cursor, width)
        cursor += width
        order = np.argsort(keys, axis=1, kind="stable")
        shuffled = np.take_along_axis(alive, order, axis=1)
        a = shuffled[:, 0:2 * m:2]
        b = shuffled[:, 1:2 * m:2]
        u = SplitMix64.uniforms(bases, cursor, m)
        cursor += m
        a_wins = u < v[a] / (v[a] + v[b])
        winners = np.where(a_wins, a, b)
        if log:
            eliminated.append(np.where(a_wins, b, a))
        alive = np.concatenate([winners, shuffled[:, 2 * m:]], axis=1)
    winner = alive[:, 0]
    return (winner, eliminated) if log else winner


def simulate_once(values, fmt: Format, rng: SplitMix64, trial: int = 0):
    """One tournament on stream ``trial``: ``(winner, eliminated per round)``."""
    pv = as_values(values)
    strengths = [float(x) for x in pv.original]
    winner, elim = simulate_batch(strengths, fmt, rng, np.array([trial]), log=True)
    return int(winner[0]), [tuple(int(x) for x in row[0]) for row in elim]


@dataclass(frozen=True)
class EstimateReport:
    win_counts: tuple[int, ...]
    trials: int
    seed: int
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def point_estimates(self) -> tuple[float, ...]:
        return tuple(c / self.trials for c in self.win_counts)

    @property
    def standard_errors(self) -> tuple[float, ...]:
        return tuple(math.sqrt(p * (1 - p) / self.trials) for p in self.point_estimates)

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "rngAlgorithm": self.rng_algorithm,
            "winCounts": list(self.win_counts),
        }


def estimate(values, fmt: Format, trials: int, seed: int, *,
             chunk_size: int = 50_000, workers: int = 1) -> EstimateReport:
    """Estimate every player's win probability from ``trials`` tournaments."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    pv = as_values(values)
    strengths = np.array([float(x) for x in pv.original])
    rng = SplitMix64(seed)
    chunks = [np.arange(lo, min(lo + chunk_size, trials)) for lo in range(0, trials, chunk_size)]

    def run(idx: np.ndarray) -> np.ndarray:
        return np.bincount(simulate_batch(strengths, fmt, rng, idx), minlength=pv.n)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    counts = np.sum(parts, axis=0)
    return EstimateReport(tuple(int(c) for c in counts), trials, rng.seed)
