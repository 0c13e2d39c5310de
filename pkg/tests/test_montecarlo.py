import math
from fractions import Fraction

import numpy as np
import pytest

from knockout.core import balanced_format, sequential_format, validate_format
from knockout.exact import win_probabilities
from knockout.montecarlo import SplitMix64, _mix64, estimate, simulate_batch, simulate_once


def test_splitmix_reference_output():
    # first output of the standard SplitMix64 generator seeded with 0
    z = np.array([0x9E3779B97F4A7C15], dtype=np.uint64)
    with np.errstate(over="ignore"):
        assert int(_mix64(z)[0]) == 0xE220A8397B1DCDAF


def test_uniforms_in_range_and_stream_independent_of_batch():
    rng = SplitMix64(7)
    bases = rng.stream_bases(np.arange(10))
    u = SplitMix64.uniforms(bases, 0, 100)
    assert u.min() >= 0 and u.max() < 1
    alone = SplitMix64.uniforms(rng.stream_bases(np.array([3])), 0, 100)
    assert np.array_equal(alone[0], u[3])


def test_bad_seed():
    with pytest.raises(ValueError):
        SplitMix64(-1)
    with pytest.raises(ValueError):
        SplitMix64(1 << 64)


def test_simulate_once_deterministic():
    rng = SplitMix64(99)
    fmt = balanced_format(6)
    a = simulate_once([6, 4, 3, 1, 1, 1], fmt, rng, trial=17)
    b = simulate_once([6, 4, 3, 1, 1, 1], fmt, SplitMix64(99), trial=17)
    assert a == b
    winner, log = a
    assert [len(x) for x in log] == list(fmt.rounds)
    eliminated = [p for row in log for p in row]
    assert sorted(eliminated + [winner]) == list(range(6))


def test_two_players_frequency():
    rep = estimate([3, 1], validate_format(2, [1]), 40_000, seed=1)
    assert abs(rep.point_estimates[0] - 0.75) < 4 * rep.standard_errors[0]


def test_report_fields():
    rep = estimate([2, 1, 1], sequential_format(3), 1000, seed=5)
    assert sum(rep.win_counts) == rep.trials == 1000
    for c, p, se in zip(rep.win_counts, rep.point_estimates, rep.standard_errors):
        assert p == c / 1000
        assert se == pytest.approx(math.sqrt(p * (1 - p) / 1000))
    assert rep.rng_algorithm == "splitmix64-counter/v1"


def test_zero_trials():
    with pytest.raises(ValueError):
        estimate([1, 1], validate_format(2, [1]), 0, seed=1)


def test_independent_of_chunking_and_workers():
    vals, fmt = [6, 4, 3, 1, 1, 1], balanced_format(6)
    a = estimate(vals, fmt, 20_000, seed=3)
    b = estimate(vals, fmt, 20_000, seed=3, chunk_size=999, workers=4)
    assert a == b


def test_three_player_within_three_se():
    rep = estimate([2, 1, 1], validate_format(3, [1, 1]), 100_000, seed=2024)
    assert abs(rep.point_estimates[0] - 14 / 27) <= 3 * rep.standard_errors[0]


def test_uniform_hundred_players():
    rep = estimate([1] * 100, sequential_format(100), 10_000, seed=11)
    se = math.sqrt(0.01 * 0.99 / 10_000)
    # max of 100 roughly normal deviations stays well inside 5 sigma
    assert max(abs(p - 0.01) for p in rep.point_estimates) < 5 * se


def test_consistency_with_exact_over_seeds():
    instances = [
        ([2, 1, 1], validate_format(3, [1, 1])),
        ([5, 3, 2, 1], validate_format(4, [1, 1, 1])),
        ([Fraction(7, 2), 2, 2, 1, Fraction(1, 2)], balanced_format(5)),
        ([6, 4, 3, 1, 1, 1], validate_format(6, [3, 1, 1])),
        ([9, 5, 4, 3, 2, 2, 1, 1], balanced_format(8)),
    ]
    hits = total = 0
    for vals, fmt in instances:
        exact = [float(p) for p in win_probabilities(vals, fmt)]
        for seed in range(50):
            rep = estimate(vals, fmt, 4000, seed=seed)
            for p, phat, se in zip(exact, rep.point_estimates, rep.standard_errors):
                total += 1
                hits += abs(phat - p) <= 4 * max(se, 1e-12)
    assert hits / total >= 0.99


def test_participant_pairs_uniform():
    # one match among four equal players: each pair meets w.p. 1/6
    fmt = validate_format(4, [1, 1, 1])
    trials = 100_000
    _, log = simulate_batch(np.ones(4), fmt, SplitMix64(123), np.arange(trials), log=True)
    # the first-round pair is the first two players of the drawn permutation
    bases = SplitMix64(123).stream_bases(np.arange(trials))
    order = np.argsort(SplitMix64.uniforms(bases, 0, 4), axis=1, kind="stable")
    pair = np.sort(order[:, :2], axis=1)
    codes = pair[:, 0] * 4 + pair[:, 1]
    counts = np.array([np.sum(codes == a * 4 + b) for a in range(4) for b in range(a + 1, 4)])
    expected = trials / 6
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    assert chi2 < 20.5  # 5 dof, p ~ 0.001
    loser = log[0][:, 0]
    assert np.all((loser == pair[:, 0]) | (loser == pair[:, 1]))
