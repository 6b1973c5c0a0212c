"""The twelve acceptance criteria, each at its stated tolerance and time
budget.  A PASS/FAIL line per criterion is printed in the terminal summary."""
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import FULL_ET_DEN, FULL_ET_NUM
from rendezvous import blocks, game
from rendezvous.combinatorics import Labeling, average_meeting_stats, block_meeting_table
from rendezvous.montecarlo import estimate_et
from rendezvous.numerics import D, Polynomial, QuadraticNumber, RationalFunction, to_decimal
from rendezvous.optimize import minimize_full_game_p, minimize_pattern_distribution
from rendezvous.patterns import (
    PatternDistribution,
    enumerate_patterns,
    prefix_marginal,
    uniform_pattern_distribution,
    y_distribution,
)
from rendezvous.reproduce import EIGVEC_TEMPLATE

F = Fraction
P_STAR = QuadraticNumber(F(-77, 4), F(3, 4))
ET_STAR = QuadraticNumber(F(15, 12), F(1, 12))
IMPROVEMENT = QuadraticNumber(F(243 * 75041961207, 327540887401488016), F(243 * 4700853101, 327540887401488016))


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed <= seconds, f"took {elapsed:.2f} s, budget {seconds} s"


@pytest.mark.criterion(1, "B-matrix exactness")
def test_b_matrix(reference):
    with budget(1):
        table = block_meeting_table(Labeling(1, (2, 3, 4)), Labeling(2, (1, 3, 4)))
    assert table == reference["B"]


@pytest.mark.criterion(2, "meeting statistics 1/2 and 16/9")
def test_meeting_statistics():
    with budget(1):
        stats = average_meeting_stats(4)
    assert stats == (F(1, 2), F(16, 9))


@pytest.mark.criterion(3, "not-meet matrices P2, P3, P4")
def test_not_meet_matrices(ref_matrix):
    with budget(600):
        fresh = blocks.not_meet_matrix.__wrapped__(4)
    assert fresh.entries == ref_matrix(4).entries
    with budget(60):
        for k in (2, 3, 4):
            assert blocks.not_meet_matrix(k).entries == ref_matrix(k).entries


@pytest.mark.criterion(4, "definiteness of P2, P3, P4 and eigenvector classes")
def test_definiteness():
    with budget(10):
        p2 = blocks.definiteness(blocks.not_meet_matrix(2))
        p3 = blocks.definiteness(blocks.not_meet_matrix(3))
        p4 = blocks.definiteness(blocks.not_meet_matrix(4))
        classes = blocks.negative_eigvec_structure(blocks.not_meet_matrix(4))
    assert p2.classification == "PositiveDefinite"
    assert p3.negative == 0
    assert p4.classification == "Indefinite"
    assert blocks.not_meet_matrix(4).quadratic_form(p4.witness) == p4.witness_value < 0
    assert classes == EIGVEC_TEMPLATE
    assert [len(c) for c in classes] == [1, 4, 3, 6, 1]


@pytest.mark.criterion(5, "touring-block expected times")
def test_tstep_values():
    for k in range(1, 5):
        blocks.not_meet_matrix(k)
    with budget(1):
        uniform = [blocks.tstep_et_tail(uniform_pattern_distribution(k)) for k in range(1, 5)]
        tail = blocks.tstep_et_tail(y_distribution())
        renewal = blocks.tstep_et_renewal(y_distribution())
    assert uniform == [2, 2, 2, 2]
    assert tail == 2 - F(23, 16200)
    assert to_decimal(tail, 6) == "1.99858"
    assert renewal == F(30375, 15199)


@pytest.mark.criterion(6, "path enumeration and partition of unity")
def test_paths():
    with budget(5):
        paths = game.enumerate_paths(y_distribution())
        mass = sum((pa.prob() for pa in paths), Polynomial())
    assert len(paths) == 1585
    assert game.tour_count_breakdown(paths) == [1, 24, 216, 864, 480]
    assert mass == Polynomial([1])


@pytest.mark.criterion(7, "symbolic ET(p) for y and for independent tours")
def test_symbolic_et():
    game._cache.clear()
    with budget(900):
        y_ev = game.full_game_et(y_distribution())
        u_ev = game.full_game_et(uniform_pattern_distribution(4))
    assert y_ev.et == RationalFunction(Polynomial(FULL_ET_NUM), Polynomial(FULL_ET_DEN))
    assert u_ev.et == RationalFunction(Polynomial([43, -14, 25]), Polynomial([9, 18, -27]))
    assert y_ev.identities_hold() and u_ev.identities_hold()


@pytest.mark.criterion(8, "exact improvement at the optimal p")
def test_improvement():
    game.full_game_et(y_distribution())
    with budget(1):
        v = game.improvement_at(game.aw_optimal_p())
    assert v == IMPROVEMENT
    assert to_decimal(v, 6) == "0.000146683"


@pytest.mark.criterion(9, "independent-tour baseline p* and ET*")
def test_baseline():
    with budget(1):
        p = game.aw_optimal_p()
        et = game.aw_expected_time()(p)
    assert p == P_STAR and et == ET_STAR
    assert to_decimal(p, 6) == "0.321983"
    assert to_decimal(et, 6) == "3.42466"


@pytest.mark.criterion(10, "Monte Carlo concordance at 10^7 trials")
def test_monte_carlo():
    p = float(P_STAR)
    with budget(300):
        reports = []
        for seed, dist in ((101, y_distribution()), (202, uniform_pattern_distribution(4))):
            exact = float(game.full_game_et(dist).et(P_STAR))
            reports.append(estimate_et(p, dist, 10**7, seed, exact=exact))
    for rep in reports:
        assert abs(rep.z_score) <= 4, rep


def _random_law(rng):
    pats = enumerate_patterns(4)
    w = [rng.randint(0, 20) for _ in pats]
    w[rng.randrange(len(w))] += 1
    return PatternDistribution(4, {p: F(c, sum(w)) for p, c in zip(pats, w)})


def _random_quadratic(rng):
    return QuadraticNumber(F(rng.randint(-50, 50), rng.randint(1, 30)), F(rng.randint(-50, 50), rng.randint(1, 30)))


@pytest.mark.criterion(11, "property suites")
def test_properties():
    rng = random.Random(11)
    with budget(60):
        for _ in range(200):
            d = _random_law(rng)
            q = blocks.survival_sequence(d)
            assert all(0 <= b <= a <= 1 for a, b in zip(q, q[1:]))
            for t in range(1, 5):
                for s in range(1, t + 1):
                    assert prefix_marginal(prefix_marginal(d, t), s).probs == prefix_marginal(d, s).probs
        for k in range(1, 5):
            u = uniform_pattern_distribution(k).vector()
            assert blocks.not_meet_matrix(k).quadratic_form(u) == F(1, 2**k)
        zero, one = QuadraticNumber(0, 0), QuadraticNumber(1, 0)
        for _ in range(10**4):
            a, b, c = (_random_quadratic(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a and a * b == b * a
            assert a + zero == a and a * one == a
            if a != zero:
                assert a * a.inverse() == one
            assert a.norm() == a.a**2 - D * a.b**2


@pytest.mark.criterion(12, "optimizer sanity")
def test_optimizer():
    with budget(300):
        k2 = minimize_pattern_distribution(2, "tail", starts=16, seed=0)
        k3 = minimize_pattern_distribution(3, "tail", starts=16, seed=0)
        k4 = minimize_pattern_distribution(4, "tail", starts=16, seed=0)
        full = minimize_full_game_p(y_distribution())
    assert k2.value == 2 and k3.value == 2
    assert k4.value <= 2 - F(23, 16200)
    assert full.value < ET_STAR - F(146, 10**6)
