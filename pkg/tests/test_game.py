from fractions import Fraction

import numpy as np
import pytest

from conftest import FULL_ET_DEN, FULL_ET_NUM
from rendezvous.combinatorics import HOME, enumerate_tours, labeling_pairs, meeting_outcome
from rendezvous.game import (
    _class_polys,
    aw_expected_time,
    aw_optimal_p,
    enumerate_paths,
    full_game_et,
    improvement_at,
    placements,
    tour_count_breakdown,
)
from rendezvous.blocks import outcome_tables, survival_sequence
from rendezvous import kernels
from rendezvous.numerics import Polynomial, QuadraticNumber, RationalFunction, quadratic_eval, to_decimal
from rendezvous.patterns import uniform_pattern_distribution, y_distribution

F = Fraction
P_STAR = QuadraticNumber(F(-77, 4), F(3, 4))
ET_STAR = QuadraticNumber(F(15, 12), F(1, 12))
REFERENCE_ET = RationalFunction(Polynomial(FULL_ET_NUM), Polynomial(FULL_ET_DEN))


@pytest.fixture(scope="module")
def y_eval():
    return full_game_et(y_distribution())


# independent-tour baseline -----------------------------------------------------


def test_aw_formula():
    f = aw_expected_time()
    assert f == RationalFunction(Polynomial([43, -14, 25]), Polynomial([9, 18, -27]))
    assert f(F(0)) == F(43, 9)
    assert f.den(F(1)) == 0


def test_aw_optimum():
    p = aw_optimal_p()
    assert p == P_STAR
    assert quadratic_eval(aw_expected_time(), p) == ET_STAR
    assert to_decimal(p, 6) == "0.321983"
    assert to_decimal(ET_STAR, 6) == "3.42466"


def test_aw_optimum_is_local_minimum():
    f = aw_expected_time()
    best = float(ET_STAR)
    assert float(f(F(3, 10))) > best and float(f(F(35, 100))) > best


# paths -------------------------------------------------------------------------


def test_path_counts_for_y():
    paths = enumerate_paths(y_distribution())
    assert len(paths) == 1585
    assert tour_count_breakdown(paths) == [1, 24, 216, 864, 480]
    assert sum(pa.prob() for pa in paths[1:]) + paths[0].prob() == Polynomial([1])


def test_path_counts_for_uniform():
    paths = enumerate_paths(uniform_pattern_distribution(4))
    assert len(paths) == 7**4
    assert tour_count_breakdown(paths) == [placements(t) * 6**t for t in range(5)]


def test_path_descriptions():
    paths = enumerate_paths(y_distribution())
    assert paths[0].describe() == "H H H H"
    assert paths[0].actions == (0, 0, 0, 0)


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        enumerate_paths(uniform_pattern_distribution(3))


# full evaluation -----------------------------------------------------------------


def test_y_matches_reference_function(y_eval):
    assert y_eval.et == REFERENCE_ET
    assert y_eval.identities_hold()
    assert y_eval.n_paths == 1585


def test_y_at_zero(y_eval):
    assert y_eval.et(F(0)) == F(217648, 45597)
    assert float(y_eval.et(F(0))) == pytest.approx(4.7733, abs=5e-5)
    assert y_eval.et(F(0)) < F(43, 9)


def test_uniform_matches_baseline():
    ev = full_game_et(uniform_pattern_distribution(4))
    assert ev.et == aw_expected_time()
    assert ev.identities_hold()


def test_all_touring_cycle_agrees_with_survival_sequence(y_eval):
    # at p = 0 every block is a tour, so block masses follow the survival q_t
    q = (F(1),) + survival_sequence(y_distribution())
    assert y_eval.survival(F(0)) == q[4] == F(1001, 16200)
    for b in range(4):
        block = sum(y_eval.meet_step_mass[3 * b + s](F(0)) for s in range(3))
        assert block == q[b] - q[b + 1]


def test_reduced_labelings_agree(y_eval):
    assert full_game_et(y_distribution(), reduced=True).et == y_eval.et


def test_improvement():
    v = improvement_at(P_STAR)
    expected = QuadraticNumber(F(243 * 75041961207, 327540887401488016), F(243 * 4700853101, 327540887401488016))
    assert v == expected
    assert to_decimal(v, 6) == "0.000146683"
    assert improvement_at(0) == F(43, 9) - F(217648, 45597)
    assert improvement_at(0) > 0


def test_improvement_rejects_p_one():
    with pytest.raises(ValueError):
        improvement_at(1)


def test_meeting_histogram_symmetric():
    paths = enumerate_paths(y_distribution())
    acts = np.array([pa.actions for pa in paths], dtype=np.int8)
    cls, _, _ = _class_polys(paths)
    n = int(cls.max()) + 1
    hist = kernels.first_meet_counts(acts, cls, acts, cls, outcome_tables(), n, n, 3)
    np.testing.assert_array_equal(hist, hist.transpose(0, 2, 1))


def test_kernel_matches_block_engine_on_random_paths():
    tours = [HOME, *enumerate_tours(4)]
    rng = np.random.default_rng(3)
    paths = enumerate_paths(y_distribution())
    pick = rng.choice(len(paths), size=(40, 2))
    tables = outcome_tables()
    pairs = labeling_pairs(4)
    for i, j in pick:
        a, b = paths[i].actions, paths[j].actions
        got = kernels.first_meet_counts(np.array([a]), np.array([0]), np.array([b]), np.array([0]), tables, 1, 1, 3)
        want = np.zeros(13, dtype=np.int64)
        for li, lii in pairs:
            step = 0
            for blk in range(4):
                s = meeting_outcome(tours[a[blk]], tours[b[blk]], li, lii)
                if s is not None:
                    step = 3 * blk + s
                    break
            want[step] += 1
        np.testing.assert_array_equal(got[:, 0, 0], want)
