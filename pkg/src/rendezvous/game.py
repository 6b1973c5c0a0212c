"""The 12-step block strategy on K4 and its exact expected meeting time as
a rational function of the home probability ``p``.

In each of 4 blocks a player stays home with probability ``p`` or tours
with probability ``1 - p``.  The tours he actually makes follow the pattern
law truncated to however many blocks he spent touring.  If the players have
not met after 12 steps, everything restarts from scratch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from . import kernels
from .blocks import BLOCK_LEN, outcome_tables
from .combinatorics import average_meeting_stats, enumerate_tours, stayer_tourer_mean
from .numerics import Polynomial, QuadraticNumber, RationalFunction, quadratic_eval, quadratic_roots
from .patterns import PatternDistribution, pattern_of, prefix_marginal, realization_count, y_distribution

N_BLOCKS = 4
N_STEPS = N_BLOCKS * BLOCK_LEN
HOME_CODE = 0

P = Polynomial.x()
ONE = Polynomial([1])


# --------------------------------------------------------------------------
# Independent-tour baseline
# --------------------------------------------------------------------------


def aw_expected_time() -> RationalFunction:
    """Expected meeting time when every block is an independent choice
    between staying home (probability p) and a uniformly random tour.

    Built from the one-block case analysis: both home never meet; one home
    and one touring always meet, at the mean stayer/tourer step; two tours
    meet with the average tour-pair probability at its conditional mean
    step.  A failed block costs its full length and the game renews.
    """
    meet, cond_mean = average_meeting_stats(4)
    mixed_mean = stayer_tourer_mean(4)
    q = 1 - P
    both_home, one_home, both_tour = P * P, 2 * P * q, q * q
    fail = both_home + both_tour * (1 - meet)
    cost = both_home * BLOCK_LEN + one_home * mixed_mean + both_tour * (meet * cond_mean + (1 - meet) * BLOCK_LEN)
    # ET = cost + fail * ET
    return RationalFunction(cost, ONE - fail).canonical()


def _interior_minimizer(f: RationalFunction) -> QuadraticNumber:
    roots = [r for r in quadratic_roots(f.stationary_numerator()) if 0 < r < 1]
    if len(roots) != 1:
        raise ArithmeticError(f"expected one stationary point in (0, 1), found {len(roots)}")
    r = roots[0]
    # second-order check on both sides
    x, h = float(r), 1e-4
    val = float(quadratic_eval(f, r))
    g = lambda t: float(f.num(Fraction(t))) / float(f.den(Fraction(t)))  # noqa: E731
    if not (g(x - h) > val and g(x + h) > val):
        raise ArithmeticError("stationary point is not a local minimum")
    return r


def aw_optimal_p() -> QuadraticNumber:
    """Exact minimizer of :func:`aw_expected_time` on (0, 1)."""
    return _interior_minimizer(aw_expected_time())


# --------------------------------------------------------------------------
# Paths
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PlayerPath:
    """One player's actions over the 4 blocks: code 0 is HOME and code k is
    tour k-1 (lexicographic order).  Its probability is
    ``p**(4 - tour_count) * (1 - p)**tour_count * prob_rational``."""

    actions: tuple[int, ...]
    tour_count: int
    prob_rational: Fraction

    @property
    def tours(self) -> tuple[int, ...]:
        return tuple(a - 1 for a in self.actions if a != HOME_CODE)

    @property
    def pattern(self) -> str:
        return pattern_of(self.tours)

    def prob(self) -> Polynomial:
        t = self.tour_count
        return P ** (N_BLOCKS - t) * (ONE - P) ** t * self.prob_rational

    def describe(self) -> str:
        names = ["H"] + [t.name for t in enumerate_tours(4)]
        return " ".join(names[a] for a in self.actions)


def enumerate_paths(dist: PatternDistribution) -> list[PlayerPath]:
    """Every 4-block action sequence of positive probability, in
    lexicographic order of action codes."""
    if dist.length != N_BLOCKS:
        raise ValueError(f"need a pattern law over {N_BLOCKS} tours, got length {dist.length}")
    marginals = {t: prefix_marginal(dist, t) for t in range(1, N_BLOCKS + 1)}
    paths = []
    for acts in product(range(7), repeat=N_BLOCKS):
        tours = [a - 1 for a in acts if a != HOME_CODE]
        t = len(tours)
        if t == 0:
            r = Fraction(1)
        else:
            w = pattern_of(tours)
            r = marginals[t][w] / realization_count(w)
        if r:
            paths.append(PlayerPath(acts, t, r))
    return paths


# --------------------------------------------------------------------------
# Full evaluation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GameEvaluation:
    """``meet_step_mass[s - 1]`` is P(first meeting at step s) within one
    12-step cycle; ``survival`` is P(no meeting in the cycle)."""

    et: RationalFunction
    survival: Polynomial
    meet_step_mass: tuple[Polynomial, ...]
    n_paths: int
    path_mass: Polynomial

    def mass_complete(self) -> bool:
        total = self.survival
        for m in self.meet_step_mass:
            total = total + m
        return total == ONE

    def partition_of_unity(self) -> bool:
        return self.path_mass == ONE

    def identities_hold(self) -> bool:
        return self.mass_complete() and self.partition_of_unity()


def _class_polys(paths: list[PlayerPath]):
    keys: dict[tuple[int, str], int] = {}
    cls = []
    weights: list[Fraction] = []
    counts: list[int] = []
    for path in paths:
        key = (path.tour_count, path.pattern)
        if key not in keys:
            keys[key] = len(keys)
            weights.append(path.prob_rational)
            counts.append(key[0])
        elif weights[keys[key]] != path.prob_rational:
            raise AssertionError("paths in one class carry different probabilities")
        cls.append(keys[key])
    return np.array(cls, dtype=np.intc), weights, counts


def full_game_et(
    dist: PatternDistribution,
    reduced: bool = False,
    backend: Optional[str] = None,
) -> GameEvaluation:
    """Exact expected meeting time of the 12-step restarting strategy.

    Every ordered pair of paths is played out under every labeling pair
    (only player II's six when ``reduced``), the first meeting step is
    histogrammed by path class, and the class weights turn the histogram
    into polynomial masses in ``p``.
    """
    key = (tuple(sorted(dist.probs.items())), reduced, backend)
    if key in _cache:
        return _cache[key]

    paths = enumerate_paths(dist)
    acts = np.array([pa.actions for pa in paths], dtype=np.int8)
    cls, weights, tcounts = _class_polys(paths)
    tables = outcome_tables(reduced)
    n_cls = len(weights)
    hist = kernels.first_meet_counts(acts, cls, acts, cls, tables, n_cls, n_cls, BLOCK_LEN, backend=backend)
    n_lab = len(tables)

    basis = [P ** (2 * N_BLOCKS - t) * (ONE - P) ** t for t in range(2 * N_BLOCKS + 1)]
    masses = []
    for s in range(N_STEPS + 1):
        coef = [Fraction(0)] * (2 * N_BLOCKS + 1)
        h = hist[s]
        for a in range(n_cls):
            for b in range(n_cls):
                c = int(h[a, b])
                if c:
                    coef[tcounts[a] + tcounts[b]] += c * weights[a] * weights[b]
        poly = Polynomial()
        for t, c in enumerate(coef):
            if c:
                poly = poly + basis[t] * (c / n_lab)
        masses.append(poly)

    survival = masses[0]
    steps = masses[1:]
    num = survival * N_STEPS
    for s, m in enumerate(steps, 1):
        num = num + m * s
    et = RationalFunction(num, ONE - survival)

    path_mass = Polynomial()
    for pa in paths:
        path_mass = path_mass + pa.prob()

    result = GameEvaluation(et, survival, tuple(steps), len(paths), path_mass)
    _cache[key] = result
    return result


_cache: dict = {}


def improvement_at(p, dist: Optional[PatternDistribution] = None) -> QuadraticNumber:
    """How much sooner (in expected steps) the patterned strategy meets
    than independent tours, at home probability ``p``."""
    dist = y_distribution() if dist is None else dist
    p = QuadraticNumber.coerce(p)
    if not 0 <= p < 1:
        raise ValueError("p must lie in [0, 1)")
    return quadratic_eval(aw_expected_time(), p) - quadratic_eval(full_game_et(dist).et, p)


def tour_count_breakdown(paths: list[PlayerPath]) -> list[int]:
    out = [0] * (N_BLOCKS + 1)
    for pa in paths:
        out[pa.tour_count] += 1
    return out


def placements(t: int) -> int:
    return math.comb(N_BLOCKS, t)
