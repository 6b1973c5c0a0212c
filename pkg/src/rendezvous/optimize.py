"""Minimizing expected meeting time over the home probability and over
pattern laws."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .blocks import MatrixSource, _matrix, tstep_et_renewal, tstep_et_tail
from .game import aw_expected_time, aw_optimal_p, full_game_et
from .numerics import RationalFunction, quadratic_eval
from .patterns import (
    PatternDistribution,
    enumerate_patterns,
    prefix_matrix,
    uniform_pattern_distribution,
    y_distribution,
)

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class OptimizationResult:
    argmin: object
    value: object
    certificate: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# Home probability
# --------------------------------------------------------------------------


def minimize_aw() -> OptimizationResult:
    f = aw_expected_time()
    p = aw_optimal_p()
    slope = quadratic_eval(f.stationary_numerator(), p)
    return OptimizationResult(p, quadratic_eval(f, p), {"derivative_at_argmin": slope})


def _golden(fn, a: float, b: float, iters: int = 200) -> float:
    c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if b - a < 1e-12:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fn(d)
    return (a + b) / 2


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def minimize_rational_function(
    f: RationalFunction,
    lo: Fraction = Fraction(0),
    hi: Fraction = Fraction(1) - Fraction(1, 10**6),
    tol: float = 1e-10,
    scan_points: int = 4000,
) -> OptimizationResult:
    """Minimize ``f`` on ``[lo, hi]``: golden section locates the basin,
    exact sign bisection of the derivative numerator brackets the minimizer
    to width ``tol``.  If the derivative changes sign from - to + more than
    once on a dense scan, every such bracket is refined and the best wins."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = f.stationary_numerator()  # same sign as f' where f is defined
    val = lambda x: float(f.num(x)) / float(f.den(x))  # noqa: E731

    grid = [lo + (hi - lo) * Fraction(i, scan_points) for i in range(scan_points + 1)]
    signs = [_sign(g(x)) for x in grid]
    brackets = [(grid[i], grid[i + 1]) for i in range(scan_points) if signs[i] < 0 and signs[i + 1] > 0]
    unimodal = len(brackets) <= 1

    if unimodal:
        x0 = Fraction(_golden(lambda t: val(Fraction(t)), float(lo), float(hi)))
        if brackets:
            a, b = brackets[0]
            if not a <= x0 <= b:
                # trust the exact scan over the float search
                x0 = (a + b) / 2
            brackets = [(a, b)]

    candidates = [lo, hi]
    refined = []
    tol_q = Fraction(tol)
    for a, b in brackets:
        while b - a > tol_q:
            m = (a + b) / 2
            s = _sign(g(m))
            if s == 0:
                a = b = m
                break
            if s < 0:
                a = m
            else:
                b = m
        refined.append((a, b))
        candidates.append((a + b) / 2)

    best = min(candidates, key=lambda x: f(x))
    bracket = next(((a, b) for a, b in refined if a <= best <= b), (best, best))
    return OptimizationResult(
        best,
        f(best),
        {
            "bracket": bracket,
            "derivative_signs": (_sign(g(bracket[0])), _sign(g(bracket[1]))),
            "unimodal": unimodal,
        },
    )


def minimize_full_game_p(dist: PatternDistribution, tol: float = 1e-10) -> OptimizationResult:
    """Best home probability for the 12-step strategy with pattern law
    ``dist``."""
    return minimize_rational_function(full_game_et(dist).et, tol=tol)


# --------------------------------------------------------------------------
# Pattern laws on the simplex
# --------------------------------------------------------------------------


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, len(v) + 1) > (css - 1))[0][-1]
    theta = (css[rho] - 1) / (rho + 1)
    return np.maximum(v - theta, 0.0)


class _Objective:
    """Float version of the touring-block objectives; ``x`` is a pattern
    law of length ``k`` as a vector."""

    def __init__(self, k: int, mode: str, matrices: MatrixSource) -> None:
        if mode not in ("tail", "renewal"):
            raise ValueError(f"unknown mode {mode!r}")
        self.k, self.mode = k, mode
        self.quads = []
        for t in range(1, k + 1):
            a = np.array(prefix_matrix(t, k), dtype=float)
            self.quads.append(a.T @ _matrix(t, matrices).as_float() @ a)

    def __call__(self, x: np.ndarray) -> float:
        q = [x @ m @ x for m in self.quads]
        if self.mode == "tail":
            return 1 + sum(q[:-1]) + 2 * q[-1]
        return (1 + sum(q[:-1])) / (1 - q[-1])

    def grad(self, x: np.ndarray) -> np.ndarray:
        q = [x @ m @ x for m in self.quads]
        dq = [2 * m @ x for m in self.quads]
        if self.mode == "tail":
            return sum(dq[:-1]) + 2 * dq[-1]
        num, den = 1 + sum(q[:-1]), 1 - q[-1]
        return sum(dq[:-1]) / den + num * dq[-1] / den**2


def _local_search(obj: _Objective, x: np.ndarray, iters: int = 3000) -> np.ndarray:
    fx = obj(x)
    step = 1.0
    for _ in range(iters):
        g = obj.grad(x)
        while step > 1e-14:
            y = project_to_simplex(x - step * g)
            fy = obj(y)
            if fy <= fx - 1e-4 * (g @ (x - y)):
                break
            step /= 2
        else:
            break
        if np.max(np.abs(y - x)) < 1e-15:
            break
        x, fx = y, fy
        step = min(step * 2, 1e3)
    return x


def _rationalize(x: np.ndarray, limit: int = 10**8) -> list[Fraction]:
    """Nearby exact point of the simplex; the largest coordinate absorbs the
    rounding so the total is exactly 1."""
    vals = [Fraction(float(v)).limit_denominator(limit) if v > 1e-12 else Fraction(0) for v in x]
    big = max(range(len(vals)), key=lambda i: vals[i])
    vals[big] = 1 - sum((v for i, v in enumerate(vals) if i != big), Fraction(0))
    if vals[big] < 0:
        total = sum(vals, Fraction(0)) - vals[big]
        vals = [v / total if i != big else Fraction(0) for i, v in enumerate(vals)]
    return vals


def stationarity_residual(obj: _Objective, x: np.ndarray) -> float:
    """KKT violation on the simplex: spread of the gradient over the support
    plus any off-support coordinate with a smaller gradient."""
    g = obj.grad(x)
    support = x > 1e-9
    lam = float(np.min(g[support]))
    on = float(np.max(np.abs(g[support] - lam)))
    off = float(np.max(np.maximum(lam - g[~support], 0.0))) if (~support).any() else 0.0
    return max(on, off)


def minimize_pattern_distribution(
    k: int,
    mode: str = "tail",
    starts: int = 16,
    seed: int = 0,
    matrices: MatrixSource = None,
) -> OptimizationResult:
    """Multistart projected-gradient search over pattern laws of length
    ``k``.  Starts are the uniform law, the y law (k = 4), the simplex
    vertices and seeded Dirichlet draws.  Each start contributes the better
    of itself and its local optimum, both evaluated exactly."""
    if k not in (2, 3, 4):
        raise ValueError(f"k must be 2, 3 or 4, got {k}")
    exact = tstep_et_tail if mode == "tail" else tstep_et_renewal
    obj = _Objective(k, mode, matrices)
    n = len(enumerate_patterns(k))
    rng = np.random.default_rng(seed)

    start_points: list[list[Fraction]] = [uniform_pattern_distribution(k).vector()]
    if k == 4:
        start_points.append(y_distribution().vector())
    for i in range(n):
        start_points.append([Fraction(int(i == j)) for j in range(n)])
    while len(start_points) < starts:
        start_points.append(_rationalize(rng.dirichlet(np.ones(n)), 10**6))

    def value(vec: list[Fraction]) -> Fraction:
        return exact(PatternDistribution.from_vector(vec, k), matrices)

    best_vec, best_val = None, None
    start_best = None
    for sp in start_points:
        v0 = value(sp)
        start_best = v0 if start_best is None else min(start_best, v0)
        cand = _rationalize(_local_search(obj, np.array([float(v) for v in sp])))
        v1 = value(cand)
        vec, val = (cand, v1) if v1 < v0 else (sp, v0)
        if best_val is None or val < best_val or (val == best_val and vec < best_vec):
            best_vec, best_val = vec, val

    x = np.array([float(v) for v in best_vec])
    return OptimizationResult(
        PatternDistribution.from_vector(best_vec, k),
        best_val,
        {
            "stationarity_residual": stationarity_residual(obj, x),
            "best_start_value": start_best,
            "starts": len(start_points),
        },
    )


def k2_stationary_law(matrices: MatrixSource = None) -> tuple[list[Fraction], Fraction]:
    """Solve ``P2 x = lambda * 1`` with ``sum(x) = 1`` exactly; returns the
    law and its survival probability ``x^T P2 x`` (= lambda)."""
    m = _matrix(2, matrices).entries
    (a, b), (c, d) = m
    # a x + b y = c x + d y, x + y = 1
    x = (d - b) / ((a - c) + (d - b))
    law = [x, 1 - x]
    return law, a * law[0] + b * law[1]

