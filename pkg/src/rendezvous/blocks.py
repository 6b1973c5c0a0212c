"""Touring-block analysis: not-meet matrices over tour patterns, the
survival probabilities a pattern law induces, expected numbers of touring
blocks, and exact definiteness of the matrices.

Here every block is a tour (no one stays home); a "t-step" is one such
block of three moves.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np

from . import kernels
from .combinatorics import block_outcome_codes, labeling_pairs
from .numerics import Polynomial
from .patterns import (
    MAX_LENGTH,
    PatternDistribution,
    enumerate_patterns,
    prefix_marginal,
    realization_count,
    realizations,
)

BLOCK_LEN = 3


@dataclass(frozen=True)
class NotMeetMatrix:
    """``entries[i][j]``: probability that players whose tour sequences have
    patterns ``patterns[i]`` and ``patterns[j]`` fail to meet in all ``k``
    blocks."""

    k: int
    patterns: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, key: tuple[str, str]) -> Fraction:
        u, v = key
        return self.entries[self.patterns.index(u)][self.patterns.index(v)]

    @property
    def size(self) -> int:
        return len(self.patterns)

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def quadratic_form(self, x: Sequence, y: Optional[Sequence] = None) -> Fraction:
        y = x if y is None else y
        return sum(
            (x[i] * self.entries[i][j] * y[j] for i in range(self.size) for j in range(self.size) if x[i] and y[j]),
            Fraction(0),
        )

    def as_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def replace(self, u: str, v: str, value, symmetric: bool = True) -> "NotMeetMatrix":
        """Copy with one entry (and its mirror) changed."""
        rows = [list(r) for r in self.entries]
        i, j = self.patterns.index(u), self.patterns.index(v)
        rows[i][j] = Fraction(value)
        if symmetric:
            rows[j][i] = Fraction(value)
        return NotMeetMatrix(self.k, self.patterns, tuple(tuple(r) for r in rows))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "NotMeetMatrix":
        n = len(rows)
        for k in range(1, MAX_LENGTH + 1):
            pats = enumerate_patterns(k)
            if len(pats) == n:
                return cls(k, tuple(pats), tuple(tuple(Fraction(v) for v in r) for r in rows))
        raise ValueError(f"no pattern length has {n} patterns")


def _tour_sequences(k: int) -> tuple[np.ndarray, np.ndarray, list[str]]:
    pats = enumerate_patterns(k)
    acts, cls = [], []
    for c, w in enumerate(pats):
        for seq in realizations(w):
            acts.append([t + 1 for t in seq])  # action code = tour index + 1
            cls.append(c)
    return np.array(acts, dtype=np.int8), np.array(cls, dtype=np.intc), pats


def outcome_tables(reduced: bool = False) -> np.ndarray:
    return np.array([block_outcome_codes(li, lii) for li, lii in labeling_pairs(4, reduced)], dtype=np.int8)


@lru_cache(maxsize=None)
def not_meet_matrix(k: int, reduced: bool = False, backend: Optional[str] = None) -> NotMeetMatrix:
    """Exact not-meet matrix for pattern length ``k`` by exhaustive
    enumeration of concrete tour sequences and labeling pairs."""
    if not 1 <= k <= MAX_LENGTH:
        raise ValueError(f"pattern length must be in 1..{MAX_LENGTH}, got {k}")
    acts, cls, pats = _tour_sequences(k)
    tables = outcome_tables(reduced)
    counts = kernels.first_meet_counts(acts, cls, acts, cls, tables, len(pats), len(pats), BLOCK_LEN, backend=backend)
    survive = counts[0]
    n_lab = len(tables)
    reals = [realization_count(w) for w in pats]
    entries = tuple(
        tuple(Fraction(int(survive[i, j]), n_lab * reals[i] * reals[j]) for j in range(len(pats)))
        for i in range(len(pats))
    )
    return NotMeetMatrix(k, tuple(pats), entries)


MatrixSource = Optional[Mapping[int, NotMeetMatrix]]


def _matrix(t: int, matrices: MatrixSource) -> NotMeetMatrix:
    if matrices is not None and t in matrices:
        return matrices[t]
    return not_meet_matrix(t)


def survival_sequence(dist: PatternDistribution, matrices: MatrixSource = None) -> tuple[Fraction, ...]:
    """``q_t``: probability that neither of the first ``t`` touring blocks
    produces a meeting, for ``t = 1..k``."""
    out = []
    for t in range(1, dist.length + 1):
        m = prefix_marginal(dist, t).vector()
        out.append(_matrix(t, matrices).quadratic_form(m))
    return tuple(out)


def tstep_et_tail(dist: PatternDistribution, matrices: MatrixSource = None) -> Fraction:
    """Expected touring blocks until meeting when, after the patterned
    blocks fail, play continues with independent uniform tours (each of
    which then meets with probability 1/2, so 2 more blocks on average)."""
    q = survival_sequence(dist, matrices)
    return 1 + sum(q[:-1], Fraction(0)) + 2 * q[-1]


def tstep_et_renewal(dist: PatternDistribution, matrices: MatrixSource = None) -> Fraction:
    """Expected touring blocks when the whole patterned cycle restarts
    afresh after ``k`` failures."""
    q = survival_sequence(dist, matrices)
    if q[-1] == 1:
        raise ZeroDivisionError("cycle never produces a meeting")
    return (1 + sum(q[:-1], Fraction(0))) / (1 - q[-1])


# --------------------------------------------------------------------------
# Definiteness
# --------------------------------------------------------------------------


def characteristic_polynomial(rows: Sequence[Sequence[Fraction]]) -> Polynomial:
    """``det(lambda*I - M)`` by Faddeev-LeVerrier in exact arithmetic."""
    n = len(rows)
    a = [[Fraction(v) for v in r] for r in rows]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum((a[i][l] * m[l][j] for l in range(n) if a[i][l] and m[l][j]), Fraction(0)) for j in range(n)] for i in range(n)]
        for i in range(n):
            am[i][i] += coeffs[n - k + 1]
        m = am
        trace = sum((a[i][l] * m[l][i] for i in range(n) for l in range(n)), Fraction(0))
        coeffs[n - k] = -trace / k
    return Polynomial(coeffs)


def eigen_sign_counts(charpoly: Polynomial) -> tuple[int, int, int]:
    """(positive, zero, negative) eigenvalue counts of a symmetric matrix
    from its characteristic polynomial.  All roots are real, so Descartes'
    rule of signs is exact."""
    cs = list(charpoly.coeffs)
    n = charpoly.degree
    zero = next(i for i, c in enumerate(cs) if c != 0)
    signs = [c > 0 for c in cs if c != 0]
    positive = sum(1 for x, y in zip(signs, signs[1:]) if x != y)
    return positive, zero, n - positive - zero


@dataclass(frozen=True)
class DefinitenessReport:
    classification: str  # PositiveDefinite | PositiveSemidefinite | Indefinite | Negative*
    positive: int
    zero: int
    negative: int
    witness: Optional[tuple[Fraction, ...]] = None
    witness_value: Optional[Fraction] = None


def _rational_witness(mat: NotMeetMatrix) -> tuple[tuple[Fraction, ...], Fraction]:
    vals, vecs = np.linalg.eigh(mat.as_float())
    v = vecs[:, int(np.argmin(vals))]
    v = v / np.max(np.abs(v))
    for scale in (10**3, 10**6, 10**9, 10**12):
        w = tuple(Fraction(int(round(x * scale)), scale) for x in v)
        value = mat.quadratic_form(w)
        if value < 0:
            return w, value
    raise ArithmeticError("could not round the negative eigenvector to an exact witness")


def definiteness(mat: NotMeetMatrix) -> DefinitenessReport:
    """Exact sign classification; indefinite matrices come with a rational
    vector ``v`` and the exact negative value ``v^T M v``."""
    if not mat.is_symmetric():
        raise ValueError("definiteness requires a symmetric matrix")
    pos, zero, neg = eigen_sign_counts(characteristic_polynomial(mat.entries))
    if neg == 0:
        cls = "PositiveDefinite" if zero == 0 else "PositiveSemidefinite"
        return DefinitenessReport(cls, pos, zero, neg)
    if pos == 0:
        cls = "NegativeDefinite" if zero == 0 else "NegativeSemidefinite"
    else:
        cls = "Indefinite"
    w, value = _rational_witness(mat)
    return DefinitenessReport(cls, pos, zero, neg, w, value)


def negative_eigvec_structure(mat, tol: float = 1e-9) -> list[list[int]]:
    """Group the coordinates of the eigenvector for the most negative
    eigenvalue into classes of (numerically) equal values, in order of first
    appearance."""
    arr = mat.as_float() if isinstance(mat, NotMeetMatrix) else np.asarray(mat, dtype=float)
    vals, vecs = np.linalg.eigh(arr)
    i = int(np.argmin(vals))
    if vals[i] >= 0:
        raise ValueError("matrix has no negative eigenvalue")
    v = vecs[:, i]
    v = v / v[np.argmax(np.abs(v))]
    classes: list[list[int]] = []
    reps: list[float] = []
    for idx, x in enumerate(v):
        for c, r in enumerate(reps):
            if abs(x - r) <= tol:
                classes[c].append(idx)
                break
        else:
            reps.append(x)
            classes.append([idx])
    return classes
