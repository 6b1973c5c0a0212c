"""Tour patterns: restricted-growth strings recording which of a player's
successive tours repeat earlier ones.

``A`` is the first tour, ``B`` the second distinct tour and so on, so
``AABA`` means tour, same tour, a new tour, back to the first.  Patterns are
plain strings; distributions over them carry exact rational masses.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .numerics import decode_rational, encode_rational

N_TOURS = 6  # tours of the three non-home locations on K4
MAX_LENGTH = 4
ALPHABET = "ABCDEFGH"


def is_pattern(w: str) -> bool:
    seen = 0
    for ch in w:
        i = ALPHABET.find(ch)
        if i < 0 or i > seen:
            return False
        seen = max(seen, i + 1)
    return len(w) >= 1


def distinct_letters(w: str) -> int:
    return len(set(w))


def pattern_of(seq: Iterable) -> str:
    """Canonical pattern of a sequence of hashable items."""
    first: dict = {}
    out = []
    for item in seq:
        if item not in first:
            first[item] = len(first)
        out.append(ALPHABET[first[item]])
    return "".join(out)


def enumerate_patterns(k: int) -> list[str]:
    """All patterns of length ``k`` in lexicographic order (AAAA, AAAB, ...)."""
    if k < 1:
        raise ValueError(f"pattern length must be >= 1, got {k}")

    out: list[str] = []

    def grow(prefix: str, m: int) -> None:
        if len(prefix) == k:
            out.append(prefix)
            return
        for i in range(min(m + 1, N_TOURS)):
            grow(prefix + ALPHABET[i], max(m, i + 1))

    grow("A", 1)
    return out


def realization_count(w: str, n_tours: int = N_TOURS) -> int:
    """Number of concrete tour sequences with pattern ``w``."""
    m = distinct_letters(w)
    if m > n_tours:
        raise ValueError(f"pattern {w} needs {m} distinct tours, only {n_tours} exist")
    return math.perm(n_tours, m)


def realizations(w: str, n_tours: int = N_TOURS) -> Iterator[tuple[int, ...]]:
    """Concrete tour-index sequences with pattern ``w``, letters assigned
    injectively in lexicographic order."""
    m = distinct_letters(w)
    idx = [ALPHABET.index(ch) for ch in w]
    for assign in permutations(range(n_tours), m):
        yield tuple(assign[i] for i in idx)


@dataclass(frozen=True)
class PatternDistribution:
    """Exact probability law over the patterns of one length."""

    length: int
    probs: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[str, Fraction] = {}
        for w, pr in self.probs.items():
            pr = Fraction(pr)
            if not is_pattern(w) or len(w) != self.length:
                raise ValueError(f"{w!r} is not a pattern of length {self.length}")
            if pr < 0:
                raise ValueError(f"negative probability {pr} for {w}")
            if pr:
                clean[w] = pr
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"pattern probabilities sum to {total}, not 1")
        object.__setattr__(self, "probs", clean)

    def __getitem__(self, w: str) -> Fraction:
        return self.probs.get(w, Fraction(0))

    def support(self) -> list[str]:
        return [w for w in enumerate_patterns(self.length) if w in self.probs]

    def vector(self) -> list[Fraction]:
        return [self[w] for w in enumerate_patterns(self.length)]

    @classmethod
    def from_vector(cls, values: Sequence, length: int) -> "PatternDistribution":
        pats = enumerate_patterns(length)
        if len(values) != len(pats):
            raise ValueError(f"expected {len(pats)} values, got {len(values)}")
        return cls(length, {w: Fraction(v) for w, v in zip(pats, values)})

    def to_json(self) -> dict:
        return {"length": self.length, "probs": {w: encode_rational(p) for w, p in self.probs.items()}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "PatternDistribution":
        return cls(int(obj["length"]), {w: decode_rational(v) for w, v in obj["probs"].items()})

    @classmethod
    def load(cls, path: str | Path) -> "PatternDistribution":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def uniform_pattern_distribution(k: int) -> PatternDistribution:
    """Pattern law of ``k`` independent uniformly random tours."""
    if not 1 <= k <= MAX_LENGTH:
        raise ValueError(f"length must be in 1..{MAX_LENGTH}, got {k}")
    probs = {}
    for w in enumerate_patterns(k):
        pr = Fraction(1)
        seen: set[str] = {w[0]}
        for ch in w[1:]:
            if ch in seen:
                pr *= Fraction(1, N_TOURS)
            else:
                pr *= Fraction(N_TOURS - len(seen), N_TOURS)
                seen.add(ch)
        probs[w] = pr
    return PatternDistribution(k, probs)


def y_distribution() -> PatternDistribution:
    """Four-tour law that beats independent tours: AAAB, AABA, ABAA, ABBB
    with 1/12 each and ABCD with 2/3."""
    twelfth = Fraction(1, 12)
    return PatternDistribution(
        4,
        {"AAAB": twelfth, "AABA": twelfth, "ABAA": twelfth, "ABBB": twelfth, "ABCD": Fraction(2, 3)},
    )


def prefix_marginal(dist: PatternDistribution, t: int) -> PatternDistribution:
    """Law of the first ``t`` letters of a pattern drawn from ``dist``."""
    if not 1 <= t <= dist.length:
        raise ValueError(f"prefix length {t} outside 1..{dist.length}")
    out: dict[str, Fraction] = {}
    for w, pr in dist.probs.items():
        # a prefix of a restricted-growth string is already canonical
        out[w[:t]] = out.get(w[:t], Fraction(0)) + pr
    return PatternDistribution(t, out)


def prefix_matrix(t: int, k: int) -> list[list[int]]:
    """0/1 matrix sending a length-``k`` pattern vector to its length-``t``
    prefix marginal vector."""
    rows = enumerate_patterns(t)
    cols = enumerate_patterns(k)
    index = {w: i for i, w in enumerate(rows)}
    mat = [[0] * len(cols) for _ in rows]
    for j, w in enumerate(cols):
        mat[index[w[:t]]][j] = 1
    return mat
