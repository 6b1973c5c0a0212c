"""Locations, tours and labelings on the complete graph K_n, and the
per-block meeting engine everything else is built on.

Player I lives at location 1 and player II at location 2.  Each player
names his non-home locations privately with letters a, b, c, ... ; a tour
is an ordering of those letters and a labeling says which real location
each letter denotes.  A block lasts ``n - 1`` steps; at step ``s`` a touring
player stands on the location named by the ``s``-th letter of his tour, a
player at home stands on his home.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional, Union

SUPPORTED_N = (3, 4)
HOME_I = 1
HOME_II = 2
LETTERS = "abcdef"


def _check_n(n: int) -> None:
    if n not in SUPPORTED_N:
        raise ValueError(f"graph order n={n} not supported (expected one of {SUPPORTED_N})")


@dataclass(frozen=True)
class Tour:
    """An ordering of a player's letters; ``letters[s]`` is visited at step s+1."""

    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.letters) != list(range(len(self.letters))):
            raise ValueError(f"tour {self.letters} is not a permutation of its letters")

    @property
    def name(self) -> str:
        return "".join(LETTERS[i] for i in self.letters)

    @classmethod
    def from_name(cls, name: str) -> "Tour":
        return cls(tuple(LETTERS.index(ch) for ch in name))

    def __str__(self) -> str:
        return self.name


class _Home:
    """Stay-at-home pseudo action: occupy the home location every step."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "HOME"

    def __reduce__(self):
        return (_Home, ())


HOME = _Home()
Action = Union[Tour, _Home]


@dataclass(frozen=True)
class Labeling:
    """``locations[i]`` is the real location a player calls letter ``i``."""

    home: int
    locations: tuple[int, ...]

    def __post_init__(self) -> None:
        locs = self.locations
        if len(set(locs)) != len(locs):
            raise ValueError(f"labeling {locs} is not injective")
        if self.home in locs:
            raise ValueError(f"labeling {locs} includes the home location {self.home}")
        n = len(locs) + 1
        if set(locs) | {self.home} != set(range(1, n + 1)):
            raise ValueError(f"labeling {locs} with home {self.home} does not cover 1..{n}")

    @property
    def n(self) -> int:
        return len(self.locations) + 1

    def __call__(self, letter: int) -> int:
        return self.locations[letter]

    @classmethod
    def parse(cls, spec: str, home: int) -> "Labeling":
        """Parse a comma list such as ``"2,3,4"``."""
        return cls(home, tuple(int(tok) for tok in spec.split(",")))


def enumerate_tours(n: int = 4) -> list[Tour]:
    """All ``(n-1)!`` tours in lexicographic letter order (abc, acb, ..., cba)."""
    _check_n(n)
    return [Tour(p) for p in permutations(range(n - 1))]


def enumerate_labelings(home: int, n: int = 4) -> list[Labeling]:
    """All labelings of a player living at ``home``; index 0 is the
    increasing one."""
    _check_n(n)
    others = [loc for loc in range(1, n + 1) if loc != home]
    return [Labeling(home, p) for p in permutations(others)]


def labeling_pairs(n: int = 4, reduced: bool = False) -> list[tuple[Labeling, Labeling]]:
    """All ``((n-1)!)**2`` labeling pairs, or only those with player I's
    labeling fixed to the increasing one when ``reduced``."""
    labs_i = enumerate_labelings(HOME_I, n)
    labs_ii = enumerate_labelings(HOME_II, n)
    if reduced:
        labs_i = labs_i[:1]
    return [(li, lii) for li in labs_i for lii in labs_ii]


def positions(action: Action, lab: Labeling) -> tuple[int, ...]:
    """Locations occupied at steps 1..n-1 of a block."""
    if action is HOME:
        return (lab.home,) * (lab.n - 1)
    if len(action.letters) != lab.n - 1:
        raise ValueError(f"tour {action} does not fit a labeling of K_{lab.n}")
    return tuple(lab(letter) for letter in action.letters)


def meeting_outcome(
    action_i: Action,
    action_ii: Action,
    lab_i: Labeling,
    lab_ii: Labeling,
    home_i: Optional[int] = None,
    home_ii: Optional[int] = None,
) -> Optional[int]:
    """First step (1-based) of the block at which the players coincide, or
    ``None`` if they do not meet."""
    if home_i is not None and home_i != lab_i.home:
        raise ValueError(f"labeling of player I excludes {lab_i.home}, not home {home_i}")
    if home_ii is not None and home_ii != lab_ii.home:
        raise ValueError(f"labeling of player II excludes {lab_ii.home}, not home {home_ii}")
    if lab_i.n != lab_ii.n:
        raise ValueError("labelings live on different graphs")
    if lab_i.home == lab_ii.home:
        raise ValueError("players must have distinct homes")
    for step, (x, y) in enumerate(zip(positions(action_i, lab_i), positions(action_ii, lab_ii)), 1):
        if x == y:
            return step
    return None


def block_meeting_table(lab_i: Labeling, lab_ii: Labeling) -> list[list[Optional[int]]]:
    """Tour-vs-tour meeting steps, rows = player I's tours, columns = II's,
    both in lexicographic order."""
    tours = enumerate_tours(lab_i.n)
    return [[meeting_outcome(ti, tj, lab_i, lab_ii) for tj in tours] for ti in tours]


def block_outcome_codes(lab_i: Labeling, lab_ii: Labeling) -> list[list[int]]:
    """Meeting steps for every pair of block actions, with 0 for no meeting.

    Action code 0 is HOME and code ``k >= 1`` is tour ``k-1`` in
    lexicographic order.  This is the lookup table the hot kernels use.
    """
    acts: list[Action] = [HOME, *enumerate_tours(lab_i.n)]
    return [[meeting_outcome(a, b, lab_i, lab_ii) or 0 for b in acts] for a in acts]


def average_meeting_stats(n: int = 4) -> tuple[Fraction, Fraction]:
    """Probability that two uniformly random tours meet within a block, and
    the mean meeting step given that they do, averaged over every labeling
    pair."""
    meets = total = steps = 0
    for lab_i, lab_ii in labeling_pairs(n):
        for row in block_meeting_table(lab_i, lab_ii):
            for cell in row:
                total += 1
                if cell is not None:
                    meets += 1
                    steps += cell
    return Fraction(meets, total), Fraction(steps, meets)


def stayer_tourer_mean(n: int = 4) -> Fraction:
    """Mean meeting step when one player stays home and the other tours.
    A tourer always reaches the stayer's home within the block."""
    steps = count = 0
    for lab_i, lab_ii in labeling_pairs(n):
        for t in enumerate_tours(n):
            for a, b in ((HOME, t), (t, HOME)):
                s = meeting_outcome(a, b, lab_i, lab_ii)
                if s is None:
                    raise AssertionError("a tourer failed to visit the stayer's home")
                steps += s
                count += 1
    return Fraction(steps, count)
