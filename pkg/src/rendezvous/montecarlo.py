"""Forward simulation of the 12-step strategy, as an independent check on
the exact expected meeting times.

Randomness comes from numpy's PCG64 generator.  A run with seed ``s`` is
split into fixed-size chunks whose generators are spawned from
``SeedSequence(s)``, so the result depends only on ``(seed, trials,
chunk)`` and not on how many worker processes evaluate the chunks.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .combinatorics import HOME, HOME_I, HOME_II, Labeling, enumerate_tours, meeting_outcome
from .patterns import ALPHABET, PatternDistribution, prefix_marginal

N_BLOCKS = 4
BLOCK_LEN = 3
CYCLE = N_BLOCKS * BLOCK_LEN
MAX_BLOCKS = 10**6
CHUNK = 1 << 18
WORKERS_ENV = "RENDEZVOUS_WORKERS"

_TOURS = np.array([t.letters for t in enumerate_tours(4)], dtype=np.int64)  # (6, 3)


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    mean: float
    stderr: Optional[float]
    seed: int
    exact_reference: Optional[float] = None
    z_score: Optional[float] = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


class PatternSampler:
    """Draws a player's tours one at a time.  Given the pattern of the tours
    made so far in the cycle, the next letter is chosen with probability
    ``P(prefix + letter) / P(prefix)`` under the prefix marginals of the
    pattern law; a new letter gets a tour not used yet."""

    def __init__(self, dist: PatternDistribution) -> None:
        k = dist.length
        marg = {t: prefix_marginal(dist, t) for t in range(1, k + 1)}
        states = {"": 0}
        order = [""]
        for t in range(1, k + 1):
            for w in sorted(marg[t].probs):
                states[w] = len(order)
                order.append(w)
        width = k  # at most k distinct letters
        self.cum = np.ones((len(order), width))
        self.next_state = np.zeros((len(order), width), dtype=np.int64)
        self.letter = np.zeros((len(order), width), dtype=np.int64)
        self.terminal = np.zeros(len(order), dtype=bool)
        for s, w in enumerate(order):
            if len(w) == k:
                self.terminal[s] = True
                continue
            base = marg[len(w)][w] if w else Fraction(1)
            m = len(set(w))
            acc = Fraction(0)
            j = 0
            for i in range(m + 1):
                ext = w + ALPHABET[i]
                pr = marg[len(ext)][ext]
                if pr:
                    acc += pr / base
                    self.cum[s, j] = float(acc)
                    self.next_state[s, j] = states[ext]
                    self.letter[s, j] = i
                    j += 1
            self.cum[s, j - 1 :] = 1.0
            self.next_state[s, j:] = self.next_state[s, j - 1]
            self.letter[s, j:] = self.letter[s, j - 1]

    def step(self, state: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Next (state, letter) for each game given uniforms ``u``."""
        if self.terminal[state].any():
            raise SimulationError("more tours requested than the pattern law covers")
        choice = (u[:, None] >= self.cum[state]).sum(axis=1)
        choice = np.minimum(choice, self.cum.shape[1] - 1)
        return self.next_state[state, choice], self.letter[state, choice]


def _random_labelings(rng: np.random.Generator, n: int, home: int) -> np.ndarray:
    others = np.array([x for x in range(1, 5) if x != home])
    return others[np.argsort(rng.random((n, 3)), axis=1)]


def simulate_batch(p: float, dist: PatternDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    """Meeting times of ``n`` independent games."""
    if not 0 <= p < 1:
        raise ValueError("p must lie in [0, 1)")
    sampler = PatternSampler(dist)
    labs = (_random_labelings(rng, n, HOME_I), _random_labelings(rng, n, HOME_II))
    homes = (HOME_I, HOME_II)
    result = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    offset = 0
    blocks = 0
    while active.size:
        if blocks >= MAX_BLOCKS:
            raise SimulationError(f"no meeting within {MAX_BLOCKS} blocks")
        na = active.size
        pos = []
        for player in (0, 1):
            lab = labs[player][active]
            assign = np.argsort(rng.random((na, 6)), axis=1)  # letter -> tour
            state = np.zeros(na, dtype=np.int64)
            rows = np.arange(na)
            steps = np.empty((na, CYCLE), dtype=np.int64)
            for b in range(N_BLOCKS):
                home = rng.random(na) < p
                u = rng.random(na)
                tourers = np.nonzero(~home)[0]
                tour = np.zeros(na, dtype=np.int64)
                if tourers.size:
                    new_state, letter = sampler.step(state[tourers], u[tourers])
                    state[tourers] = new_state
                    tour[tourers] = assign[tourers, letter]
                locs = lab[rows[:, None], _TOURS[tour]]
                locs[home] = homes[player]
                steps[:, b * BLOCK_LEN : (b + 1) * BLOCK_LEN] = locs
            pos.append(steps)
        same = pos[0] == pos[1]
        met = same.any(axis=1)
        first = np.argmax(same, axis=1) + 1
        result[active[met]] = offset + first[met]
        active = active[~met]
        offset += CYCLE
        blocks += N_BLOCKS
    return result


def _chunk_moments(args) -> tuple[int, int, int]:
    p, dist_json, n, seed_seq = args
    dist = PatternDistribution.from_json(dist_json)
    times = simulate_batch(p, dist, n, np.random.default_rng(seed_seq))
    return n, int(times.sum()), int((times * times).sum())


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def estimate_et(
    p: float,
    dist: PatternDistribution,
    trials: int,
    seed: int,
    exact: Optional[float] = None,
    compare_exact: bool = False,
    workers: Optional[int] = None,
    chunk: int = CHUNK,
) -> SimulationReport:
    """Sample mean meeting time with its standard error.  With
    ``compare_exact`` the exact value at ``p`` is attached and a z-score
    reported."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sizes = [chunk] * (trials // chunk) + ([trials % chunk] if trials % chunk else [])
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(p, dist.to_json(), n, s) for n, s in zip(sizes, seqs)]
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_moments, jobs))
    else:
        parts = [_chunk_moments(j) for j in jobs]
    n = sum(x[0] for x in parts)
    s1 = sum(x[1] for x in parts)
    s2 = sum(x[2] for x in parts)
    mean = Fraction(s1, n)
    stderr = None
    if n > 1:
        var = (Fraction(s2) - n * mean * mean) / (n - 1)
        stderr = math.sqrt(float(var) / n)
    if compare_exact and exact is None:
        from .game import full_game_et

        exact = float(full_game_et(dist).et(Fraction(p)))
    z = (float(mean) - exact) / stderr if (exact is not None and stderr) else None
    return SimulationReport(n, float(mean), stderr, seed, exact, z)


# --------------------------------------------------------------------------
# Scalar reference simulator with trajectory logging
# --------------------------------------------------------------------------


@dataclass
class BlockRecord:
    cycle: int
    block: int
    action_i: object
    action_ii: object
    positions_i: tuple[int, ...]
    positions_ii: tuple[int, ...]


@dataclass
class GameLog:
    lab_i: Labeling
    lab_ii: Labeling
    blocks: list[BlockRecord]
    meeting_step: int


def simulate_game(p: float, dist: PatternDistribution, seed, log: bool = False):
    """Play one game step by step; returns the global meeting step, or a
    :class:`GameLog` with every block's actions and positions when ``log``."""
    if not 0 <= p < 1:
        raise ValueError("p must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    sampler = PatternSampler(dist)
    tours = enumerate_tours(4)
    labs = []
    for home in (HOME_I, HOME_II):
        others = [x for x in range(1, 5) if x != home]
        labs.append(Labeling(home, tuple(others[i] for i in rng.permutation(3))))
    records: list[BlockRecord] = []
    for cycle in range(MAX_BLOCKS // N_BLOCKS):
        plans = []
        for _player in (0, 1):
            assign = rng.permutation(6)
            state = np.zeros(1, dtype=np.int64)
            acts = []
            for _b in range(N_BLOCKS):
                if rng.random() < p:
                    acts.append(HOME)
                    continue
                state, letter = sampler.step(state, np.array([rng.random()]))
                acts.append(tours[int(assign[int(letter[0])])])
            plans.append(acts)
        for b in range(N_BLOCKS):
            a_i, a_ii = plans[0][b], plans[1][b]
            pos_i = _walk(a_i, labs[0])
            pos_ii = _walk(a_ii, labs[1])
            records.append(BlockRecord(cycle, b, a_i, a_ii, pos_i, pos_ii))
            for s in range(BLOCK_LEN):
                if pos_i[s] == pos_ii[s]:
                    step = cycle * CYCLE + b * BLOCK_LEN + s + 1
                    return GameLog(labs[0], labs[1], records, step) if log else step
        if not log:
            records.clear()
    raise SimulationError(f"no meeting within {MAX_BLOCKS} blocks")


def _walk(action, lab: Labeling) -> tuple[int, ...]:
    if action is HOME:
        return (lab.home,) * BLOCK_LEN
    return tuple(lab.locations[letter] for letter in action.letters)


def check_log(game: GameLog) -> bool:
    """Replay a logged game through the block meeting engine: no block before
    the last may meet, and the last must meet exactly at the logged step."""
    for rec in game.blocks[:-1]:
        if meeting_outcome(rec.action_i, rec.action_ii, game.lab_i, game.lab_ii) is not None:
            return False
    last = game.blocks[-1]
    s = meeting_outcome(last.action_i, last.action_ii, game.lab_i, game.lab_ii)
    if s is None:
        return False
    expected = last.cycle * CYCLE + last.block * BLOCK_LEN + s
    return expected == game.meeting_step and last.positions_i[s - 1] == last.positions_ii[s - 1]


def sample_tour_sequences(dist: PatternDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` draws of a full cycle's tours (all blocks touring)."""
    sampler = PatternSampler(dist)
    assign = np.argsort(rng.random((n, 6)), axis=1)
    state = np.zeros(n, dtype=np.int64)
    out = np.empty((n, dist.length), dtype=np.int64)
    rows = np.arange(n)
    for t in range(dist.length):
        state, letter = sampler.step(state, rng.random(n))
        out[:, t] = assign[rows, letter]
    return out

