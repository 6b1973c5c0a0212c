"""One-shot verification of every quantitative claim about the K4 block
strategies, producing a ledger of expected-vs-computed rows."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Mapping, Optional

from . import blocks, combinatorics, game, montecarlo, patterns
from .blocks import NotMeetMatrix
from .numerics import Polynomial, QuadraticNumber, RationalFunction, to_decimal

# classes of the negative eigenvector of the 15x15 matrix, by pattern index
EIGVEC_TEMPLATE = [[0], [1, 2, 5, 9], [3, 6, 8], [4, 7, 10, 11, 12, 13], [14]]


def load_reference() -> dict:
    with resources.files("rendezvous").joinpath("data/reference.json").open() as fh:
        return json.load(fh)


def reference_matrix(k: int) -> NotMeetMatrix:
    return NotMeetMatrix.from_rows(load_reference()[f"P{k}"])


def reference_full_et() -> RationalFunction:
    ref = load_reference()
    return RationalFunction(Polynomial(int(c) for c in ref["full_et_num"]), Polynomial(int(c) for c in ref["full_et_den"]))


def reference_aw_et() -> RationalFunction:
    ref = load_reference()
    return RationalFunction(Polynomial(int(c) for c in ref["aw_et_num"]), Polynomial(int(c) for c in ref["aw_et_den"]))


IMPROVEMENT = QuadraticNumber(
    Fraction(243 * 75041961207, 327540887401488016), Fraction(243 * 4700853101, 327540887401488016)
)
P_STAR = QuadraticNumber(Fraction(-77, 4), Fraction(3, 4))
ET_STAR = QuadraticNumber(Fraction(15, 12), Fraction(1, 12))


@dataclass
class LedgerRow:
    claim_id: str
    source: str
    expected: str
    computed: str
    status: str

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class ReproductionLedger:
    rows: list[LedgerRow]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)

    def failed(self) -> list[str]:
        return [r.claim_id for r in self.rows if not r.passed]

    def to_json(self) -> dict:
        return {"ok": self.ok, "rows": [asdict(r) for r in self.rows]}


def _fmt_matrix(rows) -> str:
    return "[" + "; ".join(" ".join("X" if c is None else str(c) for c in r) for r in rows) + "]"


class _Run:
    def __init__(self, matrices: Mapping[int, NotMeetMatrix]) -> None:
        self.matrices = matrices
        self.rows: list[LedgerRow] = []

    def check(self, claim_id: str, source: str, expected, fn: Callable[[], tuple[str, bool]]) -> None:
        try:
            computed, ok = fn()
        except Exception as exc:  # a crashing check is a failed claim
            computed, ok = f"error: {exc!r}", False
        self.rows.append(LedgerRow(claim_id, source, str(expected), computed, "pass" if ok else "fail"))


def reproduce_all(
    skip_slow: bool = False,
    mc_trials: int = 10**6,
    seed: int = 20090708,
    matrix_overrides: Optional[Mapping[int, NotMeetMatrix]] = None,
) -> ReproductionLedger:
    """Run every check in order.  ``matrix_overrides`` replaces computed
    not-meet matrices (fault injection: only claims that consume a replaced
    matrix can change)."""
    matrices = {k: blocks.not_meet_matrix(k) for k in range(1, 5)}
    matrices.update(matrix_overrides or {})
    run = _Run(matrices)
    ref = load_reference()
    check = run.check

    # block tour table ---------------------------------------------------
    lab_i = combinatorics.Labeling(1, (2, 3, 4))
    lab_ii = combinatorics.Labeling(2, (1, 3, 4))

    def b_matrix():
        b = combinatorics.block_meeting_table(lab_i, lab_ii)
        return _fmt_matrix(b), b == ref["B"]

    check("b-matrix", "tour-pair meeting steps, labelings (2,3,4)/(1,3,4)", _fmt_matrix(ref["B"]), b_matrix)

    def stats():
        m, c = combinatorics.average_meeting_stats()
        return f"{m}, {c}", (m, c) == (Fraction(1, 2), Fraction(16, 9))

    check("meet-stats", "two random tours: meet probability, conditional mean step", "1/2, 16/9", stats)

    def stayer():
        v = combinatorics.stayer_tourer_mean()
        return str(v), v == 2

    check("stayer-tourer-mean", "one home, one touring: mean meeting step", "2", stayer)

    # not-meet matrices ----------------------------------------------------
    for k in (2, 3, 4):
        def eq(k=k):
            expected = reference_matrix(k)
            got = run.matrices[k]
            bad = [(i, j) for i in range(got.size) for j in range(got.size) if got.entries[i][j] != expected.entries[i][j]]
            return ("all entries equal" if not bad else f"{len(bad)} entries differ, first at {bad[0]}"), not bad

        check(f"P{k}-entries", f"not-meet matrix over length-{k} patterns", "all entries equal", eq)

    def definite(k, want):
        def fn():
            rep = blocks.definiteness(run.matrices[k])
            if want == "Indefinite":
                verified = rep.witness is not None and run.matrices[k].quadratic_form(rep.witness) == rep.witness_value < 0
                return f"{rep.classification} (witness value {rep.witness_value})", rep.classification == want and verified
            if want == "no-negative":
                return rep.classification, rep.negative == 0
            return rep.classification, rep.classification == want

        return fn

    check("P2-definite", "P2 positive definite", "PositiveDefinite", definite(2, "PositiveDefinite"))
    check("P3-psd", "P3 has no negative eigenvalue", "PositiveDefinite or PositiveSemidefinite", definite(3, "no-negative"))
    check("P4-indefinite", "P4 has a negative eigenvalue", "Indefinite", definite(4, "Indefinite"))

    def eigvec():
        classes = blocks.negative_eigvec_structure(run.matrices[4])
        return str(classes), classes == EIGVEC_TEMPLATE

    check("P4-eigvec-pattern", "negative eigenvector coordinate classes", str(EIGVEC_TEMPLATE), eigvec)

    # touring-block expected times ----------------------------------------
    for k in range(1, 5):
        def tail_u(k=k):
            v = blocks.tstep_et_tail(patterns.uniform_pattern_distribution(k), run.matrices)
            return str(v), v == 2

        check(f"tail-uniform-k{k}", f"independent tours, {k} blocks", "2", tail_u)

    y = patterns.y_distribution()
    target = 2 - Fraction(23, 16200)

    def tail_y():
        v = blocks.tstep_et_tail(y, run.matrices)
        return f"{v} ~ {to_decimal(v, 6)}", v == target and to_decimal(v, 6) == "1.99858"

    check("tail-y", "four-tour law y, tail reading", f"{target} ~ 1.99858", tail_y)

    def renewal_y():
        v = blocks.tstep_et_renewal(y, run.matrices)
        return str(v), v == Fraction(30375, 15199)

    check("renewal-y", "four-tour law y, restart reading", "30375/15199", renewal_y)

    # baseline ------------------------------------------------------------
    def aw_formula():
        f = game.aw_expected_time()
        return str(f), f == reference_aw_et()

    check("aw-formula", "independent-tour expected time", str(reference_aw_et()), aw_formula)

    def p_star():
        p = game.aw_optimal_p()
        return f"{p} ~ {to_decimal(p, 6)}", p == P_STAR and to_decimal(p, 6) == "0.321983"

    check("aw-p-star", "optimal home probability", f"{P_STAR} ~ 0.321983", p_star)

    def et_star():
        v = game.aw_expected_time()(P_STAR)
        return f"{v} ~ {to_decimal(v, 6)}", v == ET_STAR and to_decimal(v, 6) == "3.42466"

    check("aw-et-star", "optimal expected meeting time", f"{ET_STAR} ~ 3.42466", et_star)

    # full game -----------------------------------------------------------
    def counts():
        paths = game.enumerate_paths(y)
        br = game.tour_count_breakdown(paths)
        mass = sum((pa.prob() for pa in paths), Polynomial())
        ok = len(paths) == 1585 and br == [1, 24, 216, 864, 480] and mass == Polynomial([1])
        return f"{len(paths)} paths, by tour count {br}, total mass {mass}", ok

    check("path-count", "positive-probability 12-step paths under y", "1585 paths, by tour count [1, 24, 216, 864, 480], total mass 1", counts)

    if not skip_slow:
        def full_y():
            ev = game.full_game_et(y)
            ok = ev.et == reference_full_et() and ev.identities_hold()
            return str(ev.et.canonical()), ok

        check("full-et-y", "12-step restarting strategy with y", str(reference_full_et()), full_y)

        def full_u():
            ev = game.full_game_et(patterns.uniform_pattern_distribution(4))
            return str(ev.et.canonical()), ev.et == reference_aw_et() and ev.identities_hold()

        check("full-et-uniform", "12-step strategy with independent tours", str(reference_aw_et()), full_u)

        def improvement():
            v = game.improvement_at(P_STAR)
            return f"{v} ~ {to_decimal(v, 6)}", v == IMPROVEMENT and to_decimal(v, 6) == "0.000146683"

        check("improvement", "gain over independent tours at the optimal p", f"{IMPROVEMENT} ~ 0.000146683", improvement)

        for name, dist in (("y", y), ("uniform", patterns.uniform_pattern_distribution(4))):
            def mc(dist=dist, name=name):
                exact = float(game.full_game_et(dist).et(P_STAR))
                rep = montecarlo.estimate_et(float(P_STAR), dist, mc_trials, seed, exact=exact)
                return f"mean {rep.mean:.5f} +- {rep.stderr:.5f} (z = {rep.z_score:+.2f})", abs(rep.z_score) <= 4

            check(f"mc-{name}", f"simulation at the optimal p, {mc_trials} games", "|z| <= 4", mc)

    return ReproductionLedger(run.rows)
