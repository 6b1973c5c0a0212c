"""Command-line entry point: ``rendezvous <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors.  Exact values are printed as ``num/den`` strings (and the Q(sqrt 681)
and polynomial encodings of :mod:`rendezvous.numerics`) in JSON output.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import blocks, combinatorics, game, kernels, montecarlo, optimize, patterns, reproduce
from .numerics import encode_exact, encode_rational, to_decimal

FORMATS = ("table", "json", "csv")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _load_dist(spec: str, k: int = 4) -> patterns.PatternDistribution:
    if spec == "paper-y":
        return patterns.y_distribution()
    if spec == "uniform":
        return patterns.uniform_pattern_distribution(k)
    try:
        return patterns.PatternDistribution.load(spec)
    except OSError as exc:
        raise UsageError(f"cannot read distribution file {spec!r}: {exc}") from exc
    except (ValueError, KeyError) as exc:
        raise UsageError(f"invalid distribution file {spec!r}: {exc}") from exc


def _parse_p(args) -> Optional[object]:
    if getattr(args, "p_exact", None):
        return game.aw_optimal_p()
    if getattr(args, "p", None) is not None:
        try:
            p = Fraction(args.p)
        except ValueError as exc:
            raise UsageError(f"--p expects a rational such as 1/3 or 0.3, got {args.p!r}") from exc
        if not 0 <= p < 1:
            raise UsageError("--p must lie in [0, 1)")
        return p
    return None


def _emit(args, payload, table_lines: Sequence[str], csv_rows: Optional[list] = None) -> None:
    fmt = args.format
    if fmt == "json":
        json.dump(encode_exact(payload), sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        for row in csv_rows if csv_rows is not None else [[line] for line in table_lines]:
            writer.writerow(row)
    else:
        for line in table_lines:
            print(line)


def _value_text(x) -> str:
    return f"{x}  (~ {to_decimal(x, 10)})"


def _grid(rows, render) -> list[str]:
    cells = [[render(c) for c in r] for r in rows]
    width = max(len(c) for r in cells for c in r)
    return [" ".join(c.rjust(width) for c in r) for r in cells]


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_b_matrix(args) -> int:
    try:
        lab_i = combinatorics.Labeling.parse(args.lab_i, combinatorics.HOME_I)
        lab_ii = combinatorics.Labeling.parse(args.lab_ii, combinatorics.HOME_II)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    table = combinatorics.block_meeting_table(lab_i, lab_ii)
    names = [t.name for t in combinatorics.enumerate_tours(4)]
    render = lambda c: "X" if c is None else str(c)  # noqa: E731
    _emit(
        args,
        {"tours": names, "lab_i": list(lab_i.locations), "lab_ii": list(lab_ii.locations), "table": table},
        ["     " + " ".join(n.rjust(3) for n in names)]
        + [f"{n:>4} " + " ".join(render(c).rjust(3) for c in row) for n, row in zip(names, table)],
        [[render(c) for c in row] for row in table],
    )
    return 0


def cmd_pattern_matrix(args) -> int:
    m = blocks.not_meet_matrix(args.k)
    _emit(
        args,
        {"k": m.k, "patterns": list(m.patterns), "entries": [list(r) for r in m.entries]},
        [f"patterns: {' '.join(m.patterns)}"] + _grid(m.entries, str),
        [[encode_rational(v) for v in r] for r in m.entries],
    )
    return 0


def cmd_definiteness(args) -> int:
    rep = blocks.definiteness(blocks.not_meet_matrix(args.k))
    payload = {
        "k": args.k,
        "classification": rep.classification,
        "eigenvalue_signs": {"positive": rep.positive, "zero": rep.zero, "negative": rep.negative},
        "witness": list(rep.witness) if rep.witness else None,
        "witness_value": rep.witness_value,
    }
    lines = [f"P{args.k}: {rep.classification} (+{rep.positive} / 0:{rep.zero} / -{rep.negative})"]
    if rep.witness:
        lines.append(f"witness v^T P v = {rep.witness_value} (~ {float(rep.witness_value):.3e})")
        if args.k == 4:
            lines.append(f"negative eigenvector classes: {blocks.negative_eigvec_structure(blocks.not_meet_matrix(4))}")
    _emit(args, payload, lines)
    return 0


def cmd_tstep_et(args) -> int:
    dist = _load_dist(args.dist, args.k)
    q = blocks.survival_sequence(dist)
    fn = blocks.tstep_et_tail if args.mode == "tail" else blocks.tstep_et_renewal
    v = fn(dist)
    _emit(
        args,
        {"mode": args.mode, "survival": list(q), "et": v},
        [f"survival q_t: {', '.join(map(str, q))}", f"ET ({args.mode}) = {_value_text(v)}"],
        [["mode", "et"], [args.mode, encode_rational(v)]],
    )
    return 0


def cmd_enumerate_paths(args) -> int:
    dist = _load_dist(args.dist)
    paths = game.enumerate_paths(dist)
    br = game.tour_count_breakdown(paths)
    payload = {"count": len(paths), "by_tour_count": br}
    if args.list:
        payload["paths"] = [
            {"actions": pa.describe().split(), "tour_count": pa.tour_count, "prob_rational": pa.prob_rational}
            for pa in paths
        ]
    lines = [f"{len(paths)} paths; by tour count 0..4: {br}"]
    if args.list:
        lines += [f"{pa.describe():<20} t={pa.tour_count} r={pa.prob_rational}" for pa in paths]
    _emit(args, payload, lines, [[pa.describe(), pa.tour_count, encode_rational(pa.prob_rational)] for pa in paths])
    return 0


def cmd_full_et(args) -> int:
    dist = _load_dist(args.dist)
    ev = game.full_game_et(dist)
    ok = ev.identities_hold()
    et = ev.et.canonical()
    p = _parse_p(args)
    payload = {"paths": ev.n_paths, "identities_hold": ok}
    lines = [f"{ev.n_paths} paths; mass identities {'hold' if ok else 'FAIL'}", f"ET(p) = {et}"]
    if args.emit_function:
        payload["et"] = et.to_json()
    if p is not None:
        v = ev.et(p)
        payload["p"] = p
        payload["value"] = v
        lines.append(f"ET({p}) = {_value_text(v)}")
    if args.emit_function and args.format == "table":
        lines = [json.dumps(et.to_json())]
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_aw_et(args) -> int:
    f = game.aw_expected_time()
    p = _parse_p(args)
    payload = {"et": f.to_json()}
    lines = [f"ET(p) = {f}"]
    if p is not None:
        v = f(p)
        payload.update(p=p, value=v)
        lines.append(f"ET({p}) = {_value_text(v)}")
    _emit(args, payload, lines)
    return 0


def cmd_improvement(args) -> int:
    p = _parse_p(args)
    if p is None:
        p = game.aw_optimal_p()
    v = game.improvement_at(p)
    dec = to_decimal(v, args.decimal)
    _emit(args, {"p": p, "improvement": v, "decimal": dec}, [f"p = {p}", f"improvement = {v}", f"          ~ {dec}"])
    return 0


def cmd_optimize(args) -> int:
    if args.target == "aw":
        r = optimize.minimize_aw()
        payload = {"argmin": r.argmin, "value": r.value, "derivative_at_argmin": r.certificate["derivative_at_argmin"]}
        lines = [f"argmin p = {_value_text(r.argmin)}", f"min ET   = {_value_text(r.value)}"]
    elif args.target == "full-p":
        r = optimize.minimize_full_game_p(_load_dist(args.dist), tol=args.tol)
        a, b = r.certificate["bracket"]
        payload = {"argmin": r.argmin, "value": r.value, "bracket": [a, b], "derivative_signs": list(r.certificate["derivative_signs"])}
        lines = [f"argmin p ~ {to_decimal(r.argmin, 12)} (bracket width {float(b - a):.2e})", f"min ET   ~ {to_decimal(r.value, 12)}"]
    else:
        if args.format == "json" and args.seed is None:
            raise UsageError("--seed is required for stochastic commands in json mode")
        r = optimize.minimize_pattern_distribution(args.k, args.mode, starts=args.starts, seed=args.seed or 0)
        payload = {"argmin": r.argmin.to_json(), "value": r.value, "stationarity_residual": r.certificate["stationarity_residual"], "seed": args.seed}
        lines = [f"value = {to_decimal(r.value, 12)}"] + [f"  {w}: {float(pr):.9f}" for w, pr in sorted(r.argmin.probs.items())]
    _emit(args, payload, lines)
    return 0


def cmd_simulate(args) -> int:
    if args.format == "json" and args.seed is None:
        raise UsageError("--seed is required for stochastic commands in json mode")
    dist = _load_dist(args.dist)
    if args.p == "aw-opt":
        p = float(game.aw_optimal_p())
    else:
        try:
            p = float(Fraction(args.p))
        except ValueError as exc:
            raise UsageError(f"--p expects a number or aw-opt, got {args.p!r}") from exc
    seed = 0 if args.seed is None else args.seed
    rep = montecarlo.estimate_et(p, dist, args.trials, seed, compare_exact=args.compare_exact)
    lines = [f"trials {rep.trials}, seed {rep.seed}", f"mean {rep.mean:.6f} +- {rep.stderr if rep.stderr else float('nan'):.6f}"]
    if rep.exact_reference is not None:
        lines.append(f"exact {rep.exact_reference:.6f}, z = {rep.z_score:+.3f}")
    _emit(args, rep.to_json(), lines)
    return 0


def cmd_reproduce(args) -> int:
    ledger = reproduce.reproduce_all(skip_slow=args.skip_slow, mc_trials=args.mc_trials, seed=args.seed)
    if args.format == "json":
        _emit(args, ledger.to_json(), [])
    elif args.format == "csv":
        _emit(args, None, [], [["claim", "source", "expected", "computed", "status"]]
              + [[r.claim_id, r.source, r.expected, r.computed, r.status] for r in ledger.rows])
    else:
        for r in ledger.rows:
            print(f"[{r.status.upper():4}] {r.claim_id:<20} {r.computed}")
            if not r.passed:
                print(f"       expected: {r.expected}")
        print(f"{sum(r.passed for r in ledger.rows)}/{len(ledger.rows)} claims pass (kernel backend: {kernels.BACKEND})")
    return 0 if ledger.ok else 1


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rendezvous", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=FORMATS, default="table")
        sp.set_defaults(func=fn)
        return sp

    def add_p(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--p", help="exact rational home probability, e.g. 1/3")
        g.add_argument("--p-exact", choices=["aw-opt"], help="use the optimal independent-tour p")

    sp = add("b-matrix", cmd_b_matrix, "tour-pair meeting steps for one labeling pair")
    sp.add_argument("--lab-i", default="2,3,4")
    sp.add_argument("--lab-ii", default="1,3,4")

    sp = add("pattern-matrix", cmd_pattern_matrix, "exact not-meet matrix over patterns")
    sp.add_argument("--k", type=int, choices=[1, 2, 3, 4], required=True)

    sp = add("definiteness", cmd_definiteness, "exact definiteness of a not-meet matrix")
    sp.add_argument("--k", type=int, choices=[2, 3, 4], required=True)

    sp = add("tstep-et", cmd_tstep_et, "expected touring blocks for a pattern law")
    sp.add_argument("--dist", default="paper-y", help="FILE, paper-y or uniform")
    sp.add_argument("--mode", choices=["tail", "renewal"], default="tail")
    sp.add_argument("--k", type=int, choices=[1, 2, 3, 4], default=4, help="length for --dist uniform")

    sp = add("enumerate-paths", cmd_enumerate_paths, "positive-probability 12-step paths")
    sp.add_argument("--dist", default="paper-y")
    sp.add_argument("--list", action="store_true")

    sp = add("full-et", cmd_full_et, "exact ET(p) of the 12-step strategy")
    sp.add_argument("--dist", default="paper-y")
    add_p(sp)
    sp.add_argument("--emit-function", action="store_true")

    sp = add("aw-et", cmd_aw_et, "independent-tour expected meeting time")
    add_p(sp)

    sp = add("improvement", cmd_improvement, "exact gain of the y strategy at p")
    add_p(sp)
    sp.add_argument("--decimal", type=int, default=6, metavar="DIGITS")

    sp = add("optimize", cmd_optimize, "minimize over p or over pattern laws")
    sp.add_argument("target", choices=["aw", "full-p", "dist"])
    sp.add_argument("--dist", default="paper-y")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--k", type=int, choices=[2, 3, 4], default=4)
    sp.add_argument("--mode", choices=["tail", "renewal"], default="tail")
    sp.add_argument("--starts", type=int, default=16)
    sp.add_argument("--seed", type=int)

    sp = add("simulate", cmd_simulate, "Monte Carlo estimate of the expected meeting time")
    sp.add_argument("--dist", default="paper-y")
    sp.add_argument("--p", default="aw-opt")
    sp.add_argument("--trials", type=int, default=10**5)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--compare-exact", action="store_true")

    sp = add("reproduce", cmd_reproduce, "check every claim and print a ledger")
    sp.add_argument("--skip-slow", action="store_true", help="matrix and formula checks only")
    sp.add_argument("--mc-trials", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=20090708)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
