"""Command-line entry point ``uurel``.

Exit codes: 0 success, 1 verification found violations, 2 usage error,
3 parse error, 4 invariant violation, 5 enumeration budget exceeded,
6 acceptance failure, 7 oracle did not converge, 8 file I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import BudgetExceeded, ConvergenceError, InvariantError, ParseError
from .experiments import ExperimentConfig, run_figure3, run_mub, run_verify
from .io import format_float, load_ensemble, example1_text, write_csv
from .majorization import DEFAULT_MEASURES, UncertaintyMeasure
from .multi import build_bound_vector_multi
from .oracle import OptimizerConfig, max_product_pure
from .pair import (
    DEFAULT_BUDGET,
    build_bound_vector,
    maassen_uffink_bound,
    omega_tilde_sequence,
    overlap_stats,
)
from .quantum import operator_norm_psd, random_projector, trial_rng

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 3
EXIT_INVARIANT = 4
EXIT_BUDGET = 5
EXIT_ACCEPTANCE = 6
EXIT_CONVERGENCE = 7
EXIT_IO = 8


def _measure(text):
    try:
        return UncertaintyMeasure.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text):
    out = []
    for part in text.split(","):
        lo, _, hi = part.partition("-")
        out.extend(range(int(lo), int(hi) + 1) if hi else [int(lo)])
    return out


def _fmt(xs):
    return "[" + ", ".join(f"{x:.12g}" for x in xs) + "]"


def _measures(args):
    return tuple(args.measure) if args.measure else DEFAULT_MEASURES


def cmd_bound(args, out):
    ens = load_ensemble(args.input)
    measures = _measures(args)
    report = {"dim": ens.dim, "measurements": ens.n_measurements}
    if ens.n_measurements == 2 and ens.projective:
        a, b = ens.measurements
        seq = omega_tilde_sequence(a, b, args.budget)
        vec = build_bound_vector(a, b, args.budget)
        st = overlap_stats(a, b)
        report.update(c=st.c, c_prime=st.c_prime, maassen_uffink=maassen_uffink_bound(a, b))
    else:
        vec = build_bound_vector_multi(ens, args.budget)
        seq = vec.bounds
    report.update(
        omega_tilde=seq.values.tolist(),
        exact=seq.exact.tolist(),
        vector_raw=vec.raw.tolist(),
        vector_sorted=vec.sorted.tolist(),
        measures={phi.label: phi(vec.sorted) for phi in measures},
    )
    print(f"dim {ens.dim}, {ens.n_measurements} measurements", file=out)
    print(f"Omega~_k    {_fmt(seq.values)}", file=out)
    print(f"omega~ raw  {_fmt(vec.raw)}", file=out)
    print(f"omega~ sort {_fmt(vec.sorted)}", file=out)
    if "c" in report:
        print(f"c = {report['c']:.12g}, c' = {report['c_prime']:.12g}", file=out)
        print(f"Maassen-Uffink bound = {report['maassen_uffink']:.12g} bits", file=out)
    for label, v in report["measures"].items():
        print(f"{label}(omega~) = {v:.12g}", file=out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    return EXIT_OK


def cmd_verify(args, out):
    ens = load_ensemble(args.input) if args.input else None
    experiment = "file" if ens is not None else args.experiment
    cfg = ExperimentConfig(experiment, ens.dim if ens else args.dim, args.trials, args.seed,
                           _measures(args), args.out, args.budget, args.workers)
    s = run_verify(cfg, ens)
    print(f"{experiment}: {s.trials} trials, {s.violations} majorization violations, "
          f"{s.dominance_violations} measure violations", file=out)
    print(f"worst margin {s.worst_margin:.3e}, worst measure gap {s.worst_dominance:.3e}", file=out)
    return EXIT_OK if s.ok else EXIT_VIOLATION


def cmd_figure3(args, out):
    cfg = ExperimentConfig("figure3", args.dim, args.trials, args.seed, out=args.out,
                           budget=args.budget, workers=args.workers)
    s = run_figure3(cfg)
    below = sum(r.h_joint < r.h_bound - 1e-9 for r in s.records)
    print(f"{s.trials} trials, d={args.dim}; rows with H(p(x)q) < H(omega~): {below}", file=out)
    print(f"H(omega~) > Maassen-Uffink: {s.above_mu}/{s.trials} ({100 * s.fraction(s.above_mu, s.trials):.1f}%)",
          file=out)
    print(f"  c > 0.83:  {s.high_c_above_mu}/{s.high_c} ({100 * s.fraction(s.high_c_above_mu, s.high_c):.1f}%)",
          file=out)
    print(f"  c <= 0.83: {s.low_c_above_mu}/{s.low_c} ({100 * s.fraction(s.low_c_above_mu, s.low_c):.1f}%)",
          file=out)
    return EXIT_OK if below == 0 else EXIT_VIOLATION


def cmd_mub(args, out):
    cfg = OptimizerConfig(seed=args.seed)
    rows = run_mub(args.dims, args.ks, args.trials, args.seed, cfg, args.budget, not args.no_oracle)
    header = ("d", "k", "omega_tilde", "conjectured", "exact", "oracle", "mub_rate", "note")
    table = [(r.d, r.k, r.omega_tilde, r.conjectured,
              "" if r.exact is None else r.exact,
              "" if r.oracle is None else r.oracle,
              "" if r.mub_rate is None else r.mub_rate, r.oracle_note) for r in rows]
    print(" ".join(f"{h:>12}" for h in header[:-1]) + "  note", file=out)
    for row in table:
        cells = [f"{v:>12.8f}" if isinstance(v, float) else f"{v!s:>12}" for v in row[:-1]]
        print(" ".join(cells) + ("  " + row[-1] if row[-1] else ""), file=out)
    if args.out:
        write_csv(args.out, header, table)
    return EXIT_OK


def cmd_example1(args, out):
    out.write(example1_text())
    return EXIT_OK


def cmd_theorem1(args, out):
    """Compare the direct maximum of Tr(ρA)Tr(ρB) with ¼||A+B||² on random projectors."""
    worst = 0.0
    for i in range(args.trials):
        rng = trial_rng(args.seed, i)
        a = random_projector(args.dim, int(rng.integers(1, args.dim)), rng)
        b = random_projector(args.dim, int(rng.integers(1, args.dim)), rng)
        closed = 0.25 * operator_norm_psd(a + b) ** 2
        val, _ = max_product_pure(a, b, OptimizerConfig(seed=args.seed * 1000 + i))
        rel = abs(val - closed) / closed
        worst = max(worst, rel)
        print(f"{i:4d} oracle {format_float(val)}  closed form {format_float(closed)}  rel {rel:.1e}", file=out)
    print(f"worst relative gap {worst:.2e}", file=out)
    return EXIT_OK if worst <= 1e-4 else EXIT_VIOLATION


def cmd_acceptance(args, out):
    from .acceptance import run_all

    results = run_all(args.seed, 0.1 if args.quick else 1.0, echo=lambda s: print(s, file=out, flush=True))
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""), file=out)
    return EXIT_OK if not failed else EXIT_ACCEPTANCE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uurel", description="Universal uncertainty relations toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, dim=6, trials=10_000, measure=False):
        sp.add_argument("--dim", type=int, default=dim)
        sp.add_argument("--trials", type=int, default=trials)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--workers", type=int, default=1)
        if measure:
            sp.add_argument("--measure", type=_measure, action="append",
                            help="shannon | renyi:ALPHA | minentropy | neglogmin (repeatable)")

    sp = sub.add_parser("bound", help="bound sequence and vector for a measurement file")
    sp.add_argument("input")
    common(sp, measure=True)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("verify", help="Monte Carlo check of the majorization relation")
    sp.add_argument("input", nargs="?", help="measurement file (default: random bases)")
    sp.add_argument("--experiment", choices=("pair", "triple", "example1"), default="pair")
    common(sp, measure=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("figure3", help="entropy bound versus Maassen-Uffink on random pairs")
    common(sp)
    sp.set_defaults(func=cmd_figure3)

    sp = sub.add_parser("mub", help="computational/Fourier sweep against the MUB conjecture")
    common(sp, trials=1000)
    sp.add_argument("--dims", type=_int_list, default=[2, 3, 4])
    sp.add_argument("--ks", type=_int_list, default=[1, 2, 3, 4])
    sp.add_argument("--no-oracle", action="store_true")
    sp.set_defaults(func=cmd_mub)

    sp = sub.add_parser("example1", help="print the three-basis fixture")
    sp.set_defaults(func=cmd_example1)

    sp = sub.add_parser("theorem1", help="oracle spot-check of the product maximum")
    common(sp, dim=3, trials=5)
    sp.set_defaults(func=cmd_theorem1)

    sp = sub.add_parser("acceptance", help="run the acceptance suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--quick", action="store_true", help="one tenth of the trial counts")
    sp.set_defaults(func=cmd_acceptance)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", 1) < 1 or getattr(args, "dim", 2) < 2:
        print("error: --trials must be >= 1 and --dim >= 2", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConvergenceError as exc:
        print(f"convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
