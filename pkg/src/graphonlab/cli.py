"""Command-line entry point: ``graphonlab <subcommand> ...``.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.
Every subcommand is a deterministic function of its flags and seed.
"""

import argparse
import json
import os
import sys

from . import align, bench, infotheory, packing
from .errors import (
    ExhaustedAttempts,
    GraphonError,
    InfiniteDivergence,
    NumericalBreakdown,
    TooLargeForExact,
    TooLargeToEnumerate,
)
from .estimators import ESTIMATORS
from .io import graph_to_text, read_matrix, write_graph
from .rng import RngSeed
from .sampler import sample_graph

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
_NUMERIC = (NumericalBreakdown, InfiniteDivergence, ExhaustedAttempts, TooLargeForExact, TooLargeToEnumerate)


def _emit(obj, args, name):
    text = json.dumps(obj, sort_keys=True) + "\n"
    _write(text, args, name)


def _write(text, args, name):
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, name), "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def cmd_sample(args):
    w = read_matrix(args.matrix, rho=args.rho)
    seed = RngSeed(args.seed, args.stream)
    g = sample_graph(w, args.n, seed, keep_latents=args.sidecar, method=args.method)
    if args.out:
        write_graph(args.out, g, seed if args.sidecar else None)
    else:
        _write(graph_to_text(g), args, "graph.txt")


def cmd_dist(args):
    a, b = read_matrix(args.a, rho=args.rho), read_matrix(args.b, rho=args.rho)
    seed = RngSeed(args.seed, args.stream)
    exact = not args.heuristic
    if args.metric == "hat2":
        res = align.delta_hat2_exact(a, b) if exact else align.delta_hat2_heuristic(a, b, args.restarts, seed)
        out = res.to_dict()
    elif args.metric == "hathat2":
        res = align.delta_hathat2_exact(a, b) if exact else align.delta_hathat2_heuristic(a, b, args.restarts, seed)
        out = res.to_dict()
    elif args.metric == "hamming":
        res = align.delta_hathat2_exact(a, b)
        out = res.to_dict()
        out["distance"] = align.permuted_hamming_min(a, b)
    else:
        d = align.delta2_upper_via_blowup(a, b, args.m, args.restarts, seed)
        out = {"distance": d, "row_perm": None, "col_perm": None, "exact": False}
    _emit(out, args, "dist.json")


def cmd_pack(args):
    target = args.target if args.target is not None else args.k * args.k // 8
    seed = RngSeed(args.seed, args.stream)
    try:
        s = packing.sample_packing_set(args.k, args.count, target, args.max_attempts, seed)
    except ExhaustedAttempts as exc:
        out = exc.achieved.to_json()
        out["error"] = str(exc)
        _emit(out, args, "packing.json")
        raise
    out = s.to_json()
    out["seed"] = {"seed": seed.seed, "stream": seed.stream}
    _emit(out, args, "packing.json")


def cmd_kl(args):
    a, b = read_matrix(args.a, rho=args.rho), read_matrix(args.b, rho=args.rho)
    out = {"n": args.n}
    if args.bound:
        out["method"] = "bound"
        out["kl"] = infotheory.kl_upper_bound(a, b, args.n)
    else:
        out["method"] = "exact"
        val = infotheory.exact_kl(a, b, args.n, lenient=args.lenient)
        out["kl"] = "inf" if val == float("inf") else val
    _emit(out, args, "kl.json")


def cmd_fano(args):
    val = infotheory.fano_bound(infotheory.FanoInput(args.kl, args.M, args.epsilon))
    _emit({"kl": args.kl, "M": args.M, "epsilon": args.epsilon, "bound": val, "clamped": max(val, 0.0)}, args, "fano.json")


def cmd_rates(args):
    q = bench.RateQuery(args.n, args.k, args.rho)
    low = bench.lower_rate(q)
    out = {
        "n": q.n, "k": q.k, "rho": q.rho,
        "lower": low["total"], "terms": low["terms"],
        "upper": bench.upper_rate(q), "gap_factor": bench.gap_factor(q),
        "constants": "unit-constant rate curves",
    }
    _emit(out, args, "rates.json")


def cmd_risk(args):
    truth = read_matrix(args.truth, rho=args.rho)
    k_fit = args.k_fit if args.k_fit is not None else truth.k
    rec = bench.risk_record(
        args.estimator, truth, args.n, k_fit, args.trials, RngSeed(args.seed, args.stream),
        m=args.blowup_m, restarts=args.restarts,
    )
    _write(bench.format_records([rec]), args, "risk.csv")


def cmd_experiment(args):
    out_dir = args.out_dir or "."
    with open(args.config) as fh:
        cfg = json.load(fh)
    if args.seed_given:
        cfg["seed"] = args.seed
    records = bench.run_experiment(cfg, out_dir, threads=args.threads)
    sys.stdout.write(bench.format_records(records))


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    p.add_argument("--stream", type=int, default=argparse.SUPPRESS, help="RNG stream (default 0)")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    p.add_argument("--out-dir", default=argparse.SUPPRESS, help="also write the output into this directory")
    p.add_argument("--rho", type=float, default=argparse.SUPPRESS, help="declared bound for CSV matrices")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="graphonlab", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="draw a W-random graph")
    p.add_argument("matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=["auto", "dense", "sparse"], default="auto")
    p.add_argument("--out", help="graph file to write (stdout otherwise)")
    p.add_argument("--sidecar", action="store_true", help="keep labels and write a JSON sidecar")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("dist", parents=[common], help="alignment distance between two matrices")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--metric", choices=["hat2", "hathat2", "hamming", "blowup"], default="hathat2")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--heuristic", action="store_true")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("pack", parents=[common], help="sample a permuted-Hamming packing")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--target", type=int)
    p.add_argument("--max-attempts", type=int, default=10_000)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("kl", parents=[common], help="KL divergence between graph laws")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--bound", action="store_true")
    p.add_argument("--lenient", action="store_true", help="report infinite divergence instead of failing")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("fano", parents=[common], help="evaluate Fano's lower bound")
    p.add_argument("--kl", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.set_defaults(func=cmd_fano)

    p = sub.add_parser("rates", parents=[common], help="unit-constant minimax rate curves")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("risk", parents=[common], help="Monte-Carlo risk of one estimator")
    p.add_argument("--estimator", choices=ESTIMATORS, required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--k-fit", type=int)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--blowup-m", type=int, default=2)
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("experiment", parents=[common], help="run a grid experiment from a JSON config")
    p.add_argument("config")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed_given = hasattr(args, "seed")
    for name, default in (("seed", 0), ("stream", 0), ("threads", 1), ("out_dir", None), ("rho", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.command == "rates" and args.rho is None:
        parser.error("rates needs --rho")
    try:
        args.func(args)
    except _NUMERIC as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GraphonError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
