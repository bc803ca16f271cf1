"""Command-line entry point.

Exit status: 0 on CONFIRMED or success, 2 on REFUTED, 3 on INCONCLUSIVE,
1 on usage or I/O errors. ``INDSETLAB_SEED`` supplies the default seed.
"""

from __future__ import annotations

import argparse
import os
import sys

from ..graph import Graph, GraphError, load_graph, prefix_graph
from ..matching import Backend
from . import experiments as ex
from .bench import bench, format_table
from .report import ExperimentReport

SEED_ENV = "INDSETLAB_SEED"
EXIT_OK, EXIT_USAGE = 0, 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _backend(text: str) -> Backend:
    try:
        return Backend.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help=f"master seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--graph", help="edge-list file: 'N m' header, then m lines 'u v'")
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--backend", type=_backend, default=Backend(), help="exact | mcmc:<steps>")

    p = _Parser(prog="indsetlab", description="Independent-set sampling and verification experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", parents=[common], help="draw independent sets")
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--count", type=int, default=1)

    s = sub.add_parser("count", parents=[common], help="estimate the number of independent sets")
    s.add_argument("--epsilon0", type=float, default=0.2)
    s.add_argument("--rho", type=float, default=None, help="boost to failure probability rho by a median")
    s.add_argument("--samples", type=int, default=None, help="override samples per ratio")

    s = sub.add_parser("verify-distances", parents=[common], help="distance-lemma property suite")
    s.add_argument("--trials", type=int, default=10_000)

    s = sub.add_parser("verify-independence", parents=[common], help="value-vector independence test")
    s.add_argument("--round", type=int, default=None, help="edge index k: G_{k-1} -> G_k (default: last)")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--trials", type=int, default=100_000)

    s = sub.add_parser("verify-pm-bound", parents=[common], help="no-perfect-matching frequency vs bound")
    s.add_argument("--n-grid", type=_int_list, default=[20, 30, 40, 50])
    s.add_argument("--p-grid", type=_float_list, default=[0.3, 0.5, 0.7])
    s.add_argument("--trials", type=int, default=10_000)

    s = sub.add_parser("verify-robustness", parents=[common], help="conditional 1-probabilities of skeletons")
    s.add_argument("--round", type=int, default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--window", type=int, default=3)

    s = sub.add_parser("measure-uniformity", parents=[common], help="sampler output vs uniform")
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--samples", type=int, default=100_000)

    s = sub.add_parser("bench", parents=[common], help="time Python vs compiled kernels")
    s.add_argument("--repeat", type=int, default=20)
    return p


def _graph(args, default: Graph | None) -> Graph:
    if args.graph is None:
        if default is None:
            raise UsageError("--graph is required")
        return default
    return load_graph(args.graph)


def _pair(g: Graph, k: int | None) -> tuple[Graph, Graph]:
    if g.m == 0:
        raise UsageError("graph needs at least one edge")
    k = g.m if k is None else k
    if not 1 <= k <= g.m:
        raise UsageError(f"--round must be in 1..{g.m}")
    return prefix_graph(g, k - 1), prefix_graph(g, k)


def _run(args) -> ExperimentReport:
    c = args.command
    if c == "sample":
        return ex.sample_report(_graph(args, None), args.epsilon, args.backend, args.seed, args.count)
    if c == "count":
        return ex.count_report(_graph(args, None), args.epsilon0, args.backend, args.seed, args.rho, args.samples)
    if c == "verify-distances":
        return ex.verify_distance_lemma(args.trials, args.seed)
    if c == "verify-independence":
        a, b = _pair(_graph(args, ex.default_independence_fixture()[1]), args.round)
        return ex.verify_independence_property(a, b, args.n, args.trials, args.seed)
    if c == "verify-pm-bound":
        return ex.verify_pm_bound(args.n_grid, args.p_grid, args.trials, args.seed)
    if c == "verify-robustness":
        a, b = _pair(_graph(args, Graph(4, ((0, 1),))), args.round)
        return ex.verify_p_robustness(a, b, args.trials, args.seed, n=args.n, window=args.window)
    if c == "measure-uniformity":
        return ex.measure_sampler_uniformity(_graph(args, None), args.epsilon, args.samples, args.backend, args.seed)
    if c == "bench":
        return bench(args.repeat)
    raise UsageError(f"unknown command {c}")


def _summary(rep: ExperimentReport) -> str:
    m = rep.measurements
    if rep.experiment == "sample":
        lines = []
        for o in m["outcomes"]:
            lines.append("{" + ",".join(map(str, o["output"])) + "}"
                         + f"  failed={o['failed']} repetitions={o['repetitions_used']} failures={o['failures']}")
        return "\n".join(lines)
    if rep.experiment == "count":
        return f"estimate {m['value']:.6g} ({m['value_exact']})"
    if rep.experiment == "bench":
        return format_table(rep)
    return f"{rep.experiment}: {rep.verdict.value}"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            args.seed = _seed(env) if env else 0
        except (ValueError, argparse.ArgumentTypeError):
            print(f"indsetlab: error: {SEED_ENV}={env!r} is not a valid seed", file=sys.stderr)
            return EXIT_USAGE
    try:
        rep = _run(args)
    except (UsageError, GraphError, ex.ExperimentError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"indsetlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"indsetlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(_summary(rep))
    if args.out:
        try:
            rep.write(args.out)
        except OSError as exc:
            print(f"indsetlab: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    elif rep.experiment not in ("sample", "count", "bench"):
        sys.stdout.write(rep.to_json())
    return rep.verdict.exit_code if rep.verdict else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
