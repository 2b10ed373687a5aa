"""Command line front end.

One entry point, four algorithms, CSV out.  Exit codes: 0 success, 1 I/O
failure, 2 usage or config error, 3 graph error (bad input file, violated
module precondition, or the brute-force oracle's size cap).
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
import time
from contextlib import nullcontext
from dataclasses import dataclass
from pathlib import Path

from .coarse import coarse_global
from .exact import brandes_bc, brute_force_bc
from .generate import GenConfig, InvalidConfig, generate, resolve_module_count
from .graph import (
    Graph,
    GraphError,
    load_graph,
    save_graph,
    write_module_csv,
    write_node_csv,
)
from .modular import global_centrality, validate_precondition

DEFAULT_SIZES = "1000,2000,3000,4000,5000"


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="centrality",
        description="Betweenness centrality of modular graphs: exact, "
                    "module-decomposed, or coarse quotient estimates.")
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="PATH", help="graph file to score")
    src.add_argument("--generate", type=int, metavar="N",
                     help="score a synthetic modular graph with N nodes")
    ap.add_argument("--modules", metavar="RULE",
                    help="module rule for --generate: sqrt, hundredth, or an "
                         "explicit count (default sqrt)")
    ap.add_argument("--density", type=float, metavar="D",
                    help="internal edge density for --generate (default 0.5)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--algo", choices=("exact", "modular", "coarse", "oracle"),
                    default="modular")
    ap.add_argument("--coarse-weighted", action="store_true",
                    help="apportion coarse node scores by external edge weight")
    ap.add_argument("--halve", action="store_true",
                    help="report unordered-pair scores (half the ordered totals)")
    ap.add_argument("--validate", action="store_true",
                    help="fail unless same-module shortest paths stay in module")
    ap.add_argument("--enforce-p", action="store_true",
                    help="generate external edges heavier than any module "
                         "diameter, so --validate is guaranteed to pass")
    ap.add_argument("--bench", action="store_true",
                    help="time the algorithms over --sizes and write a timing CSV")
    ap.add_argument("--out", default="-", metavar="PATH",
                    help="output CSV path, - for stdout (default)")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: all cores); results do "
                         "not depend on this")
    ap.add_argument("--module-out", metavar="PATH",
                    help="write the per-module table here instead of appending "
                         "it after the node table")
    ap.add_argument("--graph-out", metavar="PATH",
                    help="also save the scored graph (useful with --generate)")
    ap.add_argument("--figures", metavar="DIR",
                    help="render PNG figures of the report into DIR")
    ap.add_argument("--sizes", default=DEFAULT_SIZES, metavar="N1,N2,...",
                    help="graph sizes for --bench (strictly ascending)")
    ap.add_argument("--rules", default="sqrt,hundredth", metavar="R1,R2,...",
                    help="module rules for --bench")
    ap.add_argument("--repeats", type=int, default=3,
                    help="timing repeats per point for --bench (median taken)")
    ap.add_argument("--bench-algos", default="exact,modular", metavar="A1,A2,...",
                    help="algorithms for --bench")
    return ap


def _check_args(ap: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.bench:
        if args.input is not None or args.generate is not None:
            ap.error("--bench generates its own graphs; drop --input/--generate")
    elif (args.input is None) == (args.generate is None):
        ap.error("exactly one of --input or --generate is required")
    if args.input is not None:
        if args.modules is not None:
            ap.error("--modules only applies to --generate")
        if args.density is not None:
            ap.error("--density only applies to --generate")
        if args.enforce_p:
            ap.error("--enforce-p only applies to --generate")
    if args.coarse_weighted and args.algo != "coarse":
        ap.error("--coarse-weighted requires --algo coarse")
    if args.threads is None:
        args.threads = os.cpu_count() or 1
    elif args.threads < 1:
        ap.error("--threads must be >= 1")


def _module_rule(text: str | None) -> str | int:
    if text is None:
        return "sqrt"
    if text in ("sqrt", "hundredth"):
        return text
    try:
        return int(text)
    except ValueError:
        raise InvalidConfig(f"module rule must be sqrt, hundredth or an "
                            f"integer, not {text!r}") from None


@dataclass(frozen=True)
class BenchResult:
    algorithm: str
    n: int
    k: int
    wall_seconds: float
    seed: int
    argmax_node: int
    argmax_score: float
    rule: str | int = "sqrt"
    threads: int = 1


def _run_exact(g, threads: int) -> tuple[int, float]:
    bc = brandes_bc(g, threads=threads)
    i = bc.argmax()
    return i, float(bc.scores[i])


def _run_modular(g, threads: int) -> tuple[int, float]:
    rep = global_centrality(g, threads=threads)
    return rep.global_central_node, float(rep.gc.scores[rep.global_central_node])


def _run_coarse(g, threads: int) -> tuple[int, float]:
    rep = coarse_global(g, threads=threads)
    return (rep.coarse_central_node,
            float(rep.coarse_gc.scores[rep.coarse_central_node]))


def _run_oracle(g, threads: int) -> tuple[int, float]:
    bc = brute_force_bc(g)
    i = bc.argmax()
    return i, float(bc.scores[i])


_RUNNERS = {"exact": _run_exact, "modular": _run_modular,
            "coarse": _run_coarse, "oracle": _run_oracle}


def bench_compare(sizes, rules=("sqrt", "hundredth"), repeats: int = 3,
                  seed: int = 0, *, algos=("exact", "modular"),
                  threads: int = 1) -> list[BenchResult]:
    """Median-of-`repeats` wall time per (rule, size, algorithm).

    Graphs are generated with enforce_p so the decomposed and exact runs
    rank the same node; only the algorithm call sits inside the timer.
    """
    sizes = [int(s) for s in sizes]
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InvalidConfig("bench sizes must be strictly ascending")
    if sizes[0] < 4:
        raise InvalidConfig("bench sizes must be >= 4")
    if repeats < 3:
        raise InvalidConfig("at least 3 repeats are needed for a stable median")
    for name in algos:
        if name not in _RUNNERS:
            raise InvalidConfig(f"unknown bench algorithm {name!r}")

    tiny = generate(GenConfig(n=16, module_rule=4, seed=seed, enforce_p=True))
    for name in algos:
        _RUNNERS[name](tiny, threads)  # jit warmup, untimed

    results: list[BenchResult] = []
    for rule in rules:
        for n in sizes:
            g = generate(GenConfig(n=n, module_rule=rule, seed=seed,
                                   enforce_p=True))
            for name in algos:
                times = []
                node, score = 0, 0.0
                for _ in range(repeats):
                    t0 = time.perf_counter()
                    node, score = _RUNNERS[name](g, threads)
                    times.append(time.perf_counter() - t0)
                results.append(BenchResult(
                    algorithm=name, n=n, k=resolve_module_count(rule, n),
                    wall_seconds=statistics.median(times), seed=seed,
                    argmax_node=node, argmax_score=score, rule=rule,
                    threads=threads))
    return results


def _write_bench_csv(f, results: list[BenchResult]) -> None:
    f.write("algo,n,k,median_seconds,threads,seed\n")
    for r in results:
        f.write(f"{r.algorithm},{r.n},{r.k},{r.wall_seconds:.6g},"
                f"{r.threads},{r.seed}\n")


def _open_out(path: str):
    if path == "-":
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def _figdir(args) -> Path:
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _load_or_generate(args) -> Graph:
    if args.input is not None:
        return load_graph(args.input)
    cfg = GenConfig(n=args.generate,
                    module_rule=_module_rule(args.modules),
                    internal_density=0.5 if args.density is None else args.density,
                    seed=args.seed, enforce_p=args.enforce_p)
    return generate(cfg)


def _dispatch(args) -> int:
    if args.bench:
        sizes = [s for s in args.sizes.split(",") if s]
        rules = [_module_rule(r) for r in args.rules.split(",") if r]
        algos = tuple(a.strip() for a in args.bench_algos.split(",") if a.strip())
        results = bench_compare(sizes, rules, repeats=args.repeats,
                                seed=args.seed, algos=algos,
                                threads=args.threads)
        with _open_out(args.out) as f:
            _write_bench_csv(f, results)
        if args.figures:
            from .report import render_timing_figure
            render_timing_figure(_figdir(args) / "bench_timing.png", results)
        return 0

    g = _load_or_generate(args)
    if args.graph_out:
        save_graph(g, args.graph_out)
    scale = 0.5 if args.halve else 1.0

    module_values = None
    if args.algo == "exact":
        if args.validate:
            validate_precondition(g)
        columns = {"bc": brandes_bc(g, threads=args.threads).scores}
    elif args.algo == "oracle":
        if args.validate:
            validate_precondition(g)
        columns = {"bc": brute_force_bc(g).scores}
    elif args.algo == "modular":
        rep = global_centrality(g, threads=args.threads, validate=args.validate)
        columns = {"lc": rep.lc.scores, "ec": rep.ec.scores, "gc": rep.gc.scores}
        module_values = rep.ec_module
    else:
        if args.validate:
            validate_precondition(g)
        crep = coarse_global(g, weighted=args.coarse_weighted,
                             threads=args.threads)
        columns = {"ic": crep.ic.scores, "ec": crep.node_ec.scores,
                   "coarse_gc": crep.coarse_gc.scores}

    with _open_out(args.out) as f:
        write_node_csv(f, g, columns, scale=scale)
        if module_values is not None and not args.module_out:
            f.write("\n")
            write_module_csv(f, module_values, scale=scale)
    if module_values is not None and args.module_out:
        with open(args.module_out, "w", encoding="utf-8", newline="") as f:
            write_module_csv(f, module_values, scale=scale)
    if args.figures:
        from .report import render_centrality_figure
        render_centrality_figure(
            _figdir(args) / f"centrality_{args.algo}.png",
            {name.upper(): vals * scale for name, vals in columns.items()},
            title=f"{args.algo} centrality, n={g.node_count}")
    return 0


def run(argv=None) -> int:
    """Parse and execute; returns the process exit code instead of raising."""
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
        _check_args(ap, args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else (0 if e.code is None else 2)
    try:
        return _dispatch(args)
    except InvalidConfig as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except GraphError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
