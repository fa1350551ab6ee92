"""Command-line interface.

JSON goes to stdout (or ``--out``) and a one-line human summary to stderr.
Exit codes: 0 success, 2 bad input, 3 a cap or depth limit was hit, 4 a kernel
bound was violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .forests import CapExceededError, is_agreement_forest, maaf_bruteforce, maf_bruteforce
from .networks import GraphValidationError, displays, reticulation_count
from .newick_io import NewickError, parse_graph, parse_trees, write_dot, write_graph, write_tree
from .reductions import Mode, kernel_bound, kernelize
from .solver import SolverLimitError, hybridization_number, rspr_distance
from .tight import build_tight, search_tight, verify_tightness
from .tree import TreeError

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_BOUND = 0, 2, 3, 4
THREADS_ENV = "RSPRKERNEL_THREADS"


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    mode: Mode
    oracle_cap: int
    char_cap: int
    depth_cap: int
    fmt: str
    out: str | None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _tree_pairs(path1: str, path2: str) -> list:
    first, second = parse_trees(_read(path1)), parse_trees(_read(path2))
    if not first or not second:
        raise InputError("tree files must contain at least one tree")
    if len(first) != len(second):
        raise InputError(f"{path1} has {len(first)} trees but {path2} has {len(second)}")
    for t1, t2 in zip(first, second):
        if t1.taxa != t2.taxa:
            raise InputError("paired trees have different label sets")
    return list(zip(first, second))


def _blocks(forest) -> list:
    return forest.as_lists()


def _solve(t1, t2, cfg: RunConfig, method: str) -> tuple:
    if method == "oracle":
        if cfg.mode is Mode.RSPR:
            forest, d = maf_bruteforce(t1, t2, cap=cfg.oracle_cap)
        else:
            forest, d = maaf_bruteforce(t1, t2, cap=cfg.oracle_cap)
        return d, forest
    if cfg.mode is Mode.RSPR:
        return rspr_distance(t1, t2, depth_cap=cfg.depth_cap)
    return hybridization_number(t1, t2, depth_cap=cfg.depth_cap)


# -- per-pair work (module level so it can run in worker processes) ----------

def _kernelize_one(args) -> dict:
    t1, t2, cfg = args
    k = kernelize(t1, t2, cfg.mode)
    return {
        "s1": write_tree(k.s1),
        "s2": write_tree(k.s2),
        "leaves": k.n_leaves,
        "offset": k.offset,
        "distance_exact": k.distance_exact,
        "irreducible": k.irreducible,
        "trace": [
            {"rule": s.rule.value, "removed": sorted(s.removed_labels), "offset": s.distance_offset}
            for s in k.trace
        ],
    }


def _distance_one(args) -> dict:
    t1, t2, cfg, method = args
    d, forest = _solve(t1, t2, cfg, method)
    assert is_agreement_forest(t1, t2, forest)
    key = "d" if cfg.mode is Mode.RSPR else "r"
    return {key: d, "mode": cfg.mode.value, "certificate": _blocks(forest)}


def _verify_one(args) -> dict:
    t1, t2, cfg = args
    k = kernelize(t1, t2, cfg.mode)
    d, _ = _solve(k.s1, k.s2, cfg, "solver")
    out = {"mode": cfg.mode.value, "kernel_leaves": k.n_leaves, "kernel_value": d, "offset": k.offset}
    if d == 0:
        out.update(bound=None, holds=True, vacuous=True)
    else:
        bound = kernel_bound(d, cfg.mode)
        out.update(bound=bound, holds=k.n_leaves <= bound, vacuous=False, equality=k.n_leaves == bound)
    return out


def _map(fn, items: list) -> list:
    threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- commands --------------------------------------------------------------

def _emit(cfg: RunConfig, payload, text: str | None = None) -> None:
    if cfg.fmt == "json" or text is None:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _single_or_list(results: list):
    return results[0] if len(results) == 1 else results


def cmd_kernelize(args, cfg: RunConfig) -> int:
    pairs = _tree_pairs(args.tree1, args.tree2)
    results = _map(_kernelize_one, [(a, b, cfg) for a, b in pairs])
    text = None
    if cfg.fmt in ("newick", "text"):
        text = "".join(f"{r['s1']}\n{r['s2']}\n" for r in results)
    _emit(cfg, _single_or_list(results), text)
    for r in results:
        print(f"kernel: {r['leaves']} leaves, offset {r['offset']}, {len(r['trace'])} steps", file=sys.stderr)
    return EXIT_OK


def cmd_distance(args, cfg: RunConfig) -> int:
    pairs = _tree_pairs(args.tree1, args.tree2)
    results = _map(_distance_one, [(a, b, cfg, args.method) for a, b in pairs])
    key = "d" if cfg.mode is Mode.RSPR else "r"
    text = "".join(f"{r[key]}\n" for r in results) if cfg.fmt == "text" else None
    _emit(cfg, _single_or_list(results), text)
    for r in results:
        print(f"{key} = {r[key]} ({len(r['certificate'])} blocks)", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    pairs = _tree_pairs(args.tree1, args.tree2)
    results = _map(_verify_one, [(a, b, cfg) for a, b in pairs])
    _emit(cfg, _single_or_list(results))
    failed = 0
    for r in results:
        if r["vacuous"]:
            print("value 0: bound is vacuous", file=sys.stderr)
        else:
            verdict = "holds" if r["holds"] else "VIOLATED"
            print(f"kernel {r['kernel_leaves']} <= {r['bound']}: {verdict}", file=sys.stderr)
        failed += not r["holds"]
    return EXIT_BOUND if failed else EXIT_OK


def _report_dict(report) -> dict:
    return {
        "k": report.k,
        "mode": report.mode.value,
        "leaf_count": report.leaf_count,
        "expected_leaves": report.expected_leaves,
        "irreducible": report.irreducible,
        "applicable_rules": list(report.applicable),
        "upper_bound": report.upper_bound,
        "lower_bound": report.lower_bound,
        "certificate_kind": report.certificate_kind,
        "character_gap": report.character_gap,
        "dmp2": report.dmp2,
        "tight": report.tight,
    }


def cmd_tight(args, cfg: RunConfig) -> int:
    if args.k < 1:
        raise InputError("k must be at least 1")
    if args.search:
        fam, report = search_tight(args.k, cfg.mode, cfg.char_cap, cfg.depth_cap)
    else:
        fam = build_tight(args.k, cfg.mode)
        report = verify_tightness(fam, cfg.char_cap, cfg.depth_cap)
    payload = {
        "s1": write_tree(fam.s1),
        "s2": write_tree(fam.s2),
        "right_parents": list(fam.right_parents),
        "warning": "k = 1 is reported, not asserted tight" if args.k == 1 else None,
        "report": _report_dict(report),
    }
    files = {
        "s1.nwk": write_tree(fam.s1) + "\n",
        "s2.nwk": write_tree(fam.s2) + "\n",
        "graph.txt": write_graph(fam.graph),
        "graph.dot": write_dot(fam.graph),
        "generator.dot": write_dot(fam.generator),
        "report.json": json.dumps(payload, indent=2, sort_keys=True) + "\n",
    }
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text, encoding="utf-8")
    elif cfg.fmt == "dot":
        sys.stdout.write(files["graph.dot"])
    elif cfg.fmt == "newick":
        sys.stdout.write(files["s1.nwk"] + files["s2.nwk"])
    else:
        sys.stdout.write(files["report.json"])
    state = "tight" if report.tight else "not tight"
    print(
        f"k={args.k} {cfg.mode.value}: {report.leaf_count} leaves, bounds "
        f"{report.lower_bound}..{report.upper_bound}, {state}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_display(args, cfg: RunConfig) -> int:
    g = parse_graph(_read(args.graph))
    trees = parse_trees(_read(args.tree))
    if len(trees) != 1:
        raise InputError("display expects exactly one tree")
    t = trees[0]
    if t.taxa != g.taxa:
        raise InputError("graph and tree have different label sets")
    w = displays(g, t)
    payload = {
        "displayed": w is not None,
        "reticulations": reticulation_count(g),
        "switching": None if w is None else {str(r): str(p) for r, p in w.switching.items()},
    }
    text = None
    if cfg.fmt == "text":
        text = ("displayed" if w is not None else "not displayed") + "\n"
    _emit(cfg, payload, text)
    print("displayed" if w is not None else "not displayed", file=sys.stderr)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsprkernel", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.RSPR.value)
    common.add_argument("--oracle-cap", type=_positive, default=10, help="leaf cap for exhaustive oracles")
    common.add_argument("--char-cap", type=_positive, default=20, help="leaf cap for the d2MP scan")
    common.add_argument("--depth-cap", type=_positive, default=12, help="maximum search depth of the solver")
    common.add_argument("--format", choices=["json", "text", "newick", "dot"], default="json")
    common.add_argument("--out", help="write output here instead of stdout (a directory for 'tight')")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernelize", parents=[common], help="reduce a tree pair")
    p.add_argument("tree1")
    p.add_argument("tree2")
    p.set_defaults(run=cmd_kernelize)

    p = sub.add_parser("distance", parents=[common], help="exact rSPR distance or hybridization number")
    p.add_argument("tree1")
    p.add_argument("tree2")
    p.add_argument("--method", choices=["solver", "oracle"], default="solver")
    p.set_defaults(run=cmd_distance)

    p = sub.add_parser("verify", parents=[common], help="check the kernel size bound")
    p.add_argument("tree1")
    p.add_argument("tree2")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("tight", parents=[common], help="build and verify a tight family")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--search", action="store_true", help="try other right-parent orders if needed")
    p.set_defaults(run=cmd_tight)

    p = sub.add_parser("display", parents=[common], help="does a graph display a tree?")
    p.add_argument("graph")
    p.add_argument("tree")
    p.set_defaults(run=cmd_display)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        mode=Mode(args.mode),
        oracle_cap=args.oracle_cap,
        char_cap=args.char_cap,
        depth_cap=args.depth_cap,
        fmt=args.format,
        out=args.out,
    )
    try:
        return args.run(args, cfg)
    except (InputError, NewickError, TreeError, GraphValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (CapExceededError, SolverLimitError) as e:
        print(f"limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
