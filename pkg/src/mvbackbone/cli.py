"""Command-line interface: ``mvbackbone <subcommand> ...``.

Exit codes: 0 success, 1 computational error, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .backbone import (
    BackboneSpec,
    canonical_method,
    extract,
    write_trace,
)
from .community import (
    best_louvain,
    clique_percolation_cover,
    load_cover,
    load_partition,
    save_partition,
)
from .datasets import DATASETS, dataset_path
from .graph import ParseError, WeightedGraph, export, load_edge_list, write_edge_list
from .metrics import compare_report, comparison_csv, descriptive_stats, format_comparison, format_stats
from .vitality import modularity_vitality, rank_by_absolute_vitality

EXIT_OK, EXIT_COMPUTE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# helpers ------------------------------------------------------------------------


def _resolve_input(spec: str) -> Path:
    path = Path(spec)
    if path.exists():
        return path
    if spec in DATASETS:
        return dataset_path(spec)
    raise InputError(f"{spec}: no such file or dataset")


def _load_graph(spec: str) -> tuple[WeightedGraph, Path]:
    path = _resolve_input(spec)
    g = load_edge_list(path)
    if g.n_edges == 0:
        raise InputError(f"{spec}: no edges")
    return g, path


def _stem(path: Path) -> str:
    name = path.name
    for suffix in (".edges", ".txt", ".csv", ".tsv"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return path.stem


def _header(command: str, config: dict) -> list[str]:
    blob = json.dumps({"command": command, **config}, sort_keys=True, default=str)
    digest = hashlib.sha256(blob.encode()).hexdigest()[:16]
    lines = [f"mvbackbone {__version__} {command}"]
    lines += [f"{k}: {config[k]}" for k in sorted(config)]
    lines.append(f"config_hash: {digest}")
    return lines


def _out_path(args, explicit: str | None, default_name: str) -> Path:
    if explicit:
        return Path(explicit)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / default_name


def _say(args, text: str) -> None:
    if not args.quiet:
        print(text)


def _partition_for(args, g: WeightedGraph):
    """Partition from --partition, or best-of-restarts Louvain."""
    if getattr(args, "partition", None):
        p = load_partition(args.partition, g)
        return p, f"file {args.partition}"
    p, q, s = best_louvain(g, args.restarts, args.seed)
    return p, f"louvain best of {args.restarts} (seeds {args.seed}..{args.seed + args.restarts - 1}, winner {s}, Q={q:.6f})"


def _cover_for(args, g: WeightedGraph):
    if getattr(args, "cover", None):
        return load_cover(args.cover, g), f"file {args.cover}"
    k = args.cpm_k if args.cpm_k is not None else 3
    return clique_percolation_cover(g, k), f"clique percolation k={k} (stand-in detector)"


# subcommands ----------------------------------------------------------------------


def cmd_detect(args) -> int:
    g, path = _load_graph(args.input)
    p, q, s = best_louvain(g, args.restarts, args.seed)
    out = _out_path(args, args.out, f"{_stem(path)}.partition")
    config = {"input": args.input, "seed": args.seed, "restarts": args.restarts}
    header = _header("detect", config) + [f"winning_seed: {s}", f"modularity: {q!r}", f"communities: {p.n_communities}"]
    save_partition(p, out, header)
    _say(args, f"Q={q:.4f} n_c={p.n_communities} seed={args.seed} winning_seed={s} -> {out}")
    return EXIT_OK


def cmd_vitality(args) -> int:
    g, path = _load_graph(args.input)
    p, source = _partition_for(args, g)
    scores = modularity_vitality(g, p)
    order = rank_by_absolute_vitality(scores)
    out = _out_path(args, args.out, f"{_stem(path)}.vitality.tsv")
    config = {"input": args.input, "seed": args.seed, "restarts": args.restarts, "partition": source}
    lines = [f"# {h}" for h in _header("vitality", config)]
    lines.append(f"# base_modularity: {scores.base_modularity!r}")
    lines.append("# label\talpha\tabs_rank")
    lines += [f"{v}\t{scores[v]!r}\t{rank}" for rank, v in enumerate(order, start=1)]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    _say(args, f"Q={scores.base_modularity:.4f} scored {len(order)} nodes seed={args.seed} -> {out}")
    return EXIT_OK


def _run_method(args, g: WeightedGraph, method: str):
    spec = BackboneSpec(method, args.size, args.alpha, args.seed)
    partition = cover = None
    source = "none"
    if spec.method == "modularity_vitality":
        partition, source = _partition_for(args, g)
    elif spec.method in ("overlapping_ego", "overlapping_hubs"):
        cover, source = _cover_for(args, g)
    result = extract(g, spec, partition=partition, cover=cover)
    return spec, result, source


def cmd_extract(args) -> int:
    g, path = _load_graph(args.input)
    method = canonical_method(args.method)
    spec, result, source = _run_method(args, g, method)
    config = {
        "input": args.input,
        "method": spec.method,
        "target_fraction": spec.target_fraction,
        "alpha": spec.alpha,
        "seed": args.seed,
        "restarts": args.restarts,
        "communities": source,
    }
    header = _header("extract", config)
    if spec.method in ("overlapping_ego", "overlapping_hubs"):
        header.append("note: baseline approximation (reconstructed size trimming)")
    out = _out_path(args, args.out, f"{_stem(path)}.{spec.method}.edges")
    write_edge_list(result.graph, out, header)
    if args.trace is not None:
        trace_path = Path(args.trace) if args.trace else out.with_suffix(".trace")
        write_trace(result, trace_path, header)
    _say(
        args,
        f"{spec.method}: {result.graph.n_nodes} nodes, {result.graph.n_edges} edges "
        f"(target {result.target_size}) seed={args.seed} -> {out}",
    )
    return EXIT_OK


def cmd_stats(args) -> int:
    rows = []
    for spec in args.input:
        g, _ = _load_graph(spec)
        partition = load_partition(args.partition, g) if args.partition else None
        rows.append((spec, descriptive_stats(g, partition, args.seed, args.restarts, args.sample_sources)))
    _say(args, f"# seed={args.seed} restarts={args.restarts}")
    _say(args, format_stats(rows))
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            fields = list(rows[0][1].as_dict())
            writer.writerow(["network", *fields])
            for name, m in rows:
                d = m.as_dict()
                writer.writerow([name, *(d[f] for f in fields)])
    return EXIT_OK


def cmd_compare(args) -> int:
    methods = [canonical_method(m) for m in args.methods.split(",") if m.strip()]
    if len(methods) < 2:
        raise InputError("compare needs at least two methods")
    rows = []
    notes = []
    for spec_in in args.input:
        g, _ = _load_graph(spec_in)
        results = {}
        for method in methods:
            label = method
            n = 2
            while label in results:
                label = f"{method}#{n}"
                n += 1
            _, results[label], source = _run_method(args, g, method)
            notes.append(f"{spec_in} {label}: communities from {source}")
        rows += compare_report(spec_in, results, args.seed, args.restarts, args.sample_sources)
    config = {
        "inputs": ",".join(args.input),
        "methods": ",".join(methods),
        "target_fraction": args.size,
        "alpha": args.alpha,
        "seed": args.seed,
        "restarts": args.restarts,
    }
    header = _header("compare", config) + notes
    header.append("Q: best-of-restarts Louvain re-detected on each backbone")
    text = format_comparison(rows)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "compare.txt").write_text("\n".join(f"# {h}" for h in header) + "\n" + text + "\n", encoding="utf-8")
    (out_dir / "compare.csv").write_text(
        "".join(f"# {h}\n" for h in header) + comparison_csv(rows), encoding="utf-8"
    )
    _say(args, f"# seed={args.seed}")
    _say(args, text)
    return EXIT_OK


def cmd_export(args) -> int:
    g, path = _load_graph(args.input)
    communities = None
    if args.partition:
        communities = dict(load_partition(args.partition, g).assignment)
    suffix = "dot" if args.format == "dot" else "edges"
    out = _out_path(args, args.out, f"{_stem(path)}.export.{suffix}")
    header = _header("export", {"input": args.input, "format": args.format})
    if args.format == "dot":
        export(g, "dot", out, communities=communities, header=header)
    else:
        export(g, "edgelist", out, header=header)
    _say(args, f"wrote {out}")
    return EXIT_OK


# parser -----------------------------------------------------------------------------


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="first Louvain seed (default 0)")
    parser.add_argument("--restarts", type=int, default=d(20), help="Louvain restarts (default 20)")
    parser.add_argument("--quiet", action="store_true", default=d(False))
    parser.add_argument("--out-dir", default=d("."), help="directory for default output files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvbackbone", description="Modularity vitality backbones of weighted networks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", parents=[common], help="best-of-restarts Louvain partition")
    p.add_argument("--in", dest="input", required=True, help="edge list file or bundled dataset name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("vitality", parents=[common], help="modularity vitality per node")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--partition")
    p.add_argument("--out")
    p.set_defaults(func=cmd_vitality)

    def method_options(p):
        p.add_argument("--size", type=float, default=0.3, help="backbone size as a fraction of N (default 0.3)")
        p.add_argument("--alpha", type=float, default=0.05, help="disparity filter significance (default 0.05)")
        p.add_argument("--partition", help="partition file for the mv method")
        grp = p.add_mutually_exclusive_group()
        grp.add_argument("--cover", help="cover file for the ego/hubs methods")
        grp.add_argument("--cpm-k", type=int, default=None, help="clique size for the default cover (3)")
        p.add_argument("--sample-sources", type=int, default=None, help="betweenness source sample size")

    p = sub.add_parser("extract", parents=[common], help="extract one backbone")
    p.add_argument("--method", required=True, help="mv, ego, hubs or disparity")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--trace", nargs="?", const="", default=None, help="write the removal trace (optional path)")
    method_options(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("stats", parents=[common], help="descriptive statistics")
    p.add_argument("--in", dest="input", required=True, action="append")
    p.add_argument("--partition")
    p.add_argument("--csv")
    p.add_argument("--sample-sources", type=int, default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("compare", parents=[common], help="compare backbone methods")
    p.add_argument("--in", dest="input", required=True, action="append")
    p.add_argument("--methods", default="mv,ego")
    method_options(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export", parents=[common], help="export a graph as edge list or DOT")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=("edgelist", "dot"), default="edgelist")
    p.add_argument("--partition")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.restarts < 1:
        print("error: --restarts must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ParseError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
