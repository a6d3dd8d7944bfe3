"""``mcbif`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 unreadable or invalid input, 3 a resource
cap was hit (element triangle cap, exact Sankey width cap, enumeration cap).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .baselines import (
    conditional_entropy_matrix,
    consensus_index,
    strong_triangle_violations,
    variation_of_information_matrix,
)
from .bifiltration import first_merge_matrix
from .complex import DEFAULT_MAX_TRIANGLES, TriangleCapExceeded
from .core import PartitionSequence
from .fileio import (
    SequenceFileError,
    format_grid,
    format_matrix,
    format_sequence,
    read_sequence,
    write_text_atomic,
)
from .generators import GeneratorConfig, sample_coarse_graining, sample_order_sequence
from .measures import (
    average_conflict0,
    average_conflict1,
    detect_zero_conflict,
    detect_triangle_zero_conflict,
    hilbert_distance,
    hilbert_grids,
)
from .sankey import (
    DEFAULT_MAX_WIDTH,
    WidthCapExceeded,
    build_sankey,
    edge_list_rows,
    minimize_crossings_exact,
    minimize_crossings_heuristic,
    hf1_crossing_bound,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(args, summary: dict) -> None:
    if not args.quiet:
        print(_dump(summary))


def _grids(seq: PartitionSequence, construction: str, max_triangles: int):
    return hilbert_grids(seq, construction, max_triangles)


def cmd_hilbert(args) -> int:
    seq = read_sequence(args.input)
    t0 = time.perf_counter()
    hf0, hf1 = _grids(seq, args.construction, args.max_triangles)
    elapsed = time.perf_counter() - t0
    out = Path(args.out)
    dims = [0, 1] if args.dim == "both" else [int(args.dim)]
    for d in dims:
        write_text_atomic(out / f"hf{d}.csv", format_grid((hf0, hf1)[d]))
    summary = {
        "m": seq.m,
        "n": seq.n_elements,
        "construction": args.construction,
        "dims": dims,
        "change_points": list(seq.change_points),
        "timings": {"hilbert_seconds": elapsed},
    }
    write_text_atomic(out / "summary.json", _dump(summary) + "\n")
    _emit(args, summary)
    return EXIT_OK


def cmd_conflicts(args) -> int:
    seq = read_sequence(args.input)
    hf0, hf1 = _grids(seq, args.construction, args.max_triangles)
    windows = []
    for i in range(seq.m):
        for j in range(i, seq.m):
            windows.append({
                "i": i + 1,
                "j": j + 1,
                "zero_conflict": detect_zero_conflict(seq, i, j, hf0),
                "triangle_zero_conflict": detect_triangle_zero_conflict(seq, i, j),
                "one_conflict": hf1[i, j] >= 1,
            })
    summary = {
        "m": seq.m,
        "n": seq.n_elements,
        "c0_bar": average_conflict0(seq, hf0),
        "c1_bar": average_conflict1(seq, hf1),
        "hf1_bound": hf1_crossing_bound(seq, hf1),
        "windows": windows,
    }
    print(_dump(summary))
    return EXIT_OK


def cmd_sankey(args) -> int:
    seq = read_sequence(args.input)
    diagram = build_sankey(seq)
    if args.mode == "exact":
        layout, crossings = minimize_crossings_exact(diagram, args.max_width)
    else:
        layout, crossings = minimize_crossings_heuristic(diagram, args.sweeps)
    _, hf1 = hilbert_grids(seq, "nerve")
    out = Path(args.out)
    rows = ["layer,source_rank,target_rank,weight"]
    rows.extend(",".join(map(str, r)) for r in edge_list_rows(diagram, layout))
    write_text_atomic(out / "edges.csv", "\n".join(rows) + "\n")
    rankings = [[r + 1 for r in ranks] for ranks in layout.rankings]
    write_text_atomic(out / "layout.json", _dump({"rankings": rankings}) + "\n")
    summary = {
        "m": seq.m,
        "n": seq.n_elements,
        "mode": args.mode,
        "crossings": crossings,
        "hf1_bound": hf1_crossing_bound(seq, hf1),
    }
    write_text_atomic(out / "summary.json", _dump(summary) + "\n")
    _emit(args, summary)
    return EXIT_OK


def cmd_baselines(args) -> int:
    seq = read_sequence(args.input)
    labels = [f"t{k + 1}" for k in range(seq.m)]
    out = Path(args.out)
    # rows: conditioned-on layer s; columns: layer t; entry H(theta(t) | theta(s))
    write_text_atomic(out / "ce.csv", format_matrix(conditional_entropy_matrix(seq), labels))
    write_text_atomic(out / "vi.csv", format_matrix(variation_of_information_matrix(seq), labels))
    violations = strong_triangle_violations(first_merge_matrix(seq, 0))
    summary = {
        "m": seq.m,
        "n": seq.n_elements,
        "ci": consensus_index(seq) if seq.m >= 2 else None,
        "ce_orientation": "row s, column t: H(theta(t) | theta(s))",
        "strong_triangle_violations": len(violations),
        "violating_triples": [[x + 1, y + 1, z + 1] for x, y, z in violations],
    }
    write_text_atomic(out / "summary.json", _dump(summary) + "\n")
    _emit(args, summary)
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        cfg = GeneratorConfig(args.n, args.m, args.p, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.count < 0:
        raise UsageError("count must be non-negative")
    if args.kind == "coarse" and args.m < 2:
        raise UsageError("coarse-graining samples need at least two layers")
    rng = cfg.rng()
    out = Path(args.out_dir)
    width = max(4, len(str(max(args.count - 1, 0))))
    samples = []
    for k in range(args.count):
        name = f"sample_{k:0{width}d}.csv"
        entry = {"file": name}
        if args.kind == "coarse":
            seq = sample_coarse_graining(cfg, rng)
        else:
            sample = sample_order_sequence(cfg, rng)
            seq = sample.sequence
            entry["label"] = sample.label
            entry["n_swaps"] = sample.n_swaps
        write_text_atomic(out / name, format_sequence(seq))
        samples.append(entry)
    manifest = {
        "kind": args.kind,
        "seed": args.seed,
        "rng": "numpy PCG64",
        "config": {"n_elements": args.n, "n_layers": args.m, "swap_probability": args.p},
        "samples": samples,
    }
    write_text_atomic(out / "manifest.json", _dump(manifest) + "\n")
    if not args.quiet:
        print(f"wrote {args.count} samples to {out}")
    return EXIT_OK


def cmd_distance(args) -> int:
    a = read_sequence(args.a)
    b = read_sequence(args.b)
    if a.change_points != b.change_points:
        raise SequenceFileError("the two sequences have different change points")
    ga = _grids(a, args.construction, args.max_triangles)[args.dim]
    gb = _grids(b, args.construction, args.max_triangles)[args.dim]
    print(repr(hilbert_distance(ga, gb)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcbif", description="Multiscale clustering bifiltration analysis of sequences of partitions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p, construction=True):
        p.add_argument("--quiet", action="store_true", help="suppress the printed summary")
        if construction:
            p.add_argument("--construction", choices=["element", "nerve"], default="nerve")
            p.add_argument("--max-triangles", type=int, default=DEFAULT_MAX_TRIANGLES,
                           help="triangle cap for the element construction")

    p = sub.add_parser("hilbert", help="write HF_0 / HF_1 grids as CSV")
    p.add_argument("input")
    p.add_argument("--dim", choices=["0", "1", "both"], default="both")
    p.add_argument("--out", required=True, help="output directory")
    add_common(p)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("conflicts", help="print average conflicts and per-window flags as JSON")
    p.add_argument("input")
    add_common(p)
    p.set_defaults(func=cmd_conflicts)

    p = sub.add_parser("sankey", help="optimise a Sankey layout and write its edge list")
    p.add_argument("input")
    p.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--max-width", type=int, default=DEFAULT_MAX_WIDTH)
    p.add_argument("--sweeps", type=int, default=4)
    add_common(p, construction=False)
    p.set_defaults(func=cmd_sankey)

    p = sub.add_parser("baselines", help="conditional entropy, VI, consensus index, ultrametric violations")
    p.add_argument("input")
    p.add_argument("--out", required=True, help="output directory")
    add_common(p, construction=False)
    p.set_defaults(func=cmd_baselines)

    p = sub.add_parser("generate", help="write synthetic sequence files")
    p.add_argument("--kind", choices=["coarse", "order"], required=True)
    p.add_argument("--n", type=int, required=True, help="number of elements")
    p.add_argument("--m", type=int, required=True, help="number of layers")
    p.add_argument("--p", type=float, default=0.0, help="per-layer swap probability (order only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out-dir", required=True)
    add_common(p, construction=False)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("distance", help="Hilbert distance between two sequences")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--dim", type=int, choices=[0, 1], default=0)
    add_common(p)
    p.set_defaults(func=cmd_distance)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mcbif: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SequenceFileError, OSError) as exc:
        print(f"mcbif: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TriangleCapExceeded as exc:
        print(f"mcbif: {exc}", file=sys.stderr)
        return EXIT_CAP
    except WidthCapExceeded as exc:
        print(f"mcbif: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
