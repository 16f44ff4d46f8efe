"""Command-line interface.

Exit codes: 0 success, 2 usage error (argparse), 1 computation error.
All randomness is controlled by --seed; --jobs parallelizes experiment
loops with order-independent aggregation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .. import filtration as filt
from ..geometry import SampledSpace
from ..invariants import Line, bottleneck, matching_distance_mc, slice_line, slice_vertical
from ..modalg import (betti_numbers, hilbert_function, homology_presentation,
                      load_presentation, save_presentation, smoothed_presentation)
from ..scale import ABStandard, delta_hat, delta_k, delta_prime
from . import io as hio
from .experiments import ExperimentConfig, run_brownian, run_circle, run_two_circles

__all__ = ["main", "build_parser"]


def _snap_grades(arr: np.ndarray, snap: float) -> np.ndarray:
    return np.round(arr / snap) * snap


def _snap_complex(c, snap):
    grades = [_snap_grades(g, snap) for g in c.grades]
    return filt.BifilteredComplex([v.copy() for v in c.verts], grades, c.max_dim)


def _load_space(args) -> SampledSpace:
    return hio.load_space(args.infile, getattr(args, "dist", None))


def _build_complex(args, snap=None):
    if getattr(args, "complex", None):
        with open(args.complex, encoding="utf-8") as fh:
            c = filt.load_complex(fh.read())
    else:
        space = _load_space(args)
        builder = (filt.build_function_cech_euclidean if getattr(args, "cech", False)
                   else filt.build_function_rips)
        c = builder(space, args.max_dim, args.max_scale)
    if snap:
        c = _snap_complex(c, snap)
    return c


def _out_stream(args):
    if args.out:
        return open(args.out, "w", encoding="utf-8")
    return sys.stdout


def cmd_filtration(args):
    c = _build_complex(args, args.snap)
    with _out_stream(args) as fh:
        fh.write(filt.dump_complex(c))
    return 0


def cmd_present(args):
    c = _build_complex(args, args.snap)
    if args.kind == "homology":
        P = homology_presentation(c, args.degree, args.field)
    else:
        P = smoothed_presentation(c, args.degree, args.field)
    if args.out:
        save_presentation(P, args.out)
    else:
        from ..modalg import pres_dumps
        sys.stdout.write(pres_dumps(P))
    return 0


def cmd_betti(args):
    P = load_presentation(args.infile)
    b = betti_numbers(P)
    if args.out:
        hio.write_betti_csv(b, args.out, params=P.params)
    else:
        for deg, grades in enumerate(b):
            for g in grades:
                print(f"{deg}," + ",".join(repr(float(x)) for x in g))
    return 0


def _parse_grades(text, params):
    out = []
    for chunk in text.split(";"):
        vals = [float(x) for x in chunk.split(",")]
        if len(vals) != params:
            raise ValueError(f"grade {chunk!r} has {len(vals)} coordinates, "
                             f"expected {params}")
        out.append(tuple(vals))
    return out


def cmd_hilbert(args):
    P = load_presentation(args.infile)
    queries = _parse_grades(args.grades, P.params)
    dims = hilbert_function(P, queries)
    with _out_stream(args) as fh:
        fh.write(",".join(f"g{i+1}" for i in range(P.params)) + ",dim\n")
        for q, v in zip(queries, dims):
            fh.write(",".join(repr(float(x)) for x in q) + f",{v}\n")
    return 0


def cmd_slice(args):
    P = load_presentation(args.infile)
    if args.delta is not None:
        bars = slice_vertical(P, args.delta)
    else:
        if args.base is None or args.dir is None:
            raise ValueError("need either --delta or both --base and --dir")
        line = Line(tuple(float(x) for x in args.base.split(",")),
                    tuple(float(x) for x in args.dir.split(",")))
        bars = slice_line(P, line)
    if args.out:
        hio.write_barcode_csv(bars, args.out)
    else:
        print("birth,death")
        for b, d in bars:
            print(f"{b},{'inf' if math.isinf(d) else d}")
    return 0


def cmd_bottleneck(args):
    A = hio.read_barcode_csv(args.a)
    B = hio.read_barcode_csv(args.b)
    print(repr(bottleneck(A, B, args.truncate)))
    return 0


def cmd_matching(args):
    A = load_presentation(args.a)
    B = load_presentation(args.b)
    print(repr(matching_distance_mc(A, B, args.lines, seed=args.seed,
                                    truncation=args.truncate)))
    return 0


def cmd_select_delta(args):
    ab = ABStandard(args.a, args.b)
    if args.rule == "delta_k":
        print(repr(delta_k(args.k, ab)))
        return 0
    if args.rule == "delta_hat":
        space = _load_space(args)
        print(repr(delta_hat(space, args.beta)))
        return 0
    c = _build_complex(args, args.snap)
    target = "plateau" if args.target_dim is None else args.target_dim
    rule = delta_prime(c, args.degree, target, ab)
    if args.curve_out:
        from ..invariants import pointwise_dimension_curve
        top = max(float(g[:, 0].max()) for g in c.grades if g.size)
        deltas = np.linspace(0.0, top, 64)
        dims = pointwise_dimension_curve(c, args.degree, deltas)
        hio.write_curve_csv(deltas, dims, args.curve_out)
    print(repr(rule(args.k)))
    return 0


def cmd_experiment(args):
    sizes = tuple(int(x) for x in args.sizes.split(",")) if args.sizes else None
    seeds = tuple(int(x) for x in args.seeds.split(",")) if args.seeds \
        else (args.seed,)
    name = args.name
    zeta = args.zeta if args.zeta is not None else \
        (0.05 if name == "two-circles-noisy" else 0.0)
    cfg = ExperimentConfig(
        name=name,
        sizes=sizes or ((200,) if name.startswith("two-circles") or name == "circle"
                        else (100, 316, 1000, 3162, 10000)),
        seeds=seeds,
        field=args.field,
        truncation=args.truncate,
        zeta=zeta,
        brownian_m=args.m if args.m else (1_000_000 if args.full_scale else 100_000),
        jobs=args.jobs,
    )
    if name in ("two-circles", "two-circles-noisy"):
        report = run_two_circles(cfg)
    elif name == "circle":
        report = run_circle(cfg)
    elif name == "brownian":
        if args.full_scale and not args.sizes:
            cfg.sizes = (10_000,)
        report = run_brownian(cfg)
    elif name == "custom":
        report = _run_custom(args, cfg)
    else:
        raise ValueError(f"unknown experiment {name!r}")
    if not args.timing:
        # wall-clock timings break the byte-determinism contract
        for row in report["rows"]:
            row.pop("runtime_ms", None)
    out = args.out or f"{name}-report.json"
    hio.write_report_json(report, out)
    rows = report["rows"]
    if rows:
        csv_path = os.path.splitext(str(out))[0] + ".csv"
        hio.write_rows_csv(rows, csv_path)
    print(f"wrote {out} ({len(rows)} rows)")
    if report.get("fit"):
        print(f"fit: slope={report['fit']['slope']:.4f} "
              f"intercept={report['fit']['intercept']:.4f}")
    return 0


def _run_custom(args, cfg) -> dict:
    """Generic pipeline over a user CSV: build, present, slice at a policy."""
    space = _load_space(args)
    c = filt.build_function_rips(space, max_dim=cfg.degree + 1,
                                 max_scale=args.max_scale)
    if args.snap:
        c = _snap_complex(c, args.snap)
    est = smoothed_presentation(c, cfg.degree, cfg.field)
    rows = []
    if args.delta is not None and est.params == 2:
        bars = slice_vertical(est, args.delta)
        rows.append({"delta": args.delta, "bars": len(bars)})
        if args.out_barcode:
            hio.write_barcode_csv(bars, args.out_barcode)
    if args.out_pres:
        save_presentation(est, args.out_pres)
    return {"config": cfg.as_dict(), "rows": rows, "fit": None}


def _add_globals(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--field", type=int, default=d(2),
                        help="prime field (default 2)")
    parser.add_argument("--truncate", type=float, default=d(10.0),
                        help="death truncation for distances (default 10)")
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--snap", type=float, default=d(None),
                        help="snap grades to multiples of this step")
    parser.add_argument("--jobs", type=int, default=d(1))
    parser.add_argument("--out", default=d(None))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="funrips",
                                 description="function-Rips persistence estimators")
    _add_globals(ap, suppress=False)
    # globals are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_input(p, with_build=True):
        p.add_argument("--in", dest="infile", help="point-cloud CSV")
        p.add_argument("--dist", default=None, help="distance-matrix file")
        p.add_argument("--complex", default=None, help="complex dump file")
        if with_build:
            p.add_argument("--max-dim", type=int, default=2)
            p.add_argument("--max-scale", type=float, default=None)
            p.add_argument("--cech", action="store_true",
                           help="Euclidean function-Cech instead of Rips")

    p = sub.add_parser("filtration", help="build and dump a multifiltration")
    psub = p.add_subparsers(dest="subcommand", required=True)
    pb = psub.add_parser("build", parents=[common])
    add_input(pb)
    pb.set_defaults(func=cmd_filtration)

    p = sub.add_parser("present", parents=[common], help="compute a presentation")
    p.add_argument("kind", choices=["homology", "smoothed"])
    p.add_argument("--degree", type=int, required=True)
    add_input(p)
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("betti", parents=[common], help="multigraded Betti numbers of a PRES file")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("hilbert", parents=[common], help="pointwise dimensions of a PRES file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--grades", required=True,
                   help="semicolon-separated grades, e.g. '0.5,1;1,2'")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("slice", parents=[common], help="slice a presentation to a barcode")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--base", default=None, help="line base, comma-separated")
    p.add_argument("--dir", default=None, help="line direction, comma-separated")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("bottleneck", parents=[common], help="bottleneck distance of two barcode CSVs")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("matching", parents=[common], help="Monte-Carlo matching distance")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--lines", type=int, default=1000)
    p.set_defaults(func=cmd_matching)

    p = sub.add_parser("select-delta", parents=[common], help="scale-selection rules")
    p.add_argument("--rule", choices=["delta_k", "delta_hat", "delta_prime"],
                   required=True)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--target-dim", type=int, default=None)
    p.add_argument("--curve-out", default=None,
                   help="write the pointwise-dimension curve CSV here")
    add_input(p)
    p.set_defaults(func=cmd_select_delta)

    p = sub.add_parser("experiment", parents=[common], help="run a named experiment")
    p.add_argument("name", choices=["two-circles", "two-circles-noisy",
                                    "circle", "brownian", "custom"])
    p.add_argument("--sizes", default=None, help="comma-separated sample sizes")
    p.add_argument("--seeds", default=None, help="comma-separated seeds")
    p.add_argument("--zeta", type=float, default=None)
    p.add_argument("--m", type=int, default=None, help="Brownian resolution")
    p.add_argument("--full-scale", action="store_true",
                   help="m=10^6, k=10^4 single point")
    p.add_argument("--timing", action="store_true",
                   help="keep wall-clock runtime_ms in the report "
                        "(breaks byte determinism)")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--max-scale", type=float, default=None)
    p.add_argument("--out-pres", default=None)
    p.add_argument("--out-barcode", default=None)
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--dist", default=None)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
