"""Command-line interface.

One binary, subcommand style:

    floatgeo flotation --in poly.json --delta 0.25 --samples 360 --out s.csv
    floatgeo buoyancy  --in poly.json --delta 0.3 --samples 720 --out c.csv
    floatgeo decompose --in poly.json --delta 0.25 --out dec.json
    floatgeo reconstruct --in dec.json --delta 0.3 --out poly.json
    floatgeo counterexample --in base.json --epsilon 0.1 --out pair.json
    floatgeo verify --in poly.json --delta 0.3 --out report.json

Outputs are deterministic for a fixed (input, flags, seed).  `--plot`
renders a matplotlib figure next to the delimited output; `--format svg`
makes the figure itself the primary artifact.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as fio
from .arcs import decompose_flotation_2d
from .buoyancy import sample_buoyancy
from .errors import FloatGeoError, HalfDensity
from .flotation import sample_flotation
from .polytope import Polytope
from .reconstruct import (flotation_disagreement, hausdorff,
                          make_counterexample, reconstruct)
from .verify import run_verification

_DELTA_MIN, _DELTA_MAX = 1e-3, 1.0 - 1e-3


class ValidationError(Exception):
    pass


def _check_delta(delta: float) -> float:
    if not (_DELTA_MIN <= delta <= _DELTA_MAX):
        raise ValidationError(
            f"precondition violated: delta must lie in [{_DELTA_MIN}, "
            f"{_DELTA_MAX}], got {delta}")
    return delta


def _directions(dim: int, n: int) -> np.ndarray:
    if n < 4:
        raise ValidationError("precondition violated: samples must be >= 4")
    if dim == 2:
        phi = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return np.stack([np.cos(phi), np.sin(phi)], axis=1)
    k = np.arange(n, dtype=float)
    golden = (1.0 + np.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * k + 1.0) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = 2.0 * np.pi * k / golden
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _chunked_map(func, directions: np.ndarray, threads: int) -> list:
    """Map over direction chunks; order-preserving merge, so the output is
    identical to a serial run."""
    if threads <= 1:
        return func(directions)
    chunks = np.array_split(directions, threads)
    chunks = [c for c in chunks if len(c)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(func, chunks))
    out = []
    for part in parts:
        out.extend(part)
    return out


def _load_poly(path) -> Polytope:
    return fio.load_polytope(path)


def _delta_for(args, poly: Polytope) -> float:
    delta = args.delta if args.delta is not None else poly.density
    return _check_delta(delta)


def _samples_json(samples, kind: str) -> dict:
    rows = []
    for s in samples:
        row = {"theta": list(map(float, s.theta)), "h": float(s.h)}
        if kind == "flotation":
            row["contact"] = list(map(float, s.contact))
            row["residual"] = float(s.residual)
        else:
            row["center"] = list(map(float, s.center))
        rows.append(row)
    return {"kind": kind, "samples": rows}


def _cmd_flotation(args) -> int:
    poly = _load_poly(args.infile)
    delta = _delta_for(args, poly)
    dirs = _directions(poly.dim, args.samples)
    samples = _chunked_map(lambda d: sample_flotation(poly, delta, d),
                           dirs, args.threads)
    if args.out:
        if args.format == "json":
            fio.write_json(_samples_json(samples, "flotation"), args.out)
        elif args.format == "svg":
            from .plots import flotation_figure, save_figure
            save_figure(flotation_figure(samples, poly if poly.dim == 2
                                         else None), args.out)
        else:
            fio.write_flotation_csv(samples, args.out)
    if args.plot:
        from .plots import flotation_figure, save_figure
        save_figure(flotation_figure(samples, poly if poly.dim == 2 else None),
                    args.plot)
    return 0


def _cmd_buoyancy(args) -> int:
    poly = _load_poly(args.infile)
    delta = _delta_for(args, poly)
    dirs = _directions(poly.dim, args.samples)
    samples = _chunked_map(lambda d: sample_buoyancy(poly, delta, d),
                           dirs, args.threads)
    if args.out:
        if args.format == "json":
            fio.write_json(_samples_json(samples, "buoyancy"), args.out)
        elif args.format == "svg":
            from .plots import buoyancy_figure, save_figure
            save_figure(buoyancy_figure(samples, poly if poly.dim == 2
                                        else None), args.out)
        else:
            fio.write_buoyancy_csv(samples, args.out)
    if args.plot:
        from .plots import buoyancy_figure, save_figure
        save_figure(buoyancy_figure(samples, poly if poly.dim == 2 else None),
                    args.plot)
    return 0


def _cmd_decompose(args) -> int:
    poly = _load_poly(args.infile)
    if poly.dim != 2:
        raise ValidationError("precondition violated: decompose needs a "
                              "2D polygon input")
    delta = _delta_for(args, poly)
    dec = decompose_flotation_2d(poly, delta)
    if args.out:
        if args.format == "svg":
            from .plots import decomposition_figure, save_figure
            save_figure(decomposition_figure(dec, poly), args.out)
        else:
            fio.dump_decomposition(dec, args.out)
    if args.plot:
        from .plots import decomposition_figure, save_figure
        save_figure(decomposition_figure(dec, poly), args.plot)
    return 0


def _cmd_reconstruct(args) -> int:
    delta = _check_delta(args.delta)
    if abs(delta - 0.5) <= 1e-12:
        raise HalfDensity(
            "reconstruction rejects delta = 1/2: at half density the two "
            "supporting chords through any boundary point coincide, so "
            "distinct polygons share the same flotation curve")
    dec = fio.load_decomposition(args.infile)
    truth = fio.load_polytope(args.truth) if args.truth else None
    report = reconstruct(dec, delta, truth=truth)
    out = fio.polytope_to_dict(report.polygon)
    out["status"] = report.status
    if report.hausdorff_to_truth is not None:
        out["hausdorff_to_truth"] = float(report.hausdorff_to_truth)
    if args.out:
        fio.write_json(out, args.out)
    return 0


def _cmd_counterexample(args) -> int:
    base = _load_poly(args.infile)
    if args.epsilon is None or args.epsilon <= 0:
        raise ValidationError("precondition violated: epsilon must be > 0")
    p, q = make_counterexample(base, args.epsilon)
    agree_half = flotation_disagreement(p, q, 0.5)
    hd = hausdorff(p, q)
    out = {
        "P": fio.polytope_to_dict(p),
        "Q": fio.polytope_to_dict(q),
        "epsilon": float(args.epsilon),
        "flotation_gap_half_density": float(agree_half),
        "hausdorff": float(hd),
    }
    if args.out:
        fio.write_json(out, args.out)
    return 0


def _cmd_verify(args) -> int:
    poly = _load_poly(args.infile)
    delta = _delta_for(args, poly)
    report = run_verification(poly, delta, seed=args.seed,
                              n_directions=max(args.samples, 4))
    for check in report["checks"]:
        state = "pass" if check["passed"] else "FAIL"
        print(f"[{state}] {check['name']}: residual {check['residual']:.3e} "
              f"(tol {check['tolerance']:.1e}) {check['note']}")
    if args.out:
        fio.write_json(report, args.out)
    if args.plot:
        from .plots import save_figure, verify_figure
        save_figure(verify_figure(report), args.plot)
    return 0 if report["all_passed"] else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floatgeo",
        description="flotation and buoyancy surfaces of convex polytopes")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_delta=True):
        p.add_argument("--in", dest="infile", required=True,
                       help="input JSON file")
        p.add_argument("--out", help="output file")
        if needs_delta:
            p.add_argument("--delta", type=float, default=None,
                           help="density in [1e-3, 1-1e-3]; defaults to the "
                                "input file's density")
        p.add_argument("--samples", type=int, default=360,
                       help="number of directions (>= 4)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1,
                       help="parallel direction sweeps; output is identical "
                            "to a serial run")
        p.add_argument("--format", choices=("json", "csv", "svg"),
                       default="csv")
        p.add_argument("--plot", help="write a matplotlib figure (svg/png)")

    common(sub.add_parser("flotation", help="sample the flotation surface"))
    common(sub.add_parser("buoyancy", help="sample the buoyancy surface"))
    pd = sub.add_parser("decompose",
                        help="decompose a polygon's flotation curve")
    common(pd)
    pd.set_defaults(format="json")
    pr = sub.add_parser("reconstruct",
                        help="rebuild a polygon from its decomposition")
    pr.add_argument("--in", dest="infile", required=True)
    pr.add_argument("--out")
    pr.add_argument("--delta", type=float, required=True)
    pr.add_argument("--truth", help="ground-truth polygon JSON for the "
                                    "hausdorff diagnostic")
    pc = sub.add_parser("counterexample",
                        help="build the half-density non-uniqueness pair")
    pc.add_argument("--in", dest="infile", required=True)
    pc.add_argument("--out")
    pc.add_argument("--epsilon", type=float, required=True)
    pv = sub.add_parser("verify", help="run the residual verification suite")
    common(pv)
    pv.set_defaults(samples=100, format="json")
    return parser


_COMMANDS = {
    "flotation": _cmd_flotation,
    "buoyancy": _cmd_buoyancy,
    "decompose": _cmd_decompose,
    "reconstruct": _cmd_reconstruct,
    "counterexample": _cmd_counterexample,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, HalfDensity, FloatGeoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
