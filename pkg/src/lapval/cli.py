"""Command-line surface: transforms over point grids, verification suites,
and dissection dumps.

Exit codes: 0 success, 1 check failure (report still written), 2 config or
parse error, 3 geometric degeneracy.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import dissect, functrans, geom, jsonio, laplace, suites

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise jsonio.ParseError(f"{path}: {exc}") from exc


def _grid_points(args, n: int):
    if args.points:
        pts = _load_json(args.points)
        try:
            arr = np.asarray(pts, dtype=float)
        except (TypeError, ValueError) as exc:
            raise jsonio.ParseError(f"bad points file: {exc}") from exc
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.shape[1] != n:
            raise jsonio.ParseError("point dimension does not match the body")
        return arr
    if args.range is None:
        raise jsonio.ParseError("need --points or --axis/--range")
    try:
        start, stop, step = (float(v) for v in args.range.split(":"))
    except ValueError as exc:
        raise jsonio.ParseError("range must be start:stop:step") from exc
    if step <= 0:
        raise jsonio.ParseError("range step must be positive")
    axis = args.axis - 1
    if not 0 <= axis < n:
        raise jsonio.ParseError(f"axis {args.axis} out of range for n = {n}")
    rs = np.arange(start, stop + 0.5 * step, step)
    pts = np.zeros((rs.size, n))
    pts[:, axis] = rs
    return pts


def _write_csv(path: str, points: np.ndarray, values) -> None:
    n = points.shape[1]
    lines = [",".join([f"x_{i + 1}" for i in range(n)] + ["value"])]
    for p, v in zip(points, values):
        lines.append(",".join([_fmt(c) for c in p] + [_fmt(v)]))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def run_transform(args) -> int:
    try:
        if args.step:
            f = jsonio.step_from_dict(_load_json(args.step))
            h = functrans.growth_by_name(args.h)
            pts = _grid_points(args, f.n)
            values = [functrans.transform_step(f, h, p) for p in pts]
        elif args.body:
            body = jsonio.body_from_dict(_load_json(args.body))
            pts = _grid_points(args, body.n)
            values = [tv.value for tv in laplace.laplace_grid(body, pts)]
        else:
            print("transform needs --body or --step", file=sys.stderr)
            return EXIT_CONFIG
    except (jsonio.ParseError, functrans.StepFunctionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except geom.GeometryError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    _write_csv(args.out, pts, values)
    return EXIT_OK


def run_verify(args) -> int:
    if args.suite not in suites.SUITES:
        print(f"unknown suite {args.suite!r}; choose from {sorted(suites.SUITES)}", file=sys.stderr)
        return EXIT_CONFIG
    if args.tol <= 0:
        print("tolerance must be positive", file=sys.stderr)
        return EXIT_CONFIG
    reports = suites.run_suite(
        args.suite, n=args.n, seed=args.seed, tol=args.tol, oracle_n=args.oracle_n
    )
    payload = [r.to_dict() for r in reports]
    text = json.dumps(payload, indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        print(f"{status}  {r.name}  trials={r.trials}  max_rel_err={r.max_rel_err:.3e}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def run_dissect(args) -> int:
    try:
        if args.kind == "order-simplices":
            pieces = dissect.cube_order_simplices(args.n)
            payload = [
                {"n": args.n, "vertices": s.vertices.tolist()} for s in pieces
            ]
        elif args.kind == "split":
            if args.lam is None:
                raise dissect.DissectError("split needs --lam")
            res = dissect.split_simplex(args.n, args.lam)
            payload = {
                "lambda": res.lam,
                "phi1": {"matrix": res.phi1.matrix.tolist(), "det": res.phi1.det},
                "phi2": {"matrix": res.phi2.matrix.tolist(), "det": res.phi2.det},
                "pieces": [
                    jsonio.body_to_dict(res.piece_minus),
                    jsonio.body_to_dict(res.piece_plus),
                ],
            }
        elif args.kind == "lattice":
            if args.m is None:
                raise dissect.DissectError("lattice needs --m")
            pieces = dissect.lattice_decomposition(args.m, args.n)
            payload = [
                {
                    "body": jsonio.body_to_dict(p.body),
                    "shift": p.shift.tolist(),
                    "j": p.j,
                }
                for p in pieces
            ]
        elif args.kind == "m-piece":
            if args.k is None:
                raise dissect.DissectError("m-piece needs --k")
            payload = jsonio.body_to_dict(dissect.m_piece(args.k, args.n))
        else:
            print(f"unknown dissection kind {args.kind!r}", file=sys.stderr)
            return EXIT_CONFIG
    except dissect.DissectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(payload, indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapval",
        description="Laplace transforms of polytopes and step functions, "
        "with a valuation-identity verification harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("transform", help="evaluate a transform over a point grid")
    tr.add_argument("--body", help="body JSON file")
    tr.add_argument("--step", help="step-function JSON file")
    tr.add_argument("--h", default="identity", help="growth function name (step mode)")
    tr.add_argument("--points", help="JSON file with a list of points")
    tr.add_argument("--axis", type=int, default=1, help="1-based axis for --range")
    tr.add_argument("--range", help="start:stop:step along the chosen axis")
    tr.add_argument("--out", default="-", help="output CSV path (- for stdout)")
    tr.set_defaults(func=run_transform)

    vf = sub.add_parser("verify", help="run a verification suite")
    vf.add_argument("--suite", required=True)
    vf.add_argument("--n", type=int, default=2, help="ambient dimension")
    vf.add_argument("--seed", type=int, default=42)
    vf.add_argument("--tol", type=float, default=1e-9)
    vf.add_argument("--oracle-n", type=int, default=100_000, dest="oracle_n")
    vf.add_argument("--out", default="-", help="output JSON report path")
    vf.set_defaults(func=run_verify)

    ds = sub.add_parser("dissect", help="emit a dissection as body JSON")
    ds.add_argument("--kind", required=True, choices=["order-simplices", "split", "lattice", "m-piece"])
    ds.add_argument("--n", type=int, required=True)
    ds.add_argument("--m", type=int)
    ds.add_argument("--k", type=int)
    ds.add_argument("--lam", type=float)
    ds.add_argument("--out", default="-")
    ds.set_defaults(func=run_dissect)
    return parser


def _join_range_values(argv):
    """Let ``--range -8:8:0.5`` through argparse despite the leading dash."""
    out = []
    it = iter(argv)
    for token in it:
        if token == "--range":
            value = next(it, None)
            if value is None:
                out.append(token)
            else:
                out.append(f"--range={value}")
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_range_values(argv))
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
