"""Command-line client over the core workflows.

Subcommands: forward, inverse, validate, roundtrip, bconvert, serve.
Angles are radians unless --degrees is given.  Exit codes: 0 success,
2 input error, 3 validation failure, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys

from .errors import (
    BracketingError,
    DegenerateSpectrumError,
    IllPosedDataError,
    InvalidArgumentError,
    SolverOverflowError,
    SpectralDataError,
)
from .fileio import dumps_json, format_float, load_spectral_json, save_grid_csv

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4

_INPUT_ERRORS = (InvalidArgumentError, OSError)
_VALIDATION_ERRORS = (SpectralDataError,)
_NUMERICAL_ERRORS = (
    BracketingError,
    SolverOverflowError,
    IllPosedDataError,
    DegenerateSpectrumError,
)


def _angles(args) -> tuple[float, float]:
    scale = math.pi / 180.0 if args.degrees else 1.0
    return args.alpha * scale, args.beta * scale


def _cmd_forward(args) -> int:
    from .workflows import forward_payload, resolve_potential, run_forward

    alpha, beta = _angles(args)
    q = resolve_potential(args.q, args.m)
    result = run_forward(q, alpha, beta, args.N, args.m)
    payload = forward_payload(result, alpha, beta)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_json(payload) + "\n")
    head = ", ".join(format_float(v) for v in result.spectral.lam[:5])
    print(f"eigenvalue square roots (first 5): {head}")
    print(f"alpha identity residual: {format_float(payload['alpha_identity_residual'])}")
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_inverse(args) -> int:
    from .core import SpectralData
    from .validate import check_hard
    from .workflows import inverse_payload, run_inverse

    lam, a = _load_raw_spectral(args.infile)
    hard = [r for r in check_hard(lam, a) if not r.passed]
    if hard:
        for r in hard:
            print(f"validation failure: {dumps_json(r.as_dict())}", file=sys.stderr)
        return EXIT_VALIDATION
    spectral = SpectralData(lam, a)
    expect_alpha = expect_beta = None
    if args.expect_alpha is not None or args.expect_beta is not None:
        scale = math.pi / 180.0 if args.degrees else 1.0
        expect_alpha = None if args.expect_alpha is None else args.expect_alpha * scale
        expect_beta = None if args.expect_beta is None else args.expect_beta * scale
    result = run_inverse(spectral, args.m, expect_alpha, expect_beta)
    save_grid_csv(args.out_q, result.q)
    if args.dump_a or args.dump_kernel:
        _dump_series_artifacts(spectral, args)
    payload = inverse_payload(result, q_csv=args.out_q)
    text = dumps_json(payload)
    if args.out_json:
        with open(args.out_json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    if result.alpha_deviation is not None:
        print(f"alpha deviation from expected: {format_float(result.alpha_deviation)}")
    if result.beta_deviation is not None:
        print(f"beta deviation from expected: {format_float(result.beta_deviation)}")
    return EXIT_OK


def _dump_series_artifacts(spectral, args) -> None:
    """Plotting exports: the a(.) tabulation and the kernel F of this run."""
    from .series import build_F, decompose, tabulate_a

    dec = decompose(spectral)
    if args.dump_a:
        atab = tabulate_a(spectral, dec, args.m)
        with open(args.dump_a, "w", encoding="utf-8") as fh:
            fh.write("x,value\n")
            for x, v in zip(atab.x, atab.values):
                fh.write(f"{format_float(x)},{format_float(v)}\n")
    if args.dump_kernel:
        F = build_F(spectral, dec, args.m)
        import numpy as np

        xs = np.arange(F.m) * F.h
        with open(args.dump_kernel, "w", encoding="utf-8") as fh:
            fh.write("x,t,value\n")
            for i in range(F.m):
                for j in range(i + 1):
                    fh.write(
                        f"{format_float(xs[i])},{format_float(xs[j])},{format_float(F.values[i, j])}\n"
                    )


def _cmd_validate(args) -> int:
    from .workflows import run_validate

    spectral_raw = _load_raw_spectral(args.infile)
    alpha, beta = _angles(args)
    report = run_validate(spectral_raw[0], spectral_raw[1], alpha, beta, K=args.K)
    print(dumps_json(report.as_dict()))
    return EXIT_OK if report.overall_pass else EXIT_VALIDATION


def _load_raw_spectral(path):
    """Raw arrays so that hard-check violations reach the validator intact."""
    import json

    import numpy as np

    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"{path}: invalid JSON: {exc}") from exc
    try:
        lam = np.asarray(payload["lambda"], dtype=float)
        a = np.asarray(payload["a"], dtype=float)
        n = int(payload["N"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"{path}: malformed spectral payload: {exc}") from exc
    if lam.size != n or a.size != n:
        raise InvalidArgumentError(f"{path}: length mismatch against N={n}")
    return lam, a


def _cmd_roundtrip(args) -> int:
    from .workflows import resolve_potential, run_roundtrip

    alpha, beta = _angles(args)
    q = resolve_potential(args.q, args.m)
    metrics, result = run_roundtrip(
        q, alpha, beta, args.N, args.m, args.m_inverse, args.interior_margin
    )
    text = dumps_json(metrics)
    print(text)
    if args.out_json:
        with open(args.out_json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.out_q:
        save_grid_csv(args.out_q, result.q)
    return EXIT_OK


def _cmd_bconvert(args) -> int:
    from .workflows import run_bconvert

    spectral, _ = load_spectral_json(args.infile)
    payload = run_bconvert(spectral, args.K)
    text = dumps_json(payload)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("slgl.service:app", host=args.host, port=args.port)
    return EXIT_OK


def _add_angle_args(p, required=True):
    p.add_argument("--alpha", type=float, required=required, help="left boundary angle")
    p.add_argument("--beta", type=float, required=required, help="right boundary angle")
    p.add_argument("--degrees", action="store_true", help="angles given in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slgl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", help="compute spectral data for (q, alpha, beta)")
    p.add_argument("--q", default="zero", help="zero | const:c | cos2x | file:path")
    _add_angle_args(p)
    p.add_argument("--N", type=int, default=64, help="number of eigenvalues")
    p.add_argument("--m", type=int, default=2001, help="solver grid points")
    p.add_argument("--out", help="output spectral JSON path")
    p.set_defaults(func=_cmd_forward)

    p = sub.add_parser("inverse", help="reconstruct (q, alpha, beta) from spectral JSON")
    p.add_argument("--in", dest="infile", required=True, help="spectral JSON path")
    p.add_argument("--m", type=int, default=401, help="reconstruction grid points")
    p.add_argument("--out-q", required=True, help="recovered potential CSV path")
    p.add_argument("--out-json", help="result JSON path")
    p.add_argument("--expect-alpha", type=float, help="compare recovered alpha against this")
    p.add_argument("--expect-beta", type=float, help="compare recovered beta against this")
    p.add_argument("--degrees", action="store_true", help="expected angles given in degrees")
    p.add_argument("--dump-a", help="write the a(x) tabulation on [0, 2pi] as CSV")
    p.add_argument("--dump-kernel", help="write the input kernel F as x,t,value CSV")
    p.set_defaults(func=_cmd_inverse)

    p = sub.add_parser("validate", help="check spectral data against the solvability conditions")
    p.add_argument("--in", dest="infile", required=True, help="spectral JSON path")
    _add_angle_args(p)
    p.add_argument("--K", type=int, default=2000, help="product truncation")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("roundtrip", help="forward then inverse, with error metrics")
    p.add_argument("--q", default="zero", help="zero | const:c | cos2x | file:path")
    _add_angle_args(p)
    p.add_argument("--N", type=int, default=64, help="number of eigenvalues")
    p.add_argument("--m", type=int, default=2001, help="forward solver grid points")
    p.add_argument("--m-inverse", type=int, default=401, help="reconstruction grid points")
    p.add_argument("--interior-margin", type=float, default=0.1, help="error window margin")
    p.add_argument("--out-json", help="metrics JSON path")
    p.add_argument("--out-q", help="recovered potential CSV path")
    p.set_defaults(func=_cmd_roundtrip)

    p = sub.add_parser("bconvert", help="convert a_n to b_n through regularized products")
    p.add_argument("--in", dest="infile", required=True, help="spectral JSON path")
    p.add_argument("--K", type=int, default=2000, help="product truncation")
    p.add_argument("--out", help="output JSON path")
    p.set_defaults(func=_cmd_bconvert)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "N", 1) < 1 or getattr(args, "m", 3) < 3 or getattr(args, "K", 100) < 100:
        print("error: need N >= 1, m >= 3, K >= 100", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
