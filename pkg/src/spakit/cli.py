"""Command-line interface.

Exit codes: 0 success, 2 usage or parse error, 3 dimension mismatch,
4 invalid density matrix, 5 validation failure.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import detect, io
from .choi import ChoiOperator, Depolarize, Identity, apply, choi_of_map
from .linalg import (
    DENSITY_TOL,
    DimensionError,
    InvalidStateError,
    check_density_matrix,
    is_density_matrix,
    projector,
)
from .povm import MODEL_TOL, build_ps_model, validate_model
from .spa import choi_R, partial_transpose_map, spa_partial_transpose, spa_rho_square
from .states import bell_state, maximally_mixed, werner_state

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIMENSION = 3
EXIT_INVALID_STATE = 4
EXIT_VALIDATION = 5

MAP_NAMES = ("pt-spa", "pt", "identity", "depolarize", "rho2", "rho2-spa")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def build_choi(name: str, d: int) -> tuple[ChoiOperator, dict[str, str]]:
    meta: dict[str, str] = {"map": name}
    if name in ("rho2", "rho2-spa") and d != 2:
        raise CliError(f"map {name!r} is defined for qubits only (got --d {d})", EXIT_USAGE)
    if name == "pt-spa":
        res = spa_partial_transpose(d)
        noise, signal = res.exact_weights
        c = res.choi
        meta.update(noise_weight=_frac(noise), signal_weight=_frac(signal), d=str(d))
    elif name == "pt":
        c = choi_of_map(partial_transpose_map(d))
        meta["d"] = str(d)
    elif name == "identity":
        c = choi_of_map(Identity(d))
    elif name == "depolarize":
        c = choi_of_map(Depolarize(d, d))
    elif name == "rho2":
        c = choi_R()
    elif name == "rho2-spa":
        res = spa_rho_square()
        noise, signal = res.exact_weights
        c = res.choi
        meta.update(noise_weight=_frac(noise), signal_weight=_frac(signal))
    else:
        raise CliError(f"unknown map {name!r}; choose from {', '.join(MAP_NAMES)}", EXIT_USAGE)
    meta.update(dim_in=str(c.dim_in), dim_out=str(c.dim_out))
    return c, meta


def _read_matrix(path: str):
    try:
        return io.read_matrix(path)
    except (OSError, io.FormatError) as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _read_state(path: str, tol: float) -> np.ndarray:
    m, _ = _read_matrix(path)
    try:
        return check_density_matrix(m, tol)
    except InvalidStateError as exc:
        raise CliError(f"{path}: not a density matrix: {exc}", EXIT_INVALID_STATE) from None


def _choi_from_file(path: str) -> ChoiOperator:
    m, meta = _read_matrix(path)
    n = m.shape[0]
    try:
        dim_in = int(meta["dim_in"]) if "dim_in" in meta else int(round(np.sqrt(n)))
        dim_out = int(meta["dim_out"]) if "dim_out" in meta else n // dim_in
    except ValueError:
        raise CliError(f"{path}: dim_in/dim_out metadata must be integers", EXIT_USAGE) from None
    try:
        return ChoiOperator(m, dim_in, dim_out)
    except DimensionError as exc:
        raise CliError(f"{path}: {exc}", EXIT_DIMENSION) from None
    except InvalidStateError as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE) from None


def cmd_choi(args) -> int:
    c, meta = build_choi(args.map, args.d)
    io.write_matrix(args.output, c.matrix, meta)
    return EXIT_OK


def cmd_apply(args) -> int:
    c = _choi_from_file(args.choi)
    rho = _read_state(args.state, args.density_tol)
    if rho.shape[0] != c.dim_in:
        raise CliError(
            f"state has dim {rho.shape[0]} but the map expects input dim {c.dim_in}", EXIT_DIMENSION
        )
    out = apply(c, rho)
    tr = float(np.trace(out).real)
    io.write_matrix(args.output, out, {"trace": repr(tr)})
    print(f"trace {tr!r}", file=sys.stderr)
    return EXIT_OK


def cmd_povm(args) -> int:
    if args.validate is None:
        model = build_ps_model()
        io.write_text(args.output, io.dumps(io.model_to_dict(model)))
        return EXIT_OK
    try:
        model = io.model_from_dict(io.read_json(args.validate))
    except (OSError, io.FormatError, DimensionError) as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    report = validate_model(model, args.tol)
    doc = {"schema": io.SCHEMA, "kind": "validation-report", **report.to_dict()}
    io.write_text(args.output, io.dumps(doc))
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_detect(args) -> int:
    rho = _read_state(args.state, args.density_tol)
    if rho.shape != (4, 4):
        raise CliError(f"detection needs a two-qubit state, got dim {rho.shape[0]}", EXIT_DIMENSION)
    if args.samples is None:
        report = detect.verdict_exact(rho, tol=args.verdict_tol)
    else:
        if args.samples < 1:
            raise CliError("--samples must be positive", EXIT_USAGE)
        report = detect.verdict_sampled(
            rho, n_samples=args.samples, seed=args.seed, k_sigma=args.k_sigma, workers=args.workers
        )
    io.write_text(args.output, io.dumps(report.to_dict()))
    return EXIT_OK


def cmd_invert(args) -> int:
    m, _ = _read_matrix(args.state)
    if m.shape != (4, 4):
        raise CliError(f"inversion needs a two-qubit operator, got dim {m.shape[0]}", EXIT_DIMENSION)
    rec = detect.invert_ps(m)
    valid = is_density_matrix(rec, args.density_tol)
    if not valid:
        print("warning: reconstructed input is not a valid density matrix", file=sys.stderr)
    io.write_matrix(args.output, rec, {"valid_density_matrix": str(valid).lower()})
    return EXIT_OK


def cmd_state(args) -> int:
    if args.werner is not None:
        rho, meta = werner_state(args.werner), {"werner_p": repr(args.werner)}
    elif args.bell:
        rho, meta = bell_state(), {"state": "phi+"}
    elif args.mixed is not None:
        rho, meta = maximally_mixed(args.mixed), {"state": "maximally-mixed"}
    else:
        bits = args.basis
        if not bits or set(bits) - {"0", "1"}:
            raise CliError(f"--basis expects a bit string, got {bits!r}", EXIT_USAGE)
        v = np.zeros(2 ** len(bits))
        v[int(bits, 2)] = 1.0
        rho, meta = projector(v), {"state": f"|{bits}>"}
    io.write_matrix(args.output, rho, meta)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="spakit",
        description="Structural physical approximations, their measurement models "
        "and direct entanglement detection.",
        formatter_class=fmt,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def out_arg(p):
        p.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")

    def tol_arg(p):
        p.add_argument("--density-tol", type=float, default=DENSITY_TOL,
                       help="tolerance for Hermiticity, unit trace and positivity of states")

    p = sub.add_parser("choi", help="write the Choi matrix of a named map", formatter_class=fmt)
    p.add_argument("--map", required=True, choices=MAP_NAMES)
    p.add_argument("--d", type=int, default=2, help="local dimension (pt-spa, pt, identity, depolarize)")
    out_arg(p)
    p.set_defaults(func=cmd_choi)

    p = sub.add_parser("apply", help="apply a Choi matrix to a state", formatter_class=fmt)
    p.add_argument("choi")
    p.add_argument("state")
    out_arg(p)
    tol_arg(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("povm", help="emit or validate a measurement model", formatter_class=fmt)
    p.add_argument("--validate", metavar="MODEL", help="validate this model file instead of emitting")
    p.add_argument("--tol", type=float, default=MODEL_TOL, help="validation tolerance")
    out_arg(p)
    p.set_defaults(func=cmd_povm)

    p = sub.add_parser("detect", help="run the entanglement detection protocol", formatter_class=fmt)
    p.add_argument("state")
    p.add_argument("--samples", type=int, help="simulate this many measurement outcomes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1, help="threads for sampling")
    p.add_argument("--k-sigma", type=float, default=3.0, help="statistical margin in standard deviations")
    p.add_argument("--verdict-tol", type=float, default=detect.VERDICT_TOL,
                   help="exact mode: minimum PT eigenvalue below -tol means entangled")
    out_arg(p)
    tol_arg(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("invert", help="recover the input state from a P_S output", formatter_class=fmt)
    p.add_argument("state")
    out_arg(p)
    tol_arg(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("state", help="write a standard state file", formatter_class=fmt)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--werner", type=float, metavar="P")
    g.add_argument("--bell", action="store_true")
    g.add_argument("--mixed", type=int, metavar="D")
    g.add_argument("--basis", metavar="BITS")
    out_arg(p)
    p.set_defaults(func=cmd_state)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "density_tol", 1.0) <= 0 or getattr(args, "tol", 1.0) <= 0:
        parser.error("tolerances must be positive")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"spakit: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
