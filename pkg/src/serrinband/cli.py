"""Batch command line front end; every command emits CSV or JSON.

Commands:
  sigma         eigencurve table: lambda, sigma_j, f_j, bound_lo, bound_hi
  bifpoints     bifurcation points: j, lambda_j, sigma_prime, residual
  check         run the invariant suites; exit 0 iff all pass
  solve         H(lambda) grid-convergence study against the exact band data
  linop         linearized-operator test against sigma_j Y_j
  branch        continue a branch, write JSON plus per-point boundary CSVs
  export-domain write one shape as JSON plus boundary/embedding CSVs

Exit codes: 0 success, 1 check failure, 2 configuration error, 3 numerical
failure.  Flags override values from an optional TOML file (--config PATH,
top-level keys or a [command] section).  Floats are printed with 17
significant digits so identical configurations give byte-identical files.
SERRIN_THREADS caps internal parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import branch as branch_mod
from . import checks
from .bifurcation import lambda_table
from .errors import SerrinbandError
from .geometry import embed, export_shape, make_shape
from .harmonics import make_basis, make_grid
from .pde import evaluate_H, solve_linearized, solve_torsion
from .spectrum import SpectralCurve
from .torsion import TorsionProfile

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _emit(path: str | None, text: str):
    if path:
        _atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _parse_lambda_spec(spec) -> np.ndarray:
    """Grid spec 'start:stop:count' or a single value."""
    if isinstance(spec, (int, float)):
        return np.array([float(spec)])
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError
            return np.linspace(start, stop, count)
    except ValueError:
        pass
    raise ConfigError(f"bad lambda spec {spec!r}; use START:STOP:COUNT or a single value")


def _csv(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


# ---- commands --------------------------------------------------------------


def cmd_sigma(args) -> int:
    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    if args.j < 0:
        raise ConfigError("--j must be >= 0")
    lams = _parse_lambda_spec(args.lam)
    if np.any(lams <= 0.0) or np.any(lams >= math.pi / 2):
        raise ConfigError("lambda values must lie in (0, pi/2)")
    curve = SpectralCurve(args.dim, args.j)
    rows = []
    for lam in lams:
        f = curve.f(lam, args.route)
        s = curve.sigma(lam, args.route)
        if args.j >= 2:
            lo, hi = curve.bounds(lam)
        else:
            lo = hi = f  # f_0 = 0 and f_1 = (N-1) tan(lambda) are exact
        rows.append([lam, s, f, lo, hi])
    _emit(args.out, _csv(["lambda", "sigma_j", "f_j", "bound_lo", "bound_hi"], rows))
    return EXIT_OK


def cmd_bifpoints(args) -> int:
    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    if args.jmax < 2:
        raise ConfigError("--jmax must be >= 2 (no bifurcation for j < 2)")
    points = lambda_table(args.dim, args.jmax)
    rows = [[p.degree, p.lambda_star, p.sigma_prime, p.residual] for p in points]
    _emit(args.out, _csv(["j", "lambda_j", "sigma_prime", "residual"], rows))
    return EXIT_OK


def cmd_check(args) -> int:
    if args.tol is not None and args.tol <= 0:
        raise ConfigError("--tol must be positive")
    if args.coarse:
        print("warning: convergence-order checks skipped (--coarse)", file=sys.stderr)
    results = checks.run_all(coarse=args.coarse)
    width = max(len(name) for name, _, _ in results)
    failed = 0
    for name, margin, ok in results:
        status = "PASS" if ok else "FAIL"
        print(f"{name:<{width}}  margin={margin:+.3e}  {status}")
        failed += 0 if ok else 1
    print(f"{len(results) - failed}/{len(results)} invariants passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def cmd_solve(args) -> int:
    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    lam = float(args.lam)
    if not 0.0 < lam < math.pi / 2:
        raise ConfigError("--lambda must lie in (0, pi/2)")
    grids = [int(g) for g in args.grids.split(",")]
    if any(g < 16 for g in grids):
        raise ConfigError("grid sizes must be >= 16")
    prof = TorsionProfile(args.dim)
    shape = make_shape(args.dim, lam, None, n_alpha=grids[0])
    rows = []
    for g in grids:
        u = solve_torsion(shape, g, g)
        exact = np.array([prof.u_diff(lam, t) for t in u.t])
        sup_u = float(np.max(np.abs(u.values - exact[None, :])))
        h_vals = evaluate_H(shape, g, g)
        err_h = float(np.max(np.abs(h_vals - prof.u_prime(lam))))
        rows.append([g, g, sup_u, err_h])
    _emit(args.out, _csv(["n_alpha", "n_t", "sup_err_u", "err_H"], rows))
    if len(grids) >= 2:
        hs = np.log([1.0 / g for g in grids])
        for label, col in (("u", 2), ("H", 3)):
            order = np.polyfit(hs, np.log([r[col] for r in rows]), 1)[0]
            print(f"observed order ({label}): {order:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_linop(args) -> int:
    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    lam = float(args.lam)
    if not 0.0 < lam < math.pi / 2:
        raise ConfigError("--lambda must lie in (0, pi/2)")
    if args.j < 0:
        raise ConfigError("--j must be >= 0")
    grid = make_grid(args.dim, args.n_alpha)
    basis = make_basis(args.dim, max(args.j, 1))
    omega = np.asarray(basis.y_eval(args.j, grid.nodes), dtype=float)
    _, l_omega = solve_linearized(args.dim, lam, omega, args.n_alpha, args.n_t)
    sig = SpectralCurve(args.dim, args.j).sigma(lam)
    err = float(np.max(np.abs(l_omega - sig * omega)))
    _emit(args.out, _csv(["j", "lambda", "sigma_j", "sup_err"], [[args.j, lam, sig, err]]))
    return EXIT_OK


def cmd_branch(args) -> int:
    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    if args.j < 2:
        raise ConfigError("--j must be >= 2 (no branch for j < 2)")
    if args.smax <= 0 or args.steps < 1:
        raise ConfigError("--smax must be > 0 and --steps >= 1")
    if not args.out:
        raise ConfigError("branch requires --out PATH for the JSON file")
    m = args.truncation if args.truncation is not None else 2 * args.j + 8
    br = branch_mod.continue_branch(
        args.dim, args.j, args.smax, args.steps, max_degree=m,
        n_alpha=args.n_alpha, n_t=args.n_t,
    )
    branch_mod.export_branch(br, args.out)
    stem = args.out[:-5] if args.out.endswith(".json") else args.out
    point_dir = f"{stem}_points"
    os.makedirs(point_dir, exist_ok=True)
    grid = make_grid(br.dim, br.n_alpha)
    basis = make_basis(br.dim, br.max_degree)
    alphas = np.linspace(0.0, math.pi, 257)
    for idx, p in enumerate(br.points):
        shape = branch_mod.point_shape(br, p, grid=grid, basis=basis)
        phi = np.asarray(shape.phi(alphas), dtype=float)
        rows = [[a, v] for a, v in zip(alphas, phi)]
        _atomic_write(os.path.join(point_dir, f"point_{idx:03d}_boundary.csv"),
                      _csv(["alpha", "phi"], rows))
        header = [f"x{k}" for k in range(br.dim + 1)]
        rows = [list(embed(shape, a, 1.0)) for a in alphas]
        _atomic_write(os.path.join(point_dir, f"point_{idx:03d}_embed.csv"),
                      _csv(header, rows))
    print(f"branch status: {br.status}; {len(br.points)} points -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_export_domain(args) -> int:
    if args.dim < 2:
        raise ConfigError("--dim must be >= 2")
    lam = float(args.lam)
    if not 0.0 < lam < math.pi / 2:
        raise ConfigError("--lambda must lie in (0, pi/2)")
    if not args.out:
        raise ConfigError("export-domain requires --out STEM")
    coeffs = None
    if args.coeffs:
        try:
            coeffs = [float(c) for c in args.coeffs.split(",")]
        except ValueError:
            raise ConfigError(f"bad --coeffs {args.coeffs!r}; use comma-separated floats")
    if args.mode is not None:
        if args.mode < 0:
            raise ConfigError("--mode must be >= 0")
        amp = args.amp if args.amp is not None else 0.02
        base = coeffs or [0.0]
        if len(base) <= args.mode:
            base = base + [0.0] * (args.mode + 1 - len(base))
        base[args.mode] += amp
        coeffs = base
    shape = make_shape(args.dim, lam, coeffs, n_alpha=args.n_alpha)
    export_shape(shape, f"{args.out}.json")
    alphas = np.linspace(0.0, math.pi, 257)
    phi = np.asarray(shape.phi(alphas), dtype=float)
    _atomic_write(f"{args.out}_boundary.csv",
                  _csv(["alpha", "phi"], [[a, v] for a, v in zip(alphas, phi)]))
    header = [f"x{k}" for k in range(args.dim + 1)]
    rows = [list(embed(shape, a, 1.0)) for a in alphas]
    _atomic_write(f"{args.out}_embed.csv", _csv(header, rows))
    return EXIT_OK


# ---- argument plumbing -----------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="serrinband", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    top.add_argument("--config", help="TOML file with defaults (flags override)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sigma", help="eigencurve table over a lambda grid")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True,
                   help="grid spec START:STOP:COUNT or a single value")
    p.add_argument("--route", choices=("heun", "riccati"), default="heun")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_sigma)

    p = sub.add_parser("bifpoints", help="bifurcation points lambda_j for j = 2..jmax")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--jmax", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_bifpoints)

    p = sub.add_parser("check", help="run invariant suites")
    p.add_argument("--coarse", action="store_true",
                   help="skip convergence-order checks (coarse-grid mode)")
    p.add_argument("--tol", type=float, default=None,
                   help="reserved tolerance override; must be positive")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("solve", help="H(lambda) convergence study on the straight band")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--grids", default="32,64,128,256", help="comma list of grid sizes")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("linop", help="linearized operator versus sigma_j Y_j")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--n-alpha", type=int, default=64)
    p.add_argument("--n-t", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_linop)

    p = sub.add_parser("branch", help="continue a bifurcation branch")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--smax", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--M", dest="truncation", type=int, default=None,
                   help="harmonic truncation (default 2j + 8)")
    p.add_argument("--n-alpha", type=int, default=128)
    p.add_argument("--n-t", type=int, default=128)
    p.add_argument("--out", required=False)
    p.set_defaults(fn=cmd_branch)

    p = sub.add_parser("export-domain", help="write one shape as JSON + CSVs")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--coeffs", help="comma list of harmonic coefficients of phi - lambda")
    p.add_argument("--mode", type=int, default=None, help="add --amp to this degree")
    p.add_argument("--amp", type=float, default=None)
    p.add_argument("--n-alpha", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_export_domain)
    return top


def _apply_config(args, argv: list[str]):
    """Fill unset args from the TOML file; explicit flags keep precedence."""
    if not args.config:
        return
    try:
        with open(args.config, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {args.config}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad TOML in {args.config}: {exc}")
    section = data.get(args.command, data)
    given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    alias = {"lambda": "lam", "M": "truncation"}
    for key, value in section.items():
        if isinstance(value, dict):
            continue
        dest = alias.get(key, key.replace("-", "_"))
        if dest in {"config", "command", "fn"} or key.lstrip("-") in given or dest in given:
            continue
        if hasattr(args, dest):
            setattr(args, dest, value)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        _apply_config(args, argv)
        return args.fn(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SerrinbandError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
