"""Continuation of the nontrivial band branch at a simple eigenvalue crossing.

At lambda_j the constant-band family loses injectivity in the Y_j direction;
the branch through it is parameterized by the pinned amplitude s of the
bifurcating mode:

    phi = lambda + s Y_j + sum_{l != j} w_l Y_l,

with unknowns (lambda, {w_l}) solving the M+1 projected components of the
overdetermined residual

    G = H(phi) - u'(lambda)

by a damped Newton iteration with a forward-difference Jacobian.  Trading the
kernel direction Y_j for the unknown lambda mirrors the simple-eigenvalue
branch-switching construction; the orthogonality <w, Y_j> = 0 holds exactly
because the Y_j coefficient is never among the unknowns.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bifurcation import lambda_star, thread_count
from .errors import AdmissibilityError, SolverError
from .geometry import AxisGrid, DomainShape, make_shape, neumann_trace
from .harmonics import HarmonicBasis, make_basis, make_grid, project_all
from .pde import assemble
from .spectrum import SpectralCurve
from .torsion import TorsionProfile

_FD_STEP = 1e-6
_MAX_HALVINGS = 8
_NEWTON_TOL = 1e-9
_MAX_NEWTON_ITERS = 12


@dataclass(frozen=True)
class BranchPoint:
    s: float
    lambda_s: float
    w_coeffs: np.ndarray = field(repr=False)  # degrees 0..M excluding j
    residual_sup: float = math.nan
    newton_iters: int = 0


@dataclass
class Branch:
    dim: int
    degree: int
    max_degree: int
    n_alpha: int
    n_t: int
    tol: float
    floor: float
    lambda_star: float
    points: list  # BranchPoint sorted by s
    status: str = "ok"


class _Residual:
    """Projected residual of G at fixed grids; reusable across Newton calls."""

    def __init__(self, dim: int, degree: int, max_degree: int, grid: AxisGrid,
                 basis: HarmonicBasis, n_t: int):
        self.dim = dim
        self.degree = degree
        self.max_degree = max_degree
        self.grid = grid
        self.basis = basis
        self.n_t = n_t
        self.profile = TorsionProfile(dim)
        self.free = [ell for ell in range(max_degree + 1) if ell != degree]

    def shape_for(self, lam: float, s: float, w: np.ndarray) -> DomainShape:
        coeffs = np.zeros(self.max_degree + 1)
        coeffs[self.degree] = s
        coeffs[self.free] = w
        return make_shape(self.dim, lam, coeffs, grid=self.grid, basis=self.basis)

    def nodal(self, lam: float, s: float, w: np.ndarray) -> np.ndarray:
        shape = self.shape_for(lam, s, w)
        op = assemble(shape, self.n_t)
        u = op.solve(-np.ones((self.grid.n_alpha, self.n_t)), np.zeros(self.grid.n_alpha))
        return neumann_trace(shape, u) - self.profile.u_prime(lam)

    def projected(self, lam: float, s: float, w: np.ndarray) -> tuple[np.ndarray, float]:
        g = self.nodal(lam, s, w)
        return project_all(self.grid, self.basis, g), float(np.max(np.abs(g)))


def residual(dim: int, degree: int, lam: float, coeffs, n_alpha: int, n_t: int,
             max_degree: int | None = None) -> tuple[np.ndarray, float]:
    """Projected residual components 0..M and the nodal sup-norm of G."""
    coeffs = np.asarray(coeffs, dtype=float)
    m = max_degree if max_degree is not None else max(len(coeffs) - 1, degree)
    grid = make_grid(dim, n_alpha)
    basis = make_basis(dim, m)
    res = _Residual(dim, degree, m, grid, basis, n_t)
    full = np.zeros(m + 1)
    full[: len(coeffs)] = coeffs
    w = full[res.free]
    return res.projected(lam, full[degree], w)


def _jacobian(res: _Residual, lam: float, s: float, w: np.ndarray,
              r0: np.ndarray) -> np.ndarray:
    """Forward-difference Jacobian in (lambda, w); columns are independent solves."""
    m1 = res.max_degree + 1
    cols = [None] * m1

    def column(k: int) -> np.ndarray:
        if k == 0:
            r, _ = res.projected(lam + _FD_STEP, s, w)
        else:
            wp = w.copy()
            wp[k - 1] += _FD_STEP
            r, _ = res.projected(lam, s, wp)
        return (r - r0) / _FD_STEP

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        for k, col in zip(range(m1), pool.map(column, range(m1))):
            cols[k] = col
    return np.column_stack(cols)


def newton_step(res: _Residual, lam: float, s: float, w: np.ndarray,
                r0: np.ndarray | None = None) -> tuple[float, np.ndarray, np.ndarray, float]:
    """One damped Newton update of (lambda, w) at pinned amplitude s.

    Returns (lambda, w, projected residual, nodal sup) after the update.
    Raises SolverError if the projected norm cannot be decreased within the
    halving budget or the Jacobian is singular beyond least-squares rescue.
    """
    if r0 is None:
        r0, _ = res.projected(lam, s, w)
    jac = _jacobian(res, lam, s, w, r0)
    try:
        dx, *_ = np.linalg.lstsq(jac, -r0, rcond=None)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"Jacobian singular at s = {s}: {exc}") from exc
    if not np.all(np.isfinite(dx)):
        raise SolverError(f"Jacobian produced non-finite step at s = {s}")
    norm0 = float(np.linalg.norm(r0))
    step = 1.0
    for _ in range(_MAX_HALVINGS + 1):
        lam_new = lam + step * dx[0]
        w_new = w + step * dx[1:]
        try:
            r_new, sup_new = res.projected(lam_new, s, w_new)
        except AdmissibilityError:
            step *= 0.5
            continue
        if float(np.linalg.norm(r_new)) <= norm0 or norm0 < _NEWTON_TOL:
            return lam_new, w_new, r_new, sup_new
        step *= 0.5
    raise SolverError(
        f"Newton step rejected after {_MAX_HALVINGS} halvings at s = {s} "
        f"(projected norm {norm0})"
    )


def _solve_point(res: _Residual, lam: float, s: float, w: np.ndarray,
                 tol: float) -> BranchPoint:
    r, sup = res.projected(lam, s, w)
    iters = 0
    while float(np.linalg.norm(r)) > _NEWTON_TOL and iters < _MAX_NEWTON_ITERS:
        lam, w, r, sup = newton_step(res, lam, s, w, r)
        iters += 1
    if float(np.linalg.norm(r)) > _NEWTON_TOL or sup > tol:
        raise SolverError(
            f"point s = {s} did not converge: projected norm {np.linalg.norm(r):.3e}, "
            f"nodal sup {sup:.3e} (tol {tol:.3e})"
        )
    return BranchPoint(s=s, lambda_s=lam, w_coeffs=w.copy(), residual_sup=sup, newton_iters=iters)


def continue_branch(dim: int, degree: int, s_max: float, n_steps: int,
                    max_degree: int | None = None, n_alpha: int = 128,
                    n_t: int = 128, tol: float | None = None) -> Branch:
    """March the branch over s in [-s_max, s_max]; truncates on Newton failure."""
    if degree < 2:
        raise SolverError(f"branches exist only for degree >= 2, got {degree}")
    if n_steps < 1 or s_max <= 0:
        raise ValueError("need s_max > 0 and n_steps >= 1")
    m = max_degree if max_degree is not None else 2 * degree + 8
    grid = make_grid(dim, n_alpha)
    basis = make_basis(dim, m)
    res = _Residual(dim, degree, m, grid, basis, n_t)
    point = lambda_star(SpectralCurve(dim, degree))
    lam0 = point.lambda_star
    # discretization floor: nodal residual of the exact trivial solution
    _, floor = res.projected(lam0, 0.0, np.zeros(m))
    if tol is None:
        tol = max(1e-6, 10.0 * floor)

    zero = BranchPoint(s=0.0, lambda_s=lam0, w_coeffs=np.zeros(m), residual_sup=floor,
                       newton_iters=0)
    ds = s_max / n_steps
    halves: dict[int, list[BranchPoint]] = {1: [], -1: []}
    statuses = []
    for direction in (1, -1):
        prev2, prev1 = None, zero
        for k in range(1, n_steps + 1):
            s = direction * k * ds
            if prev2 is None:
                lam_pred, w_pred = prev1.lambda_s, prev1.w_coeffs
            else:
                lam_pred = 2 * prev1.lambda_s - prev2.lambda_s
                w_pred = 2 * prev1.w_coeffs - prev2.w_coeffs
            try:
                bp = _solve_point(res, lam_pred, s, w_pred.copy(), tol)
            except (SolverError, AdmissibilityError) as exc:
                statuses.append(f"stopped_at_s={s:.6g} ({exc})")
                break
            halves[direction].append(bp)
            prev2, prev1 = prev1, bp
    points = list(reversed(halves[-1])) + [zero] + halves[1]
    status = "ok" if not statuses else "; ".join(statuses)
    return Branch(dim=dim, degree=degree, max_degree=m, n_alpha=n_alpha, n_t=n_t,
                  tol=tol, floor=floor, lambda_star=lam0, points=points, status=status)


def branch_record(branch: Branch) -> dict:
    """JSON-ready record of a computed branch."""
    return {
        "dim": branch.dim,
        "j": branch.degree,
        "grid": {"n_alpha": branch.n_alpha, "n_t": branch.n_t},
        "M": branch.max_degree,
        "tol": branch.tol,
        "floor": branch.floor,
        "lambda_star": branch.lambda_star,
        "status": branch.status,
        "points": [
            {
                "s": p.s,
                "lambda": p.lambda_s,
                "w_coeffs": [float(c) for c in p.w_coeffs],
                "residual_sup": p.residual_sup,
                "newton_iters": p.newton_iters,
            }
            for p in branch.points
        ],
    }


def export_branch(branch: Branch, path: str):
    payload = json.dumps(branch_record(branch), indent=2)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload + "\n")
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def point_shape(branch: Branch, point: BranchPoint, grid: AxisGrid | None = None,
                basis: HarmonicBasis | None = None) -> DomainShape:
    """Reconstruct the boundary profile of one branch point."""
    coeffs = np.zeros(branch.max_degree + 1)
    coeffs[branch.degree] = point.s
    free = [ell for ell in range(branch.max_degree + 1) if ell != branch.degree]
    coeffs[free] = point.w_coeffs
    if grid is None:
        grid = make_grid(branch.dim, branch.n_alpha)
    if basis is None:
        basis = make_basis(branch.dim, branch.max_degree)
    return make_shape(branch.dim, point.lambda_s, coeffs, grid=grid, basis=basis)
