"""Runtime invariant suites behind the `check` CLI command.

Each check returns (name, margin, passed); margin is how far inside the
tolerance the measurement landed (positive = pass with room).  Convergence-
order checks are the slow ones and can be skipped with coarse=True.
"""

from __future__ import annotations

import math

import numpy as np

from .bifurcation import lambda_star
from .geometry import make_shape, metric_block, neumann_trace
from .harmonics import make_basis, make_grid, project, sphere_area
from .pde import Field2D, assemble, solve_torsion
from .spectrum import SpectralCurve
from .torsion import TorsionProfile

CheckResult = tuple[str, float, bool]


def _result(name: str, value: float, tol: float) -> CheckResult:
    return (name, tol - value, value <= tol)


def torsion_checks() -> list[CheckResult]:
    out = []
    worst_odd = 0.0
    worst_closed = 0.0
    worst_ode = 0.0
    bound_margin = math.inf
    thetas = np.linspace(0.05, 1.45, 15)
    for dim in (2, 3, 4, 5, 6):
        prof = TorsionProfile(dim)
        for th in thetas:
            up = prof.u_prime(th)
            worst_odd = max(worst_odd, abs(prof.u_prime(-th) + up))
            bound_margin = min(bound_margin, -up - th)
            h = 1e-4
            flux = lambda x: math.cos(x) ** (dim - 1) * prof.u_prime(x)
            res = (flux(th + h) - flux(th - h)) / (2 * h) + math.cos(th) ** (dim - 1)
            worst_ode = max(worst_ode, abs(res))
            if dim == 2:
                worst_closed = max(worst_closed, abs(up + math.tan(th)))
    out.append(_result("torsion.oddness", worst_odd, 1e-12))
    out.append(("torsion.slope_bound", bound_margin, bound_margin >= 0.0))
    out.append(_result("torsion.ode_residual", worst_ode, 1e-6))
    out.append(_result("torsion.n2_closed_form", worst_closed, 1e-10))
    return out


def harmonics_checks(coarse: bool = False) -> list[CheckResult]:
    out = []
    for dim in (2, 3, 4):
        grid = make_grid(dim, 24)
        dev = abs(float(np.sum(grid.weights)) - sphere_area(dim - 1))
        out.append(_result(f"harmonics.area_N{dim}", dev, 1e-10))
    for dim in (2, 3):
        m = 12
        grid = make_grid(dim, 2 * m + 2)
        basis = make_basis(dim, m)
        gram_dev = 0.0
        for i in range(m + 1):
            yi = basis.y_eval(i, grid.nodes)
            for j in range(i, m + 1):
                val = project(grid, basis, yi, j)
                gram_dev = max(gram_dev, abs(val - (1.0 if i == j else 0.0)))
        out.append(_result(f"harmonics.gram_N{dim}", gram_dev, 1e-9))
        fine = np.linspace(0.0, math.pi, 4001)
        for j in range(0, 9):
            vals = basis.y_eval(j, fine[1:-1])
            signs = np.sign(vals)
            signs = signs[signs != 0]
            crossings = int(np.sum(signs[1:] * signs[:-1] < 0))
            if crossings != j:
                out.append((f"harmonics.zeros_N{dim}_j{j}", float(j - crossings), False))
                break
        else:
            out.append((f"harmonics.zeros_N{dim}", 0.0, True))
    if not coarse:
        out.append(_eigen_residual_order())
    return out


def _eigen_residual_order() -> CheckResult:
    """Discrete polar Laplacian applied to Y_j converges at rate >= 2."""
    dim, j = 3, 4
    basis = make_basis(dim, j)
    gamma = basis.gamma_j(j)
    errs = []
    for n in (64, 128, 256, 512):
        grid = make_grid(dim, n)
        a = grid.nodes
        y = np.asarray(basis.y_eval(j, a))
        aa = np.concatenate([[-a[0]], a, [2 * math.pi - a[-1]]])
        yy = np.concatenate([[y[0]], y, [y[-1]]])
        hm = aa[1:-1] - aa[:-2]
        hp = aa[2:] - aa[1:-1]
        d1 = (-hp / (hm * (hm + hp))) * yy[:-2] + ((hp - hm) / (hm * hp)) * yy[1:-1] + (
            hm / (hp * (hm + hp))
        ) * yy[2:]
        d2 = 2 * (yy[:-2] / (hm * (hm + hp)) - yy[1:-1] / (hm * hp) + yy[2:] / (hp * (hm + hp)))
        lap = d2 + (dim - 2) / np.tan(a) * d1
        errs.append(float(np.max(np.abs(lap + gamma * y))))
    rate = math.log2(errs[-2] / errs[-1])
    return ("harmonics.eigen_residual_order", rate - 1.95, rate >= 1.95)


def spectrum_checks() -> list[CheckResult]:
    out = []
    tri = 0.0
    bound_margin = math.inf
    for dim in (2, 3):
        for j in (2, 7):
            curve = SpectralCurve(dim, j)
            for lam in (0.3, 0.9, 1.25):
                fr, fh = curve.f_riccati(lam), curve.f_heun(lam)
                tri = max(tri, abs(fr - fh) / (1 + abs(fh)))
                lo, hi = curve.bounds(lam)
                bound_margin = min(bound_margin, fh - lo, hi - fh)
    out.append(_result("spectrum.route_triangle", tri, 1e-8))
    out.append(("spectrum.f_bounds", bound_margin, bound_margin >= 0.0))

    order_ok = True
    margin = math.inf
    for dim in (2, 3):
        lams = (0.3, 0.9, 1.3)
        sigmas = np.array([[SpectralCurve(dim, j).sigma(l) for l in lams] for j in range(13)])
        gaps = np.diff(sigmas, axis=0)
        margin = min(margin, float(gaps.min()))
        order_ok = order_ok and bool(np.all(gaps > 0))
    out.append(("spectrum.ordering", margin, order_ok))

    lim_dev = max(
        abs(SpectralCurve(dim, j).sigma(0.002) + 1.0) for dim in (2, 3) for j in range(13)
    )
    out.append(_result("spectrum.limit_at_zero", lim_dev, 0.05))

    growth = [SpectralCurve(2, j).sigma(1.0) / j for j in (8, 16, 32, 64)]
    ok = all(0.5 < g < 1e4 for g in growth)
    out.append(("spectrum.linear_growth", min(growth), ok))

    curve = SpectralCurve(2, 2)
    _, bp1 = curve.b_bvp(0.9, 512)
    dev = abs(bp1 / 0.9 - curve.f_heun(0.9))
    out.append(_result("spectrum.bvp_agreement", dev, 1e-4))
    return out


def bifurcation_checks() -> list[CheckResult]:
    out = []
    worst_res = 0.0
    worst_fd = 0.0
    ubound = math.inf
    for dim in (2, 3):
        prev = math.inf
        for j in range(2, 8):
            curve = SpectralCurve(dim, j)
            pt = lambda_star(curve)
            worst_res = max(worst_res, pt.residual)
            ubound = min(ubound, 1.0 / (curve.c_const - dim + 1) - pt.lambda_star * math.tan(pt.lambda_star))
            h = 1e-5
            fd = (curve.sigma(pt.lambda_star + h) - curve.sigma(pt.lambda_star - h)) / (2 * h)
            worst_fd = max(worst_fd, abs(pt.sigma_prime - fd) / abs(fd))
            if not pt.lambda_star < prev:
                out.append((f"bifurcation.monotone_N{dim}_j{j}", 0.0, False))
            prev = pt.lambda_star
    out.append(_result("bifurcation.residual", worst_res, 1e-10))
    out.append(("bifurcation.upper_bound", ubound, ubound >= -1e-12))
    out.append(_result("bifurcation.fd_match", worst_fd, 1e-6))

    curve = SpectralCurve(2, 3)
    lams = np.linspace(0.01, math.pi / 2 - 0.01, 2000)
    signs = np.sign([curve.sigma(l) for l in lams])
    changes = int(np.sum(signs[1:] * signs[:-1] < 0))
    out.append(("bifurcation.unique_crossing", float(1 - abs(changes - 1)), changes == 1))
    return out


def geometry_checks() -> list[CheckResult]:
    out = []
    shape = make_shape(2, 0.5, [0.0, 0.0, 0.01], n_alpha=32)
    det_dev = 0.0
    for a in (0.3, 1.1, 2.0):
        for t in (0.0, 0.5, 1.0):
            blk = metric_block(shape, a, t)
            det_dev = max(det_dev, abs(blk.det - (blk.g_aa * blk.g_tt - blk.g_at**2)))
    out.append(_result("geometry.det_identity", det_dev, 1e-14))

    lam = 0.6
    const = make_shape(2, lam, None, n_alpha=32)
    blk = metric_block(const, 0.7, 0.4)
    dev = max(
        abs(blk.inv_tt - 1 / lam**2),
        abs(blk.inv_aa - 1 / math.cos(lam * 0.4) ** 2),
        abs(blk.g_at),
    )
    out.append(_result("geometry.constant_metric", dev, 1e-14))

    u1 = solve_torsion(const, 32, 32)
    u2 = Field2D(alpha=u1.alpha, t=u1.t, values=np.cos(u1.alpha)[:, None] * u1.t[None, :] ** 2)
    u_sum = Field2D(alpha=u1.alpha, t=u1.t, values=2.0 * u1.values + u2.values)
    lin_dev = float(
        np.max(np.abs(neumann_trace(const, u_sum) - 2 * neumann_trace(const, u1) - neumann_trace(const, u2)))
    )
    out.append(_result("geometry.trace_linearity", lin_dev, 1e-13))
    return out


def pde_checks(coarse: bool = False) -> list[CheckResult]:
    out = []
    dim, lam = 2, 0.8
    prof = TorsionProfile(dim)
    shape = make_shape(dim, lam, None, n_alpha=32)
    sep_dev = _separable_match(shape, 32)
    out.append(_result("pde.separable_match", sep_dev, 1e-12))

    wavy = make_shape(dim, 0.6, [0, 0, 0.05], n_alpha=32)
    u = solve_torsion(wavy, 32, 32)
    interior_min = float(u.values[:, :-1].min())
    top_max = float(np.max(np.abs(u.values[:, -1])))
    out.append(("pde.max_principle", interior_min, interior_min > 0 and top_max == 0.0))

    if not coarse:
        errs, hs = [], []
        for n in (32, 64, 128):
            u = solve_torsion(shape, n, n)
            exact = np.array([prof.u_diff(lam, t) for t in u.t])
            errs.append(float(np.max(np.abs(u.values - exact[None, :]))))
            hs.append(1.0 / n)
        order = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
        out.append(("pde.torsion_order", order - 1.8, order >= 1.8))
    return out


def _separable_match(shape, n_t: int) -> float:
    """Entrywise deviation between the assembled operator and the separable form."""
    import scipy.sparse as sp

    dim, lam = shape.dim, shape.lam
    grid = shape.grid
    na = grid.n_alpha
    a = grid.nodes
    h = 1.0 / n_t
    t = np.linspace(0.0, 1.0, n_t + 1)
    mid = 0.5 * (a[:-1] + a[1:])
    w = np.empty(na)
    w[0] = mid[0]
    w[1:-1] = np.diff(mid)
    w[-1] = math.pi - mid[-1]
    s_mid = np.sin(mid) ** (dim - 2)
    s_nod = np.sin(a) ** (dim - 2)

    rows, cols, vals = [], [], []

    def K(i, j):
        return i * n_t + j

    def add(r, c, v):
        rows.append(r)
        cols.append(c)
        vals.append(v)

    # alpha part: (1/sin^{N-2}) d_a (sin^{N-2} d_a) / cos^2(lam t)
    for i in range(na - 1):
        c1 = s_mid[i] / (a[i + 1] - a[i])
        for j in range(n_t):
            f = c1 / np.cos(lam * t[j]) ** 2
            for row, sgn in ((i, 1.0), (i + 1, -1.0)):
                scale = sgn / (w[row] * s_nod[row])
                add(K(row, j), K(i + 1, j), f * scale)
                add(K(row, j), K(i, j), -f * scale)
    # t part: (1/(lam^2 cos^{N-1})) d_t (cos^{N-1} d_t); face jf couples rows jf, jf+1
    for i in range(na):
        for jf in range(n_t):
            c = np.cos(lam * (jf + 0.5) * h) ** (dim - 1) / h
            for row, sgn in ((jf, 1.0), (jf + 1, -1.0)):
                if row >= n_t:
                    continue
                scale = sgn * (2.0 if (row == 0 and jf == 0) else 1.0) / (
                    h * lam**2 * np.cos(lam * t[row]) ** (dim - 1)
                )
                if jf + 1 < n_t:
                    add(K(i, row), K(i, jf + 1), c * scale)
                add(K(i, row), K(i, jf), -c * scale)
    direct = sp.coo_matrix((vals, (rows, cols)), shape=(na * n_t, na * n_t)).tocsr()
    op = assemble(shape, n_t)
    diff = (op.matrix - direct).tocoo()
    scale = max(float(np.max(np.abs(op.matrix.data))), 1.0)
    return float(np.max(np.abs(diff.data)) / scale) if diff.nnz else 0.0


def run_all(coarse: bool = False) -> list[CheckResult]:
    results = []
    results += torsion_checks()
    results += harmonics_checks(coarse)
    results += spectrum_checks()
    results += bifurcation_checks()
    results += geometry_checks()
    results += pde_checks(coarse)
    return results
