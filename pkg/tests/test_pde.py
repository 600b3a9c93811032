"""Discrete solves: exact-band anchor, maximum principle, separable match,
linearized operator."""

import math

import numpy as np
import pytest

from serrinband import (
    SpectralCurve,
    TorsionProfile,
    assemble,
    make_basis,
    make_grid,
    make_shape,
    solve_linearized,
    solve_torsion,
)


def test_torsion_exact_band_convergence():
    dim, lam = 2, 0.8
    prof = TorsionProfile(dim)
    shape = make_shape(dim, lam, None, n_alpha=32)
    errs, hs = [], []
    for n in (32, 64, 128):
        u = solve_torsion(shape, n, n)
        exact = np.array([prof.u_diff(lam, t) for t in u.t])
        errs.append(float(np.max(np.abs(u.values - exact[None, :]))))
        hs.append(1.0 / n)
    order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert order >= 1.8


def test_torsion_alpha_independent_on_band():
    for dim in (2, 3):
        shape = make_shape(dim, 0.6, None, n_alpha=32)
        u = solve_torsion(shape, 32, 32)
        assert float(np.max(np.abs(u.values - u.values[0, :][None, :]))) < 1e-10


def test_torsion_maximum_principle():
    shape = make_shape(2, 0.6, [0.0, 0.0, 0.05], n_alpha=32)
    u = solve_torsion(shape, 32, 32)
    assert np.all(u.values[:, :-1] > 0.0)
    assert np.all(u.values[:, -1] == 0.0)


def test_grid_size_guard():
    shape = make_shape(2, 0.6, None, n_alpha=32)
    with pytest.raises(ValueError):
        assemble(shape, 8)


def test_separable_entrywise_match():
    """At constant phi the assembled matrix equals the separable discretization."""
    import scipy.sparse as sp

    dim, lam, n_t = 3, 0.7, 24
    shape = make_shape(dim, lam, None, n_alpha=24)
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
    # exact cell averages of sin (dim = 3): integral of sin is -cos
    faces = np.concatenate([[0.0], mid, [math.pi]])
    s_nod = (np.cos(faces[:-1]) - np.cos(faces[1:])) / w

    rows, cols, vals = [], [], []
    K = lambda i, j: i * n_t + j
    for i in range(na - 1):
        c1 = s_mid[i] / (a[i + 1] - a[i])
        for j in range(n_t):
            f = c1 / math.cos(lam * t[j]) ** 2
            for row, sgn in ((i, 1.0), (i + 1, -1.0)):
                scale = sgn / (w[row] * s_nod[row])
                rows += [K(row, j), K(row, j)]
                cols += [K(i + 1, j), K(i, j)]
                vals += [f * scale, -f * scale]
    for i in range(na):
        for jf in range(n_t):
            c = math.cos(lam * (jf + 0.5) * h) ** (dim - 1) / h
            for row, sgn in ((jf, 1.0), (jf + 1, -1.0)):
                if row >= n_t:
                    continue
                scale = sgn * (2.0 if (row == 0 and jf == 0) else 1.0) / (
                    h * lam**2 * math.cos(lam * t[row]) ** (dim - 1)
                )
                if jf + 1 < n_t:
                    rows.append(K(i, row))
                    cols.append(K(i, jf + 1))
                    vals.append(c * scale)
                rows.append(K(i, row))
                cols.append(K(i, jf))
                vals.append(-c * scale)
    direct = sp.coo_matrix((vals, (rows, cols)), shape=(na * n_t, na * n_t)).tocsr()

    op = assemble(shape, n_t)
    diff = (op.matrix - direct).tocoo()
    scale = float(np.max(np.abs(op.matrix.data)))
    rel = float(np.max(np.abs(diff.data)) / scale) if diff.nnz else 0.0
    assert rel < 1e-13


def _weighted_asymmetry(dim, lam, coeffs, n):
    """Relative asymmetry of diag(cell mass) @ L; the t = 0 row carries the
    reflected half cell."""
    import scipy.sparse as sp

    from serrinband.pde import _cell_average_weight

    shape = make_shape(dim, lam, coeffs, n_alpha=n)
    op = assemble(shape, n)
    a = shape.grid.nodes
    mid = 0.5 * (a[:-1] + a[1:])
    w = np.empty(n)
    w[0] = mid[0]
    w[1:-1] = np.diff(mid)
    w[-1] = math.pi - mid[-1]
    h = 1.0 / n
    t = np.linspace(0.0, 1.0, n + 1)[:n]
    phi = shape.phi_samples
    rho = phi[:, None] * np.cos(phi[:, None] * t[None, :]) ** (dim - 1)
    s_cell = _cell_average_weight(dim, a, mid, w)
    tw = np.full(n, h)
    tw[0] = h / 2
    m = (rho * s_cell[:, None] * w[:, None] * tw[None, :]).reshape(-1)
    mat = sp.diags(m) @ op.matrix
    diff = mat - mat.T
    return float(np.max(np.abs(diff.data))) / float(np.max(np.abs(mat.data))) if diff.nnz else 0.0


def test_operator_symmetry_under_cell_weighting():
    # separable case is exactly symmetric; cross terms are symmetric up to
    # the O(h) quadrature of the face averages
    assert _weighted_asymmetry(2, 0.6, None, 32) < 1e-14
    assert _weighted_asymmetry(3, 0.6, None, 32) < 1e-14
    a32 = _weighted_asymmetry(2, 0.6, [0.0, 0.0, 0.05], 32)
    a64 = _weighted_asymmetry(2, 0.6, [0.0, 0.0, 0.05], 64)
    assert a32 < 1e-3
    assert a64 < 0.6 * a32


def test_linearized_eigenfunction():
    dim, lam, j = 2, 0.5, 3
    sig = SpectralCurve(dim, j).sigma(lam)
    errs = []
    for n in (48, 96):
        grid = make_grid(dim, n)
        basis = make_basis(dim, j)
        om = np.asarray(basis.y_eval(j, grid.nodes), dtype=float)
        _, lom = solve_linearized(dim, lam, om, n, n)
        errs.append(float(np.max(np.abs(lom - sig * om))))
    assert errs[1] < errs[0] / 3.2  # about O(h^2)
    assert errs[1] < 1e-3


def test_linearized_constant_is_exact():
    """Constants are discretely harmonic, so L(const) = u''(lambda) * const
    with no grid error; this equals sigma_0 times the constant."""
    dim, lam = 3, 0.8
    prof = TorsionProfile(dim)
    omega = np.full(32, 2.5)
    psi, lom = solve_linearized(dim, lam, omega, 32, 32)
    assert np.allclose(psi.values, 2.5, atol=1e-11)
    sigma0 = SpectralCurve(dim, 0).sigma(lam)
    assert np.allclose(lom, sigma0 * 2.5, atol=1e-9)
    assert np.allclose(lom, prof.u_second(lam) * 2.5, atol=1e-9)


def test_linearized_superposition():
    dim, lam, n = 2, 0.7, 96
    grid = make_grid(dim, n)
    basis = make_basis(dim, 5)
    y2 = np.asarray(basis.y_eval(2, grid.nodes), dtype=float)
    y5 = np.asarray(basis.y_eval(5, grid.nodes), dtype=float)
    _, l_combo = solve_linearized(dim, lam, y2 + 2.0 * y5, n, n)
    _, l2 = solve_linearized(dim, lam, y2, n, n)
    _, l5 = solve_linearized(dim, lam, y5, n, n)
    assert np.allclose(l_combo, l2 + 2.0 * l5, atol=1e-10)


def test_nonlinear_fd_consistency():
    """(H(lam + eps Y_j) - H(lam))/eps approaches sigma_j(lam) Y_j as eps shrinks."""
    from serrinband import evaluate_H

    dim, lam, j, n = 2, 0.5, 2, 96
    grid = make_grid(dim, n)
    basis = make_basis(dim, j)
    y = np.asarray(basis.y_eval(j, grid.nodes), dtype=float)
    sig = SpectralCurve(dim, j).sigma(lam)
    base = make_shape(dim, lam, None, grid=grid)
    h0 = evaluate_H(base, n, n)
    errs = []
    for eps in (1e-2, 1e-3):
        coeffs = np.zeros(j + 1)
        coeffs[j] = eps
        shp = make_shape(dim, lam, coeffs, grid=grid, basis=basis)
        h1 = evaluate_H(shp, n, n)
        errs.append(float(np.max(np.abs((h1 - h0) / eps - sig * y))))
    assert errs[1] < errs[0]


def test_field_csv_export(tmp_path):
    shape = make_shape(2, 0.6, None, n_alpha=32)
    u = solve_torsion(shape, 32, 32)
    path = tmp_path / "field.csv"
    u.to_csv(str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "alpha,t,value"
    assert len(lines) == 1 + 32 * 33
    a, t, v = map(float, lines[1].split(","))
    assert a == pytest.approx(u.alpha[0]) and t == 0.0 and v == pytest.approx(u.values[0, 0])
