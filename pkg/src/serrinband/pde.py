"""Discrete solvers on the band: torsion problem, Neumann data, linearization.

The Laplace-Beltrami operator of the pulled-back metric acts on axisymmetric
fields u(alpha, t) as

    Delta u = (1/rho) [ d_a( rho (A u_a + B u_t) ) + d_t( rho (B u_a + C u_t) ) ]

with (A, B, C) the inverse 2x2 metric block and rho the volume density.  The
discretization is conservative: face fluxes F^a, F^t are differenced over
control volumes, which keeps the divergence structure, makes the pole faces
(alpha = 0, pi) exact zero-flux closures, and reduces entrywise to the
separable operator of the straight band when phi is constant.

Evenness in t halves the domain to t in [0, 1]: the reflected face flux at
t = 0 is the negative of the first interior face flux.  Dirichlet data lives
on the t = 1 row; a boundary coupling matrix moves it to the right-hand side.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import SolverError
from .geometry import DomainShape, make_shape, neumann_trace
from .harmonics import make_grid
from .torsion import TorsionProfile


@dataclass
class Field2D:
    """Axisymmetric scalar field on the (alpha, t) tensor grid, t in [0, 1]."""

    alpha: np.ndarray
    t: np.ndarray
    values: np.ndarray  # (n_alpha, n_t + 1)

    def t_derivative_top(self) -> np.ndarray:
        """One-sided O(h^2) d/dt at the t = 1 row."""
        h = self.t[1] - self.t[0]
        v = self.values
        return (3.0 * v[:, -1] - 4.0 * v[:, -2] + v[:, -3]) / (2.0 * h)

    def to_csv(self, path: str):
        """Write columns alpha, t, value (17 significant digits, LF endings)."""
        lines = ["alpha,t,value"]
        for i, a in enumerate(self.alpha):
            for j, tt in enumerate(self.t):
                lines.append(f"{a:.17g},{tt:.17g},{self.values[i, j]:.17g}")
        _atomic_write(path, "\n".join(lines) + "\n")


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


@dataclass
class DiscreteOperator:
    """Assembled interior operator plus the Dirichlet-row coupling."""

    shape: DomainShape
    n_t: int
    matrix: sp.csr_matrix = field(repr=False)
    boundary: sp.csr_matrix = field(repr=False)
    _lu: object = field(default=None, repr=False)

    @property
    def n_alpha(self) -> int:
        return self.shape.grid.n_alpha

    def solve(self, rhs_interior: np.ndarray, boundary_values: np.ndarray) -> Field2D:
        """Solve L u = rhs with u = boundary_values on the t = 1 row."""
        na, nt = self.n_alpha, self.n_t
        b = rhs_interior.reshape(na * nt) - self.boundary @ boundary_values
        if self._lu is None:
            try:
                self._lu = splu(self.matrix.tocsc())
            except RuntimeError as exc:
                raise SolverError(
                    f"sparse factorization failed on {na}x{nt} grid "
                    f"(lambda = {self.shape.lam}): {exc}"
                ) from exc
        u = self._lu.solve(b)
        if not np.all(np.isfinite(u)):
            raise SolverError(f"non-finite solution on {na}x{nt} grid; ill-conditioned system")
        vals = np.empty((na, nt + 1))
        vals[:, :nt] = u.reshape(na, nt)
        vals[:, nt] = boundary_values
        t = np.linspace(0.0, 1.0, nt + 1)
        return Field2D(alpha=self.shape.grid.nodes.copy(), t=t, values=vals)


def _cell_average_weight(dim: int, alpha: np.ndarray, a_mid: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Cell averages of sin^{N-2} over the control volumes.

    Replacing the nodal weight by the exact cell mass keeps the pole cells
    consistent (the nodal value misrepresents the vanishing measure there by
    an O(1) relative factor, which would cost an order of accuracy for
    alpha-dependent solutions when N >= 3).
    """
    if dim == 2:
        return np.ones_like(alpha)
    faces = np.concatenate([[0.0], a_mid, [math.pi]])
    x, gw = np.polynomial.legendre.leggauss(12)
    lo, hi = faces[:-1], faces[1:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    pts = mid[:, None] + half[:, None] * x[None, :]
    cells = (half[:, None] * np.sin(pts) ** (dim - 2)) @ gw
    return cells / w


def assemble(shape: DomainShape, n_t: int) -> DiscreteOperator:
    """Build the conservative 9-point discretization of Delta_{g_phi}."""
    grid = shape.grid
    na = grid.n_alpha
    if na < 16 or n_t < 16:
        raise ValueError(f"grid sizes must be >= 16, got {na}x{n_t}")
    n = shape.dim
    alpha = grid.nodes
    h = 1.0 / n_t
    t_nodes = np.linspace(0.0, 1.0, n_t + 1)
    t_face = (np.arange(n_t) + 0.5) * h

    a_mid = 0.5 * (alpha[:-1] + alpha[1:])
    dalpha = np.diff(alpha)
    # control widths: faces at midpoints, pole faces at 0 and pi
    w = np.empty(na)
    w[0] = a_mid[0]
    w[1:-1] = np.diff(a_mid)
    w[-1] = math.pi - a_mid[-1]
    # centered-difference denominators per node (ghosts mirrored at the poles)
    denom = np.empty(na)
    denom[0] = alpha[0] + alpha[1]
    denom[1:-1] = alpha[2:] - alpha[:-2]
    denom[-1] = 2.0 * math.pi - alpha[-1] - alpha[-2]

    phi_n = shape.phi_samples
    dphi_n = shape.dphi_samples
    phi_m = np.asarray(shape.phi(a_mid), dtype=float)
    dphi_m = np.asarray(shape.dphi(a_mid), dtype=float)
    sin_n = _cell_average_weight(n, alpha, a_mid, w)
    sin_m = np.sin(a_mid) ** (n - 2)

    # rho * (inverse metric) combinations; cos = cos(phi t)
    def rho_a(p, s, tv):  # rho * g^{aa} = phi cos^{N-3} sin^{N-2}
        return p[:, None] * np.cos(p[:, None] * tv[None, :]) ** (n - 3) * s[:, None]

    def rho_b(p, dp, s, tv):  # rho * g^{at} = -phi' t cos^{N-3} sin^{N-2}
        return -dp[:, None] * tv[None, :] * np.cos(p[:, None] * tv[None, :]) ** (n - 3) * s[:, None]

    def rho_c(p, dp, s, tv):  # rho * g^{tt} = (cos^2 + (phi' t)^2) cos^{N-3} sin^{N-2} / phi
        c = np.cos(p[:, None] * tv[None, :])
        return (c * c + (dp[:, None] * tv[None, :]) ** 2) * c ** (n - 3) * s[:, None] / p[:, None]

    rhoA_mid = rho_a(phi_m, sin_m, t_nodes[:n_t])           # (na-1, n_t)
    rhoB_mid = rho_b(phi_m, dphi_m, sin_m, t_nodes)          # (na-1, n_t+1)
    rhoB_face = rho_b(phi_n, dphi_n, sin_n, t_face)          # (na, n_t)
    rhoC_face = rho_c(phi_n, dphi_n, sin_n, t_face)          # (na, n_t)
    rho_nodes = phi_n[:, None] * np.cos(phi_n[:, None] * t_nodes[None, :n_t]) ** (n - 1) * sin_n[:, None]

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    brows: list[np.ndarray] = []
    bcols: list[np.ndarray] = []
    bvals: list[np.ndarray] = []

    def emit(r, c, v):
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(v.ravel())

    def emit_b(r, c, v):
        brows.append(r.ravel())
        bcols.append(c.ravel())
        bvals.append(v.ravel())

    def K(i, j):
        return i * n_t + j

    with_cross = not shape.is_constant

    # ---- alpha faces: F^a_{i+1/2,j}, contributes +F/w_i to row i, -F/w_{i+1} to row i+1
    ii = np.arange(na - 1)[:, None]
    jj = np.arange(n_t)[None, :]
    c1 = rhoA_mid / dalpha[:, None]  # couples u_{i+1,j} - u_{i,j}
    for drow, sgn, wr in ((0, 1.0, w[:-1]), (1, -1.0, w[1:])):
        r = K(ii + drow, jj)
        scale = sgn / wr[:, None]
        emit(r, K(ii + 1, jj), c1 * scale)
        emit(r, K(ii, jj), -c1 * scale)
        if with_cross:
            # (u_t) at the face: average of centered u_t over the two columns;
            # zero at j = 0 by evenness, Dirichlet row enters at j = n_t - 1
            jj_in = np.arange(1, n_t)[None, :]
            c2 = rhoB_mid[:, 1:n_t] / (4.0 * h)
            rin = K(ii + drow, jj_in)
            sc = scale * np.ones((1, n_t - 1))
            for dcol in (0, 1):
                up_j = jj_in + 1
                interior = up_j[0] < n_t
                emit(rin[:, interior], K(ii + dcol, up_j[:, interior]), (c2 * sc)[:, interior])
                emit_b(rin[:, ~interior], (ii + dcol) * np.ones_like(up_j[:, ~interior]),
                       (c2 * sc)[:, ~interior])
                emit(rin, K(ii + dcol, jj_in - 1), -(c2 * sc))

    # ---- t faces: F^t_{i,j+1/2}, contributes +F/h to row j, -F/h to row j+1;
    # the reflected face below t = 0 doubles the face-0 contribution on row 0
    ii = np.arange(na)[:, None]
    jj = np.arange(n_t)[None, :]
    d1 = rhoC_face / h
    mult = np.ones((1, n_t))
    mult[0, 0] = 2.0
    # +F/h on row j
    r = K(ii, jj)
    up_interior = (jj[0] + 1) < n_t
    emit(r[:, up_interior], K(ii, jj[:, up_interior] + 1), (d1 * mult / h)[:, up_interior])
    emit_b(r[:, ~up_interior], ii * np.ones_like(jj[:, ~up_interior]), (d1 * mult / h)[:, ~up_interior])
    emit(r, K(ii, jj), -d1 * mult / h)
    # -F/h on row j+1 (rows 1..n_t-1)
    jj_s = np.arange(n_t - 1)[None, :]
    r = K(ii, jj_s + 1)
    emit(r, K(ii, jj_s + 1), -d1[:, :-1] / h)
    emit(r, K(ii, jj_s), d1[:, :-1] / h)

    if with_cross:
        # B-part of the t-face flux: rhoB_face * average of centered u_alpha
        ip = np.minimum(np.arange(na) + 1, na - 1)  # alpha-neighbor indices with pole mirrors
        im = np.maximum(np.arange(na) - 1, 0)
        d2 = rhoB_face / (2.0 * denom[:, None])  # per-column coefficient of the u_alpha average
        for drow, sgn in ((0, 1.0), (1, -1.0)):
            if drow == 0:
                rr = K(ii, jj)
                coeff = d2 * mult * sgn / h
                jcols = (jj, jj + 1)
            else:
                rr = K(ii, jj_s + 1)
                coeff = d2[:, :-1] * sgn / h
                jcols = (jj_s, jj_s + 1)
            for jc in jcols:
                interior = (jc[0] if jc.ndim > 1 else jc) < n_t
                jc_in = jc[:, interior] if jc.ndim > 1 else jc[interior]
                emit(rr[:, interior], K(ip[:, None], jc_in), coeff[:, interior])
                emit(rr[:, interior], K(im[:, None], jc_in), -coeff[:, interior])
                if not np.all(interior):
                    emit_b(rr[:, ~interior], ip[:, None] * np.ones_like(jc[:, ~interior]),
                           coeff[:, ~interior])
                    emit_b(rr[:, ~interior], im[:, None] * np.ones_like(jc[:, ~interior]),
                           -coeff[:, ~interior])

    nn = na * n_t
    raw = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(nn, nn)
    ).tocsr()
    if brows:
        braw = sp.coo_matrix(
            (np.concatenate(bvals), (np.concatenate(brows), np.concatenate(bcols))), shape=(nn, na)
        ).tocsr()
    else:  # pragma: no cover
        braw = sp.csr_matrix((nn, na))
    inv_rho = (1.0 / rho_nodes).reshape(nn)
    matrix = sp.diags(inv_rho) @ raw
    boundary = sp.diags(inv_rho) @ braw
    return DiscreteOperator(shape=shape, n_t=n_t, matrix=matrix.tocsr(), boundary=boundary.tocsr())


def _shape_on_grid(shape: DomainShape, n_alpha: int) -> DomainShape:
    if shape.grid.n_alpha == n_alpha:
        return shape
    return make_shape(
        shape.dim, shape.lam, shape.coeffs, grid=make_grid(shape.dim, n_alpha), basis=shape.basis
    )


def solve_torsion(shape: DomainShape, n_alpha: int, n_t: int) -> Field2D:
    """Solution of -Delta u = 1 on the band with u = 0 at t = 1."""
    shape = _shape_on_grid(shape, n_alpha)
    op = assemble(shape, n_t)
    rhs = -np.ones((n_alpha, n_t))
    return op.solve(rhs, np.zeros(n_alpha))


def evaluate_H(shape: DomainShape, n_alpha: int, n_t: int) -> np.ndarray:
    """Neumann data of the torsion solution per alpha node at t = 1."""
    shape = _shape_on_grid(shape, n_alpha)
    op = assemble(shape, n_t)
    u = op.solve(-np.ones((n_alpha, n_t)), np.zeros(n_alpha))
    return neumann_trace(shape, u)


def solve_linearized(
    dim: int, lam: float, omega: np.ndarray, n_alpha: int, n_t: int
) -> tuple[Field2D, np.ndarray]:
    """Harmonic lift of omega on the straight band and the linearized map.

    Solves Delta_{g_lam} psi = 0, psi(., 1) = omega, even in t, and returns

        L omega = -(u'(lam)/lam) d_t psi(., 1) + u''(lam) omega.
    """
    shape = make_shape(dim, lam, None, grid=make_grid(dim, n_alpha))
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (n_alpha,):
        raise ValueError(f"omega must be sampled on the {n_alpha} grid nodes")
    op = assemble(shape, n_t)
    psi = op.solve(np.zeros((n_alpha, n_t)), omega)
    prof = TorsionProfile(dim)
    l_omega = -(prof.u_prime(lam) / lam) * psi.t_derivative_top() + prof.u_second(lam) * omega
    return psi, l_omega
