"""Axisymmetric band domains and the pulled-back metric on S^{N-1} x (-1,1).

A boundary profile phi: [0, pi] -> (0, pi/2) describes the domain
{ |theta| < phi(alpha) } on the sphere; pulling the round metric back under
(sigma, t) -> (sigma, phi(sigma) t) gives, in the (alpha, t) chart with the
S^{N-2} factor integrated out,

    g_aa = cos^2(phi t) + (phi' t)^2,   g_at = phi' t phi,   g_tt = phi^2,

with 2x2 determinant phi^2 cos^2(phi t) and volume density
phi cos^{N-1}(phi t) sin^{N-2}(alpha).  All phi-derivatives are spectral:
phi is stored as harmonic coefficients, so no finite-difference noise enters
the metric.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import AdmissibilityError
from .harmonics import AxisGrid, HarmonicBasis, make_basis, make_grid

_ADMISSIBLE_MARGIN = 1e-12


@dataclass(frozen=True)
class MetricBlock:
    """Pulled-back metric data at one point of the (alpha, t) chart."""

    g_aa: float
    g_at: float
    g_tt: float
    det: float
    inv_aa: float
    inv_at: float
    inv_tt: float
    vol: float


@dataclass(frozen=True)
class DomainShape:
    """Axisymmetric band with boundary profile phi = lambda + sum_l c_l Y_l."""

    dim: int
    lam: float
    coeffs: np.ndarray = field(repr=False, compare=False)
    grid: AxisGrid = field(repr=False, compare=False)
    basis: HarmonicBasis = field(repr=False, compare=False)
    phi_samples: np.ndarray = field(repr=False, compare=False)
    dphi_samples: np.ndarray = field(repr=False, compare=False)

    def phi(self, alpha) -> np.ndarray | float:
        val = np.full_like(np.asarray(alpha, dtype=float), self.lam)
        for ell, c in enumerate(self.coeffs):
            if c != 0.0:
                val = val + c * self.basis.y_eval(ell, alpha)
        return val

    def dphi(self, alpha) -> np.ndarray | float:
        val = np.zeros_like(np.asarray(alpha, dtype=float))
        for ell, c in enumerate(self.coeffs):
            if c != 0.0:
                val = val + c * self.basis.y_deriv(ell, alpha)
        return val

    @property
    def is_constant(self) -> bool:
        return not np.any(self.coeffs)


def make_shape(
    dim: int,
    lam: float,
    coeffs=None,
    n_alpha: int = 64,
    grid: AxisGrid | None = None,
    basis: HarmonicBasis | None = None,
) -> DomainShape:
    """Build and validate a shape; raises AdmissibilityError outside 0 < phi < pi/2."""
    coeffs = np.zeros(1) if coeffs is None else np.asarray(coeffs, dtype=float)
    if grid is None:
        grid = make_grid(dim, n_alpha)
    if basis is None:
        basis = make_basis(dim, max(len(coeffs) - 1, 0))
    if len(coeffs) - 1 > basis.max_degree:
        raise ValueError("coefficient list exceeds basis truncation")
    shape = DomainShape(
        dim=dim,
        lam=float(lam),
        coeffs=coeffs,
        grid=grid,
        basis=basis,
        phi_samples=np.empty(0),
        dphi_samples=np.empty(0),
    )
    phi = np.asarray(shape.phi(grid.nodes), dtype=float)
    dphi = np.asarray(shape.dphi(grid.nodes), dtype=float)
    if not (np.all(phi > _ADMISSIBLE_MARGIN) and np.all(phi < math.pi / 2 - _ADMISSIBLE_MARGIN)):
        raise AdmissibilityError(
            f"phi leaves (0, pi/2): range [{phi.min()}, {phi.max()}] at lambda = {lam}"
        )
    object.__setattr__(shape, "phi_samples", phi)
    object.__setattr__(shape, "dphi_samples", dphi)
    return shape


def metric_block(shape: DomainShape, alpha: float, t: float) -> MetricBlock:
    """Metric components at (alpha, t); see module docstring for the formulas."""
    p = float(shape.phi(alpha))
    dp = float(shape.dphi(alpha))
    return _metric_from_values(shape.dim, p, dp, float(alpha), float(t))


def _metric_from_values(dim: int, p: float, dp: float, alpha: float, t: float) -> MetricBlock:
    c = math.cos(p * t)
    g_aa = c * c + (dp * t) ** 2
    g_at = dp * t * p
    g_tt = p * p
    det = p * p * c * c
    return MetricBlock(
        g_aa=g_aa,
        g_at=g_at,
        g_tt=g_tt,
        det=det,
        inv_aa=g_tt / det,
        inv_at=-g_at / det,
        inv_tt=g_aa / det,
        vol=p * c ** (dim - 1) * math.sin(alpha) ** (dim - 2),
    )


def neumann_trace(shape: DomainShape, field2d) -> np.ndarray:
    """Outward normal derivative of a field at the t = 1 boundary, per node.

    In the (alpha, t) chart the outer unit normal gives

        d_nu u = [u_t/phi - (phi'/cos^2 phi)(u_alpha - u_t phi'/phi)]
                 / sqrt(1 + phi'^2/cos^2 phi),

    which reduces to u_t/lambda on the straight band.  u_t is the one-sided
    O(h^2) derivative from the top three rows; u_alpha differentiates the top
    row along the (possibly non-uniform) alpha nodes.
    """
    alpha = shape.grid.nodes
    if field2d.values.shape[0] != alpha.size:
        raise ValueError("field grid does not match the shape grid")
    u_t = field2d.t_derivative_top()
    u_a = _alpha_derivative(alpha, field2d.values[:, -1])
    p = shape.phi_samples
    dp = shape.dphi_samples
    cos2 = np.cos(p) ** 2
    return (u_t / p - (dp / cos2) * (u_a - u_t * dp / p)) / np.sqrt(1.0 + dp * dp / cos2)


def _alpha_derivative(alpha: np.ndarray, row: np.ndarray) -> np.ndarray:
    """Centered non-uniform differences, one-sided O(h^2) at the ends."""
    d = np.empty_like(row)
    d[1:-1] = (row[2:] - row[:-2]) / (alpha[2:] - alpha[:-2])
    h0, h1 = alpha[1] - alpha[0], alpha[2] - alpha[1]
    d[0] = (-(2 * h0 + h1) * row[0] + (h0 + h1) ** 2 / h1 * row[1] - h0 * h0 / h1 * row[2]) / (
        h0 * (h0 + h1)
    )
    g0, g1 = alpha[-1] - alpha[-2], alpha[-2] - alpha[-3]
    d[-1] = ((2 * g0 + g1) * row[-1] - (g0 + g1) ** 2 / g1 * row[-2] + g0 * g0 / g1 * row[-3]) / (
        g0 * (g0 + g1)
    )
    return d


def embed(shape: DomainShape, alpha: float, t: float) -> np.ndarray:
    """Point of the band in R^{N+1}: ((cos theta) sigma(alpha), sin theta), theta = phi(alpha) t."""
    theta = float(shape.phi(alpha)) * t
    sigma = np.zeros(shape.dim)
    sigma[0] = math.cos(alpha)
    sigma[1] = math.sin(alpha)
    out = np.empty(shape.dim + 1)
    out[:-1] = math.cos(theta) * sigma
    out[-1] = math.sin(theta)
    return out


def shape_record(shape: DomainShape) -> dict:
    """JSON-ready record of the shape."""
    return {
        "dim": shape.dim,
        "lambda": shape.lam,
        "coeffs": [float(c) for c in shape.coeffs],
        "alpha": [float(a) for a in shape.grid.nodes],
        "phi": [float(p) for p in shape.phi_samples],
    }


def export_shape(shape: DomainShape, path: str):
    """Write the shape record as JSON (atomic: temp file + rename)."""
    payload = json.dumps(shape_record(shape), indent=2)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload + "\n")
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
