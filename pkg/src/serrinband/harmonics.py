"""Axially symmetric spherical harmonics on S^{N-1} and their quadrature.

In the polar angle alpha (distance from the symmetry axis e1), the degree-j
axisymmetric harmonic is a polynomial of degree j in x = cos(alpha): a Jacobi
polynomial P_j^{(b,b)} with b = (N-3)/2, orthogonal against the surface
measure sin^{N-2}(alpha) d(alpha).  For N = 2 this specializes to Chebyshev
(cos(j*alpha)), for N = 3 to Legendre.

Normalization constants are computed by quadrature (one code path for all N)
so that int_{S^{N-1}} Y_j^2 dsigma = 1 with the sign fixed by Y_j(0) > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_jacobi, gamma as gamma_fn, roots_jacobi

from .errors import ResolutionError


def sphere_area(n: int) -> float:
    """Surface measure of the unit n-sphere S^n in R^{n+1}."""
    return 2.0 * math.pi ** ((n + 1) / 2) / gamma_fn((n + 1) / 2)


@dataclass(frozen=True)
class AxisGrid:
    """Polar quadrature nodes for axisymmetric integrals over S^{N-1}.

    nodes are the Gauss-Jacobi points mapped to alpha = arccos(x) in (0, pi),
    ascending; weights include the S^{N-2} factor so that

        sum_k w_k f(alpha_k) = int_{S^{N-1}} f dsigma

    exactly for f polynomial in cos(alpha) of degree <= 2*n_alpha - 1.
    """

    dim: int
    n_alpha: int
    nodes: np.ndarray = field(repr=False, compare=False)
    weights: np.ndarray = field(repr=False, compare=False)

    @property
    def x(self) -> np.ndarray:
        return np.cos(self.nodes)


def make_grid(dim: int, n_alpha: int) -> AxisGrid:
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if n_alpha < 8:
        raise ValueError(f"n_alpha must be >= 8, got {n_alpha}")
    b = (dim - 3) / 2.0
    x, w = roots_jacobi(n_alpha, b, b)
    alpha = np.arccos(x[::-1])
    w = w[::-1] * sphere_area(dim - 2)
    return AxisGrid(dim=dim, n_alpha=n_alpha, nodes=alpha, weights=w)


@dataclass(frozen=True)
class HarmonicBasis:
    """L^2-normalized axisymmetric harmonics Y_0..Y_M on S^{N-1}."""

    dim: int
    max_degree: int
    norm_constants: np.ndarray = field(repr=False, compare=False)

    @property
    def jacobi_b(self) -> float:
        return (self.dim - 3) / 2.0

    def gamma_j(self, j: int) -> float:
        """Laplace-Beltrami eigenvalue: -Delta Y_j = gamma_j Y_j."""
        return float(j * (self.dim - 2 + j))

    def y_eval(self, j: int, alpha) -> np.ndarray | float:
        """Y_j at polar angle(s) alpha."""
        self._check_degree(j)
        b = self.jacobi_b
        return self.norm_constants[j] * eval_jacobi(j, b, b, np.cos(alpha))

    def y_deriv(self, j: int, alpha) -> np.ndarray | float:
        """d/d(alpha) Y_j; vanishes at alpha = 0, pi for every degree."""
        self._check_degree(j)
        if j == 0:
            return np.zeros_like(np.asarray(alpha, dtype=float))
        b = self.jacobi_b
        # d/dx P_j^{(b,b)} = (j + 2b + 1)/2 * P_{j-1}^{(b+1,b+1)}, chain rule x = cos(alpha)
        dpoly = 0.5 * (j + 2 * b + 1) * eval_jacobi(j - 1, b + 1, b + 1, np.cos(alpha))
        return -np.sin(alpha) * self.norm_constants[j] * dpoly

    def _check_degree(self, j: int):
        if not 0 <= j <= self.max_degree:
            raise ValueError(f"degree {j} outside basis range 0..{self.max_degree}")


def make_basis(dim: int, max_degree: int) -> HarmonicBasis:
    """Build the basis, computing normalizers on an internal Gauss grid."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    grid = make_grid(dim, max(max_degree + 2, 8))
    b = (dim - 3) / 2.0
    consts = np.empty(max_degree + 1)
    for j in range(max_degree + 1):
        vals = eval_jacobi(j, b, b, grid.x)
        sq = float(np.sum(grid.weights * vals * vals))
        consts[j] = 1.0 / math.sqrt(sq)
    # P_j^{(b,b)}(1) = binom(j+b, j) > 0, so Y_j(0) > 0 already holds
    return HarmonicBasis(dim=dim, max_degree=max_degree, norm_constants=consts)


def y_eval(basis: HarmonicBasis, j: int, alpha):
    return basis.y_eval(j, alpha)


def project(grid: AxisGrid, basis: HarmonicBasis, samples: np.ndarray, ell: int) -> float:
    """L^2 projection <f, Y_ell> by grid quadrature.

    Requires n_alpha >= 2*max_degree + 2 so products Y_i Y_j up to the basis
    truncation are integrated exactly.
    """
    if grid.n_alpha < 2 * basis.max_degree + 2:
        raise ResolutionError(
            f"grid with n_alpha = {grid.n_alpha} cannot resolve degree "
            f"{basis.max_degree} projections (need >= {2 * basis.max_degree + 2})"
        )
    basis._check_degree(ell)
    samples = np.asarray(samples, dtype=float)
    if samples.shape != grid.nodes.shape:
        raise ValueError("samples must be given on the grid nodes")
    return float(np.sum(grid.weights * samples * basis.y_eval(ell, grid.nodes)))


def project_all(grid: AxisGrid, basis: HarmonicBasis, samples: np.ndarray) -> np.ndarray:
    """All projections <f, Y_ell>, ell = 0..max_degree, in one pass."""
    return np.array([project(grid, basis, samples, ell) for ell in range(basis.max_degree + 1)])
