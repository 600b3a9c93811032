"""Roots lambda_j of the eigencurves and their transversality data.

For j >= 2 each curve sigma_j crosses zero exactly once on (0, pi/2); the
crossing is bracketed a priori by b_j solving

    b_j tan(b_j) = 1 / (c_j - N + 1),

refined by bisection and polished by a secant iteration.  At a root the
derivative has the closed form

    sigma_j'(l) = u'(l) (N - 1 - gamma_j) / cos^2(l) > 0,

which is the transversality needed for branch switching.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import DomainError, SolverError
from .spectrum import SpectralCurve
from .torsion import TorsionProfile

_BISECT_WIDTH = 1e-6
_POLISH_RESIDUAL = 1e-12
_LAMBDA_FLOOR = 1e-4


def thread_count() -> int:
    """Parallelism cap from SERRIN_THREADS (defaults to the CPU count)."""
    env = os.environ.get("SERRIN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class BifurcationPoint:
    dim: int
    degree: int
    lambda_star: float
    sigma_prime: float
    bracket: tuple
    residual: float


def _upper_bracket(dim: int, j: int, c_const: float) -> float:
    """Solve b tan(b) = 1/(c_j - N + 1) by bisection (monotone on (0, pi/2))."""
    target = 1.0 / (c_const - dim + 1)
    lo, hi = 1e-12, math.pi / 2 - 1e-12
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * math.tan(mid) < target:
            lo = mid
        else:
            hi = mid
    return hi


def lambda_star(curve: SpectralCurve) -> BifurcationPoint:
    """Locate the unique root of sigma_j, j >= 2, with its transversality data."""
    if curve.degree < 2:
        raise DomainError(
            f"no bifurcation point for degree {curve.degree}: sigma_1 = -1 identically "
            "and sigma_0 < sigma_1, so sigma_j has no zero for j < 2"
        )
    b_j = _upper_bracket(curve.dim, curve.degree, curve.c_const)
    lo, hi = _LAMBDA_FLOOR, b_j
    f_lo, f_hi = curve.sigma(lo), curve.sigma(hi)
    # sigma -> -1 at 0 and +inf at pi/2; the a-priori bound puts the root below b_j
    while f_hi < 0.0:
        hi = 0.5 * (hi + math.pi / 2)
        if hi > math.pi / 2 - 1e-7:
            raise SolverError(
                f"no sign change located for (N={curve.dim}, j={curve.degree}); "
                f"sigma({lo}) = {f_lo}, sigma({hi}) = {f_hi}"
            )
        f_hi = curve.sigma(hi)
    if f_lo >= 0.0:
        raise SolverError(
            f"bracket failure for (N={curve.dim}, j={curve.degree}): sigma({lo}) = {f_lo} >= 0"
        )
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if curve.sigma(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    bracket = (lo, hi)
    # secant polish
    x0, x1 = lo, hi
    f0, f1 = curve.sigma(x0), curve.sigma(x1)
    for _ in range(60):
        if abs(f1) <= _POLISH_RESIDUAL or f1 == f0:
            break
        x0, x1, f0 = x1, x1 - f1 * (x1 - x0) / (f1 - f0), f1
        x1 = min(max(x1, _LAMBDA_FLOOR), math.pi / 2 - 1e-7)
        f1 = curve.sigma(x1)
    root, res = (x1, abs(f1)) if abs(f1) <= abs(f0) else (x0, abs(f0))
    return BifurcationPoint(
        dim=curve.dim,
        degree=curve.degree,
        lambda_star=root,
        sigma_prime=sigma_prime_closed(curve, root),
        bracket=bracket,
        residual=res,
    )


def sigma_prime_closed(curve: SpectralCurve, lam: float, residual_tol: float = 1e-8) -> float:
    """d(sigma_j)/d(lambda) at a root, u'(l)(N-1-gamma_j)/cos^2(l); root required."""
    res = abs(curve.sigma(lam))
    if res > residual_tol:
        raise DomainError(
            f"lambda = {lam} is not a root of sigma_{curve.degree} "
            f"(|sigma| = {res} > {residual_tol})"
        )
    up = TorsionProfile(curve.dim).u_prime(lam)
    return up * (curve.dim - 1 - curve.gamma) / math.cos(lam) ** 2


def lambda_table(dim: int, j_max: int) -> list[BifurcationPoint]:
    """Bifurcation points for j = 2..j_max; strictly decreasing in lambda."""
    if j_max < 2:
        raise DomainError(f"j_max must be >= 2, got {j_max}")
    degrees = range(2, j_max + 1)
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        points = list(pool.map(lambda j: lambda_star(SpectralCurve(dim, j)), degrees))
    for a, b in zip(points[:-1], points[1:]):
        if not b.lambda_star < a.lambda_star:
            raise SolverError(
                f"lambda_{b.degree} = {b.lambda_star} not below lambda_{a.degree} = {a.lambda_star}"
            )
    return points
