"""Torsion profile of the straight band: the even solution of

    (cos^{N-1} theta * u'(theta))' = -cos^{N-1} theta,   |theta| < pi/2,

normalized by u(0) = 1.  Only u', u'' and differences u(a) - u(b) are exposed;
the additive constant never matters downstream.

u' has the closed integral form

    u'(theta) = -(1/cos^{N-1} theta) * int_0^theta cos^{N-1} s ds,

which we evaluate by panel Gauss-Legendre quadrature: point evaluation with no
marching error, valid for every dimension N >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# refuse evaluation this close to the blow-up of 1/cos^{N-1}
_THETA_CUTOFF = math.pi / 2 - 1e-8
# panel width keeping fixed-order Gauss exact to machine precision
_PANEL_WIDTH = 0.4


@dataclass(frozen=True)
class TorsionProfile:
    """Evaluator bundle for one ambient dimension.

    dim: sphere dimension N >= 2 (profile lives on S^N).
    quad_order: Gauss-Legendre order per panel, >= 4.
    """

    dim: int
    quad_order: int = 24
    _rule: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if self.quad_order < 4:
            raise ValueError(f"quad_order must be >= 4, got {self.quad_order}")
        x, w = np.polynomial.legendre.leggauss(self.quad_order)
        object.__setattr__(self, "_rule", (x, w))

    # -- quadrature helpers ------------------------------------------------

    def _integrate(self, fn, a: float, b: float) -> float:
        """Panel Gauss-Legendre of fn over [a, b]."""
        if a == b:
            return 0.0
        x, w = self._rule
        n_panels = max(1, math.ceil(abs(b - a) / _PANEL_WIDTH))
        edges = np.linspace(a, b, n_panels + 1)
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            total += half * float(np.sum(w * fn(mid + half * x)))
        return total

    def _cos_integral(self, theta: float) -> float:
        """int_0^theta cos^{N-1} s ds."""
        return self._integrate(lambda s: np.cos(s) ** (self.dim - 1), 0.0, theta)

    # -- public evaluators -------------------------------------------------

    def u_prime(self, theta: float) -> float:
        """First derivative of the torsion profile; odd, and -u'(t) >= t on (0, pi/2)."""
        theta = float(theta)
        if abs(theta) > _THETA_CUTOFF:
            raise DomainError(f"|theta| = {abs(theta)} too close to pi/2")
        if theta == 0.0:
            return 0.0
        return -self._cos_integral(theta) / math.cos(theta) ** (self.dim - 1)

    def u_second(self, theta: float) -> float:
        """Second derivative via u'' = -1 + (N-1) tan(theta) u'(theta)."""
        theta = float(theta)
        if abs(theta) > _THETA_CUTOFF:
            raise DomainError(f"|theta| = {abs(theta)} too close to pi/2")
        return -1.0 + (self.dim - 1) * math.tan(theta) * self.u_prime(theta)

    def u_diff(self, lam: float, t: float) -> float:
        """u(lam*t) - u(lam) for t in [-1, 1]; the torsion solution on the band.

        Equals -int_{lam t}^{lam} u'(s) ds; zero at |t| = 1, even in t,
        nonnegative.
        """
        lam = float(lam)
        if not 0.0 < lam < math.pi / 2:
            raise DomainError(f"lam must lie in (0, pi/2), got {lam}")
        t = float(t)
        return -self._integrate(np.vectorize(self.u_prime), lam * t, lam)


def u_prime(profile: TorsionProfile, theta: float) -> float:
    return profile.u_prime(theta)


def u_second(profile: TorsionProfile, theta: float) -> float:
    return profile.u_second(theta)


def u_diff(profile: TorsionProfile, lam: float, t: float) -> float:
    return profile.u_diff(lam, t)
