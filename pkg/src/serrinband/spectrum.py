"""Eigenvalue curves sigma_j(lambda) of the linearized Neumann-data map.

The degree-j eigenvalue of the linearization at the straight band of
half-width lambda is

    sigma_j(lambda) = u'(lambda) * ((N-1) tan(lambda) - f_j(lambda)) - 1,

with u the torsion profile and f_j computable by three independent routes:

  * f_riccati -- adaptive Runge-Kutta on the Riccati initial value problem
        f' = -f^2 + (N-1) tan(l) f + gamma_j / cos^2(l),  f(0) = 0;
  * f_heun -- f_j(l) = cos(l) B_j'(sin l)/B_j(sin l) where B_j solves the
        Heun-type equation (1-z^2)^2 B'' - N z (1-z^2) B' - gamma_j B = 0,
        B(0) = 1, B'(0) = 0, summed as a power series in z;
  * b_bvp -- finite differences on the separated boundary value problem for
        b(t) on [0,1], with f_j(l) = b'(1)/l.

The Heun series stays accurate up to lambda -> pi/2 where the Riccati
solution blows up like c_j tan(lambda), so it is the default route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import solve_banded

from .errors import DomainError, SeriesError, SolverError
from .torsion import TorsionProfile

_RICCATI_CUTOFF = math.pi / 2 - 0.02
# largest usable z = sin(lambda); beyond this the series tail cannot be met
_Z_MAX = 1.0 - 1e-9
_SERIES_RTOL = 1e-14
_K_MAX = 4_000_000


def gamma_degree(dim: int, j: int) -> float:
    """Eigenvalue gamma_j = j (N - 2 + j) of -Delta_{S^{N-1}} at degree j."""
    return float(j * (dim - 2 + j))


def c_degree(dim: int, j: int) -> float:
    """Positive root c_j of c^2 - (N-2) c - gamma_j = 0; equals N - 2 + j."""
    g = gamma_degree(dim, j)
    return 0.5 * ((dim - 2) + math.sqrt((dim - 2) ** 2 + 4.0 * g))


class BProfile:
    """Power series of the even Heun-profile B_j(z) = sum a_k z^k.

    Coefficients follow from inserting the series into the differential
    equation:

        a_{m+2} = [(2m(m-1) + N m + gamma_j) a_m - (m-2)(m-3+N) a_{m-2}]
                  / ((m+2)(m+1)),

    with a_0 = 1, a_1 = 0 (so all odd coefficients vanish).  The coefficient
    buffer grows on demand (doubling) until the tail test at the requested z
    passes; near z = 1 this can take several hundred thousand terms, so the
    evaluation itself is vectorized.
    """

    z_max = _Z_MAX  # radius guard; eval refuses z at or beyond this

    def __init__(self, dim: int, degree: int):
        self.dim = dim
        self.degree = degree
        self.gamma = gamma_degree(dim, degree)
        self._a = np.zeros(256)
        self._a[0] = 1.0
        self._a[2] = 0.5 * self.gamma
        self._len = 3  # number of valid coefficients

    def _extend(self, upto: int):
        if upto >= self._a.size:
            buf = np.zeros(max(2 * self._a.size, upto + 1))
            buf[: self._len] = self._a[: self._len]
            self._a = buf
        a, n, g = self._a, self.dim, self.gamma
        for k in range(self._len, upto + 1):
            m = k - 2
            a[k] = ((2 * m * (m - 1) + n * m + g) * a[m] - (m - 2) * (m - 3 + n) * a[m - 2]) / (k * (k - 1))
        self._len = max(self._len, upto + 1)

    def coefficients(self, count: int) -> np.ndarray:
        """First `count` series coefficients (a_0 .. a_{count-1})."""
        if count > self._len:
            self._extend(count - 1)
        return self._a[:count].copy()

    def eval(self, z: float) -> tuple[float, float]:
        """(B_j(z), B_j'(z)) with relative tail below 1e-14.

        Raises SeriesError if z is outside the guarded radius or the tail
        cannot be met within the coefficient cap.
        """
        z = float(z)
        if not 0.0 <= z < _Z_MAX:
            raise SeriesError(f"z = {z} outside series radius guard [0, {_Z_MAX})")
        if z == 0.0:
            return 1.0, 0.0
        # geometric safety factor on the last-two-terms tail estimate
        safety = 1.0 + 2.0 * z * z / (1.0 - z * z)
        k_cur = max(self._len - 1, 16)
        while True:
            if k_cur % 2:
                k_cur += 1
            if k_cur > _K_MAX:
                raise SeriesError(
                    f"series for B_{self.degree} (N={self.dim}) did not meet the tail "
                    f"tolerance at z = {z} within {_K_MAX} terms"
                )
            if k_cur >= self._len:
                self._extend(k_cur)
            a = self._a[: k_cur + 1]
            k = np.arange(k_cur + 1)
            zk = z**k
            B = float(np.dot(a, zk))
            tail = (abs(a[k_cur] * zk[k_cur]) + abs(a[k_cur - 2] * zk[k_cur - 2])) * safety
            if tail < _SERIES_RTOL * abs(B):
                Bp = float(np.dot(k[1:] * a[1:], zk[:-1]))
                break
            k_cur *= 2
        if not (B > 0.0 and Bp > 0.0):
            raise SeriesError(
                f"B_{self.degree} positivity/monotonicity violated at z = {z}: B = {B}, B' = {Bp}"
            )
        return B, Bp


@dataclass
class SpectralCurve:
    """One eigencurve sigma_j(lambda) for fixed dimension and degree."""

    dim: int
    degree: int
    tolerances: tuple[float, float] = (1e-10, 1e-10)  # (atol, rtol) for the Riccati route
    gamma: float = field(init=False)
    c_const: float = field(init=False)

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        self.gamma = gamma_degree(self.dim, self.degree)
        self.c_const = c_degree(self.dim, self.degree)
        self._bprofile = BProfile(self.dim, self.degree)
        self._torsion = TorsionProfile(self.dim)

    # -- f_j routes ----------------------------------------------------------

    def f_riccati(self, lam: float) -> float:
        lam = float(lam)
        if not 0.0 < lam <= _RICCATI_CUTOFF:
            raise DomainError(
                f"Riccati route needs lambda in (0, pi/2 - 0.02], got {lam}; use f_heun near pi/2"
            )
        if self.degree == 0:
            return 0.0
        n, g = self.dim, self.gamma

        def rhs(t, y):
            return (-y[0] * y[0] + (n - 1) * math.tan(t) * y[0] + g / math.cos(t) ** 2,)

        atol, rtol = self.tolerances
        sol = solve_ivp(rhs, (0.0, lam), (0.0,), method="DOP853", rtol=rtol, atol=atol)
        if not sol.success:
            raise SolverError(
                f"Riccati integration failed for (N={n}, j={self.degree}, lambda={lam}): "
                f"{sol.message}; last accepted t = {sol.t[-1]}"
            )
        return float(sol.y[0, -1])

    def f_heun(self, lam: float) -> float:
        lam = float(lam)
        if not 0.0 < lam < math.pi / 2:
            raise DomainError(f"lambda must lie in (0, pi/2), got {lam}")
        if self.degree == 0:
            return 0.0
        B, Bp = self._bprofile.eval(math.sin(lam))
        return math.cos(lam) * Bp / B

    def b_bvp(self, lam: float, n_t: int) -> tuple[np.ndarray, float]:
        """Profile b(t_i) on [0,1] and the one-sided O(h^2) derivative b'(1).

        Second-order finite differences for
            b'' - (N-1) lam tan(lam t) b' - lam^2 gamma_j b / cos^2(lam t) = 0,
            b'(0) = 0, b(1) = 1;   b'(1)/lam converges to f_j(lam).
        """
        lam = float(lam)
        if not 0.0 < lam < math.pi / 2:
            raise DomainError(f"lambda must lie in (0, pi/2), got {lam}")
        if n_t < 16:
            raise ValueError(f"n_t must be >= 16, got {n_t}")
        n, g = self.dim, self.gamma
        h = 1.0 / n_t
        t = np.linspace(0.0, 1.0, n_t + 1)
        p = (n - 1) * lam * np.tan(lam * t)  # coefficient of -b'
        q = lam * lam * g / np.cos(lam * t) ** 2  # coefficient of -b
        # unknowns b_0..b_{n_t-1}; b_{n_t} = 1 Dirichlet
        m = n_t
        lower = np.zeros(m)
        diag = np.zeros(m)
        upper = np.zeros(m)
        rhs = np.zeros(m)
        # i = 0: evenness ghost b_{-1} = b_1 and tan(0) = 0
        diag[0] = -2.0 / h**2 - q[0]
        upper[1] = 2.0 / h**2
        for i in range(1, m):
            lower[i - 1] = 1.0 / h**2 + p[i] / (2 * h)
            diag[i] = -2.0 / h**2 - q[i]
            if i + 1 < m:
                upper[i + 1] = 1.0 / h**2 - p[i] / (2 * h)
            else:
                rhs[i] -= 1.0 / h**2 - p[i] / (2 * h)  # Dirichlet b = 1
        # solve_banded layout: ab[0] superdiag (shifted right), ab[2] subdiag (shifted left)
        ab = np.zeros((3, m))
        ab[0, 1:] = upper[1:]
        ab[1, :] = diag
        ab[2, :-1] = lower[:-1]
        try:
            b = solve_banded((1, 1), ab, rhs)
        except Exception as exc:  # pragma: no cover - paper rules this out for lam < pi/2
            raise SolverError(f"singular b-profile system for lambda = {lam}: {exc}") from exc
        vals = np.append(b, 1.0)
        bprime1 = (3.0 * vals[-1] - 4.0 * vals[-2] + vals[-3]) / (2 * h)
        return vals, float(bprime1)

    # -- the eigencurve ------------------------------------------------------

    def f(self, lam: float, route: str = "heun") -> float:
        if route == "heun":
            return self.f_heun(lam)
        if route == "riccati":
            return self.f_riccati(lam)
        raise ValueError(f"unknown route {route!r}")

    def sigma(self, lam: float, route: str = "heun") -> float:
        lam = float(lam)
        up = self._torsion.u_prime(lam)
        return up * ((self.dim - 1) * math.tan(lam) - self.f(lam, route)) - 1.0

    def bounds(self, lam: float) -> tuple[float, float]:
        """Two-sided bound c_j tan(l) <= f_j(l) <= N sqrt(gamma_j)/cos(l) (j >= 2)."""
        return (self.c_const * math.tan(lam), self.dim * math.sqrt(self.gamma) / math.cos(lam))


def f_riccati(curve: SpectralCurve, lam: float) -> float:
    return curve.f_riccati(lam)


def f_heun(curve: SpectralCurve, lam: float) -> float:
    return curve.f_heun(lam)


def b_bvp(curve: SpectralCurve, lam: float, n_t: int):
    return curve.b_bvp(lam, n_t)


def sigma(curve: SpectralCurve, lam: float, route: str = "heun") -> float:
    return curve.sigma(lam, route)
