"""The set S of positively curved metrics and its conic boundary.

S is cut out of the positive octant by the three quadratic forms

    gamma_i = (x_j - x_k)**2 + 2 x_i (x_j + x_k) - 3 x_i**2 ,

with the diagonal ray removed. Its boundary is the union of the upper
sheets Gamma_i of the cones gamma_i = 0. Cone indices are 1-based
throughout the public API, matching the coordinate names x1, x2, x3.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import CYCLE, DomainError, Point3, PointLike, as_point

__all__ = [
    "BOUNDARY_EPS",
    "DIAGONAL_EPS",
    "Region",
    "RegionClass",
    "ConeChart",
    "gamma",
    "gammas",
    "grad_gamma",
    "boundary_tol",
    "classify_region",
    "psi_phi",
    "mu_of_nu",
    "cone_point",
    "invariant_curve_point",
    "curve_cone_intersection",
    "planar_l",
    "planar_l_alternate",
    "s1_param",
    "s1_tangent",
]

# relative boundary tolerance; gamma is homogeneous of degree 2
BOUNDARY_EPS = 1e-9
DIAGONAL_EPS = 1e-12


def _index(i: int) -> tuple[int, int, int]:
    if i not in (1, 2, 3):
        raise DomainError(f"cone index must be 1, 2 or 3, got {i!r}")
    i0 = i - 1
    j0, k0 = CYCLE[i0]
    return i0, j0, k0


def _gamma_raw(xi: float, xj: float, xk: float) -> float:
    d = xj - xk
    return d * d + 2.0 * xi * (xj + xk) - 3.0 * xi * xi


def gamma(i: int, x: PointLike) -> float:
    i0, j0, k0 = _index(i)
    c = tuple(as_point(x))
    return _gamma_raw(c[i0], c[j0], c[k0])


def gammas(x: PointLike) -> tuple[float, float, float]:
    x1, x2, x3 = as_point(x)
    return (_gamma_raw(x1, x2, x3), _gamma_raw(x2, x3, x1), _gamma_raw(x3, x1, x2))


def grad_gamma(i: int, x: PointLike) -> np.ndarray:
    """Gradient of gamma_i; on Gamma_i it is the inward normal of S."""
    i0, j0, k0 = _index(i)
    c = tuple(as_point(x))
    xi, xj, xk = c[i0], c[j0], c[k0]
    g = np.empty(3)
    g[i0] = 2.0 * (xj + xk) - 6.0 * xi
    g[j0] = 2.0 * (xj - xk) + 2.0 * xi
    g[k0] = -2.0 * (xj - xk) + 2.0 * xi
    return g


class Region(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class RegionClass:
    kind: Region
    gammas: tuple[float, float, float]
    cone: Optional[int] = None
    on_diagonal: bool = False
    tol: float = 0.0

    @property
    def label(self) -> str:
        if self.kind is Region.BOUNDARY:
            return f"boundary{self.cone}"
        if self.on_diagonal:
            return "interior/diagonal"
        return self.kind.value


def boundary_tol(x: PointLike, eps: float = BOUNDARY_EPS) -> float:
    s = as_point(x).scale
    return eps * s * s


def classify_region(x: PointLike, tol: Optional[float] = None) -> RegionClass:
    """Locate ``x`` relative to S.

    ``tol`` defaults to the scale-aware ``1e-9 * (x1 + x2 + x3)**2``. Points
    of the diagonal ray (excluded from S proper) are reported as interior
    with ``on_diagonal=True``. When two forms are within tolerance at once
    (only possible far out along an edge where two cones become tangent to
    the coordinate plane), the boundary index is the one with smaller gamma.
    """
    x = as_point(x)
    if tol is None:
        tol = boundary_tol(x)
    if tol < 0:
        raise DomainError("tol must be non-negative")
    g = gammas(x)
    s = x.scale
    diag = max(abs(x.x1 - x.x2), abs(x.x2 - x.x3), abs(x.x1 - x.x3)) <= DIAGONAL_EPS * s
    if min(g) < -tol:
        cone = int(np.argmin(g)) + 1
        return RegionClass(Region.EXTERIOR, g, cone, False, tol)
    if min(g) <= tol:
        cone = int(np.argmin(g)) + 1
        return RegionClass(Region.BOUNDARY, g, cone, False, tol)
    return RegionClass(Region.INTERIOR, g, None, diag, tol)


def psi_phi(xj: float, xk: float) -> tuple[float, float]:
    """Both roots in x_i of gamma_i = 0; gamma_i > 0 iff 0 < x_i < Phi."""
    if not (xj > 0 and xk > 0):
        raise DomainError("psi_phi needs positive arguments")
    r = 2.0 * math.sqrt(xj * xj - xj * xk + xk * xk)
    return (xj + xk - r) / 3.0, (xj + xk + r) / 3.0


def mu_of_nu(nu: float) -> float:
    return 1.0 - nu + 2.0 * math.sqrt(nu * (nu - 1.0))


@dataclass(frozen=True)
class ConeChart:
    """Ray coordinates on Gamma_i: x_i = nu t, x_j = mu t, x_k = t.

    ``(j, k)`` follows the cyclic order, so cone 3 is charted as
    ``(mu t, t, nu t)`` and cone 2 as ``(t, nu t, mu t)``.
    """

    i: int
    nu: float
    t: float

    def __post_init__(self) -> None:
        _index(self.i)
        if not self.nu > 1.0:
            raise DomainError(f"cone chart needs nu > 1, got {self.nu!r}")
        if not self.t > 0.0:
            raise DomainError(f"cone chart needs t > 0, got {self.t!r}")
        if not self.mu > 0.0:
            raise DomainError(f"mu({self.nu}) is not positive")

    @property
    def mu(self) -> float:
        return mu_of_nu(self.nu)


def cone_point(chart: ConeChart) -> Point3:
    i0, j0, k0 = _index(chart.i)
    c = [0.0, 0.0, 0.0]
    c[i0] = chart.nu * chart.t
    c[j0] = chart.mu * chart.t
    c[k0] = chart.t
    return Point3(*c)


def invariant_curve_point(i: int, c: float, p: float) -> Point3:
    """Point of the invariant curve I_i: x_i = c p**-2, x_j = x_k = p."""
    i0, _, _ = _index(i)
    if not (c > 0 and p > 0):
        raise DomainError("invariant curve needs c > 0 and p > 0")
    v = [p, p, p]
    v[i0] = c / (p * p)
    return Point3(*v)


def curve_cone_intersection(i: int, c: float) -> Point3:
    """The single point where I_i meets Gamma_i, at p = cbrt(6c)/2."""
    if not c > 0:
        raise DomainError("c must be positive")
    t0 = np.cbrt(6.0 * c) / 2.0
    return invariant_curve_point(i, c, float(t0))


def planar_l_alternate(i: int, c: float, x1: float, x2: float) -> float:
    """The sextic l_i in its alternate orientation.

    For i = 1, 2 this is the negative of :func:`planar_l`; the zero sets agree.
    """
    _index(i)
    if not (c > 0 and x1 > 0 and x2 > 0):
        raise DomainError("planar_l needs positive c, x1, x2")
    if i == 1:
        return (3 * x1**4 * x2**2 - 2 * x1**3 * x2**3 - x1**2 * x2**4
                - 2 * c * x1**2 * x2 + 2 * c * x1 * x2**2 - c**2)
    if i == 2:
        return (3 * x1**2 * x2**4 - 2 * x1**3 * x2**3 - x1**4 * x2**2
                - 2 * c * x1 * x2**2 + 2 * c * x1**2 * x2 - c**2)
    return (x1**4 * x2**2 - 2 * x1**3 * x2**3 + x1**2 * x2**4
            + 2 * c * x1**2 * x2 + 2 * c * x1 * x2**2 - 3 * c**2)


def planar_l(i: int, c: float, x1: float, x2: float) -> float:
    """Boundary curve s_i of the projected domain D, as a polynomial l_i.

    Oriented so that ``l_i(x1, x2) == (x1 x2)**2 * gamma_i(x1, x2, c/(x1 x2))``;
    hence D is where all three l_i are positive.
    """
    v = planar_l_alternate(i, c, x1, x2)
    return -v if i in (1, 2) else v


def _s1_u(t: float) -> float:
    return (t - 1.0 + 2.0 * math.sqrt(t * (t - 1.0))) / ((3.0 * t + 1.0) * (t - 1.0) * t)


def s1_param(t: float) -> tuple[float, float]:
    """Explicit parameterization of s_1 on the surface x1 x2 x3 = 1, t > 1."""
    if not t > 1.0:
        raise DomainError(f"s1 parameterization needs t > 1, got {t!r}")
    x2 = _s1_u(t) ** (1.0 / 3.0)
    return t * x2, x2


def s1_tangent(t: float) -> tuple[float, float]:
    """d/dt of :func:`s1_param`, differentiated by hand."""
    if not t > 1.0:
        raise DomainError(f"s1 parameterization needs t > 1, got {t!r}")
    r = math.sqrt(t * (t - 1.0))
    N = t - 1.0 + 2.0 * r
    D = (3.0 * t + 1.0) * (t - 1.0) * t
    dN = 1.0 + (2.0 * t - 1.0) / r
    dD = 9.0 * t * t - 4.0 * t - 1.0
    u = N / D
    du = (dN * D - N * dD) / (D * D)
    x2 = u ** (1.0 / 3.0)
    dx2 = du / (3.0 * u ** (2.0 / 3.0))
    return x2 + t * dx2, dx2
