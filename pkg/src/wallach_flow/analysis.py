"""Qualitative analysis of the symmetric system.

Covers the flux of the field through the cones (the criterion F and its
level sets), the equilibria on each invariant surface with their
eigenstructure, the reduced planar system on ``x1 x2 x3 = 1`` and the
asymptotics used near the degenerate value ``a = 1/4``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np
from scipy import optimize

from .geometry import (
    RegionClass,
    boundary_tol,
    classify_region,
    gamma,
    grad_gamma,
    mu_of_nu,
    s1_param,
    s1_tangent,
)
from .model import (
    THIRD,
    DegenerateError,
    DomainError,
    Point3,
    PointLike,
    SingularPointError,
    _check_a,
    as_point,
    eval_field_symmetric,
    jacobian_symmetric,
)

A_TANGENT = 3.0 / 14.0
A_DEGENERATE = 0.25
NU_TANGENT = 4.0 / 3.0

# |a - 1/4| below this counts as the degenerate value
DEGENERATE_ATOL = 1e-14


def _is_degenerate(a: float) -> bool:
    return abs(a - A_DEGENERATE) <= DEGENERATE_ATOL


# --------------------------------------------------------------------------
# the criterion F = H / G


def g_h_f(nu: float) -> tuple[float, float, float]:
    """Return ``(G(nu), H(nu), F(nu))`` for ``nu >= 1``.

    Both G and H are evaluated in rationalized form once ``nu >= 2``; the
    direct expressions lose about ``log10(nu**2)`` digits to cancellation.
    """
    nu = float(nu)
    if not nu >= 1.0:
        raise DomainError(f"G, H, F need nu >= 1, got {nu!r}")
    r = math.sqrt(nu * (nu - 1.0))
    if nu < 2.0:
        G = (12.0 * nu - 15.0) * r - 12.0 * nu * nu + 21.0 * nu - 5.0
        H = 0.5 * (3.0 * nu - 1.0 - 3.0 * r)
    else:
        G = (24.0 * nu * nu - 15.0 * nu - 25.0) / ((12.0 * nu - 15.0) * r + 12.0 * nu * nu - 21.0 * nu + 5.0)
        H = 0.5 * (3.0 * nu + 1.0) / (3.0 * nu - 1.0 + 3.0 * r)
    return G, H, H / G


def F(nu: float) -> float:
    return g_h_f(nu)[2]


class FluxRegime(enum.Enum):
    ALWAYS_NEGATIVE = "always_negative"
    TANGENT = "tangent_at_4/3"
    SIGN_CHANGE = "sign_change"
    ALWAYS_POSITIVE = "always_positive"


@dataclass(frozen=True)
class FluxSplit:
    """Where the flux through a cone changes sign, in chart values nu."""

    a: float
    regime: FluxRegime
    nu1: Optional[float] = None
    nu2: Optional[float] = None

    def sign_at(self, nu: float) -> int:
        """Predicted sign of the flux at chart value ``nu`` (0 on the roots)."""
        if self.regime is FluxRegime.ALWAYS_NEGATIVE:
            return -1
        if self.regime is FluxRegime.ALWAYS_POSITIVE:
            return 1
        if self.regime is FluxRegime.TANGENT:
            return 0 if nu == NU_TANGENT else -1
        if nu in (self.nu1, self.nu2):
            return 0
        return 1 if self.nu1 < nu < self.nu2 else -1


def nu_roots_formula(a: float) -> tuple[float, float]:
    """Both branches ``(plus, minus)`` of the closed-form roots of F = a.

    For ``a`` in (3/14, 1/4) the common denominator ``48 a (4a - 1)`` is
    negative, so the ``+`` branch is the smaller root.
    """
    a = float(a)
    if not (A_TANGENT <= a < A_DEGENERATE):
        raise DomainError(f"roots of F = a exist only for a in [3/14, 1/4), got {a!r}")
    disc = max(3.0 * (14.0 * a - 3.0) * (10.0 * a - 1.0) ** 3, 0.0)
    base = 3.0 * (2.0 * a - 1.0) * (10.0 * a - 1.0)
    den = 48.0 * a * (4.0 * a - 1.0)
    return (base + math.sqrt(disc)) / den, (base - math.sqrt(disc)) / den


def critical_nus(a: float) -> FluxSplit:
    """Classify the flux sign pattern on the cones for parameter ``a``."""
    a = _check_a(a)
    if abs(14.0 * a - 3.0) <= 1e-14:
        return FluxSplit(a, FluxRegime.TANGENT, NU_TANGENT, NU_TANGENT)
    if a < A_TANGENT:
        return FluxSplit(a, FluxRegime.ALWAYS_NEGATIVE)
    if a >= A_DEGENERATE or _is_degenerate(a):
        return FluxSplit(a, FluxRegime.ALWAYS_POSITIVE)
    _, big = nu_roots_formula(a)
    # the small root from Vieta's product avoids cancellation near a = 1/4
    prod = -((10.0 * a - 1.0) ** 2) / (24.0 * a * (4.0 * a - 1.0))
    return FluxSplit(a, FluxRegime.SIGN_CHANGE, prod / big, big)


def nu_roots_bisect(a: float, xtol: float = 1e-13) -> tuple[float, float]:
    """Independent bisection solve of F(nu) = a on both monotone branches."""
    a = float(a)
    if not (A_TANGENT < a < A_DEGENERATE):
        raise DomainError(f"bisection oracle needs a in (3/14, 1/4), got {a!r}")
    fa = lambda nu: F(nu) - a  # noqa: E731
    nu1 = optimize.bisect(fa, 1.0 + 1e-12, NU_TANGENT, xtol=xtol, maxiter=500)
    hi = 2.0 * NU_TANGENT
    while fa(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise RuntimeError("failed to bracket the large root")
    nu2 = optimize.bisect(fa, NU_TANGENT, hi, xtol=xtol * max(1.0, hi), maxiter=2000)
    return nu1, nu2


@dataclass(frozen=True)
class TangencyPoint:
    """Where trajectories on ``x1 x2 x3 = 1`` touch the boundary curve s_i."""

    cone: int
    nu: float
    mu: float
    t: float
    point: Point3

    @property
    def planar(self) -> tuple[float, float]:
        return (self.point.x1, self.point.x2)


def tangency_points(a: float, i: int = 2) -> tuple[TangencyPoint, ...]:
    """Zero-flux points on cone ``i`` intersected with ``x1 x2 x3 = 1``.

    The chart value ``t = (nu mu)^(-1/3)`` puts the cone point on the unit
    surface. Empty when the flux has a fixed sign.
    """
    from .geometry import ConeChart, cone_point

    split = critical_nus(a)
    if split.regime in (FluxRegime.ALWAYS_NEGATIVE, FluxRegime.ALWAYS_POSITIVE):
        return ()
    nus = (split.nu1,) if split.regime is FluxRegime.TANGENT else (split.nu1, split.nu2)
    out = []
    for nu in nus:
        mu = mu_of_nu(nu)
        t = (nu * mu) ** (-1.0 / 3.0)
        out.append(TangencyPoint(i, nu, mu, t, cone_point(ConeChart(i, nu, t))))
    return tuple(out)


# --------------------------------------------------------------------------
# flux through the cones


def flux(a: float, x: PointLike, i: int, tol: Optional[float] = None) -> float:
    """Inner product of the field with the inward normal of Gamma_i at ``x``.

    This direct dot product is the reference value. ``x`` must lie on the
    cone within ``tol`` (scale-aware by default).
    """
    x = as_point(x)
    if tol is None:
        tol = boundary_tol(x)
    g = gamma(i, x)
    if abs(g) > tol:
        raise DomainError(f"point is not on cone {i}: gamma={g!r} exceeds tol={tol!r}")
    return float(np.dot(eval_field_symmetric(a, x), grad_gamma(i, x)))


def flux_chart(a: float, nu: float, t: float) -> float:
    """Closed form of :func:`flux` at the charted cone point ``(nu, t)``.

    Substituting the chart into the dot product gives
    ``8 t (nu - 1) / mu * (G a - H)``, which has the sign of ``a - F(nu)``.
    """
    G, H, _ = g_h_f(nu)
    return 8.0 * t * (nu - 1.0) / mu_of_nu(nu) * (G * a - H)


def flux_chart_alternate(a: float, nu: float, t: float) -> float:
    """The factorization ``12 t nu (nu - 1)(G a - H)`` in its alternate normalization.

    It has the correct sign and zeros but differs from the dot product by the
    factor ``3 nu mu / 2``; kept for reporting only.
    """
    G, H, _ = g_h_f(nu)
    return 12.0 * t * nu * (nu - 1.0) * (G * a - H)


def flux_polynomial_alternate(a: float, x: PointLike, i: int) -> float:
    """The expanded flux polynomial in its alternate expanded form (mixed degrees)."""
    c = tuple(as_point(x))
    i0 = i - 1
    j0, k0 = ((1, 2), (2, 0), (0, 1))[i0]
    xi, xj, xk = c[i0], c[j0], c[k0]
    br = (
        -4 * a * (-3 * xi**4 + xj**4 + xk**4)
        - 4 * a * (xi**2 * (xj**2 + xk**2) - xj**2 * xk**2)
        + 4 * a * (-xi + xj + xk)
        + 2 * a * (xj**3 * xk + xk**3 * xj - xi * (xj**3 + xk**3) - xi**3 * (xj + xk))
        + xi * (xj**3 + xk**3)
        + xj**3 * xk
        + xk**3 * xj
        + 2 * (xi**2 * (xj**2 + xk**2) - xj**2 * xk**2)
        - 2 * (-2 * xi + xj + xk)
        - 3 * xi**3 * (xj + xk)
    )
    return 2.0 / 3.0 * br


# --------------------------------------------------------------------------
# equilibria


@dataclass(frozen=True)
class EquilibriumSet:
    """The equilibria o0..o3 on the surface ``x1 x2 x3 = c``."""

    a: float
    c: float
    kappa: float
    q: float
    points: tuple[Point3, Point3, Point3, Point3]
    degenerate: bool = False

    @property
    def o0(self) -> Point3:
        return self.points[0]


def equilibria(a: float, c: float = 1.0) -> EquilibriumSet:
    a = _check_a(a)
    if not c > 0:
        raise DomainError("c must be positive")
    kappa = (1.0 - 2.0 * a) / (2.0 * a)
    r = float(np.cbrt(c))
    o0 = Point3(r, r, r)
    if _is_degenerate(a):
        return EquilibriumSet(a, c, 1.0, r, (o0, o0, o0, o0), True)
    if a == 0.5:
        raise DomainError("at a = 1/2 the off-diagonal equilibria leave the octant (kappa = 0)")
    q = float(np.cbrt(c / kappa))
    pts = [o0]
    for i in range(3):
        v = [q, q, q]
        v[i] = q * kappa
        pts.append(Point3(*v))
    return EquilibriumSet(a, c, kappa, q, tuple(pts), False)


def equilibrium_membership(a: float, c: float = 1.0) -> tuple[RegionClass, ...]:
    """Region of each equilibrium; off-diagonal ones follow the sign of 3 - 14a."""
    eq = equilibria(a, c)
    return tuple(classify_region(p) for p in eq.points)


# --------------------------------------------------------------------------
# eigenstructure


@dataclass(frozen=True)
class EigenSpace:
    eigenvalue: float
    basis: np.ndarray  # rows span the eigenspace
    tag: str  # "stable" | "unstable" | "center"


@dataclass(frozen=True)
class EigenStructure:
    a: float
    c: float
    which: int
    point: Point3
    jacobian: np.ndarray
    eigenvalues: tuple[float, float, float]
    eigenvectors: np.ndarray  # columns, matching eigenvalues
    spaces: tuple[EigenSpace, ...]
    predicted: tuple[EigenSpace, ...] = dc_field(default=())

    @property
    def jnorm(self) -> float:
        return float(np.linalg.norm(self.jacobian, 2))

    def space(self, tag: str) -> EigenSpace:
        for s in self.spaces:
            if s.tag == tag:
                return s
        raise KeyError(tag)

    def predicted_residuals(self) -> list[float]:
        """``|J v - lambda v| / |J|`` for every predicted basis vector."""
        out = []
        for sp in self.predicted:
            for v in sp.basis:
                out.append(float(np.linalg.norm(self.jacobian @ v - sp.eigenvalue * v)) / self.jnorm)
        return out

    def pair_residuals(self) -> list[float]:
        out = []
        for k in range(3):
            v = self.eigenvectors[:, k]
            out.append(float(np.linalg.norm(self.jacobian @ v - self.eigenvalues[k] * v)) / self.jnorm)
        return out


def _tag(lam: float, scale: float) -> str:
    if abs(lam) <= 1e-10 * scale:
        return "center"
    return "stable" if lam < 0 else "unstable"


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def predicted_spaces(a: float, c: float, which: int) -> tuple[EigenSpace, ...]:
    """Closed-form eigenspaces at o_which.

    The double eigenvalue at o0 is ``-(4a - 1) / cbrt(c)``, the value obtained
    by differentiating the field; the off-diagonal equilibria carry
    ``(4a - 1)/q`` and ``(4a - 1)(2a + 1)/((2a - 1) q)``.
    """
    eq = equilibria(a, c)
    if eq.degenerate:
        raise DegenerateError("eigenstructure is degenerate at a = 1/4")
    s = abs(4 * a - 1)
    if which == 0:
        lam = -(4.0 * a - 1.0) / float(np.cbrt(c))
        plane = np.array([_unit((-1, 0, 1)), _unit((-1, 1, 0))])
        return (
            EigenSpace(lam, plane, _tag(lam, s)),
            EigenSpace(0.0, np.array([_unit((1, 1, 1))]), "center"),
        )
    if which not in (1, 2, 3):
        raise DomainError("which must be 0, 1, 2 or 3")
    i0 = which - 1
    j0, k0 = ((1, 2), (2, 0), (0, 1))[i0]
    q = eq.q
    lam1 = (4.0 * a - 1.0) / q
    lam2 = (4.0 * a - 1.0) * (2.0 * a + 1.0) / ((2.0 * a - 1.0) * q)
    v1 = np.full(3, a)
    v1[i0] = 2.0 * a - 1.0
    v2 = np.zeros(3)
    v2[j0], v2[k0] = -1.0, 1.0
    vc = np.ones(3)
    vc[i0] = eq.kappa
    return (
        EigenSpace(lam1, np.array([_unit(v1)]), _tag(lam1, s)),
        EigenSpace(lam2, np.array([_unit(v2)]), _tag(lam2, s)),
        EigenSpace(0.0, np.array([_unit(vc)]), "center"),
    )


def eigen_structure(a: float, c: float = 1.0, which: int = 0) -> EigenStructure:
    """Numerically diagonalize the Jacobian at o_which and group eigenspaces.

    Eigenvalues within a relative ``1e-8`` of each other are merged, so the
    double eigenvalue at o0 yields a single two-dimensional space.
    """
    a = _check_a(a)
    eq = equilibria(a, c)
    if eq.degenerate:
        raise DegenerateError("eigenstructure is degenerate at a = 1/4")
    if which not in (0, 1, 2, 3):
        raise DomainError("which must be 0, 1, 2 or 3")
    p = eq.points[which]
    J = jacobian_symmetric(a, p)
    w, V = np.linalg.eig(J)
    if np.max(np.abs(w.imag)) > 1e-10 * np.linalg.norm(J, 2):
        raise RuntimeError("unexpected complex spectrum")
    w = w.real
    V = V.real
    order = np.argsort(w)
    w, V = w[order], V[:, order]
    jn = np.linalg.norm(J, 2)
    # the zero eigenvalue is exact analytically
    w = np.where(np.abs(w) <= 1e-12 * jn, 0.0, w)
    spaces = []
    used = [False] * 3
    for k in range(3):
        if used[k]:
            continue
        group = [k]
        for m in range(k + 1, 3):
            if not used[m] and abs(w[m] - w[k]) <= 1e-8 * jn:
                group.append(m)
        for m in group:
            used[m] = True
        lam = float(np.mean(w[group]))
        # orthonormal basis of the group's span
        Q, _ = np.linalg.qr(V[:, group])
        spaces.append(EigenSpace(lam, Q.T.copy(), _tag(lam, abs(4 * a - 1))))
    return EigenStructure(
        a, c, which, p, J, tuple(float(v) for v in w), V, tuple(spaces), predicted_spaces(a, c, which)
    )


def span_distance(basis_a: np.ndarray, basis_b: np.ndarray) -> float:
    """Sine of the largest principal angle between two row-spans."""
    Qa, _ = np.linalg.qr(np.atleast_2d(basis_a).T)
    Qb, _ = np.linalg.qr(np.atleast_2d(basis_b).T)
    if Qa.shape[1] != Qb.shape[1]:
        return 1.0
    # the residual of projecting one span onto the other gives the sine directly
    # (1 - cos**2 would lose half the digits for nearly equal spans)
    return float(np.linalg.norm(Qb - Qa @ (Qa.T @ Qb), 2))


# --------------------------------------------------------------------------
# planar system on x1 x2 x3 = 1


def _check_planar(x1: float, x2: float) -> None:
    if not (x1 > 0 and x2 > 0 and math.isfinite(x1) and math.isfinite(x2)):
        raise DomainError("planar coordinates must be positive and finite")


def planar_field(a: float, x1: float, x2: float) -> tuple[float, float]:
    """Reduced system on ``x1 x2 x3 = 1`` projected to the ``(x1, x2)`` plane.

    Same normalization as :func:`eval_field_symmetric`.
    """
    a = _check_a(a)
    _check_planar(x1, x2)
    m = 1.0 / (x1 * x1 * x2 * x2)
    f = x1 / x2 + x1 * x1 * x2 - 2.0 * a * x1 * (2.0 * x1 * x1 - x2 * x2 - m) - 2.0
    g = x2 / x1 + x1 * x2 * x2 - 2.0 * a * x2 * (2.0 * x2 * x2 - x1 * x1 - m) - 2.0
    return f * THIRD, g * THIRD


def planar_jacobian(a: float, x1: float, x2: float) -> np.ndarray:
    """Jacobian of :func:`planar_field` via the chain rule through x3 = 1/(x1 x2)."""
    _check_planar(x1, x2)
    x3 = 1.0 / (x1 * x2)
    J = jacobian_symmetric(a, (x1, x2, x3))
    d3 = (-x3 / x1, -x3 / x2)
    out = np.empty((2, 2))
    for r in range(2):
        for m in range(2):
            out[r, m] = J[r, m] + J[r, 2] * d3[m]
    return out


def planar_jacobian_fd(a: float, x1: float, x2: float, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of :func:`planar_field` (testing oracle)."""
    out = np.empty((2, 2))
    for m, (e1, e2) in enumerate(((1.0, 0.0), (0.0, 1.0))):
        hp = h * (x1 if m == 0 else x2)
        fp = planar_field(a, x1 + e1 * hp, x2 + e2 * hp)
        fm = planar_field(a, x1 - e1 * hp, x2 - e2 * hp)
        out[0, m] = (fp[0] - fm[0]) / (2 * hp)
        out[1, m] = (fp[1] - fm[1]) / (2 * hp)
    return out


def planar_equilibria(a: float) -> tuple[tuple[float, float], ...]:
    """Projections of o0..o3 at c = 1: (1,1), (q kappa, q), (q, q kappa), (q, q)."""
    eq = equilibria(a, 1.0)
    return tuple((p.x1, p.x2) for p in eq.points)


@dataclass(frozen=True)
class PlanarClassification:
    a: float
    which: int
    point: tuple[float, float]
    delta: float
    rho: float
    sigma: float
    kind: str  # "node" | "saddle"
    stability: str  # "stable" | "unstable" | "saddle"
    measured_delta: float
    measured_rho: float

    @property
    def measured_sigma(self) -> float:
        return self.measured_rho**2 - 4.0 * self.measured_delta


def planar_classification(a: float, which: int = 0) -> PlanarClassification:
    """Determinant, trace and discriminant of the linearization at a
    planar equilibrium, in closed form and measured from the Jacobian.

    For the saddles only the determinant has a classical closed form; the
    closed-form trace is taken as the sum of the two surface eigenvalues.
    """
    a = _check_a(a)
    if _is_degenerate(a):
        raise DegenerateError("delta = rho = sigma = 0 at a = 1/4")
    if which not in (0, 1, 2, 3):
        raise DomainError("which must be 0, 1, 2 or 3")
    pts = planar_equilibria(a)
    x1, x2 = pts[which]
    Jt = planar_jacobian(a, x1, x2)
    md, mr = float(np.linalg.det(Jt)), float(np.trace(Jt))
    if which == 0:
        delta = (4 * a - 1) ** 2
        rho = -2 * (4 * a - 1)
        sigma = 0.0
        stab = "unstable" if a < 0.25 else "stable"
        return PlanarClassification(a, 0, (x1, x2), delta, rho, sigma, "node", stab, md, mr)
    q = equilibria(a, 1.0).q
    delta = (2 * a + 1) * (4 * a - 1) ** 2 / ((2 * a - 1) * q * q)
    rho = (4 * a - 1) / q * (1.0 + (2 * a + 1) / (2 * a - 1))
    sigma = rho * rho - 4 * delta
    return PlanarClassification(a, which, (x1, x2), delta, rho, sigma, "saddle", "saddle", md, mr)


# --------------------------------------------------------------------------
# the boundary curve s_1 at a = 3/14


def _s1_vectors(t: float, a: float) -> tuple[tuple[float, float], tuple[float, float]]:
    if abs(t - NU_TANGENT) <= 1e-12:
        raise SingularPointError("the equilibrium (q kappa, q) sits on s_1 at t = 4/3")
    x1, x2 = s1_param(t)
    V = planar_field(a, x1, x2)
    tau = s1_tangent(t)
    return V, tau


def slope_gap(t: float, a: float = A_TANGENT) -> float:
    """Slope of the tangent of s_1 minus slope of the planar field there."""
    V, tau = _s1_vectors(t, a)
    return tau[1] / tau[0] - V[1] / V[0]


def angle_alpha(t: float, a: float = A_TANGENT) -> float:
    """Angle in radians between the planar field and the tangent of s_1.

    Computed as ``atan2(|V x tau|, V . tau)``, which stays accurate near 0
    and pi where the arccos form loses half its digits.
    """
    V, tau = _s1_vectors(t, a)
    cross = V[0] * tau[1] - V[1] * tau[0]
    dot = V[0] * tau[0] + V[1] * tau[1]
    return math.atan2(abs(cross), dot)


@dataclass(frozen=True)
class AngleExtremum:
    t: float
    alpha: float

    @property
    def degrees(self) -> float:
        return math.degrees(self.alpha)


def angle_extremum(lo: float, hi: float, maximize: bool, a: float = A_TANGENT, n: int = 4000) -> AngleExtremum:
    """Extremum of ``angle_alpha`` on ``(lo, hi)``: log-spaced scan then Brent polish."""
    offs = np.geomspace(1e-9, 1.0, n // 2)
    ts = np.unique(np.concatenate([lo + (hi - lo) * offs, hi - (hi - lo) * offs]))
    ts = ts[(ts > lo) & (ts < hi)]
    sgn = -1.0 if maximize else 1.0
    vals = np.array([sgn * angle_alpha(float(t), a) for t in ts])
    k = int(np.argmin(vals))
    left = float(ts[max(k - 1, 0)])
    right = float(ts[min(k + 1, len(ts) - 1)])
    if right > left:
        res = optimize.minimize_scalar(lambda t: sgn * angle_alpha(t, a), bounds=(left, right),
                                       method="bounded", options={"xatol": 1e-12})
        if res.fun <= vals[k]:
            return AngleExtremum(float(res.x), float(sgn * res.fun))
    return AngleExtremum(float(ts[k]), float(sgn * vals[k]))


def angle_supremum_beyond(a: float = A_TANGENT, t_max: float = 1e6) -> AngleExtremum:
    """Largest angle on ``(4/3, inf)``; the angle tends to 0 at both ends."""
    return angle_extremum(NU_TANGENT, t_max, maximize=True, a=a)


def angle_minimum_below(a: float = A_TANGENT) -> AngleExtremum:
    """Smallest angle on ``(1, 4/3)``; the angle tends to pi at both ends."""
    return angle_extremum(1.0, NU_TANGENT, maximize=False, a=a)


# --------------------------------------------------------------------------
# asymptotics near the edge x = 1 in the chart x = x3/x1, y = x3/x2


def asymptotic_exponent(a: float) -> float:
    return 0.5 - 1.0 / (4.0 * a)


def asymptotic_solution(a: float, C: float, x: float) -> float:
    """Power law ``C (x - 1)**(1/2 - 1/(4a))`` approximating orbits as x -> 1+."""
    if not x > 1.0:
        raise DomainError("asymptotic solution needs x > 1")
    if not C > 0:
        raise DomainError("C must be positive")
    return C * (x - 1.0) ** asymptotic_exponent(a)


def calibrate_constant(a: float, x0: float, y0: float) -> float:
    """Constant C making the power law pass through ``(x0, y0)``."""
    if not (x0 > 1.0 and y0 > 0):
        raise DomainError("calibration needs x0 > 1 and y0 > 0")
    return y0 / (x0 - 1.0) ** asymptotic_exponent(a)


def boundary_asymptote(x: float) -> float:
    """The boundary curve s_3 written as ``y = y_b(x)`` in the edge chart."""
    if abs(x - 1.0) == 0.0:
        raise SingularPointError("y_b has a pole at x = 1")
    if not x > 1.0:
        raise DomainError("y_b is defined for x > 1")
    return x * (x - 1.0 + 2.0 * math.sqrt(x * (x - 1.0))) / ((3.0 * x + 1.0) * (x - 1.0))


def asymptote_boundary_intersection(a: float, C: float, lo: float = 1.0 + 1e-14, hi: float = 1.0 + 1e-3) -> tuple[float, float]:
    """Point where the power law meets ``y_b`` (brentq on the log difference)."""
    h = lambda x: math.log(asymptotic_solution(a, C, x)) - math.log(boundary_asymptote(x))  # noqa: E731
    if h(lo) * h(hi) > 0:
        raise DomainError("no sign change of y_a - y_b on the bracket")
    x = optimize.brentq(h, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    return x, boundary_asymptote(x)
