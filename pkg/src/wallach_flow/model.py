"""Vector fields, first integral and Jacobians of the normalized Ricci flow
on generalized Wallach spaces.

The phase space is the open positive octant. A point ``(x1, x2, x3)`` holds
the three parameters of an invariant metric. Two parameterizations of the
system are supported: the general one with three constants ``(a1, a2, a3)``
and the symmetric one with ``a1 = a2 = a3 = a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

__all__ = [
    "DomainError",
    "DegenerateError",
    "SingularPointError",
    "Point3",
    "General",
    "Symmetric",
    "SystemParams",
    "as_point",
    "eval_field_general",
    "eval_field_symmetric",
    "field",
    "volume_integral",
    "jacobian",
    "jacobian_symmetric",
    "jacobian_general",
    "COORD_FLOOR",
]

# coordinates must exceed this to be admissible (underflow guard)
COORD_FLOOR = 1e-300

# The symmetric field is the restriction a1 = a2 = a3 = a of the general one.
# Written with the common denominator x1 x2 x3, that restriction equals one
# third of the bracket  x1/x2 + x1/x3 - 2a(2x1^2 - x2^2 - x3^2)/(x2 x3) - 2.
THIRD = 1.0 / 3.0

# cyclic completion of an index: i -> (j, k), zero based
CYCLE = ((1, 2), (2, 0), (0, 1))


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class DegenerateError(DomainError):
    """Raised at a = 1/4, where all non-trivial equilibria merge."""


class SingularPointError(DomainError):
    """Raised when a quantity has a pole (0/0) at the requested argument."""


@dataclass(frozen=True)
class Point3:
    """A point of the open positive octant."""

    x1: float
    x2: float
    x3: float

    def __post_init__(self) -> None:
        for name in ("x1", "x2", "x3"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > COORD_FLOOR):
                raise DomainError(f"{name}={v!r} is not a positive finite coordinate")

    def __iter__(self) -> Iterator[float]:
        yield self.x1
        yield self.x2
        yield self.x3

    def __getitem__(self, i: int) -> float:
        return (self.x1, self.x2, self.x3)[i]

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    @property
    def scale(self) -> float:
        return self.x1 + self.x2 + self.x3

    def product(self) -> float:
        return self.x1 * self.x2 * self.x3

    def permuted(self, perm: Sequence[int]) -> "Point3":
        """Return the point whose k-th coordinate is ``self[perm[k]]``."""
        c = tuple(self)
        return Point3(*(c[p] for p in perm))


PointLike = Union[Point3, Sequence[float], np.ndarray]


def as_point(x: PointLike) -> Point3:
    if isinstance(x, Point3):
        return x
    x1, x2, x3 = (float(v) for v in x)
    return Point3(x1, x2, x3)


def _check_a(a: float, name: str = "a") -> float:
    a = float(a)
    if not (0.0 < a <= 0.5):
        raise DomainError(f"{name}={a!r} outside the admissible range (0, 1/2]")
    return a


@dataclass(frozen=True)
class Symmetric:
    """The case a1 = a2 = a3 = a."""

    a: float

    def __post_init__(self) -> None:
        _check_a(self.a)

    @property
    def triple(self) -> tuple[float, float, float]:
        return (self.a, self.a, self.a)


@dataclass(frozen=True)
class General:
    a1: float
    a2: float
    a3: float

    def __post_init__(self) -> None:
        _check_a(self.a1, "a1")
        _check_a(self.a2, "a2")
        _check_a(self.a3, "a3")

    @property
    def triple(self) -> tuple[float, float, float]:
        return (self.a1, self.a2, self.a3)


SystemParams = Union[General, Symmetric]


def _params(p: Union[SystemParams, float]) -> SystemParams:
    if isinstance(p, (General, Symmetric)):
        return p
    return Symmetric(float(p))


# --------------------------------------------------------------------------
# vector fields


def _sym_bracket(a: float, x1: float, x2: float, x3: float) -> tuple[float, float, float]:
    s1, s2, s3 = x1 * x1, x2 * x2, x3 * x3
    f1 = x1 / x2 + x1 / x3 - 2.0 * a * (2.0 * s1 - s2 - s3) / (x2 * x3) - 2.0
    f2 = x2 / x1 + x2 / x3 - 2.0 * a * (2.0 * s2 - s1 - s3) / (x1 * x3) - 2.0
    f3 = x3 / x1 + x3 / x2 - 2.0 * a * (2.0 * s3 - s1 - s2) / (x1 * x2) - 2.0
    return f1, f2, f3


def _sym_components(a: float, x1: float, x2: float, x3: float) -> tuple[float, float, float]:
    """Symmetric field on plain floats; the hot path of every integration."""
    f1, f2, f3 = _sym_bracket(a, x1, x2, x3)
    return f1 * THIRD, f2 * THIRD, f3 * THIRD


def eval_field_symmetric(a: float, x: PointLike) -> np.ndarray:
    """Right-hand side of the symmetric system at ``x``.

    Normalized so that ``eval_field_general(General(a, a, a), x)`` agrees with
    it; the frequently quoted bracket form without the factor 1/3 is the same
    flow with time rescaled by 3 (identical orbits, crossings and angles).
    """
    a = _check_a(a)
    x = as_point(x)
    return np.array(_sym_components(a, x.x1, x.x2, x.x3))


def eval_field_general(p: General, x: PointLike) -> np.ndarray:
    """Right-hand side of the three-parameter system at ``x``.

    The normalizing term ``B`` is evaluated exactly in its expanded form,
    without algebraic simplification.
    """
    if not isinstance(p, General):
        raise TypeError("eval_field_general expects General parameters")
    a1, a2, a3 = p.triple
    x1, x2, x3 = as_point(x)
    B = (
        1.0 / (a1 * x1)
        + 1.0 / (a2 * x2)
        + 1.0 / (a3 * x3)
        - (x1 / (x2 * x3) + x2 / (x1 * x3) + x3 / (x1 * x2))
    ) / (1.0 / a1 + 1.0 / a2 + 1.0 / a3)
    f1 = -1.0 - a1 * x1 * (x1 / (x2 * x3) - x2 / (x1 * x3) - x3 / (x1 * x2)) + x1 * B
    f2 = -1.0 - a2 * x2 * (x2 / (x1 * x3) - x3 / (x1 * x2) - x1 / (x2 * x3)) + x2 * B
    f3 = -1.0 - a3 * x3 * (x3 / (x1 * x2) - x1 / (x2 * x3) - x2 / (x1 * x3)) + x3 * B
    return np.array([f1, f2, f3])


def field(p: Union[SystemParams, float], x: PointLike) -> np.ndarray:
    """Dispatch on the parameter variant; a bare float means ``Symmetric``."""
    p = _params(p)
    if isinstance(p, Symmetric):
        return eval_field_symmetric(p.a, x)
    return eval_field_general(p, x)


def volume_integral(p: Union[SystemParams, float], x: PointLike) -> float:
    """The first integral of the flow.

    For ``General`` this is ``x1**(1/a1) * x2**(1/a2) * x3**(1/a3)``. For
    ``Symmetric`` the monotone reparameterization ``x1*x2*x3`` is returned,
    whose level sets are the invariant surfaces ``x1 x2 x3 = c``.
    """
    p = _params(p)
    x = as_point(x)
    if isinstance(p, Symmetric):
        return x.x1 * x.x2 * x.x3
    a1, a2, a3 = p.triple
    # log form avoids overflow for large exponents 1/a_i
    return math.exp(math.log(x.x1) / a1 + math.log(x.x2) / a2 + math.log(x.x3) / a3)


# --------------------------------------------------------------------------
# Jacobians


def jacobian_symmetric(a: float, x: PointLike) -> np.ndarray:
    a = _check_a(a)
    c = tuple(as_point(x))
    J = np.empty((3, 3))
    for i in range(3):
        j, k = CYCLE[i]
        xi, xj, xk = c[i], c[j], c[k]
        J[i, i] = 1.0 / xj + 1.0 / xk - 8.0 * a * xi / (xj * xk)
        J[i, j] = -xi / (xj * xj) + 2.0 * a * (2.0 * xi * xi + xj * xj - xk * xk) / (xj * xj * xk)
        J[i, k] = -xi / (xk * xk) + 2.0 * a * (2.0 * xi * xi + xk * xk - xj * xj) / (xk * xk * xj)
    return J * THIRD


def jacobian_general(p: General, x: PointLike) -> np.ndarray:
    a = p.triple
    c = as_point(x).as_array()
    P = c[0] * c[1] * c[2]
    sq = c * c
    A = sum(1.0 / ai for ai in a)
    B = (sum(1.0 / (a[l] * c[l]) for l in range(3)) - sq.sum() / P) / A
    # dB/dx_m
    dB = np.array(
        [(-1.0 / (a[m] * c[m] ** 2) - (2.0 * c[m] / P - sq.sum() / (P * c[m]))) / A for m in range(3)]
    )
    J = np.empty((3, 3))
    for i in range(3):
        j, k = CYCLE[i]
        T = (sq[i] - sq[j] - sq[k]) / P
        for m in range(3):
            sign = 1.0 if m == i else -1.0
            dT = 2.0 * sign * c[m] / P - T / c[m]
            J[i, m] = -a[i] * ((T if m == i else 0.0) + c[i] * dT) + (B if m == i else 0.0) + c[i] * dB[m]
    return J


def jacobian(p: Union[SystemParams, float], x: PointLike) -> np.ndarray:
    """Analytic Jacobian of the field at ``x``."""
    p = _params(p)
    if isinstance(p, Symmetric):
        return jacobian_symmetric(p.a, x)
    return jacobian_general(p, x)
