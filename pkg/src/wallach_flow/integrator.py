"""Explicit Runge-Kutta integrators on plain float tuples.

The adaptive solver is the Dormand-Prince 5(4) pair with PI step-size
control and the standard fourth-order continuous extension, so crossings
between accepted steps can be located without re-integrating. The fixed-step
classical RK4 scheme is kept for reproducing mesh-dependent results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

Vec = tuple  # tuple[float, ...]
Rhs = Callable[[float, Vec], Vec]

__all__ = ["StepFailure", "DenseStep", "Dopri5", "rk4_fixed"]


class StepFailure(RuntimeError):
    """The step-size controller could not meet the tolerance."""


# Dormand-Prince tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
A71, A73, A74, A75, A76 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40
D1 = -12715105075 / 11282082432
D3 = 87487479700 / 32700410799
D4 = -10690763975 / 1880347072
D5 = 701980252875 / 199316789632
D6 = -1453857185 / 822651844
D7 = 69997945 / 29380423


@dataclass(frozen=True)
class DenseStep:
    """One accepted step with its continuous extension."""

    t0: float
    t1: float
    y0: Vec
    y1: Vec
    r2: Vec
    r3: Vec
    r4: Vec
    r5: Vec

    def __call__(self, t: float) -> Vec:
        h = self.t1 - self.t0
        th = (t - self.t0) / h
        th1 = 1.0 - th
        return tuple(
            a + th * (b + th1 * (c + th * (d + th1 * e)))
            for a, b, c, d, e in zip(self.y0, self.r2, self.r3, self.r4, self.r5)
        )


class Dopri5:
    """Adaptive Dormand-Prince integrator.

    ``rhs(t, y)`` must return a tuple of floats. After each accepted step,
    ``on_step(step)`` is called; returning ``True`` stops the integration.
    """

    def __init__(
        self,
        rhs: Rhs,
        rtol: float = 1e-10,
        atol: float = 1e-12,
        max_step: float = math.inf,
        safety: float = 0.9,
        beta: float = 0.04,
        fac_min: float = 0.2,
        fac_max: float = 10.0,
        max_steps: int = 1_000_000,
    ):
        if not (rtol > 0 and atol > 0):
            raise ValueError("tolerances must be positive")
        if not max_step > 0:
            raise ValueError("max_step must be positive")
        self.rhs = rhs
        self.rtol = rtol
        self.atol = atol
        self.max_step = max_step
        self.safety = safety
        self.beta = beta
        self.expo = 0.2 - 0.75 * beta
        self.fac_min = fac_min
        self.fac_max = fac_max
        self.max_steps = max_steps
        self.n_eval = 0
        self.n_accept = 0
        self.n_reject = 0

    def _f(self, t: float, y: Vec) -> Vec:
        self.n_eval += 1
        return self.rhs(t, y)

    def _initial_step(self, t0: float, y0: Vec, f0: Vec, direction: float) -> float:
        sk = [self.atol + self.rtol * abs(v) for v in y0]
        n = len(y0)
        d0 = math.sqrt(sum((v / s) ** 2 for v, s in zip(y0, sk)) / n)
        d1 = math.sqrt(sum((v / s) ** 2 for v, s in zip(f0, sk)) / n)
        h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
        h = min(h, self.max_step)
        y1 = tuple(a + direction * h * b for a, b in zip(y0, f0))
        f1 = self._f(t0 + direction * h, y1)
        d2 = math.sqrt(sum(((a - b) / s) ** 2 for a, b, s in zip(f1, f0, sk)) / n) / h
        m = max(d1, d2)
        h1 = max(1e-6, h * 1e-3) if m <= 1e-15 else (0.01 / m) ** 0.2
        return min(100 * h, h1, self.max_step)

    def solve(
        self,
        t0: float,
        y0: Sequence[float],
        t_end: float,
        on_step: Optional[Callable[[DenseStep], bool]] = None,
        h0: Optional[float] = None,
    ) -> tuple[float, Vec]:
        """Integrate from ``t0`` towards ``t_end``; return the final ``(t, y)``."""
        y = tuple(float(v) for v in y0)
        t = float(t0)
        direction = 1.0 if t_end >= t0 else -1.0
        f = self._f(t, y)
        h = abs(h0) if h0 else self._initial_step(t, y, f, direction)
        facold = 1e-4
        rtol, atol = self.rtol, self.atol
        rejected_last = False
        steps = 0
        while direction * (t_end - t) > 0:
            steps += 1
            if steps > self.max_steps:
                raise StepFailure(f"exceeded {self.max_steps} steps at t={t!r}")
            h = min(h, self.max_step)
            last = False
            if direction * (t + direction * h - t_end) >= 0:
                h = abs(t_end - t)
                last = True
            if h <= 1e-14 * max(1.0, abs(t)):
                raise StepFailure(f"step size underflow at t={t!r}")
            hs = direction * h
            k1 = f
            y2 = tuple(a + hs * A21 * b for a, b in zip(y, k1))
            k2 = self._f(t + C2 * hs, y2)
            y3 = tuple(a + hs * (A31 * b + A32 * c) for a, b, c in zip(y, k1, k2))
            k3 = self._f(t + C3 * hs, y3)
            y4 = tuple(a + hs * (A41 * b + A42 * c + A43 * d) for a, b, c, d in zip(y, k1, k2, k3))
            k4 = self._f(t + C4 * hs, y4)
            y5 = tuple(
                a + hs * (A51 * b + A52 * c + A53 * d + A54 * e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)
            )
            k5 = self._f(t + C5 * hs, y5)
            y6 = tuple(
                a + hs * (A61 * b + A62 * c + A63 * d + A64 * e + A65 * g)
                for a, b, c, d, e, g in zip(y, k1, k2, k3, k4, k5)
            )
            k6 = self._f(t + hs, y6)
            y1 = tuple(
                a + hs * (A71 * b + A73 * d + A74 * e + A75 * g + A76 * p)
                for a, b, d, e, g, p in zip(y, k1, k3, k4, k5, k6)
            )
            t1 = t + hs
            k7 = self._f(t1, y1)
            err2 = 0.0
            for a, a1, b, d, e, g, p, r in zip(y, y1, k1, k3, k4, k5, k6, k7):
                ev = hs * (E1 * b + E3 * d + E4 * e + E5 * g + E6 * p + E7 * r)
                sk = atol + rtol * max(abs(a), abs(a1))
                err2 += (ev / sk) ** 2
            err = math.sqrt(err2 / len(y))
            if not math.isfinite(err):
                err = 1e10
            fac11 = err**self.expo if err > 0 else 0.0
            fac = fac11 / facold**self.beta
            fac = max(1.0 / self.fac_max, min(1.0 / self.fac_min, fac / self.safety))
            hnew = h / fac
            if err <= 1.0:
                facold = max(err, 1e-4)
                self.n_accept += 1
                r2 = tuple(b - a for a, b in zip(y, y1))
                r3 = tuple(hs * b - c for b, c in zip(k1, r2))
                r4 = tuple(c - hs * r - d for c, r, d in zip(r2, k7, r3))
                r5 = tuple(
                    hs * (D1 * b + D3 * d + D4 * e + D5 * g + D6 * p + D7 * r)
                    for b, d, e, g, p, r in zip(k1, k3, k4, k5, k6, k7)
                )
                step = DenseStep(t, t1, y, y1, r2, r3, r4, r5)
                t, y, f = t1, y1, k7
                if rejected_last:
                    hnew = min(hnew, h)
                rejected_last = False
                h = hnew
                if on_step is not None and on_step(step):
                    return t, y
                if last:
                    break
            else:
                self.n_reject += 1
                rejected_last = True
                h = h / min(1.0 / self.fac_min, fac11 / self.safety)
        return t, y


def rk4_fixed(f: Callable[[float, float], float], x0: float, y0: float, h: float, n: int) -> list[float]:
    """Classical RK4 for a scalar ODE ``dy/dx = f(x, y)`` on the mesh
    ``x_i = x0 + i h``; returns ``[y_0, ..., y_n]``."""
    ys = [float(y0)]
    x, y = float(x0), float(y0)
    for i in range(n):
        k1 = f(x, y)
        k2 = f(x + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(x + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(x + h, y + h * k3)
        y = y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        x = x0 + (i + 1) * h
        ys.append(y)
    return ys
