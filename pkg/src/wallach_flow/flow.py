"""Trajectories of the symmetric system and their crossings of the cones.

Integration runs in the original coordinates with an adaptive
Dormand-Prince pair. Generic trajectories of this flow escape to infinity in
finite time: one coordinate tends to zero while the other two grow with
ratio tending to one. Close to that edge the forms gamma_i, normalized by
the squared scale, drop below double precision, so the side of the cone a
trajectory ends on cannot be read off in the original coordinates. Once the
smallest-to-largest coordinate ratio falls below ``edge_ratio`` the
integration therefore switches to an exact projective chart of the edge,

    w = X3/X1 - 1,   y = X3/X2,   (xi, eta) = (log w, log y),

in which both the dynamics and the forms gamma_i are evaluated without
cancellation. Time is tracked alongside, so events keep physical times.
"""

from __future__ import annotations

import bisect as _bisect
import enum
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

import numpy as np

from .analysis import boundary_asymptote, calibrate_constant, asymptote_boundary_intersection, planar_field
from .geometry import Region
from .integrator import DenseStep, Dopri5, StepFailure, rk4_fixed
from .model import (
    CYCLE,
    DomainError,
    Point3,
    PointLike,
    _check_a,
    _sym_components,
    as_point,
)

__all__ = [
    "Termination",
    "Direction",
    "IntegratorOptions",
    "CrossingEvent",
    "Trajectory",
    "integrate",
    "integrate_planar",
    "detect_crossings",
    "edge_chart_rhs",
    "edge_chart_gamma_logratios",
    "edge_chart_slope",
    "edge_chart_slope_direct",
    "IvpResult",
    "reproduce_ivp_026",
    "StepFailure",
]


class Termination(enum.Enum):
    HORIZON_REACHED = "HorizonReached"
    COORDINATE_UNDERFLOW = "CoordinateUnderflow"
    EQUILIBRIUM_CONVERGED = "EquilibriumConverged"
    # the edge chart ran out of budget before the cone sides settled
    EDGE_UNRESOLVED = "EdgeUnresolved"


class Direction(enum.Enum):
    LEAVING = "LeavingS"
    ENTERING = "EnteringS"


@dataclass(frozen=True)
class IntegratorOptions:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 5.0
    horizon: float = 200.0
    min_coordinate: float = 1e-12
    # hysteresis band for side classification, relative to scale**2
    boundary_eps: float = 1e-9
    # |f| below this counts as an equilibrium
    equilibrium_tol: float = 1e-11
    # interior dense-output checkpoints per accepted step
    checkpoints: int = 3
    edge_tail: bool = True
    edge_ratio: float = 1e-2
    edge_w: float = 1e-6
    edge_s_max: float = 5000.0
    # time tolerance for event refinement
    event_tol: float = 1e-12
    # |d gamma/dt| below this (times scale) marks a graze
    graze_rate: float = 1e-10

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        if not self.horizon > 0:
            raise DomainError("horizon must be positive")
        if not self.max_step > 0:
            raise DomainError("max_step must be positive")
        if not self.min_coordinate > 0:
            raise DomainError("min_coordinate must be positive")
        if self.checkpoints < 0:
            raise DomainError("checkpoints must be non-negative")

    def replace(self, **kw) -> "IntegratorOptions":
        d = dict(self.__dict__)
        d.update(kw)
        return IntegratorOptions(**d)


@dataclass(frozen=True)
class CrossingEvent:
    time: float
    point: Point3
    cone: int
    direction: Direction
    refined: bool
    # d gamma_cone / dt along the field at the event (chart rate on the edge)
    rate: float = float("nan")
    chart: str = "xyz"


@dataclass
class Trajectory:
    a: float
    c: float
    times: list
    points: list  # Point3 per sample
    events: list
    volume_drift: float
    terminated_reason: Termination
    final_side: int  # +1 interior, -1 exterior, 0 undecided
    edge_start: Optional[float] = None
    n_steps: int = 0
    planar: bool = False

    @property
    def samples(self) -> list:
        return list(zip(self.times, self.points))

    @property
    def crossings(self) -> list:
        return [e for e in self.events if e.refined]

    @property
    def grazes(self) -> list:
        return [e for e in self.events if not e.refined]

    @property
    def n_leaving(self) -> int:
        return sum(1 for e in self.crossings if e.direction is Direction.LEAVING)

    @property
    def n_entering(self) -> int:
        return sum(1 for e in self.crossings if e.direction is Direction.ENTERING)

    @property
    def final_point(self) -> Point3:
        return self.points[-1]

    @property
    def final_region(self) -> Region:
        if self.final_side > 0:
            return Region.INTERIOR
        if self.final_side < 0:
            return Region.EXTERIOR
        return Region.BOUNDARY

    def as_array(self) -> np.ndarray:
        return np.array([[t, p.x1, p.x2, p.x3] for t, p in zip(self.times, self.points)])


# --------------------------------------------------------------------------
# side tracking with hysteresis


def _side(vals: Sequence[float], eps: float) -> int:
    if min(vals) < -eps:
        return -1
    if min(vals) > eps:
        return 1
    return 0


class _Tracker:
    """Turns a stream of (time, normalized gammas) into crossing events.

    ``refine(cone, t_lo, t_hi)`` returns ``(t, point, rate)`` for the root of
    the cone's form inside the bracket; ``point_at(t)`` reconstructs a point.
    """

    def __init__(self, eps: float, cone_map: Sequence[int] = (1, 2, 3)):
        self.eps = eps
        self.cone_map = tuple(cone_map)
        self.side = 0
        self.t_dec: Optional[float] = None
        self.v_dec: Optional[tuple] = None
        self.band: list = []  # (t, vals) samples since the last decisive one
        self.events: list = []
        # maps the tracker's time variable to physical time
        self.clock: Callable[[float], float] = lambda t: t

    def feed(self, t: float, vals: tuple, refine, point_at, graze_rate: float, chart: str) -> None:
        s = _side(vals, self.eps)
        if s == 0:
            if self.side != 0:
                self.band.append((t, vals))
            return
        if self.side == 0:
            self.side, self.t_dec, self.v_dec, self.band = s, t, vals, []
            return
        if s == self.side:
            if self.band:
                # excursion into the band and back: a graze
                tb, vb = min(self.band, key=lambda p: min(abs(v) for v in p[1]))
                k = int(np.argmin([abs(v) for v in vb]))
                d = Direction.LEAVING if s > 0 else Direction.ENTERING
                self.events.append(
                    CrossingEvent(self.clock(tb), point_at(tb), self.cone_map[k], d, False, float("nan"), chart)
                )
            self.t_dec, self.v_dec, self.band = t, vals, []
            return
        # genuine change of side
        if s < 0:
            k = int(np.argmin(vals))
            d = Direction.LEAVING
        else:
            k = int(np.argmin(self.v_dec))
            d = Direction.ENTERING
        te, pe, rate = refine(k, self.t_dec, t)
        refined = abs(rate) >= graze_rate
        if refined and (rate < 0) != (d is Direction.LEAVING):
            refined = False
        self.events.append(CrossingEvent(te, pe, self.cone_map[k], d, refined, rate, chart))
        self.side, self.t_dec, self.v_dec, self.band = s, t, vals, []


def _bisect_root(g: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    glo = g(lo)
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


class _DenseHistory:
    def __init__(self):
        self.starts: list = []
        self.steps: list = []

    def add(self, st: DenseStep) -> None:
        self.starts.append(st.t0)
        self.steps.append(st)

    def __call__(self, t: float) -> tuple:
        k = _bisect.bisect_right(self.starts, t) - 1
        k = min(max(k, 0), len(self.steps) - 1)
        return self.steps[k](t)


# --------------------------------------------------------------------------
# the edge chart


def edge_chart_rhs(a: float, xi: float, eta: float, c: float = 1.0) -> tuple[float, float, float]:
    """Derivatives of ``(xi, eta, t)`` with respect to the chart time ``s``.

    Here ``ds = y dt_chart`` and physical time advances by
    ``dt/ds = (c (1 + w))**(1/3) * y**(-2/3)``.
    """
    w = math.exp(xi)
    iy = math.exp(-eta)
    dxi = -(2.0 * a * w + 4.0 * a - (w + 1.0) * iy)
    deta = -(1.0 - iy) * (2.0 * a * (w + 1.0) * (1.0 + iy) - 1.0)
    dt = math.exp((math.log(c) + math.log1p(w)) / 3.0 - 2.0 * eta / 3.0)
    return dxi, deta, dt


# gamma numerators times y^2 (1+w)^2 with X3 = 1, as (coef, power of w, power of y)
_G_ROLE = (
    ((1, 2, 2), (-2, 2, 1), (1, 2, 0), (4, 1, 2), (-2, 1, 1), (2, 1, 0), (1, 0, 0)),
    ((1, 2, 2), (2, 2, 1), (-3, 2, 0), (6, 1, 1), (-6, 1, 0), (4, 0, 1), (-3, 0, 0)),
    ((-3, 2, 2), (2, 2, 1), (1, 2, 0), (-4, 1, 2), (2, 1, 1), (2, 1, 0), (1, 0, 0)),
)


def _lse(v: list) -> float:
    if not v:
        return -math.inf
    m = max(v)
    return m + math.log(sum(math.exp(x - m) for x in v))


def edge_chart_gamma_logratios(xi: float, eta: float) -> tuple[float, float, float]:
    """``log(P_r / N_r)`` per role r, where gamma_r is proportional to ``P_r - N_r``.

    Positive values mean gamma_r > 0; the magnitude is a cancellation-free
    relative margin.
    """
    out = []
    for terms in _G_ROLE:
        pos, neg = [], []
        for cf, pw, py in terms:
            lv = math.log(abs(cf)) + pw * xi + py * eta
            (pos if cf > 0 else neg).append(lv)
        lp, ln = _lse(pos), _lse(neg)
        out.append(lp - ln if ln > -math.inf else math.inf)
    return tuple(out)


def _edge_roles(x: Sequence[float]) -> tuple[int, int, int]:
    """Zero-based indices (i1, i2, i3) holding the roles X1, X2, X3."""
    i2 = int(np.argmin(x))
    others = [k for k in range(3) if k != i2]
    i3 = others[0] if x[others[0]] >= x[others[1]] else others[1]
    i1 = others[1] if i3 == others[0] else others[0]
    return i1, i2, i3


def _edge_point(xi: float, eta: float, c: float, roles: tuple[int, int, int]) -> Point3:
    l1w = math.log1p(math.exp(xi))
    # log-space assembly keeps full precision when exp(-eta) alone would be subnormal
    ll = (math.log(c) + l1w + eta) / 3.0
    v = [0.0, 0.0, 0.0]
    v[roles[0]] = math.exp(ll - l1w)
    v[roles[1]] = math.exp(ll - eta)
    v[roles[2]] = math.exp(ll)
    return Point3(*v)


def edge_chart_slope(a: float, x: float, y: float) -> float:
    """``dy/dx`` in the chart ``x = x3/x1, y = x3/x2`` (factorized, w = x - 1)."""
    w = x - 1.0
    return (y - 1.0) * (2.0 * a * (w + 1.0) * (y + 1.0) - y) / (w * (2.0 * a * w * y + 4.0 * a * y - w - 1.0))


def edge_chart_slope_direct(a: float, x: float, y: float) -> float:
    """Same slope from the field itself, as a ratio of logarithmic derivatives."""
    x3 = 1.0
    x1, x2 = x3 / x, x3 / y
    f1, f2, f3 = _sym_components(a, x1, x2, x3)
    return y * (f3 / x3 - f2 / x2) / (x * (f3 / x3 - f1 / x1))


# --------------------------------------------------------------------------
# 3D integration


def _norm_gammas(x1: float, x2: float, x3: float) -> tuple[float, float, float]:
    s = x1 + x2 + x3
    s2 = s * s
    d = x2 - x3
    g1 = d * d + 2.0 * x1 * (x2 + x3) - 3.0 * x1 * x1
    d = x3 - x1
    g2 = d * d + 2.0 * x2 * (x3 + x1) - 3.0 * x2 * x2
    d = x1 - x2
    g3 = d * d + 2.0 * x3 * (x1 + x2) - 3.0 * x3 * x3
    return g1 / s2, g2 / s2, g3 / s2


def _gamma_rate(a: float, x: tuple, k: int) -> float:
    """d gamma_{k+1} / dt along the field at x."""
    f = _sym_components(a, *x)
    j, m = CYCLE[k]
    xi, xj, xm = x[k], x[j], x[m]
    gi = 2.0 * (xj + xm) - 6.0 * xi
    gj = 2.0 * (xj - xm) + 2.0 * xi
    gm = -2.0 * (xj - xm) + 2.0 * xi
    return gi * f[k] + gj * f[j] + gm * f[m]


def integrate(a: float, x0: PointLike, opts: IntegratorOptions = IntegratorOptions()) -> Trajectory:
    """Integrate the symmetric system from ``x0`` and record cone crossings."""
    a = _check_a(a)
    x0 = as_point(x0)
    c = x0.product()
    y0 = (x0.x1, x0.x2, x0.x3)
    sc = x0.scale
    times, points = [0.0], [x0]
    tracker = _Tracker(opts.boundary_eps)
    tracker.feed(0.0, _norm_gammas(*y0), None, None, opts.graze_rate, "xyz")

    def finish(reason: Termination, drift: float, n_steps: int, edge_start=None) -> Trajectory:
        return Trajectory(a, c, times, points, tracker.events, drift, reason, tracker.side, edge_start, n_steps)

    f0 = _sym_components(a, *y0)
    on_diag = max(abs(y0[0] - y0[1]), abs(y0[1] - y0[2]), abs(y0[0] - y0[2])) <= 1e-12 * sc
    if on_diag or math.sqrt(sum(v * v for v in f0)) <= opts.equilibrium_tol:
        return finish(Termination.EQUILIBRIUM_CONVERGED, 0.0, 0)

    for i0, (j0, k0) in enumerate(CYCLE):
        if y0[j0] == y0[k0]:
            return _integrate_on_curve(a, c, i0, y0[j0], opts, times, points, tracker, finish)

    hist = _DenseHistory()
    state = {"drift": 0.0, "reason": Termination.HORIZON_REACHED, "n": 0, "edge": False}

    def rhs(t, y):
        return _sym_components(a, y[0], y[1], y[2])

    def point_at(t):
        return Point3(*hist(t))

    def refine(k, lo, hi):
        g = lambda t: _norm_gammas(*hist(t))[k]  # noqa: E731
        te = _bisect_root(g, lo, hi, opts.event_tol)
        xe = hist(te)
        s = xe[0] + xe[1] + xe[2]
        return te, Point3(*xe), _gamma_rate(a, xe, k) / s

    def on_step(st: DenseStep) -> bool:
        hist.add(st)
        state["n"] += 1
        y1 = st.y1
        if min(y1) <= 0.0 or not all(math.isfinite(v) for v in y1):
            state["reason"] = Termination.COORDINATE_UNDERFLOW
            return True
        h = st.t1 - st.t0
        m = opts.checkpoints
        for q in range(1, m + 1):
            tq = st.t0 + h * q / (m + 1)
            xq = st(tq)
            if min(xq) > 0.0:
                tracker.feed(tq, _norm_gammas(*xq), refine, point_at, opts.graze_rate, "xyz")
        tracker.feed(st.t1, _norm_gammas(*y1), refine, point_at, opts.graze_rate, "xyz")
        times.append(st.t1)
        points.append(Point3(*y1))
        drift = abs(y1[0] * y1[1] * y1[2] / c - 1.0)
        if drift > state["drift"]:
            state["drift"] = drift
        if min(y1) < opts.min_coordinate:
            state["reason"] = Termination.COORDINATE_UNDERFLOW
            return True
        f = _sym_components(a, *y1)
        if math.sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]) <= opts.equilibrium_tol:
            state["reason"] = Termination.EQUILIBRIUM_CONVERGED
            return True
        decisive = not tracker.band and tracker.t_dec == st.t1
        if opts.edge_tail and decisive:
            ratio = min(y1) / max(y1)
            i1, i2, i3 = _edge_roles(y1)
            w = (y1[i3] - y1[i1]) / y1[i1]
            # hand over before w = X3/X1 - 1 sinks below what doubles resolve
            if w > 0.0 and (ratio < opts.edge_ratio or (w < opts.edge_w and ratio < 0.5)):
                state["edge"] = True
                return True
        return False

    solver = Dopri5(rhs, opts.rel_tol, opts.abs_tol, opts.max_step)
    solver.solve(0.0, y0, opts.horizon, on_step)
    if not state["edge"]:
        return finish(state["reason"], state["drift"], state["n"])
    return _edge_tail(a, c, opts, times, points, tracker, state)


def _integrate_on_curve(a, c, i0, p0, opts, times, points, tracker, finish) -> Trajectory:
    """Starts on I_i stay there, so integrate ``u = log p`` for the point
    ``x_i = c p**-2, x_j = x_k = p`` and lift; the product stays at ``c``."""
    j0, _ = CYCLE[i0]

    def lift(u):
        pv = math.exp(u[0])
        v = [pv, pv, pv]
        v[i0] = c / (pv * pv)
        return tuple(v)

    def rhs(t, u):
        x = lift(u)
        return (_sym_components(a, *x)[j0] / x[j0],)

    hist = _DenseHistory()
    state = {"drift": 0.0, "reason": Termination.HORIZON_REACHED, "n": 0}

    def point_at(t):
        return Point3(*lift(hist(t)))

    def refine(k, lo, hi):
        g = lambda t: _norm_gammas(*lift(hist(t)))[k]  # noqa: E731
        te = _bisect_root(g, lo, hi, opts.event_tol)
        xe = lift(hist(te))
        return te, Point3(*xe), _gamma_rate(a, xe, k) / sum(xe)

    def on_step(st: DenseStep) -> bool:
        hist.add(st)
        state["n"] += 1
        h = st.t1 - st.t0
        for q in range(1, opts.checkpoints + 1):
            tq = st.t0 + h * q / (opts.checkpoints + 1)
            tracker.feed(tq, _norm_gammas(*lift(st(tq))), refine, point_at, opts.graze_rate, "xyz")
        x = lift(st.y1)
        tracker.feed(st.t1, _norm_gammas(*x), refine, point_at, opts.graze_rate, "xyz")
        if min(x) <= 0.0 or not all(math.isfinite(v) for v in x):
            state["reason"] = Termination.COORDINATE_UNDERFLOW
            return True
        times.append(st.t1)
        points.append(Point3(*x))
        state["drift"] = max(state["drift"], abs(x[0] * x[1] * x[2] / c - 1.0))
        if min(x) < opts.min_coordinate:
            state["reason"] = Termination.COORDINATE_UNDERFLOW
            return True
        f = _sym_components(a, *x)
        if math.sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]) <= opts.equilibrium_tol:
            state["reason"] = Termination.EQUILIBRIUM_CONVERGED
            return True
        return False

    try:
        Dopri5(rhs, opts.rel_tol, opts.abs_tol, opts.max_step).solve(0.0, (math.log(p0),), opts.horizon, on_step)
    except (StepFailure, OverflowError):
        state["reason"] = Termination.COORDINATE_UNDERFLOW
    return finish(state["reason"], state["drift"], state["n"])


def _edge_tail(a, c, opts, times, points, tracker, state) -> Trajectory:
    x = tuple(points[-1])
    t_start = times[-1]
    roles = _edge_roles(x)
    i1, i2, i3 = roles
    w = (x[i3] - x[i1]) / x[i1]
    y = x[i3] / x[i2]
    z0 = (math.log(w), math.log(y), t_start)
    # cones indexed by role, reported with their actual coordinate index
    tracker.cone_map = (i1 + 1, i2 + 1, i3 + 1)
    tracker.eps = 1e-9
    hist = _DenseHistory()
    tail = {"reason": Termination.EDGE_UNRESOLVED, "n": 0}
    eta_under = 1.5 * (math.log(c) / 3.0 - math.log(opts.min_coordinate)) + 1.0

    def rhs(s, z):
        return edge_chart_rhs(a, z[0], z[1], c)

    def point_at(s):
        z = hist(s)
        return _edge_point(z[0], z[1], c, roles)

    def refine(k, lo, hi):
        g = lambda s: edge_chart_gamma_logratios(*hist(s)[:2])[k]  # noqa: E731
        se = _bisect_root(g, lo, hi, opts.event_tol)
        z = hist(se)
        ds = 1e-6 * max(1.0, hi - lo)
        rate = (g(min(se + ds, hi)) - g(max(se - ds, lo))) / (min(se + ds, hi) - max(se - ds, lo))
        return z[2], _edge_point(z[0], z[1], c, roles), rate

    # the tracker now runs in s; the handover point was decisive in 3D
    L0 = edge_chart_gamma_logratios(z0[0], z0[1])
    tracker.t_dec, tracker.band = 0.0, []
    tracker.v_dec = L0
    tracker.clock = lambda s: hist(s)[2]
    s_times: list = []
    s_times_done: list = []

    def on_step(st: DenseStep) -> bool:
        hist.add(st)
        tail["n"] += 1
        m = opts.checkpoints
        h = st.t1 - st.t0
        for q in range(1, m + 1):
            sq = st.t0 + h * q / (m + 1)
            zq = st(sq)
            tracker.feed(sq, edge_chart_gamma_logratios(zq[0], zq[1]), refine, point_at, opts.graze_rate, "edge")
        z = st.y1
        L = edge_chart_gamma_logratios(z[0], z[1])
        tracker.feed(st.t1, L, refine, point_at, opts.graze_rate, "edge")
        if z[2] > opts.horizon:
            tail["reason"] = Termination.HORIZON_REACHED
            return True
        try:
            p = _edge_point(z[0], z[1], c, roles)
        except (DomainError, OverflowError):
            p = None
        if p is None and not s_times_done:
            # beyond double range the reconstructed point carries no information
            s_times_done.append(True)
        if s_times_done:
            tail["reason"] = Termination.EDGE_UNRESOLVED
            return True
        if p is not None:
            times.append(z[2])
            points.append(p)
            s_times.append(st.t1)
        prev = tail.get("L")
        tail["L"] = L
        # settled once every margin is large and still moving away from zero
        if (
            prev is not None
            and z[0] < -20.0
            and z[1] > max(20.0, eta_under)
            and all(abs(v) > 10.0 and (v - u) * v > 0 for v, u in zip(L, prev))
        ):
            tail["reason"] = Termination.COORDINATE_UNDERFLOW
            return True
        return False

    solver = Dopri5(rhs, opts.rel_tol, opts.abs_tol, max_step=50.0)
    solver.solve(0.0, z0, opts.edge_s_max, on_step)
    events = tracker.events
    drift = state["drift"]
    for p in points[len(points) - len(s_times):]:
        drift = max(drift, abs(p.x1 * p.x2 * p.x3 / c - 1.0))
    return Trajectory(a, c, times, points, events, drift, tail["reason"], tracker.side, t_start,
                      state["n"] + tail["n"])


def detect_crossings(traj: Trajectory, a: float, opts: IntegratorOptions = IntegratorOptions()) -> list:
    """Crossing events of a recorded trajectory.

    Events are located during integration, where the dense output is
    available, so this returns the stored list. Trajectories without stored
    events are scanned sample by sample with hysteresis (no refinement).
    """
    if traj.events or len(traj.points) < 2:
        return list(traj.events)
    tracker = _Tracker(opts.boundary_eps)
    pts = {t: p for t, p in zip(traj.times, traj.points)}

    def refine(k, lo, hi):
        p = pts[hi]
        return hi, p, _gamma_rate(a, tuple(p), k) / p.scale

    for t, p in zip(traj.times, traj.points):
        tracker.feed(t, _norm_gammas(*p), refine, lambda t: pts[t], opts.graze_rate, "xyz")
    return tracker.events


# --------------------------------------------------------------------------
# planar system


def integrate_planar(a: float, start: tuple[float, float], opts: IntegratorOptions = IntegratorOptions()) -> Trajectory:
    """Integrate the reduced system on ``x1 x2 x3 = 1``; events against l_i = 0."""
    a = _check_a(a)
    x1, x2 = (float(v) for v in start)
    if not (x1 > 0 and x2 > 0):
        raise DomainError("planar start must be positive")
    p0 = Point3(x1, x2, 1.0 / (x1 * x2))
    times, points = [0.0], [p0]
    tracker = _Tracker(opts.boundary_eps)
    tracker.feed(0.0, _norm_gammas(*p0), None, None, opts.graze_rate, "planar")
    hist = _DenseHistory()
    state = {"reason": Termination.HORIZON_REACHED, "n": 0}

    def lift(z):
        return (z[0], z[1], 1.0 / (z[0] * z[1]))

    def rhs(t, z):
        return planar_field(a, z[0], z[1])

    def point_at(t):
        return Point3(*lift(hist(t)))

    def refine(k, lo, hi):
        g = lambda t: _norm_gammas(*lift(hist(t)))[k]  # noqa: E731
        te = _bisect_root(g, lo, hi, opts.event_tol)
        xe = lift(hist(te))
        return te, Point3(*xe), _gamma_rate(a, xe, k) / sum(xe)

    f0 = planar_field(a, x1, x2)
    if math.hypot(*f0) <= opts.equilibrium_tol:
        return Trajectory(a, 1.0, times, points, [], 0.0, Termination.EQUILIBRIUM_CONVERGED, tracker.side, planar=True)

    def on_step(st: DenseStep) -> bool:
        hist.add(st)
        state["n"] += 1
        z = st.y1
        if min(z) <= 0.0 or not all(math.isfinite(v) for v in z):
            state["reason"] = Termination.COORDINATE_UNDERFLOW
            return True
        h = st.t1 - st.t0
        for q in range(1, opts.checkpoints + 1):
            tq = st.t0 + h * q / (opts.checkpoints + 1)
            zq = st(tq)
            if min(zq) > 0:
                tracker.feed(tq, _norm_gammas(*lift(zq)), refine, point_at, opts.graze_rate, "planar")
        xz = lift(z)
        tracker.feed(st.t1, _norm_gammas(*xz), refine, point_at, opts.graze_rate, "planar")
        times.append(st.t1)
        points.append(Point3(*xz))
        if min(xz) < opts.min_coordinate:
            state["reason"] = Termination.COORDINATE_UNDERFLOW
            return True
        if math.hypot(*planar_field(a, z[0], z[1])) <= opts.equilibrium_tol:
            state["reason"] = Termination.EQUILIBRIUM_CONVERGED
            return True
        return False

    try:
        Dopri5(rhs, opts.rel_tol, opts.abs_tol, opts.max_step).solve(0.0, (x1, x2), opts.horizon, on_step)
    except StepFailure:
        # finite-time escape: one lifted coordinate collapses while another blows up
        last = points[-1]
        if max(last) / min(last) < 1e6:
            raise
        state["reason"] = Termination.COORDINATE_UNDERFLOW
    return Trajectory(a, 1.0, times, points, tracker.events, 0.0, state["reason"], tracker.side,
                      n_steps=state["n"], planar=True)


# --------------------------------------------------------------------------
# the fixed-mesh reproduction near a = 1/4


@dataclass(frozen=True)
class IvpResult:
    a: float
    crossing: tuple[float, float]
    mesh_index: int
    y_boundary: float
    constant: float
    asymptote_hit: tuple[float, float]
    mesh_x: tuple = dc_field(repr=False, default=())
    mesh_y: tuple = dc_field(repr=False, default=())


def reproduce_ivp_026(
    N: int = 5000,
    b: float = 1.0 + 1e-6,
    x0: float = 1.0 + 1e-3,
    y0: float = 20.0,
    a: float = 0.26,
) -> IvpResult:
    """Backward fixed-step RK4 for ``dy/dx`` in the chart ``x = x3/x1, y = x3/x2``.

    Returns the first mesh point where the numerical solution drops below the
    boundary curve ``y_b``, the calibrated power-law constant and the point
    where the power law meets ``y_b``.
    """
    if N < 1:
        raise DomainError("N must be positive")
    if not (1.0 < b < x0):
        raise DomainError("need 1 < b < x0")
    h = (b - x0) / N
    ys = rk4_fixed(lambda x, y: edge_chart_slope(a, x, y), x0, y0, h, N)
    xs = [x0 + i * h for i in range(N + 1)]
    hit = None
    for i in range(1, N + 1):
        if ys[i] - boundary_asymptote(xs[i]) < 0:
            hit = i
            break
    if hit is None:
        raise RuntimeError("the numerical solution never reaches the boundary curve on the mesh")
    C = calibrate_constant(a, x0, y0)
    ax = asymptote_boundary_intersection(a, C, 1.0 + 1e-14, x0)
    return IvpResult(a, (xs[hit], ys[hit]), hit, boundary_asymptote(xs[hit]), C, ax, tuple(xs), tuple(ys))
