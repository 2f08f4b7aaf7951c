"""Regime experiments: sampled trajectories checked against the case table.

For a symmetric parameter ``a`` the expected crossing behaviour is

    case 1, a < 3/14        interior starts leave S exactly once and stay out;
                            exterior starts never reach the closure of S
    case 2, a = 3/14        same counting as case 1
    case 3, 3/14 < a < 1/4  interior starts leave exactly once; exterior
                            starts either never enter or enter and leave again
    case 4, 1/4 < a < 1/2   interior starts never leave; exterior starts
                            enter and never leave again
    case 5, a = 1/4         interior starts never leave; exterior free

Finite horizons cannot certify "forever", so each report also carries the
flux-sign certificate over a grid of cone points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .analysis import A_DEGENERATE, A_TANGENT, F, FluxRegime, critical_nus, flux, flux_chart, g_h_f
from .flow import Direction, IntegratorOptions, Termination, Trajectory, integrate
from .geometry import ConeChart, Region, classify_region, cone_point, mu_of_nu
from .model import DomainError, Point3, _check_a

__all__ = [
    "regime_case",
    "RunSummary",
    "FluxCertificate",
    "RegimeReport",
    "sample_start",
    "is_generic",
    "aimed_exterior_starts",
    "flux_certificate",
    "judge_run",
    "run_regime_experiment",
]

CASE_ATOL = 1e-12
GENERIC_MARGIN = 1e-3
SAMPLE_HALF_WIDTH = 0.7


def regime_case(a: float) -> int:
    a = _check_a(a)
    if abs(a - A_TANGENT) <= CASE_ATOL:
        return 2
    if abs(a - A_DEGENERATE) <= CASE_ATOL:
        return 5
    if a < A_TANGENT:
        return 1
    if a < A_DEGENERATE:
        return 3
    return 4


def is_generic(x, margin: float = GENERIC_MARGIN) -> bool:
    """Pairwise distinct coordinates with relative separation at least ``margin``."""
    x1, x2, x3 = x
    m = max(x1, x2, x3)
    return min(abs(x1 - x2), abs(x2 - x3), abs(x1 - x3)) >= margin * m


def sample_start(rng: np.random.Generator, interior: bool, half_width: float = SAMPLE_HALF_WIDTH,
                 max_tries: int = 100_000) -> Point3:
    """Rejection-sample a generic start on ``x1 x2 x3 = 1`` on the requested side.

    ``log x1`` and ``log x2`` are uniform in ``[-half_width, half_width]``.
    """
    want = Region.INTERIOR if interior else Region.EXTERIOR
    for _ in range(max_tries):
        u1, u2 = rng.uniform(-half_width, half_width, 2)
        x = Point3(math.exp(u1), math.exp(u2), math.exp(-u1 - u2))
        rc = classify_region(x)
        if rc.kind is want and not rc.on_diagonal and is_generic(x):
            return x
    raise RuntimeError("rejection sampling failed to find a start")


def aimed_exterior_starts(a: float, n: int = 12, push: float = 1e-3) -> list[Point3]:
    """Exterior starts just outside the cone arcs where the flux points into S.

    Only meaningful in case 3, where the arc is ``nu1 < nu < nu2``. Each point
    is the charted cone point with ``x_i`` scaled by ``1 + push``, then
    rescaled to the surface ``x1 x2 x3 = 1``.
    """
    split = critical_nus(a)
    if split.regime is not FluxRegime.SIGN_CHANGE:
        raise DomainError("aimed starts need a in (3/14, 1/4)")
    per_cone = max(1, n // 3)
    lo, hi = math.log(split.nu1), math.log(split.nu2)
    # interior of the arc, avoiding nu = 4/3 where mu = 1 is non-generic
    nus = [math.exp(lo + (hi - lo) * (k + 0.5) / per_cone) for k in range(per_cone)]
    out = []
    for i in (1, 2, 3):
        for nu in nus:
            if abs(nu - 4.0 / 3.0) < 1e-3:
                nu *= 1.01
            p = list(cone_point(ConeChart(i, nu, 1.0)))
            p[i - 1] *= 1.0 + push
            s = (p[0] * p[1] * p[2]) ** (-1.0 / 3.0)
            q = Point3(p[0] * s, p[1] * s, p[2] * s)
            if classify_region(q).kind is Region.EXTERIOR and is_generic(q):
                out.append(q)
    return out[:n] if n >= 3 else out


@dataclass(frozen=True)
class FluxCertificate:
    a: float
    n_points: int
    min_flux: float
    max_flux: float
    # every sampled sign equals sign(a - F(nu)) and the closed form agrees
    dichotomy_holds: bool
    expected: str  # "negative" | "positive" | "mixed"

    @property
    def holds(self) -> bool:
        if not self.dichotomy_holds:
            return False
        if self.expected == "negative":
            return self.max_flux < 0
        if self.expected == "positive":
            return self.min_flux > 0
        return self.min_flux < 0 < self.max_flux


def flux_certificate(a: float, n_nu: int = 100, n_t: int = 100, cones=(1, 2, 3),
                     nu_range=(1.0 + 1e-3, 1e3), t_range=(1e-2, 1e2)) -> FluxCertificate:
    """Evaluate the flux on a ``n_nu x n_t`` chart grid for each cone.

    The tangency value ``nu = 4/3`` is excluded at ``a = 3/14`` where the flux
    vanishes identically along that ray.
    """
    a = _check_a(a)
    nus = np.geomspace(*nu_range, n_nu)
    if abs(a - A_TANGENT) <= CASE_ATOL:
        nus = nus[np.abs(nus - 4.0 / 3.0) > 1e-9]
    ts = np.geomspace(*t_range, n_t)
    fmin, fmax, ok, n = math.inf, -math.inf, True, 0
    for i in cones:
        for nu in nus:
            sgn = math.copysign(1.0, a - F(float(nu)))
            for t in ts:
                p = cone_point(ConeChart(i, float(nu), float(t)))
                v = flux(a, p, i)
                n += 1
                fmin, fmax = min(fmin, v), max(fmax, v)
                ref = flux_chart(a, float(nu), float(t))
                # size of the terms that cancel in G a - H
                G, H, _ = g_h_f(float(nu))
                scale = 8.0 * t * (nu - 1.0) / mu_of_nu(float(nu)) * (G * a + H)
                if abs(v - ref) > 1e-8 * scale:
                    ok = False
                elif abs(ref) > 1e-8 * scale and math.copysign(1.0, v) != sgn:
                    ok = False
    case = regime_case(a)
    expected = {1: "negative", 2: "negative", 3: "mixed", 4: "positive", 5: "positive"}[case]
    return FluxCertificate(a, n, fmin, fmax, ok, expected)


@dataclass(frozen=True)
class RunSummary:
    start: tuple
    kind: str  # "interior" | "exterior" | "aimed"
    sequence: str  # refined crossings, "L" leaving, "E" entering
    n_grazes: int
    final_region: str
    terminated: str
    horizon: float
    status: str  # "ok" | "violation" | "inconclusive"
    note: str = ""
    end_time: float = float("nan")

    @property
    def n_leaving(self) -> int:
        return self.sequence.count("L")

    @property
    def n_entering(self) -> int:
        return self.sequence.count("E")


def _sequence(tr: Trajectory) -> str:
    return "".join("L" if e.direction is Direction.LEAVING else "E" for e in tr.crossings)


def judge_run(case: int, kind: str, tr: Trajectory) -> tuple[str, str]:
    """Return ``(status, note)`` for one trajectory against the case table."""
    seq = _sequence(tr)
    done = tr.terminated_reason in (Termination.COORDINATE_UNDERFLOW, Termination.EQUILIBRIUM_CONVERGED)
    side = tr.final_side
    start_interior = kind == "interior"
    if case in (1, 2, 3) and start_interior:
        if "E" in seq or seq.count("L") > 1:
            return "violation", f"interior start produced crossings {seq!r}"
        if seq == "L":
            return "ok", ""
        return ("violation", "finished without leaving") if done else ("inconclusive", "has not left yet")
    if case in (1, 2) and not start_interior:
        if "E" in seq:
            return "violation", f"exterior start entered: {seq!r}"
        return "ok", ""
    if case == 3 and not start_interior:
        if seq not in ("", "E", "EL"):
            return "violation", f"exterior start produced crossings {seq!r}"
        if seq == "E":
            return ("violation", "entered and never left") if done else ("inconclusive", "entered, not yet left")
        return "ok", ""
    if case in (4, 5) and start_interior:
        if "L" in seq:
            return "violation", f"interior start left: {seq!r}"
        return "ok", ""
    if case == 4:
        if seq not in ("", "E"):
            return "violation", f"exterior start produced crossings {seq!r}"
        if seq == "E":
            return "ok", ""
        return ("violation", "finished without entering") if done and side < 0 else ("inconclusive", "not yet entered")
    # case 5, exterior: recorded only
    return "ok", "no requirement"


@dataclass
class RegimeReport:
    a: float
    case: int
    n_trajectories: int
    seed: int
    runs: list = field(default_factory=list)
    certificate: Optional[FluxCertificate] = None
    aimed_witness: Optional[bool] = None

    @property
    def violations(self) -> list:
        return [r for r in self.runs if r.status == "violation"]

    @property
    def inconclusive(self) -> list:
        return [r for r in self.runs if r.status == "inconclusive"]

    def of_kind(self, kind: str) -> list:
        return [r for r in self.runs if r.kind == kind]

    @property
    def consistent(self) -> bool:
        if self.violations:
            return False
        if self.certificate is not None and not self.certificate.holds:
            return False
        if self.aimed_witness is False:
            return False
        return True

    @property
    def verdict(self) -> str:
        if self.consistent:
            return f"Consistent(case={self.case})"
        parts = []
        if self.violations:
            w = self.violations[0]
            parts.append(f"{len(self.violations)} run(s), first start={w.start} kind={w.kind}: {w.note}")
        if self.certificate is not None and not self.certificate.holds:
            parts.append("flux certificate failed")
        if self.aimed_witness is False:
            parts.append("no aimed exterior start entered and left")
        return "Violation(" + "; ".join(parts) + ")"

    def counts(self, kind: str) -> dict:
        out: dict = {}
        for r in self.of_kind(kind):
            out[r.sequence] = out.get(r.sequence, 0) + 1
        return out

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "case": self.case,
            "n_trajectories": self.n_trajectories,
            "seed": self.seed,
            "verdict": self.verdict,
            "consistent": self.consistent,
            "crossing_counts": {k: self.counts(k) for k in ("interior", "exterior", "aimed")},
            "inconclusive": [r.__dict__ for r in self.inconclusive],
            "violations": [r.__dict__ for r in self.violations],
            "aimed_witness": self.aimed_witness,
            "certificate": None if self.certificate is None else dict(self.certificate.__dict__, holds=self.certificate.holds),
            "runs": [r.__dict__ for r in self.runs],
        }


def _run_one(a: float, case: int, kind: str, x0: Point3, opts: IntegratorOptions, escalations: int) -> RunSummary:
    o = opts
    for level in range(escalations + 1):
        tr = integrate(a, x0, o)
        status, note = judge_run(case, "interior" if kind == "interior" else "exterior", tr)
        if status != "inconclusive" or level == escalations:
            break
        if tr.terminated_reason not in (Termination.HORIZON_REACHED, Termination.EDGE_UNRESOLVED):
            break
        o = o.replace(horizon=o.horizon * 4.0, edge_s_max=o.edge_s_max * 4.0)
    return RunSummary(
        tuple(x0), kind, _sequence(tr), len(tr.grazes), tr.final_region.value,
        tr.terminated_reason.value, o.horizon, status, note, tr.times[-1],
    )


def run_regime_experiment(
    a: float,
    n: int = 100,
    seed: int = 0,
    opts: IntegratorOptions = IntegratorOptions(),
    escalations: int = 4,
    aimed: Optional[int] = None,
    certificate: bool = True,
) -> RegimeReport:
    """Integrate ``n`` interior and ``n`` exterior generic starts and judge them.

    Each start draws from its own child of ``SeedSequence(seed)``, so results
    do not depend on execution order. Runs still pending when the horizon is
    reached are retried with the horizon multiplied by 4, at most
    ``escalations`` times, then reported as inconclusive.
    """
    a = _check_a(a)
    if n < 1:
        raise DomainError("n must be at least 1")
    case = regime_case(a)
    report = RegimeReport(a, case, 2 * n, seed)
    children = np.random.SeedSequence(seed).spawn(2 * n)
    for k in range(2 * n):
        interior = k < n
        rng = np.random.default_rng(children[k])
        x0 = sample_start(rng, interior)
        report.runs.append(_run_one(a, case, "interior" if interior else "exterior", x0, opts, escalations))
    if case == 3:
        m = 12 if aimed is None else aimed
        if m > 0:
            witness = False
            starts = aimed_exterior_starts(a, m)
            for x0 in starts:
                r = _run_one(a, case, "aimed", x0, opts, escalations)
                report.runs.append(r)
                witness = witness or r.sequence == "EL"
            report.aimed_witness = witness
            report.n_trajectories += len(starts)
    if certificate:
        report.certificate = flux_certificate(a)
    return report
