"""Vector field, cone geometry and cone-crossing dynamics of the Wallach flow system.

Submodules: ``model`` (vector fields, first integral, Jacobians),
``geometry`` (the positive-curvature set S and its conic boundary),
``analysis`` (flux criterion, equilibria, planar classification),
``flow`` (integration with boundary-crossing events), ``experiments``
(regime verification) and ``cli`` (data export).
"""

from .model import (
    DegenerateError,
    DomainError,
    General,
    Point3,
    SingularPointError,
    Symmetric,
    eval_field_general,
    eval_field_symmetric,
    jacobian,
    volume_integral,
)
from .geometry import ConeChart, Region, RegionClass, classify_region, cone_point, gamma, gammas
from .analysis import (
    F,
    FluxRegime,
    FluxSplit,
    critical_nus,
    eigen_structure,
    equilibria,
    flux,
    planar_classification,
    tangency_points,
)
from .flow import (
    CrossingEvent,
    Direction,
    IntegratorOptions,
    Termination,
    Trajectory,
    detect_crossings,
    integrate,
    integrate_planar,
    reproduce_ivp_026,
)
from .experiments import RegimeReport, flux_certificate, run_regime_experiment

__version__ = "0.1.0"

__all__ = [
    "ConeChart",
    "CrossingEvent",
    "DegenerateError",
    "Direction",
    "DomainError",
    "F",
    "FluxRegime",
    "FluxSplit",
    "General",
    "IntegratorOptions",
    "Point3",
    "Region",
    "RegionClass",
    "RegimeReport",
    "SingularPointError",
    "Symmetric",
    "Termination",
    "Trajectory",
    "classify_region",
    "cone_point",
    "critical_nus",
    "detect_crossings",
    "eigen_structure",
    "equilibria",
    "eval_field_general",
    "eval_field_symmetric",
    "flux",
    "flux_certificate",
    "gamma",
    "gammas",
    "integrate",
    "integrate_planar",
    "jacobian",
    "planar_classification",
    "reproduce_ivp_026",
    "run_regime_experiment",
    "tangency_points",
    "volume_integral",
]
