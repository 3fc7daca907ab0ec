"""toruslab: a numerical laboratory for linear flows on the d-torus.

Core pieces: the small-divisor solver for the flow derivative equation,
finite-ball Diophantine certificates, a curve calculus with retraced-arc
excision, line-integral currents, and the twisted projection that turns
curves into linearization data.
"""

__version__ = "0.1.0"

from .errors import (
    BadSchedule,
    BasepointMismatch,
    EndpointMismatch,
    ResonanceFound,
    ResonantMode,
    SeparationNotFound,
    StaleLocation,
    ToruslabError,
)
from .torus_flow import (
    DiophantineCertificate,
    DirectionVector,
    LiftPoint,
    TorusPoint,
    certify_diophantine,
    find_resonances,
    flow,
    flow_lift,
    liouville_vector,
)
from .spectral import (
    CohomologySolution,
    OneForm,
    TrigPoly,
    contract_with_flow,
    exterior_derivative,
    lie_derivative,
    sobolev_norm,
    solve_cohomological,
    solve_for_form,
)
from .curves import (
    CurveFamily,
    PiecewiseCurve,
    RetracedArcLocation,
    Segment,
    boundaries_equal,
    boundary_multiset,
    concatenate,
    find_retraced_arc,
    flow_segment,
    maximal_excision,
    simple_excision,
    transverse_segment,
)
from .currents import (
    CurrentHandle,
    TwistedCurrent,
    ZeroCurrent,
    boundary,
    evaluate,
    evaluate_family,
    evaluate_twisted,
    is_loop_current,
    project_pi_x,
    twist,
)
from .linearization import (
    AlbanesePoint,
    GeneratorCurrent,
    LinearizationPoint,
    SeparationReport,
    albanese,
    build_battery,
    check_equivariance,
    generator,
    injectivity_probe,
    linearize,
)

__all__ = [
    "AlbanesePoint",
    "BadSchedule",
    "BasepointMismatch",
    "CohomologySolution",
    "CurrentHandle",
    "CurveFamily",
    "DiophantineCertificate",
    "DirectionVector",
    "EndpointMismatch",
    "GeneratorCurrent",
    "LiftPoint",
    "LinearizationPoint",
    "OneForm",
    "PiecewiseCurve",
    "ResonanceFound",
    "ResonantMode",
    "RetracedArcLocation",
    "Segment",
    "SeparationNotFound",
    "SeparationReport",
    "StaleLocation",
    "TorusPoint",
    "ToruslabError",
    "TrigPoly",
    "TwistedCurrent",
    "ZeroCurrent",
    "albanese",
    "boundaries_equal",
    "boundary",
    "boundary_multiset",
    "build_battery",
    "certify_diophantine",
    "check_equivariance",
    "concatenate",
    "contract_with_flow",
    "evaluate",
    "evaluate_family",
    "evaluate_twisted",
    "exterior_derivative",
    "find_resonances",
    "find_retraced_arc",
    "flow",
    "flow_lift",
    "flow_segment",
    "generator",
    "injectivity_probe",
    "is_loop_current",
    "lie_derivative",
    "linearize",
    "liouville_vector",
    "maximal_excision",
    "project_pi_x",
    "simple_excision",
    "sobolev_norm",
    "solve_cohomological",
    "solve_for_form",
    "transverse_segment",
    "twist",
]
