"""accelwave: acceleration-wave analysis for 1-D relaxation models.

Characteristic structure and coupling-condition verdicts, the closed-form
amplitude evolution with blow-up classification, and an independent
finite-volume wavefront simulation for cross-checking, over viscoelastic
solids and relaxing non-Newtonian fluids.
"""

__version__ = "0.1.0"

from .amplitude import (
    AmplitudeOutcome,
    AmplitudeProblem,
    ScanRow,
    Trajectory,
    classify,
    closed_form,
    integrate,
    problem_from_coefficients,
    singular_limit_scan,
)
from .characteristics import (
    Degenerate,
    DegenerateWaveError,
    DissipativeFinite,
    Eigensystem,
    FamilyReport,
    HyperbolicityError,
    KConditionReport,
    SingularLimit,
    StateVector,
    WaveCoefficients,
    assemble_ab_numeric,
    coefficients_ab,
    eigensystem,
    equilibrium_state,
    grad_lambda,
    k_condition,
    quasilinear_matrix,
    source_jacobian,
)
from .config import (
    ConfigError,
    ScenarioConfig,
    SimConfig,
    SweepConfig,
    bundled_config_path,
    load_scenario,
    material_from_dict,
    material_to_dict,
    scenario_from_dict,
    scenario_to_dict,
)
from .materials import (
    FluidParams,
    MaterialModel,
    MooneyRivlin,
    Newtonian,
    PotentialDerivs,
    PowerLaw,
    ProductionJacobian,
    QuadraticCubic,
    RegularizedPowerLaw,
    SingularProductionSlope,
    SolidParams,
    elastic_derivs,
    mooney_rivlin_tangent_modulus,
    mooney_rivlin_uniaxial_stress,
    omega_prime,
    production,
    production_jacobian,
    viscous_omega,
    zener_relaxation_response,
)
from .wavefront import (
    EnergyReport,
    FrontTrace,
    Grid,
    KinkIC,
    SimResult,
    SimulationError,
    Snapshot,
    detect_front_position,
    entropy_monitor,
    measure_front_slope,
    simulate,
)
