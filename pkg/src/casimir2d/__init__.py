"""Casimir interaction energies for 2D/2.5D multibody geometries via the
multiple-reflection (diagrammatic) expansion."""

from .assembly import (
    EnergyBreakdown,
    ForceResult,
    Scene,
    SceneObject,
    diagram_energy,
    force,
    interaction_I12,
    parallel_plates_energy_quadrature,
    reflection_series,
)
from .closedforms import (
    needle_edge_energy,
    parallel_plate_energy,
    parallel_plate_force,
    parallel_plate_per_order,
    repulsion_energy,
    two_halfplates_energy,
)
from .diagrams import (
    BlockSystem,
    Diagram,
    canonicalize,
    enumerate_diagrams,
    lndet_oracle,
)
from .errors import (
    CasimirError,
    DomainError,
    GeometryError,
    NumericalDomainError,
    ResolutionError,
    ValidationError,
)
from .quadrature import QuadratureGrid, build_grid
from .scattering import (
    BoundaryCondition,
    HalfPlate,
    InfinitePlate,
    Needle,
    PerfectPlate,
)
from .scenarios import (
    SCENARIOS,
    CurveOutput,
    ScenarioConfig,
    SweepSpec,
    force_direction_field,
)
from .scenarios import build as build_scenario
from .scenarios import run as run_scenario
from .translation import FramePose

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BlockSystem",
    "BoundaryCondition",
    "CasimirError",
    "CurveOutput",
    "Diagram",
    "DomainError",
    "EnergyBreakdown",
    "ForceResult",
    "FramePose",
    "GeometryError",
    "HalfPlate",
    "InfinitePlate",
    "Needle",
    "NumericalDomainError",
    "PerfectPlate",
    "QuadratureGrid",
    "ResolutionError",
    "SCENARIOS",
    "Scene",
    "SceneObject",
    "ScenarioConfig",
    "SweepSpec",
    "ValidationError",
    "build_grid",
    "build_scenario",
    "canonicalize",
    "diagram_energy",
    "enumerate_diagrams",
    "force",
    "force_direction_field",
    "interaction_I12",
    "lndet_oracle",
    "needle_edge_energy",
    "parallel_plate_energy",
    "parallel_plate_force",
    "parallel_plate_per_order",
    "parallel_plates_energy_quadrature",
    "reflection_series",
    "repulsion_energy",
    "run_scenario",
    "two_halfplates_energy",
]
