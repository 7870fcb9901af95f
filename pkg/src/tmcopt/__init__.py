"""Geometrically nonlinear finite elements with third-medium contact,
plus density-based end-compliance topology optimization.

Voids are filled with a soft neo-Hookean third medium whose stiffness
diverges as its volume vanishes, so contact forces transfer implicitly
and remain differentiable for the optimizer.  A displacement-Hessian
penalty (HuHu regularization) on skew element modes keeps the Newton
solver alive under the extreme void compression near contact.
"""

from .assembly import ElementState, SparseSystem, assemble_global, element_tangent_force, total_energy
from .design import DensityFilter, DesignState, build_filter, chain_rule, project, project_deriv
from .element import QuadOperators, build_operators, shape_eval
from .errors import (
    ConfigError,
    InvertedElementError,
    LinearSolveError,
    NonlinearSolveError,
    OptimizationError,
    TmcoptError,
)
from .kernels import backend_name
from .material import (
    HyperelasticMaterial,
    bulk_modulus,
    lame_from_engineering,
    p_wave_modulus,
    piola2,
    ramp,
    ramp_deriv,
    strain_energy,
    tangent_moduli,
)
from .mesh import GridMesh, build_grid, select_elements, select_nodes
from .optim import (
    OptSettings,
    adjoint_sensitivity,
    beta_schedule,
    end_compliance,
    mma_like_update,
    optimize,
    volume_constraint,
)
from .scenarios import (
    Scenario,
    build_cshape,
    build_topopt,
    probe_gap,
    probe_point_displacement,
)
from .solver import AnalysisHistory, SolverSettings, incremental_solve, linear_solve, newton_step
from .vtkio import export_vtk, sed_log_rel

__version__ = "0.1.0"
