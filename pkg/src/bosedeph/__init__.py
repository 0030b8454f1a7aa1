"""Two-component bosons tunneling between two sites under local dephasing.

Simulation of a two-site, two-spin-component bosonic system coupled to
local dephasing baths, with three levels of description:

* a phenomenological Lindblad equation with constant dephasing rates,
* a microscopically derived time-local master equation (time-dependent
  canonical form) for Lorentzian bath spectra,
* an exact benchmark obtained by enlarging the system with one damped
  pseudomode per site.

The public API re-exports the main building blocks; see the README for
CLI usage.
"""

from .fock import FockBasis, Mode, Operator, enumerate_basis, ladder, number
from .model import (
    ModelParams,
    OperatorSet,
    build_operator_set,
    extended_basis,
    system_basis,
)
from .coeffs import alpha, beta, kappa, damping_matrix, canonical_hamiltonian
from .solvers import (
    IntegratorConfig,
    SolverError,
    Trajectory,
    default_dephasing_rate,
    evolve_closed,
    evolve_microscopic,
    evolve_phenomenological,
    evolve_pseudomode,
    find_steady_state,
    pure_density,
)
from .observables import (
    concurrence,
    coincidence_probability,
    fidelity,
    first_order_correlation,
    negativity,
    slocc_project,
    trace_distance,
)
from .scenario import ScenarioConfig, parse_config, preset_config, run_scenario

__version__ = "1.0.0"
