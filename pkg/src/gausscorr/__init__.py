"""
gausscorr: correlations of two bosonic modes in a common thermal bath.

Exact covariance-matrix dynamics under a Gaussian quantum dynamical semigroup,
with logarithmic negativity, Gaussian discord, classical correlations and
mutual information evaluated on the evolving state.
"""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    BathParams,
    CorrelationReport,
    CovarianceMatrix,
    InvalidStateError,
    SqueezedThermalSpec,
    SystemParams,
    separability_threshold,
    squeezed_thermal_covariance,
)
from .dynamics import (  # noqa: E402
    build_diffusion,
    build_drift,
    evolve,
    evolve_many,
    evolve_mp,
    propagator,
    steady_state,
)
from .measures import (  # noqa: E402
    classical_correlations,
    correlation_report,
    entropy_f,
    gaussian_discord,
    log_negativity,
    mutual_information,
    ptranspose_eigenvalue,
    symplectic_eigenvalues,
    symplectic_invariants,
)
from .analysis import (  # noqa: E402
    SweepSpec,
    TimeGrid,
    no_entanglement_generation_check,
    run_sweep,
    sudden_death_time,
    trajectory,
)
