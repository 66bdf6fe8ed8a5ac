"""Local detection of quantum discord: dephasing witnesses, model systems
and a reproducible experiment runner."""

from .measures import (
    BasisGrid,
    dephasing_disturbance,
    hs_distance_sq,
    minimal_dephasing_disturbance,
    negativity,
    trace_distance,
)
from .protocol import (
    EvolutionSpec,
    TimeGrid,
    WitnessBoundError,
    WitnessSeries,
    classical_correlation_witness,
    haar_average_estimate,
    run_local_detection,
    run_minimized_detection,
)
from .states import (
    BipartiteState,
    ProjectiveBasis,
    apply_local_unitary,
    computational_basis,
    dephase,
    haar_unitary,
    local_eigenbasis,
    qubit_basis,
    thermal_fock_state,
    zero_discord_state,
)
from .tensor import (
    BipartitionDims,
    eig_hermitian,
    evolve,
    kron,
    partial_trace_a,
    partial_trace_b,
    partial_transpose_a,
    trace_norm,
)

__version__ = "0.1.0"
