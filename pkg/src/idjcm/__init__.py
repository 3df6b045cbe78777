"""Two-atom Jaynes-Cummings models with intensity-dependent coupling.

Exact truncated-basis evolution of two two-level atoms resonantly coupled
to one coherent cavity mode, or to two modes via nondegenerate two-photon
transitions, plus the atom-field entanglement observables (linear entropy
of the reduced atomic state), collapse-revival predictors and the
disentanglement-time series.  Units: hbar = g = 1, times are gt.
"""

__version__ = "0.1.0"

from .fock import (
    ATOM_KETS,
    BASIS_PAD,
    MM,
    MP,
    PM,
    PP,
    PRESET_NAMES,
    AtomicState,
    CoherentSpec,
    FockCutoff,
    JointState,
    ModelKind,
    TruncationError,
    build_initial_state,
    coherent_amplitudes,
    poisson_retained,
    preset_atomic_state,
    random_joint_state,
)
from .hamiltonians import (
    ExcitationBlock,
    HamiltonianMatrix,
    block_matrix,
    build_one_mode,
    build_semiclassical,
    build_two_mode,
    enumerate_blocks,
    number_diagonal,
)
from .evolution import (
    BlockExactEngine,
    ClosedFormOneMode,
    ClosedFormTwoMode,
    DenseOracleEngine,
    DimensionError,
    evolve_block_exact,
    evolve_closed_form_one_mode,
    evolve_closed_form_two_mode,
    evolve_dense_oracle,
    make_engine,
    rabi_one_mode,
    rabi_two_mode,
)
from .observables import (
    EntropySeries,
    NumericalHealthWarning,
    entropy_series,
    linear_entropy,
    prob_both_excited,
    purity,
    reduce_atomic,
)
from .predictors import (
    CLASS_AB,
    CLASS_DARK,
    CLASS_EIGENSTATE,
    CLASS_GENERIC,
    DisentanglementPrediction,
    RevivalPrediction,
    classify_initial_state,
    disentanglement_times,
    phase_matching_residual,
    revival_periods_one_mode,
    revival_periods_two_mode,
    taylor_rabi_residual,
)
