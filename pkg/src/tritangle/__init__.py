"""Three-qubit entanglement measures, canonical forms, and teleportation fidelities."""

from .errors import NumericalConsistencyError
from .linalg import herm_eigvals, kron, partial_trace, svd2
from .measures import (
    IdentityReport,
    MeasureSet,
    concurrence_bipartition,
    concurrence_mixed,
    measure_set,
    partial_tangle,
    partial_tangle_closed_form,
    three_tangle,
    validate_density,
    verify_identities,
)
from .states import (
    CanonicalCoeffs,
    CanonicalDecomposition,
    PureState3,
    TwoQubitPure,
    apply_local_unitaries,
    from_canonical,
    haar_random,
    named_state,
    permute_qubits,
    reconstruction_residual,
    reduced_density,
    to_canonical,
)
from .teleport import (
    HADAMARD_SETTING,
    IDENTITY_SETTING,
    MeasurementSetting,
    OutcomeRecord,
    TeleportReport,
    f_closed_form,
    fef_mixed,
    fef_pure,
    fidelity_from_fef,
    main_relation_residual,
    mc_average_fidelity,
    measure_focus,
    optimize_measurement,
    simulate_protocol,
    split_fidelity_objective,
)

__version__ = "0.1.0"

__all__ = [
    "NumericalConsistencyError",
    "herm_eigvals",
    "kron",
    "partial_trace",
    "svd2",
    "IdentityReport",
    "MeasureSet",
    "concurrence_bipartition",
    "concurrence_mixed",
    "measure_set",
    "partial_tangle",
    "partial_tangle_closed_form",
    "three_tangle",
    "validate_density",
    "verify_identities",
    "CanonicalCoeffs",
    "CanonicalDecomposition",
    "PureState3",
    "TwoQubitPure",
    "apply_local_unitaries",
    "from_canonical",
    "haar_random",
    "named_state",
    "permute_qubits",
    "reconstruction_residual",
    "reduced_density",
    "to_canonical",
    "HADAMARD_SETTING",
    "IDENTITY_SETTING",
    "MeasurementSetting",
    "OutcomeRecord",
    "TeleportReport",
    "f_closed_form",
    "fef_mixed",
    "fef_pure",
    "fidelity_from_fef",
    "main_relation_residual",
    "mc_average_fidelity",
    "measure_focus",
    "optimize_measurement",
    "simulate_protocol",
    "split_fidelity_objective",
]
