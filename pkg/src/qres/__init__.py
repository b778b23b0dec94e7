"""Fidelity-based purity, coherence and measurement-induced correlation measures."""
from .channels import (
    KrausChannel,
    apply_channel,
    mixture_of_unitaries,
    noisy_operation,
    sample_incoherent_channel,
    stinespring_isometry,
)
from .coherence import coherence_fidelity, coherence_l1, maximal_coherence, tau_classifier
from .fidelity import fidelity, fidelity_alt, fidelity_uhlmann
from .harness import check_f_properties, run_harness
from .linalg import eig_hermitian, hs_inner, partial_trace, psd_sqrt, tensor
from .measurement import (
    ProjectiveMeasurement,
    WeakMeasurement,
    apply_measurement,
    coherence_rel_measurement,
    delta_coherence,
    fmin,
    quantum_correlation,
    weak_apply,
    weak_fidelity,
    weak_measurement,
    weak_purity,
)
from .purity import fidelity_purity, hs_purity, linear_purity, purity_from_gamma
from .states import (
    BipartiteState,
    DensityMatrix,
    GeneratorBasis,
    ValidationError,
    bell_diagonal,
    bloch_expand,
    classical_quantum,
    correlation_matrix,
    generator_basis,
    random_density,
    werner,
)

__version__ = "0.1.0"
