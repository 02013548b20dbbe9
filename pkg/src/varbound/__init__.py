"""Parameterized variance-based sum uncertainty bounds for N observables."""

from .bounds import (
    BoundEvaluation,
    BranchChoice,
    Family,
    lb1,
    lb1_permuted,
    lb2,
    song_bound,
    sum_variances,
    thm2_bounds,
    zhang_bound,
)
from .catalog import (
    ExampleSpec,
    angular_momentum,
    bloch_state,
    example_set,
    example_state,
    isotropic_state,
    pauli,
    random_instance,
    spin1_pure,
)
from .linalg_core import (
    DensityMatrix,
    Observable,
    ObservableSet,
    eig_hermitian,
    is_common_eigenvector,
    kron,
    matrix_sqrt_psd,
    observable_set,
    pure_state,
    validate_density,
    validate_observable,
    vectorize,
)
from .optimizer import GridSpec, OptimizationResult, compare_report, optimize_lb1, optimize_lb2
from .variance import linear_combo, mean_value, stddev, variance, variance_via_vectorization

__version__ = "0.1.0"
