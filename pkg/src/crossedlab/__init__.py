"""Numerical laboratory for smooth crossed products of Schwartz functions
by one-parameter matrix automorphism groups, on the line and on the circle.

The package discretizes rapidly decreasing functions on power-of-two grids,
implements twisted convolution algebras, the two-variable module picture,
and the short exact sequence built from the coordinate-difference ideal,
then verifies the defining operator identities with quantified residuals.
"""

from .algebra import (
    Action,
    BoundCertificate,
    act,
    act_field,
    derivative_constants,
    generator_power,
    generator_power_field,
    growth_polynomial,
    matrix_norms,
    nilpotent_conjugation,
    propagators,
    random_circle_generator,
    random_hermitian,
    random_matrix,
    random_nilpotent,
    same_action,
    seminorm,
    sup_norm,
    tempered_certificate,
    trivial_action,
    unitary_conjugation,
)
from .config import LabConfig, TestInputSpec, load_config
from .crossed import (
    CrossedElement,
    algebra_act_left,
    algebra_act_right,
    alt_product_iso,
    apply_twist,
    plane_act_left,
    plane_act_right,
    plane_algebra_left,
    plane_algebra_right,
    twisted_convolve,
    twisted_convolve_alt,
    twisted_derivative,
)
from .errors import (
    BoundViolationError,
    ConfigError,
    DimensionMismatchError,
    DomainTruncationError,
    GridMismatchError,
    LabError,
    MeanNotZeroError,
    NotInIdealError,
)
from .schwartz import (
    BiSampledFunction,
    CircleGrid,
    LineGrid,
    SampledFunction,
    convolve,
    cumulative_integral,
    differentiate,
    dump_csv,
    edge_mass,
    fourier_transform,
    fourier_transform_plane,
    hadamard_divide,
    integrate,
    pointwise_multiply,
    seminorm_kl,
)
from .sequences import (
    BumpFunction,
    TensorElement,
    antidiagonal_integral,
    constant_section,
    plane_derivation,
    plane_section,
    splitting_homotopy,
    standard_bump,
    tensor_derivation,
    tensor_mult,
    tensor_to_bifunction,
)
from .verify import (
    Check,
    SUITES,
    VerificationReport,
    convergence_study,
    random_plane,
    random_schwartz,
    run_suite,
    run_suites,
)

__version__ = "0.1.0"
