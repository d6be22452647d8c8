"""Exact verification of the nearby-cycles computation on the ramified
unitary local model of signature (n-1, 1)."""
from .charsum import char_convolution_power, jacobi_sum_bruteforce, jacobi_sum_closed, verify_recursion
from .cohomology import (
    FrobWeight,
    SpectralPage,
    WeightedModule,
    build_E1_K,
    build_E1_Z1,
    cohomology_p1_bundle,
    cohomology_projective_space,
    cohomology_quadric,
    compute_E2_Z1,
    kramer_ss_trace,
    lefschetz_consistency,
    nearby_cycles_stalks,
    predicted_point_count,
)
from .errors import (
    ClassificationMismatch,
    DegenerateDegree,
    DivisibilityViolation,
    EpsilonMismatch,
    EvenCharacteristic,
    InvalidInput,
    InvariantViolation,
    NearbyCyclesError,
    NotAUnit,
    NotPrime,
    PageMismatch,
    TooLarge,
    VerificationFailure,
)
from .ffield import FieldDesc, FieldElem, is_norm_unit, make_field, quad_char
from .hermitian import HermitianDatum, classify_hermitian, epsilon_of, residual_quadric
from .localmodel import (
    SpecialFiberAmbient,
    SubspaceBasis,
    build_ambient,
    enumerate_blowup,
    enumerate_special_fiber,
    find_singular_locus,
    stratify_blowup,
)
from .quadric import (
    DiagonalQuadraticForm,
    classify_diagonal_form,
    count_points_weil,
    count_projective_points_bruteforce,
)

__version__ = "0.1.0"
