"""Numerical toolkit for Orlicz-space potential theory."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .bessel import (
    BesselKernel,
    IncrementKernelConfig,
    bessel_inverse,
    calderon_inversion,
    hs_norm,
    increment_kernel_apply,
    l1_modulus,
    potential,
    singular_gradient_apply,
    synthesize_kernel,
)
from .errors import (
    ConditioningError,
    ConfigError,
    ConjugateRangeError,
    CostGuardError,
    DomainError,
    ExtrapolationError,
    GridMismatchError,
    NumericError,
    OrliczLabError,
)
from .family import make_family
from .field import Field, Grid, ProductField, convolve, integrate, load_field, maximal_function, save_field
from .lpatoms import AtomicDecomposition, FilterBank, atom_validate, atomic_decompose, build_filter_bank, triebel_norm
from .orlicz import NormResult, luxemburg_norm, modular
from .radial import RadialProfile, ball_convolution, lift, strauss_ratio
from .sobolev import GagliardoQuadrature, gagliardo_modular, gagliardo_seminorm, sobolev_norm, w1_seminorm
from .suites import SuiteConfig, run_suite
from .young import YoungFunction, conjugate, delta2_indices, parse_young
