"""dunklkit: exact-symbolic and numerical Dunkl-type special functions.

Rank-n reflection-group analysis at desk scale: sparse exact polynomials,
rational Dunkl and Cherednik operators (types A and B), non-symmetric and
symmetric Jack polynomials with their C/L renormalizations, generalized
gamma/Pochhammer/Bernstein scalars, Jack-hypergeometric kernel series,
weighted quadrature on the orthant, the Hankel transform, K-Bessel
functions, and zeta integrals with analytic continuation.  The `verify`
CLI suite re-derives the defining identities mechanically.
"""

from fractions import Fraction

from .mpoly import MPoly, QQi, SignedPermutation, poly_from_text
from .params import Params
from .operators import (apply_cherednik, apply_dunkl, apply_dunkl_numeric,
                        apply_poly_of_dunkl, dunkl_pairing)
from .jack import (JackBasis, get_jack_basis, nonsymmetric_jack, symmetric_jack,
                   normalize_c, normalize_l)
from .scalars import (bernstein_b, bernstein_bb, c_a, c_b, gamma_n,
                      pochhammer_gen, rho_vector)
from .series import (HypSpec, TruncationConfig, bessel_kernel, dunkl_kernel_a,
                     hyp_eval)
from .quadrature import QuadratureSpec, integrate_orthant, integrate_rn_b
from .transforms import (GaussPoly, ZetaRequest, dunkl_transform_b_even,
                         functional_equation_check, hankel, kbessel,
                         kbessel_shifted, zeta_distribution, zeta_integral)

__all__ = [
    "Fraction", "MPoly", "QQi", "SignedPermutation", "poly_from_text", "Params",
    "apply_cherednik", "apply_dunkl", "apply_dunkl_numeric",
    "apply_poly_of_dunkl", "dunkl_pairing",
    "JackBasis", "get_jack_basis", "nonsymmetric_jack", "symmetric_jack",
    "normalize_c", "normalize_l",
    "bernstein_b", "bernstein_bb", "c_a", "c_b", "gamma_n", "pochhammer_gen",
    "rho_vector",
    "HypSpec", "TruncationConfig", "bessel_kernel", "dunkl_kernel_a", "hyp_eval",
    "QuadratureSpec", "integrate_orthant", "integrate_rn_b",
    "GaussPoly", "ZetaRequest", "dunkl_transform_b_even",
    "functional_equation_check", "hankel", "kbessel", "kbessel_shifted",
    "zeta_distribution", "zeta_integral",
]

__version__ = "0.1.0"
