"""Scalar special values: the generalized gamma Gamma_n, the generalized
Pochhammer symbol, the Bernstein polynomials b and B, the shift vector rho,
and the Gaussian normalization constants c_A, c_B.

Gamma_n is built from classical gamma values,

    Gamma_n(z) = c_A (2 pi)^(-n/2) prod_j Gamma(z_j - k (j-1)),

with c_A given by the Mehta-Macdonald closed form

    c_A = (2 pi)^(n/2) prod_{j=1..n} Gamma(1 + j k) / Gamma(1 + k),

so the (2 pi) powers cancel in Gamma_n.  The quadrature engine validates the
closed form against the defining Gaussian integral in the test suite.

The Pochhammer symbol is always computed as the finite rising product

    [alpha]_lambda = prod_j prod_{i=0..lambda_j-1} (alpha - k(j-1) + i),

never as a gamma quotient, so it stays exact on exact inputs and pole-free
whenever possible.
"""

from __future__ import annotations

import math
from fractions import Fraction

from scipy.special import gamma as _cgamma

from .params import Params


class GammaPoleError(ArithmeticError):
    """A classical gamma factor was requested at a non-positive integer."""


def classical_gamma(z) -> complex:
    """Gamma(z) for real or complex z, with explicit pole detection."""
    zc = complex(z)
    if zc.imag == 0.0 and zc.real <= 0.0 and zc.real == int(zc.real):
        raise GammaPoleError(f"gamma pole at {zc.real}")
    return complex(_cgamma(zc))


def mehta_ratio(params: Params) -> float:
    """prod_{j=1..n} Gamma(1 + j k)/Gamma(1 + k) = c_A (2 pi)^(-n/2)."""
    k = float(params.k)
    out = 1.0
    for j in range(1, params.n + 1):
        out *= float(_cgamma(1.0 + j * k)) / float(_cgamma(1.0 + k))
    return out


def c_a(params: Params) -> float:
    """c_A = integral of exp(-|x|^2/2) omega^A(x) over R^n, in closed form."""
    return (2.0 * math.pi) ** (params.n / 2.0) * mehta_ratio(params)


def gamma_n(z, params: Params) -> complex:
    """Generalized gamma at a scalar (meaning z*(1,...,1)) or a vector."""
    zs = _as_vector(z, params.n)
    k = float(params.k)
    prod = complex(mehta_ratio(params))
    for j, zj in enumerate(zs):
        prod *= classical_gamma(complex(zj) - k * j)
    return prod


def _as_vector(z, n: int):
    if isinstance(z, (tuple, list)):
        if len(z) != n:
            raise ValueError(f"gamma argument has length {len(z)}, expected {n}")
        return tuple(z)
    return (z,) * n


def pochhammer_gen(alpha, lam, params: Params):
    """[alpha]_lambda as a rising product; exact when alpha and k are exact."""
    k = params.k
    if isinstance(alpha, (int, Fraction)):
        alpha = Fraction(alpha)
        out = Fraction(1)
    else:
        k = float(k)
        out = 1.0 + 0.0j if isinstance(alpha, complex) else 1.0
    for j, lj in enumerate(lam):
        base = alpha - k * j
        for i in range(lj):
            out = out * (base + i)
    return out


def bernstein_b(mu, params: Params):
    """b(mu) = prod_{j=1..n} (mu + k(j-1)); satisfies
    Delta(T^A) Delta(x)^mu = b(mu) Delta(x)^(mu-1)."""
    k = params.k if isinstance(mu, (int, Fraction)) else float(params.k)
    out = mu * 0 + 1
    for j in range(params.n):
        out = out * (mu + k * j)
    return out


def bernstein_bb(mu, params: Params):
    """B(mu) = 4^n b(mu) b(mu + nu - mu0 - 1); the shift polynomial in
    Delta(T^B)^2 Delta(x^2)^mu = B(mu) Delta(x^2)^(mu-1)."""
    nu = params.nu
    if isinstance(mu, (int, Fraction)) and isinstance(nu, (int, Fraction)):
        shift = Fraction(mu) + Fraction(nu) - params.mu0 - 1
    else:
        shift = complex(mu) + complex(nu) - float(params.mu0) - 1.0
    return 4 ** params.n * bernstein_b(mu, params) * bernstein_b(shift, params)


def rho_vector(params: Params) -> tuple[Fraction, ...]:
    """rho(k) = -(k/2) (n-1, n-3, ..., -n+3, -n+1); sums to zero."""
    n = params.n
    return tuple(-params.k * Fraction(n - 1 - 2 * j, 2) for j in range(n))


def c_b(params: Params) -> complex:
    """c_B = 2^(n nu) Gamma_n(nu), the type B Gaussian normalization."""
    nu = params.nu_float
    return 2.0 ** (params.n * nu) * gamma_n(nu, params)
