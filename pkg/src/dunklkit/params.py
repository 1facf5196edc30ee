"""Multiplicity parameters shared by every module.

A parameter bundle is (n, k, nu): the rank, the multiplicity on the
difference/sum roots, and the spectral index nu.  Two derived quantities
recur everywhere:

    mu0    = k*(n-1)
    kprime = nu - mu0 - 1/2     (the multiplicity on the short roots +-e_i)

The map nu <-> kprime is an affine bijection for fixed (n, k); kprime is
always recomputed from nu, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int, float, complex]

ROOT_SYSTEMS = ("A", "B")


@dataclass(frozen=True)
class Params:
    """Rank and multiplicity data. `k` must be exact (Fraction/int) and >= 0.

    `nu` may be exact (Fraction/int) for symbolic work or float/complex for
    numeric work; it may be omitted entirely when only type A is used.
    """

    n: int
    k: Fraction
    nu: Scalar | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"rank must be >= 1, got {self.n}")
        if isinstance(self.k, float):
            raise TypeError("k must be exact (int or Fraction)")
        object.__setattr__(self, "k", Fraction(self.k))
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")

    @property
    def mu0(self) -> Fraction:
        return self.k * (self.n - 1)

    @property
    def kprime(self) -> Scalar:
        if self.nu is None:
            raise ValueError("nu is required for type B multiplicities")
        if isinstance(self.nu, (Fraction, int)):
            return Fraction(self.nu) - self.mu0 - Fraction(1, 2)
        return self.nu - float(self.mu0) - 0.5

    @property
    def nu_float(self) -> complex:
        if self.nu is None:
            raise ValueError("nu is required")
        if isinstance(self.nu, Fraction):
            return float(self.nu)
        return self.nu

    def with_nu(self, nu: Scalar) -> "Params":
        return Params(self.n, self.k, nu)

    def exact_b_multiplicities(self) -> tuple[Fraction, Fraction]:
        """(k, kprime) as exact rationals; raises if nu is not exact."""
        if not isinstance(self.nu, (Fraction, int)):
            raise TypeError("exact type B operators need a rational nu")
        return self.k, Fraction(self.nu) - self.mu0 - Fraction(1, 2)


def check_root_system(root_system: str) -> str:
    if root_system not in ROOT_SYSTEMS:
        raise ValueError(f"unknown root system {root_system!r}, expected one of {ROOT_SYSTEMS}")
    return root_system
