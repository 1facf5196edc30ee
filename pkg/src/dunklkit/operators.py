"""Rational Dunkl operators of types A and B, Cherednik operators, the
Dunkl pairing, and a finite-difference applicator for non-polynomial
functions.

The operators are taken in positive-root form

    T_i = d/dx_i + sum_{alpha in R_+} kappa(alpha) <alpha, e_i> (1 - s_alpha)/<alpha, .>

which fixes the rank-one type B normalization T^B x = 1 + 2*kprime at n=1.
Divided differences (p - s_alpha p)/<alpha, x> are exact polynomial
divisions; a remainder is mathematically impossible and treated as an
internal error.

Operators may act on a designated block of coordinates (`coords`), so that
kernels in two sets of variables can be differentiated in one set while the
other stays formal.
"""

from __future__ import annotations

from fractions import Fraction

from .mpoly import MPoly, SignedPermutation, divide_by_linear
from .params import Params, check_root_system


class MirrorProximityError(ValueError):
    """Evaluation point too close to a reflection hyperplane."""


def _default_coords(p: MPoly, params: Params):
    if p.n != params.n:
        raise ValueError(f"polynomial has {p.n} variables but params.n = {params.n}; "
                         "pass coords to act on a block")
    return tuple(range(params.n))


def apply_dunkl(p: MPoly, i: int, root_system: str, params: Params,
                coords: tuple[int, ...] | None = None) -> MPoly:
    """T_i^R p, exactly.  `i` indexes the block, not the raw variables."""
    check_root_system(root_system)
    if coords is None:
        coords = _default_coords(p, params)
    n = params.n
    k = params.k
    xi = coords[i]
    result = p.partial(xi)
    for j in range(n):
        if j == i:
            continue
        xj = coords[j]
        s = SignedPermutation.transposition(p.n, xi, xj)
        result = result + k * divide_by_linear(p - p.act(s), xi, xj, sign=1)
    if root_system == "B":
        kp = params.kprime
        flip = SignedPermutation.sign_flip(p.n, xi)
        result = result + kp * divide_by_linear(p - p.act(flip), xi, None)
        for j in range(n):
            if j == i:
                continue
            xj = coords[j]
            tau = SignedPermutation.swap_flip(p.n, xi, xj)
            result = result + k * divide_by_linear(p - p.act(tau), xi, xj, sign=-1)
    return result


def apply_poly_of_dunkl(q: MPoly, p: MPoly, root_system: str, params: Params,
                        coords: tuple[int, ...] | None = None) -> MPoly:
    """q(T^R) p.  The Dunkl operators commute, so monomial order is free.

    Intermediate applications T_1^{a_1}...T_m^{a_m} p are memoized across the
    monomials of q (prefix sharing).
    """
    if coords is None:
        coords = _default_coords(p, params)
    memo: dict[tuple[int, ...], MPoly] = {(0,) * params.n: p}

    def applied(expo: tuple[int, ...]) -> MPoly:
        if expo in memo:
            return memo[expo]
        # strip one operator from the highest occupied slot
        i = max(idx for idx, e in enumerate(expo) if e)
        prev = list(expo)
        prev[i] -= 1
        base = applied(tuple(prev))
        out = apply_dunkl(base, i, root_system, params, coords)
        memo[expo] = out
        return out

    result = MPoly.zero(p.n)
    for expo, coeff in sorted(q.terms.items()):
        result = result + coeff * applied(expo)
    return result


def dunkl_pairing(p: MPoly, q: MPoly, root_system: str, params: Params):
    """[p, q]^R = p(T^R) q evaluated at 0.  Symmetric bilinear, exact."""
    return apply_poly_of_dunkl(p, q, root_system, params).constant_term()


def apply_cherednik(p: MPoly, j: int, params: Params,
                    coords: tuple[int, ...] | None = None) -> MPoly:
    """Degree-preserving Cherednik operator

        x_j T_j^A + k(1-n) + k sum_{i>j} s_{ij}.
    """
    if coords is None:
        coords = _default_coords(p, params)
    n = params.n
    k = params.k
    xj = coords[j]
    result = MPoly.var(p.n, xj) * apply_dunkl(p, j, "A", params, coords)
    result = result + k * (1 - n) * p
    for i in range(j + 1, n):
        s = SignedPermutation.transposition(p.n, xj, coords[i])
        result = result + k * p.act(s)
    return result


def positive_roots(n: int, root_system: str):
    """Positive roots as (vector, multiplicity_key) with key in {'k','kprime'}."""
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            v = [0] * n
            v[i], v[j] = 1, -1
            roots.append((tuple(v), "k"))
    if root_system == "B":
        for i in range(n):
            v = [0] * n
            v[i] = 1
            roots.append((tuple(v), "kprime"))
        for i in range(n):
            for j in range(i + 1, n):
                v = [0] * n
                v[i], v[j] = 1, 1
                roots.append((tuple(v), "k"))
    return roots


def reflect(x, alpha):
    """s_alpha x = x - 2 <alpha,x>/<alpha,alpha> alpha."""
    num = sum(a * xi for a, xi in zip(alpha, x))
    den = sum(a * a for a in alpha)
    factor = 2 * num / den
    return tuple(xi - factor * a for xi, a in zip(x, alpha))


def apply_dunkl_numeric(f, x, i: int, root_system: str, params: Params,
                        h: float = 1e-4, richardson: bool = False) -> float:
    """T_i^R f at the point x for a plain scalar function.

    The derivative is a central difference (O(h^2), or O(h^4) with
    `richardson`); the reflection difference quotients are evaluated
    exactly.  Requires x to stay off every mirror: |<alpha,x>| >= 10 h.
    """
    check_root_system(root_system)
    n = params.n
    if len(x) != n:
        raise ValueError("point has wrong length")
    x = tuple(float(v) for v in x)

    def central(step):
        xp = list(x)
        xm = list(x)
        xp[i] += step
        xm[i] -= step
        return (f(tuple(xp)) - f(tuple(xm))) / (2 * step)

    deriv = central(h)
    if richardson:
        deriv = (4 * central(h / 2) - deriv) / 3

    total = deriv
    k = float(params.k)
    kp = complex(params.kprime).real if root_system == "B" else None
    fx = f(x)
    for alpha, key in positive_roots(n, root_system):
        coeff = k if key == "k" else kp
        pairing = sum(a * xi for a, xi in zip(alpha, x))
        if abs(pairing) < 10 * h:
            raise MirrorProximityError(
                f"point {x} is within 10h of the mirror of root {alpha}")
        weight = coeff * alpha[i]
        if weight == 0:
            continue
        total += weight * (fx - f(reflect(x, alpha))) / pairing
    return total


def weight_a(x, params: Params) -> float:
    """omega^A(x) = prod_{i<j} |x_i - x_j|^{2k}."""
    k2 = 2.0 * float(params.k)
    out = 1.0
    for i in range(params.n):
        for j in range(i + 1, params.n):
            out *= abs(x[i] - x[j]) ** k2
    return out


def weight_b(x, params: Params) -> float:
    """omega^B(x) = prod_i |x_i|^{2 kprime} * prod_{i<j} |x_i^2 - x_j^2|^{2k}."""
    kp2 = 2.0 * complex(params.kprime).real
    k2 = 2.0 * float(params.k)
    out = 1.0
    for i in range(params.n):
        out *= abs(x[i]) ** kp2
    for i in range(params.n):
        for j in range(i + 1, params.n):
            out *= abs(x[i] * x[i] - x[j] * x[j]) ** k2
    return out


class DeltaPower:
    """Delta(x)^theta * q(x) with a formal rational exponent theta.

    Delta = x1*...*xn is S_n-invariant, so a type A Dunkl operator acts by

        T_i (Delta^theta q) = Delta^(theta-1) * (theta * q * prod_{l != i} x_l + Delta * T_i q),

    which keeps the representation closed.  Used for conjugation identities
    involving non-integer powers of Delta.
    """

    __slots__ = ("theta", "q")

    def __init__(self, theta, q: MPoly):
        self.theta = theta
        self.q = q

    def apply_dunkl_a(self, i: int, params: Params) -> "DeltaPower":
        n = self.q.n
        cofactor = MPoly.monomial(n, tuple(0 if j == i else 1 for j in range(n)))
        delta = MPoly.product_of_vars(n)
        new_q = self.theta * (self.q * cofactor) + delta * apply_dunkl(self.q, i, "A", params)
        return DeltaPower(self.theta - 1, new_q)

    def apply_delta_of_dunkl_a(self, params: Params) -> "DeltaPower":
        out = self
        for i in range(self.q.n):
            out = out.apply_dunkl_a(i, params)
        return out

    def shift(self, exponent) -> "DeltaPower":
        return DeltaPower(self.theta + exponent, self.q)

    def to_poly(self) -> MPoly:
        """Collapse to a plain polynomial; theta must be a non-negative integer
        or q must be divisible by Delta^(-theta)."""
        theta = Fraction(self.theta)
        q = self.q
        while theta < 0:
            q = _divide_by_delta(q)
            theta = theta + 1
        if theta.denominator != 1:
            raise ValueError(f"residual fractional power Delta^{theta}")
        return q * MPoly.product_of_vars(q.n) ** int(theta)


def _divide_by_delta(q: MPoly) -> MPoly:
    terms = {}
    for expo, coeff in q.terms.items():
        if any(e < 1 for e in expo):
            raise ArithmeticError("polynomial not divisible by Delta")
        terms[tuple(e - 1 for e in expo)] = coeff
    return MPoly(q.n, terms)
