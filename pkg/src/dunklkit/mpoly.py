"""Exact sparse multivariate polynomials over the rationals.

A polynomial in n variables is a map from exponent tuples to exact
coefficients::

    x1^2*x2 + 3/2   ->   MPoly(2, {(2, 1): Fraction(1), (0, 0): Fraction(3, 2)})

Zero coefficients are never stored, so structural equality of the term maps
is polynomial identity.  Coefficients are `Fraction` by default; Gaussian
rationals (`QQi`) are supported for the few places where complex-rational
multiplicities appear.  Floating point coefficients are deliberately not
supported.

Compositions (exponent tuples) are ordered graded-lexicographically:
first by total degree, then lexicographically with x1 heaviest.  Canonical
rendering lists terms with the highest degree first and parses back
losslessly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import permutations

Composition = tuple[int, ...]


def composition_degree(eta: Composition) -> int:
    return sum(eta)


def composition_sort_key(eta: Composition):
    """Graded-lex key: lower degree first, then lexicographically increasing."""
    return (sum(eta), tuple(-e for e in eta))


def compositions_of_degree(n: int, degree: int) -> list[Composition]:
    """All eta in N_0^n with |eta| = degree, in graded-lex order."""
    out: list[Composition] = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for head in range(remaining, -1, -1):
            rec(prefix + (head,), remaining - head, slots - 1)

    rec((), degree, n)
    return out


def to_partition(eta: Composition) -> Composition:
    """eta -> eta_+, the decreasing rearrangement. Idempotent."""
    return tuple(sorted(eta, reverse=True))


def is_partition(lam: Composition) -> bool:
    return all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1)) and (not lam or lam[-1] >= 0)


def partitions_of_degree(n: int, degree: int) -> list[Composition]:
    return [eta for eta in compositions_of_degree(n, degree) if is_partition(eta)]


class QQi:
    """Gaussian rationals a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_qqi(other)
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_qqi(other))

    def __rsub__(self, other):
        return _as_qqi(other) + (-self)

    def __mul__(self, other):
        other = _as_qqi(other)
        return QQi(self.re * other.re - self.im * other.im,
                   self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_qqi(other)
        d = other.re * other.re + other.im * other.im
        return QQi((self.re * other.re + self.im * other.im) / d,
                   (self.im * other.re - self.re * other.im) / d)

    def __eq__(self, other):
        if isinstance(other, QQi):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


def _as_qqi(v):
    if isinstance(v, QQi):
        return v
    return QQi(v)


def _coeff_to_complex(c) -> complex:
    if isinstance(c, QQi):
        return complex(c)
    return complex(float(c), 0.0)


class SignedPermutation:
    """Element of S_n x Z_2^n acting on points by (g x)_i = signs[i] * x[perm[i]].

    `perm[i]` is the source coordinate feeding slot i, so composition is
    (g o h)(x) = g(h(x)).
    """

    __slots__ = ("perm", "signs")

    def __init__(self, perm, signs=None):
        self.perm = tuple(perm)
        self.signs = tuple(signs) if signs is not None else (1,) * len(self.perm)
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"signs must be +-1: {self.signs}")

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(range(n))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "SignedPermutation":
        perm = list(range(n))
        perm[i], perm[j] = perm[j], perm[i]
        return cls(perm)

    @classmethod
    def sign_flip(cls, n: int, i: int) -> "SignedPermutation":
        signs = [1] * n
        signs[i] = -1
        return cls(range(n), signs)

    @classmethod
    def swap_flip(cls, n: int, i: int, j: int) -> "SignedPermutation":
        """Reflection in e_i + e_j: (x_i, x_j) -> (-x_j, -x_i)."""
        perm = list(range(n))
        perm[i], perm[j] = perm[j], perm[i]
        signs = [1] * n
        signs[i] = signs[j] = -1
        return cls(perm, signs)

    def __call__(self, x):
        return tuple(self.signs[i] * x[self.perm[i]] for i in range(len(self.perm)))

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """self o other (apply other first)."""
        n = len(self.perm)
        perm = [other.perm[self.perm[i]] for i in range(n)]
        signs = [self.signs[i] * other.signs[self.perm[i]] for i in range(n)]
        return SignedPermutation(perm, signs)

    def inverse(self) -> "SignedPermutation":
        n = len(self.perm)
        perm = [0] * n
        signs = [1] * n
        for i in range(n):
            perm[self.perm[i]] = i
            signs[self.perm[i]] = self.signs[i]
        return SignedPermutation(perm, signs)

    def __eq__(self, other):
        return isinstance(other, SignedPermutation) and \
            self.perm == other.perm and self.signs == other.signs

    def __hash__(self):
        return hash((self.perm, self.signs))

    def __repr__(self):
        return f"SignedPermutation({self.perm}, {self.signs})"


def weyl_group(n: int, root_system: str):
    """All elements of W_A = S_n or W_B = S_n x Z_2^n."""
    elems = []
    sign_choices = [(1,) * n] if root_system == "A" else _all_signs(n)
    for perm in permutations(range(n)):
        for signs in sign_choices:
            elems.append(SignedPermutation(perm, signs))
    return elems


def _all_signs(n: int):
    out = [()]
    for _ in range(n):
        out = [s + (1,) for s in out] + [s + (-1,) for s in out]
    return out


class MPoly:
    """Immutable sparse polynomial; arithmetic is exact, zero terms pruned."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        if terms:
            for expo, coeff in terms.items():
                if len(expo) != n:
                    raise ValueError(f"exponent {expo} has wrong length for n={n}")
                if any(e < 0 for e in expo):
                    raise ValueError(f"negative exponent in {expo}")
                if isinstance(coeff, int):
                    coeff = Fraction(coeff)
                if coeff:
                    clean[tuple(expo)] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "MPoly":
        return cls(n, {})

    @classmethod
    def const(cls, n: int, value) -> "MPoly":
        return cls(n, {(0,) * n: value})

    @classmethod
    def one(cls, n: int) -> "MPoly":
        return cls.const(n, 1)

    @classmethod
    def var(cls, n: int, i: int) -> "MPoly":
        expo = [0] * n
        expo[i] = 1
        return cls(n, {tuple(expo): Fraction(1)})

    @classmethod
    def monomial(cls, n: int, expo: Composition, coeff=1) -> "MPoly":
        return cls(n, {tuple(expo): coeff})

    @classmethod
    def product_of_vars(cls, n: int) -> "MPoly":
        """Delta(x) = x1*...*xn."""
        return cls(n, {(1,) * n: Fraction(1)})

    @classmethod
    def sum_of_vars(cls, n: int) -> "MPoly":
        return cls(n, {tuple(1 if j == i else 0 for j in range(n)): Fraction(1)
                       for i in range(n)})

    # -- ring operations ----------------------------------------------------

    def _check_same_n(self, other: "MPoly"):
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.n, other)
        self._check_same_n(other)
        terms = dict(self.terms)
        for expo, coeff in other.terms.items():
            s = terms.get(expo, 0) + coeff
            if s:
                terms[expo] = s
            else:
                terms.pop(expo, None)
        return MPoly(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return MPoly.const(self.n, other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return MPoly(self.n, {e: c * other for e, c in self.terms.items()})
        self._check_same_n(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(expo, 0) + c1 * c2
                if s:
                    terms[expo] = s
                else:
                    terms.pop(expo, None)
        return MPoly(self.n, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative power")
        result = MPoly.one(self.n)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- queries ------------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def coeff(self, expo: Composition):
        return self.terms.get(tuple(expo), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * self.n, Fraction(0))

    def homogeneous_part(self, degree: int) -> "MPoly":
        return MPoly(self.n, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def truncate(self, max_degree: int) -> "MPoly":
        return MPoly(self.n, {e: c for e, c in self.terms.items() if sum(e) <= max_degree})

    # -- evaluation ---------------------------------------------------------

    def eval(self, x) -> complex:
        """Exact coefficients times floating monomials, summed termwise."""
        if len(x) != self.n:
            raise ValueError(f"point has length {len(x)}, expected {self.n}")
        total = 0j
        for expo, coeff in self.terms.items():
            mono = 1.0 + 0j
            for xi, e in zip(x, expo):
                if e:
                    mono *= complex(xi) ** e
            total += _coeff_to_complex(coeff) * mono
        return total

    def eval_exact(self, x):
        """Evaluation staying in the coefficient domain (x rational)."""
        total = Fraction(0)
        for expo, coeff in self.terms.items():
            mono = Fraction(1)
            for xi, e in zip(x, expo):
                if e:
                    mono *= Fraction(xi) ** e
            total = total + coeff * mono
        return total

    def eval_at_ones(self):
        """Exact value at (1, ..., 1): the coefficient sum."""
        total = Fraction(0)
        for coeff in self.terms.values():
            total = total + coeff
        return total

    # -- structure maps -----------------------------------------------------

    def square_vars(self) -> "MPoly":
        """p(x) -> p(x^2), every exponent doubled (x^2 componentwise)."""
        return MPoly(self.n, {tuple(2 * e for e in expo): c
                              for expo, c in self.terms.items()})

    def act(self, g: SignedPermutation) -> "MPoly":
        """Group action (g.p)(x) = p(g^{-1} x)."""
        if len(g.perm) != self.n:
            raise ValueError("group element acts on wrong dimension")
        terms: dict = {}
        for expo, coeff in self.terms.items():
            new_expo = tuple(expo[g.perm[i]] for i in range(self.n))
            sign = 1
            for i in range(self.n):
                if g.signs[i] == -1 and new_expo[i] % 2 == 1:
                    sign = -sign
            s = terms.get(new_expo, 0) + (coeff if sign == 1 else -coeff)
            if s:
                terms[new_expo] = s
            else:
                terms.pop(new_expo, None)
        return MPoly(self.n, terms)

    def partial(self, i: int) -> "MPoly":
        terms = {}
        for expo, coeff in self.terms.items():
            if expo[i]:
                new = list(expo)
                new[i] -= 1
                terms[tuple(new)] = coeff * expo[i]
        return MPoly(self.n, terms)

    def substitute_at(self, assignments: dict) -> "MPoly":
        """Substitute exact rational values for a subset of variables.

        Returns a polynomial in the same n variables with those slots at
        exponent zero.
        """
        terms: dict = {}
        for expo, coeff in self.terms.items():
            c = coeff
            new = list(expo)
            for i, val in assignments.items():
                if expo[i]:
                    c = c * Fraction(val) ** expo[i]
                    new[i] = 0
            key = tuple(new)
            s = terms.get(key, 0) + c
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        return MPoly(self.n, terms)

    # -- rendering ----------------------------------------------------------

    def sorted_terms(self):
        """Terms in canonical print order: highest degree first, then lex."""
        return sorted(self.terms.items(),
                      key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for expo, coeff in self.sorted_terms():
            factors = [_coeff_text(coeff)]
            for i, e in enumerate(expo):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            pieces.append("*".join(factors))
        return " + ".join(pieces)

    def __repr__(self):
        return f"MPoly({self.n}, {self.to_text()!r})"


def _coeff_text(coeff) -> str:
    if isinstance(coeff, QQi):
        raise TypeError("canonical text rendering is defined for rational coefficients")
    return str(coeff)


_TERM_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def poly_from_text(text: str, n: int) -> MPoly:
    """Parse the canonical rendering back into an MPoly (lossless)."""
    text = text.strip()
    if text == "0":
        return MPoly.zero(n)
    terms: dict = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError("empty term")
        factors = chunk.split("*")
        coeff = Fraction(1)
        expo = [0] * n
        saw_coeff = False
        for fac in factors:
            fac = fac.strip()
            m = _TERM_FACTOR.match(fac)
            if m:
                idx = int(m.group(1)) - 1
                if idx < 0 or idx >= n:
                    raise ValueError(f"variable x{idx + 1} out of range for n={n}")
                expo[idx] += int(m.group(2) or 1)
            else:
                if saw_coeff:
                    raise ValueError(f"two coefficients in term {chunk!r}")
                coeff = Fraction(fac)
                saw_coeff = True
        key = tuple(expo)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return MPoly(n, terms)


def divide_by_linear(p: MPoly, i: int, j: int | None, sign: int = 1) -> MPoly:
    """Exact division of p by (x_i - sign*x_j), or by x_i when j is None.

    Raises ArithmeticError when a remainder is left; the Dunkl-operator
    callers rely on divisibility being guaranteed.
    """
    if j is None:
        terms = {}
        for expo, coeff in p.terms.items():
            if expo[i] == 0:
                raise ArithmeticError("division by x_i leaves a remainder")
            new = list(expo)
            new[i] -= 1
            terms[tuple(new)] = coeff
        return MPoly(p.n, terms)

    # Horner-style reduction: c*x^a = c*x^(a - e_i)*(x_i - s*x_j) + s*c*x^(a - e_i + e_j)
    rem = dict(p.terms)
    quot: dict = {}
    # process strictly decreasing x_i degree
    while rem:
        d = max(e[i] for e in rem)
        if d == 0:
            raise ArithmeticError("division by (x_i - s*x_j) leaves a remainder")
        layer = [e for e in rem if e[i] == d]
        for expo in layer:
            coeff = rem.pop(expo)
            qe = list(expo)
            qe[i] -= 1
            qe = tuple(qe)
            s = quot.get(qe, 0) + coeff
            if s:
                quot[qe] = s
            else:
                quot.pop(qe, None)
            ce = list(expo)
            ce[i] -= 1
            ce[j] += 1
            ce = tuple(ce)
            carry = rem.get(ce, 0) + sign * coeff
            if carry:
                rem[ce] = carry
            else:
                rem.pop(ce, None)
    return MPoly(p.n, quot)
