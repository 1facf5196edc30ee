"""Non-symmetric Jack polynomials E_eta, symmetric P_lambda, and the C/L
renormalizations.

Construction: on each graded monomial space, assemble the matrices of the
Cherednik operators D_j.  They are triangular with respect to a partial
order on compositions, which we recover at run time by topologically
sorting the off-diagonal support; the diagonal entry in column eta is then
the j-th spectral value of E_eta.  Each E_eta is extracted by triangular
back-substitution from the D_1 matrix and verified exactly against every
D_j; if the D_1 eigenvalue collides inside the degree (possible at special
rational k), a joint null-space solve takes over, and a genuinely repeated
joint spectral vector raises `DegenerateMultiplicityError`.

The renormalizations are fixed by

    sum_{|eta|=p} L_eta = sum_{|lambda|=p} C_lambda = (x1+...+xn)^p,

so L_eta = l_eta E_eta and C_lambda = c_lambda P_lambda come from exact
linear solves against the monic bases.

All construction is memoized per (n, k, degree).  A float64 twin of the
table (same Cherednik matrices, float back-substitution) serves the series
evaluator at truncation degrees where exact arithmetic would be wasteful.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .mpoly import (MPoly, SignedPermutation, composition_degree,
                    compositions_of_degree, is_partition, to_partition)
from .operators import apply_cherednik
from .params import Params


class DegenerateMultiplicityError(ArithmeticError):
    """The joint Cherednik spectrum fails to separate compositions at this k."""


class JackConfigurationError(ArithmeticError):
    """A normalization value that must be nonzero vanished."""


def cherednik_matrices(n: int, k: Fraction, degree: int):
    """(basis, index, mats): mats[j][c] is the sparse column {row: coeff} of
    D_j applied to the c-th basis monomial."""
    params = Params(n, k)
    basis = compositions_of_degree(n, degree)
    index = {eta: c for c, eta in enumerate(basis)}
    mats = []
    for j in range(n):
        cols = []
        for eta in basis:
            image = apply_cherednik(MPoly.monomial(n, eta), j, params)
            cols.append({index[e]: coeff for e, coeff in image.terms.items()})
        mats.append(cols)
    return basis, index, mats


def _topological_order(m: int, cols) -> list[int] | None:
    """Kahn sort of the off-diagonal support of a single operator matrix.
    Edge c -> r for every nonzero entry (row r, column c), r != c."""
    children = [[] for _ in range(m)]
    indeg = [0] * m
    for c, col in enumerate(cols):
        for r in col:
            if r != c:
                children[c].append(r)
                indeg[r] += 1
    ready = sorted(i for i in range(m) if indeg[i] == 0)
    order = []
    while ready:
        c = ready.pop()
        order.append(c)
        for r in children[c]:
            indeg[r] -= 1
            if indeg[r] == 0:
                ready.append(r)
    if len(order) != m:
        return None
    return order


class _DegreeData:
    __slots__ = ("basis", "index", "mats", "order", "spectra", "evecs",
                 "l_coeffs", "sym", "c_coeffs")

    def __init__(self):
        self.evecs = {}
        self.l_coeffs = None
        self.sym = {}
        self.c_coeffs = None


class JackBasis:
    """Exact Jack data for one (n, k), memoized by degree."""

    def __init__(self, n: int, k: Fraction):
        self.n = n
        self.k = Fraction(k)
        if self.k < 0:
            raise ValueError("k must be >= 0")
        self.params = Params(n, self.k)
        self._degrees: dict[int, _DegreeData] = {}

    # -- construction -------------------------------------------------------

    def _degree(self, d: int) -> _DegreeData:
        data = self._degrees.get(d)
        if data is None:
            data = _DegreeData()
            data.basis, data.index, data.mats = cherednik_matrices(self.n, self.k, d)
            data.order = _topological_order(len(data.basis), data.mats[0])
            data.spectra = [tuple(data.mats[j][c].get(c, Fraction(0))
                                  for j in range(self.n))
                            for c in range(len(data.basis))]
            self._degrees[d] = data
        return data

    def spectral_vector(self, eta) -> tuple[Fraction, ...]:
        """Joint Cherednik eigenvalues of E_eta, read off the triangular diagonal."""
        eta = tuple(eta)
        data = self._degree(composition_degree(eta))
        return data.spectra[data.index[eta]]

    def nonsymmetric(self, eta) -> MPoly:
        """Monic E_eta, the joint eigenvector at the spectral vector of eta."""
        eta = tuple(eta)
        if len(eta) != self.n:
            raise ValueError(f"composition length {len(eta)} != n = {self.n}")
        d = composition_degree(eta)
        data = self._degree(d)
        c0 = data.index[eta]
        poly = data.evecs.get(c0)
        if poly is None:
            vec = self._eigenvector(data, c0)
            poly = MPoly(self.n, {data.basis[r]: v for r, v in vec.items() if v})
            data.evecs[c0] = poly
        return poly

    def _eigenvector(self, data: _DegreeData, c0: int) -> dict[int, Fraction]:
        vec = None
        if data.order is not None:
            vec = self._triangular_eigenvector(data, c0)
        if vec is None or not self._verify(data, c0, vec):
            vec = self._joint_nullspace(data, c0)
        return vec

    def _triangular_eigenvector(self, data, c0):
        t = data.spectra[c0][0]
        m1 = data.mats[0]
        pos = {c: p for p, c in enumerate(data.order)}
        vec = {c0: Fraction(1)}
        # incoming[r] = contributions M1[r][c] v[c] accumulated column by column
        incoming: dict[int, Fraction] = {}
        for c in data.order[pos[c0]:]:
            if c == c0:
                v = Fraction(1)
            else:
                num = incoming.pop(c, None)
                if num is None:
                    continue
                den = t - data.mats[0][c].get(c, Fraction(0))
                if den == 0:
                    return None  # D_1 eigenvalue collision, use the joint solve
                v = num / den
                if not v:
                    continue
                vec[c] = v
            for r, coeff in m1[c].items():
                if r != c:
                    incoming[r] = incoming.get(r, Fraction(0)) + coeff * v
        return vec

    def _verify(self, data, c0, vec) -> bool:
        spectrum = data.spectra[c0]
        for j in range(self.n):
            image: dict[int, Fraction] = {}
            for c, v in vec.items():
                for r, coeff in data.mats[j][c].items():
                    image[r] = image.get(r, Fraction(0)) + coeff * v
            for r in set(image) | set(vec):
                if image.get(r, Fraction(0)) != spectrum[j] * vec.get(r, Fraction(0)):
                    return False
        return True

    def _joint_nullspace(self, data, c0):
        m = len(data.basis)
        spectrum = data.spectra[c0]
        rows = []
        for j in range(self.n):
            dense = [[Fraction(0)] * m for _ in range(m)]
            for c, col in enumerate(data.mats[j]):
                for r, coeff in col.items():
                    dense[r][c] = coeff
            for r in range(m):
                row = dense[r][:]
                row[r] = row[r] - spectrum[j]
                if any(row):
                    rows.append(row)
        basis_vectors = _exact_nullspace(rows, m)
        if len(basis_vectors) != 1:
            raise DegenerateMultiplicityError(
                f"joint spectrum {spectrum} has multiplicity {len(basis_vectors)} "
                f"at k = {self.k} (degree {composition_degree(data.basis[c0])})")
        v = basis_vectors[0]
        if v[c0] == 0:
            raise DegenerateMultiplicityError(
                f"eigenvector misses its leading monomial at k = {self.k}")
        scale = v[c0]
        return {r: val / scale for r, val in enumerate(v) if val}

    # -- symmetric and renormalized families ---------------------------------

    def symmetric(self, lam) -> MPoly:
        """Monic symmetric P_lambda via symmetrization of E_lambda."""
        lam = tuple(lam)
        if not is_partition(lam):
            raise ValueError(f"{lam} is not a partition")
        d = composition_degree(lam)
        data = self._degree(d)
        cached = data.sym.get(lam)
        if cached is not None:
            return cached
        e = self.nonsymmetric(lam)
        total = MPoly.zero(self.n)
        for sigma in _permutation_group(self.n):
            total = total + e.act(sigma)
        lead = total.coeff(lam)
        if lead == 0:
            raise JackConfigurationError("symmetrization lost the leading term")
        p = (Fraction(1) / lead) * total
        data.sym[lam] = p
        return p

    def l_coefficient(self, eta) -> Fraction:
        """l_eta with L_eta = l_eta E_eta and sum_{|eta|=p} L_eta = (sum x_i)^p."""
        eta = tuple(eta)
        d = composition_degree(eta)
        data = self._degree(d)
        if data.l_coeffs is None:
            data.l_coeffs = self._solve_l(d, data)
        return data.l_coeffs[eta]

    def _solve_l(self, d: int, data) -> dict:
        # joint-nullspace eigenvectors may fall outside the D_1 triangular
        # structure, so solve the full change-of-basis system directly
        m = len(data.basis)
        rhs_poly = MPoly.sum_of_vars(self.n) ** d
        cols = {c: self.nonsymmetric(data.basis[c]) for c in range(m)}
        rows = []
        for r in range(m):
            mono = data.basis[r]
            row = [cols[c].coeff(mono) for c in range(m)]
            row.append(rhs_poly.coeff(mono))
            rows.append(row)
        sol = _exact_solve(rows, m)
        if sol is None:
            raise AssertionError("L-normalization system is singular")
        check = MPoly.zero(self.n)
        for c in range(m):
            if sol[c]:
                check = check + sol[c] * cols[c]
        if check != rhs_poly:
            raise AssertionError("L-normalization solve failed")
        return {data.basis[c]: sol[c] for c in range(m)}

    def c_coefficient(self, lam) -> Fraction:
        """c_lambda with C_lambda = c_lambda P_lambda summing to (sum x_i)^p."""
        lam = tuple(lam)
        d = composition_degree(lam)
        data = self._degree(d)
        if data.c_coeffs is None:
            data.c_coeffs = self._solve_c(d)
        return data.c_coeffs[lam]

    def _solve_c(self, d: int) -> dict:
        parts = [lam for lam in compositions_of_degree(self.n, d) if is_partition(lam)]
        polys = {lam: self.symmetric(lam) for lam in parts}
        m = len(parts)
        # square system on partition-indexed monomial rows
        rows = []
        rhs_poly = MPoly.sum_of_vars(self.n) ** d
        for mu in parts:
            row = [polys[lam].coeff(mu) for lam in parts]
            row.append(rhs_poly.coeff(mu))
            rows.append(row)
        sol = _exact_solve(rows, m)
        if sol is None:
            raise AssertionError("C-normalization system is singular")
        check = MPoly.zero(self.n)
        for lam, c in zip(parts, sol):
            check = check + c * polys[lam]
        if check != rhs_poly:
            raise AssertionError("C-normalization solve failed")
        return dict(zip(parts, sol))

    def l_poly(self, eta) -> MPoly:
        return self.l_coefficient(eta) * self.nonsymmetric(eta)

    def c_poly(self, lam) -> MPoly:
        return self.c_coefficient(lam) * self.symmetric(lam)

    def e_at_ones(self, eta) -> Fraction:
        return self.nonsymmetric(eta).eval_at_ones()

    def l_at_ones(self, eta) -> Fraction:
        value = self.l_coefficient(eta) * self.e_at_ones(eta)
        if value == 0:
            raise JackConfigurationError(f"L_{eta}(1,...,1) = 0 at k = {self.k}")
        return value

    def c_at_ones(self, lam) -> Fraction:
        value = self.c_coefficient(lam) * self.symmetric(lam).eval_at_ones()
        if value == 0:
            raise JackConfigurationError(f"C_{lam}(1,...,1) = 0 at k = {self.k}")
        return value


def _permutation_group(n: int):
    from itertools import permutations
    return [SignedPermutation(p) for p in permutations(range(n))]


def _exact_nullspace(rows, m):
    """Null space basis of the stacked Fraction matrix (list of length-m rows)."""
    mat = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(m) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for pr, pc in enumerate(pivots):
            v[pc] = -mat[pr][fc]
        out.append(v)
    return out


def _exact_solve(aug_rows, m):
    """Solve the square augmented system (each row has m+1 entries)."""
    mat = [row[:] for row in aug_rows]
    for c in range(m):
        pivot = next((i for i in range(c, m) if mat[i][c] != 0), None)
        if pivot is None:
            return None
        mat[c], mat[pivot] = mat[pivot], mat[c]
        inv = Fraction(1) / mat[c][c]
        mat[c] = [v * inv for v in mat[c]]
        for i in range(m):
            if i != c and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
    return [mat[i][m] for i in range(m)]


_BASIS_CACHE: dict[tuple[int, Fraction], JackBasis] = {}


def get_jack_basis(n: int, k) -> JackBasis:
    key = (n, Fraction(k))
    basis = _BASIS_CACHE.get(key)
    if basis is None:
        basis = JackBasis(n, Fraction(k))
        _BASIS_CACHE[key] = basis
    return basis


# -- spec-level convenience wrappers ----------------------------------------

def nonsymmetric_jack(eta, params: Params) -> MPoly:
    return get_jack_basis(params.n, params.k).nonsymmetric(eta)


def symmetric_jack(lam, params: Params) -> MPoly:
    return get_jack_basis(params.n, params.k).symmetric(lam)


def normalize_c(p: int, params: Params) -> dict:
    """Coefficients c_lambda with sum_{|lambda|=p} c_lambda P_lambda = (sum x_i)^p."""
    basis = get_jack_basis(params.n, params.k)
    return {lam: basis.c_coefficient(lam)
            for lam in compositions_of_degree(params.n, p) if is_partition(lam)}


def normalize_l(p: int, params: Params) -> dict:
    """Coefficients l_eta with sum_{|eta|=p} l_eta E_eta = (sum x_i)^p."""
    basis = get_jack_basis(params.n, params.k)
    return {eta: basis.l_coefficient(eta)
            for eta in compositions_of_degree(params.n, p)}


def eval_at_ones(q: MPoly):
    return q.eval_at_ones()


# -- float64 twin ------------------------------------------------------------

class JackBasisF:
    """Float64 Jack data for the numeric series engine.

    Same Cherednik matrices as the exact table (built exactly, then cast);
    eigenvectors by float back-substitution along the same topological
    order.  Exposes per-degree arrays:

        expos[d]  : (m, n) int exponents
        ecoef[d]  : (m, m) float, row c = coefficients of E_eta_c over expos
        lvec[d]   : (m,) float, L_eta = lvec * E_eta
        eones[d]  : (m,) float, E_eta(1,...,1)
        part_idx[d], ccoef[d], cones[d]: the symmetric C-family analogues
    """

    def __init__(self, n: int, k):
        self.n = n
        self.k = Fraction(k)
        self._cache: dict[int, dict] = {}

    def degree_data(self, d: int) -> dict:
        data = self._cache.get(d)
        if data is None:
            data = self._build(d)
            self._cache[d] = data
        return data

    def _build(self, d: int) -> dict:
        basis, index, mats = cherednik_matrices(self.n, self.k, d)
        m = len(basis)
        order = _topological_order(m, mats[0])
        if order is None:
            raise DegenerateMultiplicityError(f"no triangular order at degree {d}")
        m1 = np.zeros((m, m))
        for c, col in enumerate(mats[0]):
            for r, coeff in col.items():
                m1[r, c] = float(coeff)
        diag = m1.diagonal().copy()
        pos = np.empty(m, dtype=int)
        for p, c in enumerate(order):
            pos[c] = p
        ecoef = np.zeros((m, m))
        for c0 in range(m):
            t = diag[c0]
            v = np.zeros(m)
            v[c0] = 1.0
            for c in order[pos[c0] + 1:]:
                num = m1[c, :] @ v
                if num == 0.0:
                    continue
                den = t - diag[c]
                if den == 0.0:
                    raise DegenerateMultiplicityError(
                        f"float spectral collision at degree {d}, k = {self.k}")
                v[c] = num / den
            ecoef[c0, :] = v
        expos = np.array(basis, dtype=np.int64)

        # L-normalization: unitriangular solve along `order`
        rhs_poly = MPoly.sum_of_vars(self.n) ** d
        rhs = np.array([float(rhs_poly.coeff(e)) for e in basis])
        lvec = np.zeros(m)
        for c in order:
            val = rhs[c]
            lvec[c] = val
            if val:
                rhs -= val * ecoef[c, :]
                rhs[c] = 0.0
        eones = ecoef.sum(axis=1)

        # symmetric family: P by symmetrizing E over S_n, C by a square solve
        part_cols = [c for c, e in enumerate(basis) if is_partition(e)]
        perms = _permutation_group(self.n)
        remaps = []
        for sigma in perms:
            remap = np.array([index[tuple(basis[r][sigma.perm[i]]
                                          for i in range(self.n))]
                              for r in range(m)], dtype=int)
            remaps.append(remap)
        pcoef = np.zeros((len(part_cols), m))
        for row, c in enumerate(part_cols):
            acc = np.zeros(m)
            for remap in remaps:
                acc[remap] += ecoef[c, :]
            acc /= acc[c]
            pcoef[row, :] = acc
        square = pcoef[:, part_cols].T
        rhsc = np.array([float(rhs_poly.coeff(basis[c])) for c in part_cols])
        cvec = np.linalg.solve(square, rhsc)
        data = {
            "basis": basis,
            "index": index,
            "expos": expos,
            "ecoef": ecoef,
            "lvec": lvec,
            "eones": eones,
            "partitions": [basis[c] for c in part_cols],
            "pcoef": pcoef,
            "cvec": cvec,
            "pones": pcoef.sum(axis=1),
        }
        return data


_BASISF_CACHE: dict[tuple[int, Fraction], JackBasisF] = {}


def get_jack_basis_float(n: int, k) -> JackBasisF:
    key = (n, Fraction(k))
    basis = _BASISF_CACHE.get(key)
    if basis is None:
        basis = JackBasisF(n, Fraction(k))
        _BASISF_CACHE[key] = basis
    return basis
