"""Two-variable hypergeometric series of Jack polynomials: pKq over
compositions (L-normalized, non-symmetric) and pFq over partitions
(C-normalized, symmetric), plus the kernels built from them: the Dunkl
kernel 0K0 = E^A, the Bessel function 0F0 = J^A, and the Bessel kernels

    E_nu(w, z) = 0K1(nu; w, -z),     J_nu(w, z) = 0F1(nu; w, -z).

Evaluation sums whole degree layers; the report carries the magnitude of
the last layer as the accuracy proxy (the series have no closed remainder
bounds).  Terms alternate for the Bessel kernels, so the evaluator tracks
the largest layer and refuses (ScalingGuardError) when float64 cancellation
would exceed the requested tail tolerance.

Exact layer polynomials (in 2n formal variables, w-block then z-block) are
available for the symbolic identity checks; the float path shares the same
Jack tables in float64.

Closed forms used by the quadrature layer: E^A is exp(x z) at n=1, and at
n=2 it factorizes across span{(1,1)} + span{(1,-1)} into

    E^A(x,z) = exp((x1+x2)(z1+z2)/2) * [0F1(k+1/2; q^2/4) + q/(2k+1) * 0F1(k+3/2; q^2/4)]

with q = (x1-x2)(z1-z2)/2 (the one-variable reflection-group kernel in the
difference coordinate).  The truncated series cross-checks these in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import hyp0f1 as _hyp0f1_real

from .jack import get_jack_basis, get_jack_basis_float
from .mpoly import MPoly, to_partition
from .params import Params
from .scalars import pochhammer_gen


class InadmissibleParameterError(ValueError):
    """A denominator parameter sits in {0, k, ..., k(n-1)} - N_0."""


class SeriesDomainError(ValueError):
    """p = q+1 series requested outside ||w||_inf ||z||_inf < 1."""


class ScalingGuardError(ArithmeticError):
    """Layer magnitudes grew past the float64 cancellation budget."""


@dataclass(frozen=True)
class TruncationConfig:
    max_degree: int = 30
    tail_tol: float = 1e-12


@dataclass(frozen=True)
class HypSpec:
    p_params: tuple
    q_params: tuple
    kind: str = "K"  # "K": compositions / L; "F": partitions / C

    def __post_init__(self):
        if self.kind not in ("K", "F"):
            raise ValueError(f"kind must be 'K' or 'F', got {self.kind!r}")


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    last_layer: float
    max_layer: float
    degree_used: int
    converged: bool


def check_admissibility(spec: HypSpec, params: Params, depth: int):
    """Reject nu_i in {0, k, ..., k(n-1)} - N_0, probed down to `depth`."""
    k = float(params.k)
    for nu_i in spec.q_params:
        v = complex(nu_i)
        if v.imag != 0.0:
            continue
        for j in range(params.n):
            for m in range(depth + 1):
                if abs(v.real - (k * j - m)) < 1e-12:
                    raise InadmissibleParameterError(
                        f"denominator parameter {nu_i} = k*{j} - {m} is inadmissible")


def _mono_values(x, expos: np.ndarray) -> np.ndarray:
    """Monomial values x^eta for every row eta of expos; x is a point."""
    xa = np.asarray(x)
    if np.iscomplexobj(xa):
        xa = xa.astype(complex)
    else:
        xa = xa.astype(float)
    return np.prod(xa[None, :] ** expos, axis=1)


def _layer_ratio(spec: HypSpec, params: Params, partition) -> complex:
    num = 1.0 + 0j
    for mu in spec.p_params:
        num *= complex(pochhammer_gen(complex(mu), partition, params))
    den = 1.0 + 0j
    for nu in spec.q_params:
        den *= complex(pochhammer_gen(complex(nu), partition, params))
    return num / den


def hyp_eval(spec: HypSpec, w, z, trunc: TruncationConfig, params: Params) -> SeriesValue:
    """Truncated pKq / pFq value at (w, z) with a tail report."""
    check_admissibility(spec, params, trunc.max_degree)
    if len(spec.p_params) == len(spec.q_params) + 1:
        if max(abs(complex(v)) for v in w) * max(abs(complex(v)) for v in z) >= 1.0:
            raise SeriesDomainError("p = q+1 series needs ||w||_inf ||z||_inf < 1")
    elif len(spec.p_params) > len(spec.q_params) + 1:
        raise SeriesDomainError("series with p > q+1 diverge")
    table = get_jack_basis_float(params.n, params.k)
    total = 0j
    last = 0.0
    biggest = 0.0
    converged = False
    quiet = 0
    d_used = 0
    for d in range(trunc.max_degree + 1):
        data = table.degree_data(d)
        if spec.kind == "K":
            mono_w = _mono_values(w, data["expos"])
            mono_z = _mono_values(z, data["expos"])
            e_w = data["ecoef"] @ mono_w
            e_z = data["ecoef"] @ mono_z
            lvec = data["lvec"]
            eones = data["eones"]
            ratios = np.array([_layer_ratio(spec, params, to_partition(eta))
                               for eta in data["basis"]])
            lones = lvec * eones
            if np.any(lones == 0.0):
                raise ZeroDivisionError("L_eta(1,...,1) vanished; invalid configuration")
            layer = np.sum(ratios * lvec * e_w * e_z / (math.factorial(d) * eones))
        else:
            part = data["partitions"]
            pexpos = data["expos"]
            mono_w = _mono_values(w, pexpos)
            mono_z = _mono_values(z, pexpos)
            p_w = data["pcoef"] @ mono_w
            p_z = data["pcoef"] @ mono_z
            cvec = data["cvec"]
            pones = data["pones"]
            cones = cvec * pones
            if np.any(cones == 0.0):
                raise ZeroDivisionError("C_lambda(1,...,1) vanished; invalid configuration")
            ratios = np.array([_layer_ratio(spec, params, lam) for lam in part])
            layer = np.sum(ratios * cvec * p_w * p_z / (math.factorial(d) * pones))
        total += layer
        last = abs(layer)
        biggest = max(biggest, last)
        d_used = d
        scale = max(abs(total), 1e-300)
        if biggest > 1e6 * scale and biggest > 1e6:
            raise ScalingGuardError(
                f"layer magnitude {biggest:.3e} dwarfs partial sum {abs(total):.3e}")
        if last <= trunc.tail_tol * scale:
            quiet += 1
            if quiet >= 2:
                converged = True
                break
        else:
            quiet = 0
    return SeriesValue(complex(total), last, biggest, d_used, converged)


def dunkl_kernel_a(w, z, trunc: TruncationConfig, params: Params) -> SeriesValue:
    """E^A(w, z) = 0K0(w, z)."""
    return hyp_eval(HypSpec((), (), "K"), w, z, trunc, params)


def bessel_j_a(w, z, trunc: TruncationConfig, params: Params) -> SeriesValue:
    """J^A(w, z) = 0F0(w, z), the S_n-mean of the Dunkl kernel."""
    return hyp_eval(HypSpec((), (), "F"), w, z, trunc, params)


def bessel_kernel(kind: str, nu, w, z, trunc: TruncationConfig, params: Params) -> SeriesValue:
    """E_nu (kind 'E', non-symmetric) or J_nu (kind 'J', symmetric) at (w, z)."""
    if kind not in ("E", "J"):
        raise ValueError(f"kind must be 'E' or 'J', got {kind!r}")
    spec = HypSpec((), (nu,), "K" if kind == "E" else "F")
    neg_z = tuple(-complex(v) for v in z)
    return hyp_eval(spec, w, neg_z, trunc, params)


# -- exact layer polynomials (for symbolic identity checks) ------------------

def embed_poly(p: MPoly, total_n: int, offset: int) -> MPoly:
    """Re-index an n-variable polynomial into variables [offset, offset+n)."""
    terms = {}
    for expo, coeff in p.terms.items():
        new = [0] * total_n
        for i, e in enumerate(expo):
            new[offset + i] = e
        terms[tuple(new)] = coeff
    return MPoly(total_n, terms)


def hyp_layer_exact(spec: HypSpec, params: Params, degree: int,
                    square_args: bool = False) -> MPoly:
    """Degree-`degree` layer as an exact polynomial in 2n variables
    (w-block first).  All series parameters must be exact rationals.

    With `square_args`, w and z enter squared and halved (arguments w^2/2,
    z^2/2), the form the type B identification uses; the result then has
    bidegree (2*degree, 2*degree).
    """
    n = params.n
    basis = get_jack_basis(n, params.k)
    total = MPoly.zero(2 * n)
    half = Fraction(1, 2)
    if spec.kind == "K":
        from .mpoly import compositions_of_degree
        families = compositions_of_degree(n, degree)
        for eta in families:
            poly = basis.l_poly(eta)
            ones = basis.l_at_ones(eta)
            ratio = Fraction(1)
            for mu in spec.p_params:
                ratio = ratio * pochhammer_gen(Fraction(mu), to_partition(eta), params)
            for nu in spec.q_params:
                ratio = ratio / pochhammer_gen(Fraction(nu), to_partition(eta), params)
            coeff = ratio / (math.factorial(degree) * ones)
            pw = embed_poly(poly, 2 * n, 0)
            pz = embed_poly(poly, 2 * n, n)
            if square_args:
                pw = pw.square_vars() * MPoly.const(2 * n, half ** degree)
                pz = pz.square_vars() * MPoly.const(2 * n, half ** degree)
            total = total + coeff * (pw * pz)
    else:
        from .mpoly import partitions_of_degree
        for lam in partitions_of_degree(n, degree):
            poly = basis.c_poly(lam)
            ones = basis.c_at_ones(lam)
            ratio = Fraction(1)
            for mu in spec.p_params:
                ratio = ratio * pochhammer_gen(Fraction(mu), lam, params)
            for nu in spec.q_params:
                ratio = ratio / pochhammer_gen(Fraction(nu), lam, params)
            coeff = ratio / (math.factorial(degree) * ones)
            pw = embed_poly(poly, 2 * n, 0)
            pz = embed_poly(poly, 2 * n, n)
            if square_args:
                pw = pw.square_vars() * MPoly.const(2 * n, half ** degree)
                pz = pz.square_vars() * MPoly.const(2 * n, half ** degree)
            total = total + coeff * (pw * pz)
    return total


# -- closed-form Dunkl kernels for the quadrature layer ----------------------

def _hyp0f1_any(b: float, t: np.ndarray) -> np.ndarray:
    """0F1(b; t) vectorized, real via scipy, complex via a guarded series."""
    t = np.asarray(t)
    if not np.iscomplexobj(t):
        return _hyp0f1_real(b, t)
    term = np.ones_like(t, dtype=complex)
    total = term.copy()
    m = 0
    while True:
        m += 1
        term = term * t / (m * (b + m - 1))
        total += term
        if m > 8 and np.max(np.abs(term)) <= 1e-17 * max(np.max(np.abs(total)), 1e-300):
            break
        if m > 600:
            raise ScalingGuardError("0F1 series did not converge for complex argument")
    return total


def rank1_profile(q: np.ndarray, k: float) -> np.ndarray:
    """One-variable reflection-group kernel as a function of the product q."""
    t = q * q / 4.0
    even = _hyp0f1_any(k + 0.5, t)
    odd = _hyp0f1_any(k + 1.5, t)
    return even + q / (2.0 * k + 1.0) * odd


_PROFILE_DIRECT_LIMIT = 580.0


def _log_profile_asymptotic(q: np.ndarray, k: float) -> np.ndarray:
    """log of the rank-one profile for large positive q:
    prof(q) ~ 2 Gamma(k+1/2) (q/2)^(1/2-k) e^q / sqrt(2 pi q)."""
    return (q + (0.5 - k) * np.log(q / 2.0) - 0.5 * np.log(2.0 * math.pi * q)
            + math.log(2.0) + math.lgamma(k + 0.5))


def dunkl_kernel_closed(x: np.ndarray, z, params: Params) -> np.ndarray:
    """E^A(x_row, z) for every row of x; exact closed forms, n <= 2 only.

    Piecewise for real data: the profile is evaluated directly for moderate
    |q| and through its log-asymptotics for huge q > 0 (where the exp(s)
    prefactor suppresses the product); for huge q < 0 the product is below
    underflow (|s| >= |q| there) and returns 0.
    """
    x = np.atleast_2d(np.asarray(x))
    z = np.asarray(z)
    if np.iscomplexobj(z) and np.all(z.imag == 0.0):
        z = z.real
    if np.iscomplexobj(x) and np.all(x.imag == 0.0):
        x = x.real
    if params.n == 1:
        return np.exp(x[:, 0] * z[0])
    if params.n != 2:
        raise NotImplementedError("closed-form Dunkl kernel is available for n <= 2")
    k = float(params.k)
    s = (x[:, 0] + x[:, 1]) * (z[0] + z[1]) / 2.0
    q = (x[:, 0] - x[:, 1]) * (z[0] - z[1]) / 2.0
    if np.iscomplexobj(s):
        if np.max(np.abs(q)) > _PROFILE_DIRECT_LIMIT:
            raise ScalingGuardError("complex Dunkl kernel argument too large")
        return np.exp(s) * rank1_profile(q, k)
    out = np.zeros_like(s)
    mid = np.abs(q) <= _PROFILE_DIRECT_LIMIT
    if np.any(mid):
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.exp(s[mid]) * rank1_profile(q[mid], k)
        out[mid] = np.where(np.isfinite(vals), vals, np.inf)
    big = q > _PROFILE_DIRECT_LIMIT
    if np.any(big):
        out[big] = np.exp(s[big] + _log_profile_asymptotic(q[big], k))
    neg = q < -_PROFILE_DIRECT_LIMIT
    if np.any(neg):
        # oscillatory side: |profile| stays O(1), so the value is bounded by
        # e^s; once that is negligible the zero already stored is exact
        # enough, otherwise the cancellation is genuinely out of float range
        if np.any(s[neg] > -92.0):
            raise ScalingGuardError(
                "Dunkl kernel cancellation exceeds float64 range (mixed-sign "
                "second argument at large spread)")
    return out


def dunkl_kernel_numeric(x: np.ndarray, z, params: Params,
                         trunc: TruncationConfig | None = None) -> np.ndarray:
    """E^A(x_row, z) for quadrature integrands: closed form for n <= 2,
    truncated series fallback otherwise (small arguments only)."""
    if params.n <= 2:
        return dunkl_kernel_closed(x, z, params)
    trunc = trunc or TruncationConfig(max_degree=40)
    x = np.atleast_2d(np.asarray(x))
    out = np.empty(x.shape[0], dtype=complex)
    for r in range(x.shape[0]):
        out[r] = dunkl_kernel_a(tuple(x[r]), tuple(z), trunc, params).value
    return out


# -- dense kernel expansions for the quadrature layer -------------------------

class BesselKernelExpansion:
    """E_nu = 0K1(nu; ., -.) evaluated on node sets through the L-expansion.

    Truncation degree is chosen per call from a rank-one majorant

        layer_d <= (sum_i |x_i|)^d (max_i |w_i|)^d / (d! |[nu]|_min^d ...)

    and node pairs whose majorant hump exceeds the float64 cancellation
    budget are clipped to zero; on the positive cone |E_nu| <= 1 there, so
    the clip error is bounded by the (exponentially suppressed) weight mass,
    which the caller folds into its diagnostic.
    """

    def __init__(self, nu, params: Params, hard_cap: int = 140):
        self.params = params
        self.nu = complex(nu)
        self.hard_cap = hard_cap
        self.table = get_jack_basis_float(params.n, params.k)
        self._ratios: dict[int, np.ndarray] = {}
        check_admissibility(HypSpec((), (self.nu,), "K"), params, hard_cap)

    def _ratio(self, d: int) -> np.ndarray:
        out = self._ratios.get(d)
        if out is None:
            data = self.table.degree_data(d)
            out = np.array([complex(pochhammer_gen(self.nu, to_partition(eta),
                                                   self.params))
                            for eta in data["basis"]])
            if np.all(out.imag == 0.0):
                out = out.real
            self._ratios[d] = out
        return out

    def _nu_floor(self, d: int) -> float:
        """Lower bound for |[nu]_{eta_+}|^(1/d) style factors, crude but safe."""
        k = float(self.params.k)
        floor = min(abs(self.nu - k * j + m) for j in range(self.params.n)
                    for m in range(0, 2))
        return max(floor, 1e-2)

    def degree_needed(self, s_x: float, m_w: float, tol: float) -> int:
        """Smallest D with the majorant tail below tol (rank-one model)."""
        t = s_x * m_w
        if t <= 0:
            return 0
        term = 1.0
        d = 0
        nu_floor = self._nu_floor(1)
        best_after_hump = False
        while d < self.hard_cap:
            d += 1
            term *= t / (d * max(d - 1 + abs(self.nu.real) - float(self.params.mu0), nu_floor))
            if term < tol and d * d > t:
                best_after_hump = True
                break
        return d if best_after_hump else self.hard_cap

    def hump(self, s_x: float, m_w: float) -> float:
        """log of the majorant's largest layer (cancellation estimate)."""
        t = s_x * m_w
        if t <= 1.0:
            return 0.0
        return 2.0 * math.sqrt(t)

    def value_matrix(self, x_nodes: np.ndarray, w_nodes: np.ndarray,
                     tol: float = 1e-15, cancel_budget: float = 50.0,
                     log_damp_x: np.ndarray | None = None,
                     log_damp_w: np.ndarray | None = None,
                     keep_budget: float = 20.0, hump_cap: float = 50.0):
        """(len(x_nodes), len(w_nodes)) matrix of E_nu(x, w) values and a
        boolean mask of clipped (zeroed) pairs.

        The float64 cancellation of the alternating series grows like
        exp(2 sqrt(sum|x| * max|w|)) (the layer hump).  When the caller
        supplies per-node log-damping factors (log of the relative weight
        the pair carries in the caller's quadrature, <= 0), a pair is
        clipped once hump + damp_x + damp_w exceeds `keep_budget`: kept
        pairs then contribute at most ~1e-16 * e^keep_budget of error, and
        clipped pairs are exponentially suppressed by their own damping
        (|E_nu| <= 1 on the cone).  `hump_cap` clips unconditionally: for
        integrands whose joint decay matches the kernel growth, a pair with
        hump 2 sqrt(ab) carries damping <= -(a + b) + polylog <= -hump +
        polylog (AM-GM), so large-hump pairs are always negligible and the
        series depth stays inside float64.  Without damping vectors the
        cruder absolute `cancel_budget` applies."""
        x_nodes = np.atleast_2d(np.asarray(x_nodes, dtype=float))
        w_nodes = np.atleast_2d(np.asarray(w_nodes))
        sx = np.abs(x_nodes).sum(axis=1)
        mw = np.abs(w_nodes).max(axis=1)
        hump = 2.0 * np.sqrt(np.maximum(np.outer(sx, mw), 1.0))
        if log_damp_x is not None or log_damp_w is not None:
            dx = np.zeros(len(sx)) if log_damp_x is None else np.asarray(log_damp_x)
            dw = np.zeros(len(mw)) if log_damp_w is None else np.asarray(log_damp_w)
            clipped = ((hump + dx[:, None] + dw[None, :]) > keep_budget) \
                | (hump > hump_cap)
        else:
            clipped = hump > min(cancel_budget, hump_cap)
        s_eff = 0.0 if clipped.all() else float(np.max(np.outer(sx, mw)[~clipped]))
        root = math.sqrt(s_eff) if s_eff > 0 else 0.0
        depth = self.degree_needed(root, root, tol)
        if depth > 130:
            raise ScalingGuardError(
                f"kernel expansion depth {depth} exceeds the float64 budget")
        complex_w = np.iscomplexobj(w_nodes)
        complex_out = complex_w or self.nu.imag != 0.0
        wa = w_nodes.astype(complex) if complex_w else w_nodes.astype(float)
        pow_x = [x_nodes[:, i][:, None] ** np.arange(depth + 1)[None, :]
                 for i in range(self.params.n)]
        pow_w = [wa[:, i][:, None] ** np.arange(depth + 1)[None, :]
                 for i in range(self.params.n)]
        out = np.zeros((x_nodes.shape[0], w_nodes.shape[0]),
                       dtype=complex if complex_out else float)
        for d in range(depth + 1):
            data = self.table.degree_data(d)
            expos = data["expos"]
            mono_x = pow_x[0][:, expos[:, 0]]
            mono_w = pow_w[0][:, expos[:, 0]]
            for i in range(1, self.params.n):
                mono_x = mono_x * pow_x[i][:, expos[:, i]]
                mono_w = mono_w * pow_w[i][:, expos[:, i]]
            e_x = mono_x @ data["ecoef"].T
            e_w = mono_w @ data["ecoef"].T
            ratios = self._ratio(d)
            scale = ((-1.0) ** d) * data["lvec"] / (math.factorial(d)
                                                    * data["eones"] * ratios)
            out += (e_x * scale[None, :]) @ e_w.T
        out[clipped] = 0.0
        return out, clipped

    def values(self, x_nodes: np.ndarray, w, tol: float = 1e-15,
               log_damp_x: np.ndarray | None = None):
        damp_w = None if log_damp_x is None else np.zeros(1)
        mat, clipped = self.value_matrix(x_nodes, np.asarray([w]), tol=tol,
                                         log_damp_x=log_damp_x, log_damp_w=damp_w)
        return mat[:, 0], clipped[:, 0]
