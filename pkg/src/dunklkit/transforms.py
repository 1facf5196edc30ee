"""The analytic layer: Dunkl-Laplace checks for Jack polynomials, the
Hankel transform, the type B Dunkl transform on Z_2^n-even functions,
K-Bessel functions (scalar and partition-shifted index), zeta integrals
with analytic continuation, the functional-equation verifier, and the
discrete Wallach-point tensor formula.

Test functions are Gaussian polynomials p(x) exp(-c|x|^2), which the type B
Dunkl operators preserve:

    T_i^B (p e^{-c|x|^2}) = (T_i^B p - 2 c x_i p) e^{-c|x|^2}

(the Gaussian is W_B-invariant, so the reflection terms pass through it).
That closure powers the symbolic lifting behind the zeta continuation

    <zeta_a, f> = <zeta_{a+m}, Delta(T^B)^{2m} f> / (4^{nm} prod_j b(a+j-nu)),

which needs one quadrature at a safely integrable index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .jack import get_jack_basis
from .mpoly import MPoly, weyl_group
from .operators import apply_dunkl, apply_poly_of_dunkl, apply_dunkl_numeric, DeltaPower
from .params import Params
from .quadrature import (QuadratureSpec, QuadResult, integrate_orthant,
                         orthant_nodes_for_weight)
from .scalars import bernstein_b, gamma_n
from .series import BesselKernelExpansion, TruncationConfig, dunkl_kernel_numeric
from scipy.special import hyp0f1 as _hyp0f1


class ContinuationPathError(ArithmeticError):
    """Every admissible lifting depth passes through a zero of b."""


class AccuracyBudgetError(ArithmeticError):
    """An inner quadrature diagnostic exceeds the requested budget."""


# -- Gaussian-polynomial test class -------------------------------------------


@dataclass(frozen=True)
class GaussPoly:
    """x -> p(x) * exp(-c |x|^2) with exact p and positive rational c."""

    p: MPoly
    c: Fraction

    def __post_init__(self):
        if Fraction(self.c) <= 0:
            raise ValueError("c must be positive")
        object.__setattr__(self, "c", Fraction(self.c))

    @property
    def n(self) -> int:
        return self.p.n

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return mpoly_eval_array(self.p, x) * np.exp(-float(self.c) * (x * x).sum(axis=1))

    def eval_point(self, x) -> complex:
        xv = np.asarray(x, dtype=float)[None, :]
        return complex(self(xv)[0])

    def even_profile(self) -> MPoly:
        """q with (Z_2^n-mean of p)(x) = q(x^2); drops odd-exponent terms."""
        terms = {}
        for expo, coeff in self.p.terms.items():
            if all(e % 2 == 0 for e in expo):
                terms[tuple(e // 2 for e in expo)] = coeff
        return MPoly(self.p.n, terms)

    def symmetrized(self) -> "GaussPoly":
        """W_B-average; the Gaussian factor is already invariant."""
        group = weyl_group(self.p.n, "B")
        total = MPoly.zero(self.p.n)
        for g in group:
            total = total + self.p.act(g)
        return GaussPoly(Fraction(1, len(group)) * total, self.c)


def mpoly_eval_array(p: MPoly, x: np.ndarray) -> np.ndarray:
    """Evaluate an exact polynomial on rows of x (float or complex)."""
    is_complex = np.iscomplexobj(x)
    out = np.zeros(x.shape[0], dtype=complex if is_complex else float)
    for expo, coeff in p.terms.items():
        mono = np.ones_like(out)
        for i, e in enumerate(expo):
            if e:
                mono = mono * x[:, i] ** e
        out = out + (complex(coeff) if is_complex else float(coeff)) * mono
    return out


def apply_tb_gausspoly(f: GaussPoly, i: int, params: Params) -> GaussPoly:
    """Exact T_i^B on p e^{-c|x|^2}; polynomial degree grows by at most 1."""
    tb_p = apply_dunkl(f.p, i, "B", params)
    xi_p = MPoly.var(f.p.n, i) * f.p
    return GaussPoly(tb_p - 2 * f.c * xi_p, f.c)


def apply_delta_tb_squared(f: GaussPoly, params: Params, times: int = 1) -> GaussPoly:
    """Delta(T^B)^2 applied `times` times, exactly."""
    out = f
    for _ in range(times):
        for i in range(params.n):
            out = apply_tb_gausspoly(apply_tb_gausspoly(out, i, params), i, params)
    return out


# -- Laplace identities for Jack polynomials ----------------------------------


def laplace_jack_check(index, mu, z, params: Params, spec: QuadratureSpec,
                       symmetric: bool = False):
    """Both sides of the Jack Laplace identity at one (index, mu, z).

    Non-symmetric: integral of E^A(-x,z) E_eta(x) Delta^(mu-mu0-1) omega^A
    equals Gamma_n(mu*1 + eta_+) E_eta(1/z) Delta(z)^(-mu); the symmetric
    version replaces E_eta by P_lambda and eta_+ by lambda.
    """
    basis = get_jack_basis(params.n, params.k)
    if symmetric:
        poly = basis.symmetric(index)
        shift = tuple(index)
    else:
        poly = basis.nonsymmetric(index)
        shift = tuple(sorted(index, reverse=True))
    z = tuple(complex(v) for v in z)

    def integrand(x):
        return dunkl_kernel_numeric(-x, z, params) * mpoly_eval_array(poly, x)

    scales = spec.scales(params.n) or tuple(v.real for v in z)
    quad = integrate_orthant(integrand, mu,
                             QuadratureSpec(spec.points_per_axis, spec.scheme, scales),
                             params)
    gamma_arg = tuple(complex(mu) + s for s in shift)
    inv_z = tuple(1.0 / v for v in z)
    delta_z = np.prod([complex(v) for v in z])
    closed = gamma_n(gamma_arg, params) * poly.eval(inv_z) * delta_z ** (-complex(mu))
    return quad, complex(closed)


# -- Hankel transform and the even type B Dunkl transform ----------------------


def _hyp0f1_rank1(b: complex, arg: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(arg) or complex(b).imag != 0.0:
        from .series import _hyp0f1_any
        return _hyp0f1_any(complex(b), np.asarray(arg, dtype=complex))
    return np.asarray(_hyp0f1(complex(b).real, arg))


def _bessel_kernel_values(x: np.ndarray, w, nu, params: Params,
                          log_damp_x: np.ndarray | None = None):
    """E_nu(x_row, w) across quadrature nodes (stable per rank)."""
    if params.n == 1:
        arg = -np.asarray(x, dtype=float)[:, 0] * complex(w[0])
        if np.all(arg.imag == 0.0):
            arg = arg.real
        vals = _hyp0f1_rank1(nu, arg)
        return np.asarray(vals), np.zeros(x.shape[0], dtype=bool)
    expansion = BesselKernelExpansion(nu, params)
    return expansion.values(x, np.asarray(w), log_damp_x=log_damp_x)


def hankel(f0, nu, w, spec: QuadratureSpec, trunc: TruncationConfig,
           params: Params) -> QuadResult:
    """H_nu f0(w) = (1/Gamma_n(nu)) integral f0(x) E_nu(x, w)
    Delta^(nu-mu0-1) omega^A dx over the orthant."""
    nu_c = complex(nu)
    if nu_c.real <= float(params.mu0):
        raise ValueError("Hankel transform needs Re nu > mu0")
    w = np.asarray(w, dtype=complex if any(complex(v).imag for v in w) else float)

    def run(npts):
        x, logw = orthant_nodes_for_weight(spec, params, nu_c,
                                           scales=spec.scales(params.n), npts=npts)
        fvals = np.asarray(f0(x))
        with np.errstate(divide="ignore"):
            combined = logw + np.log(np.maximum(np.abs(fvals), 1e-300))
        keep = combined > combined.max() - 46.0
        if not keep.any():
            return 0.0j, 1.0
        damp = combined[keep] - combined[keep].max()
        kvals, clipped = _bessel_kernel_values(x[keep], w, nu, params,
                                               log_damp_x=damp)
        value = np.sum(np.exp(logw[keep]) * fvals[keep] * kvals)
        return complex(value) / gamma_n(nu_c, params), float(np.mean(clipped))

    value, clip_frac = run(spec.points_per_axis)
    coarse, _ = run(max(6, (3 * spec.points_per_axis) // 4))
    return QuadResult(value, abs(value - coarse), {"clip_fraction": clip_frac})


def dunkl_transform_b_even(f0, nu, xi, spec: QuadratureSpec,
                           trunc: TruncationConfig, params: Params) -> QuadResult:
    """F^B f(xi) = 2^(-n nu) H_nu f0(xi^2 / 4) for even f(x) = f0(x^2)."""
    xi = np.asarray(xi, dtype=float)
    w = xi * xi / 4.0
    res = hankel(f0, nu, w, spec, trunc, params)
    factor = 2.0 ** (-params.n * complex(nu))
    return QuadResult(factor * res.value, abs(factor) * res.diagnostic, res.meta)


# -- K-Bessel functions --------------------------------------------------------


def kbessel(nu, w, z, spec: QuadratureSpec, params: Params) -> QuadResult:
    """K_nu(w, z) = integral E^A(-x, w) E^A(-1/x, z) Delta^(nu-mu0-1)
    omega^A dx; any complex nu, Re w > 0, Re z > 0 componentwise."""
    w = tuple(complex(v) for v in w)
    z = tuple(complex(v) for v in z)
    if min(v.real for v in w) <= 0 or min(v.real for v in z) <= 0:
        raise ValueError("K-Bessel needs Re w > 0 and Re z > 0 componentwise")

    def integrand(x):
        return dunkl_kernel_numeric(-x, w, params) \
            * dunkl_kernel_numeric(-(1.0 / x), z, params)

    if spec.axis_scale is None:
        scale = tuple(max(v.real, 1e-6) for v in w)
        spec = QuadratureSpec(spec.points_per_axis, spec.scheme, scale)
    return integrate_orthant(integrand, nu, spec, params,
                             allow_nonintegrable_weight=True)


def kbessel_shifted(lambda_part, s, w, z, spec: QuadratureSpec,
                    trunc: TruncationConfig, params: Params) -> QuadResult:
    """K-Bessel with spectral parameter lambda_part + s*(1,...,1): the
    density is Delta(x)^s E_lambda(x)/E_lambda(1) against the inversion-
    invariant measure."""
    basis = get_jack_basis(params.n, params.k)
    poly = basis.nonsymmetric(tuple(lambda_part))
    ones = float(basis.e_at_ones(tuple(lambda_part)))
    w = tuple(complex(v) for v in w)
    z = tuple(complex(v) for v in z)
    if min(v.real for v in w) <= 0 or min(v.real for v in z) <= 0:
        raise ValueError("K-Bessel needs Re w > 0 and Re z > 0 componentwise")

    def integrand(x):
        return dunkl_kernel_numeric(-x, w, params) \
            * dunkl_kernel_numeric(-(1.0 / x), z, params) \
            * mpoly_eval_array(poly, x) / ones

    if spec.axis_scale is None:
        scale = tuple(max(v.real, 1e-6) for v in w)
        spec = QuadratureSpec(spec.points_per_axis, spec.scheme, scale)
    return integrate_orthant(integrand, s, spec, params,
                             allow_nonintegrable_weight=True)


def kbessel_eigen_check(nu, w, x, h: float, spec: QuadratureSpec,
                        params: Params) -> list[float]:
    """Residuals |(1/4)(T_i^B)^2 f_w(x) - w_i f_w(x)| with
    f_w(y) = K_{nu - mu0 - 1/2}(y^2, w); the two derivatives are finite
    differences, the reflection terms exact."""
    index = complex(nu) - float(params.mu0) - 0.5
    w = tuple(complex(v) for v in w)
    if spec.axis_scale is None:
        # the quadrature grid must not move with the stencil point
        frozen = tuple(max(0.5 * float(v) ** 2, 1e-3) for v in x)
        spec = QuadratureSpec(spec.points_per_axis, spec.scheme, frozen)

    def f_w(y):
        y2 = tuple(float(v) ** 2 for v in y)
        return kbessel(index, y2, w, spec, params).real

    residuals = []
    fx = f_w(tuple(x))
    for i in range(params.n):
        def t_once(y):
            return apply_dunkl_numeric(f_w, y, i, "B", params, h)

        t_twice = apply_dunkl_numeric(t_once, tuple(x), i, "B", params, h)
        residuals.append(abs(0.25 * t_twice - w[i].real * fx))
    return residuals


# -- zeta integrals and distributions ------------------------------------------


@dataclass(frozen=True)
class ZetaRequest:
    f: GaussPoly
    alpha: complex
    m_lift: int | None = None


def zeta_integral(f: GaussPoly, alpha, spec: QuadratureSpec,
                  params: Params) -> QuadResult:
    """Z(f; alpha) = integral f(x) Delta(x^2)^(alpha - nu) omega^B(x) dx,
    computed on the orthant as integral of the even profile:
    integral q(t) e^{-c sum t} Delta(t)^(alpha - mu0 - 1) omega^A(t) dt."""
    alpha_c = complex(alpha)
    if alpha_c.real <= float(params.mu0):
        raise ValueError("zeta integral needs Re alpha > mu0; "
                         "use zeta_distribution for the continued range")
    profile = f.even_profile()
    c = float(f.c)

    def integrand(t):
        return mpoly_eval_array(profile, t) * np.exp(-c * t.sum(axis=1))

    scales = spec.scales(params.n) or (c,) * params.n
    return integrate_orthant(
        integrand, alpha_c,
        QuadratureSpec(spec.points_per_axis, spec.scheme, scales), params)


def _lift_depths(alpha: complex, params: Params, margin: float = 0.45):
    """Candidate continuation depths around the automatic choice."""
    mu0 = float(params.mu0)
    m_min = max(0, math.ceil(mu0 + margin - alpha.real + 1e-12))
    m_auto = max(m_min, math.ceil(mu0 + 1.0 - alpha.real) + 1)
    seen = []
    for delta in (0, -1, 1, -2, 2, 3, 4):
        m = m_auto + delta
        if m >= m_min and m not in seen:
            seen.append(m)
    return seen


def zeta_distribution(req: ZetaRequest, spec: QuadratureSpec,
                      params: Params) -> QuadResult:
    """<zeta_alpha, f> = Z(f; alpha)/Gamma_n(alpha), analytically continued
    by exact symbolic lifting when Re alpha is below the direct range."""
    alpha = complex(req.alpha)
    nu = params.nu_float
    depths = [req.m_lift] if req.m_lift is not None else _lift_depths(alpha, params)
    last_err = None
    for m in depths:
        bs = [complex(bernstein_b(alpha + j - nu, params)) for j in range(1, m + 1)]
        if any(abs(b) < 1e-8 for b in bs):
            last_err = ContinuationPathError(
                f"b(alpha + j - nu) vanishes on the depth-{m} path")
            continue
        lifted = apply_delta_tb_squared(req.f, params, times=m)
        quad = zeta_integral(lifted, alpha + m, spec, params)
        denom = gamma_n(alpha + m, params) * (4.0 ** (params.n * m))
        for b in bs:
            denom *= b
        return QuadResult(quad.value / denom, quad.diagnostic / abs(denom),
                          {"m_lift": m})
    raise last_err or ContinuationPathError("no admissible lifting depth")


def zeta_pair_on(f: GaussPoly, alpha, spec: QuadratureSpec, params: Params) -> complex:
    return zeta_distribution(ZetaRequest(f, complex(alpha)), spec, params).value


def functional_equation_check(f: GaussPoly, alpha, spec: QuadratureSpec,
                              trunc: TruncationConfig, params: Params,
                              target_tol: float | None = None) -> dict:
    """LHS = <zeta_alpha, f>; RHS = 2^{n(2 alpha - nu)} <zeta_{nu-alpha}, F^B f>
    with F^B f evaluated pointwise on the outer quadrature grid (double
    quadrature).  f is W_B-symmetrized first.
    """
    n = params.n
    nu = complex(params.nu_float)
    alpha = complex(alpha)
    if (nu - alpha).real <= float(params.mu0) + 0.25:
        raise ValueError("the nu - alpha leg must sit in the direct range; "
                         "choose alpha with Re(nu - alpha) > mu0")
    fsym = f.symmetrized()
    lhs = zeta_distribution(ZetaRequest(fsym, alpha), spec, params)

    profile = fsym.even_profile()
    c = float(fsym.c)

    def f0(t):
        return mpoly_eval_array(profile, t) * np.exp(-c * t.sum(axis=1))

    def rhs_run(npts_outer, npts_inner):
        # outer nodes: measure Delta^(nu-alpha-mu0-1) omega^A; G decays
        # like exp(-sum t/(4c)) since F^B f is Gaussian of width 4c
        outer_scales = (1.0 / (4.0 * c),) * n
        ospec = QuadratureSpec(npts_outer, "gauss_laguerre_scaled", outer_scales)
        # outer window: beyond ~20 nats of transform decay the kernel series
        # cancellation error would outweigh the (analytically tiny) tail
        t_nodes, t_logw = orthant_nodes_for_weight(ospec, params, nu - alpha,
                                                   scales=outer_scales)
        decay = -t_nodes.sum(axis=1) / (4.0 * c)
        keep_o = (t_logw + decay) > (t_logw + decay).max() - 20.0
        t_nodes, t_logw = t_nodes[keep_o], t_logw[keep_o]

        ispec = QuadratureSpec(npts_inner, "gauss_laguerre_scaled", (c,) * n)
        x_nodes, x_logw = orthant_nodes_for_weight(ispec, params, nu,
                                                   scales=(c,) * n)
        fvals = f0(x_nodes)
        with np.errstate(divide="ignore"):
            inner_mag = x_logw + np.log(np.maximum(np.abs(fvals), 1e-300))
        keep_i = inner_mag > inner_mag.max() - 36.0
        x_nodes, x_logw, fvals = x_nodes[keep_i], x_logw[keep_i], fvals[keep_i]

        if n == 1:
            kmat = np.asarray(_hyp0f1(nu.real, -np.outer(x_nodes[:, 0],
                                                         t_nodes[:, 0] / 4.0)))
            clip_frac = 0.0
        else:
            expansion = BesselKernelExpansion(nu, params)
            damp_x = inner_mag[keep_i] - inner_mag[keep_i].max()
            damp_w = (t_logw + decay[keep_o]) - (t_logw + decay[keep_o]).max()
            kmat, clipped = expansion.value_matrix(x_nodes, t_nodes / 4.0,
                                                   log_damp_x=damp_x,
                                                   log_damp_w=damp_w,
                                                   keep_budget=12.0,
                                                   hump_cap=42.0)
            clip_frac = float(np.mean(clipped))
        inner_weights = np.exp(x_logw) * fvals
        g_vals = (inner_weights @ kmat) / gamma_n(nu, params)
        g_vals = g_vals * (2.0 ** (-n * nu))
        outer = np.sum(np.exp(t_logw) * g_vals) / gamma_n(nu - alpha, params)
        return complex(outer), clip_frac

    rhs_value, clip_frac = rhs_run(spec.points_per_axis, spec.points_per_axis)
    rhs_coarse, _ = rhs_run(spec.points_per_axis,
                            max(8, (3 * spec.points_per_axis) // 4))
    inner_diag = abs(rhs_value - rhs_coarse)
    factor = 2.0 ** (n * (2 * alpha - nu))
    rhs = factor * rhs_value
    if target_tol is not None:
        scale = max(abs(lhs.value), abs(rhs), 1e-12)
        if abs(factor) * inner_diag > 0.1 * target_tol * scale:
            raise AccuracyBudgetError(
                f"inner diagnostic {abs(factor) * inner_diag:.3e} exceeds "
                f"0.1 * {target_tol} * scale")
    return {
        "lhs": lhs.value,
        "rhs": rhs,
        "lhs_diagnostic": lhs.diagnostic,
        "rhs_diagnostic": abs(factor) * inner_diag,
        "clip_fraction": clip_frac,
    }


def wallach_discrete_check(r: int, f: GaussPoly, spec: QuadratureSpec,
                           params: Params) -> dict:
    """n = 2, r = 1: <zeta_{k r}, f> against the symmetrized tensor
    (zeta^{(r)}_{k n} (x) delta_0^{(n-r)}) applied to f, i.e. the rank-one
    zeta distribution of index k*n on t -> f(t, 0)."""
    n = params.n
    if n != 2 or r != 1:
        raise ValueError("the discrete Wallach check is implemented at n=2, r=1")
    fsym = f.symmetrized()
    k = params.k
    alpha = float(k) * r
    lhs = zeta_distribution(ZetaRequest(fsym, alpha), spec, params)

    # rank-one restriction t -> f(t, 0)
    restricted = MPoly(1, {(e0,): coeff for (e0, e1), coeff
                           in fsym.p.terms.items() if e1 == 0})
    f1 = GaussPoly(restricted, fsym.c)
    params1 = Params(1, k, Fraction(2) * k + 1)  # rank-one nu is immaterial here
    rhs = zeta_distribution(ZetaRequest(f1, float(k) * n), spec, params1)
    return {"lhs": lhs.value, "rhs": rhs.value,
            "lhs_diagnostic": lhs.diagnostic, "rhs_diagnostic": rhs.diagnostic}


# -- exact symbolic conjugation identity --------------------------------------


def cayley_conjugation_pair(f0: MPoly, params: Params) -> tuple[MPoly, MPoly]:
    """(LHS, RHS) of Delta(T^B)^2 [f0(x^2)] = [L_nu f0](x^2) with
    L_nu = 4^n Delta^{1+mu0-nu} Delta(T^A) Delta^{nu-mu0} Delta(T^A);
    exact, requires rational nu."""
    n = params.n
    delta_sq = MPoly.product_of_vars(n) ** 2
    lhs = apply_poly_of_dunkl(delta_sq, f0.square_vars(), "B", params)
    nu = Fraction(params.nu)
    state = DeltaPower(Fraction(0), f0)
    state = state.apply_delta_of_dunkl_a(params)
    state = state.shift(nu - params.mu0)
    state = state.apply_delta_of_dunkl_a(params)
    state = state.shift(1 + params.mu0 - nu)
    rhs = (4 ** n) * state.to_poly()
    return lhs, rhs.square_vars()


def bernstein_identity_pair(mu_int: int, params: Params) -> tuple[MPoly, MPoly]:
    """(Delta(T^B)^2 Delta(x^2)^mu, B(mu) Delta(x^2)^(mu-1)) for integer mu."""
    from .scalars import bernstein_bb
    n = params.n
    delta_sq_x = MPoly.product_of_vars(n).square_vars()
    lhs = apply_poly_of_dunkl(MPoly.product_of_vars(n) ** 2,
                              delta_sq_x ** mu_int, "B", params)
    rhs = bernstein_bb(Fraction(mu_int), params) * delta_sq_x ** (mu_int - 1)
    return lhs, rhs
