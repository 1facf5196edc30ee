"""Deterministic quadrature against the Dunkl weights on the orthant and on
R^n.

The target integrals are

    integral over R_+^n of f(x) Delta(x)^(mu - mu0 - 1) omega^A(x) dx,
    integral over R^n   of f(x) omega^B(x) dx,

with omega^A = prod_{i<j} |x_i - x_j|^{2k}.  The absolute-value factors kink
on the diagonals, so the orthant is split into ordered sectors
x_{sigma(1)} > ... > x_{sigma(n)} and parameterized by the positive
coordinates u_m = x_{sigma(m)} - x_{sigma(m+1)} (u_n = x_{sigma(n)}).
Adjacent-difference factors become pure per-axis powers u_m^{2k} and are
absorbed into generalized Gauss-Laguerre weights together with the last-axis
power and the exponential scale; non-adjacent factors stay in the integrand,
where they are smooth away from a measure-suppressed corner.  Node weights
are assembled in log space (the compensating e^{+c u} otherwise overflows).

Two per-axis rules are available:

  * gauss_laguerre_scaled: generalized Laguerre, exact for polynomial
    integrands times the absorbed weight; preferred when the integrand
    decays like e^{-c x} and the axis powers exceed -1.
  * tanh_sinh_mapped: the exp-sinh double-exponential rule
    u = c exp(lambda sinh t) on a trapezoid grid, which tolerates
    non-absorbable endpoint behavior (negative powers, essential decay
    e^{-z/u}); all weight factors stay in the integrand.

Every estimate is returned with a convergence diagnostic: the difference
against the same rule at three quarters of the points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

import numpy as np
from scipy.special import roots_genlaguerre

from .operators import weight_b
from .params import Params

_LOG_TINY = -745.0  # exp underflows below this
_LOG_HUGE = 700.0


class QuadratureOverflowError(ArithmeticError):
    """Compensated node weights exceed float64 range; reduce points or rescale."""


@dataclass(frozen=True)
class QuadratureSpec:
    points_per_axis: int = 80
    scheme: str = "gauss_laguerre_scaled"
    axis_scale: tuple | float | None = None

    def __post_init__(self):
        if self.points_per_axis < 2:
            raise ValueError("points_per_axis must be >= 2")
        if self.scheme not in ("gauss_laguerre_scaled", "tanh_sinh_mapped"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    def scales(self, n: int) -> tuple | None:
        if self.axis_scale is None:
            return None
        if isinstance(self.axis_scale, (int, float)):
            return (float(self.axis_scale),) * n
        if len(self.axis_scale) != n:
            raise ValueError("axis_scale length must match the rank")
        return tuple(float(s) for s in self.axis_scale)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    diagnostic: float
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def real(self) -> float:
        return complex(self.value).real


@lru_cache(maxsize=256)
def _laguerre_rule(npts: int, alpha: float):
    if alpha <= -1.0:
        raise ValueError(f"generalized Laguerre needs alpha > -1, got {alpha}")
    t, w = roots_genlaguerre(npts, alpha)
    with np.errstate(divide="ignore"):
        logw = np.log(w)  # underflowed far-node weights become -inf (dropped)
    return t, logw


def _expsinh_rule(npts: int, center: float, lam: float = 1.05,
                  log_reach: float = 70.0):
    """Nodes/log-weights for integral over (0, inf), u = center*exp(lam*sinh t).

    `log_reach` bounds lam*sinh(t): the rule covers u in
    center*[e^-reach, e^+reach], ample for endpoint-singular weights while
    keeping multi-axis log-weights inside float range.
    """
    half = max(npts // 2, 3)
    t_max = math.asinh(log_reach / lam)
    h = t_max / half
    t = h * np.arange(-half, half + 1)
    sinh = np.sinh(t)
    u = center * np.exp(lam * sinh)
    logw = math.log(h * lam) + math.log(center) + lam * sinh + np.log(np.cosh(t))
    return u, logw


def _sector_nodes(n: int, sigma, npts: int, scheme: str, scales,
                  alpha_diff: float, alpha_last: float):
    """Tensor nodes for one ordered sector, as x-coordinates plus the log of
    the per-node weight (absorbed factors compensated)."""
    axis_nodes = []
    axis_logw = []
    for m in range(n):
        c = sum(scales[sigma[l]] for l in range(m + 1))
        alpha = alpha_diff if m < n - 1 else alpha_last
        if scheme == "gauss_laguerre_scaled":
            t, logw = _laguerre_rule(npts, alpha)
            u = t / c
            lw = logw + t - (alpha + 1.0) * math.log(c)
        else:
            center = max((alpha + 1.0), 0.5) / c
            u, lw = _expsinh_rule(npts, center)
            lw = lw + alpha * np.log(u)
        axis_nodes.append(u)
        axis_logw.append(lw)
    grids = np.meshgrid(*axis_nodes, indexing="ij")
    u = np.stack([g.ravel() for g in grids], axis=1)
    logw = np.zeros(u.shape[0])
    lgrids = np.meshgrid(*axis_logw, indexing="ij")
    for lg in lgrids:
        logw += lg.ravel()
    # back to x-coordinates: x_{sigma(m)} = u_m + ... + u_n
    suffix = np.cumsum(u[:, ::-1], axis=1)[:, ::-1]
    x = np.empty_like(u)
    for m in range(n):
        x[:, sigma[m]] = suffix[:, m]
    return x, logw


def _orthant_sum(f, n: int, npts: int, scheme: str, scales,
                 alpha_diff: float, alpha_last: float, extra_log) -> complex:
    total = 0.0 + 0.0j
    for sigma in permutations(range(n)):
        x, logw = _sector_nodes(n, sigma, npts, scheme, scales,
                                alpha_diff, alpha_last)
        with np.errstate(divide="ignore"):
            logw = logw + extra_log(x, sigma)
        if np.any(logw > _LOG_HUGE):
            raise QuadratureOverflowError(
                "node weight overflow; lower points_per_axis or provide axis_scale")
        keep = logw > _LOG_TINY
        if not np.any(keep):
            continue
        vals = np.asarray(f(x[keep]))
        bad = ~np.isfinite(vals)
        if np.any(bad):
            vals = np.where(bad, 0.0, vals)
        total += complex(np.sum(np.exp(logw[keep]) * vals))
    return total


def orthant_nodes_for_weight(spec: QuadratureSpec, params: Params, mu,
                             scales=None, npts: int | None = None):
    """All-sector nodes and positive log-weights for the measure
    Delta(x)^(mu - mu0 - 1) omega^A(x) dx on the orthant.

    Returns (x, logw) with x of shape (N, n); exp(logw) is the full node
    weight including the measure density, so sum(exp(logw) * F(x))
    approximates the integral of F against the measure.  Callers that pair
    these nodes with a decaying integrand should drop nodes whose combined
    log-magnitude is negligible before exponentiating.
    """
    n = params.n
    a = complex(mu).real - float(params.mu0) - 1.0
    k2 = 2.0 * float(params.k)
    scales = scales or spec.scales(n) or (1.0,) * n
    npts = npts or spec.points_per_axis
    absorb_last = spec.scheme == "gauss_laguerre_scaled" and a > -0.5
    alpha_diff = k2 if spec.scheme == "gauss_laguerre_scaled" else 0.0
    alpha_last = a if absorb_last else 0.0

    xs = []
    logs = []
    for sigma in permutations(range(n)):
        x, logw = _sector_nodes(n, sigma, npts, spec.scheme, scales,
                                alpha_diff, alpha_last)
        extra = np.zeros(x.shape[0])
        if k2:
            for i in range(n):
                for j in range(i + 1, n):
                    adjacent = abs(sigma.index(i) - sigma.index(j)) == 1
                    if spec.scheme == "tanh_sinh_mapped" or not adjacent:
                        extra += k2 * np.log(np.abs(x[:, i] - x[:, j]))
        if a != 0.0:
            lead = n - 1 if absorb_last else n
            for m in range(lead):
                extra += a * np.log(x[:, sigma[m]])
        xs.append(x)
        logs.append(logw + extra)
    return np.concatenate(xs, axis=0), np.concatenate(logs, axis=0)


def probe_axis_scales(f, n: int) -> tuple:
    """Crude exponential-decay probe along the diagonal ray."""
    ts = np.array([0.5, 1.0, 2.0, 4.0, 8.0, 16.0])
    x = np.repeat(ts[:, None], n, axis=1)
    with np.errstate(all="ignore"):
        vals = np.abs(np.asarray(f(x), dtype=complex))
    good = np.isfinite(vals) & (vals > 0.0)
    if good.sum() < 2:
        return (1.0,) * n
    logs = np.log(vals[good])
    slope = -(logs[-1] - logs[0]) / (n * (ts[good][-1] - ts[good][0]))
    if not math.isfinite(slope) or slope <= 1e-3:
        slope = 1.0
    return (float(slope),) * n


def integrate_orthant(f, mu, spec: QuadratureSpec, params: Params,
                      allow_nonintegrable_weight: bool = False) -> QuadResult:
    """integral over R_+^n of f(x) Delta(x)^(mu - mu0 - 1) omega^A(x) dx.

    Needs Re mu > mu0, unless `allow_nonintegrable_weight` is set because f
    itself vanishes fast enough at the boundary (the K-Bessel integrands).
    `f` takes an (N, n) array of points and returns (N,) values including
    its own decay.
    """
    n = params.n
    mu_c = complex(mu)
    if not allow_nonintegrable_weight and mu_c.real <= float(params.mu0):
        raise ValueError(f"Re mu = {mu_c.real} is outside the integrable range "
                         f"(needs > mu0 = {float(params.mu0)})")
    a = mu_c.real - float(params.mu0) - 1.0
    k2 = 2.0 * float(params.k)
    f_eff = f
    if mu_c.imag != 0.0:
        phase = 1j * mu_c.imag

        def f_eff(x, _f=f):
            return np.asarray(_f(x)) * np.exp(phase * np.log(x).sum(axis=1))

    scales = spec.scales(n) or probe_axis_scales(f, n)
    absorb_last = spec.scheme == "gauss_laguerre_scaled" and a > -0.5

    def extra_log(x, sigma):
        out = np.zeros(x.shape[0])
        if k2:
            for i in range(n):
                for j in range(i + 1, n):
                    if abs(sigma.index(i) - sigma.index(j)) > 1:
                        out += k2 * np.log(np.abs(x[:, i] - x[:, j]))
        if a != 0.0:
            lead = n - 1 if absorb_last else n
            for m in range(lead):
                out += a * np.log(x[:, sigma[m]])
        return out

    alpha_diff = k2 if spec.scheme == "gauss_laguerre_scaled" else 0.0
    alpha_last = a if absorb_last else 0.0
    if spec.scheme == "tanh_sinh_mapped":
        alpha_diff = 0.0
        alpha_last = 0.0

        def extra_log(x, sigma, _base=extra_log):  # noqa: F811
            out = np.zeros(x.shape[0])
            if k2:
                for i in range(n):
                    for j in range(i + 1, n):
                        out += k2 * np.log(np.abs(x[:, i] - x[:, j]))
            if a != 0.0:
                out += a * np.log(x).sum(axis=1)
            return out

    def run(npts):
        return _orthant_sum(f_eff, n, npts, spec.scheme, scales,
                            alpha_diff, alpha_last, extra_log)

    value = run(spec.points_per_axis)
    coarse = run(max(4, (3 * spec.points_per_axis) // 4))
    return QuadResult(value, abs(value - coarse),
                      {"scales": scales, "scheme": spec.scheme})


def integrate_rn_b(f, spec: QuadratureSpec, params: Params) -> QuadResult:
    """integral over R^n of f(x) omega^B(x) dx, computed through the orthant
    decomposition: (1/2^n) sum over sign vectors tau of
    integral f(tau x^(1/2)) Delta(x)^(nu - mu0 - 1) omega^A(x) dx."""
    n = params.n
    nu = params.nu_float
    if complex(nu).real <= float(params.mu0) + 0.5:
        raise ValueError("integrate_rn_b needs Re nu > mu0 + 1/2 (Re kprime >= 0)")
    signs = _sign_vectors(n)

    def even_part(x):
        root = np.sqrt(x)
        acc = 0.0
        for tau in signs:
            acc = acc + np.asarray(f(root * tau))
        return acc / len(signs)

    return integrate_orthant(even_part, nu, spec, params)


def _sign_vectors(n: int) -> list[np.ndarray]:
    out = []
    for mask in range(1 << n):
        out.append(np.array([1.0 if mask & (1 << i) == 0 else -1.0
                             for i in range(n)]))
    return out


def integrate_rn_direct(f, spec: QuadratureSpec, params: Params) -> QuadResult:
    """Direct R^n quadrature of f(x) omega^B(x) dx (no squared substitution);
    the independent cross-check for `integrate_rn_b`."""
    n = params.n
    kp2 = 2.0 * complex(params.kprime).real
    k2 = 2.0 * float(params.k)
    signs = _sign_vectors(n)

    def folded(y):
        acc = 0.0
        for tau in signs:
            acc = acc + np.asarray(f(y * tau))
        return acc

    def extra_log(y, sigma):
        out = np.zeros(y.shape[0])
        if kp2:
            lead = n - 1
            for m in range(lead):
                out += kp2 * np.log(y[:, sigma[m]])
        if k2:
            for i in range(n):
                for j in range(i + 1, n):
                    out += k2 * np.log(y[:, i] + y[:, j])
                    if abs(sigma.index(i) - sigma.index(j)) > 1:
                        out += k2 * np.log(np.abs(y[:, i] - y[:, j]))
        return out

    scales = spec.scales(n) or probe_axis_scales(folded, n)
    value = _orthant_sum(folded, n, spec.points_per_axis,
                         "gauss_laguerre_scaled", scales, k2, kp2, extra_log)
    coarse = _orthant_sum(folded, n, max(4, (3 * spec.points_per_axis) // 4),
                          "gauss_laguerre_scaled", scales, k2, kp2, extra_log)
    return QuadResult(value, abs(value - coarse), {"scales": scales})


def invariant_measure_quadrature(h, spec: QuadratureSpec, params: Params) -> QuadResult:
    """integral of h against Delta(x)^(-mu0-1) omega^A(x) dx on the orthant.
    The exponent is below the Laguerre range, so the double-exponential rule
    is used and h must decay at both 0 and infinity."""
    n = params.n
    a = -float(params.mu0) - 1.0
    k2 = 2.0 * float(params.k)

    def extra_log(x, sigma):
        out = a * np.log(x).sum(axis=1)
        if k2:
            for i in range(n):
                for j in range(i + 1, n):
                    out += k2 * np.log(np.abs(x[:, i] - x[:, j]))
        return out

    scales = spec.scales(n) or (1.0,) * n
    value = _orthant_sum(h, n, spec.points_per_axis, "tanh_sinh_mapped",
                         scales, 0.0, 0.0, extra_log)
    coarse = _orthant_sum(h, n, max(6, (3 * spec.points_per_axis) // 4),
                          "tanh_sinh_mapped", scales, 0.0, 0.0, extra_log)
    return QuadResult(value, abs(value - coarse), {"scales": scales})


def invariance_check_measure(spec: QuadratureSpec, params: Params, h=None,
                             scale_factor: float = 2.0) -> dict:
    """Diagnostics for the invariance of Delta^(-mu0-1) omega^A dx under
    x -> 1/x and x -> s x; returns the two absolute differences."""
    n = params.n
    if h is None:
        def h(x):
            return np.exp(-x.sum(axis=1) - (1.0 / x).sum(axis=1))

    def h_inv(x):
        return np.asarray(h(1.0 / x))

    def h_scaled(x):
        return np.asarray(h(scale_factor * x))

    base = invariant_measure_quadrature(h, spec, params)
    inverted = invariant_measure_quadrature(h_inv, spec, params)
    scaled = invariant_measure_quadrature(h_scaled, spec, params)
    return {
        "base": base,
        "inversion_difference": abs(base.value - inverted.value),
        "scaling_difference": abs(base.value - scaled.value),
    }


def weight_b_values(x: np.ndarray, params: Params) -> np.ndarray:
    return np.array([weight_b(tuple(row), params) for row in np.atleast_2d(x)])
