# src/conic_bounds.py
"""
Closed-form success-probability bounds for random embeddings.

Circular-cone intrinsic volumes, the Crofton tail 2*h_{D-d+1}, the embedding
bound tau(r, d, D) with its pointwise / uniform / low-effective-dimension
variants, the uniform-sampling bound, the crossover distance and the number
of embeddings K_xi. Products of gammas and powers are carried in log-space;
a linear value is only materialized when log10 > -300.
"""
import logging
import math
from typing import Iterable, List, Optional

import pandas as pd
from scipy.special import betaln, gammaln, logsumexp

from src.errors import DimensionError, DomainError
from src.models.bounds import (
    BoundReport,
    CircularCone,
    ConvergenceParams,
    CrossoverReport,
    IntrinsicVolumeVector,
)

logger = logging.getLogger(__name__)

LN10 = math.log(10.0)
HALF_SPACE_TOL = 1e-9
MIN_LOG10 = -300.0

_CF_EPS = 1e-15
_CF_FPMIN = 1e-300
_CF_MAXIT = 20000


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction of the incomplete beta function (modified Lentz)"""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_FPMIN:
        d = _CF_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FPMIN:
            d = _CF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _CF_FPMIN:
            c = _CF_FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FPMIN:
            d = _CF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _CF_FPMIN:
            c = _CF_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise DomainError(f"a={a} or b={b} too large to compute the incomplete beta function")


def log_regularized_incomplete_beta(a: float, b: float, x: float, x_complement: Optional[float] = None) -> float:
    """log I_x(a, b) for a, b > 0 and 0 <= x <= 1.

    ``x_complement`` (= 1 - x) may be passed when it is known more accurately
    than the subtraction would give.
    """
    xc = 1.0 - x if x_complement is None else x_complement
    if x <= 0.0:
        return -math.inf
    if xc <= 0.0:
        return 0.0
    log_front = a * math.log(x) + b * math.log(xc) - betaln(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return log_front + math.log(_betacf(a, b, x)) - math.log(a)
    tail = math.exp(log_front) * _betacf(b, a, xc) / b
    return math.log1p(-tail) if tail < 1.0 else -math.inf


def log_sin_power_integral(n: int, theta: float) -> float:
    """log of the integral of sin^n(x) over [0, theta], 0 <= theta <= pi/2.

    Uses  int_0^theta sin^n = 1/2 * B(sin^2 theta; (n+1)/2, 1/2).
    """
    if theta <= 0.0:
        return -math.inf
    if theta > math.pi / 2 + 1e-15:
        raise DomainError(f"theta must lie in [0, pi/2], got {theta}")
    a = (n + 1) / 2.0
    x = math.sin(theta) ** 2
    xc = math.cos(theta) ** 2
    return math.log(0.5) + log_regularized_incomplete_beta(a, 0.5, x, xc) + betaln(a, 0.5)


def log_binom(i: float, j: float) -> float:
    """log of the generalized binomial Gamma(i+1) / (Gamma(j+1) Gamma(i-j+1))"""
    if i + 1 <= 0 or j + 1 <= 0 or i - j + 1 <= 0:
        raise DomainError(f"Generalized binomial ({i} choose {j}) needs positive gamma arguments")
    return float(gammaln(i + 1) - gammaln(j + 1) - gammaln(i - j + 1))


def _to_report(log_tau: float, kind: str, inputs: dict, flags: Optional[List[str]] = None) -> BoundReport:
    log10_tau = min(log_tau / LN10, 0.0)
    tau = 10.0 ** log10_tau if log10_tau > MIN_LOG10 else 0.0
    return BoundReport(tau=min(tau, 1.0), log10_tau=log10_tau, kind=kind, inputs=inputs, flags=flags or [])


def _certain(kind: str, inputs: dict, flag: str) -> BoundReport:
    return BoundReport(tau=1.0, log10_tau=0.0, kind=kind, inputs=inputs, flags=[flag])


def _log_circ_volume(D: int, alpha: float, k: int) -> float:
    if alpha >= math.pi / 2 - HALF_SPACE_TOL:
        # half-space limit
        return math.log(0.5) if k in (D - 1, D) else -math.inf
    if 1 <= k <= D - 1:
        return (
            math.log(0.5)
            + log_binom((D - 2) / 2, (k - 1) / 2)
            + (k - 1) * math.log(math.sin(alpha))
            + (D - k - 1) * math.log(math.cos(alpha))
        )
    theta = math.pi / 2 - alpha if k == 0 else alpha
    j = -0.5 if k == 0 else (D - 1) / 2
    return math.log((D - 1) / 2) + log_binom((D - 2) / 2, j) + log_sin_power_integral(D - 2, theta)


def _check_cone(D: int, alpha: float) -> None:
    if D < 2:
        raise DimensionError(f"Circular cones need D >= 2, got {D}")
    if not 0.0 < alpha <= math.pi / 2:
        raise DomainError(f"Cone half-angle must lie in (0, pi/2), got {alpha}")


def circ_intrinsic_volume(D: int, alpha: float, k: int) -> tuple:
    """k-th intrinsic volume of Circ_D(alpha) as (value, natural-log value)"""
    _check_cone(D, alpha)
    if not 0 <= k <= D:
        raise DimensionError(f"Index k must lie in [0, {D}], got {k}")
    log_value = _log_circ_volume(D, alpha, k)
    return math.exp(log_value), log_value


def intrinsic_volumes(D: int, alpha: float) -> IntrinsicVolumeVector:
    _check_cone(D, alpha)
    logs = [_log_circ_volume(D, alpha, k) for k in range(D + 1)]
    return IntrinsicVolumeVector(values=[math.exp(v) for v in logs], log_values=logs)


def subspace_intrinsic_volume(D: int, d: int, k: int) -> int:
    if not 0 <= d <= D or not 0 <= k <= D:
        raise DimensionError(f"Need 0 <= d, k <= D, got D={D}, d={d}, k={k}")
    return 1 if k == d else 0


def log_crofton_tail(D: int, d: int, cone: CircularCone) -> float:
    if not 1 <= d < D:
        raise DimensionError(f"Need 1 <= d < D, got d={d}, D={D}")
    _check_cone(cone.D, cone.alpha)
    if cone.D != D:
        raise DimensionError(f"Cone lives in dimension {cone.D}, expected {D}")
    logs = [_log_circ_volume(D, cone.alpha, k) for k in range(D - d + 1, D + 1, 2)]
    return math.log(2.0) + float(logsumexp(logs))


def crofton_tail(D: int, d: int, cone: CircularCone) -> float:
    """P[a uniformly rotated d-subspace meets the cone nontrivially] = 2 h_{D-d+1}"""
    return min(math.exp(log_crofton_tail(D, d, cone)), 1.0)


def _check_tau_args(r: float, d: int, D: int) -> None:
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    if not 1 <= d < D:
        raise DimensionError(f"Need 1 <= d < D, got d={d}, D={D}")


def _log_tau(r: float, d: int, D: int) -> float:
    if d == 1:
        return (
            math.log(D - 1)
            + log_binom((D - 2) / 2, (D - 1) / 2)
            + log_sin_power_integral(D - 2, math.asin(r))
        )
    return (
        log_binom((D - 2) / 2, (D - d) / 2)
        + (D - d) * math.log(r)
        + (d - 2) / 2 * math.log1p(-r * r)
    )


def tau(r: float, d: int, D: int) -> BoundReport:
    """Embedding success lower bound tau(r, d, D) = 2 v_{D-d+1}(Circ_D(arcsin r))"""
    _check_tau_args(r, d, D)
    return _to_report(_log_tau(r, d, D), "raw", {"r": r, "d": d, "D": D})


def _check_positive(epsilon: float, L: float) -> None:
    if epsilon <= 0 or L <= 0:
        raise DomainError(f"epsilon and L must be positive, got {epsilon}, {L}")


def _ratio(epsilon: float, L: float, distance: float) -> float:
    r = epsilon / (L * distance)
    return min(r, math.nextafter(1.0, 0.0))


def tau_pointwise(epsilon: float, L: float, dist_x_star_p: float, d: int, D: int) -> BoundReport:
    _check_positive(epsilon, L)
    inputs = {"epsilon": epsilon, "L": L, "distance": dist_x_star_p, "d": d, "D": D}
    if dist_x_star_p <= epsilon / L:
        return _certain("pointwise", inputs, "p-inside-ball")
    r = _ratio(epsilon, L, dist_x_star_p)
    _check_tau_args(r, d, D)
    inputs["r"] = r
    return _to_report(_log_tau(r, d, D), "pointwise", inputs)


def tau_uniform(epsilon: float, L: float, r_max: float, d: int, D: int) -> BoundReport:
    _check_positive(epsilon, L)
    inputs = {"epsilon": epsilon, "L": L, "R_max": r_max, "d": d, "D": D}
    if r_max <= epsilon / L:
        return _certain("uniform", inputs, "p-inside-ball")
    r = _ratio(epsilon, L, r_max)
    _check_tau_args(r, d, D)
    inputs["r"] = r
    return _to_report(_log_tau(r, d, D), "uniform", inputs)


def tau_asymptotic(r: float, d: int, D: int) -> float:
    """log10 of the leading term D^((d-2)/2) r^(D-d); order of magnitude only"""
    _check_tau_args(r, d, D)
    return (d - 2) / 2 * math.log10(D) + (D - d) * math.log10(r)


def tau_us(epsilon: float, L: float, D: int) -> BoundReport:
    """Probability that one uniform sample of [-1, 1]^D lands in B_{epsilon/L}(x*)"""
    _check_positive(epsilon, L)
    if D < 1:
        raise DimensionError(f"Need D >= 1, got {D}")
    radius = epsilon / L
    flags = []
    if radius > 1.0:
        flags.append("vacuous-risk")
        logger.warning("Ball of radius %.3g is not contained in [-1, 1]^%d", radius, D)
    log_tau = D / 2 * math.log(math.pi) - D * math.log(2.0) - float(gammaln(D / 2 + 1)) + D * math.log(radius)
    return _to_report(min(log_tau, 0.0), "uniform-sampling", {"epsilon": epsilon, "L": L, "D": D}, flags)


def crossover_distance(D: int) -> float:
    return math.sqrt(2 * D / (math.pi * math.e))


def crossover(epsilon: float, L: float, distance: float, d: int, D: int) -> CrossoverReport:
    embedding = tau_pointwise(epsilon, L, distance, d, D)
    uniform = tau_us(epsilon, L, D)
    log10_ratio = embedding.log10_tau - uniform.log10_tau
    return CrossoverReport(
        delta0=crossover_distance(D),
        distance=distance,
        log10_ratio=log10_ratio,
        regime="embedding-favored" if log10_ratio > 0 else "uniform-favored",
        embedding=embedding,
        uniform_sampling=uniform,
    )


def tau_led(epsilon: float, L: float, dist_or_rmax: float, d: int, d_e: int) -> BoundReport:
    """Low-effective-dimension bound tau(r_eff, d, d_e); the ambient D plays no role"""
    if d < 1 or d_e < 1:
        raise DimensionError(f"Need d, d_e >= 1, got d={d}, d_e={d_e}")
    _check_positive(epsilon, L)
    inputs = {"epsilon": epsilon, "L": L, "distance": dist_or_rmax, "d": d, "d_e": d_e}
    if d >= d_e:
        return _certain("led", inputs, "d-at-least-effective-dimension")
    if dist_or_rmax <= epsilon / L:
        return _certain("led", inputs, "p-inside-ball")
    r = _ratio(epsilon, L, dist_or_rmax)
    inputs["r"] = r
    return _to_report(_log_tau(r, d, d_e), "led", inputs)


def k_xi(xi: float, tau_lb: float, rho_lb: float) -> ConvergenceParams:
    """K_xi = ceil(|log(1 - xi)| / (tau_lb rho_lb)), natural logarithm"""
    if not 0.0 < xi < 1.0:
        raise DomainError(f"xi must lie in (0, 1), got {xi}")
    product = tau_lb * rho_lb
    if product <= 0.0:
        raise DomainError("tau_lb * rho_lb must be positive")
    value = abs(math.log1p(-xi)) / product
    # absorb rounding in log(1 - xi) when the quotient is an integer
    k = max(1, math.ceil(value - 1e-12 * max(1.0, value)))
    guaranteed = 1.0 - (1.0 - product) ** k
    return ConvergenceParams(xi=xi, tau_lb=tau_lb, rho_lb=rho_lb, k_xi=k, guaranteed=guaranteed)


def success_curve(
    k: int,
    tau_lb: float,
    rho_lb: float,
    k_max: Optional[int] = None,
    rho_at_kmax: Optional[float] = None,
) -> float:
    """Lower bound on P[f(x_opt^k) <= f* + eps] after k embeddings"""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    bound = 1.0 - (1.0 - tau_lb * rho_lb) ** k
    if k_max is not None and rho_at_kmax is not None and k >= k_max:
        return max(bound, rho_at_kmax)
    return bound


def bound_table(dims: Iterable[int], subspace_dims: Iterable[int], radii: Iterable[float]) -> pd.DataFrame:
    """tau and log10 tau over a (D, d, r) grid, skipping d >= D"""
    rows = []
    for D in dims:
        for d in subspace_dims:
            if d >= D:
                continue
            for r in radii:
                report = tau(r, d, D)
                rows.append({
                    "D": D,
                    "d": d,
                    "r": r,
                    "tau": report.tau,
                    "log10_tau": report.log10_tau,
                    "log10_asymptotic": tau_asymptotic(r, d, D),
                    "crofton_tail": crofton_tail(D, d, CircularCone(D=D, alpha=math.asin(r))),
                })
    return pd.DataFrame(rows, columns=["D", "d", "r", "tau", "log10_tau", "log10_asymptotic", "crofton_tail"])
