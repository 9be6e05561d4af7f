"""Negative moments of zeta, the limiting constant, and predictor formulas."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import mpmath
import numpy as np

from .arith import binomial_real, sieve
from .errors import BudgetError, DomainError, NegMomError, UnsupportedRegimeError
from .quadrature import gl_rule
from .schedule import MomentSpec, RegimeCase, classify_regime
from .settings import DEFAULT_SETTINGS, Settings
from .zeta import zeta, zeta_line

log = logging.getLogger(__name__)

PRIME_CUTOFF_MAX = 10**7
POWERFUL_LIMIT = 10**9


# ---------------------------------------------------------------- quadrature


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-7
    panel_width: float = 0.5
    low_order: int = 8
    high_order: int = 16
    max_depth: int = 20
    near_zero_factor: float = 10.0
    zeta_target: float = 1e-9
    max_panels: int = 5_000_000
    threads: int | None = None
    allow_outside_budget: bool = False


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    panels_used: int
    refinement_depth_max: int
    min_abs_zeta_seen: float
    error_estimate: float


def _panel_nodes(a: np.ndarray, b: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = gl_rule(order)
    half = 0.5 * (b - a)[:, None]
    return (a[:, None] + half * (x[None, :] + 1.0)), half * w[None, :]


def negative_moment(spec: MomentSpec, cfg: QuadConfig = QuadConfig()) -> QuadratureResult:
    """(1/T) * integral over [T, 2T] of |zeta(1/2 + alpha + it)|^{-2k}.

    Panels are refined level by level: a panel is halved while its two
    Gauss-Legendre orders disagree beyond ``rel_tol`` or while some node
    has |zeta| within ``near_zero_factor`` times its own error bound.
    """
    if spec.k == 0:
        return QuadratureResult(1.0, 0, 0, math.inf, 0.0)
    if not cfg.allow_outside_budget and (spec.alpha < 0.05 or spec.T > 1e5):
        raise DomainError("default budget covers alpha >= 0.05 and T <= 1e5; set allow_outside_budget to go further")
    if not math.isfinite(spec.T) or spec.T > 5e5:
        raise DomainError("T must be at most 5e5 so that 2T stays in range")
    T = spec.T
    sigma = 0.5 + spec.alpha
    p = 2 * spec.k
    n0 = max(1, int(math.ceil(T / cfg.panel_width)))
    edges = np.linspace(T, 2 * T, n0 + 1)
    a, b = edges[:-1], edges[1:]
    depth = 0
    accepted_val: list[float] = []
    accepted_err: list[float] = []
    used = 0
    min_abs = math.inf
    while a.size:
        if depth > cfg.max_depth or used + a.size > cfg.max_panels:
            partial = math.fsum(accepted_val) / T
            raise BudgetError(
                f"refinement budget exhausted at depth {depth} with {a.size} panels unresolved",
                partial=QuadratureResult(partial, used, depth, min_abs, math.inf),
            )
        lo_x, lo_w = _panel_nodes(a, b, cfg.low_order)
        hi_x, hi_w = _panel_nodes(a, b, cfg.high_order)
        nodes = np.concatenate([lo_x, hi_x], axis=1)
        z, zerr = zeta_line(sigma, nodes.ravel(), cfg.zeta_target, cfg.threads)
        mod = np.abs(z).reshape(nodes.shape)
        zerr = zerr.reshape(nodes.shape)
        min_abs = min(min_abs, float(mod.min()))
        f = mod ** (-p)
        # first-order propagation of the zeta error through |.|^{-p}
        df = p * mod ** (-p - 1) * zerr
        lo_f = f[:, : cfg.low_order]
        hi_f, hi_df = f[:, cfg.low_order :], df[:, cfg.low_order :]
        I_lo = (lo_f * lo_w).sum(axis=1)
        I_hi = (hi_f * hi_w).sum(axis=1)
        prop = (hi_df * hi_w).sum(axis=1)
        diff = np.abs(I_hi - I_lo)
        near = (mod < cfg.near_zero_factor * zerr).any(axis=1)
        ok = (diff <= cfg.rel_tol * np.abs(I_hi)) & ~near
        accepted_val.extend(I_hi[ok].tolist())
        accepted_err.extend((diff[ok] + prop[ok]).tolist())
        used += int(ok.sum())
        a_bad, b_bad = a[~ok], b[~ok]
        mid = 0.5 * (a_bad + b_bad)
        a = np.concatenate([a_bad, mid])
        b = np.concatenate([mid, b_bad])
        order = np.argsort(a, kind="stable")
        a, b = a[order], b[order]
        if a.size:
            depth += 1
    return QuadratureResult(
        value=math.fsum(accepted_val) / T,
        panels_used=used,
        refinement_depth_max=depth,
        min_abs_zeta_seen=min_abs,
        error_estimate=math.fsum(accepted_err) / T,
    )


# ---------------------------------------------------------------- limiting constant


def _local_coefficients(k: float, tol: float, x_max: float) -> np.ndarray:
    """mu_k(p^j)^2 for j = 0.. until the terms times x_max^j fall below tol."""
    c = [1.0]
    j = 1
    while True:
        cj = binomial_real(k, j) ** 2
        c.append(cj)
        if (cj == 0 and float(k).is_integer() and j > k) or (cj * x_max**j < tol and j > 2):
            break
        j += 1
        if j > 400:
            break
    return np.array(c)


def _poly_eval(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x)
    for c in coef[::-1]:
        acc = acc * x + c
    return acc


def _log_local_sum(k: float, sigma: float, primes: np.ndarray, tol: float) -> float:
    """sum over primes of k^2 log(1 - p^-sigma) + log(sum_j mu_k(p^j)^2 p^{-j sigma})."""
    if primes.size == 0:
        return 0.0
    x = np.exp(-sigma * np.log(primes.astype(np.float64)))
    coef = _local_coefficients(k, tol * 1e-3, float(x.max()))
    terms = k * k * np.log1p(-x) + np.log1p(_poly_eval(coef, x) - 1.0)
    return math.fsum(terms)


def _tail_x2_sum(P: float, s2: float) -> float:
    """Approximate sum over primes p > P of p^{-s2} (prime number theorem)."""
    # integral of t^{-s2}/log t from P to infinity = E1((s2-1) log P)
    return float(mpmath.e1((s2 - 1) * math.log(P)))


def _tail_coefficient(k: float) -> float:
    """Coefficient of p^{-2 sigma} in the log of a local factor times (1 - p^-sigma)^{k^2}."""
    return binomial_real(k, 2) ** 2 - k**4 / 2 - k**2 / 2


@dataclass(frozen=True)
class ConstantDetail:
    value: float
    log_value: float
    prime_cutoff: int
    tail_estimate: float


@lru_cache(maxsize=8)
def _primes_cached(limit: int) -> np.ndarray:
    return sieve(limit).primes


def asymptotic_constant_detail(
    k: float, alpha: float, prime_cutoff: int | None = None, tail_tol: float = 1e-12
) -> ConstantDetail:
    """Euler-product evaluation of the limiting constant.

    zeta(sigma)^{k^2} prod_p (1-p^-sigma)^{k^2} (1 + sum_j mu_k(p^j)^2 p^{-j sigma}), sigma = 1 + 2 alpha.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        return ConstantDetail(1.0, 0.0, 0, 0.0)
    sigma = 1 + 2 * alpha
    coef2 = _tail_coefficient(k)
    if prime_cutoff is None:
        P = 1000
        while P < PRIME_CUTOFF_MAX and abs(coef2) * _tail_x2_sum(P, 2 * sigma) > tail_tol:
            P *= 10
        if abs(coef2) * _tail_x2_sum(P, 2 * sigma) > tail_tol:
            log.warning("prime cutoff capped at %d; tail estimate exceeds tolerance", P)
    else:
        P = int(prime_cutoff)
    tail = coef2 * _tail_x2_sum(P, 2 * sigma)
    primes = _primes_cached(max(P, 2))
    zs = zeta(complex(sigma, 0.0), 1e-14).value.real if sigma < 40 else 1.0
    logC = k * k * math.log(zs) + _log_local_sum(k, sigma, primes, tail_tol) + tail
    return ConstantDetail(math.exp(logC), logC, P, tail)


def asymptotic_constant(k: float, alpha: float, prime_cutoff: int | None = None, tail_tol: float = 1e-12) -> float:
    return asymptotic_constant_detail(k, alpha, prime_cutoff, tail_tol).value


def _powerful_local(k: float, emax: int) -> np.ndarray:
    """g(p^e) for the factor (1 - x)^{k^2} (sum_j mu_k(p^j)^2 x^j); g(p) = 0."""
    c = [binomial_real(k, j) ** 2 for j in range(emax + 1)]
    k2 = k * k
    mk = [(-1) ** i * binomial_real(k2, i) for i in range(emax + 1)]
    return np.array([math.fsum(c[i] * mk[e - i] for i in range(e + 1)) for e in range(emax + 1)])


def powerful_sum(k: float, sigma: float, limit: int = POWERFUL_LIMIT) -> float:
    """sum over powerful n <= limit of g(n) n^{-sigma}, by depth-first enumeration."""
    emax = int(math.log2(limit)) + 1
    g = _powerful_local(k, emax)
    root = math.isqrt(limit)
    primes = [int(p) for p in _primes_cached(max(root, 2))]
    terms: list[float] = [1.0]

    def dfs(start: int, n: int, val: float) -> None:
        for i in range(start, len(primes)):
            p = primes[i]
            pe = p * p
            if n * pe > limit:
                break
            e = 2
            while n * pe <= limit:
                v = val * g[e]
                if v != 0.0:
                    m = n * pe
                    terms.append(v * m ** (-sigma))
                    dfs(i + 1, m, v)
                pe *= p
                e += 1

    dfs(0, 1, 1.0)
    return math.fsum(terms)


def asymptotic_constant_diagonal(k: float, alpha: float, limit: int = POWERFUL_LIMIT) -> float:
    """The same constant as zeta(sigma)^{k^2} times a sum over powerful numbers."""
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if k == 0:
        return 1.0
    sigma = 1 + 2 * alpha
    zs = zeta(complex(sigma, 0.0), 1e-14).value.real if sigma < 40 else 1.0
    return zs ** (k * k) * powerful_sum(k, sigma, limit)


@dataclass(frozen=True)
class DirectDiagonal:
    partial: float
    tail_estimate: float
    tail_bound: float

    @property
    def value(self) -> float:
        return self.partial + self.tail_estimate


def diagonal_direct_sum(k: float, alpha: float, N: int = 10**6) -> DirectDiagonal:
    """sum_{n <= N} mu_k(n)^2 n^{-sigma} with a tail estimate and (k <= 1) a tail bound.

    The estimate integrates the leading term of the mean of mu_k(n)^2,
    G(1)/Gamma(k^2) (log t)^{k^2 - 1}, against t^{-sigma}.
    """
    from .mobius import mu_k_array

    sigma = 1 + 2 * alpha
    n = np.arange(1, N + 1, dtype=np.float64)
    vals = mu_k_array(k, 1, N + 1) ** 2 * np.exp(-sigma * np.log(n))
    partial = math.fsum(vals)
    k2 = k * k
    G1 = powerful_sum(k, 1.0)
    # sum_{n > N} ~ G(1)/Gamma(k^2) * Gamma(k^2, (sigma-1) log N) / (sigma-1)^{k^2}
    with mpmath.workdps(30):
        inc = mpmath.gammainc(k2, (sigma - 1) * math.log(N)) / (sigma - 1) ** k2
        est = float(G1 / mpmath.gamma(k2) * inc)
    bound = N ** (1 - sigma) / (sigma - 1) + N ** (-sigma) if k <= 1 else math.inf
    return DirectDiagonal(partial, est, bound)


# ---------------------------------------------------------------- predictors


def gonek_prediction(spec: MomentSpec) -> float:
    k, a, L = spec.k, spec.alpha, spec.log_T
    if 1 / L <= a <= 1:
        return (1 / a) ** (k * k)
    if a > 1:
        raise UnsupportedRegimeError("the conjecture covers alpha <= 1 only")
    if k < 0.5:
        return L ** (k * k)
    if k == 0.5:
        return math.log(math.e / (a * L)) * L**0.25
    raise UnsupportedRegimeError("no prediction for k > 1/2 with alpha <= 1/log T (superseded)")


def _half_odd(k: float) -> bool:
    twice = 2 * k
    return abs(twice - round(twice)) < 1e-12 and round(twice) % 2 == 1


def rmt_prediction(spec: MomentSpec) -> float:
    k, a, L = spec.k, spec.alpha, spec.log_T
    if a > 1 / L:
        raise DomainError("the random-matrix prediction needs alpha <= 1/log T")
    if _half_odd(k):
        j = int(round(k + 0.5))
        return math.log(math.e / (a * L)) * L ** (k * k) * (a * L) ** (-j * (2 * k - j))
    j = int(math.floor(k + 0.5))
    return L ** (k * k) * (a * L) ** (-j * (2 * k - j))


def theorem_log_bound(spec: MomentSpec, case: RegimeCase | None = None, settings: Settings = DEFAULT_SETTINGS) -> float:
    """log of the upper bound for the chosen alpha range (implicit constants 1)."""
    case = case or classify_regime(spec, settings)
    k, a, eps, dl = spec.k, spec.alpha, spec.epsilon, spec.delta_param
    L, LL = spec.log_T, spec.loglog_T
    LLL = math.log(LL)
    power_of_T = (1 + dl) * (k * spec.u - 0.5 + k * eps) * L
    if case is RegimeCase.K_HIGH_WIDE:
        return k * LLL + k * k * LL
    if case is RegimeCase.K_HIGH_MID:
        return (4 + eps) * L * LLL / LL
    if case is RegimeCase.K_HIGH_NARROW:
        return power_of_T
    if case is RegimeCase.K_LOW_WIDE:
        return k * LLL + k * k * math.log(math.log(a * L) / a) if k else 0.0
    if case is RegimeCase.K_LOW_MID:
        return settings.C1 * LL * math.log(LL / (a * L)) ** 2
    if case is RegimeCase.K_LOW_NARROW:
        return settings.C2 * (1 / (a * L)) ** (2 * k / (1 - 2 * k - k * eps))
    return power_of_T + settings.c_O * L * LLL / LL


def theorem_bound(spec: MomentSpec, case: RegimeCase | None = None, settings: Settings = DEFAULT_SETTINGS) -> float:
    x = theorem_log_bound(spec, case, settings)
    return math.exp(x) if x < 709 else math.inf


# ---------------------------------------------------------------- reports


UNSUPPORTED = "unsupported-regime"
OUT_OF_DOMAIN = "out-of-domain"


@dataclass(frozen=True)
class PredictionReport:
    spec: MomentSpec
    measured: QuadratureResult | None
    gonek: float | None
    rmt: float | None
    asymptotic_constant: float | None
    theorem_bound: float | None
    ratios: dict[str, float]
    regime: RegimeCase
    markers: dict[str, str] = field(default_factory=dict)

    def cell(self, name: str) -> Any:
        if name in self.markers:
            return self.markers[name]
        return getattr(self, name)


def _marker(exc: Exception) -> str:
    if isinstance(exc, UnsupportedRegimeError):
        return UNSUPPORTED
    if isinstance(exc, DomainError):
        return OUT_OF_DOMAIN
    return f"error:{type(exc).__name__}"


def run_report(spec: MomentSpec, quad_cfg: QuadConfig = QuadConfig(), settings: Settings = DEFAULT_SETTINGS) -> PredictionReport:
    markers: dict[str, str] = {}
    values: dict[str, Any] = {}
    producers = {
        "measured": lambda: negative_moment(spec, quad_cfg),
        "gonek": lambda: gonek_prediction(spec),
        "rmt": lambda: rmt_prediction(spec),
        "asymptotic_constant": lambda: asymptotic_constant(spec.k, spec.alpha),
        "theorem_bound": lambda: theorem_bound(spec, None, settings),
    }
    for name, fn in producers.items():
        try:
            values[name] = fn()
        except NegMomError as exc:
            values[name] = None
            markers[name] = _marker(exc)
    ratios: dict[str, float] = {}
    m = values["measured"]
    if m is not None:
        for name in ("gonek", "rmt", "asymptotic_constant", "theorem_bound"):
            v = values[name]
            if v is not None and v != 0 and math.isfinite(v):
                ratios[name] = m.value / v
    return PredictionReport(
        spec=spec,
        measured=m,
        gonek=values["gonek"],
        rmt=values["rmt"],
        asymptotic_constant=values["asymptotic_constant"],
        theorem_bound=values["theorem_bound"],
        ratios=ratios,
        regime=classify_regime(spec, settings),
        markers=markers,
    )
