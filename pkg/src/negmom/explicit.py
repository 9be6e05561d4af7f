"""Majorant coefficients for the lower bound of log|zeta|, and diagnostics built on them."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Mapping

import numpy as np

from .arith import PrimeTable, sieve, truncated_exp
from .errors import ConvergenceError, DomainError, InternalConsistencyError
from .settings import DEFAULT_SETTINGS, Settings

if TYPE_CHECKING:
    from .schedule import MomentSpec, ParameterSchedule

log = logging.getLogger(__name__)

MAX_SERIES_TERMS = 10**7
LOG_MAX_FLOAT = 709.0
TWO_PI = 2.0 * math.pi


class Regime(enum.Enum):
    LARGE = "large"  # Delta*alpha at or above the threshold
    SMALL = "small"


@dataclass(frozen=True)
class MajorantConfig:
    alpha: float
    delta: float
    settings: Settings = DEFAULT_SETTINGS

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must be positive, got {self.delta}")
        if TWO_PI * self.delta >= LOG_MAX_FLOAT:
            raise DomainError(f"prime cutoff exp(2 pi {self.delta}) is not representable")

    @property
    def regime(self) -> Regime:
        if self.delta * self.alpha >= self.settings.regime_threshold:
            return Regime.LARGE
        return Regime.SMALL

    @property
    def log_cutoff(self) -> float:
        return TWO_PI * self.delta

    @property
    def cutoff(self) -> float:
        return math.exp(self.log_cutoff)


def gamma_of(config: MajorantConfig) -> int:
    return 0 if config.regime is Regime.LARGE else 1


def b_of_delta(config: MajorantConfig) -> float:
    if config.regime is Regime.LARGE:
        return 1.0 / -math.expm1(-TWO_PI * config.delta * config.alpha)
    return 0.5 + config.settings.eps_b


def coefficient_bound(config: MajorantConfig, with_constant: bool = False) -> float:
    """b(Delta) (log 1/(Delta alpha))^gamma, optionally plus c_O in the small regime.

    ``with_constant`` restores the O(1) that the single-line bound drops.
    """
    g = gamma_of(config)
    out = b_of_delta(config) * (math.log(1.0 / (config.delta * config.alpha)) ** g)
    if with_constant and g:
        out += config.settings.c_O
    return out


def _series_length(config: MajorantConfig, tol: float) -> int:
    """Index J such that the tail after term J is provably below ``tol``.

    For j >= 1 each term is at most 3/(2 pi Delta) q^j with q = exp(-2 pi Delta alpha).
    """
    x = TWO_PI * config.delta * config.alpha
    q_log = -x
    one_minus_q = -math.expm1(-x)
    pref = 4.0 / (TWO_PI * config.delta)
    need = math.log(tol * one_minus_q / pref) / q_log - 1.0
    J = max(1, int(math.ceil(need)))
    if J > MAX_SERIES_TERMS:
        raise ConvergenceError(f"series for Delta*alpha = {config.delta * config.alpha:.3g} needs {J} terms")
    return J


def tail_bound(config: MajorantConfig, J: int) -> float:
    x = TWO_PI * config.delta * config.alpha
    return 4.0 / (TWO_PI * config.delta) * math.exp(-x * (J + 1)) / -math.expm1(-x)


def _a_terms(log_n: np.ndarray, config: MajorantConfig, J: int) -> np.ndarray:
    """Sum of the first J+1 series terms for each log n (shape of ``log_n``)."""
    d2 = TWO_PI * config.delta
    al = config.alpha
    out = np.zeros_like(log_n, dtype=np.float64)
    comp = np.zeros_like(out)  # Kahan compensation
    for j in range(J + 1):
        first = (j + 1) / (log_n + d2 * j) * math.exp(-d2 * j * al)
        second = (j + 1) / (d2 * (j + 2) - log_n) * np.exp(2 * al * log_n - d2 * (j + 2) * al)
        y = (first - second) - comp
        t = out + y
        comp = (t - out) - y
        out = t
    return out


def a_alpha(n: int, config: MajorantConfig, tol: float = 1e-12) -> float:
    """The majorant weight of n; requires log n < 2 pi Delta."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    log_n = math.log(n)
    if log_n >= config.log_cutoff:
        raise DomainError(f"log {n} = {log_n:.6g} is not below 2 pi Delta = {config.log_cutoff:.6g}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    J = _series_length(config, tol)
    return float(_a_terms(np.array([log_n]), config, J)[0])


def a_alpha_array(ns: np.ndarray, config: MajorantConfig, tol: float = 1e-12) -> np.ndarray:
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size == 0:
        return np.zeros(0)
    log_n = np.log(ns.astype(np.float64))
    if ns.min() < 2 or log_n.max() >= config.log_cutoff:
        raise DomainError("every n must satisfy 2 <= n and log n < 2 pi Delta")
    return _a_terms(log_n, config, _series_length(config, tol))


def b_alpha(p: int, config: MajorantConfig, tol: float = 1e-12) -> float:
    return -a_alpha(p, config, tol) * math.log(p)


@dataclass(frozen=True)
class BoundViolation:
    p: int
    b: float
    bound: float


@dataclass(frozen=True)
class MajorantCoefficients:
    config: MajorantConfig
    primes: np.ndarray
    a: np.ndarray
    b: np.ndarray
    violations: tuple[BoundViolation, ...] = ()

    @property
    def table(self) -> dict[int, tuple[float, float]]:
        return {int(p): (float(x), float(y)) for p, x, y in zip(self.primes, self.a, self.b)}

    def __len__(self) -> int:
        return int(self.primes.size)


def build_coefficients(
    config: MajorantConfig,
    primes: PrimeTable | None = None,
    tol: float = 1e-12,
    strict: bool = True,
) -> MajorantCoefficients:
    """a and b over every prime p with log p < 2 pi Delta.

    Negative a is always an internal-consistency error. A breach of the
    |b| bound raises too when ``strict``; otherwise it is recorded in
    ``violations`` and logged.
    """
    cutoff = config.cutoff
    need = int(math.floor(cutoff))
    if primes is None:
        primes = sieve(max(2, need))
    elif primes.limit < need:
        raise DomainError(f"prime table stops at {primes.limit}, need {need}")
    ps = primes.upto(cutoff)
    ps = ps[np.log(ps.astype(np.float64)) < config.log_cutoff]
    a = a_alpha_array(ps, config, tol)
    if a.size and a.min() < -tol:
        i = int(np.argmin(a))
        raise InternalConsistencyError(f"a_alpha({int(ps[i])}) = {a[i]:.3e} < 0")
    b = -a * np.log(ps.astype(np.float64))
    bound = coefficient_bound(config)
    bad = np.flatnonzero(np.abs(b) > bound * (1 + 1e-12))
    viol = tuple(BoundViolation(int(ps[i]), float(b[i]), bound) for i in bad)
    if viol:
        msg = (
            f"|b| exceeds {bound:.6g} at {len(viol)} primes "
            f"(alpha={config.alpha:g}, Delta={config.delta:g}, worst {max(abs(v.b) for v in viol):.6g})"
        )
        if strict:
            raise InternalConsistencyError(msg)
        log.info(msg)
    ps = ps.copy()
    for arr in (ps, a, b):
        arr.setflags(write=False)
    return MajorantCoefficients(config=config, primes=ps, a=a, b=b, violations=viol)


# ---------------------------------------------------------------- pointwise bounds


class CCVariant(enum.Enum):
    TINY_SHIFT = "tiny"
    NEAR_HALF_SHIFT = "near_half"
    MID_SHIFT = "mid"


def _split_s(s: complex) -> tuple[float, float]:
    s = complex(s)
    t = s.imag
    alpha = s.real - 0.5
    if t < 100:
        raise DomainError(f"Im(s) must be >= 100, got {t}")
    if not (0 < alpha <= 0.5):
        raise DomainError(f"Re(s) - 1/2 must lie in (0, 1/2], got {alpha}")
    return alpha, t


def select_cc_variant(s: complex, settings: Settings = DEFAULT_SETTINGS) -> CCVariant:
    alpha, t = _split_s(s)
    ll = math.log(math.log(t))
    m = settings.range_multiplier
    if (0.5 - alpha) * ll <= m:
        return CCVariant.NEAR_HALF_SHIFT
    if alpha * ll <= m:
        return CCVariant.TINY_SHIFT
    return CCVariant.MID_SHIFT


def _cc_parts(alpha: float, t: float, variant: CCVariant) -> tuple[float, float]:
    """(main term, order term) for the chosen variant."""
    L = math.log(t)
    LL = math.log(L)
    LLL = math.log(LL)
    if variant is CCVariant.TINY_SHIFT:
        inner = -math.expm1(-2 * alpha * LL)  # 1 - L^{-2 alpha}
        main = L / (2 * LL) * math.log(inner)
        order = L / LL + L / LL**2 * -math.log(inner)
        return main, order
    if variant is CCVariant.NEAR_HALF_SHIFT:
        return -LLL, 1.0
    if alpha >= 0.5:
        raise DomainError("the mid-shift bound needs alpha < 1/2")
    coef = 0.5 + 8 * alpha / (1 - 4 * alpha**2)
    grow = L ** (1 - 2 * alpha)
    return -coef * grow / LL - LLL, grow / ((1 - 2 * alpha) ** 2 * LL**2)


def cc_main_term(s: complex, variant: CCVariant | None = None, settings: Settings = DEFAULT_SETTINGS) -> float:
    alpha, t = _split_s(s)
    return _cc_parts(alpha, t, variant or select_cc_variant(s, settings))[0]


def cc_lower_bound(s: complex, variant: CCVariant | None = None, settings: Settings = DEFAULT_SETTINGS) -> float:
    """Candidate lower bound for log|zeta(s)|: main term minus c_O times the order term.

    Diagnostic only; the true constants are unknown.
    """
    alpha, t = _split_s(s)
    main, order = _cc_parts(alpha, t, variant or select_cc_variant(s, settings))
    return main - settings.c_O * order


# ---------------------------------------------------------------- log|zeta| lower bound


def error_scale(delta: float, t: float) -> float:
    """Argument of the exp(O(.)) factor: Delta^2 e^{pi Delta}/(1+Delta t) + Delta log(1+Delta sqrt t)/sqrt t + 1."""
    rt = math.sqrt(t)
    return delta**2 * math.exp(math.pi * delta) / (1 + delta * t) + delta * math.log1p(delta * rt) / rt + 1.0


def log_zeta_lower_bound(
    t: float,
    coeffs: MajorantCoefficients,
    T: float,
) -> float:
    """Right side of the lower bound for log|zeta(1/2+alpha+it)| with every O(.) set to c_O times its argument."""
    cfg = coeffs.config
    st = cfg.settings
    alpha, delta = cfg.alpha, cfg.delta
    main = math.log(t / TWO_PI) / (TWO_PI * delta) * math.log(-math.expm1(-TWO_PI * delta * alpha))
    ps = coeffs.primes.astype(np.float64)
    lp = np.log(ps)
    terms = lp * coeffs.a * np.exp(-(0.5 + alpha) * lp) * np.cos(t * lp)
    prime_sum = math.fsum(terms)
    lll = math.log(math.log(math.log(T)))
    g = gamma_of(cfg)
    return main + prime_sum - lll / 2 - math.log(1 / (delta * alpha)) ** g - st.c_O * error_scale(delta, t)


@dataclass(frozen=True)
class AuditReport:
    samples: int
    holds: int
    worst_margin: float
    failures: tuple[tuple[float, float], ...] = field(default=())  # (t, margin)

    @property
    def fraction(self) -> float:
        return self.holds / self.samples if self.samples else float("nan")


def audit_log_zeta_bound(
    alpha: float = 0.3,
    T: float = 1000.0,
    samples: int = 1000,
    delta: float | None = None,
    settings: Settings = DEFAULT_SETTINGS,
    seed: int = 0,
) -> AuditReport:
    """Compare the lower bound with log|zeta| at random t in [T, 2T]. Logged, never raised."""
    from .zeta import zeta_line

    if delta is None:
        delta = math.log(math.log(T)) / math.pi
    coeffs = build_coefficients(MajorantConfig(alpha, delta, settings), strict=False)
    ts = np.sort(np.random.default_rng(seed).uniform(T, 2 * T, samples))
    vals, _ = zeta_line(0.5 + alpha, ts, 1e-10)
    margins = [math.log(abs(v)) - log_zeta_lower_bound(float(t), coeffs, T) for t, v in zip(ts, vals)]
    fails = tuple((float(t), m) for t, m in zip(ts, margins) if m < 0)
    rep = AuditReport(samples=samples, holds=samples - len(fails), worst_margin=min(margins), failures=fails)
    log.info("log|zeta| lower bound holds at %d/%d samples (worst margin %.3g)", rep.holds, samples, rep.worst_margin)
    return rep


# ---------------------------------------------------------------- pointwise decomposition


@dataclass(frozen=True)
class Decomposition:
    S1: float
    S2: float
    excluded: bool
    log_S1: float
    log_S2: float
    max_P0: float
    threshold: float


def _safe_exp(x: float) -> float:
    if x == -math.inf:
        return 0.0
    return math.exp(x) if x < LOG_MAX_FLOAT else math.inf


def _logsumexp(xs: list[float]) -> float:
    xs = [x for x in xs if x != -math.inf]
    if not xs:
        return -math.inf
    m = max(xs)
    return m + math.log(math.fsum(math.exp(x - m) for x in xs))


def _log_prefactor(spec: "MomentSpec", beta: float, delta: float, settings: Settings, t: float) -> float:
    """log of (loglog T)^k (1/(1-T^{-beta alpha}))^{2k/beta} exp(2k(log 1/(Delta alpha))^gamma) exp(c_O err)."""
    k, alpha, L = spec.k, spec.alpha, spec.log_T
    g = gamma_of(MajorantConfig(alpha, delta, settings))
    out = k * math.log(math.log(L))
    out += -(2 * k / beta) * math.log(-math.expm1(-beta * alpha * L))
    out += 2 * k * math.log(1 / (delta * alpha)) ** g
    out += settings.c_O * error_scale(delta, t)
    return out


def _log_E_factor(k: float, P: complex, ell: int) -> float:
    val = abs(truncated_exp(k * P, ell)) ** 2 * (1 + 1 / (15 * math.exp(ell))) ** 2
    return math.log(max(1.0, val))


def excluded_set_decomposition(
    t: float,
    spec: "MomentSpec",
    schedule: "ParameterSchedule",
    settings: Settings = DEFAULT_SETTINGS,
    p_eval: Callable[[int, int, float], complex] | None = None,
    primes: PrimeTable | None = None,
    force: bool = False,
) -> Decomposition:
    """Either flag t as lying outside the first controlled set, or return the two-piece majorant S1 + S2.

    ``p_eval(u, v, t)`` overrides the prime polynomials (for synthetic inputs).
    ``force`` evaluates S1 and S2 even for an excluded t.
    """
    from .dirichlet import polynomial_family

    if not (spec.T <= t <= 2 * spec.T):
        raise DomainError(f"t = {t} is outside [T, 2T]")
    K = schedule.K
    k = spec.k
    if p_eval is None:
        family = polynomial_family(spec, schedule, settings, primes)

        def p_eval(u: int, v: int, tt: float) -> complex:  # noqa: F811
            return family[(u, v)].evaluate(tt)

    P = {(u, v): complex(p_eval(u, v, t)) for u in range(K + 1) for v in range(u, K + 1)}
    max_P0 = max(abs(P[(0, v)]) for v in range(K + 1))
    threshold = math.inf if k == 0 else schedule.ell[0] / (k * math.e**2)
    excluded = max_P0 > threshold
    if excluded and not force:
        return Decomposition(math.nan, math.nan, True, math.nan, math.nan, max_P0, threshold)

    beta, dl, ell, s = schedule.beta, schedule.delta_j, schedule.ell, schedule.s
    log_S1 = _log_prefactor(spec, beta[K], dl[K], settings, t)
    log_S1 += math.fsum(_log_E_factor(k, P[(h, K)], ell[h]) for h in range(K + 1))

    pieces = []
    for j in range(K):
        base = _log_prefactor(spec, beta[j], dl[j], settings, t)
        base += math.fsum(_log_E_factor(k, P[(h, j)], ell[h]) for h in range(j + 1))
        for v in range(j + 1, K + 1):
            x = k * math.e**2 / ell[j + 1] * abs(P[(j + 1, v)])
            pieces.append(base + (2 * s[j + 1] * math.log(x) if x > 0 else -math.inf))
    log_S2 = _logsumexp(pieces)
    return Decomposition(
        S1=_safe_exp(log_S1),
        S2=_safe_exp(log_S2),
        excluded=excluded,
        log_S1=log_S1,
        log_S2=log_S2,
        max_P0=max_P0,
        threshold=threshold,
    )


def coefficient_table_rows(coeffs: MajorantCoefficients) -> list[Mapping[str, float]]:
    bound = coefficient_bound(coeffs.config)
    return [{"p": int(p), "a": float(a), "b": float(b), "bound": bound} for p, a, b in zip(coeffs.primes, coeffs.a, coeffs.b)]
