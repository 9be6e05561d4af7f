"""Prime-supported Dirichlet polynomials, mean values, and the moment right-hand sides."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels as K
from ._parallel import run_chunked
from .arith import PrimeTable, sieve
from .errors import ConstraintError, DomainError
from .explicit import MajorantConfig, a_alpha_array, b_of_delta, gamma_of
from .quadrature import panel_nodes
from .schedule import MomentSpec, ParameterSchedule
from .settings import DEFAULT_SETTINGS, Settings

MEAN_VALUE_MAX_N = 10**4


class ResolutionWarning(UserWarning):
    """Too few quadrature panels for the fastest oscillation."""


@dataclass(frozen=True)
class PrimeInterval:
    u: int
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"empty interval ({self.lo}, {self.hi}]")


def intervals_for(schedule: ParameterSchedule, log_T: float) -> list[PrimeInterval]:
    """(1, T^{beta_0}], (T^{beta_0}, T^{beta_1}], ..."""
    out = []
    lo = 1.0
    for u, b in enumerate(schedule.beta):
        hi = math.exp(b * log_T)
        out.append(PrimeInterval(u, lo, hi))
        lo = hi
    return out


def _series_to_arrays(coeffs: Iterable[tuple[int, complex]]) -> tuple[np.ndarray, np.ndarray]:
    ns, cs = [], []
    for n, c in coeffs:
        ns.append(int(n))
        cs.append(complex(c))
    return np.asarray(ns, dtype=np.int64), np.asarray(cs, dtype=np.complex128)


@dataclass(frozen=True)
class DirichletSeries:
    """sum_n c_n n^{-it} with precomputed log n."""

    ns: np.ndarray
    coeffs: np.ndarray
    log_n: np.ndarray

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, complex]]) -> "DirichletSeries":
        ns, cs = _series_to_arrays(pairs)
        return cls(ns, cs, np.log(ns.astype(np.float64)))

    def evaluate_many(self, ts: np.ndarray, threads: int | None = None) -> np.ndarray:
        ts = np.ascontiguousarray(ts, dtype=np.float64)
        re = np.empty_like(ts)
        im = np.empty_like(ts)
        cr = np.ascontiguousarray(self.coeffs.real)
        ci = np.ascontiguousarray(self.coeffs.imag)

        def work(lo: int, hi: int) -> None:
            K.dirichlet_batch(cr, ci, self.log_n, ts[lo:hi], re[lo:hi], im[lo:hi])

        run_chunked(work, ts.size, threads, chunk=4096)
        return re + 1j * im

    def evaluate(self, t: float) -> complex:
        return complex(self.evaluate_many(np.array([float(t)]), threads=1)[0])


@dataclass(frozen=True)
class DirichletPolynomial:
    interval: PrimeInterval
    coeff_config: MajorantConfig
    primes: np.ndarray
    terms: np.ndarray  # b(p; Delta_v) / p^{1/2+alpha}
    series: DirichletSeries

    def __len__(self) -> int:
        return int(self.primes.size)

    def evaluate(self, t: float) -> complex:
        return eval_P(self, t)


def build_polynomial(
    interval: PrimeInterval,
    config: MajorantConfig,
    primes: PrimeTable | None = None,
    tol: float = 1e-12,
) -> DirichletPolynomial:
    """P(t) = sum over primes in the interval of b(p; Delta)/p^{1/2+alpha+it}.

    b is only defined for log p < 2 pi Delta; primes beyond that get weight 0.
    """
    need = int(math.floor(interval.hi))
    if primes is None or primes.limit < need:
        primes = sieve(max(2, need))
    ps = primes.between(interval.lo, interval.hi)
    lp = np.log(ps.astype(np.float64))
    inside = lp < config.log_cutoff
    b = np.zeros(ps.size)
    if inside.any():
        b[inside] = -a_alpha_array(ps[inside], config, tol) * lp[inside]
    terms = b * np.exp(-(0.5 + config.alpha) * lp)
    series = DirichletSeries(ps, terms.astype(np.complex128), lp)
    return DirichletPolynomial(interval, config, ps, terms, series)


def polynomial_family(
    spec: MomentSpec,
    schedule: ParameterSchedule,
    settings: Settings = DEFAULT_SETTINGS,
    primes: PrimeTable | None = None,
) -> dict[tuple[int, int], DirichletPolynomial]:
    """P_{u,v} for 0 <= u <= v <= K."""
    ivs = intervals_for(schedule, spec.log_T)
    top = int(math.floor(ivs[-1].hi))
    if primes is None or primes.limit < top:
        primes = sieve(max(2, top))
    cfgs = [MajorantConfig(spec.alpha, d, settings) for d in schedule.delta_j]
    return {(u, v): build_polynomial(ivs[u], cfgs[v], primes) for u in range(schedule.K + 1) for v in range(u, schedule.K + 1)}


def eval_P(poly: DirichletPolynomial, t: float) -> complex:
    return poly.series.evaluate(t)


def eval_P_many(poly: DirichletPolynomial, ts: np.ndarray, threads: int | None = None) -> np.ndarray:
    return poly.series.evaluate_many(ts, threads)


# ---------------------------------------------------------------- mean values


def mean_value_main_term(coeffs: Iterable[tuple[int, complex]] | Mapping[int, complex], N: int) -> float:
    """sum_{n <= N} |a(n)|^2 / n."""
    pairs = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    vals = []
    for n, a in pairs:
        if n < 1 or n > N:
            raise DomainError(f"coefficient index {n} outside [1, {N}]")
        vals.append(abs(complex(a)) ** 2 / n)
    return math.fsum(vals)


def default_panels(N: int, T: float) -> int:
    width = min(0.25, 1.0 / (4.0 * math.log(N))) if N > 1 else 0.25
    return int(math.ceil(T / width))


def integrate_abs_square(
    series: DirichletSeries,
    T: float,
    panels: int,
    order: int = 8,
    threads: int | None = None,
) -> float:
    """Integral over [T, 2T] of |sum c_n n^{-it}|^2 by composite Gauss-Legendre."""
    edges = np.linspace(T, 2 * T, panels + 1)
    nodes, weights = panel_nodes(edges, order)
    vals = series.evaluate_many(nodes, threads)
    per_panel = (np.abs(vals) ** 2 * weights).reshape(panels, order).sum(axis=1)
    return math.fsum(per_panel)


def mean_value_numeric(
    coeffs: Iterable[tuple[int, complex]] | Mapping[int, complex],
    N: int,
    T: float,
    panels: int | None = None,
    threads: int | None = None,
) -> float:
    """Integral over [T, 2T] of |sum_{n <= N} a(n) n^{-1/2-it}|^2."""
    if N > MEAN_VALUE_MAX_N:
        raise DomainError(f"N must be <= {MEAN_VALUE_MAX_N}")
    if T < 10 * N:
        raise DomainError(f"T must be >= 10 N (T={T}, N={N})")
    pairs = list(coeffs.items() if isinstance(coeffs, Mapping) else coeffs)
    if any(n < 1 or n > N for n, _ in pairs):
        raise DomainError("coefficient indices must lie in [1, N]")
    if panels is None:
        panels = default_panels(N, T)
    if panels < 4 * N:
        warnings.warn(f"{panels} panels < 4N = {4 * N}; oscillations are under-sampled", ResolutionWarning, stacklevel=2)
    series = DirichletSeries.from_pairs((n, complex(a) / math.sqrt(n)) for n, a in pairs)
    return integrate_abs_square(series, T, panels, threads=threads)


# ---------------------------------------------------------------- right-hand sides


def _factor_log(alpha: float, delta: float, settings: Settings) -> tuple[float, int, float]:
    """(log b(Delta), gamma, log log 1/(Delta alpha)) for one ladder step."""
    cfg = MajorantConfig(alpha, delta, settings)
    g = gamma_of(cfg)
    inner = math.log(1 / (delta * alpha))
    if g and inner <= 0:
        raise DomainError(f"log(1/(Delta alpha)) = {inner:.3g} is not positive in the small regime")
    return math.log(b_of_delta(cfg)), g, (math.log(inner) if g else 0.0)


def _check(ok: bool, name: str, slack: float, enforce: bool) -> None:
    if enforce and not ok:
        raise ConstraintError(f"precondition {name} fails (slack {slack:.6g})", name)


def first_factor_log_rhs(
    spec: MomentSpec, schedule: ParameterSchedule, v: int = 0, settings: Settings = DEFAULT_SETTINGS, enforce: bool = True
) -> float:
    """log of s0! b(D0)^{2 s0} (log 1/(D0 alpha))^{2 s0 gamma} (log log T^{beta0})^{s0}."""
    if not 0 <= v <= schedule.K:
        raise DomainError(f"v must lie in [0, {schedule.K}]")
    s0, b0 = schedule.s[0], schedule.beta[0]
    slack = 1 - b0 * s0
    _check(slack >= 0, "beta0*s0<=1", slack, enforce)
    lb, g, llg = _factor_log(spec.alpha, schedule.delta_j[0], settings)
    return math.lgamma(s0 + 1) + 2 * s0 * lb + 2 * s0 * g * llg + s0 * math.log(math.log(b0 * spec.log_T))


def first_factor_rhs(spec, schedule, v=0, settings=DEFAULT_SETTINGS, enforce=True) -> float:
    return _exp(first_factor_log_rhs(spec, schedule, v, settings, enforce))


def _growth_log(spec: MomentSpec, schedule: ParameterSchedule, j: int, settings: Settings) -> float:
    """log of (log T^{beta_j})^{k^2 b(D_j)^2 (log 1/(D_j alpha))^{2 gamma}}."""
    lb, g, llg = _factor_log(spec.alpha, schedule.delta_j[j], settings)
    expo = spec.k**2 * math.exp(2 * lb + 2 * g * llg)
    return expo * math.log(schedule.beta[j] * spec.log_T)


def cross_level_log_rhs(
    spec: MomentSpec,
    schedule: ParameterSchedule,
    j: int,
    v: int,
    settings: Settings = DEFAULT_SETTINGS,
    enforce: bool = True,
) -> float:
    K_ = schedule.K
    if not (0 <= j <= K_ - 1 and j + 1 <= v <= K_):
        raise DomainError(f"need 0 <= j <= K-1 and j+1 <= v <= K (j={j}, v={v}, K={K_})")
    b, s, ell = schedule.beta, schedule.s, schedule.ell
    slack = 1 - (math.fsum(ell[h] * b[h] for h in range(j + 1)) + s[j + 1] * b[j + 1])
    _check(slack >= 0, f"sum_ell_beta[0..{j}]+s{j + 1}*beta{j + 1}<=1", slack, enforce)
    s1 = s[j + 1]
    lb1, g1, llg1 = _factor_log(spec.alpha, schedule.delta_j[j + 1], settings)
    return (
        math.lgamma(s1 + 1)
        + _growth_log(spec, schedule, j, settings)
        + 2 * s1 * lb1
        + 2 * s1 * g1 * llg1
        + s1 * math.log(math.log(schedule.r))
    )


def cross_level_rhs(spec, schedule, j, v, settings=DEFAULT_SETTINGS, enforce=True) -> float:
    return _exp(cross_level_log_rhs(spec, schedule, j, v, settings, enforce))


def product_moment_log_rhs(
    spec: MomentSpec, schedule: ParameterSchedule, settings: Settings = DEFAULT_SETTINGS, enforce: bool = True
) -> float:
    slack = 1 - math.fsum(l * b for l, b in zip(schedule.ell, schedule.beta))
    _check(slack >= 0, "sum_ell_beta<=1", slack, enforce)
    return _growth_log(spec, schedule, schedule.K, settings)


def product_moment_rhs(spec, schedule, settings=DEFAULT_SETTINGS, enforce=True) -> float:
    return _exp(product_moment_log_rhs(spec, schedule, settings, enforce))


def _exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def moment_lhs(poly: DirichletPolynomial, s: int, T: float, panels: int | None = None, threads: int | None = None) -> float:
    """(1/T) * integral over [T, 2T] of |P(t)|^{2s}, for ratio reports against the right sides."""
    hi = max(float(poly.interval.hi), 2.0)
    if panels is None:
        panels = int(math.ceil(T / min(0.25, 1.0 / (4.0 * s * math.log(hi)))))
    edges = np.linspace(T, 2 * T, panels + 1)
    nodes, weights = panel_nodes(edges, 8)
    vals = np.abs(poly.series.evaluate_many(nodes, threads)) ** (2 * s)
    return math.fsum((vals * weights).reshape(panels, 8).sum(axis=1)) / T


def power_series(poly_terms: Mapping[int, complex], s: int) -> dict[int, complex]:
    """Coefficients of (sum_p c_p p^{-it})^s via the multinomial/nu expansion."""
    from .arith import power_expansion

    return power_expansion(sorted(poly_terms), poly_terms, s)


def pairs_from(ns: Sequence[int], values: Sequence[complex]) -> list[tuple[int, complex]]:
    return list(zip(ns, values))
