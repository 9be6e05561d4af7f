"""Partial sums of mu_k, their envelopes, and the smoothing kernel W."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .arith import SEGMENT_BLOCK, mu_k_prime_power, sieve
from .errors import BudgetError, DomainError
from .quadrature import composite_gl
from .settings import DEFAULT_SETTINGS, Settings

X_MAX = 10**8
# bytes per integer in a segment: value, remainder, exponent scratch
_BYTES_PER_N = 8 * 4


def _prime_power_table(k: float, emax: int) -> np.ndarray:
    return np.array([mu_k_prime_power(k, e) for e in range(emax + 1)])


def mu_k_array(k: float, lo: int, hi: int, small_primes: np.ndarray | None = None) -> np.ndarray:
    """mu_k(n) for lo <= n < hi, by dividing out every prime up to sqrt(hi)."""
    if lo < 1 or hi <= lo:
        raise DomainError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    root = math.isqrt(hi - 1)
    if small_primes is None:
        small_primes = sieve(max(root, 2)).primes
    emax = max(1, int(math.log2(hi)) + 1)
    table = _prime_power_table(k, emax)
    n = np.arange(lo, hi, dtype=np.int64)
    rem = n.copy()
    vals = np.ones(hi - lo, dtype=np.float64)
    for p in small_primes:
        p = int(p)
        if p > root:
            break
        start = (-lo) % p
        sub = rem[start::p]
        if sub.size == 0:
            continue
        e = np.zeros(sub.size, dtype=np.int64)
        div = sub % p == 0
        while div.any():
            e += div
            sub = np.where(div, sub // p, sub)
            div = sub % p == 0
        rem[start::p] = sub
        vals[start::p] *= table[e]
    vals[rem > 1] *= table[1]
    return vals


def _ceil_root(j: int, m: int = 8) -> int:
    """Smallest integer x with x^m >= 10^j."""
    target = 10**j
    x = int(round(10 ** (j / m)))
    while x**m < target:
        x += 1
    while x > 1 and (x - 1) ** m >= target:
        x -= 1
    return x


def checkpoints(x_max: int) -> list[int]:
    pts = []
    j = 0
    while True:
        x = _ceil_root(j)
        if x > x_max:
            break
        if not pts or x != pts[-1]:
            pts.append(x)
        j += 1
    if pts[-1] != x_max:
        pts.append(x_max)
    return pts


@dataclass(frozen=True)
class MobiusSumSeries:
    k: float
    checkpoints: tuple[tuple[int, float], ...]

    def at(self, x: int) -> float:
        for cx, v in self.checkpoints:
            if cx == x:
                return v
        raise KeyError(x)


def mobius_partial_sums(
    k: float,
    x_max: int,
    memory_budget: int = 1 << 30,
    extra_points: tuple[int, ...] = (),
) -> MobiusSumSeries:
    """M_k(x) = sum_{n <= x} mu_k(n) at checkpoints ceil(10^{j/8}) up to x_max, streamed by segment."""
    if not 1 <= x_max <= X_MAX:
        raise DomainError(f"x_max must lie in [1, {X_MAX}]")
    if SEGMENT_BLOCK * _BYTES_PER_N > memory_budget:
        raise BudgetError(f"a segment needs {SEGMENT_BLOCK * _BYTES_PER_N} bytes, budget is {memory_budget}")
    pts = sorted(set(checkpoints(x_max)) | {int(x) for x in extra_points if 1 <= x <= x_max})
    small = sieve(max(2, math.isqrt(x_max))).primes
    out = []
    running = 0.0
    i = 0
    lo = 1
    while lo <= x_max and i < len(pts):
        hi = min(lo + SEGMENT_BLOCK, x_max + 1)
        cum = np.cumsum(mu_k_array(k, lo, hi, small)) + running
        while i < len(pts) and pts[i] < hi:
            out.append((pts[i], float(cum[pts[i] - lo])))
            i += 1
        running = float(cum[-1])
        lo = hi
    return MobiusSumSeries(k=k, checkpoints=tuple(out))


class EnvelopeSource(enum.Enum):
    RH = "rh"
    GONEK = "gonek"
    RH_CLASSICAL = "rh-classical"
    LOG_POWER = "log-power"


def envelope(k: float, x: float, source: EnvelopeSource | str, settings: Settings = DEFAULT_SETTINGS, eps: float | None = None) -> float:
    """Growth envelope for |M_k(x)| from the chosen source (constant 1)."""
    if x < 16:
        raise DomainError("envelopes need x >= 16")
    source = EnvelopeSource(source)
    eps = settings.envelope_eps if eps is None else eps
    L = math.log(x)
    LL = math.log(L)
    if source is EnvelopeSource.RH:
        if k < 1:
            expo = eps * math.sqrt(L)
        else:
            expo = L ** (k / (k + 1)) * LL ** (7 / (k + 1) + eps)
    elif source is EnvelopeSource.GONEK:
        if k <= 2:
            return math.sqrt(x) * L ** (k * k / 4)
        expo = L ** ((k - 2) / k) * LL ** (-1 + eps)
    elif source is EnvelopeSource.RH_CLASSICAL:
        expo = math.sqrt(L) * LL**14
    else:
        return math.sqrt(x) * L**1.5
    return math.exp(0.5 * L + expo) if 0.5 * L + expo < 709 else math.inf


def smoothing_W(x: float, T: float = 100.0, order: int = 16, panels: int | None = None) -> complex:
    """(1/2 pi i) * integral of e^{z^2/2} x^{-z} dz/z along Re z = 1, |Im z| <= min(T/2, 14).

    Beyond |Im z| = 14 the Gaussian factor is below e^{-97}.
    """
    if not x > 0:
        raise DomainError("x must be positive")
    if T < 10:
        raise DomainError("T must be >= 10")
    Y = min(T / 2, 14.0)
    lx = math.log(x)
    if panels is None:
        panels = max(32, int(math.ceil(2 * Y * (1 + abs(lx)) / 2)))

    def f(y: np.ndarray) -> np.ndarray:
        z = 1 + 1j * y
        return np.exp(z * z / 2 - z * lx) / z / (2 * math.pi)

    return complex(composite_gl(f, -Y, Y, panels, order))


def contour_log_cutoffs(k: float, x: float, settings: Settings = DEFAULT_SETTINGS) -> tuple[float, float]:
    """(log x0, log x1)."""
    if not x > math.e:
        raise DomainError("contour cutoffs need x > e")
    L = math.log(x)
    LL = math.log(L)
    log_x0 = L ** (k / (k + 1)) * LL ** ((k + 8) / (k + 1))
    log_x1 = math.sqrt(settings.envelope_eps * L) * LL
    return log_x0, log_x1


def contour_cutoffs(k: float, x: float, settings: Settings = DEFAULT_SETTINGS) -> tuple[float, float]:
    l0, l1 = contour_log_cutoffs(k, x, settings)
    return (math.exp(l0) if l0 < 709 else math.inf, math.exp(l1) if l1 < 709 else math.inf)
