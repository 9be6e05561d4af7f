"""Riemann zeta in the half plane Re s >= 0 by Euler-Maclaurin summation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from ._parallel import run_chunked
from .errors import DomainError, NearZeroError, PoleError, PrecisionError

T_MAX = 1e6
DEFAULT_TARGET = 1e-10
NEAR_ZERO_FACTOR = 10.0


@dataclass(frozen=True)
class ZetaEval:
    s: complex
    value: complex
    abs_error_estimate: float
    n_terms: int = 0

    def __abs__(self) -> float:
        return abs(self.value)


def _check_arg(s: complex) -> complex:
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError(f"non-finite argument {s}")
    if s.real < 0:
        raise DomainError(f"Re(s) must be >= 0, got {s.real}")
    if abs(s.imag) > T_MAX:
        raise DomainError(f"|Im(s)| must be <= {T_MAX:g}, got {abs(s.imag)}")
    return s


def _check_target(target: float) -> float:
    if not (target > 0 and math.isfinite(target)):
        raise DomainError(f"target error must be positive and finite, got {target}")
    return float(target)


def planned_terms(s: complex, target_abs_err: float = DEFAULT_TARGET) -> tuple[int, int]:
    """(N, M) the evaluator would use at ``s``."""
    s = _check_arg(s)
    n, m = K.plan_terms(s.real, s.imag, _check_target(target_abs_err), K.BERNOULLI_COEF)
    return min(int(n), K.N_CAP), int(m)


def zeta(s: complex, target_abs_err: float = DEFAULT_TARGET) -> ZetaEval:
    """zeta(s) with a bound on its absolute error.

    Raises PrecisionError (carrying the value) if rounding alone exceeds the target.
    """
    s = _check_arg(s)
    target = _check_target(target_abs_err)
    n, m = K.plan_terms(s.real, s.imag, target, K.BERNOULLI_COEF)
    n = min(int(n), K.N_CAP)
    re, im, rem, rnd = K.em_zeta(s.real, s.imag, n, m, K.BERNOULLI_COEF)
    out = ZetaEval(s=s, value=complex(re, im), abs_error_estimate=float(rem + rnd), n_terms=n)
    if out.abs_error_estimate > target:
        raise PrecisionError(
            f"zeta({s}) error estimate {out.abs_error_estimate:.3e} exceeds target {target:.3e}",
            best_effort=out,
        )
    return out


def zeta_line(
    sigma: float,
    ts: np.ndarray,
    target_abs_err: float = DEFAULT_TARGET,
    threads: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """zeta(sigma + i t) for every t in ``ts``: (values, error estimates).

    No PrecisionError here; callers read the error array.
    """
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    if sigma < 0 or np.any(np.abs(ts) > T_MAX):
        raise DomainError("zeta_line needs sigma >= 0 and |t| <= 1e6")
    if sigma == 1.0 and np.any(ts == 0.0):
        raise PoleError("zeta has a pole at s = 1")
    target = _check_target(target_abs_err)
    re = np.empty_like(ts)
    im = np.empty_like(ts)
    err = np.empty_like(ts)
    nn = np.empty(ts.shape, dtype=np.int64)

    def work(lo: int, hi: int) -> None:
        K.zeta_batch(sigma, ts[lo:hi], target, K.BERNOULLI_COEF, re[lo:hi], im[lo:hi], err[lo:hi], nn[lo:hi])

    run_chunked(work, ts.size, threads)
    return re + 1j * im, err


def log_abs_zeta(s: complex, target_abs_err: float = DEFAULT_TARGET) -> float:
    """log|zeta(s)|; refuses when |zeta(s)| is within 10x its error bound."""
    z = zeta(s, target_abs_err)
    floor = NEAR_ZERO_FACTOR * max(z.abs_error_estimate, target_abs_err)
    if abs(z.value) <= floor:
        raise NearZeroError(f"|zeta({z.s})| = {abs(z.value):.3e} is below {floor:.3e}")
    return math.log(abs(z.value))
