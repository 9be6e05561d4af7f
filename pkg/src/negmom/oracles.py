"""Independent reference computations used only for cross-checks.

Nothing here shares code with the production paths it is compared against.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np


def zero_ordinate(n: int, dps: int = 30) -> float:
    """Ordinate of the n-th zeta zero, by bisection on a sign change of Z(t).

    Brackets come from a coarse scan of the Hardy Z function (mpmath.siegelz),
    so no tabulated zero is consulted.
    """
    with mpmath.workdps(dps):
        step = mpmath.mpf("0.05")
        t = mpmath.mpf(10)
        prev = mpmath.siegelz(t)
        found = 0
        while True:
            nxt = t + step
            cur = mpmath.siegelz(nxt)
            if prev * cur < 0:
                found += 1
                if found == n:
                    lo, hi = t, nxt
                    flo = prev
                    for _ in range(100):
                        mid = (lo + hi) / 2
                        fm = mpmath.siegelz(mid)
                        if fm * flo <= 0:
                            hi = mid
                        else:
                            lo, flo = mid, fm
                    return float((lo + hi) / 2)
            t, prev = nxt, cur


def zeta_mp(s: complex, dps: int = 30) -> complex:
    with mpmath.workdps(dps):
        return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag)))


def dirichlet_series_zeta(s: complex, terms: int = 10**6) -> tuple[complex, float]:
    """Direct sum over n < terms plus the integral tail; returns (value, tail bound)."""
    n = np.arange(1, terms, dtype=np.float64)
    logn = np.log(n)
    vals = np.exp(-s.real * logn) * np.exp(-1j * s.imag * logn)
    head = complex(math.fsum(vals.real), math.fsum(vals.imag))
    N = float(terms)
    tail = N ** (1 - s) / (s - 1) + 0.5 * N ** (-s)
    # next Euler-Maclaurin term bounds what remains
    bound = abs(s) * N ** (-s.real - 1) / 12 * 2
    return head + tail, bound


def mertens_linear_sieve(limit: int) -> np.ndarray:
    """M(x) for x = 0..limit from a linear (Euler) sieve of the Mobius function."""
    mu = np.zeros(limit + 1, dtype=np.int8)
    mu[1] = 1
    composite = bytearray(limit + 1)
    primes: list[int] = []
    for i in range(2, limit + 1):
        if not composite[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            composite[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    out = np.cumsum(mu, dtype=np.int64)
    out[0] = 0
    return out


def zeta_ratio_mp(sigma: float) -> float:
    """zeta(sigma)/zeta(2 sigma), the mean square of the squarefree indicator series."""
    with mpmath.workdps(30):
        return float(mpmath.zeta(sigma) / mpmath.zeta(2 * sigma))
