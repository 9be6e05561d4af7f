"""Primes, multiplicative functions and the combinatorial identities built on them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError

SEGMENT_BLOCK = 1 << 20
_SIMPLE_SIEVE_MAX = 10**7
SIEVE_MAX = 10**9

# pi(10^j) for j = 1..9
PI_POWERS_OF_TEN = {
    10: 4,
    100: 25,
    1000: 168,
    10**4: 1229,
    10**5: 9592,
    10**6: 78498,
    10**7: 664579,
    10**8: 5761455,
    10**9: 50847534,
}


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return int(self.primes.size)

    def upto(self, x: float) -> np.ndarray:
        """Primes p <= x."""
        return self.primes[: int(np.searchsorted(self.primes, x, side="right"))]

    def between(self, lo: float, hi: float) -> np.ndarray:
        """Primes p with lo < p <= hi."""
        i = int(np.searchsorted(self.primes, lo, side="right"))
        j = int(np.searchsorted(self.primes, hi, side="right"))
        return self.primes[i:j]


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def big_omega(self) -> int:
        return sum(e for _, e in self.factors)

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def _simple_sieve(limit: int) -> np.ndarray:
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    mark[4::2] = False
    for i in range(3, math.isqrt(limit) + 1, 2):
        if mark[i]:
            mark[i * i :: 2 * i] = False
    return np.flatnonzero(mark).astype(np.int64)


def _segmented_sieve(limit: int) -> np.ndarray:
    base = _simple_sieve(math.isqrt(limit))
    chunks = [base]
    lo = int(base[-1]) + 1 if base.size else 2
    while lo <= limit:
        hi = min(lo + SEGMENT_BLOCK - 1, limit)
        mark = np.ones(hi - lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            mark[start - lo :: p] = False
        chunks.append(np.flatnonzero(mark).astype(np.int64) + lo)
        lo = hi + 1
    return np.concatenate(chunks)


def sieve(limit: int) -> PrimeTable:
    """All primes up to ``limit`` (segmented in blocks of 2^20 above 10^7)."""
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    if limit > SIEVE_MAX:
        raise DomainError(f"sieve limit {limit} exceeds {SIEVE_MAX}")
    primes = _simple_sieve(limit) if limit <= _SIMPLE_SIEVE_MAX else _segmented_sieve(limit)
    primes.setflags(write=False)
    return PrimeTable(limit=limit, primes=primes)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3 * 10^24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> Factorization:
    """Trial-division factorization; fine for n <= 10^12."""
    n = int(n)
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    m = n
    factors = []
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            factors.append((p, e))
    p, step = 5, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            factors.append((p, e))
        p += step
        step = 6 - step
    if m > 1:
        factors.append((m, 1))
    return Factorization(n=n, factors=tuple(factors))


def binomial_real(k: float, j: int) -> float:
    """k(k-1)...(k-j+1)/j! by the product formula (no gamma functions)."""
    out = 1.0
    for i in range(j):
        out *= (k - i) / (i + 1)
    return out


def mu_k_prime_power(k: float, j: int) -> float:
    """mu_k(p^j) = (-1)^j binom(k, j)."""
    b = binomial_real(k, j)
    return -b if j % 2 else b


def d_k_prime_power(k: float, j: int) -> float:
    """d_k(p^j) = binom(k + j - 1, j)."""
    return binomial_real(k + j - 1, j)


def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")


def nu(n: int) -> Fraction:
    """Multiplicative weight with nu(p^j) = 1/j!, exact."""
    _check_n(n)
    den = 1
    for _, e in factorize(n).factors:
        den *= math.factorial(e)
    return Fraction(1, den)


def mu_k(n: int, k: float) -> float:
    """Dirichlet coefficient of zeta(s)^(-k)."""
    _check_n(n)
    out = 1.0
    for _, e in factorize(n).factors:
        out *= mu_k_prime_power(k, e)
    return out


def d_k(n: int, k: float) -> float:
    """Dirichlet coefficient of zeta(s)^k."""
    _check_n(n)
    out = 1.0
    for _, e in factorize(n).factors:
        out *= d_k_prime_power(k, e)
    return out


def truncated_exp(z: complex, ell: int) -> complex:
    """sum_{s <= ell} z^s / s!, by Horner's rule."""
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    acc = 1.0 + 0j
    for s in range(ell, 0, -1):
        acc = 1.0 + z * acc / s
    return acc


def exp_domination_holds(z: complex, ell: int, slack: float = 1e-15) -> bool:
    """e^{Re z} <= max{1, |E_ell(z)| (1 + 1/(15 e^ell))} (up to ``slack``).

    Only claimed for even ``ell`` and |z| <= ell/e^2.
    """
    lhs = math.exp(z.real)
    rhs = max(1.0, abs(truncated_exp(z, ell)) * (1.0 + 1.0 / (15.0 * math.exp(ell))))
    return lhs <= rhs + slack


def power_expansion(primes: Sequence[int], a: Mapping[int, complex], s: int) -> dict[int, complex]:
    """Coefficients s! a(n) nu(n) over n with Omega(n) = s supported on ``primes``.

    ``a`` is extended completely multiplicatively.
    """
    out: dict[int, complex] = {}
    s_fact = math.factorial(s)
    for combo in itertools.combinations_with_replacement(sorted(primes), s):
        n = 1
        coeff = complex(s_fact)
        for p, grp in itertools.groupby(combo):
            e = len(list(grp))
            n *= p**e
            coeff *= a[p] ** e / math.factorial(e)
        out[n] = out.get(n, 0) + coeff
    return out


def power_identity_check(primes: Sequence[int], a: Mapping[int, complex], s: int, rtol: float = 1e-12) -> bool:
    """(sum_p a(p))^s == s! sum_{Omega(n)=s} a(n) nu(n), brute force."""
    if s > 6 or len(primes) > 6:
        raise DomainError("power identity check is limited to s <= 6 and at most 6 primes")
    lhs = sum(complex(a[p]) for p in primes) ** s
    rhs = sum(power_expansion(primes, a, s).values())
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) <= rtol * scale


def mobius_classical(n: int) -> int:
    """Classical Mobius function."""
    f = factorize(n).factors
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1
