"""Compiled inner loops. Every output element depends only on its own input,
so chunking a batch across threads never changes a single bit."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from numba import njit

MAX_CORRECTIONS = 14
N_FLOOR = 20
N_CAP = 50_000_000
_EPS = 2.220446049250313e-16


def _bernoulli_even(count: int) -> list[Fraction]:
    """B_0, B_1, ..., B_{2*count} via the standard recurrence."""
    m_max = 2 * count
    B = [Fraction(0)] * (m_max + 1)
    B[0] = Fraction(1)
    for m in range(1, m_max + 1):
        acc = Fraction(0)
        binom = 1
        for j in range(m):
            acc += binom * B[j]
            binom = binom * (m + 1 - j) // (j + 1)
        B[m] = -acc / (m + 1)
    return B


def _correction_coefficients() -> np.ndarray:
    """c[j] = B_{2j} / (2j)! for j = 0..MAX_CORRECTIONS+1 (c[0] unused)."""
    B = _bernoulli_even(MAX_CORRECTIONS + 1)
    out = np.zeros(MAX_CORRECTIONS + 2)
    for j in range(1, MAX_CORRECTIONS + 2):
        out[j] = float(B[2 * j] / math.factorial(2 * j))
    return out


BERNOULLI_COEF = _correction_coefficients()
BERNOULLI_COEF.setflags(write=False)


@njit(cache=True, nogil=True)
def plan_terms(sigma, t, target, coef):
    """Smallest N (and matching M) whose remainder bound is below ``target``.

    Remainder after M corrections: |s+2M+1|/(sigma+2M+1) * |c_{M+1} (s)_{2M+1}| N^{-sigma-2M-1}.
    """
    best_n = N_CAP + 1
    best_m = MAX_CORRECTIONS
    log_poch = 0.0  # log |s (s+1) ... (s+m-1)|
    log_target = math.log(0.5 * target)  # other half is left for rounding
    for m in range(0, 2 * MAX_CORRECTIONS + 1):
        log_poch += 0.5 * math.log((sigma + m) ** 2 + t * t) if (sigma + m) != 0.0 or t != 0.0 else -1e300
        if m % 2 == 0 and m >= 2:
            M = m // 2
            # log_poch now covers (s)_{2M+1}
            log_c = (
                0.5 * math.log((sigma + 2 * M + 1) ** 2 + t * t)
                - math.log(sigma + 2 * M + 1)
                + math.log(abs(coef[M + 1]))
                + log_poch
            )
            expo = sigma + 2 * M + 1
            need = math.exp((log_c - log_target) / expo)
            if need < N_CAP:
                n = int(math.ceil(need))
                if n < N_FLOOR:
                    n = N_FLOOR
                if n < best_n:
                    best_n = n
                    best_m = M
    return best_n, best_m


@njit(cache=True, nogil=True)
def em_zeta(sigma, t, n_terms, n_corr, coef):
    """Euler-Maclaurin zeta(sigma + i t) with N = n_terms, M = n_corr.

    Returns (re, im, remainder_bound, rounding_estimate).
    """
    N = n_terms
    s_re = sigma
    s_im = t
    acc_re = 0.0
    acc_im = 0.0
    sq_sum = 0.0
    for n in range(1, N):
        ln = math.log(n)
        amp = math.exp(-sigma * ln)
        ph = t * ln
        acc_re += amp * math.cos(ph)
        acc_im -= amp * math.sin(ph)
        sq_sum += amp * amp
    lnN = math.log(N)
    ampN = math.exp(-sigma * lnN)
    phN = t * lnN
    # N^{-s}
    w_re = ampN * math.cos(phN)
    w_im = -ampN * math.sin(phN)
    # N^{1-s}/(s-1)
    num_re = N * w_re
    num_im = N * w_im
    d_re = s_re - 1.0
    d_im = s_im
    den = d_re * d_re + d_im * d_im
    acc_re += (num_re * d_re + num_im * d_im) / den
    acc_im += (num_im * d_re - num_re * d_im) / den
    # N^{-s}/2
    acc_re += 0.5 * w_re
    acc_im += 0.5 * w_im
    # corrections: c_j (s)_{2j-1} N^{-s-2j+1}
    # p = (s)_{2j-1} * N^{-s-2j+1}, start j=1: s * N^{-s-1}
    p_re = (s_re * w_re - s_im * w_im) / N
    p_im = (s_re * w_im + s_im * w_re) / N
    for j in range(1, n_corr + 1):
        acc_re += coef[j] * p_re
        acc_im += coef[j] * p_im
        # multiply by (s+2j-1)(s+2j) / N^2
        a_re = s_re + 2 * j - 1
        b_re = s_re + 2 * j
        f_re = a_re * b_re - s_im * s_im
        f_im = s_im * (a_re + b_re)
        q_re = (p_re * f_re - p_im * f_im) / (N * N)
        q_im = (p_re * f_im + p_im * f_re) / (N * N)
        p_re = q_re
        p_im = q_im
    # p now holds (s)_{2M+1} N^{-s-2M-1}
    M = n_corr
    rem = (
        math.sqrt((sigma + 2 * M + 1) ** 2 + t * t)
        / (sigma + 2 * M + 1)
        * abs(coef[M + 1])
        * math.sqrt(p_re * p_re + p_im * p_im)
    )
    # root-sum-square model of independent rounding in the head sum
    rounding = _EPS * ((abs(t) * lnN + 4.0) * math.sqrt(sq_sum) + ampN * N / math.sqrt(den))
    return acc_re, acc_im, rem, rounding


@njit(cache=True, nogil=True)
def zeta_batch(sigma, ts, target, coef, out_re, out_im, out_err, out_n):
    for i in range(ts.size):
        n, m = plan_terms(sigma, ts[i], target, coef)
        if n > N_CAP:
            n = N_CAP
        re, im, rem, rnd = em_zeta(sigma, ts[i], n, m, coef)
        out_re[i] = re
        out_im[i] = im
        out_err[i] = rem + rnd
        out_n[i] = n


@njit(cache=True, nogil=True)
def dirichlet_batch(c_re, c_im, lam, ts, out_re, out_im):
    """sum_n c_n exp(-i t lam_n) for each t."""
    for i in range(ts.size):
        t = ts[i]
        acc_re = 0.0
        acc_im = 0.0
        for n in range(lam.size):
            ph = t * lam[n]
            cs = math.cos(ph)
            sn = math.sin(ph)
            acc_re += c_re[n] * cs + c_im[n] * sn
            acc_im += c_im[n] * cs - c_re[n] * sn
        out_re[i] = acc_re
        out_im[i] = acc_im
