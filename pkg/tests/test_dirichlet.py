import dataclasses
import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from negmom.arith import mobius_classical
from negmom.dirichlet import (
    DirichletSeries,
    PrimeInterval,
    ResolutionWarning,
    build_polynomial,
    eval_P,
    eval_P_many,
    mean_value_main_term,
    mean_value_numeric,
    moment_lhs,
    power_series,
    first_factor_log_rhs,
    cross_level_log_rhs,
    product_moment_log_rhs,
    product_moment_rhs,
)
from negmom.errors import ConstraintError, DomainError
from negmom.explicit import MajorantConfig, b_of_delta
from negmom.schedule import MomentSpec, ParameterSchedule, Variant, build_schedule

MU10 = {n: float(mobius_classical(n)) for n in range(1, 11) if mobius_classical(n)}


def _poly(hi=100.0, alpha=0.3, delta=1.2):
    return build_polynomial(PrimeInterval(0, 1.0, hi), MajorantConfig(alpha, delta))


def test_polynomial_at_zero_is_real_sum():
    poly = _poly()
    assert eval_P(poly, 0.0) == pytest.approx(complex(poly.terms.sum()), abs=1e-14)
    assert abs(eval_P(poly, 0.0).imag) < 1e-15


def test_single_prime_half_period():
    poly = build_polynomial(PrimeInterval(0, 1.5, 2.5), MajorantConfig(0.3, 1.0))
    assert list(poly.primes) == [2]
    assert eval_P(poly, math.pi / math.log(2)) == pytest.approx(-poly.terms[0], abs=1e-14)


def test_polynomial_against_high_precision_sum():
    poly = _poly(hi=math.exp(0.5 * math.log(1e3)))  # primes up to T^{1/2} at T = 1e3
    mpmath.mp.dps = 30
    for t in (500.0, 1234.5):
        ref = mpmath.fsum(mpmath.mpf(c) * mpmath.expj(-t * mpmath.log(int(p))) for p, c in zip(poly.primes, poly.terms))
        assert abs(eval_P(poly, t) - complex(ref)) < 1e-13


def test_primes_past_cutoff_get_zero_weight():
    poly = build_polynomial(PrimeInterval(0, 1.0, 2000.0), MajorantConfig(0.3, 1.0))
    outside = np.log(poly.primes.astype(float)) >= 2 * math.pi
    assert outside.any() and np.all(poly.terms[outside] == 0)


def test_batch_matches_pointwise_for_any_thread_count():
    poly = _poly()
    ts = np.linspace(1000, 2000, 5000)
    one = eval_P_many(poly, ts, threads=1)
    assert np.array_equal(one, eval_P_many(poly, ts, threads=4))
    assert one[123] == eval_P(poly, ts[123])


def test_main_term_examples():
    assert mean_value_main_term({1: 1, 2: 1}, 2) == 1.5
    assert mean_value_main_term({n: 0 for n in range(1, 6)}, 5) == 0
    assert mean_value_main_term(MU10, 10) == pytest.approx(1 + 1 / 2 + 1 / 3 + 1 / 5 + 1 / 6 + 1 / 7 + 1 / 10, rel=1e-15)
    with pytest.raises(DomainError):
        mean_value_main_term({11: 1}, 10)


def test_mean_value_constant_series():
    assert mean_value_numeric({1: 1.0}, 1, 1000.0) == pytest.approx(1000.0, rel=1e-14)


def test_mean_value_two_terms_closed_form():
    T = 1e4
    l2 = math.log(2)
    # |1 + 2^{-1/2-it}|^2 = 3/2 + sqrt(2) cos(t log 2)
    exact = 1.5 * T + math.sqrt(2) * (math.sin(2 * T * l2) - math.sin(T * l2)) / l2
    assert mean_value_numeric({1: 1.0, 2: 1.0}, 2, T) == pytest.approx(exact, rel=1e-6)


def test_mean_value_mobius_ratio():
    T = 1e5
    ratio = mean_value_numeric(MU10, 10, T) / (T * mean_value_main_term(MU10, 10))
    assert 0.99 <= ratio <= 1.01


@pytest.mark.slow
def test_mean_value_error_scales_like_N_over_T():
    worst = 0.0
    for N in (10, 30, 100):
        coeffs = {n: float(mobius_classical(n)) for n in range(1, N + 1) if mobius_classical(n)}
        main = mean_value_main_term(coeffs, N)
        for T in (1e4, 1e5):
            dev = abs(mean_value_numeric(coeffs, N, T) / (T * main) - 1)
            worst = max(worst, dev * T / N)
    assert worst < 10


def test_mean_value_guards():
    with pytest.raises(DomainError):
        mean_value_numeric({1: 1.0}, 20_000, 1e6)
    with pytest.raises(DomainError):
        mean_value_numeric({1: 1.0}, 10, 50.0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mean_value_numeric(MU10, 10, 1000.0, panels=20)
    assert any(issubclass(w.category, ResolutionWarning) for w in caught)


@pytest.mark.parametrize("s", [1, 2])
def test_power_moment_matches_expanded_mean_value(s):
    poly = _poly(hi=30.0)  # 10 primes
    T = 1e4
    coeffs = power_series(dict(zip(map(int, poly.primes), map(complex, poly.terms))), s)
    N = max(coeffs)
    # mean_value_numeric weights a(n) by n^{-1/2}; undo that
    scaled = {n: c * math.sqrt(n) for n, c in coeffs.items()}
    via_identity = mean_value_numeric(scaled, N, T) / T
    direct = moment_lhs(poly, s, T)
    assert via_identity == pytest.approx(direct, rel=1e-2)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 50), st.floats(-2, 2)), min_size=1, max_size=8), st.floats(0, 1e4))
def test_series_evaluation_is_linear(pairs, t):
    series = DirichletSeries.from_pairs(pairs)
    doubled = DirichletSeries.from_pairs([(n, 2 * c) for n, c in pairs])
    assert doubled.evaluate(t) == pytest.approx(2 * series.evaluate(t), abs=1e-12)


# ---------------------------------------------------------------- right-hand sides


def _ladder(s0=1, delta=(40.0, 60.0), beta=(0.1, 0.15), s=None, ell=(2, 2)):
    return ParameterSchedule(
        variant=Variant.BASELINE,
        a=0.9,
        r=1.5,
        d=0.95,
        c=1e-300,
        K=len(beta) - 1,
        beta=beta,
        s=s or (s0, 0),
        ell=ell,
        delta_j=delta,
    )


SPEC = MomentSpec(0.5, 0.3, 1e6)


def test_first_factor_single_factor():
    sched = _ladder(s0=1)
    bd = b_of_delta(MajorantConfig(0.3, 40.0))
    expect = 2 * math.log(bd) + math.log(math.log(0.1 * SPEC.log_T))
    assert first_factor_log_rhs(SPEC, sched) == pytest.approx(expect, rel=1e-12)
    assert abs(math.log(bd)) < 1e-20


def test_first_factor_slope_doubles():
    one = first_factor_log_rhs(SPEC, _ladder(s0=1))
    two = first_factor_log_rhs(SPEC, _ladder(s0=2))
    assert two - math.log(2) == pytest.approx(2 * one, rel=1e-12)


def test_first_factor_precondition():
    with pytest.raises(ConstraintError):
        first_factor_log_rhs(SPEC, _ladder(s0=20))
    assert math.isfinite(first_factor_log_rhs(SPEC, _ladder(s0=20), enforce=False))


def test_product_moment_exponent_collapse_and_k_zero():
    sched = _ladder()
    bd = b_of_delta(MajorantConfig(0.3, 60.0))
    expect = SPEC.k**2 * bd**2 * math.log(0.15 * SPEC.log_T)
    assert product_moment_log_rhs(SPEC, sched) == pytest.approx(expect, rel=1e-12)
    assert product_moment_rhs(MomentSpec(0.0, 0.3, 1e6), sched) == 1.0


def test_cross_level_structure():
    sched = _ladder(s=(1, 1))
    got = cross_level_log_rhs(SPEC, sched, 0, 1)
    bd1 = b_of_delta(MajorantConfig(0.3, 60.0))
    bd0 = b_of_delta(MajorantConfig(0.3, 40.0))
    expect = SPEC.k**2 * bd0**2 * math.log(0.1 * SPEC.log_T) + 2 * math.log(bd1) + math.log(math.log(1.5))
    assert got == pytest.approx(expect, rel=1e-12)
    with pytest.raises(DomainError):
        cross_level_log_rhs(SPEC, sched, 1, 1)
    with pytest.raises(ConstraintError):
        cross_level_log_rhs(SPEC, dataclasses.replace(sched, ell=(20, 2)), 0, 1)


def test_reference_schedule_golden(golden):
    ref = golden("rhs_reference.json")
    sched = build_schedule(SPEC, "baseline", strict=False)
    assert first_factor_log_rhs(SPEC, sched, 0, enforce=False) == pytest.approx(ref["first_factor_log"], rel=1e-12, abs=1e-15)
    assert product_moment_log_rhs(SPEC, sched, enforce=False) == pytest.approx(ref["product_moment_log"], rel=1e-12)
