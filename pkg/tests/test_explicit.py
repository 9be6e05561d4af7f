import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from negmom.arith import sieve
from negmom.errors import ConvergenceError, DomainError, InternalConsistencyError
from negmom.explicit import (
    CCVariant,
    MajorantConfig,
    Regime,
    a_alpha,
    audit_log_zeta_bound,
    b_of_delta,
    build_coefficients,
    cc_lower_bound,
    cc_main_term,
    coefficient_bound,
    gamma_of,
    error_scale,
    excluded_set_decomposition,
    select_cc_variant,
)
from negmom.schedule import MomentSpec, build_schedule
from negmom.settings import DEFAULT_SETTINGS


def a_alpha_direct(n, alpha, delta, terms=10_000):
    """Plain mpmath summation of the defining series, no tail control."""
    mpmath.mp.dps = 30
    ln = mpmath.log(n)
    d2 = 2 * mpmath.pi * delta
    total = mpmath.mpf(0)
    for j in range(terms):
        total += (j + 1) / (ln + d2 * j) * mpmath.e ** (-d2 * j * alpha)
        total -= (j + 1) / (d2 * (j + 2) - ln) * mpmath.power(n, 2 * alpha) * mpmath.e ** (-d2 * (j + 2) * alpha)
    return float(total)


def test_large_shift_limit_is_reciprocal_log():
    for n in (2, 3, 7, 30):
        cfg = MajorantConfig(alpha=20.0, delta=1.0)
        assert a_alpha(n, cfg) == pytest.approx(1 / math.log(n), abs=1e-8)


def test_series_matches_direct_summation():
    cfg = MajorantConfig(alpha=0.1, delta=1.0)
    assert a_alpha(3, cfg, tol=1e-12) == pytest.approx(a_alpha_direct(3, 0.1, 1.0), abs=1e-11)
    assert a_alpha(2, MajorantConfig(0.5, 2.0)) >= 0


def test_a_alpha_domain_and_convergence_errors():
    with pytest.raises(DomainError):
        a_alpha(1000, MajorantConfig(0.3, 1.0))  # log 1000 > 2 pi
    with pytest.raises(DomainError):
        a_alpha(1, MajorantConfig(0.3, 1.0))
    with pytest.raises(ConvergenceError):
        a_alpha(2, MajorantConfig(1e-9, 0.2))


def test_b_of_delta_values():
    large = MajorantConfig(1.0, 1.0)
    assert large.regime is Regime.LARGE and gamma_of(large) == 0
    assert b_of_delta(large) == pytest.approx(1 / (1 - math.exp(-2 * math.pi)), rel=1e-15)
    assert b_of_delta(large) == pytest.approx(1.00187, abs=1e-5)
    small = MajorantConfig(0.1, 1.0)
    assert small.regime is Regime.SMALL and gamma_of(small) == 1
    assert b_of_delta(small) == 0.51
    assert b_of_delta(MajorantConfig(50.0, 1.0)) == pytest.approx(1.0, abs=1e-15)


def test_coefficient_table_keys():
    co = build_coefficients(MajorantConfig(3.0, 0.5))
    assert sorted(co.table) == [2, 3, 5, 7, 11, 13, 17, 19, 23]
    assert all(a >= 0 for a, _ in co.table.values())


def test_strict_build_rejects_small_regime_breach():
    # The single-line bound without its O(1) term does not hold here at desk scale.
    cfg = MajorantConfig(0.3, 1.0)
    with pytest.raises(InternalConsistencyError):
        build_coefficients(cfg)
    co = build_coefficients(cfg, strict=False)
    assert co.violations
    assert np.all(np.abs(co.b) <= coefficient_bound(cfg, with_constant=True))


def test_prime_table_too_short():
    with pytest.raises(DomainError):
        build_coefficients(MajorantConfig(3.0, 1.0), primes=sieve(100))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.02, 1.0), st.floats(0.25, 1.2))
def test_weights_nonnegative(alpha, delta):
    co = build_coefficients(MajorantConfig(alpha, delta), strict=False)
    assert co.a.min() >= -1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(0.3, 1.2), st.sampled_from([1e-6, 1e-8, 1e-10]))
def test_tol_halving_is_stable(alpha, delta, tol):
    cfg = MajorantConfig(alpha, delta)
    assert abs(a_alpha(2, cfg, tol) - a_alpha(2, cfg, tol / 2)) <= tol


def test_cc_variant_selection():
    assert select_cc_variant(complex(0.99, 1e4)) is CCVariant.NEAR_HALF_SHIFT
    assert select_cc_variant(complex(0.51, 1e4)) is CCVariant.TINY_SHIFT
    # near-half takes precedence while (1/2 - alpha) log log t <= 1
    assert select_cc_variant(complex(0.75, 1e6)) is CCVariant.NEAR_HALF_SHIFT
    assert select_cc_variant(complex(0.75, 1e30)) is CCVariant.MID_SHIFT
    with pytest.raises(DomainError):
        select_cc_variant(complex(1.2, 1e4))
    with pytest.raises(DomainError):
        cc_main_term(complex(0.6, 50))


def test_cc_main_terms_by_plug_in():
    L = math.log(1e4)
    LL = math.log(L)
    expect = L / (2 * LL) * math.log(1 - L ** (-0.02))
    assert cc_main_term(complex(0.51, 1e4), CCVariant.TINY_SHIFT) == pytest.approx(expect, rel=1e-12)
    L = math.log(1e6)
    LL = math.log(L)
    coef = 0.5 + 8 * 0.25 / (1 - 0.25)
    assert coef == pytest.approx(3.1667, abs=1e-4)
    expect = -coef * L**0.5 / LL - math.log(LL)
    assert cc_main_term(complex(0.75, 1e6), CCVariant.MID_SHIFT) == pytest.approx(expect, rel=1e-12)
    s = complex(0.75, 1e6)
    assert cc_lower_bound(s) < cc_main_term(s)
    assert cc_lower_bound(s, settings=DEFAULT_SETTINGS.with_(c_O=0.0)) == cc_main_term(s)


def test_log_zeta_audit_reports():
    rep = audit_log_zeta_bound(0.3, 1000.0, samples=100)
    assert rep.samples == 100 and 0 <= rep.holds <= 100
    assert rep.fraction >= 0.95


def _small_shift_reference():
    spec = MomentSpec(0.5, 0.3, 1e3)
    return spec, build_schedule(spec, "small_shift", strict=False)


def test_decomposition_excludes_large_polynomial():
    spec, sched = _small_shift_reference()
    dec = excluded_set_decomposition(1500.0, spec, sched, p_eval=lambda u, v, t: 1e6)
    assert dec.excluded and math.isnan(dec.S1)


def test_decomposition_at_k_zero():
    spec0 = MomentSpec(0.0, 0.3, 1e3)
    _, sched = _small_shift_reference()
    dec = excluded_set_decomposition(1500.0, spec0, sched, p_eval=lambda u, v, t: 0.0)
    assert not dec.excluded
    K = sched.K
    expect = math.prod((1 + 1 / (15 * math.exp(ell))) ** 2 for ell in sched.ell[: K + 1])
    expect *= math.exp(DEFAULT_SETTINGS.c_O * error_scale(sched.delta_j[K], 1500.0))
    assert dec.S1 == pytest.approx(expect, rel=1e-12)


def test_decomposition_golden(golden):
    spec, sched = _small_shift_reference()
    dec = excluded_set_decomposition(1500.0, spec, sched, force=True)
    ref = golden("decomposition.json")
    assert dec.excluded == ref["excluded"]
    assert dec.max_P0 == pytest.approx(ref["max_P0"], rel=1e-10)
    assert dec.log_S1 == pytest.approx(ref["log_S1"], rel=1e-10)
    assert dec.S2 == pytest.approx(ref["S2"], abs=1e-300)
