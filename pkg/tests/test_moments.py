import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from negmom.errors import BudgetError, DomainError, UnsupportedRegimeError
from negmom.moments import (
    UNSUPPORTED,
    QuadConfig,
    asymptotic_constant,
    asymptotic_constant_detail,
    asymptotic_constant_diagonal,
    diagonal_direct_sum,
    gonek_prediction,
    negative_moment,
    rmt_prediction,
    run_report,
    theorem_bound,
    theorem_log_bound,
)
from negmom.oracles import zeta_ratio_mp
from negmom.schedule import MomentSpec, RegimeCase

GRID = [(k, a) for k in (0.25, 0.5, 1.0, 1.5) for a in (0.3, 0.5, 1.0)]


def test_trivial_moment():
    r = negative_moment(MomentSpec(0.0, 0.3, 1e3))
    assert r.value == 1.0 and r.error_estimate == 0.0


def test_absolutely_convergent_mean_value():
    # for alpha = 2 the mean of |zeta|^{-2} is the Dirichlet series sum mu(n)^2 n^{-5}
    mpmath.mp.dps = 30
    target = float(mpmath.zeta(5) / mpmath.zeta(10))
    assert target == pytest.approx(1.03590, abs=1e-5)
    r = negative_moment(MomentSpec(1.0, 2.0, 1e3))
    assert r.value == pytest.approx(target, rel=1e-2)
    assert r.min_abs_zeta_seen > 0


def test_moment_is_thread_invariant():
    spec = MomentSpec(1.0, 0.5, 200.0)
    one = negative_moment(spec, QuadConfig(threads=1))
    four = negative_moment(spec, QuadConfig(threads=4))
    assert one == four


def test_halving_panel_width_stays_within_error_estimate():
    spec = MomentSpec(1.0, 0.5, 500.0)
    base = negative_moment(spec)
    fine = negative_moment(spec, QuadConfig(panel_width=0.25))
    assert abs(base.value - fine.value) < 3 * base.error_estimate


def test_moment_decreases_in_alpha():
    vals = [negative_moment(MomentSpec(1.0, a, 1e3)).value for a in (0.3, 0.5, 0.8, 1.2)]
    assert all(x >= y for x, y in zip(vals, vals[1:]))


def test_moment_budget_guards():
    with pytest.raises(DomainError):
        negative_moment(MomentSpec(1.0, 0.01, 1e3))
    tight = QuadConfig(max_depth=0, allow_outside_budget=True, rel_tol=1e-14)
    with pytest.raises(BudgetError) as info:
        negative_moment(MomentSpec(1.0, 0.01, 200.0), tight)
    assert info.value.partial is not None and info.value.partial.value >= 0


def test_constant_limits_and_identity():
    assert asymptotic_constant(1.3, 40.0) == pytest.approx(1.0, abs=1e-12)
    assert asymptotic_constant(0.0, 0.3) == 1.0
    assert asymptotic_constant(1.0, 0.5) == pytest.approx(15 / math.pi**2, abs=1e-10)
    for a in (0.1, 0.3, 0.5, 1.0, 2.0):
        assert asymptotic_constant(1.0, a) == pytest.approx(zeta_ratio_mp(1 + 2 * a), abs=1e-10)
    with pytest.raises(DomainError):
        asymptotic_constant(1.0, 0.0)


def test_constant_routes_agree():
    worst = max(abs(asymptotic_constant(k, a) - asymptotic_constant_diagonal(k, a)) for k, a in GRID)
    assert worst < 1e-8


def test_constant_against_direct_sum():
    direct = diagonal_direct_sum(0.5, 0.5, 10**6)
    assert abs(direct.value - asymptotic_constant(0.5, 0.5)) < 1e-8
    assert 0 < direct.tail_estimate <= direct.tail_bound


def test_prime_cutoff_grows_until_tail_is_small():
    d = asymptotic_constant_detail(0.5, 0.05)
    assert d.prime_cutoff > 1000 and abs(d.tail_estimate) < 1e-10
    fixed = asymptotic_constant_detail(0.5, 0.5, prime_cutoff=100)
    assert fixed.prime_cutoff == 100


@settings(max_examples=15, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(0.2, 2.0))
def test_constant_exceeds_one_and_decreases_in_alpha(k, a):
    c = asymptotic_constant(k, a)
    assert c >= 1.0
    assert asymptotic_constant(k, a * 1.5) <= c + 1e-12


def test_gonek_branches():
    assert gonek_prediction(MomentSpec(1.0, 0.1, 1e6)) == pytest.approx(10.0, rel=1e-14)
    T = 1e6
    L = math.log(T)
    edge = MomentSpec(0.5, 1 / L, T)
    assert gonek_prediction(edge) == pytest.approx(L**0.25, rel=1e-12)
    just_below = MomentSpec(0.5, (1 - 1e-12) / L, T)
    assert gonek_prediction(just_below) == pytest.approx(L**0.25, rel=1e-9)
    assert gonek_prediction(MomentSpec(0.25, 0.01, T)) == pytest.approx(1.178, abs=1e-3)
    with pytest.raises(UnsupportedRegimeError):
        gonek_prediction(MomentSpec(1.0, 0.01, T))
    with pytest.raises(UnsupportedRegimeError):
        gonek_prediction(MomentSpec(1.0, 1.5, T))


def test_rmt_branches():
    T = 1e6
    L = math.log(T)
    spec = MomentSpec(1.0, 0.01, T)
    assert rmt_prediction(spec) == pytest.approx(L * (0.01 * L) ** -1, rel=1e-12)
    spec2 = MomentSpec(2.0, 0.01, T)
    assert rmt_prediction(spec2) == pytest.approx(L**4 * (0.01 * L) ** -4, rel=1e-12)
    half = MomentSpec(0.5, 0.01, T)
    assert rmt_prediction(half) == pytest.approx(gonek_prediction(half), rel=1e-12)
    assert rmt_prediction(MomentSpec(0.2, 0.01, T)) == pytest.approx(L**0.04, rel=1e-12)
    with pytest.raises(DomainError):
        rmt_prediction(MomentSpec(1.0, 0.5, T))


def test_theorem_bound_plug_ins():
    T = 1e6
    L = math.log(T)
    wide = MomentSpec(1.0, 0.5, T)
    assert theorem_bound(wide, RegimeCase.K_HIGH_WIDE) == pytest.approx(math.log(L) * L, rel=1e-12)
    assert theorem_bound(wide, RegimeCase.K_HIGH_WIDE) == pytest.approx(2.626 * 13.8155, rel=1e-3)
    u1 = MomentSpec(1.0, 1 / L, T)  # u = 1
    assert u1.u == pytest.approx(1.0)
    assert theorem_log_bound(u1, RegimeCase.K_HIGH_NARROW) == pytest.approx(0.66 * L, rel=1e-12)
    assert theorem_bound(MomentSpec(0.0, 0.3, T), RegimeCase.K_LOW_WIDE) == 1.0


def test_report_trivial_and_markers():
    rep = run_report(MomentSpec(0.0, 0.3, 1e3))
    assert rep.measured.value == 1.0
    assert all(math.isfinite(v) for v in rep.ratios.values())
    sup = run_report(MomentSpec(1.0, 0.001, 1e3), QuadConfig(max_depth=0))
    assert sup.cell("gonek") == UNSUPPORTED
    assert sup.markers["measured"] == "out-of-domain"


@pytest.mark.slow
def test_reference_report_golden(reference_report, golden):
    ref = golden("report_reference.json")
    rep = reference_report
    assert rep.measured.value == pytest.approx(ref["measured"], rel=1e-12)
    assert rep.asymptotic_constant == pytest.approx(ref["asymptotic_constant"], rel=1e-12)
    assert rep.gonek == pytest.approx(ref["gonek"], rel=1e-12)
    assert rep.regime.name == ref["regime"]
    assert rep.markers == ref["markers"]
    for name, ratio in rep.ratios.items():
        assert ratio == pytest.approx(rep.measured.value / getattr(rep, name), rel=1e-12)
    assert 0.98 <= rep.ratios["asymptotic_constant"] <= 1.02
