"""Property suite behind ``negmom verify``.

Asserted checks decide the exit code; diagnostic checks are only reported.
"""

from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import arith
from .settings import DEFAULT_SETTINGS, Settings


@dataclass(frozen=True)
class CheckResult:
    name: str
    asserted: bool
    passed: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class Check:
    name: str
    asserted: bool
    run: Callable[[Settings, bool], tuple[bool, str]]


def _zeta_values(settings: Settings, full: bool) -> tuple[bool, str]:
    from .oracles import zero_ordinate
    from .zeta import zeta

    e2 = abs(zeta(2, 1e-13).value - math.pi**2 / 6)
    e0 = abs(zeta(0).value + 0.5)
    g1 = zero_ordinate(1)
    z1 = abs(zeta(complex(0.5, g1)).value)
    ok = e2 < 1e-12 and e0 < 1e-10 and z1 < 1e-5
    return ok, f"|z(2)-pi^2/6|={e2:.2e} |z(0)+1/2|={e0:.2e} |z(1/2+i g1)|={z1:.2e}"


def _zeta_oracle(settings: Settings, full: bool) -> tuple[bool, str]:
    from .oracles import zeta_mp
    from .zeta import zeta

    rng = random.Random(1)
    worst = 0.0
    for _ in range(200 if full else 40):
        s = complex(rng.uniform(1.5, 3), rng.uniform(-100, 100))
        worst = max(worst, abs(zeta(s).value - zeta_mp(s)))
    return worst < 1e-9, f"max deviation {worst:.2e}"


def _constant_routes(settings: Settings, full: bool) -> tuple[bool, str]:
    from .moments import asymptotic_constant, asymptotic_constant_diagonal
    from .oracles import zeta_ratio_mp

    worst = 0.0
    for k in (0.25, 0.5, 1.0, 1.5):
        for a in (0.3, 0.5, 1.0):
            worst = max(worst, abs(asymptotic_constant(k, a) - asymptotic_constant_diagonal(k, a)))
    k1 = max(abs(asymptotic_constant(1.0, a) - zeta_ratio_mp(1 + 2 * a)) for a in (0.3, 0.5, 1.0))
    return worst < 1e-8 and k1 < 1e-10, f"route gap {worst:.2e}, k=1 identity gap {k1:.2e}"


def _exp_domination(settings: Settings, full: bool) -> tuple[bool, str]:
    rng = random.Random(5)
    bad = 0
    n = 10**4
    for _ in range(n):
        ell = 2 * rng.randint(1, 10)
        z = cmath.rect(rng.uniform(0, ell / math.e**2), rng.uniform(-math.pi, math.pi))
        bad += not arith.exp_domination_holds(z, ell)
    return bad == 0, f"{bad} violations in {n} draws"


def _power_identity(settings: Settings, full: bool) -> tuple[bool, str]:
    rng = random.Random(9)
    pool = [2, 3, 5, 7, 11, 13]
    bad = 0
    for _ in range(100):
        ps = rng.sample(pool, rng.randint(1, 4))
        a = {p: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for p in ps}
        for s in range(5):
            bad += not arith.power_identity_check(ps, a, s)
    return bad == 0, f"{bad} mismatches"


def _majorant_configs(n: int = 50) -> list[tuple[float, float]]:
    rng = random.Random(2024)
    return [(rng.uniform(0.01, 1.0), rng.uniform(0.25, 1.5)) for _ in range(n)]


def _majorant_nonneg(settings: Settings, full: bool) -> tuple[bool, str]:
    from .explicit import MajorantConfig, build_coefficients

    worst = math.inf
    for a, d in _majorant_configs():
        co = build_coefficients(MajorantConfig(a, d, settings), strict=False)
        worst = min(worst, float(co.a.min()))
    return worst >= 0, f"min a = {worst:.3e}"


def _majorant_breaches(settings: Settings, with_constant: bool) -> int:
    from .explicit import MajorantConfig, build_coefficients, coefficient_bound

    bad_cfg = 0
    for a, d in _majorant_configs():
        cfg = MajorantConfig(a, d, settings)
        co = build_coefficients(cfg, strict=False)
        bound = coefficient_bound(cfg, with_constant)
        bad_cfg += bool((np.abs(co.b) > bound * (1 + 1e-12)).any())
    return bad_cfg


def _majorant_bound(settings: Settings, full: bool) -> tuple[bool, str]:
    bad = _majorant_breaches(settings, True)
    return bad == 0, f"{bad}/50 configurations breach the bound with c_O={settings.c_O:g} restored"


def _majorant_bound_literal(settings: Settings, full: bool) -> tuple[bool, str]:
    bad = _majorant_breaches(settings, False)
    return bad == 0, f"{bad}/50 configurations breach the bound without the O(1) term"


def _series_stability(settings: Settings, full: bool) -> tuple[bool, str]:
    from .explicit import MajorantConfig, a_alpha

    worst = 0.0
    for a, d in _majorant_configs(20):
        cfg = MajorantConfig(a, d, settings)
        tol = 1e-8
        v1 = a_alpha(2, cfg, tol)
        v2 = a_alpha(2, cfg, tol / 2)
        worst = max(worst, abs(v1 - v2) / tol)
    return worst <= 1, f"max change / tol = {worst:.3g}"


def _schedules(settings: Settings, full: bool) -> tuple[bool, str]:
    from .schedule import MomentSpec, build_schedule, validate_schedule

    failed = []
    for T in (1e4, 1e6, 1e8):
        spec = MomentSpec(0.5, 0.3, T, epsilon=0.1)
        sched = build_schedule(spec, "baseline", settings, strict=False)
        names = [n for n, ok, _ in validate_schedule(sched, spec) if not ok]
        if names:
            failed.append(f"T={T:g}: {', '.join(names)}")
    return not failed, "; ".join(failed) or "all rows satisfied"


def _adr(settings: Settings, full: bool) -> tuple[bool, str]:
    from .schedule import Variant, variant_constants

    worst = 0.0
    for v in Variant:
        for k in (0.25, 0.5, 1.0, 2.0):
            a, r, d, target = variant_constants(k, 0.1, v)
            worst = max(worst, abs(a * (2 * d - 1) / r - target))
    return worst <= 1e-12, f"max |a(2d-1)/r - target| = {worst:.2e}"


def _mertens(settings: Settings, full: bool) -> tuple[bool, str]:
    from .mobius import mobius_partial_sums
    from .oracles import mertens_linear_sieve

    limit = 10**6 if full else 10**5
    ref = mertens_linear_sieve(limit)
    series = mobius_partial_sums(1.0, limit)
    bad = [x for x, v in series.checkpoints if v != ref[x]]
    return not bad and ref[10] == -1 and ref[100] == 1, f"{len(bad)} checkpoint mismatches up to {limit}"


def _convolution(settings: Settings, full: bool) -> tuple[bool, str]:
    from .mobius import mu_k_array

    n = 10**4
    worst = 0.0
    for k1, k2 in ((1.0, 1.0), (0.5, 0.5)):
        a = np.concatenate([[0.0], mu_k_array(k1, 1, n + 1)])
        b = np.concatenate([[0.0], mu_k_array(k2, 1, n + 1)])
        target = np.concatenate([[0.0], mu_k_array(k1 + k2, 1, n + 1)])
        conv = np.zeros(n + 1)
        for d in range(1, n + 1):
            conv[d::d] += a[d] * b[1 : n // d + 1]
        worst = max(worst, float(np.abs(conv - target).max()))
    return worst < 1e-10, f"max deviation {worst:.2e}"


def _smoothing(settings: Settings, full: bool) -> tuple[bool, str]:
    from .mobius import smoothing_W

    small = abs(smoothing_W(0.001, 100.0) - 1)
    xs = np.geomspace(10, 1e4, 200 if full else 60)
    sup = max(abs(smoothing_W(float(x), 100.0)) * x for x in xs)
    return small < 1e-2 and sup < 3, f"|W(0.001)-1|={small:.2e}, sup |W(x)| x = {sup:.3f}"


def _mean_value(settings: Settings, full: bool) -> tuple[bool, str]:
    from .dirichlet import mean_value_main_term, mean_value_numeric

    T = 1e4
    num = mean_value_numeric({1: 1.0, 2: 1.0}, 2, T)
    l2 = math.log(2)
    exact = 1.5 * T + 2 / math.sqrt(2) * (math.sin(2 * T * l2) - math.sin(T * l2)) / l2
    rel = abs(num - exact) / exact
    mu = {n: float(arith.mobius_classical(n)) for n in range(1, 11) if arith.mobius_classical(n)}
    ratio = mean_value_numeric(mu, 10, 1e5) / (1e5 * mean_value_main_term(mu, 10))
    return rel < 1e-6 and abs(ratio - 1) < 0.01, f"closed-form rel err {rel:.2e}, mobius ratio {ratio:.5f}"


def _gonek_rmt(settings: Settings, full: bool) -> tuple[bool, str]:
    from .moments import gonek_prediction, rmt_prediction
    from .schedule import MomentSpec

    worst = 0.0
    for T in (1e3, 1e6, 1e9):
        L = math.log(T)
        for f in (0.01, 0.1, 0.5, 1.0):
            spec = MomentSpec(0.5, f / L, T)
            worst = max(worst, abs(gonek_prediction(spec) - rmt_prediction(spec)))
    return worst == 0.0, f"max gap {worst:.2e}"


def _envelope(settings: Settings, full: bool) -> tuple[bool, str]:
    from .mobius import EnvelopeSource, envelope, mobius_partial_sums

    x_max = 10**7 if full else 10**6
    parts = []
    ok_all = True
    for k in (0.5, 1.0):
        pts = [(x, v) for x, v in mobius_partial_sums(k, x_max).checkpoints if x >= 16]
        good = sum(abs(v) <= envelope(k, x, EnvelopeSource.RH, settings) for x, v in pts)
        frac = good / len(pts)
        ok_all &= frac >= 0.99
        parts.append(f"k={k:g}: {good}/{len(pts)}")
    return ok_all, "; ".join(parts)


def _log_zeta_audit(settings: Settings, full: bool) -> tuple[bool, str]:
    from .explicit import audit_log_zeta_bound

    rep = audit_log_zeta_bound(0.3, 1000.0, 1000 if full else 200, settings=settings)
    return rep.fraction >= 0.95, f"holds at {rep.holds}/{rep.samples}, worst margin {rep.worst_margin:.3g}"


CHECKS: tuple[Check, ...] = (
    Check("zeta special values and first zero", True, _zeta_values),
    Check("zeta vs high-precision oracle", True, _zeta_oracle),
    Check("limiting constant: product vs diagonal sum", True, _constant_routes),
    Check("truncated exponential domination", True, _exp_domination),
    Check("power identity", True, _power_identity),
    Check("majorant weights non-negative", True, _majorant_nonneg),
    Check("majorant coefficient bound, O(1) restored", True, _majorant_bound),
    Check("majorant coefficient bound, O(1) dropped", False, _majorant_bound_literal),
    Check("majorant series stable under tol halving", True, _series_stability),
    Check("a(2d-1)/r equals target", True, _adr),
    Check("Mertens function vs independent sieve", True, _mertens),
    Check("mu_k convolution identity", True, _convolution),
    Check("smoothing kernel limits", True, _smoothing),
    Check("mean value of Dirichlet polynomials", True, _mean_value),
    Check("conjecture predictors agree at k=1/2", True, _gonek_rmt),
    Check("M_k below RH envelope (99% of checkpoints)", False, _envelope),
    Check("log|zeta| lower-bound audit (95% of samples)", False, _log_zeta_audit),
    Check("schedule ladders feasible at T = 1e4, 1e6, 1e8", False, _schedules),
)


def run_suite(settings: Settings = DEFAULT_SETTINGS, full: bool = False, only: str | None = None) -> list[CheckResult]:
    out = []
    for check in CHECKS:
        if only and only not in check.name:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = check.run(settings, full)
        except Exception as exc:  # a crash counts as a failure of that check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        out.append(CheckResult(check.name, check.asserted, bool(ok), detail, time.perf_counter() - t0))
    return out
