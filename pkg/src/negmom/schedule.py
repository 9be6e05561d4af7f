"""Experiment descriptions and the geometric prime-interval ladders."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

from .errors import ConstraintError, DegenerateScheduleError, DomainError
from .settings import DEFAULT_SETTINGS, Settings

TWO_PI = 2.0 * math.pi
EXACT_TOL = 1e-12


@dataclass(frozen=True)
class MomentSpec:
    """One experiment: |zeta(1/2 + alpha + it)|^{-2k} averaged over [T, 2T].

    ``log_T`` may be given instead of T for heights beyond float range.
    """

    k: float
    alpha: float
    T: float = math.nan
    epsilon: float = 0.1
    delta_param: float = 0.1
    log_T: float = math.nan

    def __post_init__(self) -> None:
        if not (self.k >= 0 and math.isfinite(self.k)):
            raise DomainError(f"k must be >= 0, got {self.k}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if math.isnan(self.log_T):
            if not (self.T >= 100 and math.isfinite(self.T)):
                raise DomainError(f"T must be >= 100, got {self.T}")
            object.__setattr__(self, "log_T", math.log(self.T))
        elif math.isnan(self.T):
            object.__setattr__(self, "T", math.exp(self.log_T) if self.log_T < 709 else math.inf)
        if not self.log_T >= math.log(100) - 1e-12:
            raise DomainError(f"T must be >= 100 (log T = {self.log_T})")
        if not (0 < self.epsilon < 0.5):
            raise DomainError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if not self.delta_param > 0:
            raise DomainError(f"delta_param must be > 0, got {self.delta_param}")

    @property
    def loglog_T(self) -> float:
        return math.log(self.log_T)

    @property
    def u(self) -> float:
        return math.log(1.0 / self.alpha) / self.loglog_T


class Variant(enum.Enum):
    BASELINE = "baseline"
    SMALL_SHIFT = "small_shift"


@dataclass(frozen=True)
class ParameterSchedule:
    variant: Variant
    a: float
    r: float
    d: float
    c: float
    K: int
    beta: tuple[float, ...]
    s: tuple[int, ...]
    ell: tuple[int, ...]
    delta_j: tuple[float, ...]
    # not serialised: context needed by validation
    log_c: float = field(default=math.nan, compare=False)
    cap: float = field(default=math.nan, compare=False)
    c_rhs: float = field(default=math.nan, compare=False)

    JSON_KEYS = ("variant", "a", "r", "d", "c", "K", "beta", "s", "ell", "deltaJ")

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant.value,
            "a": self.a,
            "r": self.r,
            "d": self.d,
            "c": self.c,
            "K": self.K,
            "beta": list(self.beta),
            "s": list(self.s),
            "ell": list(self.ell),
            "deltaJ": list(self.delta_j),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "ParameterSchedule":
        if set(doc) != set(cls.JSON_KEYS):
            raise DomainError(f"schedule keys must be exactly {cls.JSON_KEYS}, got {sorted(doc)}")
        c = float(doc["c"])
        return cls(
            variant=Variant(doc["variant"]),
            a=float(doc["a"]),
            r=float(doc["r"]),
            d=float(doc["d"]),
            c=c,
            K=int(doc["K"]),
            beta=tuple(float(x) for x in doc["beta"]),
            s=tuple(int(x) for x in doc["s"]),
            ell=tuple(int(x) for x in doc["ell"]),
            delta_j=tuple(float(x) for x in doc["deltaJ"]),
            log_c=math.log(c) if c > 0 else -math.inf,
        )

    @classmethod
    def from_json(cls, text: str) -> "ParameterSchedule":
        return cls.from_dict(json.loads(text))


def variant_constants(k: float, eps: float, variant: Variant) -> tuple[float, float, float, float]:
    """(a, r, d, target) with a(2d-1)/r = target."""
    ke = k * eps
    if variant is Variant.BASELINE:
        a = (4 - 3 * ke) / (2 * (2 - ke))
        r = 2 / (2 - ke)
        d = (8 - 7 * ke) / (2 * (4 - 3 * ke))
        return a, r, d, 1 - ke
    a = (1 - 3 * ke) / (1 - 2 * ke)
    r = 1 / (1 - 2 * ke)
    d = (2 - 7 * ke) / (2 * (1 - 3 * ke))
    return a, r, d, 1 - 4 * ke


def _c_coefficient(a: float, r: float, d: float, variant: Variant) -> float:
    e = 1 - d
    if variant is Variant.BASELINE:
        return a**d * r**e / (r**e - 1) + 2 * r / (r - 1)
    return r * a**d / (r**e - 1) + 2 * r / (r - 1)


def largest_c(a: float, r: float, d: float, rhs: float, variant: Variant) -> float:
    """log of the largest c with c^{1-d} * coefficient <= rhs (-inf when rhs <= 0).

    Closed form in log space: c may be far below the smallest float.
    """
    if rhs <= 0:
        return -math.inf
    return (math.log(rhs) - math.log(_c_coefficient(a, r, d, variant))) / (1 - d)


def _initial_beta(spec: MomentSpec, a: float, r: float, d: float, variant: Variant) -> float:
    L, LL = spec.log_T, spec.loglog_T
    k, eps = spec.k, spec.epsilon
    if variant is Variant.BASELINE:
        # log(1/(1 - L^{-2 alpha})), accurate at both ends of 2 alpha LL
        x = 2 * spec.alpha * LL
        lg = -math.log(-math.expm1(-x)) if x < 1 else -math.log1p(-math.exp(-x))
        return a * (2 * d - 1) * LL**2 / ((1 + 2 * eps) * k * L * lg)
    u = spec.u
    num = 2 * k * u + 2 * d - 1 - a * (2 * d - 1) / r
    return num * LL / ((1 + spec.delta_param) * k * u * L)


def _ladder_K(beta0: float, r: float, cap: float) -> int:
    if not beta0 <= cap:
        return 0
    K = int(math.floor(math.log(cap / beta0) / math.log(r)))
    while beta0 * r ** (K + 1) <= cap:
        K += 1
    while K > 0 and beta0 * r**K > cap:
        K -= 1
    return K


def build_schedule(
    spec: MomentSpec,
    variant: Variant | str = Variant.BASELINE,
    settings: Settings = DEFAULT_SETTINGS,
    strict: bool = True,
) -> ParameterSchedule:
    """The ladder beta_j = r^j beta_0, s_j, ell_j, Delta_j for j = 0..K.

    With ``strict`` any failed validation row raises; otherwise the ladder
    is returned as built (K = 0 when nothing fits under the cap).
    """
    variant = Variant(variant)
    if spec.k <= 0:
        raise DomainError("the ladder needs k > 0")
    a, r, d, _ = variant_constants(spec.k, spec.epsilon, variant)
    beta0 = _initial_beta(spec, a, r, d, variant)
    if not (beta0 > 0 and math.isfinite(beta0)):
        raise ConstraintError(f"initial exponent beta_0 = {beta0} is not positive", "beta_0")

    if variant is Variant.BASELINE:
        c_rhs = 1 - a
    else:
        c_rhs = 1 - a - beta0 ** (1 - d)
    log_c = largest_c(a, r, d, c_rhs, variant)
    c = math.exp(log_c) if log_c > -745 else 0.0
    aL = spec.alpha * spec.log_T
    if variant is Variant.BASELINE and aL >= settings.cap_threshold:
        cap = math.log(aL) / aL
    else:
        cap = c

    K = _ladder_K(beta0, r, cap)
    beta = tuple(beta0 * r**j for j in range(K + 1))
    if variant is Variant.BASELINE:
        s = tuple(int(math.floor(a / b)) for b in beta)
    else:
        s = (int(math.floor(1 / beta[0])),) + tuple(int(math.floor(a / b)) for b in beta[1:])
    ell = tuple(2 * math.ceil(max(si, 0) ** d / 2) for si in s)
    delta_j = tuple(b * spec.log_T / TWO_PI for b in beta)
    sched = ParameterSchedule(
        variant=variant,
        a=a,
        r=r,
        d=d,
        c=c,
        K=K,
        beta=beta,
        s=s,
        ell=ell,
        delta_j=delta_j,
        log_c=log_c,
        cap=cap,
        c_rhs=c_rhs,
    )
    if strict:
        if K == 0:
            raise DegenerateScheduleError(
                f"beta_0 = {beta0:.6g} already exceeds the cap {cap:.6g}; no ladder with K >= 1", "beta_K<=cap"
            )
        for name, ok, slack in validate_schedule(sched, spec):
            if not ok:
                raise ConstraintError(f"schedule violates {name} (slack {slack:.6g})", name)
    return sched


def validate_schedule(schedule: ParameterSchedule, spec: MomentSpec | None = None) -> list[tuple[str, bool, float]]:
    """One (name, satisfied, slack) row per constraint; slack >= 0 iff satisfied."""
    rows: list[tuple[str, bool, float]] = []

    def row(name: str, slack: float) -> None:
        rows.append((name, bool(slack >= 0), float(slack)))

    b, s, ell, K = schedule.beta, schedule.s, schedule.ell, schedule.K
    row("K>=1", K - 1)
    row("beta0*s0<=1", 1 - b[0] * s[0])
    partial = 0.0
    for j in range(K):
        partial += ell[j] * b[j]
        row(f"sum_ell_beta[0..{j}]+s{j + 1}*beta{j + 1}<=1", 1 - (partial + s[j + 1] * b[j + 1]))
    row("sum_ell_beta<=1", 1 - math.fsum(ell[h] * b[h] for h in range(K + 1)))

    coef = _c_coefficient(schedule.a, schedule.r, schedule.d, schedule.variant)
    rhs = schedule.c_rhs
    if math.isnan(rhs):
        rhs = 1 - schedule.a
        if schedule.variant is Variant.SMALL_SHIFT:
            rhs -= b[0] ** (1 - schedule.d)
    log_c = schedule.log_c if not math.isnan(schedule.log_c) else (math.log(schedule.c) if schedule.c > 0 else -math.inf)
    lhs = 0.0 if log_c == -math.inf else math.exp((1 - schedule.d) * log_c) * coef
    row("c-condition", rhs - lhs)
    if not math.isnan(schedule.cap):
        row("beta_K<=cap", schedule.cap - b[K])
    ratio_err = max((abs(b[j + 1] / b[j] - schedule.r) / schedule.r for j in range(K)), default=0.0)
    row("beta ladder geometric", EXACT_TOL - ratio_err)
    row("s strictly decreasing", min((s[j] - s[j + 1] - 1 for j in range(K)), default=0))
    law = all(e % 2 == 0 and e == 2 * math.ceil(max(si, 0) ** schedule.d / 2) for e, si in zip(ell, s))
    row("ell even, ell=2*ceil(s^d/2)", 0.0 if law else -1.0)
    if spec is not None:
        _, _, _, target = variant_constants(spec.k, spec.epsilon, schedule.variant)
        recovered = schedule.a * (2 * schedule.d - 1) / schedule.r
        row("a(2d-1)/r=target", EXACT_TOL - abs(recovered - target))
    return rows


# ---------------------------------------------------------------- regime classification


class RegimeCase(enum.Enum):
    K_HIGH_WIDE = "k>=1/2, wide shift"
    K_HIGH_MID = "k>=1/2, intermediate shift"
    K_HIGH_NARROW = "k>=1/2, narrow shift"
    K_LOW_WIDE = "k<1/2, wide shift"
    K_LOW_MID = "k<1/2, intermediate shift"
    K_LOW_NARROW = "k<1/2, narrow shift"
    K_LOW_TINY = "k<1/2, tiny shift"


def regime_thresholds(spec: MomentSpec, settings: Settings = DEFAULT_SETTINGS) -> dict[str, float]:
    """Finite readings of the asymptotic range conditions, as alpha cut points."""
    L, LL = spec.log_T, spec.loglog_T
    m = settings.range_multiplier
    k, eps = spec.k, spec.epsilon
    inv2k = math.inf if k == 0 else 1 / (2 * k)
    if k >= 0.5:
        return {
            "wide": m * LL ** (4 / k + eps) / L**inv2k,
            "narrow": m / L**inv2k,
        }
    return {
        "wide": m * LL / L,
        "mid": m / L,
        "narrow": 0.0 if k == 0 else m / L ** (inv2k - eps),
    }


def classify_regime(spec: MomentSpec, settings: Settings = DEFAULT_SETTINGS) -> RegimeCase:
    th = regime_thresholds(spec, settings)
    a = spec.alpha
    if spec.k >= 0.5:
        if a >= th["wide"]:
            return RegimeCase.K_HIGH_WIDE
        if a >= th["narrow"]:
            return RegimeCase.K_HIGH_MID
        return RegimeCase.K_HIGH_NARROW
    if a >= th["wide"]:
        return RegimeCase.K_LOW_WIDE
    if a >= th["mid"]:
        return RegimeCase.K_LOW_MID
    if a >= th["narrow"]:
        return RegimeCase.K_LOW_NARROW
    return RegimeCase.K_LOW_TINY


def spec_dict(spec: MomentSpec) -> dict[str, float]:
    return asdict(spec)
