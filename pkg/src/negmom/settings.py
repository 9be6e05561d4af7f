"""Tunable constants that the underlying asymptotics leave unspecified.

Every knob defaults to the value a finite-T reading needs; none of them is
calibrated against data.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Settings:
    # constant standing in for every unspecified O(.) term
    c_O: float = 1.0
    # Delta*alpha >= regime_threshold  <=>  LARGE coefficient regime
    regime_threshold: float = 1.0
    # "1/2 + eps" in the small-regime coefficient bound
    eps_b: float = 0.01
    # multiplier turning ">>" / "o(.)" range conditions into inequalities
    range_multiplier: float = 1.0
    # alpha*log T above this picks the log(alpha log T)/(alpha log T) cap
    cap_threshold: float = 1.0
    # existential constants of the k < 1/2 bounds
    C1: float = 1.0
    C2: float = 1.0
    # epsilon used by the Mobius-sum envelopes and the x1 contour cutoff
    envelope_eps: float = 0.1

    def with_(self, **changes) -> "Settings":
        return replace(self, **changes)


DEFAULT_SETTINGS = Settings()
