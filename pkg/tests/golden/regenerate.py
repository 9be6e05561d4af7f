"""Rebuild the pinned reference files in this directory.

Run from the repository root:  python3 tests/golden/regenerate.py [name ...]
Only rerun after a deliberate numerical change, and review the diff.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

HERE = Path(__file__).parent


def _dump(name: str, doc) -> None:
    (HERE / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def decomposition() -> None:
    from negmom.explicit import excluded_set_decomposition
    from negmom.schedule import MomentSpec, build_schedule

    spec = MomentSpec(0.5, 0.3, 1e3)
    sched = build_schedule(spec, "small_shift", strict=False)
    dec = excluded_set_decomposition(1500.0, spec, sched, force=True)
    _dump("decomposition.json", {"excluded": dec.excluded, "max_P0": dec.max_P0, "log_S1": dec.log_S1, "S2": dec.S2})


def schedules() -> None:
    from negmom.dirichlet import first_factor_log_rhs, product_moment_log_rhs
    from negmom.schedule import MomentSpec, build_schedule, classify_regime, validate_schedule

    spec = MomentSpec(0.5, 0.3, 1e6, epsilon=0.1)
    for variant in ("baseline", "small_shift"):
        sched = build_schedule(spec, variant, strict=False)
        (HERE / f"schedule_{variant}.json").write_text(sched.to_json() + "\n", encoding="utf-8")
        rows = validate_schedule(sched, spec)
        _dump(f"slack_{variant}.json", [[n, ok, s] for n, ok, s in rows])
    base = build_schedule(spec, "baseline", strict=False)
    _dump(
        "rhs_reference.json",
        {
            "first_factor_log": first_factor_log_rhs(spec, base, 0, enforce=False),
            "product_moment_log": product_moment_log_rhs(spec, base, enforce=False),
        },
    )
    T = 1e6
    edge = MomentSpec(0.5, 1 / math.log(T), T)
    _dump("regime.json", {"k=0.5,alpha=1/logT,T=1e6": classify_regime(edge).name})


def moments() -> None:
    from negmom.cli import main

    main(["moment", "--grid", "reference", "--out", str(HERE / "moment_reference.csv")])


def report() -> None:
    from negmom.moments import run_report
    from negmom.schedule import MomentSpec

    rep = run_report(MomentSpec(0.5, 0.6, 5e3))
    _dump(
        "report_reference.json",
        {
            "measured": rep.measured.value,
            "gonek": rep.gonek,
            "asymptotic_constant": rep.asymptotic_constant,
            "theorem_bound": rep.theorem_bound,
            "regime": rep.regime.name,
            "markers": rep.markers,
        },
    )


def smoothing() -> None:
    from negmom.mobius import smoothing_W

    w = smoothing_W(1.0, 100.0)
    _dump("smoothing_w1.json", {"re": w.real, "im": w.imag})


JOBS = {"decomposition": decomposition, "schedules": schedules, "moments": moments, "report": report, "smoothing": smoothing}

if __name__ == "__main__":
    for name in sys.argv[1:] or JOBS:
        JOBS[name]()
        print("wrote", name)
