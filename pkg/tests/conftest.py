from __future__ import annotations

import functools
import json
from pathlib import Path

import pytest

from negmom import oracles


@functools.lru_cache(maxsize=None)
def _zero(n: int) -> float:
    return oracles.zero_ordinate(n)


@pytest.fixture(scope="session")
def first_zeros() -> list[float]:
    return [_zero(1), _zero(2), _zero(3)]


GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def golden():
    """Loader for pinned reference files; rebuild them with tests/golden/regenerate.py."""

    def load(name: str):
        path = GOLDEN_DIR / name
        text = path.read_text(encoding="utf-8")
        return json.loads(text) if name.endswith(".json") else text

    return load


@pytest.fixture(scope="session")
def reference_report():
    """run_report at (k=1/2, alpha=0.6, T=5000); about a minute, so shared."""
    from negmom.moments import run_report
    from negmom.schedule import MomentSpec

    return run_report(MomentSpec(0.5, 0.6, 5e3))


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary prints them in order."""

    def record(number: int, passed: bool, detail: str) -> bool:
        ACCEPTANCE[number] = (bool(passed), detail)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
