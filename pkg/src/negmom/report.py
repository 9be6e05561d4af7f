"""Delimited/JSON tables and optional PNG figures."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

MOMENT_COLUMNS = ("k", "alpha", "T", "measured", "err", "gonek", "rmt", "asym_const", "thm_bound", "regime")
MOBIUS_COLUMNS = ("k", "x", "Mk", "envelope_rh", "envelope_gonek", "ratio")
CONSTANT_COLUMNS = ("k", "alpha", "euler_product", "diagonal", "abs_diff")


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def render(rows: Iterable[dict[str, Any]], columns: Sequence[str], fmt: str) -> str:
    rows = list(rows)
    if fmt == "json":
        doc = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        import sys

        sys.stdout.write(text)
        return
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def figure_path(out: str | None, stem: str) -> Path:
    """PNG next to the table (or in the working directory when printing to stdout)."""
    if out is None or out == "-":
        return Path(f"{stem}.png")
    p = Path(out)
    return p.with_name(p.stem + f"_{stem}.png")


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    return path


def plot_moments(rows: list[dict[str, Any]], path: Path) -> Path:
    """Measured moment and each predictor, one group of markers per grid cell."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    labels = [f"k={r['k']:g}\na={r['alpha']:g}\nT={r['T']:g}" for r in rows]
    xs = range(len(rows))
    for col, mk in (("measured", "o"), ("asym_const", "s"), ("gonek", "^"), ("rmt", "v"), ("thm_bound", "x")):
        pts = [(i, r[col]) for i, r in zip(xs, rows) if isinstance(r.get(col), float) and 0 < r[col] < math.inf]
        if pts:
            ax.plot([p[0] for p in pts], [p[1] for p in pts], mk, label=col)
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("mean of |zeta|^(-2k) over [T, 2T]")
    ax.legend(fontsize=7)
    fig.tight_layout()
    out = _save(fig, path)
    plt.close(fig)
    return out


def plot_mobius(rows: list[dict[str, Any]], k: float, path: Path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r["x"] for r in rows]
    ax.loglog(xs, [abs(r["Mk"]) + 1e-300 for r in rows], ".", label=f"|M_k(x)|, k={k:g}")
    env = [(r["x"], r["envelope_rh"]) for r in rows if isinstance(r.get("envelope_rh"), float)]
    if env:
        ax.loglog(*zip(*env), "-", label="RH envelope")
    gon = [(r["x"], r["envelope_gonek"]) for r in rows if isinstance(r.get("envelope_gonek"), float)]
    if gon:
        ax.loglog(*zip(*gon), "--", label="conditional envelope")
    ax.set_xlabel("x")
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = _save(fig, path)
    plt.close(fig)
    return out


def plot_constants(rows: list[dict[str, Any]], path: Path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for k in sorted({r["k"] for r in rows}):
        sel = sorted((r["alpha"], r["euler_product"]) for r in rows if r["k"] == k)
        ax.plot([s[0] for s in sel], [s[1] for s in sel], "o-", label=f"k={k:g}")
    ax.set_xlabel("alpha")
    ax.set_ylabel("limiting constant")
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = _save(fig, path)
    plt.close(fig)
    return out


def plot_schedule(doc: dict[str, Any], path: Path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    j = list(range(len(doc["beta"])))
    ax.semilogy(j, doc["beta"], "o-", label="beta_j")
    ax.semilogy(j, [max(lv * b, 1e-300) for lv, b in zip(doc["ell"], doc["beta"])], "s--", label="ell_j beta_j")
    ax.set_xlabel("j")
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = _save(fig, path)
    plt.close(fig)
    return out
