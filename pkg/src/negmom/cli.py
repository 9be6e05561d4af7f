"""Command-line entry point: ``negmom <command> [flags]``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Sequence

from . import report
from .errors import DomainError, NegMomError
from .settings import DEFAULT_SETTINGS, Settings

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3

MAX_GRID_CELLS = 1000
COMMANDS = ("moment", "constant", "mobius", "schedule", "zeta", "verify")
GRIDS: dict[str, dict[str, tuple[float, ...]]] = {
    "reference": {"k": (0.5, 1.0), "alpha": (0.6, 0.8), "T": (1000.0,)},
    "constant": {"k": (0.25, 0.5, 1.0, 1.5), "alpha": (0.3, 0.5, 1.0)},
}

log = logging.getLogger("negmom")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs; serializes to JSON and back unchanged."""

    command: str
    k: tuple[float, ...] = ()
    alpha: tuple[float, ...] = ()
    T: tuple[float, ...] = ()
    epsilon: float = 0.1
    grid: str | None = None
    out: str | None = None
    format: str = "csv"
    threads: int | None = None
    c_o: float = DEFAULT_SETTINGS.c_O
    regime_threshold: float = DEFAULT_SETTINGS.regime_threshold
    variant: str = "baseline"
    strict: bool = False
    x_max: int = 10**6
    s: str = "2"
    target: float = 1e-10
    full: bool = False
    plot: bool = False

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        if self.grid is not None and self.grid not in GRIDS:
            raise UsageError(f"unknown grid {self.grid!r}; choose from {', '.join(GRIDS)}")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        for key in ("k", "alpha", "T"):
            d[key] = list(d[key])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        doc = dict(doc)
        for key in ("k", "alpha", "T"):
            if key in doc:
                doc[key] = tuple(float(v) for v in doc[key])
        return cls(**doc)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    @property
    def settings(self) -> Settings:
        return DEFAULT_SETTINGS.with_(c_O=self.c_o, regime_threshold=self.regime_threshold)

    def axis(self, name: str) -> tuple[float, ...]:
        vals = getattr(self, name)
        if vals:
            return vals
        if self.grid and name in GRIDS[self.grid]:
            return GRIDS[self.grid][name]
        return ()


def _float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=_float_list, default=(), help="comma-separated k values")
    common.add_argument("--alpha", type=_float_list, default=(), help="comma-separated shifts")
    common.add_argument("--T", type=_float_list, default=(), help="comma-separated heights")
    common.add_argument("--epsilon", type=float, default=0.1)
    common.add_argument("--grid", choices=sorted(GRIDS), help="preset axis values for flags left unset")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, help="worker threads (NEGMOM_THREADS wins)")
    common.add_argument("--c-o", dest="c_o", type=float, default=DEFAULT_SETTINGS.c_O, help="value used for O(1) constants")
    common.add_argument("--regime-threshold", type=float, default=DEFAULT_SETTINGS.regime_threshold)
    common.add_argument("--plot", action="store_true", help="also write a PNG figure next to --out")
    common.add_argument("--config", help="read a RunConfig JSON instead of flags")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="negmom", description="Negative moments of zeta and related sums.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("moment", parents=[common], help="measured moment vs predictors over a grid")
    sub.add_parser("constant", parents=[common], help="limiting constant by two routes")
    mob = sub.add_parser("mobius", parents=[common], help="partial sums of mu_k at checkpoints")
    mob.add_argument("--x-max", type=int, default=10**6)
    sch = sub.add_parser("schedule", parents=[common], help="build and validate a parameter schedule")
    sch.add_argument("--variant", choices=("baseline", "small_shift"), default="baseline")
    sch.add_argument("--strict", action="store_true", help="raise instead of emitting a failing ladder")
    zt = sub.add_parser("zeta", parents=[common], help="evaluate zeta at one point")
    zt.add_argument("--s", default="2", help="complex point, e.g. 0.5+14.134725j")
    zt.add_argument("--target", type=float, default=1e-10)
    ver = sub.add_parser("verify", parents=[common], help="run the property suite")
    ver.add_argument("--full", action="store_true", help="larger sample sizes")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.config:
        with open(ns.config, encoding="utf-8") as fh:
            cfg = RunConfig.from_json(fh.read())
        if cfg.command != ns.command:
            raise UsageError(f"config is for {cfg.command!r}, not {ns.command!r}")
        return cfg
    known = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in known})


# ---------------------------------------------------------------- commands


def _grid(cfg: RunConfig, names: Sequence[str]) -> list[tuple[float, ...]]:
    axes = []
    for n in names:
        vals = cfg.axis(n)
        if not vals:
            raise UsageError(f"--{n} is required (or pick a --grid)")
        axes.append(vals)
    cells = math.prod(len(a) for a in axes)
    if cells > MAX_GRID_CELLS:
        raise UsageError(f"grid has {cells} cells, limit is {MAX_GRID_CELLS}")
    out: list[tuple[float, ...]] = [()]
    for a in axes:
        out = [c + (v,) for c in out for v in a]
    return out


def _num(v: Any) -> Any:
    return v if v is None or isinstance(v, str) else float(v)


def cmd_moment(cfg: RunConfig) -> int:
    from .moments import QuadConfig, run_report
    from .schedule import MomentSpec

    cells = _grid(cfg, ("k", "alpha", "T"))
    specs = [MomentSpec(k, a, T, epsilon=cfg.epsilon) for k, a, T in cells]
    quad = QuadConfig(threads=cfg.threads)
    rows = []
    for spec in specs:
        rep = run_report(spec, quad, cfg.settings)
        m = rep.cell("measured")
        rows.append(
            {
                "k": spec.k,
                "alpha": spec.alpha,
                "T": spec.T,
                "measured": m if isinstance(m, str) else m.value,
                "err": None if isinstance(m, str) else m.error_estimate,
                "gonek": _num(rep.cell("gonek")),
                "rmt": _num(rep.cell("rmt")),
                "asym_const": _num(rep.cell("asymptotic_constant")),
                "thm_bound": _num(rep.cell("theorem_bound")),
                "regime": rep.regime.name,
            }
        )
    report.emit(report.render(rows, report.MOMENT_COLUMNS, cfg.format), cfg.out)
    if cfg.plot:
        report.plot_moments(rows, report.figure_path(cfg.out, "moments"))
    return EXIT_OK


def cmd_constant(cfg: RunConfig) -> int:
    from .moments import asymptotic_constant, asymptotic_constant_diagonal

    rows = []
    for k, a in _grid(cfg, ("k", "alpha")):
        e = asymptotic_constant(k, a)
        d = asymptotic_constant_diagonal(k, a)
        rows.append({"k": k, "alpha": a, "euler_product": e, "diagonal": d, "abs_diff": abs(e - d)})
    report.emit(report.render(rows, report.CONSTANT_COLUMNS, cfg.format), cfg.out)
    if cfg.plot:
        report.plot_constants(rows, report.figure_path(cfg.out, "constants"))
    return EXIT_OK


def cmd_mobius(cfg: RunConfig) -> int:
    from .mobius import EnvelopeSource, envelope, mobius_partial_sums

    ks = cfg.axis("k")
    if not ks:
        raise UsageError("--k is required")
    rows = []
    for k in ks:
        series = mobius_partial_sums(k, cfg.x_max)
        for x, v in series.checkpoints:
            rh = envelope(k, x, EnvelopeSource.RH, cfg.settings) if x >= 16 else None
            gon = envelope(k, x, EnvelopeSource.GONEK, cfg.settings) if x >= 16 else None
            rows.append({"k": k, "x": x, "Mk": v, "envelope_rh": rh, "envelope_gonek": gon, "ratio": abs(v) / rh if rh else None})
    report.emit(report.render(rows, report.MOBIUS_COLUMNS, cfg.format), cfg.out)
    if cfg.plot:
        for k in ks:
            report.plot_mobius([r for r in rows if r["k"] == k], k, report.figure_path(cfg.out, f"mobius_k{k:g}"))
    return EXIT_OK


def cmd_schedule(cfg: RunConfig) -> int:
    from .schedule import MomentSpec, build_schedule, validate_schedule

    cells = _grid(cfg, ("k", "alpha", "T"))
    if len(cells) != 1:
        raise UsageError("schedule takes a single (k, alpha, T)")
    k, a, T = cells[0]
    spec = MomentSpec(k, a, T, epsilon=cfg.epsilon)
    sched = build_schedule(spec, cfg.variant, cfg.settings, strict=cfg.strict)
    rows = validate_schedule(sched, spec)
    if cfg.format == "json":
        text = json.dumps(sched.to_dict(), indent=2, sort_keys=False) + "\n"
    else:
        text = report.render(
            [{"row": n, "ok": ok, "slack": slack} for n, ok, slack in rows], ("row", "ok", "slack"), "csv"
        )
    report.emit(text, cfg.out)
    for n, ok, slack in rows:
        if not ok:
            print(f"FAIL {n} (slack {slack:.6g})", file=sys.stderr)
    if cfg.plot and sched.K >= 1:
        report.plot_schedule(sched.to_dict(), report.figure_path(cfg.out, "schedule"))
    return EXIT_OK if all(ok for _, ok, _ in rows) else EXIT_INVARIANT


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a complex number") from None


def cmd_zeta(cfg: RunConfig) -> int:
    from .zeta import zeta

    s = _parse_complex(cfg.s)
    ev = zeta(s, cfg.target)
    row = {
        "sigma": s.real,
        "t": s.imag,
        "re": ev.value.real,
        "im": ev.value.imag,
        "abs_error_estimate": ev.abs_error_estimate,
        "n_terms": ev.n_terms,
    }
    report.emit(report.render([row], tuple(row), cfg.format), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import run_suite

    results = run_suite(cfg.settings, full=cfg.full)
    lines = []
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        kind = "asserted" if r.asserted else "diagnostic"
        lines.append(f"{tag} [{kind}] {r.name}: {r.detail} ({r.seconds:.1f}s)\n")
    report.emit("".join(lines), cfg.out)
    return EXIT_INVARIANT if any(r.asserted and not r.passed for r in results) else EXIT_OK


HANDLERS = {
    "moment": cmd_moment,
    "constant": cmd_constant,
    "mobius": cmd_mobius,
    "schedule": cmd_schedule,
    "zeta": cmd_zeta,
    "verify": cmd_verify,
}


def run(cfg: RunConfig) -> int:
    return HANDLERS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)  # exits with 2 on bad flags
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except (UsageError, DomainError) as exc:
        print(f"negmom {ns.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NegMomError as exc:
        print(f"negmom {ns.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (OSError, ValueError) as exc:
        print(f"negmom {ns.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
