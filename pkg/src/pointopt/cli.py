"""Command-line interface: ``pointopt <command> [flags]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import asymptotics, optimizer
from .configurations import (
    SHARP_SIZES,
    Configuration,
    Setting,
    canonical_config,
    inner_product_set,
    named_config,
    sharp_sphere,
    spherical_design_strength,
)
from .errors import ArgumentError, PointOptError
from .spectral import ground_state

COMMANDS = ("spectrum", "optimize", "verify", "conjecture-scan", "design-check", "asymptotics")
EXIT_USAGE = 2
EXIT_SOLVER = 1


@dataclass
class RunSpec:
    command: str
    setting: str | None = None
    alpha: float | None = None
    alpha_grid: list[float] | None = None
    N: int | None = None
    trials: int | None = None
    starts: int | None = None
    seed: int = 0
    config: str | None = None
    output_path: str | None = None
    format: str = "json"
    objective: str | None = None
    kappa: float | None = None
    mode: str | None = None
    workers: int = 1


class UsageError(ArgumentError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Serialization


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, Setting):
        return obj.value
    if isinstance(obj, Configuration):
        return obj.to_dict()
    return obj


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def render_json(payload: dict) -> str:
    return json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n"


def render_csv(runspec: RunSpec, header, rows) -> str:
    buf = io.StringIO()
    buf.write("# runspec: " + json.dumps(_clean(asdict(runspec)), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Argument handling


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pointopt", description="Point-interaction ground states and optimal configurations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--setting", choices=[x.value for x in Setting])
        s.add_argument("--alpha", type=str, help="a value, or a comma-separated list")
        s.add_argument("--alpha-min", type=float)
        s.add_argument("--alpha-max", type=float)
        s.add_argument("--alpha-steps", type=int)
        s.add_argument("--n", type=int)
        s.add_argument("--trials", type=int)
        s.add_argument("--starts", type=int)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--config", help="JSON file or built-in name (canonical, octahedron, ...)")
        s.add_argument("--out")
        s.add_argument("--format", choices=["json", "csv"], default="json")
        if name == "optimize":
            s.add_argument("--objective", choices=["lambda1", "surface"], default="lambda1")
            s.add_argument("--kappa", type=float, default=1.0)
        if name == "asymptotics":
            s.add_argument("--mode", choices=["weak", "strong"], default="weak")
    return p


def _alpha_values(args) -> list[float] | None:
    vals = None
    if args.alpha is not None:
        vals = [float(x) for x in args.alpha.split(",") if x.strip()]
    if args.alpha_min is not None or args.alpha_max is not None or args.alpha_steps is not None:
        if vals is not None:
            raise UsageError("--alpha conflicts with --alpha-min/--alpha-max/--alpha-steps")
        if args.alpha_min is None or args.alpha_max is None or args.alpha_steps is None:
            raise UsageError("--alpha-min, --alpha-max and --alpha-steps go together")
        if args.alpha_steps < 1:
            raise UsageError("--alpha-steps must be >= 1")
        vals = np.linspace(args.alpha_min, args.alpha_max, args.alpha_steps).tolist()
    if vals is not None and any(not math.isfinite(v) for v in vals):
        raise UsageError("alpha values must be finite")
    return vals


def resolve_runspec(args) -> RunSpec:
    alphas = _alpha_values(args)
    spec = RunSpec(
        command=args.command,
        setting=args.setting,
        N=args.n,
        trials=args.trials,
        starts=args.starts,
        seed=args.seed,
        config=args.config,
        output_path=args.out,
        format=args.format,
        objective=getattr(args, "objective", None),
        kappa=getattr(args, "kappa", None),
        mode=getattr(args, "mode", None),
        workers=optimizer.resolve_workers(),
    )
    if alphas is not None and len(alphas) == 1 and args.alpha_steps is None:
        spec.alpha = alphas[0]
    else:
        spec.alpha_grid = alphas
    return spec


def _require(cond, message):
    if not cond:
        raise UsageError(message)


def load_config(ref: str, setting=None, N=None) -> Configuration:
    path = Path(ref)
    if path.is_file():
        return Configuration.from_json(path.read_text())
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    return named_config(stem, setting, N)


def _config_from(spec: RunSpec) -> Configuration:
    if spec.config:
        cfg = load_config(spec.config, spec.setting, spec.N)
    else:
        _require(spec.setting and spec.N, "--config or both --setting and --n are required")
        cfg = canonical_config(spec.setting, spec.N)
    if spec.setting:
        _require(cfg.setting.value == spec.setting,
                 f"configuration setting {cfg.setting.value} differs from --setting {spec.setting}")
    spec.setting = cfg.setting.value
    spec.N = cfg.N
    return cfg


def _grid(spec: RunSpec) -> list[float]:
    if spec.alpha_grid is not None:
        return spec.alpha_grid
    _require(spec.alpha is not None, "--alpha is required")
    return [spec.alpha]


def _scalar_alpha(spec: RunSpec) -> float:
    _require(spec.alpha is not None and spec.alpha_grid is None, "a single --alpha is required")
    return spec.alpha


# ---------------------------------------------------------------------------
# Commands; each returns (payload, csv header, csv rows, summary line)


def cmd_spectrum(spec):
    cfg = _config_from(spec)
    results = [ground_state(cfg.setting, a, cfg) for a in _grid(spec)]
    header = ["alpha", "lambda1", "energy_offset", "log_abs_offset", "residual", "method", "evaluations"]
    rows = [[r.alpha, r.lambda1, r.energy_offset, r.log_abs_offset, r.residual, r.method, r.evaluations]
            for r in results]
    payload = {"config": cfg.to_dict(), "results": [r.to_dict() for r in results]}
    summary = ", ".join(f"lambda1({r.alpha:g}) = {r.lambda1:.12g}" for r in results)
    return payload, header, rows, summary


def cmd_optimize(spec):
    _require(spec.N is not None, "--n is required")
    if spec.objective == "surface":
        _require(spec.setting in (None, Setting.SPHERE.value), "surface objective is sphere-only")
        _require(spec.kappa is not None and spec.kappa > 0, "--kappa must be positive")
        spec.setting = Setting.SPHERE.value
        rep = optimizer.minimize_surface_energy(spec.kappa, spec.N, spec.starts or 50, spec.seed,
                                                workers=spec.workers)
        reports = [(None, rep)]
    else:
        _require(spec.setting is not None, "--setting is required")
        reports = [(a, optimizer.maximize_lambda1(spec.setting, a, spec.N, spec.starts, spec.seed,
                                                  workers=spec.workers))
                   for a in _grid(spec)]
    header = ["alpha", "start", "value", "congruent", "evaluations"]
    rows = []
    for a, rep in reports:
        h, rs = rep.csv_rows()
        rows += [[a] + r for r in rs]
    payload = {"reports": [dict(alpha=a, **rep.to_dict()) for a, rep in reports]}
    summary = "; ".join(f"best {rep.best_value:.12g}, matched_canonical={rep.matched_canonical}"
                        for _, rep in reports)
    return payload, header, rows, summary


def cmd_verify(spec):
    _require(spec.setting is not None and spec.N is not None, "--setting and --n are required")
    _require(spec.trials is not None and spec.trials >= 1, "--trials must be >= 1")
    rep = optimizer.verify_theorem(spec.setting, _scalar_alpha(spec), spec.N, spec.trials, spec.seed,
                                   workers=spec.workers)
    header, rows = rep.csv_rows()
    summary = (f"violations: {rep.violations}, sign_violations: {rep.sign_violations}, "
               f"min_gap: {rep.min_gap}, log_min_gap: {rep.log_min_gap}")
    return rep.to_dict(), header, rows, summary


def cmd_conjecture_scan(spec):
    _require(spec.N is not None, "--n is required")
    _require(spec.trials is not None and spec.trials >= 1, "--trials must be >= 1")
    _require(spec.setting in (None, Setting.LOOP.value), "conjecture-scan is loop-only")
    spec.setting = Setting.LOOP.value
    grid = spec.alpha_grid if spec.alpha_grid is not None else ([] if spec.alpha is None else [spec.alpha])
    _require(all(a > 0 for a in grid), "conjecture-scan needs positive alphas")
    rows = optimizer.conjecture_scan(spec.N, grid, spec.trials, spec.seed, workers=spec.workers)
    header = ["alpha", "trials", "violations", "sign_violations", "min_gap", "weak_prediction"]
    total = sum(r["violations"] for r in rows)
    return {"rows": rows}, header, [[r[h] for h in header] for r in rows], f"violations: {total}"


def cmd_design_check(spec):
    if spec.config:
        cfg = _config_from(spec)
        sharp = None
    else:
        _require(spec.N is not None, "--n or --config is required")
        _require(spec.N in SHARP_SIZES, f"design-check supports N in {SHARP_SIZES}")
        cfg, sharp = sharp_sphere(spec.N)
        spec.setting = Setting.SPHERE.value
    _require(cfg.setting is Setting.SPHERE, "design-check needs a sphere configuration")
    strength = spherical_design_strength(cfg)
    payload = {
        "config": cfg.to_dict(),
        "design_strength": strength,
        "inner_products": inner_product_set(cfg),
        "sharp": None if sharp is None else {"name": sharp.name, "m": sharp.m,
                                              "design_strength": sharp.design_strength},
    }
    header = ["N", "design_strength", "distinct_inner_products"]
    rows = [[cfg.N, strength, len(payload["inner_products"])]]
    return payload, header, rows, f"design_strength: {strength}"


def cmd_asymptotics(spec):
    cfg = _config_from(spec) if (spec.config or spec.N) else None
    _require(cfg is not None and cfg.setting is Setting.LOOP, "asymptotics needs a loop configuration")
    if spec.mode == "strong":
        grid = spec.alpha_grid or ([spec.alpha] if spec.alpha is not None else [1e2, 1e3, 1e4])
        rep = asymptotics.strong_limit_check(cfg, grid)
        summary = (f"dirichlet: {rep.dirichlet:.12g}, monotone: {rep.monotone}, "
                   f"c_estimate: {rep.c_estimate:.6g}")
    else:
        grid = spec.alpha_grid or np.linspace(0.01, 0.1, 10).tolist()
        rep = asymptotics.weak_expansion_check(cfg, grid)
        summary = f"c1_fit: {rep.c1_fit:.8g}, exponent: {rep.exponent:.4f}"
    header, rows = rep.csv_rows()
    return {"config": cfg.to_dict(), "report": rep.to_dict()}, header, rows, summary


DISPATCH = {
    "spectrum": cmd_spectrum,
    "optimize": cmd_optimize,
    "verify": cmd_verify,
    "conjecture-scan": cmd_conjecture_scan,
    "design-check": cmd_design_check,
    "asymptotics": cmd_asymptotics,
}


def run(spec: RunSpec, now: str | None = None) -> tuple[int, str]:
    """Execute a resolved RunSpec; returns the exit status and the rendered output."""
    payload, header, rows, summary = DISPATCH[spec.command](spec)
    if spec.format == "csv":
        text = render_csv(spec, header, rows)
    else:
        doc = {"runspec": asdict(spec), "result": payload,
               "timestamp": now or datetime.now(timezone.utc).isoformat()}
        text = render_json(doc)
    if spec.output_path:
        write_atomic(spec.output_path, text)
    else:
        sys.stdout.write(text)
    print(f"{spec.command}: {summary}", file=sys.stderr)
    return 0, text


def _error_doc(exc, spec, kind):
    return render_json({"error": {"kind": kind, "type": type(exc).__name__, "message": str(exc)},
                        "runspec": None if spec is None else asdict(spec)})


def main(argv=None) -> int:
    spec = None
    try:
        args = build_parser().parse_args(argv)
        spec = resolve_runspec(args)
        return run(spec)[0]
    except (UsageError, ArgumentError, ValueError) as exc:
        sys.stdout.write(_error_doc(exc, spec, "usage"))
        return EXIT_USAGE
    except (PointOptError, ArithmeticError, RuntimeError) as exc:
        sys.stdout.write(_error_doc(exc, spec, "solver"))
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
