"""Command line front end.

Subcommands ``inverse``, ``direct``, ``bench`` and ``limits`` each read a
JSON config document (``--config``), optionally overridden by ``--out``
and ``--seed``.  Unknown keys anywhere in the document are rejected.
Output files are written to a temporary name and renamed into place, so
a failed run never leaves a partial file.  Exit codes: 0 success,
2 config error, 3 numerical failure.

Numbers are printed with 17 significant digits, enough to round-trip
binary64 exactly, so identical configs produce byte-identical files.
The summary goes to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import bench as bench_mod
from .boundaries import (
    DanielsBoundary,
    LinearBoundary,
    OscillatingBoundary,
    PeskirGBoundary,
    PiecewiseLinearBoundary,
)
from .densities import (
    DanielsDensity,
    ExponentialDensity,
    LinearBoundaryDensity,
    TabulatedDensity,
    c_from_kappa,
    classify_small_time,
)
from .direct import direct_fpt_mc, direct_fpt_vie
from .errors import ConfigError, IfptError
from .plmc import PlmcConfig, plmc_solve
from .vie import VieConfig, vie_solve

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(x) -> str:
    return "%.17g" % float(x)


@dataclass
class RunConfig:
    subcommand: str
    density: object | None
    boundary: object | None
    method: dict | None
    out_path: str | None
    suite: str | None = None
    seed: int = 0


class _Spec:
    """One validated sub-document: tracks which keys were consumed."""

    def __init__(self, raw: dict, name: str, errors: list):
        if not isinstance(raw, dict):
            errors.append(f"{name}: expected an object")
            raw = {}
        self.raw = dict(raw)
        self.name = name
        self.errors = errors

    def take(self, key, default=None, required=False):
        if key in self.raw:
            return self.raw.pop(key)
        if required:
            self.errors.append(f"{self.name}: missing required key {key!r}")
        return default

    def finish(self):
        for key in self.raw:
            self.errors.append(f"{self.name}: unknown key {key!r}")


def _build_density(spec: _Spec, base_dir: str):
    kind = spec.take("kind", required=True)
    try:
        if kind == "exponential":
            return ExponentialDensity(float(spec.take("lambda", 1.0)))
        if kind == "linear_boundary":
            return LinearBoundaryDensity(
                float(spec.take("alpha", required=True)),
                float(spec.take("beta", required=True)),
            )
        if kind == "daniels":
            return DanielsDensity(
                float(spec.take("alpha", required=True)),
                float(spec.take("beta", required=True)),
                float(spec.take("gamma", required=True)),
            )
        if kind == "tabulated":
            path = spec.take("path", required=True)
            if path is None:
                return None
            if not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            return TabulatedDensity.from_csv(path)
        if kind is not None:
            spec.errors.append(f"{spec.name}: unknown density kind {kind!r}")
    except (IfptError, ValueError, OSError) as exc:
        spec.errors.append(f"{spec.name}: {exc}")
    return None


def _build_boundary(spec: _Spec):
    kind = spec.take("kind", required=True)
    try:
        if kind == "linear":
            return LinearBoundary(
                float(spec.take("alpha", required=True)),
                float(spec.take("beta", required=True)),
            )
        if kind == "daniels":
            return DanielsBoundary(
                float(spec.take("alpha", required=True)),
                float(spec.take("beta", required=True)),
                float(spec.take("gamma", required=True)),
            )
        if kind == "oscillating":
            return OscillatingBoundary(
                float(spec.take("alpha", required=True)),
                float(spec.take("beta", required=True)),
                float(spec.take("gamma", required=True)),
            )
        if kind == "piecewise_linear":
            knots = spec.take("knots", required=True)
            return PiecewiseLinearBoundary(knots) if knots else None
        if kind == "peskir_g":
            c = float(spec.take("c", required=True))
            delta = spec.take("delta_c")
            return PeskirGBoundary(c, None if delta is None else float(delta))
        if kind is not None:
            spec.errors.append(f"{spec.name}: unknown boundary kind {kind!r}")
    except (IfptError, ValueError, TypeError) as exc:
        spec.errors.append(f"{spec.name}: {exc}")
    return None


_METHOD_KEYS = {
    "plmc": ("h", "steps", "t_max", "mc_samples", "seed", "confidence", "b0", "root_tol"),
    "vie": ("h", "steps", "t_max", "scheme", "b0", "root_tol",
            "flux_correction_knots", "flux_epsilon"),
    "mc": ("h", "steps", "t_max", "mc_samples", "seed"),
}


def _build_method(spec: _Spec, allowed: tuple[str, ...]):
    name = spec.take("name", required=True)
    if name not in allowed:
        if name is not None:
            spec.errors.append(f"{spec.name}: method must be one of {allowed}, got {name!r}")
        return None
    method = {"name": name}
    for key in _METHOD_KEYS[name]:
        val = spec.take(key)
        if val is not None:
            method[key] = val
    if "h" not in method:
        spec.errors.append(f"{spec.name}: missing required key 'h'")
    if "steps" not in method and "t_max" not in method:
        spec.errors.append(f"{spec.name}: needs 'steps' or 't_max'")
    return method


def parse_config(text: str, subcommand: str) -> RunConfig:
    """Parse and validate a JSON config document; all violations are
    collected and reported together."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    errors: list[str] = []
    top = _Spec(doc, "config", errors)

    declared = top.take("subcommand")
    if declared is not None and declared != subcommand:
        errors.append(f"config: subcommand {declared!r} does not match {subcommand!r}")

    density = boundary = method = None
    suite = None
    base_dir = os.getcwd()

    if subcommand in ("inverse", "limits"):
        density_raw = top.take("density")
        boundary_raw = top.take("boundary")
        if subcommand == "inverse" or boundary_raw is None:
            if density_raw is None:
                errors.append(f"config: {subcommand!r} needs a density spec")
            else:
                spec = _Spec(density_raw, "density", errors)
                density = _build_density(spec, base_dir)
                spec.finish()
        if subcommand == "limits" and boundary_raw is not None:
            if density_raw is not None:
                errors.append("config: give either a density or a boundary, not both")
            spec = _Spec(boundary_raw, "boundary", errors)
            boundary = _build_boundary(spec)
            spec.finish()
    elif subcommand == "direct":
        boundary_raw = top.take("boundary")
        if boundary_raw is None:
            errors.append("config: 'direct' needs a boundary spec")
        else:
            spec = _Spec(boundary_raw, "boundary", errors)
            boundary = _build_boundary(spec)
            spec.finish()

    if subcommand == "inverse":
        method_raw = top.take("method")
        if method_raw is None:
            errors.append("config: 'inverse' needs a method spec")
        else:
            spec = _Spec(method_raw, "method", errors)
            method = _build_method(spec, ("plmc", "vie"))
            spec.finish()
    elif subcommand == "direct":
        method_raw = top.take("method")
        if method_raw is None:
            errors.append("config: 'direct' needs a method spec")
        else:
            spec = _Spec(method_raw, "method", errors)
            method = _build_method(spec, ("mc", "vie"))
            spec.finish()
    elif subcommand == "bench":
        suite = top.take("suite", default="section7")
        if suite not in ("section7", "shiryaev"):
            errors.append(f"config: unknown bench suite {suite!r}")

    out_path = None
    output_raw = top.take("output")
    if output_raw is not None:
        spec = _Spec(output_raw, "output", errors)
        out_path = spec.take("path", required=True)
        spec.finish()

    seed = top.take("seed", 0)
    top.finish()
    if errors:
        raise ConfigError("; ".join(errors))
    return RunConfig(
        subcommand=subcommand,
        density=density,
        boundary=boundary,
        method=method,
        out_path=out_path,
        suite=suite,
        seed=int(seed),
    )


def _steps_of(method: dict) -> int:
    h = float(method["h"])
    if "steps" in method:
        return int(method["steps"])
    return int(round(float(method["t_max"]) / h))


def _write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(rows: list[list]) -> str:
    return "\n".join(",".join(cells) for cells in rows) + "\n"


def _run_inverse(cfg: RunConfig) -> tuple[str, str]:
    method = cfg.method
    h = float(method["h"])
    n = _steps_of(method)
    if method["name"] == "plmc":
        pc = PlmcConfig(
            h=h,
            n_steps=n,
            mc_samples=int(method.get("mc_samples", 10_000)),
            seed=int(method.get("seed", cfg.seed)),
            confidence=float(method.get("confidence", 0.95)),
            root_tol=float(method.get("root_tol", 1e-9)),
            b0=None if method.get("b0") is None else float(method["b0"]),
        )
        res = plmc_solve(cfg.density, pc)
        rows = [["t", "b_hat", "beta", "ci_lo", "ci_hi", "ess"]]
        rows.append([_fmt(res.times[0]), _fmt(res.levels[0]), "", "", "", ""])
        for i, t in enumerate(res.times[1:]):
            rows.append(
                [
                    _fmt(t),
                    _fmt(res.levels[i + 1]),
                    _fmt(res.slopes[i]),
                    _fmt(res.ci[i, 0]),
                    _fmt(res.ci[i, 1]),
                    _fmt(res.ess_per_step[i]),
                ]
            )
        summary = f"plmc: {res.slopes.size} steps, final knot b({res.times[-1]:g}) = {res.levels[-1]:.6g}"
        if res.truncated:
            summary += " (truncated: target mass exhausted)"
        return _csv(rows), summary
    vc = VieConfig(
        h=h,
        n=n,
        scheme=method.get("scheme", "euler"),
        b0=None if method.get("b0") is None else float(method["b0"]),
        root_tol=float(method.get("root_tol", 1e-10)),
        flux_correction_knots=int(method.get("flux_correction_knots", 0)),
        flux_epsilon=float(method.get("flux_epsilon", 0.05)),
    )
    res = vie_solve(cfg.density, vc)
    rows = [["t", "b_hat"]]
    for t, bb in zip(res.grid, res.b_star):
        rows.append([_fmt(t), _fmt(bb)])
    summary = (
        f"vie({vc.scheme}): {res.grid.size} knots, final knot "
        f"b({res.grid[-1]:g}) = {res.b_star[-1]:.6g}"
    )
    if res.multi_root_knots:
        summary += f" [multi-root at knots {list(res.multi_root_knots)}]"
    return _csv(rows), summary


def _run_direct(cfg: RunConfig) -> tuple[str, str]:
    method = cfg.method
    h = float(method["h"])
    n = _steps_of(method)
    grid = np.arange(1, n + 1) * h
    if method["name"] == "mc":
        res = direct_fpt_mc(
            cfg.boundary,
            grid,
            int(method.get("mc_samples", 100_000)),
            int(method.get("seed", cfg.seed)),
        )
        rows = [["t", "mass", "std_err"]]
        for t, m, e in zip(res.grid, res.interval_masses, res.std_errors):
            rows.append([_fmt(t), _fmt(m), _fmt(e)])
        total = res.interval_masses.sum()
        return _csv(rows), f"direct mc: crossing mass {total:.6g} by t={grid[-1]:g}"
    res = direct_fpt_vie(cfg.boundary, grid)
    rows = [["t", "f_hat"]]
    for t, f in zip(res.grid, res.density_values):
        rows.append([_fmt(t), _fmt(f)])
    total = res.interval_masses.sum()
    return _csv(rows), f"direct vie: crossing mass {total:.6g} by t={grid[-1]:g}"


def _run_bench(cfg: RunConfig, out_path: str) -> str:
    base, ext = os.path.splitext(out_path)
    if cfg.suite == "shiryaev":
        rep = bench_mod.shiryaev_compare(seed=cfg.seed)
        rows = [["t", "b_plmc", "b_vie"]]
        for t, a, b in zip(rep.times, rep.b_plmc, rep.b_vie):
            rows.append([_fmt(t), _fmt(a), _fmt(b)])
        _write_atomic(out_path, _csv(rows))
        return (
            f"shiryaev: max |plmc - vie| = {rep.max_discrepancy:.4g} on [0.1, 1], "
            f"rise-then-fall plmc={rep.plmc_rise_then_fall} vie={rep.vie_rise_then_fall}"
        )
    cells = bench_mod.section7_suite(seed=cfg.seed)
    summary_rows = [["case", "method", "h", "M", "sigma", "max_abs_err", "runtime_seconds"]]
    for cell in cells:
        rows = [["t", "b_true", "b_hat", "err"]]
        for i, t in enumerate(cell.times):
            truth = cell.b_true[i]
            rows.append(
                [
                    _fmt(t),
                    "" if truth is None or not math.isfinite(truth) else _fmt(truth),
                    _fmt(cell.b_hat[i]),
                    "" if truth is None else _fmt(truth - cell.b_hat[i]),
                ]
            )
        _write_atomic(f"{base}_{cell.case}_{cell.method}{ext or '.csv'}", _csv(rows))
        summary_rows.append(
            [
                cell.case,
                cell.method,
                _fmt(cell.h),
                "" if cell.mc_samples is None else str(cell.mc_samples),
                _fmt(cell.sigma),
                _fmt(cell.max_abs_err),
                "%.3f" % cell.runtime_seconds,
            ]
        )
    _write_atomic(out_path, _csv(summary_rows))
    worst = max(cell.sigma for cell in cells)
    return f"bench section7: {len(cells)} cells written, worst sigma {worst:.3g}"


def _run_limits(cfg: RunConfig) -> tuple[str | None, str]:
    target = cfg.density if cfg.density is not None else cfg.boundary
    klass = classify_small_time(target)
    if klass.kind == "finite":
        line = (
            f"Finite, kappa={_fmt(klass.kappa)}, c={_fmt(c_from_kappa(klass.kappa))}"
        )
    else:
        line = klass.kind.capitalize()
    return line, line


def run(cfg: RunConfig) -> int:
    """Execute a validated config; returns the process exit code."""
    try:
        if cfg.subcommand == "inverse":
            text, summary = _run_inverse(cfg)
            if cfg.out_path is None:
                raise ConfigError("'inverse' needs an output path")
            _write_atomic(cfg.out_path, text)
        elif cfg.subcommand == "direct":
            text, summary = _run_direct(cfg)
            if cfg.out_path is None:
                raise ConfigError("'direct' needs an output path")
            _write_atomic(cfg.out_path, text)
        elif cfg.subcommand == "bench":
            if cfg.out_path is None:
                raise ConfigError("'bench' needs an output path")
            summary = _run_bench(cfg, cfg.out_path)
        elif cfg.subcommand == "limits":
            line, summary = _run_limits(cfg)
            if cfg.out_path is not None:
                _write_atomic(cfg.out_path, line + "\n")
        else:  # pragma: no cover - argparse restricts choices
            raise ConfigError(f"unknown subcommand {cfg.subcommand!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IfptError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(summary)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ifpt",
        description="First-passage boundary reconstruction for the Wiener process",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("inverse", "direct", "bench", "limits"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name != "bench"))
        p.add_argument("--out")
        p.add_argument("--seed", type=int)
        if name == "bench":
            p.add_argument("--suite", choices=("section7", "shiryaev"))
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
            cfg = parse_config(text, args.subcommand)
        else:
            cfg = RunConfig(args.subcommand, None, None, None, None,
                            suite="section7", seed=0)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if getattr(args, "suite", None):
        cfg.suite = args.suite
    if args.out is not None:
        cfg.out_path = args.out
    if args.seed is not None:
        cfg.seed = args.seed
        if cfg.method is not None and cfg.method.get("name") in ("plmc", "mc"):
            cfg.method["seed"] = args.seed
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
