"""Command-line front end: `hystlab run <config>`, `hystlab sweep <config>`,
`hystlab presets`.

Configs are flat key = value text with three sections ([model], [experiment],
[output]) plus an optional [sweep] block; unknown sections or keys are
rejected. The output root can be overridden with the HYSTLAB_OUTPUT_ROOT
environment variable. Every run writes its tables as CSV (17 significant
digits), optional SVG line plots, and a manifest listing the resolved config
and all artifacts.
"""
from __future__ import annotations

import argparse
import configparser
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import ConfigError, HystlabError
from .experiments import (
    EXPERIMENT_OPTIONS,
    PRESETS,
    ExperimentResult,
    preset_config,
    run_experiment,
)
from .kinetics import ModelParams, baseline_params
from .report import fmt, svg_line_chart, write_csv, write_manifest

_MODEL_KEYS = ("mu1", "mu2", "mu3", "m1", "m4", "sigma", "beta_l", "delta",
               "b", "d", "gamma")
_OUTPUT_KEYS = {"dir", "svg"}
_SWEEP_KEYS = {"param", "values", "lo", "hi", "n", "scale",
               "param2", "values2", "lo2", "hi2", "n2", "scale2", "workers"}


class RunSpec:
    def __init__(self, params: ModelParams, experiment: str, options: dict,
                 out_dir: Path, svg: bool, sweep: dict | None, text: str):
        self.params = params
        self.experiment = experiment
        self.options = options
        self.out_dir = out_dir
        self.svg = svg
        self.sweep = sweep
        self.text = text


def _parse_config(path: str) -> RunSpec:
    cp = configparser.ConfigParser(interpolation=None)
    text = Path(path).read_text()
    if not text.strip():
        raise ConfigError(f"config {path} is empty")
    try:
        cp.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    known_sections = {"model", "experiment", "output", "sweep"}
    for sec in cp.sections():
        if sec not in known_sections:
            raise ConfigError(f"unknown section [{sec}]")
    if "experiment" not in cp:
        raise ConfigError("config needs an [experiment] section with an id")

    base = baseline_params()
    model_kwargs = {k: getattr(base, k) for k in _MODEL_KEYS}
    if "model" in cp:
        for key, val in cp["model"].items():
            if key not in _MODEL_KEYS:
                raise ConfigError(f"unknown [model] key {key!r}")
            try:
                model_kwargs[key] = float(val)
            except ValueError as exc:
                raise ConfigError(f"[model] {key} = {val!r} is not a number") from exc
    params = ModelParams(**model_kwargs)

    exp = dict(cp["experiment"])
    exp_id = exp.pop("id", None)
    if exp_id is None:
        raise ConfigError("[experiment] needs id = <experiment name>")
    if exp_id not in EXPERIMENT_OPTIONS:
        raise ConfigError(f"unknown experiment id {exp_id!r}; known: "
                          f"{', '.join(sorted(EXPERIMENT_OPTIONS))}")
    known = EXPERIMENT_OPTIONS[exp_id]
    options = {}
    for key, val in exp.items():
        if key not in known:
            raise ConfigError(f"unknown option {key!r} for experiment {exp_id!r} "
                              f"(line with '{key} = {val}')")
        options[key] = val

    out_dir = Path("out") / exp_id
    svg = False
    if "output" in cp:
        for key, val in cp["output"].items():
            if key not in _OUTPUT_KEYS:
                raise ConfigError(f"unknown [output] key {key!r}")
        out_dir = Path(cp["output"].get("dir", str(out_dir)))
        svg = cp["output"].getboolean("svg", fallback=False)

    sweep = None
    if "sweep" in cp:
        sweep = dict(cp["sweep"])
        for key in sweep:
            if key not in _SWEEP_KEYS:
                raise ConfigError(f"unknown [sweep] key {key!r}")

    root = os.environ.get("HYSTLAB_OUTPUT_ROOT")
    if root:
        out_dir = Path(root) / out_dir
    return RunSpec(params, exp_id, options, out_dir, svg, sweep, text)


def _emit(result: ExperimentResult, spec: RunSpec) -> list[Path]:
    artifacts = []
    for name, (header, rows) in result.tables.items():
        artifacts.append(write_csv(spec.out_dir / f"{name}.csv", header, rows))
    if result.assertions:
        artifacts.append(write_csv(
            spec.out_dir / "assertions.csv",
            ("name", "status", "measured", "expected"),
            [a.row() for a in result.assertions]))
    if spec.svg:
        for name, title, xlabel, ylabel, series in result.plots:
            artifacts.append(svg_line_chart(spec.out_dir / f"{name}.svg",
                                            title, xlabel, ylabel, series))
    write_manifest(spec.out_dir, spec.text, artifacts)
    return artifacts


def _summary_line(result: ExperimentResult) -> tuple[str, int]:
    n = len(result.assertions)
    if result.passed:
        return (f"PASS {result.experiment}: {n} assertion(s) hold", 0)
    bad = [a for a in result.assertions if not a.passed]
    first = bad[0]
    return (f"FAIL {result.experiment}: {len(bad)}/{n} assertion(s) failed; "
            f"first: {first.name} measured={fmt(first.measured)} "
            f"expected {first.expected}", 1)


def _cmd_run(args) -> int:
    if args.preset:
        params, exp_id, options = preset_config(args.preset)
        text = f"# preset {args.preset}\n[experiment]\nid = {exp_id}\n"
        out_dir = Path(args.out or Path("out") / args.preset)
        root = os.environ.get("HYSTLAB_OUTPUT_ROOT")
        if root:
            out_dir = Path(root) / out_dir
        spec = RunSpec(params, exp_id, options, out_dir, args.svg, None, text)
    else:
        if not args.config:
            print("usage: hystlab run <config> | hystlab run --preset <name>",
                  file=sys.stderr)
            return 2
        spec = _parse_config(args.config)
        if args.out:
            spec.out_dir = Path(args.out)
        if args.svg:
            spec.svg = True
    result = run_experiment(spec.experiment, spec.params, spec.options)
    _emit(result, spec)
    for note in result.notes:
        print(f"note: {note}")
    line, code = _summary_line(result)
    print(line)
    return code


def _cmd_run_all(args) -> int:
    worst = 0
    for name in PRESETS:
        params, exp_id, options = preset_config(name)
        out_dir = Path(args.out or "out") / name
        root = os.environ.get("HYSTLAB_OUTPUT_ROOT")
        if root:
            out_dir = Path(root) / out_dir
        spec = RunSpec(params, exp_id, options, out_dir, args.svg, None,
                       f"# preset {name}\n[experiment]\nid = {exp_id}\n")
        result = run_experiment(exp_id, params, options)
        _emit(result, spec)
        line, code = _summary_line(result)
        print(f"[{name}] {line}")
        worst = max(worst, code)
    return worst


def _grid_from_sweep(sweep: dict, suffix: str = "") -> tuple[str, list[float]]:
    param = sweep.get("param" + suffix)
    if param is None:
        return None, None
    if "values" + suffix in sweep:
        values = [float(v) for v in sweep["values" + suffix].split(",") if v.strip()]
    else:
        import numpy as np
        lo = float(sweep["lo" + suffix])
        hi = float(sweep["hi" + suffix])
        n = int(sweep["n" + suffix])
        if sweep.get("scale" + suffix, "linear") == "log":
            values = np.geomspace(lo, hi, n).tolist()
        else:
            values = np.linspace(lo, hi, n).tolist()
    return param, values


def _apply_point(spec: RunSpec, assignments: dict):
    params, options = spec.params, dict(spec.options)
    for param, value in assignments.items():
        if param.startswith("model."):
            key = param.split(".", 1)[1]
            if key not in _MODEL_KEYS:
                raise ConfigError(f"unknown model parameter {key!r} in sweep")
            params = ModelParams(**{**{k: getattr(params, k) for k in _MODEL_KEYS},
                                    key: value})
        else:
            key = param.split(".", 1)[-1]
            if key not in EXPERIMENT_OPTIONS[spec.experiment]:
                raise ConfigError(f"unknown experiment option {key!r} in sweep")
            options[key] = value
    return params, options


def _cmd_sweep(args) -> int:
    spec = _parse_config(args.config)
    if args.out:
        spec.out_dir = Path(args.out)
    if spec.sweep is None:
        print("config has no [sweep] section", file=sys.stderr)
        return 2
    p1, v1 = _grid_from_sweep(spec.sweep)
    if p1 is None:
        raise ConfigError("[sweep] needs at least `param` plus a grid")
    p2, v2 = _grid_from_sweep(spec.sweep, "2")
    points = [{p1: a} for a in v1] if p2 is None else \
        [{p1: a, p2: b} for a in v1 for b in v2]
    workers = int(spec.sweep.get("workers", "4"))

    def one(point):
        try:
            params, options = _apply_point(spec, point)
            result = run_experiment(spec.experiment, params, options)
            return (point, result, None)
        except HystlabError as exc:
            return (point, None, f"{type(exc).__name__}: {exc}")

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(one, points))

    keys = sorted({k for _, r, _ in results if r for k in r.summary})
    header = list(points[0].keys()) + keys + ["passed", "error"]
    rows = []
    for point, result, err in results:
        row = [point[k] for k in point]
        if result is None:
            row += [float("nan")] * len(keys) + [False, err]
        else:
            row += [result.summary.get(k, float("nan")) for k in keys]
            row += [result.passed, ""]
        rows.append(row)
    path = write_csv(spec.out_dir / "sweep.csv", header, rows)
    write_manifest(spec.out_dir, spec.text, [path])
    n_err = sum(1 for _, r, e in results if e or (r and not r.passed))
    print(f"sweep of {len(points)} point(s) -> {path} ({n_err} failing)")
    return 0


def _cmd_presets(_args) -> int:
    width = max(len(n) for n in PRESETS)
    for name, (desc, exp_id, _) in PRESETS.items():
        print(f"{name:<{width}}  {desc}  [experiment: {exp_id}]")
    print(f"{'all-presets':<{width}}  every preset in sequence (the acceptance suite)")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="hystlab",
                                 description="hysteresis pattern-formation laboratory")
    sub = ap.add_subparsers(dest="command")
    run_p = sub.add_parser("run", help="run one experiment from a config or preset")
    run_p.add_argument("config", nargs="?", help="path to a config file")
    run_p.add_argument("--preset", choices=list(PRESETS) + ["all-presets"],
                       help="run a named built-in instead of a config")
    run_p.add_argument("--out", help="output directory override")
    run_p.add_argument("--svg", action="store_true", help="emit SVG plots")
    sweep_p = sub.add_parser("sweep", help="run the [sweep] block of a config")
    sweep_p.add_argument("config")
    sweep_p.add_argument("--out", help="output directory override")
    sub.add_parser("presets", help="list built-in presets")

    args = ap.parse_args(argv)
    try:
        if args.command == "run":
            if args.preset == "all-presets":
                return _cmd_run_all(args)
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "presets":
            return _cmd_presets(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except HystlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    ap.print_usage(sys.stderr)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
