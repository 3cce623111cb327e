"""
Command-line front end: config or recipe in, deterministic CSV out.

    gausscorr --recipe fig1 --out fig1.csv
    gausscorr --config run.ini --format tsv --threads 4

The config file is INI-style, one flat ``key = value`` list per section::

    [system]
    mass = 1
    omega1 = 1
    omega2 = 2

    [bath]
    temperatures = 0, 1, 2, 5
    lambdas = 0.1

    [initial]
    r = 3
    n1 = 3
    n2 = 1

    [grid]
    t_min = 0
    t_max = 200
    n_points = 500
    spacing = log

    [output]
    format = csv
    precision = 12
    dps = 50

Exit status: 0 on success (rows with unphysical states are flagged and counted
on stderr), 1 on I/O failure, 2 on a bad config or recipe.
"""

from __future__ import annotations

import argparse
import configparser
import io
import math
import os
import sys
import tempfile
from collections import Counter
from dataclasses import dataclass, replace
from typing import Optional

from .analysis import SweepResult, SweepSpec, TimeGrid, run_sweep, scan_entanglement
from .measures import log_negativity
from .model import SqueezedThermalSpec, SystemParams, BathParams, squeezed_thermal_covariance

__all__ = ["RunConfig", "RECIPES", "load_config", "format_rows", "report_summary", "run", "main"]

HEADER = ("t", "T", "lambda", "E_N", "discord", "classical", "mutual_info",
          "nu_tilde_minus_hat", "physical", "epsilon_branch")
THREADS_ENV = "GAUSSCORR_THREADS"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    sweep: SweepSpec
    out: Optional[str] = None
    fmt: str = "csv"
    precision: int = 12
    recipe: str = "custom"


def _recipe_spec(grid: TimeGrid, temperatures, dps=None) -> SweepSpec:
    return SweepSpec(
        sys=SystemParams(omega1=1.0, omega2=2.0, mass=1.0),
        temperatures=temperatures,
        lambdas=(0.1,),
        initial=SqueezedThermalSpec(r=3.0, n1=3.0, n2=1.0),
        grid=grid,
        dps=dps,
    )


# every recipe shares r=3, n1=3, n2=1, lambda=0.1, omega=(1, 2), m=1
RECIPES = {
    "fig1": _recipe_spec(TimeGrid(0.0, 20.0, 201), (0.0, 0.5, 1.0, 2.0, 5.0)),
    "fig2": _recipe_spec(TimeGrid(0.0, 200.0, 500, "log"), (0.0, 1.0, 2.0, 5.0), dps=50),
    "fig3": _recipe_spec(TimeGrid(0.0, 200.0, 500, "log"), (0.0, 1.0, 2.0, 5.0), dps=50),
    "fig4": _recipe_spec(TimeGrid(0.0, 200.0, 500, "log"), (0.0, 1.0, 2.0, 5.0), dps=50),
}


def _floats(text):
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def load_config(text: Optional[str], recipe: Optional[str] = None) -> RunConfig:
    """Build a :class:`RunConfig` from INI text, layered over a recipe preset.

    Raises ``ConfigError`` for unknown recipes, missing keys or bad values.
    """
    recipe = recipe or "custom"
    if recipe != "custom" and recipe not in RECIPES:
        raise ConfigError(f"unknown recipe {recipe!r}; choose from {sorted(RECIPES)} or custom")
    parser = configparser.ConfigParser()
    try:
        if text:
            parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    if parser.has_option("output", "recipe") and recipe == "custom":
        return load_config(text, parser.get("output", "recipe"))

    base = RECIPES.get(recipe)
    if base is None and not text:
        raise ConfigError("a custom run needs --config")

    def get(section, key, cast, default=None):
        if parser.has_option(section, key):
            try:
                return cast(parser.get(section, key))
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from exc
        if default is None:
            raise ConfigError(f"missing [{section}] {key}")
        return default

    try:
        sys_ = SystemParams(
            omega1=get("system", "omega1", float, base and base.sys.omega1),
            omega2=get("system", "omega2", float, base and base.sys.omega2),
            mass=get("system", "mass", float, base.sys.mass if base else 1.0),
        )
        initial = SqueezedThermalSpec(
            r=get("initial", "r", float, base and base.initial.r),
            n1=get("initial", "n1", float, base.initial.n1 if base else 0.0),
            n2=get("initial", "n2", float, base.initial.n2 if base else 0.0),
        )
        grid = TimeGrid(
            t_min=get("grid", "t_min", float, base.grid.t_min if base else 0.0),
            t_max=get("grid", "t_max", float, base and base.grid.t_max),
            n_points=get("grid", "n_points", int, base and base.grid.n_points),
            spacing=get("grid", "spacing", str.strip, base.grid.spacing if base else "linear"),
            log_floor=get("grid", "log_floor", float, base.grid.log_floor if base else 1e-3),
        )
        dps = get("output", "dps", int, (base.dps or 0) if base else 0)
        sweep = SweepSpec(
            sys=sys_,
            temperatures=get("bath", "temperatures", _floats, base and base.temperatures),
            lambdas=get("bath", "lambdas", _floats, base and base.lambdas),
            initial=initial,
            grid=grid,
            dps=dps or None,
        )
        for lam in sweep.lambdas:
            BathParams(lam, 0.0)
        for temp in sweep.temperatures:
            BathParams(1.0, temp)
        fmt = get("output", "format", str.strip, "csv")
        precision = get("output", "precision", int, 12)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if fmt not in ("csv", "tsv"):
        raise ConfigError(f"format must be csv or tsv, got {fmt!r}")
    if not 1 <= precision <= 17:
        raise ConfigError("precision must be between 1 and 17")
    return RunConfig(sweep=sweep, fmt=fmt, precision=precision, recipe=recipe)


def _num(x: float, precision: int) -> str:
    if math.isnan(x):
        return "nan"
    # shortest repr of the value rounded to `precision` significant digits
    return repr(float(format(x, f".{precision}g")))


def format_rows(result: SweepResult, fmt: str = "csv", precision: int = 12) -> str:
    """Render a sweep as CSV or TSV text with LF line endings."""
    sep = "," if fmt == "csv" else "\t"
    out = io.StringIO()
    out.write(sep.join(HEADER) + "\n")
    for row in result.rows:
        rep = row.report
        fields = [_num(v, precision) for v in (
            row.t, row.temperature, row.lam, rep.log_negativity, rep.discord,
            rep.classical_corr, rep.mutual_info, rep.nu_tilde_minus_hat)]
        fields += ["true" if rep.physical else "false", str(rep.epsilon_branch)]
        out.write(sep.join(fields) + "\n")
    return out.getvalue()


def report_summary(result: SweepResult) -> str:
    """Death times per (lambda, T), peak discord and epsilon-branch usage."""
    spec = result.spec
    sigma0 = squeezed_thermal_covariance(spec.initial)
    lines = []
    if log_negativity(sigma0) <= 0:
        lines.append("no sudden death: initially separable")
    else:
        for lam in spec.lambdas:
            for temp in spec.temperatures:
                scan = scan_entanglement(sigma0, spec.sys, BathParams(lam, temp))
                if scan.death_time is None:
                    text = "no death before t_max"
                else:
                    text = f"{scan.death_time:.8f}"
                if scan.revivals:
                    text += f" ({len(scan.revivals)} re-entangled windows)"
                lines.append(f"death time lambda={lam:g} T={temp:g}: {text}")
    discords = [r.report.discord for r in result.rows if not math.isnan(r.report.discord)]
    if discords:
        lines.append(f"max discord: {max(discords):.12g}")
    counts = Counter(r.report.epsilon_branch for r in result.rows)
    total = sum(counts.values())
    names = {1: "first branch", 2: "second branch", 0: "tie", -1: "invalid"}
    for branch in (1, 2, 0, -1):
        if counts[branch]:
            share = 100.0 * counts[branch] / total
            lines.append(f"{names[branch]} of epsilon used at {share:.1f}% of points "
                         f"({counts[branch]}/{total})")
    return "\n".join(lines) + "\n"


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gausscorr-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(config: RunConfig, threads: int = 1, summary: bool = False,
        stdout=None, stderr=None) -> int:
    """Execute a run; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    result = run_sweep(config.sweep, threads=threads)
    text = format_rows(result, config.fmt, config.precision)
    try:
        if config.out:
            _write_atomic(config.out, text)
        else:
            stdout.write(text)
    except OSError as exc:
        stderr.write(f"error: cannot write output: {exc}\n")
        return 1
    bad = sum(1 for row in result.rows if not row.report.physical)
    if bad:
        stderr.write(f"warning: {bad} rows hold unphysical or invalid states\n")
    if summary:
        stderr.write(report_summary(result))
    return 0


def _build_parser():
    p = argparse.ArgumentParser(prog="gausscorr",
                                description="Two-mode Gaussian correlations in a thermal bath.")
    p.add_argument("--config", metavar="PATH", help="INI-style run configuration")
    p.add_argument("--recipe", metavar="NAME",
                   help="preset: fig1, fig2, fig3, fig4 or custom (default)")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "tsv"), help="output format")
    p.add_argument("--threads", type=int, default=1, metavar="N",
                   help=f"worker processes (overridden by ${THREADS_ENV})")
    p.add_argument("--summary", action="store_true",
                   help="print death times and branch statistics to stderr")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = None
        if args.config:
            try:
                with open(args.config) as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
        config = load_config(text, args.recipe)
        threads = args.threads
        if os.environ.get(THREADS_ENV):
            threads = int(os.environ[THREADS_ENV])
    except (ConfigError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    config = replace(config, out=args.out, fmt=args.format or config.fmt)
    return run(config, threads=max(1, threads), summary=args.summary)


if __name__ == "__main__":
    sys.exit(main())
