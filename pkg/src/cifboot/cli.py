"""Command-line interface for cifboot."""

import functools
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from pathlib import Path

import click
import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from . import __version__
from .config import CifbootConfig, load_config
from .errors import CalibrationError, DataValidationError, InadmissibleIntervalError
from .log import configure_logging, get_logger
from .output import OutputWriter, run_metadata
from .types import Adjust, BandType, Cohort, SchemeKind, StepFunction, TestKind, Transform

logger = get_logger(__name__)

console = Console()
err_console = Console(stderr=True)

EXIT_INPUT = 2
EXIT_INADMISSIBLE = 3

FULL_N_LIST = [50, 60, 70, 80, 90, 100, 200, 300, 636]
FULL_SMALL_NSIM = 10_000

SCHEME_CHOICE = click.Choice([k.value for k in SchemeKind])
BAND_CHOICE = click.Choice([b.value for b in BandType])
TRANSFORM_CHOICE = click.Choice([t.value for t in Transform])
ADJUST_CHOICE = click.Choice([a.value for a in Adjust])


@contextmanager
def handle_errors(verbose: bool = False) -> Iterator[None]:
    """Map cifboot errors onto exit codes with a message on stderr."""
    try:
        yield
    except InadmissibleIntervalError as e:
        err_console.print(f"[red]Inadmissible interval:[/red] {e}")
        err_console.print("Shrink the interval so that F1_hat lies in (0, 1) and subjects remain at risk at t2.")
        raise SystemExit(EXIT_INADMISSIBLE) from e
    except (DataValidationError, CalibrationError, FileNotFoundError, ValidationError, ValueError) as e:
        err_console.print(f"[red]Error:[/red] {e}")
        if verbose:
            err_console.print_exception()
        raise SystemExit(EXIT_INPUT) from e


def _override(section: BaseModel, **overrides) -> BaseModel:
    """Copy of a config section with the non-None overrides applied and validated."""
    data = section.model_dump()
    data.update({k: v for k, v in overrides.items() if v is not None})
    return type(section)(**data)


def create_config(ctx: click.Context) -> CifbootConfig:
    """Create CifbootConfig from the config file and CLI overrides."""
    params = ctx.params
    config_path = params.get("config")
    if config_path and not Path(config_path).exists():
        raise FileNotFoundError(f"config file not found: {config_path}")
    config = load_config(Path(config_path) if config_path else None)

    return config.model_copy(
        update={
            "bootstrap": _override(
                config.bootstrap,
                scheme=params.get("scheme"),
                reps=params.get("reps"),
                seed=params.get("seed"),
                threads=params.get("threads"),
                adjust=params.get("adjust"),
            ),
            "band": _override(
                config.band,
                band_type=params.get("band_type"),
                transform=params.get("transform"),
                alpha=params.get("alpha"),
                interval=params.get("interval"),
            ),
            "output": _override(
                config.output,
                directory=params.get("output"),
                format=params.get("fmt"),
            ),
            "verbose": params.get("verbose") or config.verbose,
        }
    )


def _writer(ctx: click.Context, config: CifbootConfig) -> OutputWriter:
    # Without -o results go to stdout, so pipelines can capture them.
    directory = config.output.directory if ctx.params.get("output") else None
    return OutputWriter(directory, config.output.format)


def _emit(outputs: list) -> None:
    for output in outputs:
        if isinstance(output, Path):
            console.print(f"[green]Wrote[/green] {output}")
        else:
            click.echo(output, nl=False)


def _flags(ctx: click.Context, config: CifbootConfig, *sections: str) -> dict:
    """Resolved settings of a run for its metadata block."""
    flags: dict = {"command_line": {k: v for k, v in ctx.params.items() if k not in ("output", "verbose")}}
    for section in sections:
        flags[section] = getattr(config, section).model_dump(mode="json")
    return flags


def _read_cohort(path: str, config: CifbootConfig) -> Cohort:
    from .data import ingest_csv

    return ingest_csv(path, config.csv)


def _parse_list(kind: Callable) -> Callable:
    def callback(ctx: click.Context, param: click.Parameter, value: str | None):
        if value is None:
            return None
        try:
            return [kind(item.strip()) for item in value.split(",") if item.strip()]
        except ValueError as e:
            raise click.BadParameter(str(e)) from e

    return callback


def common_options(func: Callable) -> Callable:
    """Options shared by every command."""

    @click.option("--config", type=click.Path(), default=None, help="YAML config file")
    @click.option("-o", "--output", type=click.Path(), default=None, help="Output directory (default: stdout)")
    @click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None, help="Table format")
    @click.option("-v", "--verbose", is_flag=True, help="Verbose output")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def bootstrap_options(func: Callable) -> Callable:
    """Resampling options of stochastic commands."""

    @click.option("--scheme", type=SCHEME_CHOICE, default=None, help="Multiplier scheme")
    @click.option("--reps", type=click.IntRange(min=1), default=None, help="Bootstrap replicates B")
    @click.option("--seed", type=click.IntRange(min=0), default=None, help="Master seed (default: $CIFBOOT_SEED)")
    @click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker threads")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def band_options(func: Callable) -> Callable:
    """Level, weight and transformation of bands."""

    @click.option("--type", "band_type", type=BAND_CHOICE, default=None, help="Band type: hw or ep")
    @click.option("--transform", type=TRANSFORM_CHOICE, default=None, help="CIF transformation")
    @click.option("--alpha", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=None, help="Level")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


interval_option = click.option(
    "--interval", type=(float, float), default=None, help="Time interval T1 T2"
)


@click.group()
@click.version_option(version=__version__)
def main():
    """cifboot - Multiplier bootstrap inference for competing-risks cumulative incidence."""
    pass


@main.command()
@click.argument("input", type=str)
@common_options
@click.pass_context
def estimate(ctx: click.Context, input: str, **kwargs):
    """Kaplan-Meier, Nelson-Aalen and Aalen-Johansen estimates.

    Writes one table per estimator, evaluated at the event times.
    """
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .data import break_ties, build_risk_table
        from .estimators import aalen_johansen, kaplan_meier, nelson_aalen

        cohort = _read_cohort(input, config)
        prepared = break_ties(cohort)
        rt = build_risk_table(prepared)
        grid = rt.event_times

        estimators: dict[str, StepFunction] = {
            "km": kaplan_meier(rt),
            "na1": nelson_aalen(rt, 1),
            "na2": nelson_aalen(rt, 2),
            "aj1": aalen_johansen(rt, 1),
            "aj2": aalen_johansen(rt, 2),
        }
        tables = {name: pd.DataFrame({"time": grid, name: np.asarray(f(grid))}) for name, f in estimators.items()}
        metadata = run_metadata("estimate", _flags(ctx, config, "csv"))
        summary = {
            "n": cohort.n,
            "events": cohort.event_count,
            "ties_broken": cohort.has_ties,
            "n_grid": int(grid.size),
        }
        _emit(_writer(ctx, config).write_tables(Path(input).stem + "_estimates", tables, metadata, summary))


@main.command()
@click.argument("input", type=str)
@interval_option
@band_options
@bootstrap_options
@common_options
@click.pass_context
def band(ctx: click.Context, input: str, **kwargs):
    """Simultaneous confidence band for the cause-1 CIF."""
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .inference import confidence_band

        cohort = _read_cohort(input, config)
        boot, cfg = config.bootstrap, config.band
        result = confidence_band(
            cohort, cfg.interval, boot.scheme, cfg.band_type, boot.reps, cfg.alpha, boot.seed,
            cfg.transform, threads=boot.threads,
        )
        metadata = run_metadata("band", _flags(ctx, config, "bootstrap", "band"), seed=boot.seed)
        outputs = _writer(ctx, config).write_tables(
            f"{Path(input).stem}_band_{cfg.band_type.value}", {"band": result.to_frame()}, metadata, result.summary()
        )
        _emit(outputs)


@main.command()
@click.argument("input", type=str)
@click.option("--at", "times", type=float, multiple=True, required=True, help="Time point (repeatable)")
@band_options
@bootstrap_options
@common_options
@click.pass_context
def ci(ctx: click.Context, input: str, times: tuple[float, ...], **kwargs):
    """Pointwise confidence intervals for F1 at given times."""
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .inference import pointwise_ci

        cohort = _read_cohort(input, config)
        boot, cfg = config.bootstrap, config.band
        rows = [
            pointwise_ci(
                cohort, s, boot.scheme, boot.reps, cfg.alpha, boot.seed, cfg.band_type, cfg.transform,
                threads=boot.threads,
            ).to_dict()
            for s in times
        ]
        table = pd.DataFrame(rows)[["time", "estimate", "lower", "upper", "quantile_q"]]
        metadata = run_metadata("ci", _flags(ctx, config, "bootstrap", "band"), seed=boot.seed)
        _emit(_writer(ctx, config).write_tables(f"{Path(input).stem}_ci", {"ci": table}, metadata))


@main.command()
@click.argument("input", type=str)
@click.option("--reference", type=str, required=True, help="CSV with columns (time, value) of the reference CIF")
@interval_option
@band_options
@bootstrap_options
@common_options
@click.pass_context
def test1(ctx: click.Context, input: str, reference: str, **kwargs):
    """One-sample test of a reference CIF by band containment."""
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .inference import one_sample_ks

        cohort = _read_cohort(input, config)
        if not Path(reference).is_file():
            raise FileNotFoundError(f"reference file not found: {reference}")
        f_ref = StepFunction.from_frame(pd.read_csv(reference, comment="#"))

        boot, cfg = config.bootstrap, config.band
        result = one_sample_ks(
            cohort, f_ref, cfg.interval, boot.scheme, boot.reps, cfg.alpha, boot.seed,
            cfg.band_type, cfg.transform, threads=boot.threads,
        )
        metadata = run_metadata("test1", _flags(ctx, config, "bootstrap", "band"), seed=boot.seed)
        _emit([_writer(ctx, config).write_document(f"{Path(input).stem}_test1", {"result": result.to_dict()}, metadata)])


@main.command()
@click.argument("input", type=str)
@click.option("--other", type=str, default=None, help="Second sample; default splits INPUT by its group column")
@click.option(
    "--kind", "kinds", type=click.Choice(["ks", "cvm"]), multiple=True, default=("ks", "cvm"),
    help="Test statistic (repeatable)",
)
@click.option("--adjust", type=ADJUST_CHOICE, default=None, help="Conservative weight adjustment")
@click.option("--alpha", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=None, help="Level")
@interval_option
@bootstrap_options
@common_options
@click.pass_context
def test2(ctx: click.Context, input: str, other: str | None, kinds: tuple[str, ...], **kwargs):
    """Two-sample KS / CvM tests of equal cause-1 CIFs.

    The decision is reported in the output; the exit code is 0 either way.
    """
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .inference import two_sample_tests

        cohort = _read_cohort(input, config)
        if other is not None:
            cohort1, cohort2 = cohort, _read_cohort(other, config)
        else:
            groups = cohort.split_by_group()
            if set(groups) != {1, 2}:
                raise DataValidationError(
                    f"{input}: need groups 1 and 2 in column '{config.csv.group_column}' or --other"
                )
            cohort1, cohort2 = groups[1], groups[2]

        boot, cfg = config.bootstrap, config.band
        results = two_sample_tests(
            cohort1, cohort2, cfg.interval, boot.scheme, boot.reps, cfg.alpha, boot.seed,
            [TestKind(k) for k in dict.fromkeys(kinds)], None, boot.adjust, threads=boot.threads,
        )
        metadata = run_metadata("test2", _flags(ctx, config, "bootstrap", "band"), seed=boot.seed)
        document = {"results": {kind.value: result.to_dict() for kind, result in results.items()}}
        _emit([_writer(ctx, config).write_document(f"{Path(input).stem}_test2", document, metadata)])


@main.command()
@click.argument("input", type=str)
@click.option("--scheme", "schemes", type=SCHEME_CHOICE, multiple=True, help="Scheme (repeatable; default all)")
@common_options
@click.pass_context
def diagnose(ctx: click.Context, input: str, schemes: tuple[str, ...], **kwargs):
    """Finite-sample checks of the multiplier moment conditions."""
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .data import break_ties, build_risk_table
        from .multipliers import create_default_registry, diagnose_conditions

        cohort = break_ties(_read_cohort(input, config))
        rt = build_risk_table(cohort)
        registry = create_default_registry()
        kinds = [SchemeKind(s) for s in schemes] if schemes else registry.list_supported()
        reports = [diagnose_conditions(registry.get(kind), rt, cohort, config.diagnostics) for kind in kinds]

        metadata = run_metadata("diagnose", _flags(ctx, config, "diagnostics"))
        outputs = [
            _writer(ctx, config).write_document(
                f"{Path(input).stem}_diagnose", {"reports": [r.to_dict() for r in reports]}, metadata
            )
        ]
        if ctx.params.get("output"):
            table = Table(title="Multiplier diagnostics")
            for column in ("scheme", "max |mu| sqrt(n)", "max |var - 1|", "max E[D^4]/n", "max share", "flags"):
                table.add_column(column)
            for r in reports:
                table.add_row(
                    r.scheme, f"{r.scaled_mean:.4g}", f"{r.variance_gap:.4g}", f"{r.scaled_fourth:.4g}",
                    f"{r.variance_share:.4g}", ", ".join(r.flags) or "-",
                )
            console.print(table)
        _emit(outputs)


@main.group()
def simulate():
    """Monte Carlo studies on calibrated constant-hazard data."""
    pass


def simulation_options(func: Callable) -> Callable:
    """Data generating process options shared by simulation commands."""

    @click.option("--target-mix", type=(float, float, float), default=None, help="Type-1 / type-2 / censored %")
    @click.option("--admin-end", type=float, default=None, help="Administrative censoring time")
    @click.option("--at-risk-end", type=float, default=None, help="Fraction at risk at the administrative end")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def _study_progress() -> Progress:
    """Progress bar for Monte Carlo studies, on stderr so stdout stays parseable."""
    return Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
    )


def _calibrated_spec(ctx: click.Context, config: CifbootConfig):
    from .simulation import calibrate_rates

    sim = _override(
        config.simulation,
        target_mix=ctx.params.get("target_mix"),
        admin_end=ctx.params.get("admin_end"),
        at_risk_end=ctx.params.get("at_risk_end"),
    )
    return sim, calibrate_rates(sim.target_mix, sim.admin_end, sim.at_risk_end, seed=config.bootstrap.seed)


@simulate.command()
@click.option("--n-list", callback=_parse_list(int), default=None, help="Comma-separated cohort sizes")
@click.option("--schemes", callback=_parse_list(SchemeKind), default=None, help="Comma-separated schemes")
@click.option("--bands", callback=_parse_list(BandType), default=None, help="Comma-separated band types")
@click.option("--nsim", type=click.IntRange(min=1), default=None, help="Simulation runs per cohort size")
@click.option("--full", is_flag=True, help="Full n grid, 10000 runs for n <= 100")
@click.option("--transform", type=TRANSFORM_CHOICE, default=None, help="CIF transformation")
@click.option("--alpha", type=click.FloatRange(0, 1, min_open=True), default=None, help="Level")
@interval_option
@simulation_options
@bootstrap_options
@common_options
@click.pass_context
def coverage(ctx: click.Context, n_list, schemes, bands, nsim, full: bool, **kwargs):
    """Coverage of simultaneous bands for the true CIF."""
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .simulation import coverage_study

        sim, spec = _calibrated_spec(ctx, config)
        boot, cfg = config.bootstrap, config.band
        sizes = FULL_N_LIST if full else (n_list or sim.n_list)
        runs = nsim or sim.nsim
        kinds = schemes or list(SchemeKind)
        band_types = bands or list(BandType)

        rows, mixes = [], {}
        with _study_progress() as progress:
            for n in sizes:
                n_runs = max(runs, FULL_SMALL_NSIM) if full and n <= 100 else runs
                task = progress.add_task(f"Coverage n={n}", total=n_runs)
                report = coverage_study(
                    spec, [n], kinds, band_types, n_runs, boot.reps, cfg.interval, cfg.alpha, boot.seed,
                    transform=cfg.transform, threads=boot.threads,
                    on_run=lambda task=task: progress.advance(task),
                )
                rows.extend(report.rows)
                mixes.update(report.event_mix)

        metadata = run_metadata("simulate coverage", _flags(ctx, config, "bootstrap", "band", "simulation"), boot.seed)
        summary = {"spec": spec.model_dump(exclude={"n", "seed"}), "event_mix": {str(n): list(m) for n, m in mixes.items()}}
        _emit(_writer(ctx, config).write_tables("coverage", {"coverage": pd.DataFrame(rows)}, metadata, summary))


@simulate.command()
@click.option("--n1", type=click.IntRange(min=1), default=200, help="Size of group 1")
@click.option("--n2", type=click.IntRange(min=1), default=200, help="Size of group 2")
@click.option("--kinds", callback=_parse_list(TestKind), default=None, help="Comma-separated tests (ks,cvm)")
@click.option("--nsim", type=click.IntRange(min=1), default=None, help="Simulation runs per hypothesis")
@click.option("--alt-factor", type=click.FloatRange(min=0, min_open=True), default=2.0, help="hazard1 multiplier of the alternative")
@click.option("--adjust", type=ADJUST_CHOICE, default=None, help="Conservative weight adjustment")
@click.option("--alpha", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=None, help="Level")
@interval_option
@simulation_options
@bootstrap_options
@common_options
@click.pass_context
def power(ctx: click.Context, n1: int, n2: int, kinds, nsim, alt_factor: float, **kwargs):
    """Size and power of the two-sample tests."""
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .simulation import size_power_study

        sim, spec_null = _calibrated_spec(ctx, config)
        spec_alt = spec_null.model_copy(update={"hazard1": spec_null.hazard1 * alt_factor})
        boot, cfg = config.bootstrap, config.band
        runs = nsim or sim.nsim
        with _study_progress() as progress:
            task = progress.add_task("Size and power", total=2 * runs)
            report = size_power_study(
                spec_null, spec_alt, n1, n2, kinds or list(TestKind), runs, boot.reps, cfg.alpha, boot.seed,
                scheme=boot.scheme, interval=cfg.interval, adjust=boot.adjust, threads=boot.threads,
                on_run=lambda: progress.advance(task),
            )
        metadata = run_metadata("simulate power", _flags(ctx, config, "bootstrap", "band", "simulation"), boot.seed)
        _emit(_writer(ctx, config).write_tables("power", {"power": report.to_frame()}, metadata, report.parameters))


@simulate.command()
@click.option("--n", "size", type=click.IntRange(min=1), default=50_000, help="Cohort size of the empirical check")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Master seed (default: $CIFBOOT_SEED)")
@simulation_options
@common_options
@click.pass_context
def mix(ctx: click.Context, size: int, **kwargs):
    """Calibrated rates with expected and simulated event mix."""
    with handle_errors(ctx.params["verbose"]):
        config = create_config(ctx)
        configure_logging(config.verbose)

        from .data import event_mix
        from .simulation import expected_mix, generate_cohort

        sim, spec = _calibrated_spec(ctx, config)
        cohort = generate_cohort(spec.with_size(size))
        table = pd.DataFrame(
            {
                "observation": ["type1", "type2", "censored"],
                "target": list(sim.target_mix),
                "expected": list(expected_mix(spec)),
                "simulated": list(event_mix(cohort)),
            }
        )
        metadata = run_metadata("simulate mix", _flags(ctx, config, "simulation"), config.bootstrap.seed)
        summary = {"spec": spec.model_dump(exclude={"n", "seed"}), "n": size}
        _emit(_writer(ctx, config).write_tables("mix", {"mix": table}, metadata, summary))


if __name__ == "__main__":
    main()
