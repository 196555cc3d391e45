"""Command line of vomasim.

>>> vomasim --help
>>> vomasim run --model {model} [--spec {spec_file}] [--ticks {n}] [--seed {s}] [--out {dir}]
    [--full-state] [--frames {k}] [--param {k=v}]... [--config {file}] [--quiet] [--debug] [--log-path {file}]
>>> vomasim sweep --model {model} [--param {k=a..b:step}]... [--seeds {n}] [--jobs {n}] ...
>>> vomasim check --trace {trace_file} --spec {spec_file}
>>> vomasim report --out {dir}

Exit codes: 0 completed without violations, 1 usage error, 2 abort (model
failure, I/O, unreadable or stateless trace), 3 violations found.
"""

import sys
from pathlib import Path
from textwrap import dedent
from typing import Dict, List, Optional

import click
from click import Choice
from loguru import logger
from pydantic import ValidationError
from rich.console import Console
from typer import Option, Typer
from typing_extensions import Annotated

from ..data_structure.constants import RunStatus, check_suffix, report_suffix, summary_file
from ..data_structure.models import RunConfig, TraceOptions, ValidationReport
from ..engine import EngineError, ModelPanic, ModelRegistry, run_to_directory
from ..trace import TraceError, atomic_write_text, parse_report, read_trace, replay_check, serialize_report
from ..utils import load_params, parse_param_pairs, setup_logger
from ..vomas import SpecError, compile_spec
from .sweep import expand_points, run_sweep, summarize_sweep, sweep_configs, write_sweep_summary
from .tables import check_table, render_plain, report_table

__all__ = ['app', 'main', 'run_cli', 'exit_code']

EXIT_OK, EXIT_USAGE, EXIT_ABORT, EXIT_VIOLATIONS = 0, 1, 2, 3
app = Typer(pretty_exceptions_show_locals=False, no_args_is_help=True, add_completion=False)
stdout_console = Console(highlight=False)


def exit_code(report: ValidationReport) -> int:
    if report.status == RunStatus.aborted.value:
        return EXIT_ABORT
    if report.has_violations:
        return EXIT_VIOLATIONS
    return EXIT_OK


def _read_spec(spec: Optional[Path]) -> str:
    return spec.read_text(encoding='utf-8') if spec is not None else ''


def _resolve_params(config: Optional[Path], pairs: List[str]) -> Dict[str, str]:
    """Model defaults < ``--config`` file < ``--param`` pairs."""
    params = load_params(config) if config is not None else {}
    params.update(parse_param_pairs(pairs))
    return params


ModelOption = Annotated[
    str,
    Option('--model', '-m', case_sensitive=False, click_type=Choice(ModelRegistry.names()), help='model to simulate'),
]
SpecOption = Annotated[
    Optional[Path],
    Option('--spec', '-s', exists=True, file_okay=True, dir_okay=False, help='VOMAS spec file'),
]
TicksOption = Annotated[int, Option('--ticks', '-t', min=1, help='number of model steps')]
OutOption = Annotated[Path, Option('--out', '-o', file_okay=False, help='output directory')]
FullStateOption = Annotated[bool, Option('--full-state', help='record every agent each tick (needed by check)')]
FramesOption = Annotated[int, Option('--frames', min=0, help='write a frame every K ticks, 0 for none')]
ConfigOption = Annotated[
    Optional[Path],
    Option('--config', '-c', exists=True, file_okay=True, dir_okay=False, help='key=value parameter file'),
]
QuietOption = Annotated[bool, Option('--quiet', '-q', help='do not print console records')]
DebugOption = Annotated[bool, Option('--debug/--no-debug', help='log in debug mode and check world integrity')]
LogPathOption = Annotated[
    Optional[Path], Option('--log-path', dir_okay=False, help='also write the log to this file, replacing it')
]


@app.command()
def run(
    model: ModelOption,
    spec: SpecOption = None,
    ticks: TicksOption = 200,
    seed: Annotated[int, Option('--seed', min=0, max=2**64 - 1, help='seed of the run PRNG')] = 0,
    out: OutOption = Path('output'),
    full_state: FullStateOption = False,
    frames: FramesOption = 0,
    param: Annotated[List[str], Option('--param', '-p', help='model parameter k=v, repeatable')] = [],
    config: ConfigOption = None,
    quiet: QuietOption = False,
    debug: DebugOption = False,
    log_path: LogPathOption = None,
) -> int:
    """Run one simulation with its VOMAS overlay."""
    logger = setup_logger(level='DEBUG' if debug else 'INFO', log_path=log_path)
    logger.info(
        dedent(
            f"""\
            :rocket: Starting:
            Executing run with the following parameters:
            ---------------------------------------------------------
            [yellow]# experiment[/yellow]
            - model: {model}
            - spec: {spec}
            - ticks: {ticks}
            - seed: {seed}
            - params: {param} (config: {config})
            [yellow]# trace[/yellow]
            - out: {out}
            - full_state: {full_state}
            - frames: {frames}
            [yellow]# misc[/yellow]
            - quiet: {quiet}
            - debug: {debug}
            ---------------------------------------------------------"""
        )
    )
    try:
        run_config = RunConfig(
            model=model,
            params=_resolve_params(config, param),
            seed=seed,
            max_ticks=ticks,
            spec_source=_read_spec(spec),
            trace=TraceOptions(full_state=full_state, frame_period=frames),
            debug=debug,
        )
        report = run_to_directory(run_config, out, quiet=quiet)
    except (ValueError, ValidationError, SpecError, EngineError) as e:
        if isinstance(e, ModelPanic):
            logger.error(e.message)
            return EXIT_ABORT
        logger.error(getattr(e, 'message', str(e)))
        return EXIT_USAGE
    except (TraceError, OSError) as e:
        logger.error(getattr(e, 'message', str(e)))
        return EXIT_ABORT
    logger.info(f'Report: status={report.status} final_tick={report.final_tick} violations={len(report.violations)}')
    return exit_code(report)


@app.command()
def sweep(
    model: ModelOption,
    spec: SpecOption = None,
    ticks: TicksOption = 200,
    seeds: Annotated[int, Option('--seeds', min=1, help='run seeds 0..n-1 at every point')] = 1,
    out: OutOption = Path('output'),
    full_state: FullStateOption = False,
    frames: FramesOption = 0,
    param: Annotated[
        List[str], Option('--param', '-p', help='model parameter k=v or inclusive range k=a..b:step, repeatable')
    ] = [],
    config: ConfigOption = None,
    jobs: Annotated[Optional[int], Option('--jobs', '-j', min=1, help='worker processes, default one per CPU')] = None,
    quiet: QuietOption = False,
    debug: DebugOption = False,
    log_path: LogPathOption = None,
) -> int:
    """Run the cartesian product of parameter points and seeds."""
    logger = setup_logger(level='DEBUG' if debug else 'INFO', log_path=log_path)
    try:
        points = expand_points(param)
    except ValueError as e:
        logger.error(f'--param: {e}')
        return EXIT_USAGE
    logger.info(
        dedent(
            f"""\
            :rocket: Starting:
            Executing sweep with the following parameters:
            ---------------------------------------------------------
            - model: {model}
            - spec: {spec}
            - ticks: {ticks}
            - points: {len(points)} x seeds: {seeds}
            - out: {out}
            - jobs: {jobs}
            ---------------------------------------------------------"""
        )
    )
    try:
        base = RunConfig(
            model=model,
            params={},
            max_ticks=ticks,
            spec_source=_read_spec(spec),
            trace=TraceOptions(full_state=full_state, frame_period=frames),
            debug=debug,
        )
        compile_spec(base.spec_source)
        base_params = load_params(config) if config is not None else {}
        configs = sweep_configs(base, base_params, points, seeds)
    except (ValueError, ValidationError, SpecError, EngineError) as e:
        logger.error(getattr(e, 'message', str(e)))
        return EXIT_USAGE

    try:
        results = run_sweep(configs, out, jobs=jobs, quiet=quiet)
    except (EngineError, TraceError, OSError) as e:
        logger.error(getattr(e, 'message', str(e)))
        return EXIT_ABORT
    records = summarize_sweep(results)
    path = write_sweep_summary(records, out)
    reports = [report for _, report in results]
    with_violations = sum(1 for report in reports if report.has_violations)
    logger.info(f'Sweep done: {len(reports)} run(s), {with_violations} with violations, summary in "{path.as_posix()}"')
    if any(report.status == RunStatus.aborted.value for report in reports):
        return EXIT_ABORT
    return EXIT_VIOLATIONS if with_violations else EXIT_OK


@app.command()
def check(
    trace: Annotated[Path, Option('--trace', dir_okay=False, help='trace recorded with --full-state')],
    spec: Annotated[Path, Option('--spec', '-s', exists=True, file_okay=True, dir_okay=False, help='VOMAS spec file')],
    debug: DebugOption = False,
    log_path: LogPathOption = None,
) -> int:
    """Check a recorded trace against a spec offline."""
    logger = setup_logger(level='DEBUG' if debug else 'INFO', log_path=log_path)
    try:
        compiled = compile_spec(spec.read_text(encoding='utf-8'))
    except SpecError as e:
        logger.error(e.message)
        return EXIT_USAGE
    if not trace.is_file():
        logger.error(f'Trace not found: "{trace.as_posix()}"')
        return EXIT_ABORT
    try:
        report = replay_check(read_trace(trace), compiled, path=trace.as_posix())
        atomic_write_text(trace.with_name(f'{report.run_id}{check_suffix}'), serialize_report(report) + '\n')
    except TraceError as e:
        logger.error(e.message)
        return EXIT_ABORT
    stdout_console.print(check_table(report, compiled))
    return exit_code(report)


@app.command()
def report(
    out: Annotated[Path, Option('--out', '-o', file_okay=False, help='directory holding .report files')] = Path(
        'output'
    ),
    debug: DebugOption = False,
    log_path: LogPathOption = None,
) -> int:
    """Tabulate every run report of a directory and write the table to summary.txt."""
    logger = setup_logger(level='DEBUG' if debug else 'INFO', log_path=log_path)
    files = sorted(out.glob(f'*{report_suffix}')) if out.is_dir() else []
    if not files:
        logger.error(f'No {report_suffix} files in "{out.as_posix()}"')
        return EXIT_USAGE
    try:
        reports = [parse_report(file.read_text(encoding='utf-8')) for file in files]
    except (TraceError, OSError) as e:
        logger.error(getattr(e, 'message', str(e)))
        return EXIT_ABORT
    table = report_table(reports)
    stdout_console.print(table)
    atomic_write_text(out / summary_file, render_plain(table))
    logger.info(f'Summary of {len(reports)} run(s) written to "{(out / summary_file).as_posix()}"')
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line and return its exit code instead of exiting."""
    try:
        code = app(args=argv, prog_name='vomasim', standalone_mode=False)
    except click.exceptions.UsageError as e:
        setup_logger()
        logger.error(e.format_message())
        return EXIT_USAGE
    except (click.exceptions.Abort, click.exceptions.ClickException) as e:
        setup_logger()
        logger.error(str(e) or type(e).__name__)
        return EXIT_USAGE
    return code if isinstance(code, int) else EXIT_OK


def run_cli() -> None:
    sys.exit(main())
