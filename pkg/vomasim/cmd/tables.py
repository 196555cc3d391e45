"""Rich tables printed by the ``check`` and ``report`` commands."""

import io
from typing import List

from rich import box
from rich.console import Console
from rich.table import Table

from ..data_structure.models import ValidationReport
from ..vomas.expr import VomasSpec

__all__ = ['check_table', 'report_table', 'render_plain', 'format_value']

summary_width = 200


def format_value(value) -> str:
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f'{value:.6g}'
    return str(value)


def check_table(report: ValidationReport, spec: VomasSpec) -> Table:
    """Per invariant: number of violations and the first violating tick."""
    table = Table(title=f'Check of run {report.run_id} ({report.status})', box=box.SIMPLE_HEAD)
    table.add_column('invariant')
    table.add_column('violations', justify='right')
    table.add_column('first tick', justify='right')
    for invariant in spec.invariants:
        ticks = [v.tick for v in report.violations if v.invariant == invariant.name]
        table.add_row(invariant.name, str(len(ticks)), format_value(min(ticks) if ticks else None))
    return table


def report_table(reports: List[ValidationReport]) -> Table:
    """One row per report, sorted by run id; one column per watch (last value)."""
    reports = sorted(reports, key=lambda report: report.run_id)
    watch_names = sorted({name for report in reports for name in report.watch_stats})
    table = Table(box=box.SIMPLE_HEAD)
    for column in ('run_id', 'model', 'status'):
        table.add_column(column)
    table.add_column('final tick', justify='right')
    table.add_column('violations', justify='right')
    for name in watch_names:
        table.add_column(name, justify='right')
    for report in reports:
        lasts = [report.watch_stats[name].last if name in report.watch_stats else None for name in watch_names]
        table.add_row(
            report.run_id,
            report.model,
            str(report.status),
            str(report.final_tick),
            str(len(report.violations)),
            *(format_value(last) for last in lasts),
        )
    return table


def render_plain(table: Table) -> str:
    """Text of a table without colors, at a fixed width, so reruns give identical bytes."""
    buffer = io.StringIO()
    console = Console(file=buffer, width=summary_width, color_system=None, force_terminal=False, legacy_windows=False)
    console.print(table)
    return buffer.getvalue()
