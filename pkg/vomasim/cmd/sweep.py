"""Parameter sweeps: range expansion, concurrent runs and the sweep summary."""

import itertools
import math
import re
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import psutil
from loguru import logger

from ..data_structure.constants import PathLike, RunStatus, sweep_summary_file
from ..data_structure.models import RunConfig, ValidationReport
from ..engine import config_run_id, run_to_directory
from ..trace.codec import canonical_json
from ..trace.writer import atomic_write_text
from ..utils import track

__all__ = ['parse_sweep_param', 'expand_points', 'sweep_configs', 'run_sweep', 'summarize_sweep', 'write_sweep_summary']

_NUMBER = r'-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?'
_RANGE_RE = re.compile(rf'^(?P<start>{_NUMBER})\.\.(?P<stop>{_NUMBER}):(?P<step>{_NUMBER})$')


def _is_int(text: str) -> bool:
    return re.fullmatch(r'-?\d+', text) is not None


def parse_sweep_param(pair: str) -> Tuple[str, List]:
    """Parse ``k=v`` or the inclusive range ``k=a..b:step``.

    Args:
        pair (str): one ``--param`` value.

    Returns:
        Tuple[str, List]: key and its values; a plain value is a one-element list of
            the raw string. Range values are ints when ``a``, ``b`` and ``step`` all are.

    Raises:
        ValueError: on a malformed pair or range.
    """
    key, sep, value = pair.partition('=')
    key, value = key.strip(), value.strip()
    if not sep or not key:
        raise ValueError(f'Invalid parameter "{pair}", expected key=value or key=a..b:step')
    if '..' not in value:
        return key, [value]
    match = _RANGE_RE.match(value)
    if match is None:
        raise ValueError(f'Invalid range "{pair}", expected key=a..b:step')
    start, stop, step = (float(match.group(name)) for name in ('start', 'stop', 'step'))
    if step <= 0 or stop < start:
        raise ValueError(f'Invalid range "{pair}": need a positive step and a <= b')
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    values = [round(start + i * step, 12) for i in range(count)]
    if all(_is_int(match.group(name)) for name in ('start', 'stop', 'step')):
        values = [int(v) for v in values]
    return key, values


def expand_points(pairs: Iterable[str]) -> List[Dict]:
    """Cartesian product of all ``--param`` values, in the order the keys were given."""
    axes: Dict[str, List] = {}
    for pair in pairs:
        key, values = parse_sweep_param(pair)
        axes[key] = values
    keys = list(axes)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(axes[key] for key in keys))]


def sweep_configs(
    base: RunConfig, base_params: Dict, points: List[Dict], seeds: int
) -> List[Tuple[Dict, RunConfig]]:
    """One run config per (point, seed); every config is validated before anything runs.

    Raises:
        ParameterError: if some point fails the model's parameter schema.
    """
    configs = []
    for point in points:
        for seed in range(seeds):
            config = base.model_copy(update={'params': {**base_params, **point}, 'seed': seed})
            config_run_id(config)
            configs.append((point, config))
    return configs


def _run_one(config_payload: Dict, out_dir: str) -> Dict:
    report = run_to_directory(RunConfig.model_validate(config_payload), out_dir, quiet=True)
    return report.model_dump(mode='json')


def run_sweep(
    configs: List[Tuple[Dict, RunConfig]], out_dir: PathLike, jobs: Optional[int] = None, quiet: bool = False
) -> List[Tuple[Dict, ValidationReport]]:
    """Run every config; ``jobs`` worker processes (default: one per CPU), in-process when 1.

    Results are keyed by point, never by completion order.
    """
    jobs = jobs or psutil.cpu_count() or 1
    out_dir = Path(out_dir)
    results: List[Optional[Tuple[Dict, ValidationReport]]] = [None] * len(configs)
    logger.info(f'Sweep: {len(configs)} run(s) with {jobs} job(s) into "{out_dir.as_posix()}"')
    if jobs == 1:
        for index, (point, config) in enumerate(track(configs, description='Sweeping...', disable=quiet)):
            results[index] = (point, run_to_directory(config, out_dir, quiet=True))
        return results

    with ProcessPoolExecutor(max_workers=jobs) as executor:
        futures = {
            executor.submit(_run_one, config.model_dump(mode='json'), str(out_dir)): index
            for index, (_, config) in enumerate(configs)
        }
        for future in track(as_completed(futures), description='Sweeping...', total=len(futures), disable=quiet):
            index = futures[future]
            results[index] = (configs[index][0], ValidationReport.model_validate(future.result()))
    return results


def _number(value) -> Optional[float]:
    if value is None:
        return None
    return float(value)


def summarize_sweep(results: List[Tuple[Dict, ValidationReport]]) -> List[Dict]:
    """One record per parameter point, sorted by the point's canonical encoding.

    Each record holds run and violation counts and, per watch, the mean of the
    runs' last values and the extreme min and max.
    """
    grouped: Dict[str, Tuple[Dict, List[ValidationReport]]] = {}
    for point, report in results:
        key = canonical_json(point)
        grouped.setdefault(key, (point, []))[1].append(report)

    records = []
    for key in sorted(grouped):
        point, reports = grouped[key]
        watch_names = sorted({name for report in reports for name in report.watch_stats})
        watches = {}
        for name in watch_names:
            stats = [report.watch_stats[name] for report in reports if name in report.watch_stats]
            lasts = [_number(s.last) for s in stats if s.last is not None]
            mins = [_number(s.min) for s in stats if s.min is not None]
            maxs = [_number(s.max) for s in stats if s.max is not None]
            watches[name] = {
                'mean_last': math.fsum(lasts) / len(lasts) if lasts else None,
                'min': min(mins) if mins else None,
                'max': max(maxs) if maxs else None,
            }
        records.append(
            {
                'point': point,
                'runs': len(reports),
                'runs_with_violations': sum(1 for report in reports if report.has_violations),
                'violations': sum(len(report.violations) for report in reports),
                'halted': sum(1 for report in reports if report.status == RunStatus.halted.value),
                'aborted': sum(1 for report in reports if report.status == RunStatus.aborted.value),
                'watches': watches,
            }
        )
    return records


def write_sweep_summary(records: List[Dict], out_dir: PathLike) -> Path:
    path = Path(out_dir) / sweep_summary_file
    atomic_write_text(path, ''.join(canonical_json(record) + '\n' for record in records))
    return path
