"""Canonical line encoding of trace entries and reports.

One JSON object per line, keys sorted, no insignificant whitespace, unset
fields omitted. The same object always serializes to the same bytes.
"""

import json
from typing import Any, Dict

from pydantic import ValidationError

from ..data_structure.models import LogEntry, ValidationReport
from .exceptions import CorruptTrace

__all__ = ['canonical_json', 'serialize_entry', 'parse_entry', 'serialize_report', 'parse_report']


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(',', ':'), ensure_ascii=False, allow_nan=False)


def serialize_entry(entry: LogEntry) -> str:
    """Encode an entry as one line, without the trailing newline."""
    return canonical_json(entry.model_dump(mode='json', exclude_none=True))


def _load_line(line: str, line_number: int) -> Dict:
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as e:
        raise CorruptTrace(line_number, f'not a JSON object ({e.msg})') from None
    if not isinstance(payload, dict):
        raise CorruptTrace(line_number, 'not a JSON object')
    return payload


def parse_entry(line: str, line_number: int = 1) -> LogEntry:
    """Decode one trace line.

    Raises:
        CorruptTrace: if the line is not a valid entry.
    """
    payload = _load_line(line, line_number)
    try:
        return LogEntry.model_validate(payload)
    except ValidationError as e:
        error = e.errors()[0]
        where = '.'.join(str(loc) for loc in error['loc'])
        raise CorruptTrace(line_number, f'{where}: {error["msg"]}') from None


def serialize_report(report: ValidationReport) -> str:
    return canonical_json(report.model_dump(mode='json'))


def parse_report(text: str, line_number: int = 1) -> ValidationReport:
    payload = _load_line(text.strip(), line_number)
    try:
        return ValidationReport.model_validate(payload)
    except ValidationError as e:
        error = e.errors()[0]
        raise CorruptTrace(line_number, f'invalid report: {error["msg"]}') from None
