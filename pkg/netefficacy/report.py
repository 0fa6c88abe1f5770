"""
Command reports and their serialization.

Every command produces a :class:`Report`; :func:`emit` renders it as

- ``json``: the versioned schema documented in ``docs/pages/reports.rst``;
  keys sorted, two-space indentation, full precision, ``inf`` written as the
  string ``"inf"``. The output is byte-identical for identical inputs.
- ``csv``: the report's series (header + rows) when it has one, otherwise
  ``key,value`` rows of its outputs. Full precision.
- ``human``: aligned sections, numbers rounded to 6 significant digits.
"""
from __future__ import annotations

import csv
import dataclasses as dc
import enum
import io
import json
import math
from collections.abc import Mapping
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

import cloup

from netefficacy._util import format_number

REPORT_SCHEMA_VERSION = 1

FORMATS = ('human', 'json', 'csv')

HUMAN_WIDTH = 100
"""Fixed so that the human output doesn't depend on the terminal."""

_SPECIAL_FLOATS = {'inf': math.inf, '-inf': -math.inf, 'nan': math.nan}


@dc.dataclass(frozen=True)
class Series:
    header: tuple[str, ...]
    rows: tuple[tuple[Any, ...], ...]

    @classmethod
    def of(cls, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Series:
        return cls(tuple(header), tuple(tuple(row) for row in rows))


@dc.dataclass(frozen=True)
class Report:
    command: str
    inputs: Mapping[str, Any]
    outputs: Mapping[str, Any]
    diagnostics: Mapping[str, Any] = dc.field(default_factory=dict)
    series: Series | None = None
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict[str, Any]:
        return {
            'schema_version': self.schema_version,
            'command': self.command,
            'inputs': _jsonable(self.inputs),
            'outputs': _jsonable(self.outputs),
            'diagnostics': _jsonable(self.diagnostics),
            'series': None if self.series is None else {
                'header': list(self.series.header),
                'rows': _jsonable(self.series.rows),
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Report:
        series = data.get('series')
        return cls(
            command=data['command'],
            inputs=_restore(data['inputs']),
            outputs=_restore(data['outputs']),
            diagnostics=_restore(data.get('diagnostics', {})),
            series=None if series is None else Series.of(series['header'], _restore(series['rows'])),
            schema_version=data.get('schema_version', REPORT_SCHEMA_VERSION),
        )

    @classmethod
    def from_json(cls, payload: bytes | str) -> Report:
        """Inverse of ``emit(report, 'json')``: tuples come back as lists."""
        return cls.from_dict(json.loads(payload))


def _jsonable(value: Any) -> Any:
    if isinstance(value, enum.Enum):
        return _jsonable(value.value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    raise TypeError(f"values of type {type(value).__name__} can't be written in a report")


def _restore(value: Any) -> Any:
    if isinstance(value, str) and value in _SPECIAL_FLOATS:
        return _SPECIAL_FLOATS[value]
    if isinstance(value, dict):
        return {k: _restore(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_restore(v) for v in value]
    return value


def _emit_json(report: Report) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2, allow_nan=False, ensure_ascii=False) + '\n'


def _csv_cell(value: Any) -> Any:
    value = _jsonable(value)
    if isinstance(value, float):
        return repr(value)
    return value


def _emit_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    if report.series is not None:
        writer.writerow(report.series.header)
        writer.writerows([_csv_cell(v) for v in row] for row in report.series.rows)
    else:
        writer.writerow(['key', 'value'])
        for key in sorted(report.outputs):
            writer.writerow([key, _csv_cell(report.outputs[key])])
    return buffer.getvalue()


def _human(value: Any) -> str:
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, Fraction):
        return f'{value} ({format_number(float(value))})'
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, (list, tuple)):
        return ', '.join(_human(v) for v in value)
    if isinstance(value, Mapping):
        return ', '.join(f'{k}={_human(v)}' for k, v in value.items())
    return str(value)


def _write_table(formatter: cloup.HelpFormatter, series: Series) -> None:
    cells = [list(series.header)] + [[_human(v) for v in row] for row in series.rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(series.header))]
    indent = ' ' * formatter.current_indent
    for row in cells:
        line = '  '.join(cell.rjust(width) for cell, width in zip(row, widths))
        formatter.write(indent, line.rstrip(), '\n')


def _emit_human(report: Report) -> str:
    formatter = cloup.HelpFormatter(width=HUMAN_WIDTH, col1_max_width=40)
    formatter.write(f'netefficacy {report.command}\n')
    sections = [('Inputs', report.inputs), ('Outputs', report.outputs), ('Diagnostics', report.diagnostics)]
    for heading, values in sections:
        if not values:
            continue
        formatter.write('\n')
        formatter.write_heading(heading)
        with formatter.indentation():
            formatter.write_dl([(key, _human(value)) for key, value in values.items()])
    if report.series is not None:
        formatter.write('\n')
        formatter.write_heading('Series')
        with formatter.indentation():
            _write_table(formatter, report.series)
    return formatter.getvalue()


def emit(report: Report, fmt: str = 'human') -> bytes:
    """Render ``report`` in format ``fmt`` (one of :data:`FORMATS`) as UTF-8 bytes."""
    if fmt == 'json':
        text = _emit_json(report)
    elif fmt == 'csv':
        text = _emit_csv(report)
    elif fmt == 'human':
        text = _emit_human(report)
    else:
        raise ValueError(f'unknown format {fmt!r}; expected one of: {", ".join(FORMATS)}')
    return text.encode('utf-8')
