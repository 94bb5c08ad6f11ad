"""
Flat-file renderings of experiment results.

Tables are written as CSV with a header row or as JSON; records (single
results and reports) as JSON with sorted keys. Floats go out through repr,
which round-trips exactly, so equal runs give byte-identical files.
"""

import csv
import io
import json
import logging
import math

import numpy as np

from utils.errors import NumericalFailure

logger = logging.getLogger(__name__)


class Table:
    """Named columns of equal length, kept in grid order."""

    def __init__(self, columns, rows):
        self.columns = tuple(columns)
        self.rows = [tuple(float(v) for v in row) for row in rows]

    @classmethod
    def from_columns(cls, **columns):
        names = list(columns)
        data = [np.atleast_1d(np.asarray(columns[n], dtype=float)) for n in names]
        return cls(names, zip(*data))

    def column(self, name):
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows])

    def __len__(self):
        return len(self.rows)

    def check_finite(self):
        for row in self.rows:
            for name, value in zip(self.columns, row):
                if not math.isfinite(value):
                    raise NumericalFailure(f'non-finite value {value!r} in column {name}')
        return self

    def to_dict(self):
        return {'columns': list(self.columns), 'rows': [list(r) for r in self.rows]}


def _clean(value):
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def render_json(data):
    if isinstance(data, Table):
        data = data.to_dict()
    return json.dumps(_clean(data), indent=2, sort_keys=True, allow_nan=False) + '\n'


def render_csv(table):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([repr(v) for v in row])
    return buffer.getvalue()


def flatten(record, prefix=''):
    """Nested dicts to one level, keys joined with dots."""
    flat = {}
    for key, value in record.items():
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            flat.update(flatten(value, f'{name}.'))
        else:
            flat[name] = value
    return flat


def render_record_csv(record):
    """A record as two columns, name and value; nested sections become dotted names."""
    record = flatten(record)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(('name', 'value'))
    for key in sorted(record):
        value = _clean(record[key])
        if isinstance(value, list):
            value = ';'.join(str(v) for v in value)
        writer.writerow((key, repr(value) if isinstance(value, float) else value))
    return buffer.getvalue()


def render(data, fmt):
    if fmt == 'json':
        return render_json(data)
    if isinstance(data, Table):
        return render_csv(data)
    return render_record_csv(data)


def write_text(text, path):
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        fh.write(text)
    logger.info(f'Wrote {len(text)} characters to {path}')
