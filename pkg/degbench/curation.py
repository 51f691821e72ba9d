#!/usr/bin/env python
#
# Copyright 2026 The DegBench Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS-IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""CURATE stage: duplicates, correlated descriptors and one-hot encoding."""

import json
import logging

import numpy as np
import pandas as pd

from degbench import errors
from degbench import families
from degbench import schema
from degbench.common.error import DegBenchError

_logger = logging.getLogger(__name__)

DROP_ROW = 'drop-row'
DROP_COLUMN = 'drop-column'
ONE_HOT = 'one-hot'
NORMALIZE = 'normalize-target'

# Unit given to one-hot indicator columns; such columns are never screened.
INDICATOR_UNIT = 'indicator'


class CurationLog(object):
    """Record of every change curation made, in the order it was made.

    Entries are dicts with an 'action', a 'reason' and either a 'row'
    (1-based, as in the input file) or a 'column'. New filters add their
    own action names.
    """

    def __init__(self, entries=None):
        self.entries = list(entries or [])

    def record(self, action, reason, row=None, column=None):
        entry = {'action': action, 'reason': reason}
        if row is not None:
            entry['row'] = row
        if column is not None:
            entry['column'] = column
        _logger.info('%s %s: %s', action,
                     column if column is not None else 'row %s' % row, reason)
        self.entries.append(entry)

    def actions(self, action):
        return [entry for entry in self.entries if entry['action'] == action]

    def to_json(self):
        return json.dumps(self.entries, indent=2, sort_keys=True)

    def __len__(self):
        return len(self.entries)


def pearson(a, b):
    """Pearson correlation coefficient, or None if either vector is constant."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = a - a.mean()
    db = b - b.mean()
    norm = np.sqrt(np.sum(da * da) * np.sum(db * db))
    if norm == 0.0:
        return None
    return float(np.sum(da * db) / norm)


def _one_hot(table, log):
    columns = []
    data = {}
    for column in table.columns:
        values = table.frame[column.name]
        if column.role == schema.FEATURE and column.kind == schema.CATEGORICAL:
            levels = sorted(set(values.astype(str)))
            for level in levels:
                name = '%s=%s' % (column.name, level)
                data[name] = (values.astype(str) == level).astype(float)
                columns.append(schema.ColumnSpec(
                    name, schema.NUMERIC, INDICATOR_UNIT, schema.FEATURE))
            log.record(ONE_HOT, 'expanded into %d indicator columns' %
                       len(levels), column=column.name)
        else:
            data[column.name] = values
            columns.append(column)
    frame = pd.DataFrame(data, columns=[c.name for c in columns])
    return table.replace(columns=columns, frame=frame)


def _screened(table):
    """Numeric feature columns subject to the correlation filter."""
    return [column.name for column in table.columns
            if column.role == schema.FEATURE and
            column.kind == schema.NUMERIC and
            column.unit != INDICATOR_UNIT]


def _drop_correlated(table, corr_threshold, log):
    kept = []
    dropped = []
    for name in _screened(table):
        values = table.frame[name].to_numpy(dtype=float)
        for earlier in kept:
            r = pearson(table.frame[earlier].to_numpy(dtype=float), values)
            if r is not None and abs(r) >= corr_threshold:
                log.record(DROP_COLUMN,
                           '|r| = %.4f with earlier column %s' %
                           (abs(r), earlier), column=name)
                dropped.append(name)
                break
        else:
            kept.append(name)
    if not dropped:
        return table, False
    columns = [column for column in table.columns
               if column.name not in dropped]
    return (table.replace(columns=columns,
                          frame=table.frame[[c.name for c in columns]]),
            True)


def _drop_duplicates(table, row_numbers, log):
    duplicated = table.frame.duplicated(keep='first').to_numpy()
    if not duplicated.any():
        return table, row_numbers, False
    # Identify the surviving row each duplicate repeats for the log.
    first_seen = {}
    for position, key in enumerate(table.frame.itertuples(index=False,
                                                          name=None)):
        if duplicated[position]:
            log.record(DROP_ROW, 'exact duplicate of row %d' %
                       row_numbers[first_seen[key]],
                       row=row_numbers[position])
        else:
            first_seen.setdefault(key, position)
    keep = np.flatnonzero(~duplicated)
    return (table.replace(frame=table.frame.iloc[keep]),
            [row_numbers[i] for i in keep], True)


def curate(table, corr_threshold=families.DEFAULT_CORR_THRESHOLD, dedup=True):
    """Curates a raw table.

    Categorical features are one-hot encoded first. Then the correlation
    filter and exact-duplicate removal are applied in turn until neither
    changes the table. For a correlated pair the column declared earlier is
    kept. Indicator columns and the time column are not screened.

    Args:
      table: A DataTable from load_csv.
      corr_threshold: Absolute Pearson correlation that triggers a drop,
        in (0, 1].
      dedup: Whether to remove exact duplicate rows.

    Returns:
      A (DataTable, CurationLog) pair.

    Raises:
      DegBenchError: INVALID_ARGUMENT for a threshold outside (0, 1];
        TOO_FEW_ROWS when fewer than 2 rows remain; CONSTANT_TARGET when the
        target has zero variance.
    """
    if not 0.0 < corr_threshold <= 1.0:
        raise DegBenchError(errors.INVALID_ARGUMENT,
                            'corr_threshold must lie in (0, 1], got %g.' %
                            corr_threshold)
    log = CurationLog()
    curated = _one_hot(table, log)

    row_numbers = list(range(1, table.n_rows + 1))
    changed = True
    while changed:
        curated, dropped_columns = _drop_correlated(
            curated, corr_threshold, log)
        dropped_rows = False
        if dedup:
            curated, row_numbers, dropped_rows = _drop_duplicates(
                curated, row_numbers, log)
        changed = dropped_columns or dropped_rows

    if curated.n_rows < 2:
        raise DegBenchError(errors.TOO_FEW_ROWS,
                            'Curation left %d row(s); at least 2 are needed.'
                            % curated.n_rows)
    target = curated.target
    if np.all(target == target[0]):
        raise DegBenchError(errors.CONSTANT_TARGET,
                            'Target column "%s" is constant.' %
                            curated.target_column.name,
                            column=curated.target_column.name)
    return curated, log


def normalize_target(table, log=None):
    """Divides the target by each group's value at its earliest time.

    Tables without a group-id column are treated as a single group; tables
    without a time column use the first row of each group.

    Raises:
      DegBenchError: ZERO_INITIAL_TARGET when a group starts at zero.
    """
    frame = table.frame.copy()
    target_name = table.target_column.name
    target = table.target
    groups = table.group_ids
    if groups is None:
        groups = np.zeros(table.n_rows, dtype=int).astype(str)
    times = table.times
    normalized = target.copy()
    for group in sorted(set(groups)):
        rows = np.flatnonzero(groups == group)
        if times is None:
            first = rows[0]
        else:
            first = rows[np.argmin(times[rows])]
        initial = target[first]
        if initial == 0.0:
            raise DegBenchError(errors.ZERO_INITIAL_TARGET,
                                'Group %s has a zero initial target.' % group,
                                row=int(first) + 1, column=target_name)
        normalized[rows] = target[rows] / initial
        if log is not None:
            log.record(NORMALIZE, 'divided by initial value %g of group %s' %
                       (initial, group), column=target_name)
    frame[target_name] = normalized
    return table.replace(frame=frame)
