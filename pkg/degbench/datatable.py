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

"""Tabular degradation dataset and CSV ingestion."""

import os

import numpy as np
import pandas as pd

from degbench import errors
from degbench import schema
from degbench.common.error import DegBenchError


class DataTable(object):
    """A dataset: declared columns plus their values, one row per measurement.

    The group-id column holds device labels as text. Numeric columns hold
    floats. Categorical feature columns hold text until curation replaces
    them with one-hot indicator columns.

    Attributes:
      columns: Ordered list of schema.ColumnSpec, matching frame's columns.
      frame: pandas.DataFrame with a 0..n-1 index.
    """

    def __init__(self, columns, frame):
        schema.validate_schema(columns)
        self.columns = list(columns)
        self.frame = frame.reset_index(drop=True)

    @property
    def n_rows(self):
        return len(self.frame)

    @property
    def target_column(self):
        return schema.find_role(self.columns, schema.TARGET)

    @property
    def group_column(self):
        return schema.find_role(self.columns, schema.GROUP)

    @property
    def time_column(self):
        return schema.find_role(self.columns, schema.TIME)

    @property
    def feature_names(self):
        """Names of the model inputs: feature columns plus the time column."""
        return [column.name for column in self.columns
                if column.role in (schema.FEATURE, schema.TIME)]

    @property
    def features(self):
        """The n x m float matrix of model inputs, in feature_names order.

        Raises:
          DegBenchError: INVALID_SCHEMA while a categorical feature has not
            been one-hot encoded yet.
        """
        for column in self.columns:
            if (column.role == schema.FEATURE and
                    column.kind == schema.CATEGORICAL):
                raise DegBenchError(
                    errors.INVALID_SCHEMA,
                    'Categorical column "%s" must be one-hot encoded by '
                    'curation before it is used as a model input.' %
                    column.name, column=column.name)
        return self.frame[self.feature_names].to_numpy(dtype=float)

    @property
    def target(self):
        return self.frame[self.target_column.name].to_numpy(dtype=float)

    @property
    def times(self):
        column = self.time_column
        if column is None:
            return None
        return self.frame[column.name].to_numpy(dtype=float)

    @property
    def group_ids(self):
        column = self.group_column
        if column is None:
            return None
        return self.frame[column.name].astype(str).to_numpy()

    def replace(self, columns=None, frame=None):
        """Returns a new table sharing nothing mutable with this one."""
        return DataTable(list(self.columns if columns is None else columns),
                         (self.frame if frame is None else frame).copy())

    def __repr__(self):
        return 'DataTable(%d rows, %d columns)' % (self.n_rows,
                                                   len(self.columns))


def _first_bad(mask):
    positions = np.flatnonzero(np.asarray(mask))
    if len(positions):
        return int(positions[0])
    return None


def load_csv(path, columns):
    """Reads a measurement CSV according to its schema.

    Args:
      path: Path of a comma-separated UTF-8 file with a header row.
      columns: Sequence of schema.ColumnSpec describing the file.

    Returns:
      A raw (uncurated) DataTable with rows in file order.

    Raises:
      DegBenchError: FILE_NOT_FOUND, MALFORMED_CSV, HEADER_MISMATCH,
        EMPTY_BODY, MISSING_VALUE or NON_NUMERIC_CELL. Cell errors carry the
        1-based data row and the column name.
    """
    schema.validate_schema(columns)
    if not os.path.isfile(path):
        raise DegBenchError(errors.FILE_NOT_FOUND, 'File not found: %s' % path)

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                            encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise DegBenchError(errors.EMPTY_BODY,
                            'File %s has no header row.' % path)
    except (pd.errors.ParserError, UnicodeDecodeError) as err:
        raise DegBenchError(errors.MALFORMED_CSV,
                            'Cannot parse %s: %s' % (path, err))

    header = [str(name).strip() for name in frame.columns]
    expected = [column.name for column in columns]
    if sorted(header) != sorted(expected):
        missing = [name for name in expected if name not in header]
        unexpected = [name for name in header if name not in expected]
        raise DegBenchError(
            errors.HEADER_MISMATCH,
            'Header of %s does not match the schema (missing: %s; '
            'unexpected: %s).' % (path, ', '.join(missing) or 'none',
                                  ', '.join(unexpected) or 'none'),
            row=0, details={'missing': missing, 'unexpected': unexpected})
    frame.columns = header
    frame = frame[expected]

    if frame.empty:
        raise DegBenchError(errors.EMPTY_BODY,
                            'File %s has a header but no data rows.' % path)

    # Report the first bad cell in reading order: row first, then column.
    problems = []
    parsed = {}
    for index, column in enumerate(columns):
        values = frame[column.name].str.strip()
        blank = _first_bad(values == '')
        if blank is not None:
            problems.append((blank, index, errors.MISSING_VALUE,
                             'missing value'))
        if column.kind == schema.NUMERIC:
            numbers = pd.to_numeric(values, errors='coerce').astype(float)
            bad = _first_bad((values != '') & ~np.isfinite(numbers))
            if bad is not None:
                problems.append((bad, index, errors.NON_NUMERIC_CELL,
                                 '"%s" is not a finite number' %
                                 values.iloc[bad]))
            parsed[column.name] = numbers
        else:
            parsed[column.name] = values

    if problems:
        row, index, code, what = min(problems)
        name = columns[index].name
        raise DegBenchError(code, 'Row %d, column %s: %s.' %
                            (row + 1, name, what), row=row + 1, column=name)

    return DataTable(columns, pd.DataFrame(parsed, columns=expected))


def write_csv(table, path):
    """Writes a table as CSV; equal tables give byte-identical files."""
    table.frame.to_csv(path, index=False, encoding='utf-8')


def take_rows(table, indices):
    """Returns the sub-table with the given row indices, in that order."""
    return table.replace(frame=table.frame.iloc[np.asarray(indices, dtype=int)])


def restrict_time(table, cutoff):
    """Returns the rows measured at or before cutoff.

    Raises:
      DegBenchError: INVALID_SCHEMA when the table has no time column,
        EMPTY_CUTOFF_WINDOW when no row qualifies.
    """
    times = table.times
    if times is None:
        raise DegBenchError(errors.INVALID_SCHEMA,
                            'Time cutoffs need a time column in the schema.')
    keep = np.flatnonzero(times <= cutoff)
    if not len(keep):
        raise DegBenchError(errors.EMPTY_CUTOFF_WINDOW,
                            'Empty cutoff window: no measurement at or '
                            'before day %g (earliest is day %g).' %
                            (cutoff, times.min()),
                            details={'cutoff': cutoff})
    return take_rows(table, keep)


def select_features(table, names):
    """Returns the table restricted to the given feature columns.

    Non-feature columns (target, time, group-id) are always kept.
    """
    wanted = set(names)
    columns = [column for column in table.columns
               if column.role != schema.FEATURE or column.name in wanted]
    return table.replace(columns=columns,
                         frame=table.frame[[c.name for c in columns]])


def group_indices(table, label):
    """Returns the row indices of one device.

    Raises:
      DegBenchError: INVALID_SCHEMA without a group-id column, UNKNOWN_GROUP
        when no row carries the label.
    """
    group_ids = table.group_ids
    if group_ids is None:
        raise DegBenchError(errors.INVALID_SCHEMA,
                            'The schema declares no group-id column.')
    indices = np.flatnonzero(group_ids == str(label))
    if not len(indices):
        raise DegBenchError(errors.UNKNOWN_GROUP,
                            'Group "%s" is not present in the table.' % label,
                            details={'group': str(label)})
    return indices
