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

"""Utility functions for testing degbench components."""

import numpy as np
import pandas as pd

from degbench import benchmark
from degbench import schema
from degbench.datatable import DataTable
from degbench.families import Family


def LinearTable(n_rows=60, weights=(1.5, -2.0, 0.5), intercept=0.25,
                noise_sd=0.0, seed=0, n_groups=None, days=False):
    """A table whose target is linear in uniformly drawn features x1..xm.

    Args:
      n_rows: Number of rows.
      weights: One weight per feature.
      intercept: Constant term.
      noise_sd: SD of additive Gaussian noise.
      seed: Seed of every draw.
      n_groups: Optional number of devices G1..Gn assigned round-robin.
      days: Whether to add a time column 'day' (not part of the signal).

    Returns:
      A curated-looking DataTable.
    """
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, (n_rows, len(weights)))
    y = x.dot(np.asarray(weights, dtype=float)) + intercept
    if noise_sd:
        y = y + rng.normal(0.0, noise_sd, n_rows)
    columns = []
    data = {}
    if n_groups:
        columns.append(schema.ColumnSpec('device', schema.CATEGORICAL, '',
                                         schema.GROUP))
        data['device'] = ['G%d' % (i % n_groups + 1) for i in range(n_rows)]
    if days:
        columns.append(schema.ColumnSpec('day', schema.NUMERIC, 'days',
                                         schema.TIME))
        data['day'] = np.arange(n_rows, dtype=float)
    for j in range(len(weights)):
        name = 'x%d' % (j + 1)
        columns.append(schema.ColumnSpec(name))
        data[name] = x[:, j]
    columns.append(schema.ColumnSpec('y', role=schema.TARGET))
    data['y'] = y
    return DataTable(columns, pd.DataFrame(data,
                                           columns=[c.name for c in columns]))


def Matrix(table):
    """(x, y, feature_names) of a table."""
    return table.features, table.target, table.feature_names


def TinyConfig(**overrides):
    """A benchmark config small enough for unit tests."""
    values = {'families': (Family.MVL,), 'train_fractions': (0.8,),
              'seeds': (0,), 'pfi_variants': (False, True),
              'time_cutoffs': (180,), 'search_budget': 1, 'pfi_repeats': 5,
              'seed': 0}
    values.update(overrides)
    return benchmark.BenchmarkConfig(**values)


def Write(path, text):
    with open(path, 'w') as handle:
        handle.write(text)
    return path
