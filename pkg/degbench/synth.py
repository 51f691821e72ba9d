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

"""Synthetic degradation datasets with the laboratory column layout.

Each cell gets manufacturing variables drawn once and held for all of its
rows; environmental conditions are drawn per row and carry no signal. The
target follows a fixed rule:

  target = manufacturing_factor(cell) * decay(day) + N(0, noise_sd)
  manufacturing_factor = 1 + 0.6 s + 0.25 r - 0.1 p

where s, r and p are the HTL solvent amount, the P3HT:PCBM volume ratio and
the PCBM mass rescaled to [0, 1] over their ranges. The solvent amount is
therefore the dominant driver.
"""

import numpy as np
import pandas as pd

from degbench import errors
from degbench import schema
from degbench.common.error import DegBenchError
from degbench.datatable import DataTable
from degbench.families import Kind
from degbench.parametric import ParametricModel
from degbench.parametric import evaluate

CELL = 'cell'
DAY = 'day'
TARGET = 'pce_norm'

SOLVENT = 'solvent_htl_ul'
P3HT = 'p3ht_mg'
PCBM = 'pcbm_mg'
RATIO = 'p3ht_pcbm_ratio'

# (name, unit, low, high) in column order.
MANUFACTURING = (
    (SOLVENT, 'ul', 250.0, 1000.0),
    (P3HT, 'mg', 1.0, 1.2),
    (PCBM, 'mg', 0.8, 1.0),
    (RATIO, '', 1.0, 1.25),
)
ENVIRONMENT = (
    ('temperature_c', 'C', 12.0, 23.0),
    ('humidity_pct', '%', 33.0, 88.0),
    ('dew_point_c', 'C', 3.0, 19.0),
    ('pressure_hpa', 'hPa', 997.0, 1022.0),
)

DEFAULT_DAYS = np.round(np.linspace(0.0, 180.0, 33))
DEFAULT_DECAY = ParametricModel(Kind.GAUSS2, [0.75, 0.0, 110.0,
                                              0.25, 40.0, 30.0])
DEFAULT_NOISE_SD = 0.01

_RANGES = dict((name, (low, high)) for name, _, low, high in MANUFACTURING)


def default_schema():
    """Columns of a synthetic table, in CSV order."""
    columns = [schema.ColumnSpec(CELL, schema.CATEGORICAL, '', schema.GROUP),
               schema.ColumnSpec(DAY, schema.NUMERIC, 'days', schema.TIME)]
    for name, unit, _, _ in MANUFACTURING + ENVIRONMENT:
        columns.append(schema.ColumnSpec(name, schema.NUMERIC, unit,
                                         schema.FEATURE))
    columns.append(schema.ColumnSpec(TARGET, schema.NUMERIC, '',
                                     schema.TARGET))
    return columns


def _rescaled(name, value):
    low, high = _RANGES[name]
    return (value - low) / (high - low)


def manufacturing_factor(values):
    """Multiplier of the decay curve for a dict of manufacturing values."""
    return (1.0 + 0.6 * _rescaled(SOLVENT, values[SOLVENT]) +
            0.25 * _rescaled(RATIO, values[RATIO]) -
            0.1 * _rescaled(PCBM, values[PCBM]))


def synth_dataset(n_cells=5, days=None, decay=None,
                  noise_sd=DEFAULT_NOISE_SD, seed=0):
    """Generates a table of n_cells devices measured on the same days.

    Args:
      n_cells: Number of devices, labelled Cell1..CellN.
      days: Measurement schedule; defaults to 33 days over 0-180.
      decay: A ParametricModel shared by all cells, or a dict from cell
        label to ParametricModel. Defaults to DEFAULT_DECAY.
      noise_sd: SD of the additive Gaussian noise, >= 0.
      seed: Seed of every draw.

    Returns:
      A raw DataTable with schema default_schema().
    """
    if n_cells < 1:
        raise DegBenchError(errors.INVALID_ARGUMENT,
                            'n_cells must be at least 1, got %d.' % n_cells)
    days = DEFAULT_DAYS if days is None else np.asarray(days, dtype=float)
    decay = DEFAULT_DECAY if decay is None else decay
    rng = np.random.default_rng(seed)

    blocks = []
    for index in range(n_cells):
        label = 'Cell%d' % (index + 1)
        cell_values = dict((name, rng.uniform(low, high))
                           for name, _, low, high in MANUFACTURING)
        model = decay[label] if isinstance(decay, dict) else decay
        block = {CELL: [label] * len(days), DAY: days}
        for name, _, _, _ in MANUFACTURING:
            block[name] = np.full(len(days), cell_values[name])
        for name, _, low, high in ENVIRONMENT:
            block[name] = rng.uniform(low, high, len(days))
        clean = manufacturing_factor(cell_values) * evaluate(model, days)
        noise = rng.normal(0.0, noise_sd, len(days)) if noise_sd > 0 else 0.0
        block[TARGET] = clean + noise
        blocks.append(pd.DataFrame(block))

    columns = default_schema()
    frame = pd.concat(blocks, ignore_index=True)[[c.name for c in columns]]
    return DataTable(columns, frame)
