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

"""External-group testing and residual outlier detection."""

import logging

import numpy as np

from degbench import datatable
from degbench import errors
from degbench import families
from degbench import learners
from degbench.common.error import DegBenchError
from degbench.metrics import MetricsBundle

_logger = logging.getLogger(__name__)


class ExternalTest(object):
    """Predicted-vs-observed pairs of one held-out device, ordered by day.

    Attributes:
      group: The device label.
      metrics: MetricsBundle with partition 'external'.
      rows: Table row indices, in output order.
      days: Measurement days, or None without a time column.
      observed: Observed targets.
      predicted: Model predictions.
      leakage: True when the device was part of the training rows.
    """

    def __init__(self, group, metrics, rows, days, observed, predicted,
                 leakage=False):
        self.group = group
        self.metrics = metrics
        self.rows = np.asarray(rows)
        self.days = None if days is None else np.asarray(days, dtype=float)
        self.observed = np.asarray(observed, dtype=float)
        self.predicted = np.asarray(predicted, dtype=float)
        self.leakage = leakage

    def to_dict(self):
        return {'group': self.group, 'metrics': self.metrics.to_dict(),
                'rows': self.rows.tolist(),
                'days': None if self.days is None else self.days.tolist(),
                'observed': self.observed.tolist(),
                'predicted': self.predicted.tolist(),
                'leakage': self.leakage}

    @classmethod
    def from_dict(cls, data):
        return cls(data['group'], MetricsBundle.from_dict(data['metrics']),
                   data['rows'], data['days'], data['observed'],
                   data['predicted'], data['leakage'])


def external_test(model, table, group, allow_leakage=False):
    """Evaluates a model on every row of one device.

    Args:
      model: A learners.TrainedModel, normally trained without the group.
      table: A curated DataTable containing the group.
      group: Device label.
      allow_leakage: Evaluate even when the model saw the group in training;
        the result is then flagged and a warning logged.

    Returns:
      An ExternalTest. Its R2 is None for a single-row group.

    Raises:
      DegBenchError: UNKNOWN_GROUP, COLUMN_MISMATCH, or TRAINING_LEAKAGE
        when the model was trained on the group and allow_leakage is False.
    """
    group = str(group)
    rows = datatable.group_indices(table, group)
    leakage = (model.training_groups is not None and
               group in model.training_groups)
    if leakage:
        if not allow_leakage:
            raise DegBenchError(errors.TRAINING_LEAKAGE,
                                'The model was trained on rows of %s; an '
                                'external test needs an unseen device.' %
                                group, details={'group': group})
        _logger.warning('Evaluating %s on its own training rows; metrics '
                        'are optimistic.', group)
    times = table.times
    if times is not None:
        rows = rows[np.argsort(times[rows], kind='mergesort')]
    subset = datatable.take_rows(table, rows)
    predicted = learners.predict_table(model, subset)
    observed = subset.target
    metrics = MetricsBundle.evaluate(observed, predicted, 'external',
                                     strict=False)
    return ExternalTest(group, metrics, rows,
                        None if times is None else times[rows], observed,
                        predicted, leakage)


def detect_outliers(model, x, y, z_threshold=families.DEFAULT_Z_THRESHOLD):
    """Rows whose standardized residual exceeds z_threshold in magnitude.

    z = (r - mean(r)) / sd(r) with r = y - prediction and the population SD.
    A perfect fit (sd(r) numerically zero) has no outliers.

    Returns:
      A list of (row index, z) pairs sorted by decreasing |z|, then by row.

    Raises:
      DegBenchError: TOO_FEW_ROWS below 3 rows.
    """
    y = np.asarray(y, dtype=float)
    if len(y) < 3:
        raise DegBenchError(errors.TOO_FEW_ROWS,
                            'Outlier detection needs at least 3 rows.')
    residual = y - learners.predict(model, x)
    spread = float(np.std(residual))
    if spread <= 1e-12 * max(1.0, float(np.max(np.abs(y)))):
        return []
    z = (residual - np.mean(residual)) / spread
    flagged = np.flatnonzero(np.abs(z) > z_threshold)
    ordered = sorted(flagged, key=lambda i: (-abs(z[i]), i))
    return [(int(i), float(z[i])) for i in ordered]
