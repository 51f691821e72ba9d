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

"""Error and goodness-of-fit statistics.

All sums go through numpy's pairwise summation, so accuracy does not
degrade on long vectors.
"""

import numpy as np

from degbench import errors
from degbench.common.error import DegBenchError


def _pair(observed, predicted):
    observed = np.asarray(observed, dtype=np.float64).ravel()
    predicted = np.asarray(predicted, dtype=np.float64).ravel()
    if len(observed) != len(predicted):
        raise DegBenchError(errors.LENGTH_MISMATCH,
                            'Observed and predicted lengths differ '
                            '(%d vs %d).' % (len(observed), len(predicted)))
    if not len(observed):
        raise DegBenchError(errors.LENGTH_MISMATCH,
                            'Metrics need at least one value.')
    return observed, predicted


def residuals(observed, predicted):
    """Elementwise observed minus predicted."""
    observed, predicted = _pair(observed, predicted)
    return observed - predicted


def sse(observed, predicted):
    """Sum of squared residuals."""
    r = residuals(observed, predicted)
    return float(np.sum(r * r))


def rmse(observed, predicted):
    """Root mean squared error."""
    r = residuals(observed, predicted)
    return float(np.sqrt(np.sum(r * r) / len(r)))


def mae(observed, predicted):
    """Mean absolute error."""
    r = residuals(observed, predicted)
    return float(np.sum(np.abs(r)) / len(r))


def r2(observed, predicted):
    """Coefficient of determination, 1 - SSE / SS_tot.

    May be negative for models worse than the mean.

    Raises:
      DegBenchError: CONSTANT_OBSERVED when fewer than two values are given
        or the observed vector is constant (SS_tot = 0).
    """
    observed, predicted = _pair(observed, predicted)
    if len(observed) < 2:
        raise DegBenchError(errors.CONSTANT_OBSERVED,
                            'R2 needs at least two observations.')
    centered = observed - np.mean(observed)
    ss_tot = np.sum(centered * centered)
    if ss_tot == 0.0:
        raise DegBenchError(errors.CONSTANT_OBSERVED,
                            'R2 is undefined for a constant observed vector.')
    r = observed - predicted
    return float(1.0 - np.sum(r * r) / ss_tot)


class MetricsBundle(object):
    """R2, RMSE, SSE and MAE of one (model, data partition) pair.

    Attributes:
      r2: Coefficient of determination, or None when undefined.
      rmse, sse, mae: Error statistics.
      n: Number of evaluated points.
      partition: Name of the evaluated partition, e.g. 'validation'.
      note: Why r2 is None, if it is.
    """

    def __init__(self, r2, rmse, sse, mae, n, partition=None, note=None):
        self.r2 = r2
        self.rmse = rmse
        self.sse = sse
        self.mae = mae
        self.n = n
        self.partition = partition
        self.note = note

    @classmethod
    def evaluate(cls, observed, predicted, partition=None, strict=True):
        """Computes all metrics.

        Args:
          observed: Observed values.
          predicted: Predicted values, same length.
          partition: Label stored with the bundle.
          strict: If False an undefined R2 is stored as None instead of
            raising.

        Returns:
          A MetricsBundle.
        """
        observed, predicted = _pair(observed, predicted)
        note = None
        try:
            score = r2(observed, predicted)
        except DegBenchError as err:
            if strict or err.code != errors.CONSTANT_OBSERVED:
                raise
            score = None
            note = err.message
        return cls(score, rmse(observed, predicted), sse(observed, predicted),
                   mae(observed, predicted), len(observed), partition, note)

    def to_dict(self):
        result = {'r2': self.r2, 'rmse': self.rmse, 'sse': self.sse,
                  'mae': self.mae, 'n': self.n}
        if self.partition is not None:
            result['partition'] = self.partition
        if self.note is not None:
            result['note'] = self.note
        return result

    @classmethod
    def from_dict(cls, data):
        return cls(data['r2'], data['rmse'], data['sse'], data['mae'],
                   data['n'], data.get('partition'), data.get('note'))

    def __repr__(self):
        return ('MetricsBundle(r2=%s, rmse=%.4g, sse=%.4g, mae=%.4g, n=%d)' %
                (self.r2, self.rmse, self.sse, self.mae, self.n))
