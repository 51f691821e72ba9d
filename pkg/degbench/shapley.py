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

"""Exact interventional Shapley attributions by coalition enumeration."""

import logging

import numpy as np
from scipy.special import comb

from degbench import errors
from degbench import families
from degbench import learners
from degbench.common.error import DegBenchError

_logger = logging.getLogger(__name__)

# Rows handed to one predict call while evaluating coalitions.
_BATCH_ROWS = 1 << 16


class ShapleyResult(object):
    """Per-row, per-feature attributions.

    For every row, baseline + values[row].sum() equals the model prediction
    for that row.

    Attributes:
      feature_names: Feature names in model order.
      values: (rows, features) attribution array.
      baseline: Mean prediction over the background rows.
      predictions: Model prediction of every explained row.
      background: Row indices of the background set, when known.
    """

    def __init__(self, feature_names, values, baseline, predictions,
                 background=None):
        self.feature_names = list(feature_names)
        self.values = np.asarray(values, dtype=float)
        self.baseline = float(baseline)
        self.predictions = np.asarray(predictions, dtype=float)
        self.background = None if background is None else list(background)

    def mean_abs(self):
        """Mean |attribution| per feature name."""
        return dict(zip(self.feature_names,
                        np.mean(np.abs(self.values), axis=0).tolist()))

    def to_dict(self):
        return {'features': self.feature_names,
                'values': self.values.tolist(),
                'baseline': self.baseline,
                'predictions': self.predictions.tolist(),
                'background': self.background,
                'mean_abs': self.mean_abs()}

    @classmethod
    def from_dict(cls, data):
        return cls(data['features'], data['values'], data['baseline'],
                   data['predictions'], data.get('background'))


def coalition_masks(n_features):
    """(2^m, m) boolean array; row i holds the features in coalition i."""
    codes = np.arange(1 << n_features)[:, np.newaxis]
    return ((codes >> np.arange(n_features)) & 1).astype(bool)


def _coalition_values(model, row, background, masks):
    """v(S) for every coalition S: mean prediction over the background."""
    n_background = len(background)
    step = max(1, _BATCH_ROWS // n_background)
    values = np.empty(len(masks))
    for start in range(0, len(masks), step):
        chunk = masks[start:start + step]
        mixed = np.where(chunk[:, np.newaxis, :], row, background[np.newaxis])
        predictions = learners.predict(
            model, mixed.reshape(-1, background.shape[1]))
        values[start:start + len(chunk)] = np.mean(
            predictions.reshape(len(chunk), n_background), axis=1)
    return values


def shapley(model, rows, background, background_rows=None):
    """Exact Shapley values under the interventional value function.

    v(S) is the mean prediction over the background rows b of x with the
    features outside S taken from b. The attribution of feature j is
    sum over S without j of |S|! (m - |S| - 1)! / m! * (v(S + j) - v(S)),
    enumerated over all 2^m coalitions.

    Args:
      model: A learners.TrainedModel.
      rows: (r, m) rows to explain.
      background: (b, m) background rows, b >= 1.
      background_rows: Optional indices of the background rows in their
        table, kept in the result.

    Returns:
      A ShapleyResult.

    Raises:
      DegBenchError: TOO_MANY_FEATURES above families.MAX_SHAPLEY_FEATURES
        (use permutation importance instead), EMPTY_PARTITION for an empty
        background.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    background = np.asarray(background, dtype=float)
    n_features = len(model.feature_names)
    if n_features > families.MAX_SHAPLEY_FEATURES:
        raise DegBenchError(errors.TOO_MANY_FEATURES,
                            'Exact Shapley enumeration supports at most %d '
                            'features, the model has %d; use permutation '
                            'importance instead.' %
                            (families.MAX_SHAPLEY_FEATURES, n_features))
    if not background.size:
        raise DegBenchError(errors.EMPTY_PARTITION,
                            'Shapley attribution needs background rows.')
    background = np.atleast_2d(background)

    masks = coalition_masks(n_features)
    sizes = masks.sum(axis=1)
    weights = 1.0 / (n_features * comb(n_features - 1,
                                       np.arange(n_features)))

    baseline = float(np.mean(learners.predict(model, background)))
    predictions = learners.predict(model, rows)
    values = np.array([_coalition_values(model, row, background, masks)
                       for row in rows])

    attributions = np.zeros((len(rows), n_features))
    for j in range(n_features):
        without = np.flatnonzero(~masks[:, j])
        with_j = without | (1 << j)
        attributions[:, j] = (values[:, with_j] - values[:, without]).dot(
            weights[sizes[without]])
    _logger.debug('Enumerated %d coalitions for %d rows', len(masks),
                  len(rows))
    return ShapleyResult(model.feature_names, attributions, baseline,
                         predictions, background_rows)
