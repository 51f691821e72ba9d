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

"""Verification battery: y-mean, y-shuffle, one-hot and k-fold tests."""

import logging

import numpy as np

from degbench import errors
from degbench import families
from degbench import learners
from degbench import splitting
from degbench.common.error import DegBenchError
from degbench.common.error import Error
from degbench.metrics import MetricsBundle
from degbench.metrics import rmse

_logger = logging.getLogger(__name__)

ONEHOT_BINNING = ('every feature replaced by indicators of its training '
                  'quartile bins 2-4 (bin 1 is the reference); indicators '
                  'constant on the training rows are dropped')

_SHUFFLE_STREAM = 1
_KFOLD_STREAM = 2


class VerificationResult(object):
    """RMSE of the model next to the baselines it has to beat.

    Attributes:
      model_rmse: Validation RMSE of the verified spec.
      ymean_rmse: Validation RMSE of always predicting the training mean.
      yshuffle_rmse: Validation RMSE after training on permuted targets.
      onehot_rmse: Validation RMSE after quartile one-hot binning, or None
        when that retraining failed.
      kfold_folds: MetricsBundle per fold, on the fold's held-out rows.
      kfold_pooled: MetricsBundle over all out-of-fold predictions.
      notes: Human-readable remarks, e.g. the one-hot binning rule.
      errors: Error objects of tests that failed without aborting.
    """

    def __init__(self, model_rmse, ymean_rmse, yshuffle_rmse, onehot_rmse,
                 kfold_folds, kfold_pooled, notes=None, failures=None):
        self.model_rmse = model_rmse
        self.ymean_rmse = ymean_rmse
        self.yshuffle_rmse = yshuffle_rmse
        self.onehot_rmse = onehot_rmse
        self.kfold_folds = list(kfold_folds)
        self.kfold_pooled = kfold_pooled
        self.notes = list(notes or [])
        self.errors = list(failures or [])

    @property
    def passed(self):
        """Whether the model beats both the y-mean and y-shuffle baselines."""
        return (self.model_rmse < self.ymean_rmse and
                self.model_rmse <= self.yshuffle_rmse)

    def to_dict(self):
        return {'model_rmse': self.model_rmse,
                'ymean_rmse': self.ymean_rmse,
                'yshuffle_rmse': self.yshuffle_rmse,
                'onehot_rmse': self.onehot_rmse,
                'kfold': {'folds': [m.to_dict() for m in self.kfold_folds],
                          'pooled': self.kfold_pooled.to_dict()},
                'passed': self.passed,
                'notes': self.notes,
                'errors': [err.to_dict() for err in self.errors]}

    @classmethod
    def from_dict(cls, data):
        result = cls(data['model_rmse'], data['ymean_rmse'],
                     data['yshuffle_rmse'], data['onehot_rmse'],
                     [MetricsBundle.from_dict(m)
                      for m in data['kfold']['folds']],
                     MetricsBundle.from_dict(data['kfold']['pooled']),
                     data.get('notes'))
        result.errors = [Error(e['code'], e['message'], e.get('row'),
                               e.get('column'), e.get('details'))
                         for e in data.get('errors', [])]
        return result


def quartile_onehot(x_train, x_other):
    """Bins every column at its training quartiles and one-hot encodes it.

    Returns:
      (train_encoded, other_encoded, names) where names are
      (column index, bin) pairs of the kept indicator columns.
    """
    encoded_train = []
    encoded_other = []
    names = []
    for j in range(x_train.shape[1]):
        edges = np.quantile(x_train[:, j], [0.25, 0.5, 0.75])
        bins_train = np.searchsorted(edges, x_train[:, j], side='right')
        bins_other = np.searchsorted(edges, x_other[:, j], side='right')
        for level in (1, 2, 3):
            column = (bins_train == level).astype(float)
            if np.all(column == column[0]):
                continue
            encoded_train.append(column)
            encoded_other.append((bins_other == level).astype(float))
            names.append((j, level))
    if not names:
        return None, None, names
    return (np.column_stack(encoded_train), np.column_stack(encoded_other),
            names)


def _stream_seed(seed, stream):
    return int(np.random.SeedSequence([seed, stream]).generate_state(1)[0])


def verify(spec, table, split_config, k=families.DEFAULT_KFOLD):
    """Runs the verification battery for one learner spec.

    Args:
      spec: A learners.LearnerSpec.
      table: A curated DataTable.
      split_config: A splitting.SplitConfig for the validation split.
      k: Number of cross-validation folds, at least 2.

    Returns:
      A VerificationResult.

    Raises:
      DegBenchError: INVALID_SPLIT for k < 2 or k > rows, CONSTANT_TARGET
        when the training rows of a fold have a constant target, plus the
        errors of splitting and training.
    """
    x = table.features
    y = table.target
    names = table.feature_names
    train_rows, valid_rows = splitting.split(table, split_config)
    x_train, y_train = x[train_rows], y[train_rows]
    x_valid, y_valid = x[valid_rows], y[valid_rows]

    model = learners.train(spec, x_train, y_train, names)
    model_rmse = rmse(y_valid, learners.predict(model, x_valid))
    ymean_rmse = rmse(y_valid, np.full(len(y_valid), np.mean(y_train)))

    shuffle_rng = np.random.default_rng(_stream_seed(spec.seed,
                                                     _SHUFFLE_STREAM))
    shuffled = learners.train(spec, x_train, shuffle_rng.permutation(y_train),
                              names)
    yshuffle_rmse = rmse(y_valid, learners.predict(shuffled, x_valid))

    notes = ['onehot: ' + ONEHOT_BINNING]
    failures = []
    onehot_rmse = None
    encoded_train, encoded_valid, bins = quartile_onehot(x_train, x_valid)
    if not bins:
        failures.append(Error(errors.VERIFICATION_FAILED,
                              'onehot: every binned column is constant.'))
    else:
        bin_names = ['%s:q%d' % (names[j], level + 1) for j, level in bins]
        try:
            binned = learners.train(spec, encoded_train, y_train, bin_names)
            onehot_rmse = rmse(y_valid, learners.predict(binned,
                                                         encoded_valid))
        except DegBenchError as err:
            failures.append(Error(errors.VERIFICATION_FAILED,
                                  'onehot: %s' % err.message,
                                  details={'cause': err.error.to_dict()}))
    for failure in failures:
        _logger.warning('%s', failure.message)

    folds = splitting.kfold(table.n_rows, k,
                            _stream_seed(spec.seed, _KFOLD_STREAM))
    out_of_fold = np.empty(table.n_rows)
    fold_metrics = []
    for index, held_out in enumerate(folds):
        inside = np.setdiff1d(np.arange(table.n_rows), held_out)
        if np.all(y[inside] == y[inside][0]):
            raise DegBenchError(errors.CONSTANT_TARGET,
                                'Fold %d trains on a constant target.' %
                                (index + 1), details={'fold': index + 1})
        fold_model = learners.train(spec, x[inside], y[inside], names)
        out_of_fold[held_out] = learners.predict(fold_model, x[held_out])
        fold_metrics.append(MetricsBundle.evaluate(
            y[held_out], out_of_fold[held_out], 'fold-%d' % (index + 1),
            strict=False))
    pooled = MetricsBundle.evaluate(y, out_of_fold, 'pooled-cv')

    _logger.info('Verification of %s: model %.4g, y-mean %.4g, y-shuffle '
                 '%.4g, pooled CV R2 %.3f', spec.family, model_rmse,
                 ymean_rmse, yshuffle_rmse, pooled.r2)
    return VerificationResult(model_rmse, ymean_rmse, yshuffle_rmse,
                              onehot_rmse, fold_metrics, pooled, notes,
                              failures)
