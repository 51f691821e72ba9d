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

"""Shared train/predict contract, hyperparameter search and persistence."""

import itertools
import json
import logging

import numpy as np

from degbench import errors
from degbench import families
from degbench.boosting import GradientBoosting
from degbench.common.error import DegBenchError
from degbench.families import Family
from degbench.forest import RandomForest
from degbench.linear import MultivariateLinear
from degbench.metrics import MetricsBundle
from degbench.metrics import rmse
from degbench.mlp import NeuralNetwork

_logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

MIN_TRAINING_ROWS = 5

_ESTIMATORS = {
    Family.MVL: MultivariateLinear,
    Family.RF: RandomForest,
    Family.GB: GradientBoosting,
    Family.NN: NeuralNetwork,
}


class LearnerSpec(object):
    """A learner family, its complete hyperparameters and its seed.

    Missing hyperparameters are filled from families.DEFAULT_HYPERPARAMS.
    """

    def __init__(self, family, hyperparams=None, seed=0):
        if family not in _ESTIMATORS:
            raise DegBenchError(errors.INVALID_SPEC,
                                'Unknown learner family "%s".' % family)
        defaults = families.DEFAULT_HYPERPARAMS[family]
        hyperparams = dict(hyperparams or {})
        unknown = sorted(set(hyperparams) - set(defaults))
        if unknown:
            raise DegBenchError(errors.INVALID_SPEC,
                                'Unknown %s hyperparameters: %s.' %
                                (family, ', '.join(unknown)))
        complete = dict(defaults)
        complete.update(hyperparams)
        if int(seed) < 0:
            raise DegBenchError(errors.INVALID_SPEC,
                                'Seeds must be non-negative, got %d.' % seed)
        self.family = family
        self.hyperparams = complete
        self.seed = int(seed)

    def to_dict(self):
        return {'family': self.family, 'hyperparams': dict(self.hyperparams),
                'seed': self.seed}

    @classmethod
    def from_dict(cls, data):
        return cls(data['family'], data.get('hyperparams'),
                   data.get('seed', 0))

    def __eq__(self, other):
        return (isinstance(other, LearnerSpec) and
                self.to_dict() == other.to_dict())

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'LearnerSpec(%s, %r, seed=%d)' % (self.family, self.hyperparams,
                                                 self.seed)


class TrainedModel(object):
    """A fitted predictor together with everything predict needs.

    Attributes:
      spec: The LearnerSpec it was trained with.
      feature_names: Input columns, in order.
      estimator: The family estimator (MultivariateLinear, RandomForest, ...).
      training_metrics: MetricsBundle on the training rows.
      training_groups: Device labels present in the training rows, if known.
    """

    def __init__(self, spec, feature_names, estimator, training_metrics,
                 training_groups=None):
        self.spec = spec
        self.feature_names = list(feature_names)
        self.estimator = estimator
        self.training_metrics = training_metrics
        self.training_groups = (None if training_groups is None
                                else sorted(set(training_groups)))

    @property
    def family(self):
        return self.spec.family

    def linear_coefficients(self):
        """MVL weights per feature name and the intercept, in raw units.

        Raises:
          DegBenchError: INVALID_SPEC for non-linear families.
        """
        if self.family != Family.MVL:
            raise DegBenchError(errors.INVALID_SPEC,
                                '%s models have no linear coefficients.' %
                                self.family)
        weights, intercept = self.estimator.original_scale()
        return dict(zip(self.feature_names, weights.tolist())), intercept


def _check_matrix(x, y=None):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise DegBenchError(errors.COLUMN_MISMATCH,
                            'Inputs must be a 2-D matrix.')
    if not np.all(np.isfinite(x)):
        raise DegBenchError(errors.INVALID_ARGUMENT,
                            'Inputs must be finite.')
    if y is None:
        return x
    y = np.asarray(y, dtype=float).ravel()
    if len(y) != len(x):
        raise DegBenchError(errors.LENGTH_MISMATCH,
                            'X has %d rows but y has %d values.' %
                            (len(x), len(y)))
    if not np.all(np.isfinite(y)):
        raise DegBenchError(errors.INVALID_ARGUMENT,
                            'Targets must be finite.')
    return x, y


def _build(spec):
    if spec.family == Family.MVL:
        return MultivariateLinear(spec.seed)
    return _ESTIMATORS[spec.family](seed=spec.seed, **spec.hyperparams)


def train(spec, x, y, feature_names=None, training_groups=None):
    """Trains one learner.

    Args:
      spec: A LearnerSpec.
      x: (n, m) feature matrix.
      y: (n,) targets.
      feature_names: Column names of x; defaults to x0..x{m-1}.
      training_groups: Device labels of the training rows, kept for the
        external-test leakage check.

    Returns:
      A TrainedModel.

    Raises:
      DegBenchError: TOO_FEW_ROWS below 5 rows, RANK_DEFICIENT for a
        singular MVL design, NON_FINITE_LOSS when NN training diverges.
    """
    x, y = _check_matrix(x, y)
    if len(y) < MIN_TRAINING_ROWS:
        raise DegBenchError(errors.TOO_FEW_ROWS,
                            'Training needs at least %d rows, got %d.' %
                            (MIN_TRAINING_ROWS, len(y)))
    if feature_names is None:
        feature_names = ['x%d' % j for j in range(x.shape[1])]
    if len(feature_names) != x.shape[1]:
        raise DegBenchError(errors.COLUMN_MISMATCH,
                            '%d feature names for %d columns.' %
                            (len(feature_names), x.shape[1]))
    estimator = _build(spec)
    if spec.family == Family.MVL:
        estimator.fit(x, y, feature_names)
    else:
        estimator.fit(x, y)
    metrics = MetricsBundle.evaluate(y, estimator.predict(x), 'train',
                                     strict=False)
    _logger.debug('Trained %s: training RMSE %.4g', spec, metrics.rmse)
    return TrainedModel(spec, feature_names, estimator, metrics,
                        training_groups)


def predict(model, x, feature_names=None):
    """Predicts targets for the rows of x.

    Raises:
      DegBenchError: COLUMN_MISMATCH when the column count, or the names
        when given, differ from the model's feature_names.
    """
    x = _check_matrix(x)
    if feature_names is not None and \
            list(feature_names) != model.feature_names:
        raise DegBenchError(errors.COLUMN_MISMATCH,
                            'Columns %s do not match the model features %s.'
                            % (', '.join(feature_names),
                               ', '.join(model.feature_names)),
                            details={'expected': model.feature_names,
                                     'actual': list(feature_names)})
    if x.shape[1] != len(model.feature_names):
        raise DegBenchError(errors.COLUMN_MISMATCH,
                            'Expected %d feature columns, got %d.' %
                            (len(model.feature_names), x.shape[1]))
    return model.estimator.predict(x)


def predict_table(model, table):
    """Predicts every row of a DataTable, selecting the model's columns.

    Raises:
      DegBenchError: COLUMN_MISMATCH when the table lacks a model feature.
    """
    missing = [name for name in model.feature_names
               if name not in table.feature_names]
    if missing:
        raise DegBenchError(errors.COLUMN_MISMATCH,
                            'The table lacks model features: %s.' %
                            ', '.join(missing), details={'missing': missing})
    x = table.frame[model.feature_names].to_numpy(dtype=float)
    return predict(model, x, model.feature_names)


def candidate_specs(family, budget, seed):
    """The specs hyperparam_search tries, in draw order.

    The family default comes first; the rest of the grid is shuffled with
    default_rng(seed) and taken in that order.
    """
    default = LearnerSpec(family, None, seed)
    specs = [default]
    grid = families.HYPERPARAM_GRIDS[family]
    names = sorted(grid)
    combos = [dict(zip(names, values))
              for values in itertools.product(*[grid[n] for n in names])]
    others = [LearnerSpec(family, combo, seed) for combo in combos]
    others = [spec for spec in others if spec != default]
    order = np.random.default_rng(seed).permutation(len(others))
    specs.extend(others[i] for i in order)
    return specs[:max(1, int(budget))]


def hyperparam_search(family, x_train, y_train, x_valid, y_valid, budget,
                      seed, feature_names=None):
    """Picks the candidate spec with the lowest validation RMSE.

    Ties go to the earlier candidate. Candidates whose training fails are
    skipped; if all fail the last failure is raised.

    Returns:
      The winning LearnerSpec.
    """
    if budget < 1:
        raise DegBenchError(errors.INVALID_ARGUMENT,
                            'The search budget must be at least 1.')
    best = None
    best_score = None
    failure = None
    for spec in candidate_specs(family, budget, seed):
        try:
            model = train(spec, x_train, y_train, feature_names)
        except DegBenchError as err:
            _logger.info('Candidate %s failed: %s', spec, err.message)
            failure = err
            continue
        score = rmse(y_valid, predict(model, x_valid))
        _logger.debug('Candidate %s: validation RMSE %.4g', spec, score)
        if best_score is None or score < best_score:
            best, best_score = spec, score
    if best is None:
        raise failure
    return best


def model_to_dict(model):
    estimator = model.estimator
    return {
        'format_version': FORMAT_VERSION,
        'spec': model.spec.to_dict(),
        'feature_names': list(model.feature_names),
        'standardization': estimator.standardization(),
        'family_state': estimator.get_state(),
        'training_metrics': model.training_metrics.to_dict(),
        'training_groups': model.training_groups,
    }


def model_from_dict(data):
    version = data.get('format_version')
    if version != FORMAT_VERSION:
        raise DegBenchError(errors.MODEL_FORMAT,
                            'Unsupported model format version %r.' % version)
    try:
        spec = LearnerSpec.from_dict(data['spec'])
        estimator_class = _ESTIMATORS[spec.family]
        if spec.family in Family.STANDARDIZED:
            estimator = estimator_class.from_state(data['family_state'],
                                                   data['standardization'])
        else:
            estimator = estimator_class.from_state(data['family_state'])
        return TrainedModel(spec, data['feature_names'], estimator,
                            MetricsBundle.from_dict(data['training_metrics']),
                            data.get('training_groups'))
    except (KeyError, TypeError, ValueError) as err:
        raise DegBenchError(errors.MODEL_FORMAT,
                            'Malformed model document: %r' % err)


def save_model(model, path):
    with open(path, 'w') as handle:
        json.dump(model_to_dict(model), handle, indent=1, sort_keys=True)


def load_model(path):
    try:
        with open(path) as handle:
            data = json.load(handle)
    except IOError:
        raise DegBenchError(errors.FILE_NOT_FOUND,
                            'Cannot read model file %s.' % path)
    except ValueError as err:
        raise DegBenchError(errors.MODEL_FORMAT,
                            'Model file %s is not JSON: %s' % (path, err))
    return model_from_dict(data)
