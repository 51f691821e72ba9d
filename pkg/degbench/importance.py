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

"""Permutation feature importance on held-out data."""

import numpy as np

from degbench import errors
from degbench import families
from degbench import learners
from degbench.common.error import DegBenchError
from degbench.metrics import rmse

MIN_REPEATS = 5


class FeatureImportance(object):
    """Mean RMSE increase per permuted feature.

    Attributes:
      feature_names: Feature names in model order.
      importances: Mean increase over the repeats, per feature.
      std: Standard deviation of the increase over the repeats.
      repeats: Number of permutations per feature.
      seed: Seed of the permutation stream.
    """

    def __init__(self, feature_names, importances, std, repeats, seed):
        self.feature_names = list(feature_names)
        self.importances = np.asarray(importances, dtype=float)
        self.std = np.asarray(std, dtype=float)
        self.repeats = repeats
        self.seed = seed

    def as_dict(self):
        return dict(zip(self.feature_names, self.importances.tolist()))

    def ranking(self):
        """Feature names by decreasing importance, model order on ties."""
        order = sorted(range(len(self.feature_names)),
                       key=lambda j: (-self.importances[j], j))
        return [self.feature_names[j] for j in order]

    def to_dict(self):
        return {'features': list(self.feature_names),
                'importances': self.as_dict(),
                'std': dict(zip(self.feature_names, self.std.tolist())),
                'ranking': self.ranking(),
                'repeats': self.repeats, 'seed': self.seed}

    @classmethod
    def from_dict(cls, data):
        names = data['features']
        return cls(names, [data['importances'][n] for n in names],
                   [data['std'][n] for n in names], data['repeats'],
                   data['seed'])


def permutation_importance(model, x, y, repeats=families.DEFAULT_PFI_REPEATS,
                           seed=0):
    """Measures how much the held-out RMSE grows when a feature is shuffled.

    Permutations are drawn from default_rng(seed), repeat by repeat and
    feature by feature within a repeat.

    Args:
      model: A learners.TrainedModel.
      x: Held-out feature matrix in model column order.
      y: Held-out targets.
      repeats: Permutations per feature, at least 5.
      seed: Seed of the permutations.

    Returns:
      A FeatureImportance.
    """
    if repeats < MIN_REPEATS:
        raise DegBenchError(errors.INVALID_ARGUMENT,
                            'Permutation importance needs at least %d '
                            'repeats, got %d.' % (MIN_REPEATS, repeats))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not len(y):
        raise DegBenchError(errors.EMPTY_PARTITION,
                            'Permutation importance needs held-out rows.')
    base = rmse(y, learners.predict(model, x))
    rng = np.random.default_rng(seed)
    increases = np.zeros((repeats, x.shape[1]))
    for repeat in range(repeats):
        for j in range(x.shape[1]):
            shuffled = x.copy()
            shuffled[:, j] = rng.permutation(x[:, j])
            increases[repeat, j] = rmse(y, learners.predict(model,
                                                            shuffled)) - base
    return FeatureImportance(model.feature_names, np.mean(increases, axis=0),
                             np.std(increases, axis=0), repeats, seed)


def select_important(importance, threshold=families.DEFAULT_PFI_THRESHOLD):
    """Names of features whose importance reaches threshold * max.

    When no feature has positive importance every feature is kept.
    """
    top = float(np.max(importance.importances)) if len(
        importance.importances) else 0.0
    if top <= 0.0:
        return list(importance.feature_names)
    return [name for name, value in zip(importance.feature_names,
                                        importance.importances)
            if value >= threshold * top]
