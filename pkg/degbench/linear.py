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

"""Multivariate linear regression on standardized features."""

import numpy as np
import scipy.linalg

from degbench import errors
from degbench.common.error import DegBenchError


def standardize_columns(x):
    """Per-column mean and SD; constant columns get SD 1."""
    mean = np.mean(x, axis=0)
    scale = np.std(x, axis=0)
    scale = np.where(scale > 0.0, scale, 1.0)
    return mean, scale


class MultivariateLinear(object):
    """Ordinary least squares through a column-pivoted QR factorization.

    The design is [1, (x - mean) / sd]. Numerical rank below the column
    count is an error naming the columns the pivoting pushed past the rank.
    """

    def __init__(self, seed=0):
        self.seed = int(seed)
        self.mean = None
        self.scale = None
        self.intercept = 0.0
        self.coef = None

    def fit(self, x, y, feature_names=None):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        n, m = x.shape
        if feature_names is None:
            feature_names = ['x%d' % j for j in range(m)]
        self.mean, self.scale = standardize_columns(x)
        design = np.column_stack([np.ones(n), (x - self.mean) / self.scale])

        q, upper, pivots = scipy.linalg.qr(design, mode='economic',
                                           pivoting=True)
        diagonal = np.abs(np.diag(upper))
        tolerance = max(design.shape) * np.finfo(float).eps * diagonal[0]
        rank = int(np.sum(diagonal > tolerance))
        if rank < m + 1:
            names = ['intercept'] + list(feature_names)
            offending = [names[p] for p in sorted(pivots[rank:])]
            raise DegBenchError(errors.RANK_DEFICIENT,
                                'The linear design is rank deficient (rank %d '
                                'of %d); dependent columns: %s.' %
                                (rank, m + 1, ', '.join(offending)),
                                details={'columns': offending})
        solution = scipy.linalg.solve_triangular(upper, q.T.dot(y))
        beta = np.empty(m + 1)
        beta[pivots] = solution
        self.intercept = float(beta[0])
        self.coef = beta[1:]
        return self

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        return self.intercept + ((x - self.mean) / self.scale).dot(self.coef)

    def original_scale(self):
        """(weights, intercept) for raw, unstandardized features."""
        weights = self.coef / self.scale
        return weights, float(self.intercept - np.sum(weights * self.mean))

    def standardization(self):
        return {'mean': self.mean.tolist(), 'scale': self.scale.tolist()}

    def get_state(self):
        return {'seed': self.seed, 'intercept': self.intercept,
                'coef': self.coef.tolist()}

    @classmethod
    def from_state(cls, state, standardization):
        model = cls(state['seed'])
        model.intercept = state['intercept']
        model.coef = np.array(state['coef'], dtype=float)
        model.mean = np.array(standardization['mean'], dtype=float)
        model.scale = np.array(standardization['scale'], dtype=float)
        return model
