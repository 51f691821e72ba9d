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

"""Gradient boosting with squared loss and shrinkage."""

import numpy as np

from degbench.trees import RegressionTree


class GradientBoosting(object):
    """Sequence of depth-limited trees, each fitted to the current residuals.

    F_0 is the training mean and F_m = F_{m-1} + learning_rate * tree_m.
    """

    def __init__(self, n_trees=100, learning_rate=0.1, max_depth=3,
                 min_samples_leaf=1, seed=0):
        self.n_trees = int(n_trees)
        self.learning_rate = float(learning_rate)
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.seed = int(seed)
        self.init = 0.0
        self.trees = []

    def fit(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        self.init = float(np.mean(y))
        self.trees = []
        current = np.full(len(y), self.init)
        for index in range(self.n_trees):
            tree = RegressionTree(self.max_depth, self.min_samples_leaf)
            tree.fit(x, y - current, np.random.default_rng([self.seed, index]))
            self.trees.append(tree)
            current = current + self.learning_rate * tree.predict(x)
        return self

    def staged_predict(self, x):
        """Yields the prediction after 0, 1, ..., n_trees trees."""
        x = np.asarray(x, dtype=float)
        current = np.full(len(x), self.init)
        yield current
        for tree in self.trees:
            current = current + self.learning_rate * tree.predict(x)
            yield current

    def predict(self, x):
        for current in self.staged_predict(x):
            pass
        return current

    def standardization(self):
        return None

    def get_state(self):
        return {'n_trees': self.n_trees,
                'learning_rate': self.learning_rate,
                'max_depth': self.max_depth,
                'min_samples_leaf': self.min_samples_leaf,
                'seed': self.seed, 'init': self.init,
                'trees': [tree.get_state() for tree in self.trees]}

    @classmethod
    def from_state(cls, state):
        model = cls(state['n_trees'], state['learning_rate'],
                    state['max_depth'], state['min_samples_leaf'],
                    state['seed'])
        model.init = state['init']
        model.trees = [RegressionTree.from_state(tree)
                       for tree in state['trees']]
        return model
