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

"""Bagged random forest of regression trees."""

import numpy as np

from degbench.trees import RegressionTree


class RandomForest(object):
    """Averages the predictions of independently randomized trees.

    Tree t draws its bootstrap sample and its per-split feature subsets from
    default_rng([seed, t]), so every tree is reproducible on its own.
    """

    def __init__(self, n_trees=100, max_depth=None, min_samples_leaf=1,
                 max_features='all', bootstrap=True, seed=0):
        self.n_trees = int(n_trees)
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.bootstrap = bool(bootstrap)
        self.seed = int(seed)
        self.trees = []

    def fit(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        n = len(y)
        self.trees = []
        for index in range(self.n_trees):
            rng = np.random.default_rng([self.seed, index])
            if self.bootstrap:
                rows = rng.integers(0, n, size=n)
            else:
                rows = np.arange(n)
            tree = RegressionTree(self.max_depth, self.min_samples_leaf,
                                  self.max_features)
            self.trees.append(tree.fit(x[rows], y[rows], rng))
        return self

    def tree_predictions(self, x):
        """(n_trees, n) array of every tree's predictions."""
        return np.stack([tree.predict(x) for tree in self.trees])

    def predict(self, x):
        return np.mean(self.tree_predictions(x), axis=0)

    def standardization(self):
        return None

    def get_state(self):
        return {'n_trees': self.n_trees, 'max_depth': self.max_depth,
                'min_samples_leaf': self.min_samples_leaf,
                'max_features': self.max_features,
                'bootstrap': self.bootstrap, 'seed': self.seed,
                'trees': [tree.get_state() for tree in self.trees]}

    @classmethod
    def from_state(cls, state):
        forest = cls(state['n_trees'], state['max_depth'],
                     state['min_samples_leaf'], state['max_features'],
                     state['bootstrap'], state['seed'])
        forest.trees = [RegressionTree.from_state(tree)
                        for tree in state['trees']]
        return forest
