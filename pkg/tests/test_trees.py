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

"""Unit tests for the tree-based estimators."""

import unittest

import numpy as np

from degbench import trees
from degbench.boosting import GradientBoosting
from degbench.forest import RandomForest
from degbench.trees import RegressionTree


def _Step(n=10):
    x = np.arange(n, dtype=float)[:, np.newaxis]
    return x, (x[:, 0] >= n // 2).astype(float)


class RegressionTreeTest(unittest.TestCase):

    def test_single_split(self):
        x, y = _Step()
        tree = RegressionTree().fit(x, y)
        self.assertEqual(3, tree.node_count)
        self.assertEqual(0, tree.feature[0])
        self.assertEqual(4.5, tree.threshold[0])
        np.testing.assert_array_equal(y, tree.predict(x))
        self.assertEqual([0], tree.features_used())

    def test_picks_informative_feature(self):
        rng = np.random.default_rng(1)
        noise = rng.uniform(size=40)
        signal = np.repeat([0.0, 1.0], 20)
        x = np.column_stack([noise, signal])
        tree = RegressionTree(max_depth=1).fit(x, 3.0 * signal)
        self.assertEqual(1, tree.feature[0])

    def test_fully_grown_tree_interpolates(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(size=(30, 3))
        y = rng.normal(size=30)
        tree = RegressionTree().fit(x, y)
        np.testing.assert_allclose(y, tree.predict(x))

    def test_min_samples_leaf(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(size=(50, 2))
        y = rng.normal(size=50)
        tree = RegressionTree(min_samples_leaf=4).fit(x, y)
        counts = np.bincount(tree.apply(x), minlength=tree.node_count)
        leaves = np.flatnonzero(tree.feature == trees.LEAF)
        self.assertTrue(np.all(counts[leaves] >= 4))

    def test_depth_zero_is_the_mean(self):
        x, y = _Step()
        tree = RegressionTree(max_depth=0).fit(x, y)
        self.assertEqual(1, tree.node_count)
        np.testing.assert_array_equal(np.full(10, 0.5), tree.predict(x))

    def test_no_split_on_identical_rows(self):
        x = np.ones((6, 2))
        tree = RegressionTree().fit(x, np.arange(6.0))
        self.assertEqual(1, tree.node_count)

    def test_resolve_max_features(self):
        self.assertEqual(9, trees.resolve_max_features('all', 9))
        self.assertEqual(3, trees.resolve_max_features('sqrt', 9))
        self.assertEqual(1, trees.resolve_max_features('sqrt', 2))
        self.assertEqual(4, trees.resolve_max_features(12, 4))


class RandomForestTest(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(5)
        self.x = rng.uniform(size=(40, 3))
        self.y = self.x[:, 0] - 2.0 * self.x[:, 2]

    def test_deterministic(self):
        first = RandomForest(n_trees=8, seed=4).fit(self.x, self.y)
        second = RandomForest(n_trees=8, seed=4).fit(self.x, self.y)
        np.testing.assert_array_equal(first.predict(self.x),
                                      second.predict(self.x))
        other = RandomForest(n_trees=8, seed=5).fit(self.x, self.y)
        self.assertFalse(np.array_equal(first.predict(self.x),
                                        other.predict(self.x)))

    def test_without_bootstrap_trees_agree(self):
        forest = RandomForest(n_trees=3, bootstrap=False).fit(self.x, self.y)
        spread = forest.tree_predictions(self.x)
        np.testing.assert_array_equal(spread[0], spread[2])
        np.testing.assert_allclose(self.y, forest.predict(self.x))

    def test_sqrt_features_still_fits(self):
        forest = RandomForest(n_trees=20, max_features='sqrt',
                              seed=1).fit(self.x, self.y)
        residual = self.y - forest.predict(self.x)
        self.assertLess(np.std(residual), 0.5 * np.std(self.y))


class GradientBoostingTest(unittest.TestCase):

    def test_training_loss_never_increases(self):
        rng = np.random.default_rng(6)
        x = rng.uniform(size=(50, 2))
        y = np.sin(4.0 * x[:, 0]) + x[:, 1]
        model = GradientBoosting(n_trees=30, max_depth=2).fit(x, y)
        losses = [float(np.sum((y - stage) ** 2))
                  for stage in model.staged_predict(x)]
        self.assertEqual(31, len(losses))
        for before, after in zip(losses, losses[1:]):
            self.assertLessEqual(after, before + 1e-12)
        self.assertLess(losses[-1], 0.5 * losses[0])
        np.testing.assert_allclose(np.full(50, np.mean(y)),
                                   next(model.staged_predict(x)))


if __name__ == '__main__':
    unittest.main()
