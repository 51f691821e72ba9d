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

"""Unit tests for the importance and shapley modules."""

import unittest

import numpy as np

from degbench import errors
from degbench import importance
from degbench import learners
from degbench import shapley
from degbench import synth
from degbench import testutil
from degbench.common.error import DegBenchError
from degbench.families import Family
from degbench.importance import FeatureImportance
from degbench.learners import LearnerSpec


def _Linear(weights, n_rows=60):
    x, y, names = testutil.Matrix(testutil.LinearTable(n_rows=n_rows,
                                                       weights=weights))
    return learners.train(LearnerSpec(Family.MVL), x, y, names), x, y


class PermutationImportanceTest(unittest.TestCase):

    def test_ranking_follows_weights(self):
        model, x, y = _Linear((1.0, -3.0, 0.0))
        result = importance.permutation_importance(model, x[40:], y[40:],
                                                   repeats=5, seed=3)
        self.assertEqual(['x2', 'x1', 'x3'], result.ranking())
        self.assertAlmostEqual(0.0, result.as_dict()['x3'], places=9)
        self.assertEqual(['x1', 'x2'], importance.select_important(result))
        self.assertEqual((3,), result.std.shape)

    def test_noise_feature_ranks_last(self):
        for seed in range(10):
            table = testutil.LinearTable(n_rows=500, weights=(2.0, 1.0, 0.0),
                                         noise_sd=0.05, seed=seed)
            x, y, names = testutil.Matrix(table)
            model = learners.train(LearnerSpec(Family.MVL), x[:400], y[:400],
                                   names)
            result = importance.permutation_importance(
                model, x[400:], y[400:], repeats=10, seed=seed)
            self.assertEqual(['x1', 'x2', 'x3'], result.ranking())
            scores = result.as_dict()
            self.assertLess(scores['x3'], 0.05 * scores['x1'])

            forest = learners.train(LearnerSpec(Family.RF, {'n_trees': 30},
                                                seed), x[:80], y[:80], names)
            result = importance.permutation_importance(
                forest, x[400:], y[400:], repeats=5, seed=seed)
            self.assertEqual('x3', result.ranking()[-1])

    def test_solvent_dominates_a_single_day(self):
        names = [name for name, _, _, _ in
                 synth.MANUFACTURING + synth.ENVIRONMENT]
        for seed in range(3):
            table = synth.synth_dataset(n_cells=100, days=[0.0], seed=seed)
            x = table.frame[names].to_numpy(dtype=float)
            y = table.target
            for spec in (LearnerSpec(Family.MVL),
                         LearnerSpec(Family.RF, {'n_trees': 30}, seed)):
                model = learners.train(spec, x[:70], y[:70], names)
                result = importance.permutation_importance(
                    model, x[70:], y[70:], repeats=5, seed=seed)
                self.assertEqual(synth.SOLVENT, result.ranking()[0])

    def test_deterministic(self):
        model, x, y = _Linear((1.0, 1.0, 1.0))
        first = importance.permutation_importance(model, x, y, 6, 1)
        second = importance.permutation_importance(model, x, y, 6, 1)
        self.assertEqual(first.to_dict(), second.to_dict())
        again = FeatureImportance.from_dict(first.to_dict())
        self.assertEqual(first.to_dict(), again.to_dict())

    def test_invalid_arguments(self):
        model, x, y = _Linear((1.0, 1.0, 1.0))
        with self.assertRaises(DegBenchError) as ctx:
            importance.permutation_importance(model, x, y, repeats=4)
        self.assertEqual(errors.INVALID_ARGUMENT, ctx.exception.code)
        with self.assertRaises(DegBenchError) as ctx:
            importance.permutation_importance(model, x[:0], y[:0])
        self.assertEqual(errors.EMPTY_PARTITION, ctx.exception.code)

    def test_nothing_important_keeps_everything(self):
        result = FeatureImportance(['a', 'b'], [-0.1, 0.0], [0.0, 0.0], 5, 0)
        self.assertEqual(['a', 'b'], importance.select_important(result))
        result = FeatureImportance(['a', 'b', 'c'], [1.0, 0.04, 0.03],
                                   [0.0] * 3, 5, 0)
        self.assertEqual(['a', 'b'], importance.select_important(result))


class ShapleyTest(unittest.TestCase):

    def test_linear_closed_form(self):
        model, x, _ = _Linear((1.5, -2.0, 0.5))
        background = x[:20]
        rows = x[40:45]
        result = shapley.shapley(model, rows, background)
        weights, _ = model.linear_coefficients()
        w = np.array([weights[name] for name in model.feature_names])
        expected = (rows - background.mean(axis=0)) * w
        np.testing.assert_allclose(expected, result.values, atol=1e-10)

    def test_efficiency(self):
        x, y, names = testutil.Matrix(testutil.LinearTable(n_rows=50,
                                                           noise_sd=0.1))
        model = learners.train(LearnerSpec(Family.RF, {'n_trees': 5}), x, y,
                               names)
        result = shapley.shapley(model, x[:6], x[10:25],
                                 background_rows=range(10, 25))
        np.testing.assert_allclose(
            result.predictions, result.baseline + result.values.sum(axis=1),
            atol=1e-10)
        self.assertAlmostEqual(
            float(np.mean(learners.predict(model, x[10:25]))),
            result.baseline)
        self.assertEqual(list(range(10, 25)), result.background)

    def test_symmetric_features_share_credit(self):
        model, x, _ = _Linear((1.0, 1.0, 0.5))
        x = x.copy()
        x[:, 1] = x[:, 0]
        result = shapley.shapley(model, x[40:46], x[:20])
        np.testing.assert_allclose(result.values[:, 0], result.values[:, 1],
                                   atol=1e-9)
        self.assertGreater(np.abs(result.values[:, 0]).max(), 0.01)

    def test_unused_feature_gets_nothing(self):
        x, y, names = testutil.Matrix(testutil.LinearTable(n_rows=50))
        x = x.copy()
        x[:, 2] = 0.5
        model = learners.train(LearnerSpec(Family.RF, {'n_trees': 5}), x, y,
                               names)
        rows = x[:4].copy()
        rows[:, 2] = 3.0
        result = shapley.shapley(model, rows, x[20:30])
        np.testing.assert_array_equal(np.zeros(4), result.values[:, 2])
        self.assertEqual(0.0, result.mean_abs()['x3'])

    def test_coalition_masks(self):
        masks = shapley.coalition_masks(3)
        self.assertEqual((8, 3), masks.shape)
        self.assertEqual([True, False, True], masks[5].tolist())

    def test_limits(self):
        model, x, _ = _Linear((1.0,) * 21)
        with self.assertRaises(DegBenchError) as ctx:
            shapley.shapley(model, x[:1], x[:5])
        self.assertEqual(errors.TOO_MANY_FEATURES, ctx.exception.code)
        model, x, _ = _Linear((1.0, 2.0))
        with self.assertRaises(DegBenchError) as ctx:
            shapley.shapley(model, x[:1], np.zeros((0, 2)))
        self.assertEqual(errors.EMPTY_PARTITION, ctx.exception.code)
        with self.assertRaises(DegBenchError) as ctx:
            shapley.shapley(model, x[:1], [])
        self.assertEqual(errors.EMPTY_PARTITION, ctx.exception.code)

    def test_dict_round_trip(self):
        model, x, _ = _Linear((1.0, 2.0))
        result = shapley.shapley(model, x[:3], x[5:10])
        again = shapley.ShapleyResult.from_dict(result.to_dict())
        self.assertEqual(result.to_dict(), again.to_dict())


if __name__ == '__main__':
    unittest.main()
