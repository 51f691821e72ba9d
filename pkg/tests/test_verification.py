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

"""Unit tests for the verification module."""

import unittest

import numpy as np

from degbench import errors
from degbench import splitting
from degbench import testutil
from degbench import verification
from degbench.common.error import DegBenchError
from degbench.families import Family
from degbench.learners import LearnerSpec
from degbench.splitting import SplitConfig


class QuartileOneHotTest(unittest.TestCase):

    def test_bins_at_training_quartiles(self):
        x_train = np.arange(8.0)[:, np.newaxis]
        x_other = np.array([[-5.0], [2.0], [100.0]])
        train, other, names = verification.quartile_onehot(x_train, x_other)
        self.assertEqual([(0, 1), (0, 2), (0, 3)], names)
        np.testing.assert_array_equal([0, 0, 1, 1, 0, 0, 0, 0], train[:, 0])
        np.testing.assert_array_equal([0, 0, 0, 0, 0, 0, 1, 1], train[:, 2])
        np.testing.assert_array_equal([[0, 0, 0], [1, 0, 0], [0, 0, 1]],
                                      other)

    def test_constant_columns_yield_nothing(self):
        _, _, names = verification.quartile_onehot(np.ones((6, 2)),
                                                   np.ones((2, 2)))
        self.assertEqual([], names)


class VerifyTest(unittest.TestCase):

    def setUp(self):
        self.table = testutil.LinearTable(n_rows=60, noise_sd=0.05)
        self.spec = LearnerSpec(Family.MVL, seed=4)
        self.split = SplitConfig(0.8, 2)

    def test_linear_model_passes(self):
        result = verification.verify(self.spec, self.table, self.split, k=5)
        self.assertTrue(result.passed)
        self.assertLess(result.model_rmse, 0.1)
        self.assertGreater(result.ymean_rmse, 3.0 * result.model_rmse)
        self.assertGreater(result.yshuffle_rmse, result.model_rmse)
        self.assertIsNotNone(result.onehot_rmse)
        self.assertEqual(5, len(result.kfold_folds))
        self.assertEqual(60, sum(m.n for m in result.kfold_folds))
        self.assertEqual('pooled-cv', result.kfold_pooled.partition)
        self.assertGreater(result.kfold_pooled.r2, 0.9)
        self.assertIn('quartile', result.notes[0])
        self.assertEqual([], result.errors)

    def test_shuffled_target_rarely_wins(self):
        wins = 0
        for seed in range(20):
            table = testutil.LinearTable(n_rows=60, noise_sd=0.2, seed=seed)
            result = verification.verify(LearnerSpec(Family.MVL, seed=seed),
                                         table, SplitConfig(0.8, seed), k=3)
            wins += result.yshuffle_rmse >= result.model_rmse
        self.assertGreaterEqual(wins, 19)

    def test_ymean_baseline(self):
        train, valid = splitting.split(self.table, self.split)
        y = self.table.target
        expected = np.sqrt(np.mean((y[valid] - np.mean(y[train])) ** 2))
        result = verification.verify(self.spec, self.table, self.split, k=3)
        self.assertAlmostEqual(expected, result.ymean_rmse)

    def test_deterministic(self):
        first = verification.verify(self.spec, self.table, self.split, k=4)
        second = verification.verify(self.spec, self.table, self.split, k=4)
        self.assertEqual(first.to_dict(), second.to_dict())
        again = verification.VerificationResult.from_dict(first.to_dict())
        self.assertEqual(first.to_dict(), again.to_dict())

    def test_bad_k(self):
        for k in (1, 61):
            with self.assertRaises(DegBenchError) as ctx:
                verification.verify(self.spec, self.table, self.split, k=k)
            self.assertEqual(errors.INVALID_SPLIT, ctx.exception.code)

    def test_constant_fold_target(self):
        table = testutil.LinearTable(n_rows=6)
        frame = table.frame.copy()
        frame['y'] = [1.0, 1.0, 1.0, 1.0, 1.0, 2.0]
        table = table.replace(frame=frame)
        with self.assertRaises(DegBenchError) as ctx:
            verification.verify(self.spec, table, SplitConfig(0.8, 0), k=6)
        self.assertEqual(errors.CONSTANT_TARGET, ctx.exception.code)


if __name__ == '__main__':
    unittest.main()
