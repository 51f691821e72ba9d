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

"""Unit tests for the learner families and the shared contract."""

import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from degbench import errors
from degbench import learners
from degbench import mlp
from degbench import testutil
from degbench.common.error import DegBenchError
from degbench.families import Family
from degbench.learners import LearnerSpec

# Small settings that keep every family fast.
_QUICK = {
    Family.MVL: {},
    Family.RF: {'n_trees': 10},
    Family.GB: {'n_trees': 50},
    Family.NN: {'hidden': 8, 'epochs': 1000},
}


class LearnerSpecTest(unittest.TestCase):

    def test_defaults_are_filled(self):
        spec = LearnerSpec(Family.RF, {'n_trees': 10}, 3)
        self.assertEqual(10, spec.hyperparams['n_trees'])
        self.assertEqual('all', spec.hyperparams['max_features'])
        self.assertEqual(spec, LearnerSpec.from_dict(spec.to_dict()))

    def test_invalid_specs(self):
        cases = ((Family.RF, {'n_estimators': 5}, 0),
                 ('SVM', None, 0),
                 (Family.GB, None, -1))
        for family, hyperparams, seed in cases:
            with self.assertRaises(DegBenchError) as ctx:
                LearnerSpec(family, hyperparams, seed)
            self.assertEqual(errors.INVALID_SPEC, ctx.exception.code)


class TrainTest(unittest.TestCase):

    def setUp(self):
        self.x, self.y, self.names = testutil.Matrix(
            testutil.LinearTable(n_rows=60))

    def test_every_family_learns_a_linear_target(self):
        for family in Family.ALL:
            model = learners.train(LearnerSpec(family, _QUICK[family]),
                                   self.x, self.y, self.names)
            self.assertEqual(self.names, model.feature_names)
            self.assertEqual('train', model.training_metrics.partition)
            self.assertGreater(model.training_metrics.r2, 0.8,
                               msg='%s: %r' % (family,
                                               model.training_metrics.r2))

    def test_mvl_recovers_coefficients(self):
        model = learners.train(LearnerSpec(Family.MVL), self.x, self.y,
                               self.names)
        weights, intercept = model.linear_coefficients()
        self.assertAlmostEqual(1.5, weights['x1'])
        self.assertAlmostEqual(-2.0, weights['x2'])
        self.assertAlmostEqual(0.5, weights['x3'])
        self.assertAlmostEqual(0.25, intercept)
        forest = learners.train(LearnerSpec(Family.RF, _QUICK[Family.RF]),
                                self.x, self.y, self.names)
        with self.assertRaises(DegBenchError) as ctx:
            forest.linear_coefficients()
        self.assertEqual(errors.INVALID_SPEC, ctx.exception.code)

    def test_rank_deficient(self):
        x = np.column_stack([self.x, self.x[:, 1]])
        with self.assertRaises(DegBenchError) as ctx:
            learners.train(LearnerSpec(Family.MVL), x, self.y,
                           self.names + ['x2_copy'])
        self.assertEqual(errors.RANK_DEFICIENT, ctx.exception.code)
        self.assertEqual(1, len(ctx.exception.error.details['columns']))
        self.assertIn(ctx.exception.error.details['columns'][0],
                      ('x2', 'x2_copy'))

    def test_diverging_network(self):
        spec = LearnerSpec(Family.NN, {'learning_rate': 1e3, 'epochs': 500})
        with self.assertRaises(DegBenchError) as ctx:
            learners.train(spec, self.x, self.y)
        self.assertEqual(errors.NON_FINITE_LOSS, ctx.exception.code)

    def test_seeded_training_is_deterministic(self):
        for family in (Family.RF, Family.NN):
            spec = LearnerSpec(family, _QUICK[family], 7)
            first = learners.train(spec, self.x, self.y)
            second = learners.train(spec, self.x, self.y)
            np.testing.assert_array_equal(
                learners.predict(first, self.x),
                learners.predict(second, self.x))

    def test_bad_inputs(self):
        spec = LearnerSpec(Family.MVL)
        with self.assertRaises(DegBenchError) as ctx:
            learners.train(spec, self.x[:4], self.y[:4])
        self.assertEqual(errors.TOO_FEW_ROWS, ctx.exception.code)
        with self.assertRaises(DegBenchError) as ctx:
            learners.train(spec, self.x, self.y[:-1])
        self.assertEqual(errors.LENGTH_MISMATCH, ctx.exception.code)
        with self.assertRaises(DegBenchError) as ctx:
            learners.train(spec, self.x, self.y, ['a', 'b'])
        self.assertEqual(errors.COLUMN_MISMATCH, ctx.exception.code)


class PredictTest(unittest.TestCase):

    def setUp(self):
        self.table = testutil.LinearTable(n_rows=30)
        x, y, names = testutil.Matrix(self.table)
        self.model = learners.train(LearnerSpec(Family.MVL), x, y, names)

    def test_column_checks(self):
        x = self.table.features
        with self.assertRaises(DegBenchError) as ctx:
            learners.predict(self.model, x[:, :2])
        self.assertEqual(errors.COLUMN_MISMATCH, ctx.exception.code)
        with self.assertRaises(DegBenchError) as ctx:
            learners.predict(self.model, x, ['x3', 'x2', 'x1'])
        self.assertEqual(errors.COLUMN_MISMATCH, ctx.exception.code)

    def test_predict_table_selects_columns(self):
        wide = testutil.LinearTable(n_rows=30, days=True, n_groups=2)
        np.testing.assert_allclose(wide.target,
                                   learners.predict_table(self.model, wide))
        narrow = testutil.LinearTable(n_rows=5, weights=(1.0, 1.0))
        with self.assertRaises(DegBenchError) as ctx:
            learners.predict_table(self.model, narrow)
        self.assertEqual(['x3'], ctx.exception.error.details['missing'])


class HyperparamSearchTest(unittest.TestCase):

    def test_candidates(self):
        specs = learners.candidate_specs(Family.GB, 4, 1)
        self.assertEqual(4, len(specs))
        self.assertEqual(LearnerSpec(Family.GB, None, 1), specs[0])
        self.assertEqual(4, len(set(json.dumps(s.to_dict(), sort_keys=True)
                                    for s in specs)))
        self.assertEqual(specs, learners.candidate_specs(Family.GB, 4, 1))
        self.assertEqual(1, len(learners.candidate_specs(Family.MVL, 5, 0)))
        self.assertEqual(1, len(learners.candidate_specs(Family.RF, 0, 0)))

    def test_search_returns_a_candidate(self):
        x, y, names = testutil.Matrix(testutil.LinearTable(n_rows=40,
                                                           noise_sd=0.05))
        spec = learners.hyperparam_search(Family.GB, x[:30], y[:30], x[30:],
                                          y[30:], 2, 0, names)
        self.assertIn(spec, learners.candidate_specs(Family.GB, 2, 0))
        with self.assertRaises(DegBenchError) as ctx:
            learners.hyperparam_search(Family.GB, x[:30], y[:30], x[30:],
                                       y[30:], 0, 0)
        self.assertEqual(errors.INVALID_ARGUMENT, ctx.exception.code)


class PersistenceTest(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        table = testutil.LinearTable(n_rows=40, noise_sd=0.1, n_groups=2)
        self.x, self.y, self.names = testutil.Matrix(table)
        self.groups = table.group_ids

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_saved_models_predict_identically(self):
        for family in Family.ALL:
            model = learners.train(LearnerSpec(family, _QUICK[family], 2),
                                   self.x, self.y, self.names, self.groups)
            path = os.path.join(self.tmp, '%s.json' % family)
            learners.save_model(model, path)
            loaded = learners.load_model(path)
            self.assertEqual(model.spec, loaded.spec)
            self.assertEqual(['G1', 'G2'], loaded.training_groups)
            np.testing.assert_array_equal(
                learners.predict(model, self.x),
                learners.predict(loaded, self.x))

    def test_bad_documents(self):
        with self.assertRaises(DegBenchError) as ctx:
            learners.load_model(os.path.join(self.tmp, 'missing.json'))
        self.assertEqual(errors.FILE_NOT_FOUND, ctx.exception.code)
        path = testutil.Write(os.path.join(self.tmp, 'bad.json'), '{"a": ')
        with self.assertRaises(DegBenchError) as ctx:
            learners.load_model(path)
        self.assertEqual(errors.MODEL_FORMAT, ctx.exception.code)
        path = testutil.Write(os.path.join(self.tmp, 'old.json'),
                              '{"format_version": 0}')
        with self.assertRaises(DegBenchError) as ctx:
            learners.load_model(path)
        self.assertEqual(errors.MODEL_FORMAT, ctx.exception.code)


class NetworkGradientTest(unittest.TestCase):

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(12, 3))
        y = rng.normal(size=12)
        params = mlp.NeuralNetwork(hidden=5, seed=1).initial_params(3)
        _, gradients = mlp.loss_and_gradients(params, x, y)
        step = 1e-6
        for name in mlp.PARAMETERS:
            flat = np.atleast_1d(np.asarray(params[name], dtype=float))
            numeric = np.zeros(flat.size)
            for i in range(flat.size):
                shifted = []
                for sign in (1.0, -1.0):
                    trial = dict(params)
                    values = flat.copy().ravel()
                    values[i] += sign * step
                    trial[name] = values.reshape(np.shape(params[name]))
                    shifted.append(mlp.loss_and_gradients(trial, x, y)[0])
                numeric[i] = (shifted[0] - shifted[1]) / (2.0 * step)
            np.testing.assert_allclose(
                numeric, np.ravel(gradients[name]), rtol=1e-4, atol=1e-7,
                err_msg=name)

    def test_relu_units_with_he_initialisation(self):
        network = mlp.NeuralNetwork(hidden=400, seed=2)
        self.assertEqual(0.9, network.momentum)
        params = network.initial_params(50)
        self.assertAlmostEqual(np.sqrt(2.0 / 50), np.std(params['w1']),
                               delta=0.005)
        # Inactive units pass neither signal nor gradient.
        params['w1'] = -np.abs(params['w1'])
        params['b2'] = np.float64(0.3)
        x = np.abs(np.random.default_rng(3).normal(size=(4, 50)))
        loss, gradients = mlp.loss_and_gradients(params, x, np.full(4, 0.3))
        self.assertEqual(0.0, loss)
        np.testing.assert_array_equal(np.zeros((50, 400)), gradients['w1'])


if __name__ == '__main__':
    unittest.main()
