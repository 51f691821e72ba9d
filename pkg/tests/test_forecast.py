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

"""Unit tests for the forecast module."""

import os
import shutil
import tempfile
import unittest

import numpy as np
import pandas as pd

from degbench import errors
from degbench import forecast
from degbench import lmfit
from degbench import synth
from degbench import testutil
from degbench.common.error import DegBenchError
from degbench.families import Kind
from degbench.parametric import ParametricModel

_DAYS = np.arange(0.0, 181.0, 10.0)


def _Series():
    return {'A': (_DAYS, 0.95 * np.exp(-0.004 * _DAYS)),
            'B': (_DAYS, 0.9 * np.exp(-0.002 * _DAYS))}


class SeriesTest(unittest.TestCase):

    def test_series_from_frame(self):
        frame = pd.DataFrame({'cell': ['B', 'A', 'A', 'B'],
                              'day': [7.0, 30.0, 0.0, 0.0],
                              'pce': [0.8, 0.9, 1.0, 1.0]})
        series = forecast.series_from_frame(frame, device_column='cell')
        self.assertEqual(['A', 'B'], list(series))
        np.testing.assert_array_equal([0.0, 30.0], series['A'][0])
        np.testing.assert_array_equal([1.0, 0.9], series['A'][1])
        single = forecast.series_from_frame(frame)
        self.assertEqual(['all'], list(single))
        self.assertEqual(4, len(single['all'][0]))

    def test_missing_column(self):
        frame = pd.DataFrame({'day': [0.0], 'pce': [1.0]})
        with self.assertRaises(DegBenchError) as ctx:
            forecast.series_from_frame(frame, target_column='pce_norm')
        self.assertEqual(errors.HEADER_MISMATCH, ctx.exception.code)
        self.assertEqual('pce_norm', ctx.exception.error.column)

    def test_target_column_is_detected(self):
        frame = pd.DataFrame({'day': [0.0, 5.0], 'pce_norm': [1.0, 0.9]})
        series = forecast.series_from_frame(frame)
        np.testing.assert_array_equal([1.0, 0.9], series['all'][1])
        frame['pce'] = [0.02, 0.01]
        series = forecast.series_from_frame(frame)
        np.testing.assert_array_equal([0.02, 0.01], series['all'][1])
        with self.assertRaises(DegBenchError) as ctx:
            forecast.series_from_frame(frame[['day']])
        self.assertEqual(errors.HEADER_MISMATCH, ctx.exception.code)

    def test_load_series(self):
        tmp = tempfile.mkdtemp()
        try:
            path = testutil.Write(os.path.join(tmp, 'series.csv'),
                                  'day,pce\n0,1.0\n10,0.98\n')
            series = forecast.load_series(path)
            np.testing.assert_array_equal([1.0, 0.98], series['all'][1])
        finally:
            shutil.rmtree(tmp)
        with self.assertRaises(DegBenchError) as ctx:
            forecast.load_series(os.path.join(tmp, 'series.csv'))
        self.assertEqual(errors.FILE_NOT_FOUND, ctx.exception.code)


class ForecastExperimentTest(unittest.TestCase):

    def test_rows_in_canonical_order(self):
        table = forecast.forecast_experiment(Kind.EXP1, _Series(), [120, 60],
                                             [90, 180], jobs=1)
        keys = [(row.device, row.window, row.horizon) for row in table.rows]
        self.assertEqual([('A', 60.0, 90.0), ('A', 60.0, 180.0),
                          ('A', 120.0, 180.0), ('B', 60.0, 90.0),
                          ('B', 60.0, 180.0), ('B', 120.0, 180.0)], keys)
        row = table.lookup('A', 60.0, 90.0)
        self.assertEqual(3, row.metrics.n)
        self.assertLess(row.metrics.rmse, 1e-9)
        self.assertEqual('horizon', row.metrics.partition)
        self.assertEqual(60.0, row.fit.window_days)
        self.assertIsNone(table.lookup('A', 120.0, 90.0))

    def test_failed_fit_is_kept(self):
        series = _Series()
        series['C'] = (np.array([0.0, 70.0, 80.0]),
                       np.array([1.0, 0.9, 0.85]))
        table = forecast.forecast_experiment(Kind.EXP1, series, [60], [90],
                                             jobs=1)
        row = table.lookup('C', 60.0, 90.0)
        self.assertIsNone(row.metrics)
        self.assertEqual(errors.UNDERDETERMINED_FIT, row.error.code)
        self.assertIn('failed', table.to_markdown())
        self.assertIn('error', row.to_dict())

    def test_empty_horizons(self):
        with self.assertRaises(DegBenchError) as ctx:
            forecast.forecast_experiment(Kind.EXP1, _Series(), [180], [90],
                                         jobs=1)
        self.assertEqual(errors.EMPTY_HORIZON, ctx.exception.code)
        series = {'A': (np.array([0.0, 20.0, 40.0, 60.0, 100.0]),
                        np.array([1.0, 0.98, 0.96, 0.94, 0.9]))}
        with self.assertRaises(DegBenchError) as ctx:
            forecast.forecast_experiment(Kind.EXP1, series, [60], [90],
                                         jobs=1)
        self.assertEqual(errors.EMPTY_HORIZON, ctx.exception.code)
        self.assertEqual('A', ctx.exception.error.details['device'])

    def test_parallel_matches_serial(self):
        serial = forecast.forecast_experiment(Kind.GAUSS1, _Series(), [60],
                                              [120], jobs=1)
        pooled = forecast.forecast_experiment(Kind.GAUSS1, _Series(), [60],
                                              [120], jobs=2)
        self.assertEqual(serial.to_dict(), pooled.to_dict())


class SynthSeriesTest(unittest.TestCase):

    def test_noise_free_synth_recovers_the_decay(self):
        table = synth.synth_dataset(n_cells=2, noise_sd=0.0, seed=1)
        series = forecast.series_from_frame(table.frame, device_column='cell')
        self.assertEqual(['Cell1', 'Cell2'], list(series))
        expected = synth.DEFAULT_DECAY(synth.DEFAULT_DAYS)
        expected = expected / expected[0]
        for x, y in series.values():
            fit = lmfit.fit_lm(Kind.GAUSS2, x, y)
            shape = fit.model(x) / fit.model(0.0)
            np.testing.assert_allclose(expected, shape, atol=1e-6)
            self.assertLess(fit.metrics.rmse, 1e-6)

    def test_longer_window_forecasts_better(self):
        decay = ParametricModel(Kind.GAUSS2, [0.7, 0.0, 150.0,
                                              0.3, 0.0, 40.0])
        for seed in range(10):
            table = synth.synth_dataset(n_cells=1, decay=decay,
                                        noise_sd=0.01, seed=seed)
            series = forecast.series_from_frame(table.frame)
            result = forecast.forecast_experiment(Kind.GAUSS2, series,
                                                  [30, 120], [180], jobs=1)
            long_window = result.lookup('all', 120.0, 180.0)
            short_window = result.lookup('all', 30.0, 180.0)
            self.assertIsNotNone(long_window.metrics, 'seed %d' % seed)
            if short_window.metrics is None:
                continue
            self.assertLess(long_window.metrics.rmse,
                            short_window.metrics.rmse, 'seed %d' % seed)


class FitSummaryTest(unittest.TestCase):

    def test_summary_rows(self):
        series = _Series()
        series['C'] = (np.array([0.0, 100.0]), np.array([1.0, 0.9]))
        summary = forecast.fit_summary(series, [Kind.EXP1, Kind.POLY3],
                                       [60, 180], jobs=1)
        self.assertEqual([(Kind.EXP1, 60.0), (Kind.EXP1, 180.0),
                          (Kind.POLY3, 60.0), (Kind.POLY3, 180.0)],
                         [(row['kind'], row['window'])
                          for row in summary.rows])
        first = summary.rows[0]
        self.assertEqual(3, first['devices'])
        # C has a single point up to day 60.
        self.assertEqual(1, first['failed'])
        mean, sd = first['rmse']
        self.assertLess(mean, 1e-9)
        self.assertLess(sd, 1e-9)
        self.assertIn('+/-', summary.to_markdown())


if __name__ == '__main__':
    unittest.main()
