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

"""Unit tests for the benchmark module."""

import os
import shutil
import tempfile
import unittest

try:
    from unittest import mock
    from unittest.mock import MagicMock
except ImportError:
    import mock
    from mock import MagicMock

from degbench import benchmark
from degbench import curation
from degbench import errors
from degbench import synth
from degbench import testutil
from degbench.benchmark import BenchmarkConfig
from degbench.benchmark import BenchmarkReport
from degbench.common.error import DegBenchError
from degbench.common.error import Error
from degbench.families import Family
from degbench.metrics import MetricsBundle
from degbench.sweeprecord import SweepCell
from degbench.sweeprecord import SweepRecord


def _Table():
    return testutil.LinearTable(n_rows=60, noise_sd=0.05, n_groups=3,
                                days=True)


def _Record(cutoff, pfi, rmse_value, index):
    observed = [0.0, 1.0, 2.0]
    predicted = [rmse_value, 1.0 + rmse_value, 2.0 + rmse_value]
    metrics = MetricsBundle.evaluate(observed, predicted, 'validation')
    return SweepRecord(SweepCell(cutoff, Family.MVL, 0.8, pfi, index),
                       {'family': Family.MVL}, ['x1'], metrics, metrics)


class BenchmarkConfigTest(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_normalization(self):
        config = BenchmarkConfig(families=[Family.MVL, Family.RF],
                                 train_fractions=[0.9, 0.6, 0.9],
                                 time_cutoffs=[180, 30])
        self.assertEqual([Family.RF, Family.MVL], config.families)
        self.assertEqual([0.6, 0.9], config.train_fractions)
        self.assertEqual([30.0, 180.0], config.time_cutoffs)
        self.assertEqual([False, True], config.pfi_variants)
        self.assertEqual(2 * 2 * 2 * 2, len(config.cells()))
        self.assertEqual(config.to_dict(),
                         BenchmarkConfig.from_dict(config.to_dict()).to_dict())

    def test_cells_in_canonical_order(self):
        config = testutil.TinyConfig(families=Family.ALL, seeds=(1, 0))
        keys = [cell.key() for cell in config.cells()]
        self.assertEqual(sorted(keys), keys)
        self.assertEqual(Family.RF, config.cells()[0].family)

    def test_invalid(self):
        cases = ({'families': ['SVM']}, {'families': []},
                 {'train_fractions': [1.0]}, {'seeds': [-1]},
                 {'pfi_variants': []}, {'search_budget': 0},
                 {'pfi_repeats': 4}, {'pfi_threshold': 1.5})
        for kwargs in cases:
            with self.assertRaises(DegBenchError) as ctx:
                BenchmarkConfig(**kwargs)
            self.assertEqual(errors.INVALID_CONFIG, ctx.exception.code)

    def test_load_config(self):
        path = testutil.Write(
            os.path.join(self.tmp, 'bench.ini'),
            '[benchmark]\nfamilies = MVL, GB\ntrain_fractions = 0.7\n'
            'time_cutoffs = 60, 120\npfi_variants = no_pfi\nseed = 3\n')
        config = benchmark.load_config(path, seed=9, search_budget=None)
        self.assertEqual([Family.GB, Family.MVL], config.families)
        self.assertEqual([0.7], config.train_fractions)
        self.assertEqual([60.0, 120.0], config.time_cutoffs)
        self.assertEqual([False], config.pfi_variants)
        self.assertEqual(9, config.seed)
        self.assertEqual(2, config.search_budget)

    def test_bad_config_files(self):
        texts = ('[benchmark]\ncolour = red\n',
                 '[sweep]\nseed = 1\n',
                 '[benchmark]\npfi_variants = maybe\n',
                 '[benchmark]\nseeds = one\n')
        for index, text in enumerate(texts):
            path = testutil.Write(os.path.join(self.tmp, '%d.ini' % index),
                                  text)
            with self.assertRaises(DegBenchError) as ctx:
                benchmark.load_config(path)
            self.assertEqual(errors.INVALID_CONFIG, ctx.exception.code)
        with self.assertRaises(DegBenchError) as ctx:
            benchmark.load_config(os.path.join(self.tmp, 'missing.ini'))
        self.assertEqual(errors.FILE_NOT_FOUND, ctx.exception.code)


class SeedTest(unittest.TestCase):

    def test_split_seed_is_shared_across_families_and_variants(self):
        config = testutil.TinyConfig()
        a = SweepCell(180, Family.RF, 0.8, False, 0)
        b = SweepCell(180, Family.MVL, 0.8, True, 0)
        self.assertEqual(benchmark.split_seed(config, a),
                         benchmark.split_seed(config, b))
        self.assertNotEqual(benchmark.model_seed(config, a),
                            benchmark.model_seed(config, b))
        c = SweepCell(180, Family.RF, 0.8, False, 1)
        self.assertNotEqual(benchmark.split_seed(config, a),
                            benchmark.split_seed(config, c))

    def test_derive_seed(self):
        self.assertEqual(benchmark.derive_seed(1, 2, 3),
                         benchmark.derive_seed(1, 2, 3))
        self.assertNotEqual(benchmark.derive_seed(1, 2, 3),
                            benchmark.derive_seed(1, 3, 2))


class SelectChampionsTest(unittest.TestCase):

    def test_minimal_rmse_per_variant(self):
        entries = [_Record(60, False, 0.3, 0), _Record(60, True, 0.1, 1),
                   _Record(60, False, 0.2, 2), _Record(90, True, 0.5, 3),
                   SweepRecord(SweepCell(90, Family.RF, 0.8, False, 4),
                               error=Error(errors.TOO_FEW_ROWS, 'few'))]
        champions = benchmark.select_champions(entries, [60.0, 90.0])
        self.assertEqual(1, champions[60.0]['overall'])
        self.assertEqual(1, champions[60.0]['pfi'])
        self.assertEqual(2, champions[60.0]['no_pfi'])
        self.assertEqual([1, 2, 0], champions[60.0]['r2_ordering'])
        self.assertEqual(3, champions[90.0]['overall'])
        self.assertIsNone(champions[90.0]['no_pfi'])

    def test_ties_go_to_the_earlier_entry(self):
        entries = [_Record(60, False, 0.2, 0), _Record(60, True, 0.2, 1)]
        champions = benchmark.select_champions(entries, [60.0])
        self.assertEqual(0, champions[60.0]['overall'])


class RunBenchmarkTest(unittest.TestCase):

    def setUp(self):
        self.table = _Table()
        self.config = testutil.TinyConfig()

    def test_tiny_sweep(self):
        report = benchmark.run_benchmark(self.table, self.config, jobs=1)
        self.assertEqual(['MVL-80-20 No_PFI', 'MVL-80-20 PFI'],
                         [entry.label for entry in report.entries])
        plain, filtered = report.entries
        self.assertEqual(['day', 'x1', 'x2', 'x3'], plain.features)
        self.assertIn('x2', filtered.features)
        self.assertTrue(set(filtered.features) <= set(plain.features))
        self.assertIsNone(plain.importance)
        self.assertEqual(5, filtered.importance['repeats'])
        self.assertEqual(12, plain.valid_metrics.n)
        self.assertLess(plain.valid_metrics.rmse, 0.1)
        champion = report.champion()
        self.assertIn(champion, report.entries)
        self.assertEqual(report.entries[1], report.champion(180, 'pfi'))
        self.assertEqual([], report.errors)

    def test_report_is_deterministic(self):
        first = benchmark.run_benchmark(self.table, self.config, jobs=1)
        second = benchmark.run_benchmark(self.table, self.config, jobs=2)
        self.assertEqual(first.to_json(), second.to_json())
        again = BenchmarkReport.from_dict(first.to_dict())
        self.assertEqual(first.to_json(), again.to_json())

    def test_failed_cells_do_not_stop_the_sweep(self):
        config = testutil.TinyConfig(time_cutoffs=(3, 180),
                                     pfi_variants=(False,))
        handler = MagicMock()
        report = benchmark.run_benchmark(self.table, config, jobs=1,
                                         error_handler=handler)
        self.assertTrue(report.entries[0].failed)
        self.assertEqual(errors.TOO_FEW_ROWS, report.entries[0].error.code)
        self.assertFalse(report.entries[1].failed)
        self.assertIsNone(report.champion(3))
        self.assertEqual([errors.CELL_FAILED],
                         [err.code for err in report.errors])
        handler.HandleStage.assert_called_once_with('MVL-80-20 No_PFI')
        reported = handler.HandleError.call_args[0][0]
        self.assertEqual(errors.CELL_FAILED, reported.code)
        self.assertEqual(errors.TOO_FEW_ROWS,
                         reported.details['cause']['code'])

    def test_unexpected_exception_fails_only_its_cell(self):
        handler = MagicMock()
        with mock.patch.object(benchmark.importance, 'permutation_importance',
                               side_effect=ValueError('singular column')):
            report = benchmark.run_benchmark(self.table, self.config, jobs=1,
                                             error_handler=handler)
        plain, filtered = report.entries
        self.assertFalse(plain.failed)
        self.assertLess(plain.valid_metrics.rmse, 0.1)
        self.assertTrue(filtered.failed)
        self.assertEqual(errors.INTERNAL_ERROR, filtered.error.code)
        self.assertIn('ValueError: singular column', filtered.error.message)
        self.assertEqual([errors.CELL_FAILED],
                         [err.code for err in report.errors])
        self.assertIs(plain, report.champion())

    def test_cutoff_before_every_measurement(self):
        config = testutil.TinyConfig(time_cutoffs=(-5,))
        with self.assertRaises(DegBenchError) as ctx:
            benchmark.run_benchmark(self.table, config, jobs=1)
        self.assertEqual(errors.EMPTY_CUTOFF_WINDOW, ctx.exception.code)

    def test_rebuild_matches_the_sweep(self):
        report = benchmark.run_benchmark(self.table, self.config, jobs=1)
        for entry in report.entries:
            fit = benchmark.rebuild_model(self.table, self.config, entry)
            self.assertEqual(entry.to_dict(), fit.record.to_dict())
            self.assertEqual(entry.features, fit.model.feature_names)


class SyntheticChampionTest(unittest.TestCase):

    def test_tree_family_wins_on_synthetic_cells(self):
        table, _ = curation.curate(synth.synth_dataset(seed=0))
        config = testutil.TinyConfig(
            families=(Family.RF, Family.GB, Family.MVL),
            train_fractions=(0.9,), pfi_variants=(False,))
        report = benchmark.run_benchmark(table, config, jobs=1)
        self.assertEqual([], report.errors)
        champion = report.champion()
        self.assertIn(champion.cell.family, (Family.RF, Family.GB))
        self.assertGreaterEqual(champion.valid_metrics.r2, 0.9)
        self.assertLessEqual(champion.valid_metrics.rmse, 0.1)
        linear, = [entry for entry in report.entries
                   if entry.cell.family == Family.MVL]
        self.assertLess(linear.valid_metrics.r2, champion.valid_metrics.r2)


if __name__ == '__main__':
    unittest.main()
