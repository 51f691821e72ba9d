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

"""Unit tests for the synth and sweeprecord modules."""

import unittest

import numpy as np

from degbench import errors
from degbench import schema
from degbench import synth
from degbench.common.error import DegBenchError
from degbench.common.error import Error
from degbench.families import Family
from degbench.metrics import MetricsBundle
from degbench.sweeprecord import SweepCell
from degbench.sweeprecord import SweepRecord


class SynthTest(unittest.TestCase):

    def test_layout(self):
        table = synth.synth_dataset(n_cells=3, seed=1)
        self.assertEqual(3 * len(synth.DEFAULT_DAYS), table.n_rows)
        self.assertEqual(synth.default_schema(), table.columns)
        schema.validate_schema(table.columns)
        self.assertEqual(['Cell1', 'Cell2', 'Cell3'],
                         sorted(set(table.group_ids)))
        self.assertEqual(0.0, table.times[0])
        self.assertEqual(180.0, table.times[-1])

    def test_manufacturing_values_are_held_per_cell(self):
        table = synth.synth_dataset(n_cells=2, seed=2)
        for label in ('Cell1', 'Cell2'):
            rows = table.group_ids == label
            for name, _, low, high in synth.MANUFACTURING:
                values = table.frame[name].to_numpy()[rows]
                self.assertEqual(1, len(set(values)))
                self.assertTrue(low <= values[0] <= high)
            temperatures = table.frame['temperature_c'].to_numpy()[rows]
            self.assertGreater(len(set(temperatures)), 1)

    def test_noise_free_target_follows_the_rule(self):
        table = synth.synth_dataset(n_cells=2, noise_sd=0.0, seed=3)
        rows = np.flatnonzero(table.group_ids == 'Cell2')
        values = dict((name, table.frame[name].iloc[rows[0]])
                      for name, _, _, _ in synth.MANUFACTURING)
        expected = (synth.manufacturing_factor(values) *
                    synth.DEFAULT_DECAY(table.times[rows]))
        np.testing.assert_allclose(expected, table.target[rows])

    def test_seeded(self):
        first = synth.synth_dataset(n_cells=2, seed=5)
        second = synth.synth_dataset(n_cells=2, seed=5)
        self.assertTrue(first.frame.equals(second.frame))
        other = synth.synth_dataset(n_cells=2, seed=6)
        self.assertFalse(first.frame.equals(other.frame))

    def test_custom_days(self):
        table = synth.synth_dataset(n_cells=1, days=[0, 10, 20])
        np.testing.assert_array_equal([0.0, 10.0, 20.0], table.times)
        with self.assertRaises(DegBenchError) as ctx:
            synth.synth_dataset(n_cells=0)
        self.assertEqual(errors.INVALID_ARGUMENT, ctx.exception.code)


class SweepRecordTest(unittest.TestCase):

    def test_label_and_order(self):
        cells = [SweepCell(90, Family.MVL, 0.8, False, 0),
                 SweepCell(30, Family.NN, 0.9, True, 1),
                 SweepCell(30, Family.RF, 0.6, False, 0)]
        self.assertEqual('NN-90-10 PFI', cells[1].label)
        ordered = sorted(cells, key=SweepCell.key)
        self.assertEqual([Family.RF, Family.NN, Family.MVL],
                         [cell.family for cell in ordered])
        self.assertEqual(cells[0], SweepCell(90.0, 'MVL', 0.8, 0, 0))

    def test_failed_record(self):
        cell = SweepCell(60, Family.GB, 0.7, True, 2)
        record = SweepRecord(cell, error=Error(errors.TOO_FEW_ROWS, 'few'))
        data = record.to_dict()
        self.assertTrue(data['failed'])
        self.assertNotIn('valid_metrics', data)
        again = SweepRecord.from_dict(data)
        self.assertEqual(errors.TOO_FEW_ROWS, again.error.code)
        self.assertEqual(cell, again.cell)

    def test_successful_record(self):
        cell = SweepCell(60, Family.MVL, 0.7, False, 0)
        metrics = MetricsBundle.evaluate([1.0, 2.0, 3.0], [1.0, 2.5, 3.0],
                                         'validation')
        record = SweepRecord(cell, {'family': 'MVL'}, ['x1'], metrics,
                             metrics)
        again = SweepRecord.from_dict(record.to_dict())
        self.assertFalse(again.failed)
        self.assertEqual(record.to_dict(), again.to_dict())


if __name__ == '__main__':
    unittest.main()
