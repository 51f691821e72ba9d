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

"""A simple, pickle-serializable record of one benchmark sweep cell."""

from degbench import families
from degbench.common.error import Error
from degbench.metrics import MetricsBundle


class SweepCell(object):
    """Coordinates of one sweep cell.

    Attributes:
      cutoff: Time cutoff in days.
      family: Learner family.
      fraction: Training fraction of the split.
      pfi: Whether the PFI-filtered variant is trained.
      seed: Replicate seed of the sweep.
    """

    def __init__(self, cutoff, family, fraction, pfi, seed):
        self.cutoff = float(cutoff)
        self.family = family
        self.fraction = float(fraction)
        self.pfi = bool(pfi)
        self.seed = int(seed)

    @property
    def label(self):
        return families.label(self.family, self.fraction, self.pfi)

    def key(self):
        return (self.cutoff, families.Family.ALL.index(self.family),
                self.fraction, self.pfi, self.seed)

    def to_dict(self):
        return {'cutoff': self.cutoff, 'family': self.family,
                'fraction': self.fraction, 'pfi': self.pfi,
                'seed': self.seed}

    @classmethod
    def from_dict(cls, data):
        return cls(data['cutoff'], data['family'], data['fraction'],
                   data['pfi'], data['seed'])

    def __eq__(self, other):
        return isinstance(other, SweepCell) and self.key() == other.key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return 'SweepCell(%g, %s, seed=%d)' % (self.cutoff, self.label,
                                               self.seed)


class SweepRecord(object):
    """Record-keeping struct that can be serialized back from a process.

    Trained models stay in the worker; only what the report needs travels
    back. A failed cell keeps its error and no metrics.

    Attributes:
      cell: The SweepCell.
      spec: Dict form of the chosen learners.LearnerSpec.
      features: Feature names the final model was trained on.
      train_metrics: MetricsBundle on the training rows.
      valid_metrics: MetricsBundle on the validation rows.
      importance: Dict form of the FeatureImportance used for filtering.
      error: Error of a failed cell, else None.
    """

    def __init__(self, cell, spec=None, features=None, train_metrics=None,
                 valid_metrics=None, importance=None, error=None):
        self.cell = cell
        self.spec = spec
        self.features = list(features or [])
        self.train_metrics = train_metrics
        self.valid_metrics = valid_metrics
        self.importance = importance
        self.error = error

    @property
    def failed(self):
        return self.error is not None

    @property
    def label(self):
        return self.cell.label

    def to_dict(self):
        result = {'cell': self.cell.to_dict(), 'label': self.label,
                  'failed': self.failed}
        if self.failed:
            result['error'] = self.error.to_dict()
            return result
        result.update({
            'spec': self.spec,
            'features': self.features,
            'train_metrics': self.train_metrics.to_dict(),
            'valid_metrics': self.valid_metrics.to_dict(),
            'importance': self.importance,
        })
        return result

    @classmethod
    def from_dict(cls, data):
        cell = SweepCell.from_dict(data['cell'])
        if data['failed']:
            e = data['error']
            return cls(cell, error=Error(e['code'], e['message'], e.get('row'),
                                         e.get('column'), e.get('details')))
        return cls(cell, data['spec'], data['features'],
                   MetricsBundle.from_dict(data['train_metrics']),
                   MetricsBundle.from_dict(data['valid_metrics']),
                   data.get('importance'))
