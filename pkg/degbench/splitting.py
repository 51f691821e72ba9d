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

"""Deterministic train/validation splits and k-fold partitions."""

import numpy as np

from degbench import errors
from degbench.common.error import DegBenchError

RANDOM_ROW = 'random-row'
LEAVE_GROUP_OUT = 'leave-group-out'
MODES = (RANDOM_ROW, LEAVE_GROUP_OUT)


class SplitConfig(object):
    """How to split a table.

    Attributes:
      train_fraction: Share of rows used for training, in (0, 1).
      seed: Non-negative integer seed of the row permutation.
      mode: RANDOM_ROW or LEAVE_GROUP_OUT.
      groups: Group labels held out in LEAVE_GROUP_OUT mode.
    """

    def __init__(self, train_fraction=0.9, seed=0, mode=RANDOM_ROW,
                 groups=()):
        if not 0.0 < train_fraction < 1.0:
            raise DegBenchError(errors.INVALID_SPLIT,
                                'train_fraction must lie in (0, 1), got %g.'
                                % train_fraction)
        if mode not in MODES:
            raise DegBenchError(errors.INVALID_SPLIT,
                                'Unknown split mode "%s".' % mode)
        if int(seed) < 0:
            raise DegBenchError(errors.INVALID_SPLIT,
                                'Seeds must be non-negative, got %d.' % seed)
        self.train_fraction = float(train_fraction)
        self.seed = int(seed)
        self.mode = mode
        self.groups = tuple(str(group) for group in groups)

    def to_dict(self):
        return {'train_fraction': self.train_fraction, 'seed': self.seed,
                'mode': self.mode, 'groups': list(self.groups)}


def train_size(n_rows, train_fraction):
    """round(train_fraction * n_rows), halves rounded up."""
    return int(np.floor(train_fraction * n_rows + 0.5))


def split(table, config):
    """Splits the rows of a table into training and validation indices.

    In RANDOM_ROW mode |train| = round(train_fraction * n) and the rows are
    drawn from a seeded permutation. In LEAVE_GROUP_OUT mode every row of
    config.groups is held out and train_fraction is not used.

    Args:
      table: A DataTable.
      config: A SplitConfig.

    Returns:
      A (train_indices, valid_indices) pair of sorted int arrays, disjoint
      and together covering 0..n-1.

    Raises:
      DegBenchError: TOO_FEW_ROWS, TOO_FEW_GROUPS, UNKNOWN_GROUP or
        EMPTY_PARTITION.
    """
    n_rows = table.n_rows
    if config.mode == RANDOM_ROW:
        if n_rows < 5:
            raise DegBenchError(errors.TOO_FEW_ROWS,
                                'Random splits need at least 5 rows, got %d.'
                                % n_rows)
        n_train = train_size(n_rows, config.train_fraction)
        if n_train == 0 or n_train == n_rows:
            raise DegBenchError(errors.EMPTY_PARTITION,
                                'A %g split of %d rows leaves an empty '
                                'partition.' % (config.train_fraction, n_rows))
        order = np.random.default_rng(config.seed).permutation(n_rows)
        train = np.sort(order[:n_train])
        valid = np.sort(order[n_train:])
    else:
        group_ids = table.group_ids
        if group_ids is None or len(set(group_ids)) < 2:
            raise DegBenchError(errors.TOO_FEW_GROUPS,
                                'Leave-group-out splits need at least two '
                                'groups.')
        for group in config.groups:
            if group not in set(group_ids):
                raise DegBenchError(errors.UNKNOWN_GROUP,
                                    'Group "%s" is not present in the table.'
                                    % group, details={'group': group})
        held_out = np.isin(group_ids, config.groups)
        train = np.flatnonzero(~held_out)
        valid = np.flatnonzero(held_out)
        if not len(train) or not len(valid):
            raise DegBenchError(errors.EMPTY_PARTITION,
                                'Holding out %s leaves an empty partition.' %
                                (', '.join(config.groups) or 'nothing'))

    assert len(np.intersect1d(train, valid)) == 0
    assert len(train) + len(valid) == n_rows
    return train, valid


def kfold(n_rows, k, seed):
    """Partitions 0..n_rows-1 into k seeded folds.

    Returns:
      A list of k sorted int arrays: disjoint, exhaustive, with sizes that
      differ by at most one.

    Raises:
      DegBenchError: INVALID_SPLIT when k < 2 or k > n_rows.
    """
    if k < 2 or k > n_rows:
        raise DegBenchError(errors.INVALID_SPLIT,
                            'Cannot build %d folds from %d rows.' % (k, n_rows))
    order = np.random.default_rng(seed).permutation(n_rows)
    return [np.sort(fold) for fold in np.array_split(order, k)]
