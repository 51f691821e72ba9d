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

"""CART regression trees stored as flat node arrays."""

import numpy as np

LEAF = -1


def resolve_max_features(max_features, n_features):
    """Number of candidate features per split for 'all', 'sqrt' or an int."""
    if max_features in (None, 'all'):
        return n_features
    if max_features == 'sqrt':
        return max(1, int(np.sqrt(n_features)))
    return max(1, min(int(max_features), n_features))


class RegressionTree(object):
    """Binary regression tree grown by exhaustive variance-reduction splits.

    Node i is a leaf when feature[i] == LEAF; otherwise rows with
    x[feature[i]] <= threshold[i] go to left[i] and the rest to right[i].
    value[i] is the mean target of the training rows that reached node i.
    """

    def __init__(self, max_depth=None, min_samples_leaf=1, max_features='all'):
        self.max_depth = max_depth
        self.min_samples_leaf = max(1, int(min_samples_leaf))
        self.max_features = max_features
        self.feature = None
        self.threshold = None
        self.left = None
        self.right = None
        self.value = None

    @property
    def node_count(self):
        return len(self.feature)

    def _best_split(self, x, y, features):
        """Returns (feature, threshold) of the best split, or None."""
        n = len(y)
        leaf = self.min_samples_leaf
        if n < 2 * leaf:
            return None
        columns = x[:, features]
        order = np.argsort(columns, axis=0, kind='mergesort')
        xs = np.take_along_axis(columns, order, axis=0)
        centered = (y - np.mean(y))[order]
        running = np.cumsum(centered, axis=0)
        left_sum = running[:-1]
        total = running[-1]
        n_left = np.arange(1, n, dtype=float)[:, np.newaxis]
        right_sum = total - left_sum
        gain = left_sum ** 2 / n_left + right_sum ** 2 / (n - n_left)

        valid = xs[:-1] < xs[1:]
        valid[:leaf - 1] = False
        valid[n - leaf:] = False
        if not valid.any():
            return None
        gain = np.where(valid, gain, -np.inf)
        position, column = np.unravel_index(np.argmax(gain), gain.shape)
        if not gain[position, column] > 0.0:
            return None

        a = xs[position, column]
        b = xs[position + 1, column]
        threshold = (a + b) / 2.0
        if not a <= threshold < b:
            threshold = a
        return int(features[column]), float(threshold)

    def fit(self, x, y, rng=None):
        """Grows the tree.

        Args:
          x: (n, m) float array.
          y: (n,) float array.
          rng: numpy Generator for per-split feature sampling; required when
            max_features selects fewer than m features.

        Returns:
          self.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        n_features = x.shape[1]
        k = resolve_max_features(self.max_features, n_features)

        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(rows):
            feature.append(LEAF)
            threshold.append(0.0)
            left.append(LEAF)
            right.append(LEAF)
            value.append(float(np.mean(y[rows])))
            return len(feature) - 1

        stack = [(new_node(np.arange(len(y))), np.arange(len(y)), 0)]
        while stack:
            node, rows, depth = stack.pop()
            targets = y[rows]
            if np.all(targets == targets[0]):
                value[node] = float(targets[0])
                continue
            if self.max_depth is not None and depth >= self.max_depth:
                continue
            if k < n_features:
                features = np.sort(rng.choice(n_features, k, replace=False))
            else:
                features = np.arange(n_features)
            split = self._best_split(x[rows], targets, features)
            if split is None:
                continue
            feature[node], threshold[node] = split
            goes_left = x[rows, split[0]] <= split[1]
            left_rows = rows[goes_left]
            right_rows = rows[~goes_left]
            left[node] = new_node(left_rows)
            right[node] = new_node(right_rows)
            stack.append((right[node], right_rows, depth + 1))
            stack.append((left[node], left_rows, depth + 1))

        self.feature = np.array(feature, dtype=np.int64)
        self.threshold = np.array(threshold, dtype=float)
        self.left = np.array(left, dtype=np.int64)
        self.right = np.array(right, dtype=np.int64)
        self.value = np.array(value, dtype=float)
        return self

    def apply(self, x):
        """Returns the leaf index reached by every row."""
        x = np.asarray(x, dtype=float)
        node = np.zeros(len(x), dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            current = node[rows]
            goes_left = (x[rows, self.feature[current]] <=
                         self.threshold[current])
            node[rows] = np.where(goes_left, self.left[current],
                                  self.right[current])
            active = self.feature[node] != LEAF
        return node

    def predict(self, x):
        return self.value[self.apply(x)]

    def features_used(self):
        return sorted(set(int(f) for f in self.feature if f != LEAF))

    def get_state(self):
        return {'max_depth': self.max_depth,
                'min_samples_leaf': self.min_samples_leaf,
                'max_features': self.max_features,
                'feature': self.feature.tolist(),
                'threshold': self.threshold.tolist(),
                'left': self.left.tolist(),
                'right': self.right.tolist(),
                'value': self.value.tolist()}

    @classmethod
    def from_state(cls, state):
        tree = cls(state['max_depth'], state['min_samples_leaf'],
                   state['max_features'])
        tree.feature = np.array(state['feature'], dtype=np.int64)
        tree.threshold = np.array(state['threshold'], dtype=float)
        tree.left = np.array(state['left'], dtype=np.int64)
        tree.right = np.array(state['right'], dtype=np.int64)
        tree.value = np.array(state['value'], dtype=float)
        return tree
