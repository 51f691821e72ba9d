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

"""Learner families, parametric model kinds and their documented defaults."""


class Family(object):
    """Regression algorithm families available to the benchmark."""

    MVL = 'MVL'
    RF = 'RF'
    GB = 'GB'
    NN = 'NN'

    # Sweep order, also the canonical order of report entries.
    ALL = (RF, GB, NN, MVL)

    TREE_BASED = frozenset([RF, GB])
    STANDARDIZED = frozenset([MVL, NN])


class Kind(object):
    """Parametric degradation model kinds."""

    EXP1 = 'exp1'
    EXP2 = 'exp2'
    GAUSS1 = 'gauss1'
    GAUSS2 = 'gauss2'
    POLY3 = 'poly3'

    ALL = (EXP1, EXP2, GAUSS1, GAUSS2, POLY3)


COEFFICIENT_NAMES = {
    Kind.EXP1: ('a', 'b'),
    Kind.EXP2: ('a', 'b', 'c', 'd'),
    Kind.GAUSS1: ('a1', 'b1', 'c1'),
    Kind.GAUSS2: ('a1', 'b1', 'c1', 'a2', 'b2', 'c2'),
    Kind.POLY3: ('p1', 'p2', 'p3', 'p4'),
}

DEFAULT_HYPERPARAMS = {
    Family.MVL: {},
    Family.RF: {
        'n_trees': 100,
        'max_depth': None,
        'min_samples_leaf': 1,
        'max_features': 'all',
        'bootstrap': True,
    },
    Family.GB: {
        'n_trees': 100,
        'learning_rate': 0.1,
        'max_depth': 3,
    },
    Family.NN: {
        'hidden': 32,
        'learning_rate': 1e-2,
        'epochs': 2000,
        'momentum': 0.9,
    },
}

HYPERPARAM_GRIDS = {
    Family.MVL: {},
    Family.RF: {
        'n_trees': (100, 400),
        'max_depth': (None, 10),
        'min_samples_leaf': (1, 3),
        'max_features': ('all', 'sqrt'),
    },
    Family.GB: {
        'n_trees': (100, 300),
        'learning_rate': (0.05, 0.1),
        'max_depth': (2, 3),
    },
    Family.NN: {
        'hidden': (8, 32),
        'learning_rate': (1e-2, 1e-3),
        'epochs': (2000,),
    },
}

DEFAULT_TRAIN_FRACTIONS = (0.6, 0.7, 0.8, 0.9)
DEFAULT_TIME_CUTOFFS = (30, 60, 90, 120, 150, 180)
DEFAULT_FORECAST_WINDOWS = (30, 60, 90, 120)
DEFAULT_FORECAST_HORIZONS = (60, 90, 120, 150, 180)

DEFAULT_CORR_THRESHOLD = 0.9
DEFAULT_PFI_THRESHOLD = 0.04
DEFAULT_PFI_REPEATS = 10
DEFAULT_Z_THRESHOLD = 2.0
DEFAULT_KFOLD = 5
DEFAULT_SEARCH_BUDGET = 2
DEFAULT_BACKGROUND_SIZE = 20
MAX_SHAPLEY_FEATURES = 20

FAMILIES_DOC = ('Comma separated learner families to benchmark. Accepted '
                'values: ' + ', '.join(Family.ALL) + '. RF is a bagged '
                'forest of CART trees, GB gradient boosted trees, NN a '
                'single hidden layer perceptron and MVL ordinary least '
                'squares on standardized features.')

KINDS_DOC = ('Parametric degradation model. Accepted values:\n'
             ' - ' + Kind.EXP1 + ': a*exp(b*x)\n'
             ' - ' + Kind.EXP2 + ': a*exp(b*x) + c*exp(d*x)\n'
             ' - ' + Kind.GAUSS1 + ': a1*exp(-((x-b1)/c1)^2)\n'
             ' - ' + Kind.GAUSS2 + ': sum of two gauss1 terms\n'
             ' - ' + Kind.POLY3 + ': p1*x^3 + p2*x^2 + p3*x + p4\n')

CORR_THRESHOLD_DOC = ('Drop the later-declared feature of every pair whose '
                      'absolute Pearson correlation reaches this value '
                      '(default %.2f).' % DEFAULT_CORR_THRESHOLD)

PFI_THRESHOLD_DOC = ('Keep features whose permutation importance is at least '
                     'this fraction of the largest importance in the PFI '
                     'variant (default %.2f).' % DEFAULT_PFI_THRESHOLD)

Z_THRESHOLD_DOC = ('Flag rows whose standardized residual exceeds this value '
                   'in absolute terms (default %.1f).' % DEFAULT_Z_THRESHOLD)

SEED_DOC = ('Seed for every random draw. Falls back to the DEGBENCH_SEED '
            'environment variable, then to 0. Wall-clock time is never used.')

JOBS_DOC = ('Number of worker processes for sweeps. Defaults to the number '
            'of CPUs; results do not depend on this value. 1 disables '
            'multiprocessing, which may make debugging easier.')


def label(family, train_fraction, pfi=None):
    """Returns the ALGORITHM-TRAINING-VALID name of a sweep entry.

    Args:
      family: The learner family.
      train_fraction: Training share of the split, in (0, 1).
      pfi: True or False to append the PFI variant, None to omit it.

    Returns:
      A label such as 'RF-90-10' or 'RF-90-10 PFI'.
    """
    train = int(round(train_fraction * 100))
    name = '%s-%d-%d' % (family, train, 100 - train)
    if pfi is None:
        return name
    return '%s %s' % (name, 'PFI' if pfi else 'No_PFI')
