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

"""GENERATE stage: the (cutoff, family, fraction, variant, seed) sweep."""

import configparser
import functools
import json
import logging
import os

import numpy as np

from degbench import datatable
from degbench import errors
from degbench import families
from degbench import importance
from degbench import learners
from degbench import parallel
from degbench import splitting
from degbench.common.error import DegBenchError
from degbench.common.error import Error
from degbench.families import Family
from degbench.metrics import MetricsBundle
from degbench.sweeprecord import SweepCell
from degbench.sweeprecord import SweepRecord

_logger = logging.getLogger(__name__)

SECTION = 'benchmark'

_LIST_KEYS = {
    'families': str,
    'train_fractions': float,
    'seeds': int,
    'time_cutoffs': float,
}
_SCALAR_KEYS = {
    'search_budget': int,
    'pfi_threshold': float,
    'pfi_repeats': int,
    'seed': int,
}
_VARIANT_NAMES = {'no_pfi': False, 'pfi': True}


class BenchmarkConfig(object):
    """Axes and knobs of the benchmark sweep.

    Attributes:
      families: Learner families, kept in families.Family.ALL order.
      train_fractions: Training fractions, ascending.
      seeds: Replicate seeds, ascending.
      pfi_variants: Which variants to run: False (all features) and/or True
        (PFI-filtered features).
      time_cutoffs: Day cutoffs, ascending.
      search_budget: Hyperparameter candidates per cell.
      pfi_threshold: Relative importance a feature needs to survive the
        PFI filter.
      pfi_repeats: Permutations per feature.
      seed: Base seed every cell seed derives from.
    """

    def __init__(self, families=Family.ALL,
                 train_fractions=families.DEFAULT_TRAIN_FRACTIONS,
                 seeds=(0,), pfi_variants=(False, True),
                 time_cutoffs=families.DEFAULT_TIME_CUTOFFS,
                 search_budget=families.DEFAULT_SEARCH_BUDGET,
                 pfi_threshold=families.DEFAULT_PFI_THRESHOLD,
                 pfi_repeats=families.DEFAULT_PFI_REPEATS, seed=0):
        unknown = [f for f in families if f not in Family.ALL]
        if unknown or not families:
            raise DegBenchError(errors.INVALID_CONFIG,
                                'Families must be a nonempty subset of %s.' %
                                ', '.join(Family.ALL))
        if not train_fractions or not all(0.0 < f < 1.0
                                          for f in train_fractions):
            raise DegBenchError(errors.INVALID_CONFIG,
                                'Training fractions must be nonempty and lie '
                                'in (0, 1).')
        if not seeds or min(seeds) < 0 or int(seed) < 0:
            raise DegBenchError(errors.INVALID_CONFIG,
                                'Seeds must be nonempty and non-negative.')
        if not pfi_variants or not time_cutoffs:
            raise DegBenchError(errors.INVALID_CONFIG,
                                'PFI variants and time cutoffs must not be '
                                'empty.')
        if search_budget < 1 or pfi_repeats < importance.MIN_REPEATS:
            raise DegBenchError(errors.INVALID_CONFIG,
                                'search_budget must be >= 1 and pfi_repeats '
                                '>= %d.' % importance.MIN_REPEATS)
        if not 0.0 <= pfi_threshold <= 1.0:
            raise DegBenchError(errors.INVALID_CONFIG,
                                'pfi_threshold must lie in [0, 1].')
        self.families = [f for f in Family.ALL if f in set(families)]
        self.train_fractions = sorted(set(float(f) for f in train_fractions))
        self.seeds = sorted(set(int(s) for s in seeds))
        self.pfi_variants = sorted(set(bool(v) for v in pfi_variants))
        self.time_cutoffs = sorted(set(float(c) for c in time_cutoffs))
        self.search_budget = int(search_budget)
        self.pfi_threshold = float(pfi_threshold)
        self.pfi_repeats = int(pfi_repeats)
        self.seed = int(seed)

    def cells(self):
        """Every sweep cell, in canonical report order."""
        return [SweepCell(cutoff, family, fraction, pfi, seed)
                for cutoff in self.time_cutoffs
                for family in self.families
                for fraction in self.train_fractions
                for pfi in self.pfi_variants
                for seed in self.seeds]

    def to_dict(self):
        return {'families': list(self.families),
                'train_fractions': list(self.train_fractions),
                'seeds': list(self.seeds),
                'pfi_variants': list(self.pfi_variants),
                'time_cutoffs': list(self.time_cutoffs),
                'search_budget': self.search_budget,
                'pfi_threshold': self.pfi_threshold,
                'pfi_repeats': self.pfi_repeats,
                'seed': self.seed}

    @classmethod
    def from_dict(cls, data):
        return cls(data['families'], data['train_fractions'], data['seeds'],
                   data['pfi_variants'], data['time_cutoffs'],
                   data['search_budget'], data['pfi_threshold'],
                   data['pfi_repeats'], data['seed'])


def _parse_list(key, text, convert):
    try:
        return [convert(item.strip()) for item in text.split(',')
                if item.strip()]
    except ValueError:
        raise DegBenchError(errors.INVALID_CONFIG,
                            'Cannot parse %s = %s.' % (key, text))


def load_config(path, **overrides):
    """Reads a [benchmark] section; missing keys keep their defaults.

    Args:
      path: Config file path.
      **overrides: Values that win over the file, e.g. seed from the CLI.

    Raises:
      DegBenchError: FILE_NOT_FOUND, or INVALID_CONFIG for unknown keys,
        unparsable values or a missing section.
    """
    if not os.path.isfile(path):
        raise DegBenchError(errors.FILE_NOT_FOUND, 'File not found: %s' % path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding='utf-8')
    except configparser.Error as err:
        raise DegBenchError(errors.INVALID_CONFIG,
                            'Cannot parse %s: %s' % (path, err))
    if not parser.has_section(SECTION):
        raise DegBenchError(errors.INVALID_CONFIG,
                            '%s has no [%s] section.' % (path, SECTION))
    values = {}
    for key, text in parser.items(SECTION):
        if key in _LIST_KEYS:
            values[key] = _parse_list(key, text, _LIST_KEYS[key])
        elif key in _SCALAR_KEYS:
            values[key] = _parse_list(key, text, _SCALAR_KEYS[key])[0] \
                if text.strip() else None
        elif key == 'pfi_variants':
            names = _parse_list(key, text, str)
            if any(name not in _VARIANT_NAMES for name in names):
                raise DegBenchError(errors.INVALID_CONFIG,
                                    'pfi_variants accepts pfi and no_pfi.')
            values[key] = [_VARIANT_NAMES[name] for name in names]
        else:
            raise DegBenchError(errors.INVALID_CONFIG,
                                'Unknown key "%s" in [%s] of %s.' %
                                (key, SECTION, path))
    values.update(dict((k, v) for k, v in overrides.items() if v is not None))
    return BenchmarkConfig(**dict((k, v) for k, v in values.items()
                                  if v is not None))


def derive_seed(*coordinates):
    """A 32-bit seed that depends on every coordinate and nothing else."""
    sequence = np.random.SeedSequence([int(c) for c in coordinates])
    return int(sequence.generate_state(1)[0])


def _codes(cell):
    return (int(round(cell.cutoff * 1000)),
            Family.ALL.index(cell.family),
            int(round(cell.fraction * 1000)), int(cell.pfi), cell.seed)


def split_seed(config, cell):
    """Shared by every family and variant at the same (cutoff, fraction)."""
    cutoff, _, fraction, _, seed = _codes(cell)
    return derive_seed(config.seed, cutoff, fraction, seed)


def model_seed(config, cell):
    return derive_seed(config.seed, *_codes(cell))


class CellFit(object):
    """Everything one trained sweep cell produced.

    Attributes:
      model: The final learners.TrainedModel.
      record: Its SweepRecord.
      window: The DataTable restricted to the cell's time cutoff.
      train_rows, valid_rows: Row indices of the split within window.
    """

    def __init__(self, model, record, window, train_rows, valid_rows):
        self.model = model
        self.record = record
        self.window = window
        self.train_rows = train_rows
        self.valid_rows = valid_rows


def fit_cell(table, config, cell):
    """Splits, optionally PFI-filters, searches and trains one cell.

    The PFI variant first trains the family default on all features,
    measures permutation importance on the validation rows and keeps the
    features selected by importance.select_important; the search and the
    final training then use only those features.

    Returns:
      A CellFit.
    """
    window = datatable.restrict_time(table, cell.cutoff)
    train_rows, valid_rows = splitting.split(
        window, splitting.SplitConfig(cell.fraction, split_seed(config, cell)))
    seed = model_seed(config, cell)
    names = window.feature_names
    x = window.features
    y = window.target
    groups = window.group_ids

    pfi = None
    if cell.pfi:
        screen = learners.train(learners.LearnerSpec(cell.family, None, seed),
                                x[train_rows], y[train_rows], names)
        pfi = importance.permutation_importance(
            screen, x[valid_rows], y[valid_rows], config.pfi_repeats, seed)
        kept = importance.select_important(pfi, config.pfi_threshold)
        _logger.debug('%s keeps %d of %d features', cell.label, len(kept),
                      len(names))
        columns = [names.index(name) for name in kept]
        names = kept
        x = x[:, columns]

    spec = learners.hyperparam_search(
        cell.family, x[train_rows], y[train_rows], x[valid_rows],
        y[valid_rows], config.search_budget, seed, names)
    model = learners.train(
        spec, x[train_rows], y[train_rows], names,
        None if groups is None else groups[train_rows])
    valid = MetricsBundle.evaluate(y[valid_rows],
                                   learners.predict(model, x[valid_rows]),
                                   'validation', strict=False)
    record = SweepRecord(cell, spec.to_dict(), names, model.training_metrics,
                         valid, None if pfi is None else pfi.to_dict())
    return CellFit(model, record, window, train_rows, valid_rows)


def run_cell(cell, table, config):
    """Process-pool job: one cell, failures captured in the record."""
    try:
        record = fit_cell(table, config, cell).record
    except DegBenchError as err:
        _logger.info('%s failed: %s', cell.label, err.message)
        return SweepRecord(cell, error=err.error)
    except Exception as err:  # pylint: disable=broad-except
        _logger.exception('%s failed unexpectedly', cell.label)
        return SweepRecord(cell, error=Error(
            errors.INTERNAL_ERROR, '%s: %s' % (type(err).__name__, err)))
    _logger.info('%s (cutoff %g, seed %d): validation RMSE %.4g',
                 cell.label, cell.cutoff, cell.seed,
                 record.valid_metrics.rmse)
    return record


def _rmse_key(entries, index):
    return (entries[index].valid_metrics.rmse, index)


def select_champions(entries, cutoffs):
    """Minimal-validation-RMSE entries per cutoff.

    Returns:
      A dict from cutoff to {'overall', 'pfi', 'no_pfi'} entry indices (None
      when no entry qualifies) plus 'r2_ordering', the successful entry
      indices by decreasing validation R2.
    """
    champions = {}
    for cutoff in cutoffs:
        ok = [i for i, entry in enumerate(entries)
              if entry.cell.cutoff == cutoff and not entry.failed]
        best = {}
        for name, keep in (('overall', lambda e: True),
                           ('pfi', lambda e: e.cell.pfi),
                           ('no_pfi', lambda e: not e.cell.pfi)):
            candidates = [i for i in ok if keep(entries[i])]
            best[name] = (min(candidates,
                              key=functools.partial(_rmse_key, entries))
                          if candidates else None)
        scored = [i for i in ok if entries[i].valid_metrics.r2 is not None]
        best['r2_ordering'] = sorted(
            scored, key=lambda i: (-entries[i].valid_metrics.r2, i))
        champions[cutoff] = best
    return champions


class BenchmarkReport(object):
    """Sweep results plus the analyses of the champion.

    Attributes:
      config: The BenchmarkConfig.
      entries: SweepRecords in canonical cell order.
      champions: Output of select_champions.
      sections: Dict of JSON-ready analysis sections (curation,
        verification, predictions, importance, shapley, outliers, external)
        attached by the runner.
      errors: Non-fatal Error objects collected during the run.
    """

    def __init__(self, config, entries, champions=None, sections=None,
                 failures=None):
        self.config = config
        self.entries = list(entries)
        self.champions = (champions if champions is not None else
                          select_champions(self.entries, config.time_cutoffs))
        self.sections = dict(sections or {})
        self.errors = list(failures or [])

    def champion(self, cutoff=None, variant='overall'):
        """The champion SweepRecord of a cutoff (default: the last one)."""
        if cutoff is None:
            cutoff = self.config.time_cutoffs[-1]
        index = self.champions[float(cutoff)][variant]
        return None if index is None else self.entries[index]

    def to_dict(self):
        champions = {}
        for cutoff, best in self.champions.items():
            champions['%g' % cutoff] = dict(best)
        return {'config': self.config.to_dict(),
                'entries': [entry.to_dict() for entry in self.entries],
                'champions': champions,
                'sections': self.sections,
                'errors': [err.to_dict() for err in self.errors]}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        config = BenchmarkConfig.from_dict(data['config'])
        champions = dict((float(cutoff), best)
                         for cutoff, best in data['champions'].items())
        failures = [Error(e['code'], e['message'], e.get('row'),
                          e.get('column'), e.get('details'))
                    for e in data.get('errors', [])]
        return cls(config, [SweepRecord.from_dict(entry)
                            for entry in data['entries']],
                   champions, data.get('sections'), failures)


def run_benchmark(table, config, jobs=None, error_handler=None):
    """Runs the full sweep over a curated table.

    Every cell is independent and seeded from its coordinates, so the
    report does not depend on jobs. A failing cell is recorded, reported to
    the error handler as CELL_FAILED, and never stops the sweep.

    Args:
      table: A curated DataTable with a time column.
      config: A BenchmarkConfig.
      jobs: Worker processes, see parallel.map_jobs.
      error_handler: Optional errorhandler.ErrorHandler.

    Returns:
      A BenchmarkReport.

    Raises:
      DegBenchError: EMPTY_CUTOFF_WINDOW when a cutoff precedes every
        measurement.
    """
    for cutoff in config.time_cutoffs:
        datatable.restrict_time(table, cutoff)

    cells = config.cells()
    _logger.info('Running %d sweep cells', len(cells))
    job = functools.partial(run_cell, table=table, config=config)
    entries = parallel.map_jobs(job, cells, jobs)

    failures = []
    for entry in entries:
        if not entry.failed:
            continue
        failure = Error(errors.CELL_FAILED, '%s at cutoff %g failed: %s' %
                        (entry.label, entry.cell.cutoff, entry.error.message),
                        details={'cause': entry.error.to_dict()})
        failures.append(failure)
        if error_handler is not None:
            error_handler.HandleStage(entry.label)
            error_handler.HandleError(failure)
            error_handler.FinishStage()
    return BenchmarkReport(config, entries, failures=failures)


def rebuild_model(table, config, record):
    """Retrains the model of a sweep entry; identical to the sweep's model.

    Returns:
      A CellFit.
    """
    return fit_cell(table, config, record.cell)
