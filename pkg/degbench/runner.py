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

"""Pipeline stages. Loads, curates, sweeps, verifies and explains a dataset.

Every stage reports non-fatal failures to an error handler and keeps going;
typed errors that make the rest of a stage meaningless propagate.
"""

import logging
import os

import numpy as np

from degbench import benchmark
from degbench import curation
from degbench import datatable
from degbench import errors
from degbench import families
from degbench import importance
from degbench import learners
from degbench import prediction
from degbench import report as report_lib
from degbench import schema
from degbench import shapley
from degbench import splitting
from degbench import verification
from degbench.common.error import DegBenchError
from degbench.common.error import Error

_logger = logging.getLogger(__name__)

CHAMPION_MODEL = 'champion_model.json'


def LoadTable(csv_path, schema_path):
    """Reads a schema file and the CSV it describes."""
    return datatable.load_csv(csv_path, schema.load_schema(schema_path))


def RunIngest(csv_path, error_handler, schema_path,
              corr_threshold=families.DEFAULT_CORR_THRESHOLD):
    """Loads and curates one file, reporting failures instead of raising.

    Returns:
      The curated DataTable, or None when the file was rejected.
    """
    error_handler.HandleStage(csv_path)
    curated = None
    try:
        table = LoadTable(csv_path, schema_path)
        curated, _ = curation.curate(table, corr_threshold)
    except DegBenchError as err:
        error_handler.HandleError(err.error)
    error_handler.FinishStage()
    return curated


def FeatureView(table, names):
    """The table with exactly the given model inputs, time column included.

    datatable.select_features always keeps the time column; a model that
    does not use it needs the column removed.
    """
    wanted = set(names)
    columns = [column for column in table.columns
               if column.role in (schema.TARGET, schema.GROUP) or
               column.name in wanted]
    return table.replace(columns=columns,
                         frame=table.frame[[c.name for c in columns]])


def ModelMatrix(model, table):
    """The rows of table as the model's input matrix."""
    return table.frame[model.feature_names].to_numpy(dtype=float)


def WithoutGroups(table, groups):
    """The table minus every row of the given device labels."""
    if not groups:
        return table
    for group in groups:
        datatable.group_indices(table, group)
    keep = np.flatnonzero(~np.isin(table.group_ids, list(groups)))
    return datatable.take_rows(table, keep)


def RunCurate(table, error_handler,
              corr_threshold=families.DEFAULT_CORR_THRESHOLD, dedup=True,
              normalize=False):
    """CURATE stage.

    Returns:
      A (DataTable, curation.CurationLog) pair.
    """
    error_handler.HandleStage('curate')
    curated, log = curation.curate(table, corr_threshold, dedup)
    if normalize:
        curated = curation.normalize_target(curated, log)
    _logger.info('Curated %d rows, %d model inputs, %d log entries',
                 curated.n_rows, len(curated.feature_names), len(log))
    error_handler.FinishStage()
    return curated, log


def RunGenerate(table, config, error_handler, jobs=None, holdout=()):
    """GENERATE stage: the sweep, on the table minus the held-out devices."""
    sweep_table = WithoutGroups(table, holdout)
    return benchmark.run_benchmark(sweep_table, config, jobs, error_handler)


def _StageFailure(error_handler, stage, err):
    error_handler.HandleError(Error(
        errors.VERIFICATION_FAILED, '%s: %s' % (stage, err.message),
        details={'cause': err.error.to_dict()}))


def RunVerify(report, table, error_handler, k=families.DEFAULT_KFOLD):
    """VERIFY stage for the overall champion of the last cutoff.

    Returns:
      A verification.VerificationResult, or None when it could not run.
    """
    error_handler.HandleStage('verify')
    record = report.champion()
    result = None
    if record is None:
        error_handler.HandleError(Error(errors.VERIFICATION_FAILED,
                                        'verify: no sweep cell succeeded.'))
    else:
        window = FeatureView(datatable.restrict_time(table,
                                                     record.cell.cutoff),
                             record.features)
        spec = learners.LearnerSpec.from_dict(record.spec)
        split_config = splitting.SplitConfig(
            record.cell.fraction,
            benchmark.split_seed(report.config, record.cell))
        try:
            result = verification.verify(spec, window, split_config, k)
        except DegBenchError as err:
            _StageFailure(error_handler, 'verify', err)
        else:
            for failure in result.errors:
                error_handler.HandleError(failure)
    error_handler.FinishStage()
    return result


def ChampionPredictions(fit):
    """JSON-ready predicted-vs-observed pairs of one rebuilt sweep cell."""
    rows = np.sort(np.concatenate([fit.train_rows, fit.valid_rows]))
    in_train = np.isin(rows, fit.train_rows)
    window = fit.window
    times = window.times
    predicted = learners.predict(fit.model, ModelMatrix(fit.model,
                                                        window)[rows])
    return {'label': fit.record.label,
            'cutoff': fit.record.cell.cutoff,
            'rows': rows.tolist(),
            'days': None if times is None else times[rows].tolist(),
            'partition': ['train' if flag else 'validation'
                          for flag in in_train],
            'observed': window.target[rows].tolist(),
            'predicted': predicted.tolist()}


def _Spread(rows, count):
    """At most count rows, evenly spaced."""
    if len(rows) <= count:
        return rows
    return rows[np.unique(np.linspace(0, len(rows) - 1, count).astype(int))]


def RunExplain(report, table, error_handler,
               z_threshold=families.DEFAULT_Z_THRESHOLD,
               background_size=families.DEFAULT_BACKGROUND_SIZE,
               max_rows=50):
    """PREDICT and explanation stage for the champions of the last cutoff.

    Returns:
      A (sections, model) pair: JSON-ready report sections (predictions,
      importance, shapley, outliers) and the overall champion's
      TrainedModel, or ({}, None) without a champion.
    """
    error_handler.HandleStage('explain')
    config = report.config
    sections = {}
    fits = {}
    for variant in report_lib.VARIANTS:
        record = report.champion(variant=variant)
        if record is not None:
            fits[variant] = benchmark.rebuild_model(table, config, record)
    if 'overall' not in fits:
        error_handler.FinishStage()
        return sections, None
    sections['predictions'] = dict(
        (variant, ChampionPredictions(fit)) for variant, fit in fits.items())

    fit = fits['overall']
    model = fit.model
    x = ModelMatrix(model, fit.window)
    y = fit.window.target
    seed = benchmark.model_seed(config, fit.record.cell)
    try:
        pfi = importance.permutation_importance(
            model, x[fit.valid_rows], y[fit.valid_rows], config.pfi_repeats,
            seed)
        sections['importance'] = pfi.to_dict()
    except DegBenchError as err:
        _StageFailure(error_handler, 'importance', err)
    try:
        background_rows = _Spread(fit.train_rows, background_size)
        result = shapley.shapley(model, x[_Spread(fit.valid_rows, max_rows)],
                                 x[background_rows],
                                 background_rows.tolist())
        sections['shapley'] = result.to_dict()
    except DegBenchError as err:
        _StageFailure(error_handler, 'shapley', err)
    try:
        flagged = prediction.detect_outliers(model, x, y, z_threshold)
    except DegBenchError as err:
        _StageFailure(error_handler, 'outliers', err)
    else:
        groups = fit.window.group_ids
        times = fit.window.times
        sections['outliers'] = {
            'z_threshold': z_threshold,
            'partition': 'window',
            'rows': [{'row': row, 'z': z,
                      'group': None if groups is None else str(groups[row]),
                      'day': None if times is None else float(times[row])}
                     for row, z in flagged]}
    error_handler.FinishStage()
    return sections, model


def RunExternal(report, sweep_table, table, group, error_handler,
                allow_leakage=False):
    """External test of the rebuilt champion on one device of table."""
    error_handler.HandleStage('external %s' % group)
    record = report.champion()
    if record is None:
        error_handler.FinishStage()
        return None
    fit = benchmark.rebuild_model(sweep_table, report.config, record)
    result = prediction.external_test(fit.model, table, group, allow_leakage)
    if result.leakage:
        error_handler.HandleError(Error(
            errors.TRAINING_LEAKAGE, 'External test of %s used a model '
            'trained on that device.' % group, details={'group': group}))
    error_handler.FinishStage()
    return result


def RunFull(table, config, out_dir, error_handler, jobs=None, holdout=(),
            corr_threshold=families.DEFAULT_CORR_THRESHOLD, dedup=True,
            normalize=False, k=families.DEFAULT_KFOLD,
            z_threshold=families.DEFAULT_Z_THRESHOLD,
            background_size=families.DEFAULT_BACKGROUND_SIZE,
            allow_leakage=False, explain=True):
    """CURATE, GENERATE, VERIFY, explain, external tests and REPORT.

    Args:
      table: A raw DataTable.
      config: A benchmark.BenchmarkConfig.
      out_dir: Existing directory for the artifacts.
      error_handler: Collects the non-fatal errors of every stage.
      jobs: Worker processes of the sweep.
      holdout: Device labels kept out of the sweep and tested externally.
      explain: False stops after the sweep (the generate subcommand).

    Returns:
      The BenchmarkReport, already written to out_dir.
    """
    curated, log = RunCurate(table, error_handler, corr_threshold, dedup,
                             normalize)
    sweep_table = WithoutGroups(curated, holdout)
    bench = RunGenerate(curated, config, error_handler, jobs, holdout)
    bench.sections['curation'] = log.entries

    model = None
    if explain:
        result = RunVerify(bench, sweep_table, error_handler, k)
        if result is not None:
            bench.sections['verification'] = result.to_dict()
        sections, model = RunExplain(bench, sweep_table, error_handler,
                                     z_threshold, background_size)
        bench.sections.update(sections)
        external = []
        for group in holdout:
            tested = RunExternal(bench, sweep_table, curated, group,
                                 error_handler, allow_leakage)
            if tested is not None:
                external.append(tested.to_dict())
        if external:
            bench.sections['external'] = external
    elif bench.champion() is not None:
        model = benchmark.rebuild_model(sweep_table, config,
                                        bench.champion()).model

    bench.errors = list(error_handler.GetErrors())
    report_lib.write_report(bench, out_dir, figures=explain)
    if model is not None:
        learners.save_model(model, os.path.join(out_dir, CHAMPION_MODEL))
    return bench
