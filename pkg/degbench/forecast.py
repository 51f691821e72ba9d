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

"""Windowed fit-and-forecast experiments on per-device degradation series."""

import functools
import logging
import os

import numpy as np
import pandas as pd

from degbench import errors
from degbench import lmfit
from degbench import parallel
from degbench import parametric
from degbench.common.error import DegBenchError
from degbench.metrics import MetricsBundle

_logger = logging.getLogger(__name__)

# extract-jv writes pce, synth writes pce_norm.
TARGET_COLUMNS = ('pce', 'pce_norm')


def series_from_frame(frame, day_column='day', target_column=None,
                      device_column=None):
    """Splits a frame into per-device (days, values) arrays sorted by day.

    Without a target column the first of TARGET_COLUMNS present is used.

    Returns:
      A dict from device label to an (x, y) pair, keys in sorted order.
      Without a device column every row belongs to device 'all'.
    """
    if target_column is None:
        present = [name for name in TARGET_COLUMNS if name in frame.columns]
        if not present:
            raise DegBenchError(errors.HEADER_MISMATCH,
                                'No target column; expected one of %s.' %
                                ', '.join(TARGET_COLUMNS), row=0)
        target_column = present[0]
    for name in (day_column, target_column, device_column):
        if name is not None and name not in frame.columns:
            raise DegBenchError(errors.HEADER_MISMATCH,
                                'Series column "%s" is missing.' % name,
                                row=0, column=name)
    try:
        days = frame[day_column].to_numpy(dtype=float)
        values = frame[target_column].to_numpy(dtype=float)
    except ValueError as err:
        raise DegBenchError(errors.NON_NUMERIC_CELL,
                            'Series values must be numeric: %s' % err)
    if device_column is None:
        labels = np.array(['all'] * len(frame))
    else:
        labels = frame[device_column].astype(str).to_numpy()
    series = {}
    for label in sorted(set(labels)):
        rows = np.flatnonzero(labels == label)
        order = rows[np.argsort(days[rows], kind='mergesort')]
        series[label] = (days[order], values[order])
    return series


def load_series(path, day_column='day', target_column=None,
                device_column=None):
    """Reads a degradation series CSV, such as the extract-jv output."""
    if not os.path.isfile(path):
        raise DegBenchError(errors.FILE_NOT_FOUND, 'File not found: %s' % path)
    try:
        frame = pd.read_csv(path, encoding='utf-8')
    except (pd.errors.ParserError, pd.errors.EmptyDataError,
            UnicodeDecodeError) as err:
        raise DegBenchError(errors.MALFORMED_CSV,
                            'Cannot parse %s: %s' % (path, err))
    return series_from_frame(frame, day_column, target_column, device_column)


class ForecastRow(object):
    """One (device, window, horizon) cell of a forecast table.

    Attributes:
      device: Device label.
      window: Right edge of the fitting window, in days.
      horizon: Right edge of the evaluation interval (window, horizon].
      fit: The FitResult on the window, or None when fitting failed.
      metrics: MetricsBundle on the horizon interval, or None.
      error: The Error of a failed fit, or None.
    """

    def __init__(self, device, window, horizon, fit=None, metrics=None,
                 error=None):
        self.device = device
        self.window = window
        self.horizon = horizon
        self.fit = fit
        self.metrics = metrics
        self.error = error

    def to_dict(self):
        result = {'device': self.device, 'window': self.window,
                  'horizon': self.horizon}
        if self.fit is not None:
            result['fit'] = self.fit.to_dict()
        if self.metrics is not None:
            result['metrics'] = self.metrics.to_dict()
        if self.error is not None:
            result['error'] = self.error.to_dict()
        return result


def _format(value, digits=4):
    if value is None:
        return '-'
    return '%.*f' % (digits, value)


class ForecastTable(object):
    """Forecast metrics in (device, window, horizon) order."""

    def __init__(self, kind, rows):
        self.kind = kind
        self.rows = list(rows)

    def lookup(self, device, window, horizon):
        for row in self.rows:
            if (row.device, row.window, row.horizon) == (device, window,
                                                         horizon):
                return row
        return None

    def to_dict(self):
        return {'kind': self.kind,
                'rows': [row.to_dict() for row in self.rows]}

    def to_markdown(self):
        lines = ['| Device | Window | Horizon | R2 | RMSE | SSE | MAE |',
                 '|---|---:|---:|---:|---:|---:|---:|']
        for row in self.rows:
            if row.metrics is None:
                cells = ['-'] * 3 + ['failed: %s' % row.error.message]
            else:
                m = row.metrics
                cells = [_format(m.r2), _format(m.rmse), _format(m.sse),
                         _format(m.mae)]
            lines.append('| %s | %g | %g | %s |' % (
                row.device, row.window, row.horizon, ' | '.join(cells)))
        return '%s model\n\n%s\n' % (self.kind, '\n'.join(lines))


def _fit_window(x, y, kind, window, options):
    inside = x <= window
    return lmfit.fit_lm(kind, x[inside], y[inside], options=options,
                        window_days=window)


def _forecast_job(job, kind, options):
    """Fits one (device, window) and evaluates every horizon of it."""
    device, x, y, window, horizons = job
    try:
        fit = _fit_window(x, y, kind, window, options)
    except DegBenchError as err:
        _logger.warning('%s fit of %s up to day %g failed: %s', kind, device,
                        window, err.message)
        return [ForecastRow(device, window, horizon, error=err.error)
                for horizon in horizons]
    rows = []
    for horizon in horizons:
        ahead = (x > window) & (x <= horizon)
        predicted = parametric.evaluate(fit.model, x[ahead])
        rows.append(ForecastRow(
            device, window, horizon, fit,
            MetricsBundle.evaluate(y[ahead], predicted, 'horizon',
                                   strict=False)))
    return rows


def forecast_experiment(kind, series, windows, horizons, options=None,
                        jobs=1):
    """Fits each window and forecasts every later horizon, per device.

    For window w and horizon h > w the model fitted on x <= w is evaluated
    on the points with w < x <= h. Horizons not beyond a window are skipped
    for that window. A failed fit is kept as a row carrying its error.

    Args:
      kind: A families.Kind value.
      series: Dict from device label to (x, y), e.g. from load_series.
      windows: Fitting window edges in days.
      horizons: Evaluation horizon edges in days.
      options: lmfit.FitOptions.
      jobs: Worker processes, see parallel.map_jobs.

    Returns:
      A ForecastTable.

    Raises:
      DegBenchError: EMPTY_HORIZON when a window has no later horizon or a
        (window, horizon] interval holds no points for some device.
    """
    windows = sorted(float(w) for w in windows)
    horizons = sorted(float(h) for h in horizons)
    work = []
    for device, (x, y) in sorted(series.items()):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        for window in windows:
            later = [h for h in horizons if h > window]
            if not later:
                raise DegBenchError(errors.EMPTY_HORIZON,
                                    'Window %g has no later horizon.' % window,
                                    details={'window': window})
            for horizon in later:
                if not np.any((x > window) & (x <= horizon)):
                    raise DegBenchError(
                        errors.EMPTY_HORIZON,
                        'Device %s has no points in (%g, %g].' %
                        (device, window, horizon),
                        details={'device': device, 'window': window,
                                 'horizon': horizon})
            work.append((device, x, y, window, later))

    job = functools.partial(_forecast_job, kind=kind, options=options)
    rows = []
    for result in parallel.map_jobs(job, work, jobs):
        rows.extend(result)
    return ForecastTable(kind, rows)


class FitSummary(object):
    """Mean and SD of window-fit metrics across devices, per (kind, window)."""

    def __init__(self, rows):
        self.rows = list(rows)

    def to_dict(self):
        return {'rows': self.rows}

    def to_markdown(self):
        lines = ['| Model | Window | Devices | Failed | R2 | RMSE | SSE | MAE |',
                 '|---|---:|---:|---:|---:|---:|---:|---:|']
        for row in self.rows:
            stats = []
            for name in ('r2', 'rmse', 'sse', 'mae'):
                mean, sd = row[name]
                stats.append('-' if mean is None else
                             '%.4f +/- %.4f' % (mean, sd))
            lines.append('| %s | %g | %d | %d | %s |' % (
                row['kind'], row['window'], row['devices'], row['failed'],
                ' | '.join(stats)))
        return '\n'.join(lines) + '\n'


def _summary_job(job, options):
    kind, device, x, y, window = job
    try:
        return _fit_window(x, y, kind, window, options).metrics
    except DegBenchError as err:
        _logger.warning('%s fit of %s up to day %g failed: %s', kind, device,
                        window, err.message)
        return None


def _mean_sd(values):
    values = [v for v in values if v is not None]
    if not values:
        return (None, None)
    return (float(np.mean(values)), float(np.std(values)))


def fit_summary(series, kinds, windows, options=None, jobs=1):
    """Compares model kinds by fitting every device on every window.

    Returns:
      A FitSummary whose rows hold, per (kind, window), the number of
      devices, the number of failed fits, and (mean, SD) across devices of
      R2, RMSE, SSE and MAE on the fitting window.
    """
    windows = sorted(float(w) for w in windows)
    work = []
    for kind in kinds:
        for window in windows:
            for device, (x, y) in sorted(series.items()):
                work.append((kind, device, np.asarray(x, dtype=float),
                             np.asarray(y, dtype=float), window))
    job = functools.partial(_summary_job, options=options)
    results = parallel.map_jobs(job, work, jobs)

    grouped = {}
    for (kind, _, _, _, window), metrics in zip(work, results):
        grouped.setdefault((kind, window), []).append(metrics)
    rows = []
    for kind in kinds:
        for window in windows:
            fitted = grouped[(kind, window)]
            ok = [m for m in fitted if m is not None]
            row = {'kind': kind, 'window': window, 'devices': len(fitted),
                   'failed': len(fitted) - len(ok)}
            for name in ('r2', 'rmse', 'sse', 'mae'):
                row[name] = _mean_sd([getattr(m, name) for m in ok])
            rows.append(row)
    return FitSummary(rows)
