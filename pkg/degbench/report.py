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

"""REPORT stage: report.json, report.md, prediction CSVs and SVG figures."""

import json
import logging
import os

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # pylint: disable=wrong-import-position
import numpy as np
import pandas as pd

from degbench import errors
from degbench.benchmark import BenchmarkReport
from degbench.common import erroroutput
from degbench.common.error import DegBenchError

_logger = logging.getLogger(__name__)

REPORT_JSON = 'report.json'
REPORT_MD = 'report.md'

VARIANTS = ('overall', 'pfi', 'no_pfi')
_VARIANT_TITLES = {'overall': 'Overall', 'pfi': 'PFI', 'no_pfi': 'No_PFI'}

# Fixed ids and no timestamp keep the SVG output identical between runs.
_SVG_RC = {'svg.hashsalt': 'degbench', 'svg.fonttype': 'none'}
_SVG_METADATA = {'Date': None}


def _fmt(value, digits=4):
    if value is None:
        return '-'
    return '%.*f' % (digits, value)


def _metric_cells(metrics):
    return [_fmt(metrics.r2), _fmt(metrics.rmse), _fmt(metrics.sse),
            _fmt(metrics.mae)]


def _table(header, rows):
    lines = ['| ' + ' | '.join(header) + ' |',
             '|' + '|'.join(['---'] * len(header)) + '|']
    for row in rows:
        lines.append('| ' + ' | '.join(str(cell) for cell in row) + ' |')
    return lines


def _sweep_section(report, cutoff):
    best = report.champions[cutoff]
    champions = set(i for name, i in best.items()
                    if name in VARIANTS and i is not None)
    rows = []
    for index, entry in enumerate(report.entries):
        if entry.cell.cutoff != cutoff:
            continue
        label = entry.label
        if index == best['overall']:
            label = '**%s**' % label
        if entry.failed:
            rows.append([label, entry.cell.seed, '-', '-', '-', '-', '-',
                         'failed: %s' % entry.error.message])
            continue
        note = 'champion' if index in champions else ''
        rows.append([label, entry.cell.seed] +
                    _metric_cells(entry.valid_metrics) +
                    [_fmt(entry.train_metrics.r2), note])
    lines = ['## Models trained with data up to day %g' % cutoff, '',
             'Validation metrics; the training R2 is listed for reference.',
             '']
    lines += _table(['Model', 'Seed', 'R2', 'RMSE', 'SSE', 'MAE',
                     'Train R2', 'Note'], rows)
    ordering = [report.entries[i].label for i in best['r2_ordering'][:5]]
    if ordering:
        lines += ['', 'Highest validation R2 first: ' + ', '.join(ordering)]
    return lines


def _champion_section(report):
    rows = []
    for cutoff in report.config.time_cutoffs:
        row = ['%g' % cutoff]
        for variant in VARIANTS:
            entry = report.champion(cutoff, variant)
            row.append('-' if entry is None else '%s (RMSE %s)' % (
                entry.label, _fmt(entry.valid_metrics.rmse)))
        rows.append(row)
    lines = ['## Champions', '',
             'Minimal validation RMSE per cutoff; ties go to the earlier '
             'entry.', '']
    return lines + _table(['Cutoff'] + [_VARIANT_TITLES[v] for v in VARIANTS],
                          rows)


def _verification_section(data):
    lines = ['## Verification', '']
    rows = [['model', _fmt(data['model_rmse'])],
            ['y-mean', _fmt(data['ymean_rmse'])],
            ['y-shuffle', _fmt(data['yshuffle_rmse'])],
            ['onehot', _fmt(data['onehot_rmse'])]]
    lines += _table(['Test', 'Validation RMSE'], rows)
    pooled = data['kfold']['pooled']
    lines += ['', '%d-fold cross-validation (pooled): R2 %s, RMSE %s, MAE %s'
              % (len(data['kfold']['folds']), _fmt(pooled['r2']),
                 _fmt(pooled['rmse']), _fmt(pooled['mae'])),
              '', 'Passed: %s' % ('yes' if data['passed'] else 'no')]
    for note in data['notes']:
        lines.append('- %s' % note)
    return lines


def _ranking_section(title, names, values):
    order = np.argsort(-np.asarray(values), kind='mergesort')
    rows = [[names[i], _fmt(values[i])] for i in order]
    return ['## %s' % title, ''] + _table(['Feature', 'Value'], rows)


def _importances(data):
    return data['features'], [data['importances'][name]
                              for name in data['features']]


def _shapley_magnitudes(data):
    return data['features'], [data['mean_abs'][name]
                              for name in data['features']]


def render_markdown(report):
    """The human-readable report, deterministic for a given report."""
    config = report.config
    lines = ['# Degradation benchmark', '',
             'Families %s; training fractions %s; seeds %s; search budget %d;'
             ' base seed %d.' % (', '.join(config.families),
                                 ', '.join('%g' % f
                                           for f in config.train_fractions),
                                 ', '.join(str(s) for s in config.seeds),
                                 config.search_budget, config.seed), '']
    lines += _champion_section(report) + ['']
    for cutoff in config.time_cutoffs:
        lines += _sweep_section(report, cutoff) + ['']

    sections = report.sections
    if sections.get('verification'):
        lines += _verification_section(sections['verification']) + ['']
    if sections.get('importance'):
        names, values = _importances(sections['importance'])
        lines += _ranking_section('Permutation feature importance', names,
                                  values)
        lines += ['']
    if sections.get('shapley'):
        names, values = _shapley_magnitudes(sections['shapley'])
        lines += _ranking_section('Mean absolute Shapley value', names,
                                  values) + ['']
    if 'outliers' in sections:
        outliers = sections['outliers']
        lines += ['## Outliers', '']
        if outliers['rows']:
            lines += _table(['Row', 'z'], [[item['row'], _fmt(item['z'], 2)]
                                           for item in outliers['rows']])
        else:
            lines.append('No residual beyond |z| = %g.' %
                         outliers['z_threshold'])
        lines += ['']
    for external in sections.get('external', []):
        metrics = external['metrics']
        lines += ['## External test: %s' % external['group'], '',
                  'R2 %s, RMSE %s, MAE %s over %d rows%s.' % (
                      _fmt(metrics['r2']), _fmt(metrics['rmse']),
                      _fmt(metrics['mae']), metrics['n'],
                      ' (device seen in training)' if external['leakage']
                      else ''), '']
    if sections.get('curation'):
        lines += ['## Curation', '']
        for entry in sections['curation']:
            where = entry.get('column', 'row %s' % entry.get('row'))
            lines.append('- %s %s: %s' % (entry['action'], where,
                                          entry['reason']))
        lines += ['']
    if report.errors:
        lines += ['## Errors', '']
        lines += ['- %s' % erroroutput.GetErrorOutput(err)
                  for err in report.errors]
        lines += ['']
    return '\n'.join(lines)


def predictions_frame(predictions):
    """DataFrame of one champion's predicted-vs-observed pairs."""
    frame = pd.DataFrame({'row': predictions['rows'],
                          'partition': predictions['partition'],
                          'observed': predictions['observed'],
                          'predicted': predictions['predicted']})
    if predictions.get('days') is not None:
        frame.insert(1, 'day', predictions['days'])
    return frame


def plot_scatter(predictions, path):
    """Observed against predicted, one marker per partition, identity line."""
    frame = predictions_frame(predictions)
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        for partition, marker in (('train', 'o'), ('validation', 's')):
            part = frame[frame['partition'] == partition]
            if len(part):
                ax.scatter(part['observed'], part['predicted'], s=18,
                           marker=marker, label=partition, alpha=0.8)
        low = float(min(frame['observed'].min(), frame['predicted'].min()))
        high = float(max(frame['observed'].max(), frame['predicted'].max()))
        ax.plot([low, high], [low, high], color='black', linewidth=1)
        ax.set_xlabel('Observed')
        ax.set_ylabel('Predicted')
        ax.set_title(predictions['label'])
        ax.legend(loc='upper left')
        fig.savefig(path, format='svg', metadata=_SVG_METADATA)
        plt.close(fig)


def plot_bars(names, values, title, path):
    """Horizontal bars, largest first."""
    order = np.argsort(-np.asarray(values), kind='mergesort')
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(6, 0.4 * len(names) + 1.5))
        ax.barh([names[i] for i in order][::-1],
                [values[i] for i in order][::-1])
        ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, format='svg', metadata=_SVG_METADATA)
        plt.close(fig)


def write_figures(report, out_dir):
    """Writes the SVG figures a report's sections allow; returns the paths."""
    written = []
    sections = report.sections
    for variant, predictions in sorted(sections.get('predictions',
                                                    {}).items()):
        path = os.path.join(out_dir, 'scatter_%s.svg' % variant)
        plot_scatter(predictions, path)
        written.append(path)
    if sections.get('importance'):
        names, values = _importances(sections['importance'])
        path = os.path.join(out_dir, 'importance.svg')
        plot_bars(names, values,
                  'Permutation feature importance', path)
        written.append(path)
    if sections.get('shapley'):
        names, values = _shapley_magnitudes(sections['shapley'])
        path = os.path.join(out_dir, 'shapley.svg')
        plot_bars(names, values, 'Mean absolute Shapley value', path)
        written.append(path)
    return written


def write_report(report, out_dir, figures=True):
    """Writes every artifact of a report into out_dir.

    Returns:
      The written paths, report.json first.
    """
    json_path = os.path.join(out_dir, REPORT_JSON)
    with open(json_path, 'w') as handle:
        handle.write(report.to_json())
        handle.write('\n')
    written = [json_path]
    written += render(report, out_dir, figures)
    for variant, predictions in sorted(report.sections.get('predictions',
                                                           {}).items()):
        path = os.path.join(out_dir, 'predicted_vs_observed_%s.csv' % variant)
        predictions_frame(predictions).to_csv(path, index=False)
        written.append(path)
    _logger.info('Wrote %d report files to %s', len(written), out_dir)
    return written


def render(report, out_dir, figures=True):
    """Writes report.md and, optionally, the figures."""
    md_path = os.path.join(out_dir, REPORT_MD)
    with open(md_path, 'w') as handle:
        handle.write(render_markdown(report))
        handle.write('\n')
    written = [md_path]
    if figures:
        written += write_figures(report, out_dir)
    return written


def load_report(path):
    """Reads a report.json back into a BenchmarkReport.

    Raises:
      DegBenchError: FILE_NOT_FOUND, or MODEL_FORMAT for a malformed file.
    """
    try:
        with open(path) as handle:
            data = json.load(handle)
    except IOError:
        raise DegBenchError(errors.FILE_NOT_FOUND,
                            'Cannot read report file %s.' % path)
    except ValueError as err:
        raise DegBenchError(errors.MODEL_FORMAT,
                            'Report file %s is not JSON: %s' % (path, err))
    try:
        return BenchmarkReport.from_dict(data)
    except (KeyError, TypeError) as err:
        raise DegBenchError(errors.MODEL_FORMAT,
                            'Malformed report document: %r' % err)
