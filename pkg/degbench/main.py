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

"""Benchmarks machine-learning models of organic solar cell degradation.

degbench is designed to be run as a sequence of subcommands, or as a single
`full` run, against a measurement CSV and its schema file:

  * curate: one-hot encoding, correlation filter, duplicate removal
  * lsfit: parametric degradation fits and forecast horizons
  * extract-jv: Jsc, Voc, FF and PCE from J-V sweep files
  * generate: the (cutoff, family, fraction, PFI variant) sweep
  * predict, verify, explain: use a saved champion model
  * synth: synthetic datasets with the laboratory column layout
  * report: re-render report.md and figures from report.json

This file is a front end that parses arguments and flags. The core of the
code is in runner.py and benchmark.py.
"""

from __future__ import print_function

import argparse
import json
import logging
import os
import sys
import time

import numpy as np
import pandas as pd

from degbench import benchmark
from degbench import datatable
from degbench import errors
from degbench import families
from degbench import forecast
from degbench import importance
from degbench import jvcurve
from degbench import learners
from degbench import lmfit
from degbench import prediction
from degbench import report as report_lib
from degbench import runner
from degbench import schema
from degbench import shapley
from degbench import splitting
from degbench import synth
from degbench import verification
from degbench.common import erroraccumulator
from degbench.common import erroroutput
from degbench.common.error import DegBenchError
from degbench.common.error import Error
from degbench.families import Family
from degbench.families import Kind

SEED_ENV = 'DEGBENCH_SEED'
DEFAULT_OUT = os.path.join('.', 'degbench-out')

_logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Exits with 2 and a machine-readable error on usage mistakes."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(erroroutput.GetJsonErrorOutput(
            Error(errors.USAGE, '%s: %s' % (self.prog, message))) + '\n')
        self.exit(2)


def _list_of(convert):
    def parse(text):
        try:
            values = [convert(item.strip()) for item in text.split(',')
                      if item.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError('cannot parse "%s"' % text)
        if not values:
            raise argparse.ArgumentTypeError('empty list')
        return values
    return parse


def _families(text):
    names = _list_of(str)(text)
    for name in names:
        if name not in Family.ALL:
            raise argparse.ArgumentTypeError('unknown family "%s"' % name)
    return names


def _variants(text):
    names = _list_of(str)(text)
    if any(name not in ('pfi', 'no_pfi') for name in names):
        raise argparse.ArgumentTypeError('variants are pfi and no_pfi')
    return [name == 'pfi' for name in names]


def _common_flags():
    parser = _ArgumentParser(add_help=False)
    parser.add_argument(
        '--seed',
        help=families.SEED_DOC,
        type=int,
        metavar='N')
    parser.add_argument(
        '-j', '--jobs',
        help=families.JOBS_DOC,
        type=int,
        metavar='N')
    parser.add_argument(
        '-o', '--out',
        help=('output directory (default %s); synth also accepts a .csv '
              'file path' % DEFAULT_OUT),
        default=DEFAULT_OUT)
    parser.add_argument(
        '-f', '--force',
        help='write into an existing, non-empty output location',
        action='store_true')
    parser.add_argument(
        '-q', '--quiet',
        help='only log warnings and errors',
        action='store_true')
    parser.add_argument(
        '-v', '--verbose',
        help='log debugging details',
        action='store_true')
    parser.add_argument(
        '-t', '--time',
        help='report the elapsed time on standard error',
        action='store_true')
    return parser


def _data_flags(curate=True):
    parser = _ArgumentParser(add_help=False)
    parser.add_argument(
        '--csv',
        help='measurement CSV with a header row',
        required=True)
    parser.add_argument(
        '--schema',
        help='schema file: one [column] section with kind, unit and role',
        required=True)
    if curate:
        parser.add_argument(
            '--corr-threshold',
            help=families.CORR_THRESHOLD_DOC,
            type=float,
            default=families.DEFAULT_CORR_THRESHOLD)
        parser.add_argument(
            '--no-dedup',
            help='keep exact duplicate rows',
            action='store_true')
        parser.add_argument(
            '--normalize-target',
            help=('divide the target by each device\'s value at its earliest '
                  'measurement'),
            action='store_true')
    return parser


def _sweep_flags():
    parser = _ArgumentParser(add_help=False)
    parser.add_argument(
        '--config',
        help=('benchmark config file with a [benchmark] section; flags below '
              'override its keys'))
    parser.add_argument(
        '--families',
        help=families.FAMILIES_DOC,
        type=_families)
    parser.add_argument(
        '--fractions',
        help=('comma separated training fractions in (0, 1) (default %s)' %
              ','.join('%g' % f for f in families.DEFAULT_TRAIN_FRACTIONS)),
        type=_list_of(float))
    parser.add_argument(
        '--cutoffs',
        help=('comma separated time cutoffs in days (default %s)' %
              ','.join('%g' % c for c in families.DEFAULT_TIME_CUTOFFS)),
        type=_list_of(float))
    parser.add_argument(
        '--seeds',
        help='comma separated replicate seeds of the sweep (default 0)',
        type=_list_of(int))
    parser.add_argument(
        '--variants',
        help='comma separated PFI variants: pfi, no_pfi (default both)',
        type=_variants)
    parser.add_argument(
        '--budget',
        help=('hyperparameter candidates per sweep cell (default %d)' %
              families.DEFAULT_SEARCH_BUDGET),
        type=int)
    parser.add_argument(
        '--pfi-threshold',
        help=families.PFI_THRESHOLD_DOC,
        type=float)
    parser.add_argument(
        '--pfi-repeats',
        help=('permutations per feature (default %d)' %
              families.DEFAULT_PFI_REPEATS),
        type=int)
    parser.add_argument(
        '--holdout',
        help=('device label kept out of the sweep and used as external test; '
              'may be repeated'),
        action='append',
        default=[],
        metavar='LABEL')
    return parser


def _analysis_flags():
    parser = _ArgumentParser(add_help=False)
    parser.add_argument(
        '--k',
        help='cross-validation folds (default %d)' % families.DEFAULT_KFOLD,
        type=int,
        default=families.DEFAULT_KFOLD)
    parser.add_argument(
        '--z-threshold',
        help=families.Z_THRESHOLD_DOC,
        type=float,
        default=families.DEFAULT_Z_THRESHOLD)
    parser.add_argument(
        '--background',
        help=('background rows of the Shapley value function (default %d)' %
              families.DEFAULT_BACKGROUND_SIZE),
        type=int,
        default=families.DEFAULT_BACKGROUND_SIZE)
    parser.add_argument(
        '--allow-leakage',
        help=('evaluate external tests even when the model saw the device; '
              'the result is flagged'),
        action='store_true')
    return parser


class DegBench(object):
    """This class is a front end that parses arguments and flags."""

    def __init__(self, argv=None):
        parser = _ArgumentParser(
            prog='degbench',
            description='Benchmark degradation models of organic solar '
                        'cells.')
        subparsers = parser.add_subparsers(dest='command', metavar='command')
        subparsers.required = True
        common = _common_flags()

        sub = subparsers.add_parser(
            'curate', parents=[common, _data_flags()],
            help='curate a measurement CSV')

        sub = subparsers.add_parser(
            'lsfit', parents=[common],
            help='fit parametric degradation models and forecast horizons',
            formatter_class=argparse.RawTextHelpFormatter)
        sub.add_argument(
            '--input',
            help='series CSV with a day column and a target column',
            required=True)
        sub.add_argument(
            '--model',
            help=families.KINDS_DOC,
            choices=Kind.ALL,
            default=Kind.GAUSS2)
        sub.add_argument(
            '--windows',
            help='comma separated fitting windows in days (default %s)' %
            ','.join('%g' % w for w in families.DEFAULT_FORECAST_WINDOWS),
            type=_list_of(float),
            default=list(families.DEFAULT_FORECAST_WINDOWS))
        sub.add_argument(
            '--horizons',
            help='comma separated forecast horizons in days (default %s)' %
            ','.join('%g' % h for h in families.DEFAULT_FORECAST_HORIZONS),
            type=_list_of(float),
            default=list(families.DEFAULT_FORECAST_HORIZONS))
        sub.add_argument('--day-column', help='day column (default day)',
                         default='day')
        sub.add_argument('--target-column',
                         help='target column (default pce, else pce_norm)')
        sub.add_argument('--device-column',
                         help='device column; without it the file is one '
                              'series')
        sub.add_argument(
            '--compare',
            help=('comma separated model kinds to compare on every window '
                  'with mean and SD across devices'),
            type=_list_of(str))
        sub.add_argument('--max-iter', help='LM iterations per start',
                         type=int, default=200)
        sub.add_argument('--restarts', help='random LM starts per fit',
                         type=int, default=5)

        sub = subparsers.add_parser(
            'extract-jv', parents=[common],
            help='extract cell parameters from <cell>_<day>.csv J-V sweeps')
        sub.add_argument('--dir', help='directory of J-V sweep files',
                         required=True)
        sub.add_argument('--irradiance',
                         help='incident irradiance in mW/cm2 (default 100)',
                         type=float, default=100.0)
        sub.add_argument('--photocurrent-positive',
                         help='files report the photocurrent as positive',
                         action='store_true')

        subparsers.add_parser(
            'generate', parents=[common, _data_flags(), _sweep_flags()],
            help='curate and run the benchmark sweep')

        sub = subparsers.add_parser(
            'full', parents=[common, _data_flags(), _sweep_flags(),
                             _analysis_flags()],
            help='curate, sweep, verify, explain and report')

        sub = subparsers.add_parser(
            'predict', parents=[common, _data_flags(curate=False)],
            help='predict a curated CSV with a saved model')
        sub.add_argument('--model', help='model JSON', required=True)
        sub.add_argument('--outliers', help=families.Z_THRESHOLD_DOC,
                         type=float, metavar='Z')
        sub.add_argument('--group', help='device label for an external test',
                         metavar='LABEL')
        sub.add_argument('--allow-leakage',
                         help='allow an external test on a training device',
                         action='store_true')

        sub = subparsers.add_parser(
            'verify', parents=[common, _data_flags(curate=False)],
            help='y-mean, y-shuffle, onehot and k-fold tests')
        source = sub.add_mutually_exclusive_group(required=True)
        source.add_argument('--model',
                            help='model JSON whose spec and inputs to verify')
        source.add_argument('--family', help='verify a family default',
                            choices=Family.ALL)
        sub.add_argument('--fraction', help='training fraction (default 0.9)',
                         type=float, default=0.9)
        sub.add_argument('--k', help='cross-validation folds (default %d)' %
                         families.DEFAULT_KFOLD, type=int,
                         default=families.DEFAULT_KFOLD)

        sub = subparsers.add_parser(
            'explain', parents=[common, _data_flags(curate=False)],
            help='permutation importance and exact Shapley values')
        sub.add_argument('--model', help='model JSON', required=True)
        sub.add_argument('--background',
                         help='background rows (default %d)' %
                         families.DEFAULT_BACKGROUND_SIZE, type=int,
                         default=families.DEFAULT_BACKGROUND_SIZE)
        sub.add_argument('--rows', help='rows to explain (default 50)',
                         type=int, default=50)
        sub.add_argument('--pfi-repeats',
                         help='permutations per feature (default %d)' %
                         families.DEFAULT_PFI_REPEATS, type=int,
                         default=families.DEFAULT_PFI_REPEATS)

        sub = subparsers.add_parser(
            'synth', parents=[common],
            help='write a synthetic degradation dataset and its schema')
        sub.add_argument('--cells', help='number of devices (default 5)',
                         type=int, default=5)
        sub.add_argument('--noise-sd',
                         help='SD of the target noise (default %g)' %
                         synth.DEFAULT_NOISE_SD, type=float,
                         default=synth.DEFAULT_NOISE_SD)

        sub = subparsers.add_parser(
            'report', parents=[common],
            help='re-render report.md and figures from report.json')
        sub.add_argument('--report', help='report.json of an earlier run',
                         required=True)

        self.args = parser.parse_args(argv)
        self.start_time = time.time()
        self._configure_logging()
        self.seed = self._resolve_seed(parser)

    def _configure_logging(self):
        logger = logging.getLogger('degbench')
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(levelname)s %(message)s'))
        logger.addHandler(handler)
        logger.propagate = False
        if self.args.quiet:
            logger.setLevel(logging.WARNING)
        elif self.args.verbose:
            logger.setLevel(logging.DEBUG)
        else:
            logger.setLevel(logging.INFO)

    def _resolve_seed(self, parser):
        """The --seed flag, else DEGBENCH_SEED, else None (meaning 0)."""
        if self.args.seed is not None:
            seed = self.args.seed
        elif os.environ.get(SEED_ENV):
            try:
                seed = int(os.environ[SEED_ENV])
            except ValueError:
                parser.error('%s must be an integer' % SEED_ENV)
        else:
            return None
        if seed < 0:
            parser.error('seeds must be non-negative')
        return seed

    @property
    def base_seed(self):
        return 0 if self.seed is None else self.seed

    def _prepare_out(self):
        """Creates the output directory, refusing to reuse a full one."""
        out = self.args.out
        if (os.path.isdir(out) and os.listdir(out) and
                not self.args.force):
            raise DegBenchError(errors.OUTPUT_EXISTS,
                                'Output directory %s is not empty; use '
                                '--force to write into it.' % out)
        if not os.path.isdir(out):
            os.makedirs(out)
        return out

    def _out_path(self, name):
        return os.path.join(self.args.out, name)

    @staticmethod
    def _write_json(data, path):
        with open(path, 'w') as handle:
            json.dump(data, handle, indent=2, sort_keys=True)
            handle.write('\n')

    @staticmethod
    def _format_time(duration):
        """Formats a duration as a human-readable string.

        Args:
          duration: A duration in seconds.

        Returns:
          A formatted duration string.
        """
        if duration < 1:
            return '%dms' % round(duration * 1000)
        return '%.2fs' % duration

    def _benchmark_config(self):
        args = self.args
        overrides = {'families': args.families,
                     'train_fractions': args.fractions,
                     'time_cutoffs': args.cutoffs,
                     'seeds': args.seeds,
                     'pfi_variants': args.variants,
                     'search_budget': args.budget,
                     'pfi_threshold': args.pfi_threshold,
                     'pfi_repeats': args.pfi_repeats,
                     'seed': self.seed}
        if args.config:
            return benchmark.load_config(args.config, **overrides)
        return benchmark.BenchmarkConfig(
            **dict((k, v) for k, v in overrides.items() if v is not None))

    def _loaded_table(self):
        """The --csv/--schema table as loaded, without curation.

        Saved models expect the columns of a curated table, so the input
        must already be one (for example the curate output).
        """
        return runner.LoadTable(self.args.csv, self.args.schema)

    @staticmethod
    def _champion_summary(bench):
        record = bench.champion()
        if record is None:
            return 'No sweep cell succeeded (%d failed).' % len(
                bench.entries)
        metrics = record.valid_metrics
        r2 = '-' if metrics.r2 is None else '%.4f' % metrics.r2
        return ('Champion %s at day %g: validation R2 %s, RMSE %.4f, MAE '
                '%.4f.' % (record.label, record.cell.cutoff, r2, metrics.rmse,
                           metrics.mae))

    def curate(self):
        args = self.args
        table = runner.LoadTable(args.csv, args.schema)
        handler = erroraccumulator.ErrorAccumulator()
        curated, log = runner.RunCurate(table, handler, args.corr_threshold,
                                        not args.no_dedup,
                                        args.normalize_target)
        self._prepare_out()
        datatable.write_csv(curated, self._out_path('curated.csv'))
        schema.write_schema(curated.columns, self._out_path('curated.schema'))
        with open(self._out_path('curation_log.json'), 'w') as handle:
            handle.write(log.to_json() + '\n')
        return 'Curated %d rows and %d model inputs (%d changes).' % (
            curated.n_rows, len(curated.feature_names), len(log))

    def lsfit(self):
        args = self.args
        series = forecast.load_series(args.input, args.day_column,
                                      args.target_column, args.device_column)
        options = lmfit.FitOptions(max_iter=args.max_iter,
                                   n_restarts=args.restarts,
                                   seed=self.base_seed)
        table = forecast.forecast_experiment(args.model, series, args.windows,
                                             args.horizons, options,
                                             args.jobs)
        self._prepare_out()
        self._write_json(table.to_dict(), self._out_path('forecast.json'))
        with open(self._out_path('forecast.md'), 'w') as handle:
            handle.write(table.to_markdown())
        if args.compare:
            unknown = [kind for kind in args.compare if kind not in Kind.ALL]
            if unknown:
                raise DegBenchError(errors.INVALID_MODEL,
                                    'Unknown model kind(s): %s.' %
                                    ', '.join(unknown))
            summary = forecast.fit_summary(series, args.compare, args.windows,
                                           options, args.jobs)
            self._write_json(summary.to_dict(),
                             self._out_path('fit_summary.json'))
            with open(self._out_path('fit_summary.md'), 'w') as handle:
                handle.write(summary.to_markdown())
        failed = len([row for row in table.rows if row.error is not None])
        return 'Fitted %s on %d device(s): %d forecast cells, %d failed.' % (
            args.model, len(series), len(table.rows), failed)

    def extract_jv(self):
        args = self.args
        handler = erroraccumulator.ErrorAccumulator()
        frame = jvcurve.extract_directory(args.dir, handler, args.irradiance,
                                          not args.photocurrent_positive)
        self._prepare_out()
        frame.to_csv(self._out_path('jv_parameters.csv'), index=False)
        if handler.GetErrors():
            self._write_json([err.to_dict() for err in handler.GetErrors()],
                             self._out_path('jv_errors.json'))
        return 'Extracted %d J-V curve(s), %d file(s) failed.' % (
            len(frame), len(handler.GetErrors()))

    def _run_full(self, explain):
        args = self.args
        config = self._benchmark_config()
        table = runner.LoadTable(args.csv, args.schema)
        out = self._prepare_out()
        handler = erroraccumulator.ErrorAccumulator()
        options = {}
        if explain:
            options = {'k': args.k, 'z_threshold': args.z_threshold,
                       'background_size': args.background,
                       'allow_leakage': args.allow_leakage}
        bench = runner.RunFull(table, config, out, handler, args.jobs,
                               tuple(args.holdout), args.corr_threshold,
                               not args.no_dedup, args.normalize_target,
                               explain=explain, **options)
        return self._champion_summary(bench)

    def generate(self):
        return self._run_full(explain=False)

    def full(self):
        return self._run_full(explain=True)

    def predict(self):
        args = self.args
        model = learners.load_model(args.model)
        table = self._loaded_table()
        predicted = learners.predict_table(model, table)
        self._prepare_out()
        frame = pd.DataFrame({'row': np.arange(table.n_rows),
                              'observed': table.target,
                              'predicted': predicted})
        if table.group_ids is not None:
            frame.insert(1, 'group', table.group_ids)
        if table.times is not None:
            frame.insert(len(frame.columns) - 2, 'day', table.times)
        frame.to_csv(self._out_path('predictions.csv'), index=False)
        summary = 'Predicted %d rows with %s.' % (table.n_rows, model.family)
        if args.outliers is not None:
            flagged = prediction.detect_outliers(
                model, runner.ModelMatrix(model, table), table.target,
                args.outliers)
            self._write_json({'z_threshold': args.outliers,
                              'rows': [{'row': row, 'z': z}
                                       for row, z in flagged]},
                             self._out_path('outliers.json'))
            summary += ' %d outlier(s) beyond |z| = %g.' % (len(flagged),
                                                           args.outliers)
        if args.group is not None:
            result = prediction.external_test(model, table, args.group,
                                              args.allow_leakage)
            self._write_json(result.to_dict(),
                             self._out_path('external_%s.json' % args.group))
            metrics = result.metrics
            summary += ' External %s: RMSE %.4f, MAE %.4f.' % (
                args.group, metrics.rmse, metrics.mae)
        return summary

    def verify(self):
        args = self.args
        table = self._loaded_table()
        if args.model:
            model = learners.load_model(args.model)
            spec = model.spec
            table = runner.FeatureView(table, model.feature_names)
        else:
            spec = learners.LearnerSpec(args.family, seed=self.base_seed)
        result = verification.verify(
            spec, table, splitting.SplitConfig(args.fraction, self.base_seed),
            args.k)
        self._prepare_out()
        self._write_json(result.to_dict(), self._out_path('verification.json'))
        return ('Verification %s: model RMSE %.4f, y-mean %.4f, y-shuffle '
                '%.4f.' % ('passed' if result.passed else 'failed',
                           result.model_rmse, result.ymean_rmse,
                           result.yshuffle_rmse))

    def explain(self):
        args = self.args
        model = learners.load_model(args.model)
        table = self._loaded_table()
        x = runner.ModelMatrix(model, table)
        pfi = importance.permutation_importance(
            model, x, table.target, args.pfi_repeats, self.base_seed)
        background = np.arange(table.n_rows)
        background = background[np.unique(np.linspace(
            0, table.n_rows - 1, min(args.background, table.n_rows)).astype(
                int))]
        rows = np.unique(np.linspace(0, table.n_rows - 1,
                                     min(args.rows, table.n_rows)).astype(int))
        values = shapley.shapley(model, x[rows], x[background],
                                 background.tolist())
        self._prepare_out()
        self._write_json(pfi.to_dict(), self._out_path('importance.json'))
        self._write_json(values.to_dict(), self._out_path('shapley.json'))
        magnitudes = values.mean_abs()
        report_lib.plot_bars(pfi.feature_names, pfi.importances.tolist(),
                             'Permutation feature importance',
                             self._out_path('importance.svg'))
        report_lib.plot_bars(values.feature_names,
                             [magnitudes[n] for n in values.feature_names],
                             'Mean absolute Shapley value',
                             self._out_path('shapley.svg'))
        return 'Most important feature: %s (PFI), %s (Shapley).' % (
            pfi.ranking()[0],
            max(values.feature_names, key=lambda n: magnitudes[n]))

    def synth(self):
        args = self.args
        out = args.out
        if out.endswith('.csv'):
            path = out
            directory = os.path.dirname(out)
            if directory and not os.path.isdir(directory):
                os.makedirs(directory)
        else:
            self._prepare_out()
            path = os.path.join(out, 'synth.csv')
        if os.path.exists(path) and not args.force:
            raise DegBenchError(errors.OUTPUT_EXISTS,
                                '%s exists; use --force to overwrite it.' %
                                path)
        table = synth.synth_dataset(args.cells, noise_sd=args.noise_sd,
                                    seed=self.base_seed)
        datatable.write_csv(table, path)
        schema_path = os.path.splitext(path)[0] + '.schema'
        schema.write_schema(table.columns, schema_path)
        return 'Wrote %d rows for %d cell(s) to %s.' % (table.n_rows,
                                                       args.cells, path)

    def report(self):
        bench = report_lib.load_report(self.args.report)
        out = self._prepare_out()
        report_lib.render(bench, out)
        return self._champion_summary(bench)

    def _fail(self, error):
        sys.stderr.write('degbench %s: %s\n' % (
            self.args.command, erroroutput.GetErrorOutput(error)))
        sys.stderr.write(erroroutput.GetJsonErrorOutput(error) + '\n')
        return 1

    def run(self):
        """Runs the subcommand; returns the process exit code."""
        command = getattr(self, self.args.command.replace('-', '_'))
        try:
            summary = command()
        except DegBenchError as err:
            return self._fail(err.error)
        except Exception as err:  # pylint: disable=broad-except
            _logger.exception('Unexpected failure in %s', self.args.command)
            return self._fail(Error(errors.INTERNAL_ERROR, '%s: %s' % (
                type(err).__name__, err)))
        print(summary)
        if self.args.time:
            sys.stderr.write('Done in %s.\n' % self._format_time(
                time.time() - self.start_time))
        return 0


def main(argv=None):
    """Used when called as a command line script."""
    sys.exit(DegBench(argv).run())


if __name__ == '__main__':
    main()
