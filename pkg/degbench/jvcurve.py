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

"""Electrical parameters and PCE from J-V sweeps.

Raw sweeps record the photocurrent as negative current density. Extraction
works on magnitudes in the power-producing quadrant; pass
photocurrent_negative=False for files that record it as positive.
"""

import logging
import os
import re

import numpy as np
import pandas as pd

from degbench import errors
from degbench.common.error import DegBenchError
from degbench.common.error import Error

_logger = logging.getLogger(__name__)

_FILENAME_RE = re.compile(r'^(?P<cell>.+)_(?P<day>\d+(?:\.\d+)?)\.csv$')


class JVCurve(object):
    """One J-V sweep.

    Attributes:
      voltage: Voltages in V, strictly increasing.
      current_density: Current densities in mA/cm2, same length.
      irradiance: Incident irradiance G in mW/cm2.
      photocurrent_negative: Sign convention of current_density.
    """

    def __init__(self, voltage, current_density, irradiance=100.0,
                 photocurrent_negative=True):
        voltage = np.asarray(voltage, dtype=float).ravel()
        current_density = np.asarray(current_density, dtype=float).ravel()
        if len(voltage) != len(current_density):
            raise DegBenchError(errors.INVALID_CURVE,
                                'Voltage and current density lengths differ.')
        if len(voltage) < 3:
            raise DegBenchError(errors.INVALID_CURVE,
                                'A J-V curve needs at least 3 samples.')
        if not (np.all(np.isfinite(voltage)) and
                np.all(np.isfinite(current_density))):
            raise DegBenchError(errors.INVALID_CURVE,
                                'J-V samples must be finite.')
        steps = np.diff(voltage)
        if np.all(steps < 0):
            # Reverse sweep.
            voltage = voltage[::-1]
            current_density = current_density[::-1]
        elif not np.all(steps > 0):
            raise DegBenchError(errors.INVALID_CURVE,
                                'Voltage must be strictly monotone.')
        if not irradiance > 0:
            raise DegBenchError(errors.INVALID_CURVE,
                                'Irradiance must be positive, got %g.' %
                                irradiance)
        self.voltage = voltage
        self.current_density = current_density
        self.irradiance = float(irradiance)
        self.photocurrent_negative = photocurrent_negative


class CellParams(object):
    """Electrical parameters of one sweep.

    Attributes:
      jsc: Short-circuit current density, mA/cm2.
      voc: Open-circuit voltage, V.
      pmpp: Maximum power density, mW/cm2.
      vmpp: Voltage at the maximum power point, V.
      ff: Fill factor in (0, 1].
      pce: Power conversion efficiency as a fraction.
      refined: Whether pmpp is a parabola vertex inside a sweep segment
        rather than a sample or the Voc end.
    """

    def __init__(self, jsc, voc, pmpp, vmpp, ff, pce, refined):
        self.jsc = jsc
        self.voc = voc
        self.pmpp = pmpp
        self.vmpp = vmpp
        self.ff = ff
        self.pce = pce
        self.refined = refined

    @property
    def pce_percent(self):
        return 100.0 * self.pce

    def to_dict(self):
        return {'jsc': self.jsc, 'voc': self.voc, 'pmpp': self.pmpp,
                'vmpp': self.vmpp, 'ff': self.ff, 'pce': self.pce,
                'refined': self.refined}


def pce_from_parameters(jsc, voc, ff, irradiance):
    """PCE = Jsc * Voc * FF / G, as a fraction."""
    return jsc * voc * ff / irradiance


def _segment_maximum(v, j, v_low, v_high):
    """Maximum of V * J(V) on the piecewise linear sweep over [v_low, v_high].

    On a linear segment the power is a parabola in V, so each segment
    contributes its two clamped ends and, for a falling current, its vertex.
    Inserting collinear samples leaves the interpolant and the maximum
    unchanged.

    Returns:
      A (power, voltage, refined) triple; refined is True when the maximum
      is a vertex strictly inside a segment.
    """
    left = np.maximum(v[:-1], v_low)
    right = np.minimum(v[1:], v_high)
    slope = np.diff(j) / np.diff(v)
    intercept = j[:-1] - slope * v[:-1]
    segments = np.flatnonzero(left < right)
    with np.errstate(divide='ignore', invalid='ignore'):
        vertex = np.where(slope < 0.0, -intercept / (2.0 * slope), np.nan)
    inside = segments[(vertex[segments] > left[segments]) &
                      (vertex[segments] < right[segments])]

    where = np.concatenate([segments, segments, inside])
    x = np.concatenate([left[segments], right[segments], vertex[inside]])
    refined = np.concatenate([np.zeros(2 * len(segments), dtype=bool),
                              np.ones(len(inside), dtype=bool)])
    if not len(x):
        return -np.inf, None, False
    power = x * (intercept[where] + slope[where] * x)
    best = int(np.argmax(power))
    return float(power[best]), float(x[best]), bool(refined[best])


def extract_params(curve):
    """Extracts Jsc, Voc, Pmpp, FF and PCE from a sweep.

    Jsc and Voc are linearly interpolated at V = 0 and J = 0. Pmpp is the
    largest V*J(V) between 0 and Voc on the linearly interpolated sweep:
    power is a parabola on every segment, and the best clamped vertex wins.
    The result does not depend on redundant collinear samples.

    Args:
      curve: A JVCurve.

    Returns:
      A CellParams.

    Raises:
      DegBenchError: INVALID_CURVE when the sweep does not reach V = 0,
        NO_ZERO_CROSSING for a cell whose current never changes sign (dead
        or degraded cell), NO_POWER_QUADRANT when nothing between 0 and
        Voc produces power.
    """
    v = curve.voltage
    j = -curve.current_density if curve.photocurrent_negative else \
        curve.current_density

    if v[0] > 0.0 or v[-1] < 0.0:
        raise DegBenchError(errors.INVALID_CURVE,
                            'The sweep [%g, %g] V does not include V = 0.' %
                            (v[0], v[-1]))
    jsc = abs(float(np.interp(0.0, v, j)))

    crossings = np.flatnonzero((j[:-1] > 0.0) & (j[1:] <= 0.0) &
                               (v[1:] > 0.0))
    if not len(crossings):
        raise DegBenchError(errors.NO_ZERO_CROSSING,
                            'The current density never crosses zero in the '
                            'power-producing direction.')
    i = crossings[0]
    if j[i + 1] == 0.0:
        voc = float(v[i + 1])
    else:
        voc = float(v[i] + j[i] * (v[i + 1] - v[i]) / (j[i] - j[i + 1]))

    pmpp, vmpp, refined = _segment_maximum(v, j, 0.0, voc)
    if not pmpp > 0.0 or jsc == 0.0:
        raise DegBenchError(errors.NO_POWER_QUADRANT,
                            'No part of the sweep produces power.')
    _logger.debug('Pmpp %.6g at %.4g V (%s)', pmpp, vmpp,
                  'parabolic refinement' if refined else 'sample maximum')

    ff = pmpp / (jsc * voc)
    return CellParams(jsc, voc, pmpp, vmpp, ff, pmpp / curve.irradiance,
                      refined)


def load_jv_csv(path, irradiance=100.0, photocurrent_negative=True):
    """Reads a two-column (voltage, current_density) CSV with a header row.

    Raises:
      DegBenchError: FILE_NOT_FOUND, MALFORMED_CSV or INVALID_CURVE.
    """
    if not os.path.isfile(path):
        raise DegBenchError(errors.FILE_NOT_FOUND, 'File not found: %s' % path)
    try:
        frame = pd.read_csv(path, encoding='utf-8')
    except (pd.errors.ParserError, pd.errors.EmptyDataError,
            UnicodeDecodeError) as err:
        raise DegBenchError(errors.MALFORMED_CSV,
                            'Cannot parse %s: %s' % (path, err))
    if frame.shape[1] < 2:
        raise DegBenchError(errors.MALFORMED_CSV,
                            '%s needs voltage and current density columns.'
                            % path)
    try:
        values = frame.iloc[:, :2].to_numpy(dtype=float)
    except ValueError as err:
        raise DegBenchError(errors.NON_NUMERIC_CELL,
                            'Non-numeric J-V sample in %s: %s' % (path, err))
    return JVCurve(values[:, 0], values[:, 1], irradiance,
                   photocurrent_negative)


def extract_directory(directory, error_handler, irradiance=100.0,
                      photocurrent_negative=True):
    """Extracts parameters from every <cell>_<day>.csv file in a directory.

    Files that cannot be read or extracted are reported to the error handler
    and skipped.

    Args:
      directory: Directory of sweep files.
      error_handler: An errorhandler.ErrorHandler.
      irradiance: Incident irradiance in mW/cm2.
      photocurrent_negative: Sign convention of the files.

    Returns:
      A pandas.DataFrame with columns cell, day, jsc, voc, pmpp, vmpp, ff,
      pce and refined, sorted by cell then day.
    """
    records = []
    for filename in sorted(os.listdir(directory)):
        match = _FILENAME_RE.match(filename)
        if not match:
            continue
        path = os.path.join(directory, filename)
        error_handler.HandleStage(filename)
        try:
            curve = load_jv_csv(path, irradiance, photocurrent_negative)
            params = extract_params(curve)
        except DegBenchError as err:
            error_handler.HandleError(err.error)
        else:
            record = {'cell': match.group('cell'),
                      'day': float(match.group('day'))}
            record.update(params.to_dict())
            records.append(record)
        error_handler.FinishStage()

    columns = ['cell', 'day', 'jsc', 'voc', 'pmpp', 'vmpp', 'ff', 'pce',
               'refined']
    frame = pd.DataFrame(records, columns=columns)
    if not records:
        error_handler.HandleError(Error(errors.FILE_NOT_FOUND,
                                        'No <cell>_<day>.csv files in %s.' %
                                        directory))
        return frame
    return frame.sort_values(['cell', 'day'], kind='mergesort').reset_index(
        drop=True)
