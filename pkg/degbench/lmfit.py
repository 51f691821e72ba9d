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

"""Levenberg-Marquardt least-squares fitting of the parametric models."""

import itertools
import logging

import numpy as np
import scipy.linalg

from degbench import errors
from degbench import parametric
from degbench.common.error import DegBenchError
from degbench.families import COEFFICIENT_NAMES
from degbench.families import Kind
from degbench.metrics import MetricsBundle

_logger = logging.getLogger(__name__)

# Gaussian widths are fitted as c = sqrt(theta^2 + _WIDTH_FLOOR^2), so
# |c| >= 1e-6 everywhere.
_WIDTH_FLOOR = 1e-6

_MAX_LAMBDA = 1e16

# Variable-projection start points kept per fit.
_PROJECTION_SEEDS = 2


class FitOptions(object):
    """Knobs of the Levenberg-Marquardt solver."""

    def __init__(self, max_iter=200, tol_grad=1e-10, tol_step=1e-10,
                 lambda0=1e-3, n_restarts=5, seed=0):
        if max_iter < 1 or n_restarts < 1 or not lambda0 > 0:
            raise DegBenchError(errors.INVALID_ARGUMENT,
                                'max_iter and n_restarts must be positive and '
                                'lambda0 strictly positive.')
        self.max_iter = int(max_iter)
        self.tol_grad = float(tol_grad)
        self.tol_step = float(tol_step)
        self.lambda0 = float(lambda0)
        self.n_restarts = int(n_restarts)
        self.seed = int(seed)

    def to_dict(self):
        return {'max_iter': self.max_iter, 'tol_grad': self.tol_grad,
                'tol_step': self.tol_step, 'lambda0': self.lambda0,
                'n_restarts': self.n_restarts, 'seed': self.seed}


class FitResult(object):
    """Outcome of fit_lm.

    Attributes:
      model: The fitted parametric.ParametricModel.
      metrics: MetricsBundle on the fitting window.
      iterations: Iterations of the winning restart.
      converged: Whether a tolerance was met before max_iter.
      window_days: Right edge of the fitting window.
      sse_history: SSE after every accepted step, starting from the initial
        point. Non-increasing.
      starts: Number of start points tried.
    """

    def __init__(self, model, metrics, iterations, converged, window_days,
                 sse_history, starts=1):
        self.model = model
        self.metrics = metrics
        self.iterations = iterations
        self.converged = converged
        self.window_days = window_days
        self.sse_history = list(sse_history)
        self.starts = starts

    @property
    def sse(self):
        return self.sse_history[-1]

    def to_dict(self):
        return {'model': self.model.to_dict(),
                'metrics': self.metrics.to_dict(),
                'iterations': self.iterations,
                'converged': self.converged,
                'window_days': self.window_days,
                'starts': self.starts}


def _to_internal(kind, coeffs):
    theta = np.array(coeffs, dtype=float)
    for i in parametric.width_indices(kind):
        theta[i] = np.sqrt(max(theta[i] ** 2 - _WIDTH_FLOOR ** 2, 0.0))
    return theta


def _to_coeffs(kind, theta):
    coeffs = np.array(theta, dtype=float)
    for i in parametric.width_indices(kind):
        coeffs[i] = np.sqrt(theta[i] ** 2 + _WIDTH_FLOOR ** 2)
    return coeffs


def _internal_jacobian(kind, theta, x):
    coeffs = _to_coeffs(kind, theta)
    jac = parametric.jacobian(_unchecked(kind, coeffs), x)
    for i in parametric.width_indices(kind):
        jac[:, i] *= theta[i] / coeffs[i]
    return jac


def _unchecked(kind, coeffs):
    """A model without validation; trial points may be non-finite."""
    model = parametric.ParametricModel.__new__(parametric.ParametricModel)
    model.kind = kind
    model.coeffs = coeffs
    return model


def _residuals(kind, theta, x, y):
    with np.errstate(over='ignore', invalid='ignore'):
        return y - parametric.evaluate(
            _unchecked(kind, _to_coeffs(kind, theta)), x)


def levenberg_marquardt(kind, x, y, start, options):
    """Runs one damped Gauss-Newton descent from start.

    A trial step solves the Marquardt-scaled system
    (J'J + lambda * diag(J'J)) delta = J'r through a QR factorization of the
    augmented matrix. The step is accepted when it does not increase the
    SSE (lambda /= 10), otherwise lambda *= 10 and the step is retried.

    Args:
      kind: A families.Kind value.
      x, y: Fitting data.
      start: Initial coefficients.
      options: A FitOptions.

    Returns:
      A (coeffs, iterations, converged, sse_history) tuple, or None when the
      start point produces non-finite residuals.
    """
    theta = _to_internal(kind, start)
    r = _residuals(kind, theta, x, y)
    if not np.all(np.isfinite(r)):
        return None
    sse = float(np.sum(r * r))
    history = [sse]
    lam = options.lambda0
    converged = False
    iterations = 0

    while iterations < options.max_iter:
        iterations += 1
        with np.errstate(over='ignore', invalid='ignore'):
            jac = _internal_jacobian(kind, theta, x)
        if not np.all(np.isfinite(jac)):
            return None
        gradient = jac.T.dot(r)
        if np.max(np.abs(gradient)) < options.tol_grad:
            converged = True
            break

        scale = np.sqrt(np.sum(jac * jac, axis=0))
        scale = np.maximum(scale, max(scale.max(), 1.0) * 1e-12)
        zeros = np.zeros(len(theta))
        accepted = False
        while lam <= _MAX_LAMBDA:
            augmented = np.vstack([jac, np.diag(np.sqrt(lam) * scale)])
            q, upper = scipy.linalg.qr(augmented, mode='economic')
            delta = scipy.linalg.solve_triangular(
                upper, q.T.dot(np.concatenate([r, zeros])))
            trial = theta + delta
            r_trial = _residuals(kind, trial, x, y)
            sse_trial = float(np.sum(r_trial * r_trial))
            if np.isfinite(sse_trial) and sse_trial <= sse:
                accepted = True
                break
            lam *= 10.0

        if not accepted:
            # No step of any length lowers the SSE: a numerical minimum.
            converged = True
            break

        step = np.linalg.norm(delta)
        theta, r, sse = trial, r_trial, sse_trial
        history.append(sse)
        lam = max(lam / 10.0, 1e-15)
        if step < options.tol_step * (np.linalg.norm(theta) + options.tol_step):
            converged = True
            break

    assert all(b <= a for a, b in zip(history, history[1:]))
    return _to_coeffs(kind, theta), iterations, converged, history


def _heuristic_start(kind, x, y):
    span = x[-1] - x[0]
    a = y[0]
    if y[0] > 0 and y[-1] > 0:
        b = np.log(y[-1] / y[0]) / span
    else:
        b = 0.0
    if kind == Kind.EXP1:
        return [a, b]
    if kind == Kind.EXP2:
        return [0.9 * a, b, 0.1 * a, 0.1 * b]
    peak = int(np.argmax(y))
    gauss = [y[peak], x[peak], span / 4.0]
    if kind == Kind.GAUSS1:
        return gauss
    return gauss + [y[peak] / 2.0, x[peak] + span / 2.0, span / 4.0]


def _projection_starts(kind, x, y):
    """Grid start points with amplitudes solved by linear least squares.

    exp2 scans pairs of decay rates, gauss2 pairs of (center, width) nodes.
    """
    span = x[-1] - x[0]
    if kind == Kind.EXP2:
        nodes = [(-rate / span,) for rate in np.geomspace(0.1, 30.0, 8)]
        basis = lambda node: np.exp(node[0] * x)
    elif kind == Kind.GAUSS2:
        nodes = [(center, width * span)
                 for center in np.linspace(x[0], x[-1], 5)
                 for width in (0.15, 0.3, 0.6)]
        basis = lambda node: np.exp(-((x - node[0]) / node[1]) ** 2)
    else:
        return []

    scored = []
    for first, second in itertools.combinations(nodes, 2):
        design = np.column_stack([basis(first), basis(second)])
        amplitudes, _, _, _ = scipy.linalg.lstsq(design, y)
        residual = y - design.dot(amplitudes)
        scored.append((float(np.sum(residual * residual)), first, second,
                       amplitudes))
    scored.sort(key=lambda item: item[0])

    starts = []
    for _, first, second, amplitudes in scored[:_PROJECTION_SEEDS]:
        starts.append([amplitudes[0]] + list(first) +
                      [amplitudes[1]] + list(second))
    return starts


def _fit_poly3(x, y):
    design = parametric.jacobian(
        parametric.ParametricModel(Kind.POLY3, np.zeros(4)), x)
    coeffs, _, _, _ = scipy.linalg.lstsq(design, y)
    return coeffs


def fit_lm(kind, x, y, init=None, options=None, window_days=None):
    """Fits a parametric model by least squares.

    poly3 is linear in its coefficients and solved in closed form. The other
    kinds run Levenberg-Marquardt from the given init (if any), a heuristic
    start, variable-projection starts for exp2/gauss2, and n_restarts - 1
    random starts drawn uniformly from [0, 1]; the lowest-SSE result wins,
    earlier starts winning ties.

    Args:
      kind: A families.Kind value.
      x: Days.
      y: Observed values, same length.
      init: Optional initial coefficients.
      options: A FitOptions; defaults when None.
      window_days: Recorded in the result; defaults to max(x).

    Returns:
      A FitResult.

    Raises:
      DegBenchError: LENGTH_MISMATCH, UNDERDETERMINED_FIT with fewer points
        than coefficients or a constant x, FIT_DIVERGED when every start
        produced non-finite residuals.
    """
    options = options or FitOptions()
    names = COEFFICIENT_NAMES.get(kind)
    if names is None:
        raise DegBenchError(errors.INVALID_MODEL,
                            'Unknown model kind "%s".' % kind)
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if len(x) != len(y):
        raise DegBenchError(errors.LENGTH_MISMATCH,
                            'x and y lengths differ (%d vs %d).' %
                            (len(x), len(y)))
    if len(x) < len(names):
        raise DegBenchError(errors.UNDERDETERMINED_FIT,
                            '%s needs at least %d points, got %d.' %
                            (kind, len(names), len(x)),
                            details={'kind': kind, 'points': len(x)})
    if np.all(x == x[0]):
        raise DegBenchError(errors.UNDERDETERMINED_FIT,
                            'Cannot fit %s on a constant x.' % kind)
    order = np.lexsort((y, x))
    x = x[order]
    y = y[order]
    if window_days is None:
        window_days = float(x[-1])

    if kind == Kind.POLY3:
        coeffs = _fit_poly3(x, y)
        model = parametric.ParametricModel(kind, coeffs)
        predicted = parametric.evaluate(model, x)
        residual = y - predicted
        return FitResult(model,
                         MetricsBundle.evaluate(y, predicted, 'window',
                                                strict=False),
                         0, True, window_days,
                         [float(np.sum(residual * residual))])

    starts = []
    if init is not None:
        starts.append(np.asarray(init, dtype=float))
    starts.append(_heuristic_start(kind, x, y))
    starts.extend(_projection_starts(kind, x, y))
    rng = np.random.default_rng(options.seed)
    for _ in range(options.n_restarts - 1):
        starts.append(rng.uniform(0.0, 1.0, len(names)))

    best = None
    for index, start in enumerate(starts):
        outcome = levenberg_marquardt(kind, x, y, start, options)
        if outcome is None:
            _logger.debug('%s start %d diverged', kind, index)
            continue
        _logger.debug('%s start %d: SSE %.6g after %d iterations', kind,
                      index, outcome[3][-1], outcome[1])
        if best is None or outcome[3][-1] < best[3][-1]:
            best = outcome
    if best is None:
        raise DegBenchError(errors.FIT_DIVERGED,
                            'Every %s start point produced non-finite '
                            'residuals.' % kind, details={'kind': kind})

    coeffs, iterations, converged, history = best
    model = parametric.ParametricModel(kind, coeffs)
    predicted = parametric.evaluate(model, x)
    return FitResult(model,
                     MetricsBundle.evaluate(y, predicted, 'window',
                                            strict=False),
                     iterations, converged, window_days, history, len(starts))
