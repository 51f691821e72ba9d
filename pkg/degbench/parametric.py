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

"""Closed-form parametric degradation models and their jacobians.

  exp1    a*exp(b*x)
  exp2    a*exp(b*x) + c*exp(d*x)
  gauss1  a1*exp(-((x-b1)/c1)^2)
  gauss2  a1*exp(-((x-b1)/c1)^2) + a2*exp(-((x-b2)/c2)^2)
  poly3   p1*x^3 + p2*x^2 + p3*x + p4
"""

import numpy as np

from degbench import errors
from degbench.common.error import DegBenchError
from degbench.families import COEFFICIENT_NAMES
from degbench.families import Kind


class ParametricModel(object):
    """One model kind with concrete coefficient values.

    Attributes:
      kind: A families.Kind value.
      coeffs: Float array in COEFFICIENT_NAMES[kind] order.
    """

    def __init__(self, kind, coeffs):
        if kind not in COEFFICIENT_NAMES:
            raise DegBenchError(errors.INVALID_MODEL,
                                'Unknown model kind "%s".' % kind)
        coeffs = np.array(coeffs, dtype=float).ravel()
        names = COEFFICIENT_NAMES[kind]
        if len(coeffs) != len(names):
            raise DegBenchError(errors.INVALID_MODEL,
                                '%s takes %d coefficients, got %d.' %
                                (kind, len(names), len(coeffs)))
        if not np.all(np.isfinite(coeffs)):
            raise DegBenchError(errors.INVALID_MODEL,
                                'Coefficients must be finite.')
        for name, value in zip(names, coeffs):
            if name.startswith('c') and kind in (Kind.GAUSS1, Kind.GAUSS2) \
                    and value == 0.0:
                raise DegBenchError(errors.INVALID_MODEL,
                                    'Gaussian width %s must not be zero.' %
                                    name)
        self.kind = kind
        self.coeffs = coeffs

    @property
    def names(self):
        return COEFFICIENT_NAMES[self.kind]

    def as_dict(self):
        return dict(zip(self.names, (float(c) for c in self.coeffs)))

    def to_dict(self):
        return {'kind': self.kind, 'coeffs': self.as_dict()}

    @classmethod
    def from_dict(cls, data):
        names = COEFFICIENT_NAMES.get(data.get('kind'))
        if names is None:
            raise DegBenchError(errors.INVALID_MODEL,
                                'Unknown model kind "%s".' % data.get('kind'))
        return cls(data['kind'], [data['coeffs'][name] for name in names])

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        return '%s(%s)' % (self.kind, ', '.join(
            '%s=%.6g' % item for item in zip(self.names, self.coeffs)))


def _gauss_terms(a, b, c, x):
    u = (x - b) / c
    e = np.exp(-u * u)
    return a * e, e, u


def evaluate(model, x):
    """Evaluates the model pointwise at x (days)."""
    x = np.asarray(x, dtype=float)
    p = model.coeffs
    if model.kind == Kind.EXP1:
        return p[0] * np.exp(p[1] * x)
    if model.kind == Kind.EXP2:
        return p[0] * np.exp(p[1] * x) + p[2] * np.exp(p[3] * x)
    if model.kind == Kind.GAUSS1:
        return _gauss_terms(p[0], p[1], p[2], x)[0]
    if model.kind == Kind.GAUSS2:
        return (_gauss_terms(p[0], p[1], p[2], x)[0] +
                _gauss_terms(p[3], p[4], p[5], x)[0])
    return ((p[0] * x + p[1]) * x + p[2]) * x + p[3]


def _gauss_columns(a, b, c, x):
    _, e, u = _gauss_terms(a, b, c, x)
    return [e, a * e * 2.0 * u / c, a * e * 2.0 * u * u / c]


def jacobian(model, x):
    """Analytic partial derivatives of the model, one column per coefficient.

    Returns:
      An (n, k) float array.
    """
    x = np.asarray(x, dtype=float).ravel()
    p = model.coeffs
    if model.kind in (Kind.EXP1, Kind.EXP2):
        columns = []
        for a, b in zip(p[0::2], p[1::2]):
            e = np.exp(b * x)
            columns.extend([e, a * x * e])
    elif model.kind == Kind.GAUSS1:
        columns = _gauss_columns(p[0], p[1], p[2], x)
    elif model.kind == Kind.GAUSS2:
        columns = (_gauss_columns(p[0], p[1], p[2], x) +
                   _gauss_columns(p[3], p[4], p[5], x))
    else:
        columns = [x ** 3, x ** 2, x, np.ones_like(x)]
    return np.column_stack(columns)


def width_indices(kind):
    """Positions of the Gaussian width coefficients of a kind."""
    return [i for i, name in enumerate(COEFFICIENT_NAMES[kind])
            if kind in (Kind.GAUSS1, Kind.GAUSS2) and name.startswith('c')]
