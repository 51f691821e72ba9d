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

"""Single hidden layer perceptron trained by full-batch momentum descent."""

import logging

import numpy as np

from degbench import errors
from degbench.common.error import DegBenchError
from degbench.linear import standardize_columns

_logger = logging.getLogger(__name__)

PARAMETERS = ('w1', 'b1', 'w2', 'b2')


def loss_and_gradients(params, x, y):
    """Half mean squared error of the network and its parameter gradients.

    Args:
      params: Dict with 'w1' (m, h), 'b1' (h,), 'w2' (h,) and 'b2' (scalar).
      x: (n, m) standardized inputs.
      y: (n,) standardized targets.

    Returns:
      A (loss, gradients) pair; gradients has the keys of params.
    """
    pre = x.dot(params['w1']) + params['b1']
    hidden = np.maximum(pre, 0.0)
    output = hidden.dot(params['w2']) + params['b2']
    error = output - y
    n = len(y)
    loss = 0.5 * float(np.mean(error * error))

    d_output = error / n
    d_hidden = np.outer(d_output, params['w2']) * (pre > 0.0)
    gradients = {
        'w1': x.T.dot(d_hidden),
        'b1': np.sum(d_hidden, axis=0),
        'w2': hidden.T.dot(d_output),
        'b2': np.float64(np.sum(d_output)),
    }
    return loss, gradients


class NeuralNetwork(object):
    """ReLU perceptron on standardized inputs and target.

    Weights use He initialization from default_rng(seed); training runs a
    fixed number of full-batch epochs with classical momentum.
    """

    def __init__(self, hidden=32, learning_rate=1e-2, epochs=2000,
                 momentum=0.9, seed=0):
        self.hidden = int(hidden)
        self.learning_rate = float(learning_rate)
        self.epochs = int(epochs)
        self.momentum = float(momentum)
        self.seed = int(seed)
        self.params = None
        self.x_mean = self.x_scale = None
        self.y_mean = 0.0
        self.y_scale = 1.0

    def initial_params(self, n_features):
        rng = np.random.default_rng(self.seed)
        return {
            'w1': rng.normal(0.0, np.sqrt(2.0 / n_features),
                             (n_features, self.hidden)),
            'b1': np.zeros(self.hidden),
            'w2': rng.normal(0.0, np.sqrt(2.0 / self.hidden), self.hidden),
            'b2': np.float64(0.0),
        }

    def fit(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        self.x_mean, self.x_scale = standardize_columns(x)
        self.y_mean = float(np.mean(y))
        scale = float(np.std(y))
        self.y_scale = scale if scale > 0.0 else 1.0
        xs = (x - self.x_mean) / self.x_scale
        ys = (y - self.y_mean) / self.y_scale

        params = self.initial_params(x.shape[1])
        velocity = dict((name, np.zeros_like(params[name]))
                        for name in PARAMETERS)
        loss = float('nan')
        with np.errstate(over='ignore', invalid='ignore'):
            for epoch in range(self.epochs):
                loss, gradients = loss_and_gradients(params, xs, ys)
                if not np.isfinite(loss):
                    raise DegBenchError(
                        errors.NON_FINITE_LOSS,
                        'Network loss became non-finite at epoch %d '
                        '(learning rate %g).' % (epoch, self.learning_rate),
                        details={'epoch': epoch})
                for name in PARAMETERS:
                    velocity[name] = (self.momentum * velocity[name] -
                                      self.learning_rate * gradients[name])
                    params[name] = params[name] + velocity[name]
        if not all(np.all(np.isfinite(params[name])) for name in PARAMETERS):
            raise DegBenchError(errors.NON_FINITE_LOSS,
                                'Network weights became non-finite.')
        _logger.debug('Network trained for %d epochs, final loss %.6g',
                      self.epochs, loss)
        self.params = params
        return self

    def predict(self, x):
        xs = (np.asarray(x, dtype=float) - self.x_mean) / self.x_scale
        hidden = np.maximum(xs.dot(self.params['w1']) + self.params['b1'], 0.0)
        output = hidden.dot(self.params['w2']) + self.params['b2']
        return self.y_mean + self.y_scale * output

    def standardization(self):
        return {'mean': self.x_mean.tolist(), 'scale': self.x_scale.tolist(),
                'target_mean': self.y_mean, 'target_scale': self.y_scale}

    def get_state(self):
        state = {'hidden': self.hidden, 'learning_rate': self.learning_rate,
                 'epochs': self.epochs, 'momentum': self.momentum,
                 'seed': self.seed}
        for name in PARAMETERS:
            state[name] = np.asarray(self.params[name]).tolist()
        return state

    @classmethod
    def from_state(cls, state, standardization):
        model = cls(state['hidden'], state['learning_rate'], state['epochs'],
                    state['momentum'], state['seed'])
        model.params = dict((name, np.array(state[name], dtype=float))
                            for name in PARAMETERS)
        model.params['b2'] = np.float64(state['b2'])
        model.x_mean = np.array(standardization['mean'], dtype=float)
        model.x_scale = np.array(standardization['scale'], dtype=float)
        model.y_mean = standardization['target_mean']
        model.y_scale = standardization['target_scale']
        return model
