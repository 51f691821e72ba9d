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

"""Error handler class that accumulates an array of errors."""

import logging

from degbench import errors
from degbench.common import errorhandler
from degbench.common import erroroutput

_logger = logging.getLogger(__name__)


class ErrorAccumulator(errorhandler.ErrorHandler):
    """Error handler object that accumulates errors in a list.

    Every error is tagged with the stage that was current when it was
    reported. Codes in errors.WARNINGS are logged as warnings, the rest as
    errors.
    """

    def __init__(self):
        self._errors = []
        self._stage = None

    def HandleStage(self, stage):
        self._stage = stage

    def HandleError(self, error):
        """Append the error to the list.

        Args:
          error: The error object
        """
        if self._stage is not None and 'stage' not in error.details:
            error.details['stage'] = self._stage
        if error.code in errors.WARNINGS:
            _logger.warning('%s', erroroutput.GetErrorOutput(error))
        else:
            _logger.error('%s', erroroutput.GetErrorOutput(error))
        self._errors.append(error)

    def FinishStage(self):
        self._stage = None

    def GetErrors(self):
        """Returns the accumulated errors.

        Returns:
          A sequence of errors.
        """
        return self._errors
