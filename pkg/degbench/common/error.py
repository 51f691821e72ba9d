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

"""Error objects shared by every DegBench module."""

from degbench import errors


class Error(object):
    """Object representing a single reported problem."""

    def __init__(self, code, message, row=None, column=None, details=None):
        """Initialize the error object.

        Args:
          code: The numeric error code, see errors.py.
          message: The error message string.
          row: 1-based data row the problem was found on, if any.
          column: Column name the problem was found in, if any.
          details: Optional dict with extra machine-readable context.
        """
        self.code = code
        self.message = message
        self.row = row
        self.column = column
        self.details = details or {}

    def to_dict(self):
        """Returns the error as a JSON-ready dict."""
        result = {
            'code': self.code,
            'name': errors.NameOf(self.code),
            'message': self.message,
        }
        if self.row is not None:
            result['row'] = self.row
        if self.column is not None:
            result['column'] = self.column
        if self.details:
            result['details'] = self.details
        return result

    def __repr__(self):
        return 'Error(%d, %r)' % (self.code, self.message)


class DegBenchError(Exception):
    """Exception raised for every typed failure.

    Attributes:
      error: The Error describing the failure.
    """

    def __init__(self, code, message, row=None, column=None, details=None):
        Exception.__init__(self, message)
        self.error = Error(code, message, row, column, details)

    @property
    def code(self):
        return self.error.code

    @property
    def message(self):
        return self.error.message

    def __reduce__(self):
        # Worker processes send failures back to the parent by pickling.
        err = self.error
        return (self.__class__,
                (err.code, err.message, err.row, err.column, err.details))
