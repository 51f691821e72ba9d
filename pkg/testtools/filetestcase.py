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

"""Test case that ingests a CSV file, matching errors against annotations.

Runs the given ingestion callable on the given file, accumulating all
errors. The list of errors is then matched against the sidecar file
<name>.expected, which holds one annotation per line:

  NON_NUMERIC_CELL row=3 column=humidity_pct

An empty sidecar means the file must load cleanly.
"""

import re
import unittest

from degbench.common import erroraccumulator


class AnnotatedFileTestCase(unittest.TestCase):
    """Test case to run ingestion against a single file."""

    # Matches an all caps letters + underscores error identifier followed by
    # optional row and column locations.
    _EXPECTED_RE = re.compile(r'^\s*(?P<msg>[A-Z][A-Z_]+)'
                              r'(?:\s+row=(?P<row>[0-9]+))?'
                              r'(?:\s+column=(?P<column>\S+))?\s*$')

    def __init__(self, filename, ingest_callable, converter, kwargs=None):
        """Create a single file ingestion test case.

        Args:
          filename: Filename to test.
          ingest_callable: Callable that ingests a file. This is usually
            runner.RunIngest().
          converter: Function taking an error name and returning an error code.
          kwargs: Extra keyword arguments of the callable.
        """

        unittest.TestCase.__init__(self, 'runTest')
        self._filename = filename
        self._ingest_callable = ingest_callable
        self._converter = converter
        self._kwargs = kwargs or {}

    def shortDescription(self):
        """Provides a description for the test."""
        return 'Ingest %s' % self._filename

    def runTest(self):
        """Runs the test."""
        expected_path = self._filename + '.expected'
        try:
            stream = open(expected_path)
        except IOError as ex:
            raise IOError('Could not find testdata resource for %s: %s' %
                          (self._filename, ex))

        with stream:
            expected = self._GetExpectedMessages(stream)
        got = self._ProcessFileAndGetMessages(self._filename)
        self.assertEqual(expected, got)

    def _GetExpectedMessages(self, stream):
        """Parse a sidecar file and get a sorted list of expected messages."""
        messages = []
        for line in stream:
            if not line.strip():
                continue
            match = self._EXPECTED_RE.match(line)
            if not match:
                raise ValueError('Bad annotation in %s: %r' %
                                 (self._filename, line))
            row = match.group('row')
            messages.append((self._converter(match.group('msg')),
                             None if row is None else int(row),
                             match.group('column')))
        messages.sort(key=repr)
        return messages

    def _ProcessFileAndGetMessages(self, filename):
        """Ingest the file and collect the reported errors."""
        error_accumulator = erroraccumulator.ErrorAccumulator()
        self._ingest_callable(filename, error_accumulator, **self._kwargs)

        error_msgs = [(error.code, error.row, error.column)
                      for error in error_accumulator.GetErrors()]
        error_msgs.sort(key=repr)
        return error_msgs
