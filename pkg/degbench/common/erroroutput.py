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

"""Utility functions to format errors."""

import json


def _Location(error):
    parts = []
    if error.row is not None:
        parts.append('Row %d' % error.row)
    if error.column is not None:
        parts.append('Column %s' % error.column)
    return parts


def GetErrorOutput(error):
    """Get a output line for an error in regular format."""

    location = ', '.join(_Location(error))
    if location:
        location += ', '

    return '%sE:%04d: %s' % (location, error.code, error.message)


def GetJsonErrorOutput(error):
    """Get the machine-readable error document printed on fatal failures."""
    return json.dumps({'error': error.to_dict()}, sort_keys=True)
