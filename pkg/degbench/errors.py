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

"""Error codes for DegBench."""


def ByName(name):
    """Get the error code for the given error name.

    Args:
      name: The name of the error

    Returns:
      The error code
    """
    return globals()[name]


def NameOf(code):
    """Get the error name for the given error code.

    Args:
      code: The numeric error code.

    Returns:
      The registered name, or 'UNKNOWN' for unregistered codes.
    """
    for name, value in globals().items():
        if name.isupper() and value == code:
            return name
    return 'UNKNOWN'


# Ingestion - these errors stop loading a single file
FILE_NOT_FOUND = -1
HEADER_MISMATCH = 1
NON_NUMERIC_CELL = 2
EMPTY_BODY = 3
MISSING_VALUE = 4
INVALID_SCHEMA = 5
MALFORMED_CSV = 6

# Curation
TOO_FEW_ROWS = 10
CONSTANT_TARGET = 11
ZERO_INITIAL_TARGET = 12

# Splitting
EMPTY_PARTITION = 20
TOO_FEW_GROUPS = 21
UNKNOWN_GROUP = 22
INVALID_SPLIT = 23

# Metrics
LENGTH_MISMATCH = 30
CONSTANT_OBSERVED = 31

# J-V curves
INVALID_CURVE = 40
NO_ZERO_CROSSING = 41
NO_POWER_QUADRANT = 42

# Parametric fitting
UNDERDETERMINED_FIT = 50
FIT_DIVERGED = 51
EMPTY_HORIZON = 52
INVALID_MODEL = 53

# Learners
RANK_DEFICIENT = 60
NON_FINITE_LOSS = 61
COLUMN_MISMATCH = 62
INVALID_SPEC = 63
MODEL_FORMAT = 64
INVALID_ARGUMENT = 65

# Pipeline
EMPTY_CUTOFF_WINDOW = 70
INVALID_CONFIG = 71
TOO_MANY_FEATURES = 72
CELL_FAILED = 73
TRAINING_LEAKAGE = 74
VERIFICATION_FAILED = 75

# Command line
OUTPUT_EXISTS = 80
USAGE = 90

# Anything that escaped the typed errors above
INTERNAL_ERROR = 99

# Codes that only warn: the run continues and the report carries them.
WARNINGS = frozenset([
    CELL_FAILED,
    TRAINING_LEAKAGE,
    VERIFICATION_FAILED,
    ])
