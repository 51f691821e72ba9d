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

"""Column schema of a degradation dataset.

A schema file is key-value text with one section per column, in column
order:

  [solvent_htl_ul]
  kind = numeric
  unit = ul
  role = feature
"""

import configparser
import os

from degbench import errors
from degbench.common.error import DegBenchError

NUMERIC = 'numeric'
CATEGORICAL = 'categorical'
KINDS = (NUMERIC, CATEGORICAL)

FEATURE = 'feature'
TARGET = 'target'
GROUP = 'group-id'
TIME = 'time'
ROLES = (FEATURE, TARGET, GROUP, TIME)

_KEYS = frozenset(['kind', 'unit', 'role'])


class ColumnSpec(object):
    """Declaration of one dataset column.

    Attributes:
      name: Column name, as in the CSV header.
      kind: NUMERIC or CATEGORICAL.
      unit: Informational unit string.
      role: FEATURE, TARGET, GROUP or TIME.
    """

    def __init__(self, name, kind=NUMERIC, unit='', role=FEATURE):
        if kind not in KINDS:
            raise DegBenchError(errors.INVALID_SCHEMA,
                                'Column "%s" has unknown kind "%s".' %
                                (name, kind), column=name)
        if role not in ROLES:
            raise DegBenchError(errors.INVALID_SCHEMA,
                                'Column "%s" has unknown role "%s".' %
                                (name, role), column=name)
        self.name = name
        self.kind = kind
        self.unit = unit
        self.role = role

    def to_dict(self):
        return {'name': self.name, 'kind': self.kind, 'unit': self.unit,
                'role': self.role}

    def __eq__(self, other):
        return (isinstance(other, ColumnSpec) and
                self.to_dict() == other.to_dict())

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'ColumnSpec(%r, %r, %r, %r)' % (self.name, self.kind,
                                               self.unit, self.role)


def validate_schema(columns):
    """Checks the schema invariants.

    Args:
      columns: Sequence of ColumnSpec.

    Raises:
      DegBenchError: INVALID_SCHEMA when names repeat, when there is not
        exactly one target, or more than one group-id or time column.
    """
    names = [column.name for column in columns]
    seen = set()
    for name in names:
        if name in seen:
            raise DegBenchError(errors.INVALID_SCHEMA,
                                'Column "%s" is declared twice.' % name,
                                column=name)
        seen.add(name)

    roles = [column.role for column in columns]
    if roles.count(TARGET) != 1:
        raise DegBenchError(errors.INVALID_SCHEMA,
                            'Schema needs exactly one target column, '
                            'found %d.' % roles.count(TARGET))
    for role in (GROUP, TIME):
        if roles.count(role) > 1:
            raise DegBenchError(errors.INVALID_SCHEMA,
                                'Schema allows at most one %s column, '
                                'found %d.' % (role, roles.count(role)))
    for column in columns:
        if column.role in (TARGET, TIME) and column.kind != NUMERIC:
            raise DegBenchError(errors.INVALID_SCHEMA,
                                'The %s column "%s" must be numeric.' %
                                (column.role, column.name),
                                column=column.name)


def load_schema(path):
    """Reads a schema file.

    Args:
      path: Path of the key-value schema file.

    Returns:
      A list of ColumnSpec in declaration order.

    Raises:
      DegBenchError: FILE_NOT_FOUND or INVALID_SCHEMA.
    """
    if not os.path.isfile(path):
        raise DegBenchError(errors.FILE_NOT_FOUND,
                            'Schema file not found: %s' % path)

    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding='utf-8') as handle:
            parser.read_file(handle)
    except configparser.Error as err:
        raise DegBenchError(errors.INVALID_SCHEMA,
                            'Cannot parse schema %s: %s' % (path, err))

    columns = []
    for name in parser.sections():
        section = parser[name]
        unknown = sorted(set(section.keys()) - _KEYS)
        if unknown:
            raise DegBenchError(errors.INVALID_SCHEMA,
                                'Column "%s" has unknown keys: %s' %
                                (name, ', '.join(unknown)), column=name)
        columns.append(ColumnSpec(name,
                                  kind=section.get('kind', NUMERIC),
                                  unit=section.get('unit', ''),
                                  role=section.get('role', FEATURE)))
    validate_schema(columns)
    return columns


def write_schema(columns, path):
    """Writes a schema file that load_schema reads back unchanged."""
    blocks = []
    for column in columns:
        blocks.append('[%s]\nkind = %s\nunit = %s\nrole = %s\n' %
                      (column.name, column.kind, column.unit, column.role))
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write('\n'.join(blocks))


def find_role(columns, role):
    """Returns the single column with the given role, or None."""
    for column in columns:
        if column.role == role:
            return column
    return None
