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

"""Setup.py file for degbench."""


try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup

# Unit Tests require mock on Python 2
TESTS_REQUIRE = []
try:
    # pylint: disable=unused-import
    import unittest.mock
except ImportError:
    TESTS_REQUIRE.append('mock')


setup(
    name='degbench',
    version='1.0.0',
    description='Degradation model benchmarking for organic solar cells',
    license='Apache',
    author='The DegBench Authors',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        'pandas>=1.0',
        'matplotlib>=3.1',
    ],
    tests_require=TESTS_REQUIRE,
    package_dir={'degbench': 'degbench'},
    packages=['degbench', 'degbench.common', 'testtools'],
    test_suite="tests",
    entry_points={
        'console_scripts': [
            'degbench = degbench.main:main',
        ]
    }
)
