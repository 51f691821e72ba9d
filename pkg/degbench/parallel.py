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

"""Ordered process-pool map used by the sweeps."""

import errno
import multiprocessing


def _multiprocess_map(function, items, processes):
    """Runs function over items in a process pool.

    imap keeps the input order.

    Yields:
      The results of function, in the order of items.
    """
    pool = multiprocessing.Pool(processes)
    try:
        for result in pool.imap(function, items):
            yield result
        pool.close()
    except BaseException:
        # A failed job must not leave workers running.
        pool.terminate()
        raise
    finally:
        # join can raise a spurious "interrupted system call" (EINTR), which
        # we can ignore.
        try:
            pool.join()
        except OSError as err:
            if err.errno != errno.EINTR:
                raise err


def _single_process_map(function, items):
    for item in items:
        yield function(item)


def map_jobs(function, items, jobs=None):
    """Applies a picklable function to every item.

    Args:
      function: Module-level callable, usually a functools.partial.
      items: Sequence of picklable job descriptions.
      jobs: Worker processes; None means one per CPU, 1 runs in this
        process.

    Returns:
      A list of results in the order of items. Results never depend on jobs.
    """
    items = list(items)
    if jobs is None:
        jobs = multiprocessing.cpu_count()
    if jobs <= 1 or len(items) <= 1:
        return list(_single_process_map(function, items))
    return list(_multiprocess_map(function, items, min(jobs, len(items))))
