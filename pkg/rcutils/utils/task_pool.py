"""Ordered process pool used to run independent trials in parallel.

Trials are plain module-level functions applied to picklable task tuples.
Results come back in submission order whatever the number of workers, and
with a single worker the tasks run inline in the calling process.
"""

import multiprocessing as mp

from rcutils.utils.helper import default_jobs
from rcutils.complexlib.log import debug


class TaskPool:
    """Maps a function over tasks with ``jobs`` worker processes.

    Args:
        jobs (int): number of worker processes (**None** selects
                    :py:func:`~rcutils.utils.helper.default_jobs`)
    """

    def __init__(self, jobs=None):
        if jobs is None:
            jobs = default_jobs()
        self.jobs = max(1, int(jobs))

    def __repr__(self):
        return 'TaskPool(jobs={})'.format(self.jobs)

    def imap(self, func, tasks, chunksize=16):
        """Yields ``func(task)`` for every task, in order.

        Args:
            func (types.FunctionType): module-level function
            tasks (iterable)         : picklable arguments
            chunksize (int)          : tasks shipped to a worker at once

        Yields:
            the results, in the order of ``tasks``.
        """
        if self.jobs == 1:
            for task in tasks:
                yield func(task)
            return
        debug('starting {} worker processes for {}\n'.format(self.jobs, func.__name__))
        with mp.Pool(self.jobs) as pool:
            for result in pool.imap(func, tasks, chunksize):
                yield result

    def map(self, func, tasks, chunksize=16):
        """Same as :py:meth:`imap` but returns a list."""
        return list(self.imap(func, tasks, chunksize))
