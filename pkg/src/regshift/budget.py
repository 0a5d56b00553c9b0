"""Cooperative per-job time and memory budgets.

Long-running loops call :func:`check`; inside a :func:`time_budget` or
:func:`memory_budget` block this raises once the deadline passes or the
process's resident memory goes over the limit.
"""

import contextvars
import os
import resource
import time
from contextlib import contextmanager

_deadline = contextvars.ContextVar("regshift_deadline", default=None)
_mem_limit = contextvars.ContextVar("regshift_mem_limit", default=None)

# resident memory is sampled at most this often (seconds)
MEMORY_POLL = 0.05
_last_poll = 0.0


class BudgetExceeded(RuntimeError):
    pass


class MemoryBudgetExceeded(BudgetExceeded):
    pass


@contextmanager
def time_budget(seconds):
    if seconds is None:
        yield
        return
    token = _deadline.set(time.monotonic() + seconds)
    try:
        yield
    finally:
        _deadline.reset(token)


@contextmanager
def memory_budget(megabytes):
    global _last_poll
    if megabytes is None:
        yield
        return
    _last_poll = 0.0  # sample on the first check inside the block
    token = _mem_limit.set(int(megabytes * 2 ** 20))
    try:
        yield
    finally:
        _mem_limit.reset(token)


def resident_bytes() -> int:
    try:
        with open("/proc/self/statm") as fh:
            return int(fh.read().split()[1]) * os.sysconf("SC_PAGE_SIZE")
    except (OSError, ValueError, IndexError):
        # peak rather than current, but a safe over-estimate
        return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def check():
    global _last_poll
    now = time.monotonic()
    d = _deadline.get()
    if d is not None and now > d:
        raise BudgetExceeded("time budget exceeded")
    limit = _mem_limit.get()
    if limit is not None and now - _last_poll >= MEMORY_POLL:
        _last_poll = now
        used = resident_bytes()
        if used > limit:
            raise MemoryBudgetExceeded(f"resident memory {used // 2 ** 20} MB over {limit // 2 ** 20} MB")
