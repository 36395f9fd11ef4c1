"""Once-only memoization for the package's lazily built tables."""

import functools
import threading


def once_per_key(fn):
    """Cache ``fn`` by positional arguments; each key is computed exactly once.

    Concurrent first calls for the same key block on a per-key lock instead of
    racing, so a cached entry is never observed half-built.
    """
    cache = {}
    locks = {}
    guard = threading.Lock()

    @functools.wraps(fn)
    def wrapper(*args):
        try:
            return cache[args]
        except KeyError:
            pass
        with guard:
            lock = locks.setdefault(args, threading.Lock())
        with lock:
            if args not in cache:
                cache[args] = fn(*args)
        return cache[args]

    wrapper.cache_clear = cache.clear
    return wrapper
