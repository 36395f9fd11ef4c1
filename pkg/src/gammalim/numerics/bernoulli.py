"""Exact Bernoulli numbers (convention B_1 = -1/2)."""

import threading
from fractions import Fraction
from math import comb

_table = [Fraction(1)]
_lock = threading.Lock()


def _extend(m):
    # sum_{j=0}^{n} C(n+1, j) B_j = 0  =>  B_n = -1/(n+1) sum_{j<n} C(n+1, j) B_j
    with _lock:
        while len(_table) <= m:
            n = len(_table)
            if n >= 3 and n % 2:
                _table.append(Fraction(0))
                continue
            s = sum(comb(n + 1, j) * _table[j] for j in range(n) if _table[j])
            _table.append(-s / (n + 1))


def bernoulli(m):
    """Return B_m as an exact ``Fraction``.

    >>> bernoulli(2), bernoulli(3), bernoulli(12)
    (Fraction(1, 6), Fraction(0, 1), Fraction(-691, 2730))
    """
    if m < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if m >= len(_table):
        _extend(m)
    return _table[m]
