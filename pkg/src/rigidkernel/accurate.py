"""Error-free transformations and compensated reductions.

Inner products in the Stieltjes procedure and the principal-value sums over
point configurations go through these helpers. Products are split exactly
(Dekker/Veltkamp) and the resulting terms are summed with ``math.fsum``,
which is correctly rounded.
"""

from __future__ import annotations

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    """Return ``(s, e)`` with ``s = fl(a + b)`` and ``a + b = s + e`` exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Return ``(p, e)`` with ``p = fl(a * b)`` and ``a * b = p + e`` exactly."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = al * bl - (((p - ah * bh) - al * bh) - ah * bl)
    return p, e


def fsum(values) -> float:
    """Correctly rounded sum of a 1-d array."""
    return math.fsum(np.ravel(values).tolist())


def dot(x, y) -> float:
    """Dot product accurate to about twice working precision."""
    p, e = two_prod(x, y)
    return math.fsum(np.concatenate([np.ravel(p), np.ravel(e)]).tolist())


def rowsum(matrix) -> np.ndarray:
    """Correctly rounded sum of every row of a 2-d array."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    return np.array([math.fsum(row) for row in m.tolist()])


def paired_sum(positive, negative) -> float:
    """Sum of two sequences, paired rank by rank as in a principal value.

    The final reduction is exact, so the pairing only matters for the
    intermediate additions, whose rounding errors are carried along.
    """
    positive = np.asarray(positive, dtype=float)
    negative = np.asarray(negative, dtype=float)
    k = min(positive.size, negative.size)
    pairs = positive[:k] + negative[:k]
    # the pair additions above are rounded; keep their error terms
    _, err = two_sum(positive[:k], negative[:k])
    rest = np.concatenate([positive[k:], negative[k:]])
    return math.fsum(np.concatenate([pairs, err, rest]).tolist())
