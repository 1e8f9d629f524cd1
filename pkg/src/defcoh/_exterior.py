"""Small combinatorial helpers shared by the multilinear code: shuffles,
sorting signs and determinants of polynomial matrices."""

from functools import lru_cache
from itertools import combinations


def perm_sign(seq):
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def sort_with_sign(seq):
    """``(sign, sorted_tuple)``; sign 0 when an entry repeats."""
    seq = tuple(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    return perm_sign(seq), tuple(sorted(seq))


@lru_cache(maxsize=None)
def shuffles(p, q):
    """All (p, q)-shuffles of ``range(p + q)`` as ``(order, sign)`` pairs.

    ``order[:p]`` and ``order[p:]`` are both increasing.
    """
    if p < 0 or q < 0:
        return ()
    n = p + q
    out = []
    for first in combinations(range(n), p):
        rest = tuple(i for i in range(n) if i not in first)
        order = first + rest
        out.append((order, perm_sign(order)))
    return tuple(out)


@lru_cache(maxsize=None)
def increasing_tuples(r, k):
    if k < 0 or k > r:
        return ()
    return tuple(combinations(range(r), k))


def det(rows, one):
    """Determinant of a square matrix of ring elements by cofactor expansion.

    Zero entries (falsy) are skipped, which keeps frame-vector rows cheap.
    ``one`` is the multiplicative unit returned for the empty matrix.
    """
    k = len(rows)
    if k == 0:
        return one
    if k == 1:
        return rows[0][0]
    return _det(rows, tuple(range(k)), 0, one)


def _det(rows, cols, i, one):
    if i == len(rows) - 1:
        return rows[i][cols[0]]
    total = None
    row = rows[i]
    for pos, c in enumerate(cols):
        a = row[c]
        if not a:
            continue
        minor = _det(rows, cols[:pos] + cols[pos + 1:], i + 1, one)
        if not minor:
            continue
        term = a * minor
        if pos % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return one - one
    return total
