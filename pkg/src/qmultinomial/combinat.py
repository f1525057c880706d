"""Exact combinatorial primitives.

Compositions are plain tuples of non-negative ints. Routing matrices are
tuples of row tuples, ``J[i][j]`` being the number of photons routed from
input port ``i`` to output port ``j``. Counts are Python ints capped at a
128-bit magnitude; exceeding the cap raises :class:`CapacityError`.
"""

from __future__ import annotations

import math
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

Composition = Tuple[int, ...]
RoutingMatrix = Tuple[Tuple[int, ...], ...]

COUNT_BITS = 128
MAX_COUNT = (1 << COUNT_BITS) - 1


class CapacityError(OverflowError):
    """An exact count does not fit in the 128-bit magnitude."""


def _checked(value: int) -> int:
    if value > MAX_COUNT:
        raise CapacityError(
            f"exact count needs {value.bit_length()} bits, limit is {COUNT_BITS}"
        )
    return value


def as_composition(counts: Iterable[int], m: int | None = None, k: int | None = None) -> Composition:
    """Validate ``counts`` and return it as a tuple.

    Raises ``ValueError`` on negative entries or when the total or the
    length disagree with ``m`` or ``k``.
    """
    comp = tuple(int(x) for x in counts)
    if any(x < 0 for x in comp):
        raise ValueError(f"composition has negative entries: {comp}")
    if m is not None and sum(comp) != m:
        raise ValueError(f"composition {comp} does not sum to {m}")
    if k is not None and len(comp) != k:
        raise ValueError(f"composition {comp} has {len(comp)} parts, expected {k}")
    return comp


def multinomial(m: int, parts: Sequence[int]) -> int:
    """Exact multinomial coefficient ``m! / prod(parts_i!)``.

    Parameters
    ----------
    m : int
        Total, must equal ``sum(parts)``.
    parts : sequence of int
        Non-negative parts.

    Returns
    -------
    int
        The coefficient.

    Raises
    ------
    CapacityError
        If the result exceeds 128 bits.
    """
    parts = as_composition(parts, m=m)
    # product of binomials keeps intermediates no larger than the result
    result = 1
    running = 0
    for p in parts:
        running += p
        result *= math.comb(running, p)
    return _checked(result)


def enumerate_compositions(m: int, k: int) -> list[Composition]:
    """All compositions of ``m`` into ``k`` parts, in colex order.

    Colex order compares tuples from the last part backwards, so for
    ``(m, k) = (2, 2)`` the result is ``[(2, 0), (1, 1), (0, 2)]``.
    """
    if m < 0 or k < 1:
        raise ValueError("need m >= 0 and k >= 1")
    return list(_compositions(m, k))


@lru_cache(maxsize=None)
def _compositions(m: int, k: int) -> tuple[Composition, ...]:
    if k == 1:
        return ((m,),)
    out = []
    # last part varies slowest
    for last in range(m + 1):
        for head in _compositions(m - last, k - 1):
            out.append(head + (last,))
    return tuple(out)


def enumerate_routing_matrices(n: Sequence[int], c: Sequence[int]) -> tuple[RoutingMatrix, ...]:
    """Integer points of the transportation polytope with margins ``(n, c)``.

    Row sums equal ``n`` and column sums equal ``c``. Matrices come out in
    lexicographic row-major order: entries are filled cell by cell and each
    cell takes its admissible values in increasing order. The lower bound
    on a cell is the amount the rest of its row cannot absorb, so the fill
    never reaches a dead end.
    """
    n = as_composition(n)
    c = as_composition(c, m=sum(n), k=len(n))
    return _routing_matrices(n, c)


@lru_cache(maxsize=4096)
def _routing_matrices(n: Composition, c: Composition) -> tuple[RoutingMatrix, ...]:
    k = len(n)
    out: list[RoutingMatrix] = []
    rows: list[tuple[int, ...]] = []

    def fill_row(i: int, colrem: list[int]) -> None:
        if i == k:
            out.append(tuple(rows))
            return
        row = [0] * k

        def fill_cell(j: int, rowrem: int, tail_cap: int) -> None:
            if j == k:
                rows.append(tuple(row))
                fill_row(i + 1, [colrem[t] - row[t] for t in range(k)])
                rows.pop()
                return
            tail_cap -= colrem[j]
            lo = max(0, rowrem - tail_cap)
            hi = min(rowrem, colrem[j])
            for x in range(lo, hi + 1):
                row[j] = x
                fill_cell(j + 1, rowrem - x, tail_cap)
            row[j] = 0

        fill_cell(0, n[i], sum(colrem))

    fill_row(0, list(c))
    return tuple(out)


def margins(J: RoutingMatrix) -> tuple[Composition, Composition]:
    """Row sums and column sums of a routing matrix."""
    rows = tuple(sum(r) for r in J)
    cols = tuple(sum(col) for col in zip(*J))
    return rows, cols


def multiplicity(J: RoutingMatrix) -> int:
    """Number of labeled photon assignments realizing ``J``.

    This is the product over rows of ``multinomial(n_i; J_i1, ..., J_ik)``.
    """
    fact = math.factorial
    result = 1
    for row in J:
        denom = 1
        for x in row:
            denom *= fact(x)
        result *= fact(sum(row)) // denom
    return _checked(result)


def hypergeometric_weights(n: Sequence[int], c: Sequence[int]) -> list[tuple[RoutingMatrix, float]]:
    """Routing matrices paired with their multivariate hypergeometric weight.

    ``w_J = multiplicity(J) / multinomial(m, c)``; the weights sum to one.
    Each weight is the correctly rounded double of the exact ratio.
    """
    n = as_composition(n)
    c = as_composition(c, m=sum(n), k=len(n))
    return list(_float_weights(n, c))


@lru_cache(maxsize=8192)
def _float_weights(n: Composition, c: Composition) -> tuple[tuple[RoutingMatrix, float], ...]:
    return tuple((J, float(w)) for J, w in exact_weights(n, c))


def exact_weights(n: Sequence[int], c: Sequence[int]) -> list[tuple[RoutingMatrix, Fraction]]:
    """Like :func:`hypergeometric_weights` but with exact rational weights."""
    matrices = enumerate_routing_matrices(n, c)
    total = multinomial(sum(c), c)
    return [(J, Fraction(multiplicity(J), total)) for J in matrices]


def transpose(J: RoutingMatrix) -> RoutingMatrix:
    return tuple(zip(*J))


def permutation_sign(J: RoutingMatrix) -> int:
    """Signature of a 0/1 routing matrix read as a partial permutation.

    Occupied rows, in order, are matched to occupied columns, in order; the
    sign is that of the induced permutation. Raises ``ValueError`` when an
    entry exceeds one.
    """
    targets = []
    for row in J:
        hit = [j for j, x in enumerate(row) if x]
        if any(x > 1 for x in row) or len(hit) > 1:
            raise ValueError("routing matrix is not a partial permutation")
        if hit:
            targets.append(hit[0])
    # count inversions; m <= k is tiny
    inversions = sum(
        1 for a in range(len(targets)) for b in range(a + 1, len(targets)) if targets[a] > targets[b]
    )
    return -1 if inversions % 2 else 1
