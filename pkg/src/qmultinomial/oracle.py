"""Permanent-based ground truth, sharing no code with the routing-class path."""

from __future__ import annotations

import math
from itertools import permutations
from typing import Sequence

import numpy as np

MAX_PERMANENT_SIZE = 20


def scattering_submatrix(U, n: Sequence[int], c: Sequence[int]) -> np.ndarray:
    """``m x m`` matrix with row ``i`` of ``U`` repeated ``n[i]`` times and
    column ``j`` repeated ``c[j]`` times, in ascending port order."""
    U = np.asarray(U, dtype=np.complex128)
    if sum(n) != sum(c):
        raise ValueError("input and output must carry the same photon number")
    if len(n) != U.shape[0] or len(c) != U.shape[1]:
        raise ValueError("composition length does not match the matrix")
    rows = np.repeat(np.arange(len(n)), n)
    cols = np.repeat(np.arange(len(c)), c)
    return U[np.ix_(rows, cols)]


def permanent(M) -> complex:
    """Permanent by Ryser's formula with Gray-code subset updates.

    Runs in ``O(2^m m)``. The column subsets are visited in Gray-code
    order so each step adds or removes a single column from the running
    row sums.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {M.shape}")
    m = M.shape[0]
    if m > MAX_PERMANENT_SIZE:
        raise ValueError(f"permanent size {m} exceeds the cap of {MAX_PERMANENT_SIZE}")
    if m == 0:
        return 1.0 + 0j
    cols = M.T.tolist()
    rowsums = [0j] * m
    total = 0j
    gray = 0
    for step in range(1, 1 << m):
        # index of the bit that flips between gray(step-1) and gray(step)
        col = (step & -step).bit_length() - 1
        gray ^= 1 << col
        sign = 1 if gray >> col & 1 else -1
        column = cols[col]
        prod = 1 + 0j
        for i in range(m):
            rowsums[i] += sign * column[i]
            prod *= rowsums[i]
        # (-1)^(m - |S|)
        if (m - gray.bit_count()) % 2:
            total -= prod
        else:
            total += prod
    return total


def permanent_naive(M) -> complex:
    """Permanent by direct summation over all ``m!`` permutations."""
    M = np.asarray(M, dtype=np.complex128)
    m = M.shape[0]
    total = 0j
    for sigma in permutations(range(m)):
        prod = 1 + 0j
        for i, j in enumerate(sigma):
            prod *= M[i, j]
        total += prod
    return total


def determinant(M) -> complex:
    """Determinant via LU factorization with partial pivoting (LAPACK)."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"determinant needs a square matrix, got shape {M.shape}")
    if M.shape[0] == 0:
        return 1.0 + 0j
    return complex(np.linalg.det(M))


def _factorials(counts: Sequence[int]) -> int:
    return math.prod(math.factorial(x) for x in counts)


def p_via_permanent(U, n: Sequence[int], c: Sequence[int]) -> float:
    """``|perm(U_S)|^2 / (prod n_i! prod c_j!)``."""
    perm = permanent(scattering_submatrix(U, n, c))
    return abs(perm) ** 2 / (_factorials(n) * _factorials(c))


def p_via_determinant(U, n: Sequence[int], c: Sequence[int]) -> float:
    """Fermionic probability ``|det(U_S)|^2`` for collision-free ``n, c``."""
    if any(x > 1 for x in n) or any(x > 1 for x in c):
        raise ValueError("fermionic transitions need occupations of at most one")
    return abs(determinant(scattering_submatrix(U, n, c))) ** 2
