"""Transition probabilities as weighted sums over routing matrices.

For input ``n`` and output ``c`` (compositions of ``m``) every routing
matrix ``J`` carries an amplitude ``a_J = prod U_ij^J_ij`` and a
hypergeometric weight ``w_J``. Distinguishable particles add the
squared moduli; identical particles add the amplitudes first, with the
permutation sign attached for fermions:

    P_boson = multinomial(m, n) * multinomial(m, c) * |sum w_J a_J|^2
    P_dist  = multinomial(m, c) * sum w_J |a_J|^2
    P_ferm  = multinomial(m, n) * multinomial(m, c) * |sum w_J sgn(J) a_J|^2

Sums are accumulated in the enumeration order of
:func:`qmultinomial.combinat.enumerate_routing_matrices`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from qmultinomial.combinat import (
    Composition,
    RoutingMatrix,
    as_composition,
    enumerate_compositions,
    hypergeometric_weights,
    multinomial,
    permutation_sign,
)
from qmultinomial.optics import as_matrix

CLAMP_FLOOR = -1e-14


class Statistics(str, Enum):
    BOSON = "boson"
    DISTINGUISHABLE = "distinguishable"
    FERMION = "fermion"


class CollisionError(ValueError):
    """Fermionic transition requested with a multiply occupied port."""


class UndefinedRatioError(ZeroDivisionError):
    """Quantum-to-classical ratio requested where the classical probability is zero."""


@dataclass(frozen=True)
class TransitionReport:
    """A transition probability and the pieces it is assembled from.

    ``interference_factor`` and ``ratio`` are ``None`` where the classical
    probability vanishes.
    """

    probability: float
    coherent_sum: complex
    incoherent_sum: float
    class_count: int
    input_prefactor: int
    output_prefactor: int
    interference_factor: float | None
    ratio: float | None


def amplitude(U, J: RoutingMatrix) -> complex:
    """``prod_ij U_ij ** J_ij``; the empty product is 1."""
    U = np.asarray(U)
    if U.shape != (len(J), len(J)):
        raise ValueError("routing matrix and interferometer sizes differ")
    return _amplitude(U.tolist(), J)


def _amplitude(rows: list[list[complex]], J: RoutingMatrix) -> complex:
    a = 1 + 0j
    for urow, jrow in zip(rows, J):
        for u, e in zip(urow, jrow):
            if e:
                a *= u**e
    return a


def _check_pair(U, n, c) -> tuple[np.ndarray, Composition, Composition]:
    U = as_matrix(U)
    k = U.shape[0]
    n = as_composition(n, k=k)
    c = as_composition(c, m=sum(n), k=k)
    return U, n, c


def _sums(U, n, c, signed: bool = False):
    coherent = 0j
    incoherent = 0.0
    terms = hypergeometric_weights(n, c)
    rows = U.tolist()
    for J, w in terms:
        a = _amplitude(rows, J)
        if signed:
            a *= permutation_sign(J)
        coherent += w * a
        incoherent += w * (a.real * a.real + a.imag * a.imag)
    return coherent, incoherent, len(terms)


def _report(n, c, coherent, incoherent, count, probability) -> TransitionReport:
    m = sum(n)
    pre_in = multinomial(m, n)
    pre_out = multinomial(m, c)
    if incoherent > 0.0:
        factor = abs(coherent) ** 2 / incoherent
        ratio = pre_in * factor
    else:
        factor = ratio = None
    return TransitionReport(
        probability=probability,
        coherent_sum=coherent,
        incoherent_sum=incoherent,
        class_count=count,
        input_prefactor=pre_in,
        output_prefactor=pre_out,
        interference_factor=factor,
        ratio=ratio,
    )


def p_quantum(U, n: Sequence[int], c: Sequence[int]) -> TransitionReport:
    """Identical-boson transition probability ``P(c | n)``."""
    U, n, c = _check_pair(U, n, c)
    coherent, incoherent, count = _sums(U, n, c)
    m = sum(n)
    prob = multinomial(m, n) * multinomial(m, c) * abs(coherent) ** 2
    return _report(n, c, coherent, incoherent, count, prob)


def p_classical(U, n: Sequence[int], c: Sequence[int]) -> TransitionReport:
    """Distinguishable-particle probability: incoherent average of ``|a_J|^2``."""
    U, n, c = _check_pair(U, n, c)
    coherent, incoherent, count = _sums(U, n, c)
    prob = multinomial(sum(c), c) * incoherent
    return _report(n, c, coherent, incoherent, count, prob)


def _collision_free(comp: Composition) -> bool:
    return all(x <= 1 for x in comp)


def p_fermionic(U, n: Sequence[int], c: Sequence[int]) -> TransitionReport:
    """Identical-fermion probability; ``coherent_sum`` is the signed sum.

    Raises :class:`CollisionError` if any port of ``n`` or ``c`` holds more
    than one particle.
    """
    U, n, c = _check_pair(U, n, c)
    if not (_collision_free(n) and _collision_free(c)):
        raise CollisionError(f"Pauli exclusion: occupations must be 0 or 1, got n={n}, c={c}")
    coherent, incoherent, count = _sums(U, n, c, signed=True)
    m = sum(n)
    prob = multinomial(m, n) * multinomial(m, c) * abs(coherent) ** 2
    return _report(n, c, coherent, incoherent, count, prob)


def qc_ratio(U, n: Sequence[int], c: Sequence[int]) -> tuple[int, float, float]:
    """Split ``P / P_cl`` into ``(multinomial(m, n), interference factor, ratio)``.

    The interference factor ``|sum w a|^2 / sum w |a|^2`` lies in ``[0, 1]``.
    Raises :class:`UndefinedRatioError` when ``P_cl = 0``.
    """
    report = p_quantum(U, n, c)
    if report.ratio is None:
        raise UndefinedRatioError(f"classical probability of {tuple(c)} given {tuple(n)} is zero")
    return report.input_prefactor, report.interference_factor, report.ratio


_KERNELS = {
    Statistics.BOSON: p_quantum,
    Statistics.DISTINGUISHABLE: p_classical,
    Statistics.FERMION: p_fermionic,
}


@dataclass(frozen=True)
class OutputDistribution:
    """Probabilities of every output composition for one input.

    ``entries`` preserves colex order. Values are raw (possibly tiny
    negative from rounding); :meth:`clamped` is for reporting only.
    """

    kind: Statistics
    input: Composition
    entries: dict[Composition, float] = field(default_factory=dict)

    def total(self) -> float:
        return sum(self.entries.values())

    def clamped(self) -> dict[Composition, float]:
        return {c: (0.0 if CLAMP_FLOOR <= p < 0.0 else p) for c, p in self.entries.items()}

    def __getitem__(self, c) -> float:
        return self.entries[tuple(c)]

    def __iter__(self):
        return iter(self.entries.items())

    def __len__(self) -> int:
        return len(self.entries)


def output_distribution(U, n: Sequence[int], kind: Statistics | str = Statistics.BOSON) -> OutputDistribution:
    """Probability of every composition ``c`` of ``m`` given input ``n``.

    For fermions, outputs with a doubly occupied port get probability 0;
    the input itself must be collision free.
    """
    kind = Statistics(kind)
    U = as_matrix(U)
    n = as_composition(n, k=U.shape[0])
    if kind is Statistics.FERMION and not _collision_free(n):
        raise CollisionError(f"Pauli exclusion: input {n} has a multiply occupied port")
    kernel = _KERNELS[kind]
    entries = {}
    for c in enumerate_compositions(sum(n), len(n)):
        if kind is Statistics.FERMION and not _collision_free(c):
            entries[c] = 0.0
        else:
            entries[c] = kernel(U, n, c).probability
    return OutputDistribution(kind, n, entries)
