"""Moments, cumulants and the two-port Krawtchouk machinery.

Port indices are 0-based here. Factorial moments are returned for
``r = 1..r_max`` as lists whose element ``r - 1`` holds ``E[c^(r)]``.

Two-port helpers take ``(m, n, T)`` with ``n`` the number of photons in
port 1 and ``c`` the number detected in output port 1, matching
:func:`qmultinomial.optics.beam_splitter`. Where noted they accept
:class:`fractions.Fraction` arguments and then stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from qmultinomial.combinat import as_composition, enumerate_compositions, multinomial
from qmultinomial.optics import as_matrix
from qmultinomial.transition import OutputDistribution, Statistics, output_distribution

MAX_ORDER = 4


def falling(x: int, r: int) -> int:
    """Falling factorial ``x (x-1) ... (x-r+1)``."""
    out = 1
    for t in range(r):
        out *= x - t
    return out


# --------------------------------------------------------------------------
# Krawtchouk structure of the beam splitter
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class KrawtchoukContext:
    """Photon number ``m`` and transmittance ``T`` of a beam splitter."""

    m: int
    T: float

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if not 0 <= self.T <= 1:
            raise ValueError("T must lie in [0, 1]")

    @property
    def R(self):
        return 1 - self.T

    def h(self, n: int):
        """Squared norm ``binom(m, n) (T R)^n``."""
        return math.comb(self.m, n) * (self.T * self.R) ** n

    def classical(self, c: int):
        """``P_0(c) = binom(m, c) T^(m-c) R^c``, all photons entering port 2."""
        return math.comb(self.m, c) * self.T ** (self.m - c) * self.R**c


def _check_range(ctx: KrawtchoukContext, *values: int) -> None:
    for v in values:
        if not 0 <= v <= ctx.m:
            raise ValueError(f"index {v} outside 0..{ctx.m}")


def krawtchouk_g(ctx: KrawtchoukContext, n: int, c: int):
    """Coefficient of ``s^n`` in ``(1 + T s)^c (1 - R s)^(m - c)``.

    Computed by convolving the two binomial expansions; exact for
    rational ``T``.
    """
    _check_range(ctx, n, c)
    T, R, m = ctx.T, ctx.R, ctx.m
    total = 0
    for a in range(max(0, n - (m - c)), min(n, c) + 1):
        b = n - a
        total += math.comb(c, a) * T**a * math.comb(m - c, b) * (-R) ** b
    return total


def p_via_krawtchouk(ctx: KrawtchoukContext, n: int, c: int):
    """Two-port boson probability ``P_0(c) g_n(c)^2 / h_n``.

    Undefined (``ZeroDivisionError``) when ``T R = 0`` and ``n > 0``.
    """
    _check_range(ctx, n, c)
    return ctx.classical(c) * krawtchouk_g(ctx, n, c) ** 2 / ctx.h(n)


def krawtchouk_psi(ctx: KrawtchoukContext, n: int, c: int) -> float:
    """Orthonormal Krawtchouk function; its square is the boson probability."""
    return float(krawtchouk_g(ctx, n, c)) * math.sqrt(float(ctx.classical(c)) / float(ctx.h(n)))


def krawtchouk_inner(ctx: KrawtchoukContext, n: int, l: int):
    """``sum_c binom(m,c) R^c T^(m-c) g_n(c) g_l(c)``; equals ``h_n`` if ``n == l`` else 0."""
    return sum(
        ctx.classical(c) * krawtchouk_g(ctx, n, c) * krawtchouk_g(ctx, l, c) for c in range(ctx.m + 1)
    )


def pgf_value(ctx: KrawtchoukContext, n: int, s):
    """Probability generating function ``G_n(s) = sum_c P_n(c) s^c``.

    Extracts the ``u^n v^n`` coefficient of
    ``[T(1-Ru)(1-Rv) + sR(1+Tu)(1+Tv)]^m`` and divides by ``h_n``.
    Expanding the bracket as ``a + b u + b v + d u v`` the coefficient is a
    multinomial sum over the number ``q`` of ``uv`` factors drawn.
    """
    _check_range(ctx, n)
    T, R, m = ctx.T, ctx.R, ctx.m
    a = T + s * R
    b = T * R * (s - 1)
    d = T * R * R + s * R * T * T
    coef = 0
    for q in range(n + 1):
        single = n - q
        rest = m - 2 * single - q
        if rest < 0:
            continue
        count = multinomial(m, (rest, single, single, q))
        coef += count * a**rest * b ** (2 * single) * d**q
    return coef / ctx.h(n)


# --------------------------------------------------------------------------
# Closed-form factorial moments
# --------------------------------------------------------------------------


def factorial_moment_two_port(m: int, n: int, T, r: int, classical: bool = False):
    """``E[c^(r) | n]`` for the beam splitter.

    Sum over ``j`` of ``binom(r, j)^2 T^j R^(r-j) n^(j) (m-n)^(r-j)``;
    the classical variant uses ``binom(r, j)`` unsquared.
    """
    R = 1 - T
    total = 0
    for j in range(r + 1):
        coef = math.comb(r, j) if classical else math.comb(r, j) ** 2
        total += coef * T**j * R ** (r - j) * falling(n, j) * falling(m - n, r - j)
    return total


def factorial_moment_closed(U, n: Sequence[int], j: int, r: int, classical: bool = False) -> float:
    """``E[c_j^(r) | n]`` from the squared-multinomial sum over compositions of ``r``.

    Parameters
    ----------
    U : array_like
        ``k x k`` interferometer.
    n : sequence of int
        Input composition.
    j : int
        Output port (0-based).
    r : int
        Order, ``r >= 1``.
    classical : bool
        Use the plain multinomial coefficient (distinguishable particles).

    Returns
    -------
    float
        The factorial moment. Only ``|U_ij|^2`` enters.
    """
    U = as_matrix(U)
    k = U.shape[0]
    n = as_composition(n, k=k)
    if r < 1:
        raise ValueError("order r must be >= 1")
    if not 0 <= j < k:
        raise ValueError(f"port {j} outside 0..{k - 1}")
    p = np.abs(U[:, j]) ** 2
    total = 0.0
    for q in enumerate_compositions(r, k):
        weight = 1.0
        for i, qi in enumerate(q):
            if qi:
                ff = falling(n[i], qi)
                if ff == 0:
                    weight = 0.0
                    break
                weight *= float(p[i]) ** qi * ff
        if weight == 0.0:
            continue
        coef = multinomial(r, q)
        total += (coef if classical else coef * coef) * weight
    return total


def factorial_moments_closed(U, n, j: int, r_max: int = MAX_ORDER, classical: bool = False) -> list[float]:
    return [factorial_moment_closed(U, n, j, r, classical) for r in range(1, r_max + 1)]


def moments_bruteforce(dist: OutputDistribution, j: int, r_max: int = MAX_ORDER) -> list[float]:
    """Factorial moments of output port ``j`` by summing over the support."""
    out = [0.0] * r_max
    for c, prob in dist.entries.items():
        for r in range(1, r_max + 1):
            out[r - 1] += prob * falling(c[j], r)
    return out


def cross_moment(U, n: Sequence[int], j: int, l: int) -> tuple[float, float]:
    """``E[c_j c_l]`` for ``j != l``, as ``(quantum, classical)``.

    The quantum value adds the coherence terms
    ``U_ij conj(U_i'j) U_i'l conj(U_il) n_i n_i'`` (``i != i'``), which
    carry the phases of ``U`` and vanish for distinguishable particles.
    """
    U = as_matrix(U)
    k = U.shape[0]
    n = as_composition(n, k=k)
    if j == l:
        raise ValueError("cross moment needs two distinct ports")
    p = np.abs(U) ** 2
    classical = 0.0
    coherence = 0j
    for i in range(k):
        classical += p[i, j] * p[i, l] * falling(n[i], 2)
        for i2 in range(k):
            if i2 == i or not n[i] or not n[i2]:
                continue
            classical += p[i, j] * p[i2, l] * n[i] * n[i2]
            coherence += U[i, j] * np.conj(U[i2, j]) * U[i2, l] * np.conj(U[i, l]) * n[i] * n[i2]
    return float(classical + coherence.real), float(classical)


def covariance(U, n: Sequence[int], j: int, l: int) -> tuple[float, float]:
    """``Cov(c_j, c_l)`` as ``(quantum, classical)``; means are shared."""
    quantum, classical = cross_moment(U, n, j, l)
    mean_j = factorial_moment_closed(U, n, j, 1)
    mean_l = factorial_moment_closed(U, n, l, 1)
    return quantum - mean_j * mean_l, classical - mean_j * mean_l


# --------------------------------------------------------------------------
# Cumulants
# --------------------------------------------------------------------------


def cumulants_from_factorial(F: Sequence[float]) -> tuple[float, float, float, float]:
    """kappa_1..kappa_4 from factorial moments ``F[0..3]``.

    Raw moments come from Stirling numbers of the second kind, then the
    usual moment-to-cumulant identities.
    """
    f1, f2, f3, f4 = F[:4]
    m1 = f1
    m2 = f2 + f1
    m3 = f3 + 3 * f2 + f1
    m4 = f4 + 6 * f3 + 7 * f2 + f1
    k2 = m2 - m1**2
    k3 = m3 - 3 * m2 * m1 + 2 * m1**3
    k4 = m4 - 4 * m3 * m1 - 3 * m2**2 + 12 * m2 * m1**2 - 6 * m1**4
    return m1, k2, k3, k4


def cumulants(U, n: Sequence[int], j: int, kind: Statistics | str = Statistics.BOSON):
    """kappa_1..kappa_4 of ``c_j``.

    Bosons and distinguishable particles use the closed-form factorial
    moments; fermions have no closed form and go through the full output
    distribution.
    """
    kind = Statistics(kind)
    if kind is Statistics.FERMION:
        F = moments_bruteforce(output_distribution(U, n, kind), j)
    else:
        F = factorial_moments_closed(U, n, j, classical=kind is Statistics.DISTINGUISHABLE)
    return cumulants_from_factorial(F)


def variance_two_port(m: int, n: int, T) -> tuple:
    """``(TR[m + 2n(m-n)], mTR)``: quantum and classical variance of ``c``."""
    TR = T * (1 - T)
    return TR * (m + 2 * n * (m - n)), m * TR


def kappa3_two_port(m: int, n: int, T):
    """Third cumulant ``TR(R-T)(2n-m)``, the same for bosons and distinguishable particles."""
    R = 1 - T
    return T * R * (R - T) * (2 * n - m)


def kappa4_difference_two_port(m: int, n: int, T):
    """``kappa4_Q - kappa4_cl = 2TR n(m-n) [1 - 3 sigma TR]``, ``sigma = n(m-n) + m + 3``."""
    TR = T * (1 - T)
    sigma = n * (m - n) + m + 3
    return 2 * TR * n * (m - n) * (1 - 3 * sigma * TR)


def kappa4_negative_interval(m: int, n: int) -> tuple[float, float]:
    """Open interval of ``T`` on which the kappa_4 difference is negative."""
    sigma = n * (m - n) + m + 3
    half_width = 0.5 * math.sqrt(1 - 4 / (3 * sigma))
    return 0.5 - half_width, 0.5 + half_width


def fourier_kappa3_difference(k: int) -> float:
    """``5(k-1)(k-2)/k^2``: third-cumulant excess of a DFT with one photon per port."""
    return 5 * (k - 1) * (k - 2) / k**2


# --------------------------------------------------------------------------
# Report
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentReport:
    mode: int
    factorial_moments_quantum: tuple[float, ...]
    factorial_moments_classical: tuple[float, ...]
    mean: float
    variance_quantum: float
    variance_classical: float
    cumulants_quantum: tuple[float, float, float, float]
    cumulants_classical: tuple[float, float, float, float]

    @property
    def variance_ratio(self) -> float | None:
        if self.variance_classical == 0:
            return None
        return self.variance_quantum / self.variance_classical


def moment_report(U, n: Sequence[int], j: int) -> MomentReport:
    """Closed-form factorial moments and cumulants of port ``j``, both statistics."""
    fq = factorial_moments_closed(U, n, j)
    fc = factorial_moments_closed(U, n, j, classical=True)
    kq = cumulants_from_factorial(fq)
    kc = cumulants_from_factorial(fc)
    return MomentReport(
        mode=j,
        factorial_moments_quantum=tuple(fq),
        factorial_moments_classical=tuple(fc),
        mean=fq[0],
        variance_quantum=kq[1],
        variance_classical=kc[1],
        cumulants_quantum=kq,
        cumulants_classical=kc,
    )
