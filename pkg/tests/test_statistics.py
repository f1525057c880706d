import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmultinomial.combinat import enumerate_compositions
from qmultinomial.optics import beam_splitter, fourier, random_unitary
from qmultinomial.statistics import (
    KrawtchoukContext,
    covariance,
    cross_moment,
    cumulants,
    cumulants_from_factorial,
    factorial_moment_closed,
    factorial_moment_two_port,
    factorial_moments_closed,
    fourier_kappa3_difference,
    kappa3_two_port,
    kappa4_difference_two_port,
    kappa4_negative_interval,
    krawtchouk_g,
    krawtchouk_inner,
    krawtchouk_psi,
    moment_report,
    moments_bruteforce,
    p_via_krawtchouk,
    pgf_value,
    variance_two_port,
)
from qmultinomial.transition import OutputDistribution, Statistics, output_distribution, p_quantum

T_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)


def two_port_dist(m, n, T, kind="boson"):
    return output_distribution(beam_splitter(T), (n, m - n), kind)


def variance_of(dist, j):
    F = moments_bruteforce(dist, j, 2)
    return F[1] + F[0] - F[0] ** 2


class TestKrawtchouk:
    def test_constant_term(self):
        ctx = KrawtchoukContext(5, 0.3)
        assert all(krawtchouk_g(ctx, 0, c) == 1 for c in range(6))

    @pytest.mark.parametrize("m", [1, 4, 7])
    def test_first_order_balanced(self, m):
        ctx = KrawtchoukContext(m, Fraction(1, 2))
        for c in range(m + 1):
            assert krawtchouk_g(ctx, 1, c) == Fraction(2 * c - m, 2)

    @pytest.mark.parametrize("T", T_GRID)
    def test_orthogonality(self, T):
        for m in range(0, 11):
            ctx = KrawtchoukContext(m, T)
            for n in range(m + 1):
                for l in range(m + 1):
                    expected = ctx.h(n) if n == l else 0.0
                    assert abs(krawtchouk_inner(ctx, n, l) - expected) < 1e-12

    def test_orthogonality_exact(self):
        ctx = KrawtchoukContext(6, Fraction(3, 10))
        for n in range(7):
            for l in range(7):
                assert krawtchouk_inner(ctx, n, l) == (ctx.h(n) if n == l else 0)

    @pytest.mark.parametrize(
        "m, n, c, T, expected",
        [(3, 1, 2, Fraction(1, 3), 0), (3, 1, 1, Fraction(1, 2), Fraction(1, 8)), (6, 3, 1, Fraction(1, 2), 0)],
    )
    def test_probability_examples(self, m, n, c, T, expected):
        assert p_via_krawtchouk(KrawtchoukContext(m, T), n, c) == expected

    @pytest.mark.parametrize("T", T_GRID)
    def test_matches_routing_sum(self, T):
        U = beam_splitter(T)
        for m in range(1, 9):
            ctx = KrawtchoukContext(m, T)
            for n in range(m + 1):
                for c in range(m + 1):
                    direct = p_quantum(U, (n, m - n), (c, m - c)).probability
                    assert abs(p_via_krawtchouk(ctx, n, c) - direct) < 1e-12
                    assert abs(krawtchouk_psi(ctx, n, c) ** 2 - direct) < 1e-12

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            krawtchouk_g(KrawtchoukContext(3, 0.5), 4, 0)
        with pytest.raises(ValueError):
            KrawtchoukContext(3, 1.2)


class TestPGF:
    @pytest.mark.parametrize("T", T_GRID)
    @pytest.mark.parametrize("s", [0.0, 0.5, 1.0, 2.0])
    def test_matches_distribution(self, T, s):
        for m in range(1, 8):
            ctx = KrawtchoukContext(m, T)
            for n in range(m + 1):
                direct = sum(p_via_krawtchouk(ctx, n, c) * s**c for c in range(m + 1))
                assert abs(pgf_value(ctx, n, s) - direct) < 1e-10

    def test_normalization(self):
        for m in range(0, 9):
            for T in T_GRID:
                ctx = KrawtchoukContext(m, T)
                for n in range(m + 1):
                    assert abs(pgf_value(ctx, n, 1.0) - 1) < 1e-12

    def test_at_zero(self):
        ctx = KrawtchoukContext(4, 0.35)
        for n in range(5):
            assert abs(pgf_value(ctx, n, 0.0) - p_via_krawtchouk(ctx, n, 0)) < 1e-14

    def test_worked_value(self):
        # 3/8 + 2*(1/8) + 4*(1/8) + 8*(3/8)
        assert pgf_value(KrawtchoukContext(3, Fraction(1, 2)), 1, 2) == Fraction(33, 8)


class TestFactorialMoments:
    def test_point_mass(self):
        dist = OutputDistribution("boson", (3, 0), {(3, 0): 1.0, (2, 1): 0.0})
        assert moments_bruteforce(dist, 0, 2) == [3.0, 6.0]

    def test_binomial(self):
        F = moments_bruteforce(output_distribution(beam_splitter(0.5), (3, 0)), 0, 2)
        assert abs(F[0] - 1.5) < 1e-12 and abs(F[1] - 1.5) < 1e-12

    @given(st.integers(2, 4), st.integers(1, 5), st.integers(0, 10**6), st.data())
    @settings(max_examples=40, deadline=None)
    def test_means_coincide(self, k, m, seed, data):
        U = random_unitary(k, seed)
        n = data.draw(st.sampled_from(enumerate_compositions(m, k)))
        j = data.draw(st.integers(0, k - 1))
        q = factorial_moment_closed(U, n, j, 1)
        cl = factorial_moment_closed(U, n, j, 1, classical=True)
        expected = sum(abs(U[i, j]) ** 2 * n[i] for i in range(k))
        assert abs(q - expected) < 1e-12 and abs(cl - expected) < 1e-12

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_closed_matches_bruteforce(self, grid, k):
        for (kk, seed, m, n), (U, dq, dc) in grid.items():
            if kk != k:
                continue
            for j in range(k):
                for closed, brute in (
                    (factorial_moments_closed(U, n, j), moments_bruteforce(dq, j)),
                    (factorial_moments_closed(U, n, j, classical=True), moments_bruteforce(dc, j)),
                ):
                    for a, b in zip(closed, brute):
                        assert abs(a - b) <= 1e-10 * max(abs(a), abs(b), 1e-300), (seed, n, j)

    @pytest.mark.parametrize("T", T_GRID)
    def test_two_port_special_case(self, T):
        U = beam_splitter(T)
        for m in range(1, 7):
            for n in range(m + 1):
                for r in range(1, 5):
                    for classical in (False, True):
                        a = factorial_moment_two_port(m, n, T, r, classical)
                        b = factorial_moment_closed(U, (n, m - n), 0, r, classical)
                        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    @pytest.mark.parametrize("T", T_GRID)
    def test_second_order_excess(self, T):
        for m in range(1, 9):
            for n in range(m + 1):
                diff = factorial_moment_two_port(m, n, T, 2) - factorial_moment_two_port(m, n, T, 2, True)
                assert abs(diff - 2 * T * (1 - T) * n * (m - n)) < 1e-12

    @pytest.mark.parametrize("T", T_GRID)
    def test_variance_formula(self, T):
        for m in range(1, 9):
            for n in range(m + 1):
                vq, vc = variance_two_port(m, n, T)
                assert abs(vq - T * (1 - T) * (m + 2 * n * (m - n))) < 1e-12
                assert abs(variance_of(two_port_dist(m, n, T), 0) - vq) < 1e-10
                assert abs(variance_of(two_port_dist(m, n, T, "distinguishable"), 0) - vc) < 1e-10

    def test_hom_variance(self):
        rep = moment_report(beam_splitter(0.5), (1, 1), 0)
        assert abs(rep.variance_quantum - 1) < 1e-12
        assert abs(rep.variance_classical - 0.5) < 1e-12

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_fourier_variance_ratio(self, k):
        for j in range(k):
            rep = moment_report(fourier(k), (1,) * k, j)
            assert abs(rep.variance_ratio - 2) < 1e-12

    def test_report_invariants(self):
        rep = moment_report(random_unitary(3, 7), (2, 0, 1), 1)
        assert rep.cumulants_quantum[0] == rep.mean == rep.factorial_moments_quantum[0]
        assert abs(rep.factorial_moments_classical[0] - rep.mean) < 1e-15

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            factorial_moment_closed(fourier(3), (1, 1, 1), 0, 0)


class TestCrossMoments:
    def test_hom(self):
        assert covariance(beam_splitter(0.5), (1, 1), 0, 1) == pytest.approx((-1, -0.5), abs=1e-12)

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_fourier(self, k):
        q, cl = covariance(fourier(k), (1,) * k, 0, k - 1)
        assert abs(q + 2 / k) < 1e-12 and abs(cl + 1 / k) < 1e-12

    def test_identity(self):
        assert covariance(np.eye(2), (1, 1), 0, 1) == (0.0, 0.0)

    def test_rejects_same_port(self):
        with pytest.raises(ValueError):
            cross_moment(fourier(3), (1, 1, 1), 1, 1)

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_bruteforce(self, grid, seed):
        for m in (2, 3, 4):
            for n in enumerate_compositions(m, 3):
                U, dq, dc = grid[3, seed, m, n]
                for j, l in ((0, 1), (0, 2), (1, 2)):
                    q, cl = cross_moment(U, n, j, l)
                    assert abs(q - sum(p * c[j] * c[l] for c, p in dq)) < 1e-12
                    assert abs(cl - sum(p * c[j] * c[l] for c, p in dc)) < 1e-12


class TestCumulants:
    def test_conversion_poisson(self):
        # Poisson(lam) has F_r = lam^r and every cumulant equal to lam
        lam = 1.7
        assert cumulants_from_factorial([lam, lam**2, lam**3, lam**4]) == pytest.approx((lam,) * 4, rel=1e-12)

    def test_conversion_point_mass(self):
        # c = 3 surely: F = 3, 6, 6, 0
        assert cumulants_from_factorial([3, 6, 6, 0]) == (3, 0, 0, 0)

    @pytest.mark.parametrize("T", T_GRID)
    def test_kappa3_invariant(self, T):
        U = beam_splitter(T)
        for m in range(1, 9):
            for n in range(m + 1):
                kq = cumulants(U, (n, m - n), 0)[2]
                kc = cumulants(U, (n, m - n), 0, Statistics.DISTINGUISHABLE)[2]
                assert abs(kq - kc) < 1e-10
                assert abs(kq - kappa3_two_port(m, n, T)) < 1e-10

    @pytest.mark.parametrize("T", T_GRID + (0.03, 0.97))
    def test_kappa4_difference(self, T):
        for m in range(1, 8):
            for n in range(m + 1):
                bq = cumulants_from_factorial(moments_bruteforce(two_port_dist(m, n, T), 0))[3]
                bc = cumulants_from_factorial(moments_bruteforce(two_port_dist(m, n, T, "distinguishable"), 0))[3]
                assert abs((bq - bc) - kappa4_difference_two_port(m, n, T)) < 1e-10

    def test_kappa4_worked_values(self):
        assert kappa4_difference_two_port(2, 1, Fraction(1, 2)) == Fraction(-7, 4)
        assert kappa4_difference_two_port(3, 1, Fraction(1, 2)) == -5

    def test_kappa4_sign(self):
        lo, hi = kappa4_negative_interval(2, 1)
        assert 0.058 < lo < 0.06 and 0.94 < hi < 0.942
        assert kappa4_difference_two_port(2, 1, 0.5) < 0
        assert kappa4_difference_two_port(2, 1, 0.03) > 0
        assert kappa4_difference_two_port(2, 1, 0.97) > 0
        for T in np.linspace(0.005, 0.995, 199):
            inside = lo < T < hi
            assert (kappa4_difference_two_port(2, 1, T) < 0) == inside

    @pytest.mark.parametrize("k, expected", [(3, 10 / 9), (4, 15 / 8)])
    def test_fourier_kappa3(self, k, expected):
        n = (1,) * k
        dq = output_distribution(fourier(k), n, Statistics.BOSON)
        dc = output_distribution(fourier(k), n, Statistics.DISTINGUISHABLE)
        diff = cumulants_from_factorial(moments_bruteforce(dq, 0))[2] - cumulants_from_factorial(moments_bruteforce(dc, 0))[2]
        assert abs(diff - expected) < 1e-10
        assert abs(fourier_kappa3_difference(k) - expected) < 1e-15

    def test_fourier_kappa3_positive(self):
        assert fourier_kappa3_difference(2) == 0
        assert all(fourier_kappa3_difference(k) > 0 for k in range(3, 12))

    def test_fermion_cumulants(self):
        # two fermions on a balanced splitter always leave one per port
        k1, k2, k3, k4 = cumulants(beam_splitter(0.5), (1, 1), 0, "fermion")
        assert abs(k1 - 1) < 1e-12
        assert abs(k2) < 1e-12 and abs(k3) < 1e-12 and abs(k4) < 1e-12

    def test_fermion_variance_below_classical(self):
        U = fourier(3)
        vf = cumulants(U, (1, 1, 1), 0, "fermion")[1]
        vc = cumulants(U, (1, 1, 1), 0, "distinguishable")[1]
        vq = cumulants(U, (1, 1, 1), 0, "boson")[1]
        assert vf < vc < vq
        assert math.isclose(vq, 4 / 3, rel_tol=1e-12)
