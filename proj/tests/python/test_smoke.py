import cmath
import math

import pytest

ts = pytest.importorskip("tracesum")


def test_kloosterman_matches_direct_sum():
    q = 11
    direct = sum(cmath.exp(2j * math.pi * (3 * x + pow(x, -1, q)) / q) for x in range(1, q)) / math.sqrt(q)
    assert abs(ts.kloosterman(3, q) - direct) < 1e-12


def test_dft_is_unitary():
    K = ts.build_trace("kl2", 31)
    assert len(K) == 31
    assert abs(K.norm2_squared() - K.fourier().norm2_squared()) < 1e-9


def test_trace_errors_map_to_python():
    with pytest.raises(ts.InputError):
        ts.build_trace("kl2", 8)
    with pytest.raises(ts.InputError):
        ts.mod_inverse(4, 8)


def test_tau_values():
    H = ts.HeckeSystem(100)
    assert H.tau(1) == 1
    assert H.tau(2) == -24
    assert H.tau(11) == 534612


def test_poisson_and_corollary():
    K = ts.build_trace("legendre", 101)
    V = ts.SmoothWindow(2.0)
    lhs, rhs, defect = ts.poisson_check(K, V, 1000.0)
    assert defect < 1e-6
    H = ts.HeckeSystem(5000)
    c = ts.corollary_sums(K, H, V, 2000.0)
    assert c["c15_defect"] < 1e-8 and c["c16_defect"] < 1e-8


def test_amplifier_decomposition():
    q = 211
    K = ts.build_trace("kl2", q)
    H = ts.HeckeSystem(7000)
    V = ts.SmoothWindow(2.0)
    X = q**1.5
    M = ts.prime_pair_measure(3, 2, q)
    assert M.p_set == [5] and M.l_set == [3]
    d = ts.decompose_fo(K, H, V, X, M, q * q * 2 / (X * 3))
    assert d["defect"] <= 1e-6 * (abs(d["S"]) + 1)


def test_bilinear_bound():
    q = 13
    K = ts.build_trace("kl2", q)
    alpha = [complex(i % 3 - 1, 0) for i in range(q)]
    beta = [complex(1, i % 2) for i in range(q)]
    direct, spectral, defect = ts.bilinear_form(alpha, beta, K)
    assert defect < 1e-8
    assert ts.bound_ratio(alpha, beta, K) <= 1 + 1e-8
