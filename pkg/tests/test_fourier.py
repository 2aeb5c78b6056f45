import numpy as np
import pytest
from hypothesis import given, strategies as st

from hofa.fourier import FourierSpectrum, dft, idft, project, truncate, u2_from_spectrum
from hofa.functions import GroupFunction, character, constant, gen_quadratic_phase, inner, lp_norm, shift
from hofa.gowers import gowers_norm_bruteforce
from hofa.groups import element_of, make_group

from conftest import naive_dft, random_function, small_groups


@pytest.mark.parametrize("factors", [[5], [2, 3], [4, 2], [2, 2, 3], [8]])
@pytest.mark.parametrize("fast", [False, True])
def test_dft_matches_naive_sum(factors, fast):
    g = make_group(factors)
    f = random_function(g, 11)
    assert np.allclose(dft(f, fast=fast).coeffs, naive_dft(f.values, factors), atol=1e-13)


def test_dft_examples():
    g = make_group([3, 4])
    m = (2, 1)
    s = dft(character(g, m))
    expected = np.zeros(g.order)
    expected[2 * 4 + 1] = 1  # mixed-radix index of (2, 1)
    assert np.allclose(s.coeffs, expected, atol=1e-14)
    s = dft(constant(g, 2 - 1j))
    assert s.coeffs[0] == pytest.approx(2 - 1j)
    assert np.allclose(s.coeffs[1:], 0, atol=1e-14)
    # Gauss sum over Z_5: every coefficient of e(x^2/5) has modulus 5^(-1/2)
    s = dft(gen_quadratic_phase(make_group([5]), 1))
    assert np.allclose(np.abs(s.coeffs), 5**-0.5, atol=1e-14)


def test_idft_examples():
    g = make_group([6])
    e0 = np.zeros(6)
    e0[0] = 1
    assert idft(FourierSpectrum(g, e0)).allclose(constant(g), atol=1e-15)
    assert idft(FourierSpectrum(g, np.zeros(6))).allclose(constant(g, 0), atol=0)


def test_truncate_examples():
    g = make_group([5])
    f = 0.8 * character(g, 1) + 0.3 * character(g, 2)
    s = dft(f)
    assert np.array_equal(truncate(s, 0).coeffs, s.coeffs)
    assert not truncate(s, 0.81).coeffs.any()
    kept = truncate(s, 0.5)
    assert list(kept.support()) == [1]
    assert kept.coeffs[1] == pytest.approx(0.8)
    # ties are kept
    tie = FourierSpectrum(g, [0.5, 0.25, 0, 0, 0])
    assert list(truncate(tie, 0.5).support()) == [0]


def test_u2_from_spectrum_examples():
    g = make_group([4])
    assert u2_from_spectrum(FourierSpectrum(g, [1, 0, 0, 0])) == pytest.approx(1)
    assert u2_from_spectrum(FourierSpectrum(g, [1, 1, 0, 0])) == pytest.approx(2**0.25)
    f = gen_quadratic_phase(make_group([5]), 1)
    assert u2_from_spectrum(dft(f)) == pytest.approx(5**-0.25, abs=1e-14)
    assert gowers_norm_bruteforce(f, 2) == pytest.approx(5**-0.25, abs=1e-12)


def test_spectrum_serialization():
    g = make_group([2, 3])
    s = dft(random_function(g, 2))
    d = s.to_dict()
    assert d["kind"] == "spectrum"
    assert np.array_equal(FourierSpectrum.from_dict(d).coeffs, s.coeffs)


@given(small_groups(), st.integers(0, 10**6))
def test_round_trip_and_parseval(g, seed):
    f = random_function(g, seed)
    s = dft(f)
    assert idft(s).allclose(f, atol=1e-10)
    assert np.sum(np.abs(s.coeffs) ** 2) == pytest.approx(lp_norm(f) ** 2, rel=1e-10)


@given(small_groups(), st.integers(0, 10**6))
def test_plancherel(g, seed):
    f, h = random_function(g, seed), random_function(g, seed + 7)
    lhs = inner(f, h)
    rhs = np.sum(dft(f).coeffs * dft(h).coeffs.conj())
    assert abs(lhs - rhs) < 1e-10


@given(small_groups(), st.integers(0, 10**6), st.floats(0, 1.5))
def test_truncate_idempotent(g, seed, eps):
    s = dft(random_function(g, seed))
    once = truncate(s, eps)
    assert np.array_equal(truncate(once, eps).coeffs, once.coeffs)


@given(small_groups(), st.integers(0, 10**6), st.floats(0.05, 0.8), st.data())
def test_projection_commutes_with_shift(g, seed, eps, data):
    f = random_function(g, seed, unimodular=True)
    a = element_of(g, data.draw(st.integers(0, g.order - 1)))
    assert project(shift(f, a), eps).allclose(shift(project(f, eps), a), atol=1e-10)


@given(small_groups(max_order=24), st.integers(0, 10**6))
def test_u2_sandwich(g, seed):
    f = random_function(g, seed)
    f = f / max(lp_norm(f), 1.0)
    lam = np.max(np.abs(dft(f).coeffs))
    u2 = u2_from_spectrum(dft(f))
    assert lam - 1e-12 <= u2 <= lam**0.5 + 1e-12
