import numpy as np
import pytest
from hypothesis import given, strategies as st

from hofa.errors import EnumerationTooLarge, GroupMismatch, IncompleteSystem, InvalidOrder
from hofa.functions import GroupFunction, character, constant, gen_quadratic_phase, shift
from hofa.gowers import (
    CubeSystem,
    additivity_check,
    cube_average,
    gowers_norm,
    gowers_norm_bruteforce,
    gowers_power,
)
from hofa.groups import element_of, make_group

from conftest import naive_gowers_power, random_function, small_groups


@pytest.mark.parametrize("factors,k", [([5], 1), ([5], 2), ([6], 2), ([2, 3], 2), ([4], 3), ([2, 2], 3)])
def test_both_routes_match_naive_oracle(factors, k):
    g = make_group(factors)
    f = random_function(g, 3)
    expected = naive_gowers_power(list(f.values), factors, k)
    assert abs(expected.imag) < 1e-10
    root = max(expected.real, 0) ** (1 / 2**k)
    assert gowers_norm(f, k) == pytest.approx(root, abs=1e-10)
    assert gowers_norm_bruteforce(f, k) == pytest.approx(root, abs=1e-10)


def test_examples():
    z7 = make_group([7])
    for k in (1, 2, 3):
        assert gowers_norm(constant(z7, 0.5 - 1j), k) == pytest.approx(abs(0.5 - 1j))
        assert gowers_norm_bruteforce(constant(z7), k) == pytest.approx(1)
        assert gowers_norm_bruteforce(constant(z7, 0), k) == 0
    assert gowers_norm(character(z7, 3), 2) == pytest.approx(1)
    q = gen_quadratic_phase(make_group([5]), 1)
    for route in (gowers_norm, gowers_norm_bruteforce):
        assert route(q, 2) == pytest.approx(5**-0.25, abs=1e-10)
        assert route(q, 3) == pytest.approx(1, abs=1e-10)


def test_z8_k3_routes_agree():
    f = random_function(make_group([8]), 8, unimodular=True)
    assert gowers_norm(f, 3) == pytest.approx(gowers_norm_bruteforce(f, 3), abs=1e-10)


def test_errors():
    f = constant(make_group([5]))
    with pytest.raises(InvalidOrder):
        gowers_norm(f, 0)
    with pytest.raises(InvalidOrder):
        gowers_norm_bruteforce(f, 0)
    with pytest.raises(EnumerationTooLarge):
        gowers_norm_bruteforce(constant(make_group([64])), 3, cap=10**6)


def test_cube_average_examples():
    z7 = make_group([7])
    assert cube_average(CubeSystem.uniform(character(z7, 1), 2)) == pytest.approx(1)
    f = random_function(make_group([6]), 4)
    for d in (1, 2, 3):
        assert cube_average(CubeSystem.uniform(f, d)) == pytest.approx(
            gowers_norm_bruteforce(f, d) ** 2**d, rel=1e-10
        )
    cs = CubeSystem.uniform(f, 2)
    cs.assignment[frozenset({1})] = constant(f.group, 0)
    assert cube_average(cs) == 0
    with pytest.raises(IncompleteSystem):
        cube_average(CubeSystem(2, {frozenset(): f}))
    cs = CubeSystem.uniform(f, 1)
    cs.assignment[frozenset()] = constant(make_group([2, 3]))
    with pytest.raises(GroupMismatch):
        cube_average(cs)


def test_cube_average_mixed_oracle():
    # d = 1: E_{x,t} f_0(x) conj f_1(x+t) = E f_0 * conj(E f_1)
    g = make_group([5])
    a, b = random_function(g, 1), random_function(g, 2)
    val = cube_average(CubeSystem(1, {frozenset(): a, frozenset({1}): b}))
    assert val == pytest.approx(a.values.mean() * np.conj(b.values.mean()))


def test_additivity_examples():
    z7 = make_group([7])
    single = additivity_check([0.7 * gen_quadratic_phase(z7, 2)], 3)
    assert single.gap == 0
    lin = additivity_check([0.8 * character(z7, 1), 0.6 * character(z7, 3)], 2)
    assert lin.gap < 1e-10
    assert lin.rhs == pytest.approx(0.8**4 + 0.6**4)
    with pytest.raises(GroupMismatch):
        additivity_check([constant(z7), constant(make_group([5]))], 2)


@given(small_groups(max_order=32), st.integers(0, 10**6), st.integers(1, 3))
def test_routes_agree(g, seed, k):
    if g.order ** (k + 1) > 2 * 10**6:
        k = 2
    f = random_function(g, seed)
    assert gowers_norm(f, k) == pytest.approx(gowers_norm_bruteforce(f, k), abs=1e-10 * max(1, gowers_norm(f, k)))


@given(small_groups(), st.integers(0, 10**6), st.data())
def test_shift_and_modulation_invariance(g, seed, data):
    f = random_function(g, seed, unimodular=True)
    i = data.draw(st.integers(0, g.order - 1))
    a = element_of(g, i)
    chi = character(g, element_of(g, data.draw(st.integers(0, g.order - 1))))
    for k in (2, 3):
        u = gowers_norm(f, k)
        assert gowers_norm(shift(f, a), k) == pytest.approx(u, abs=1e-12)
        assert gowers_norm(f * chi, k) == pytest.approx(u, abs=1e-10)


@given(small_groups(max_order=40), st.integers(0, 10**6))
def test_monotone_in_k(g, seed):
    f = random_function(g, seed)
    f = f / np.max(np.abs(f.values))
    norms = [gowers_norm(f, k) for k in (1, 2, 3)]
    assert norms[0] <= norms[1] + 1e-12 <= norms[2] + 2e-12


def test_power_is_real_nonnegative():
    f = random_function(make_group([9]), 0)
    assert gowers_power(f, 2) >= 0
    assert isinstance(gowers_power(f, 2), float)


def test_monotone_on_hundred_inputs():
    rng = np.random.default_rng(100)
    for _ in range(100):
        n = int(rng.integers(3, 20))
        g = make_group([n])
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        f = GroupFunction(g, v / np.max(np.abs(v)))
        u1, u2, u3 = (gowers_norm(f, k) for k in (1, 2, 3))
        assert u1 <= u2 + 1e-12 and u2 <= u3 + 1e-12


def test_bruteforce_without_table_and_with_small_chunks(monkeypatch):
    from hofa import config

    g = make_group([3, 4])
    f = random_function(g, 21)
    expected = [gowers_norm_bruteforce(f, k) for k in (1, 2, 3)]
    monkeypatch.setattr(config, "TABLE_CAP", 1)
    monkeypatch.setattr(config, "CHUNK", 50)
    assert [gowers_norm_bruteforce(f, k) for k in (1, 2, 3)] == pytest.approx(expected, abs=1e-12)
    assert cube_average(CubeSystem.uniform(f, 2)) == pytest.approx(expected[1] ** 4, abs=1e-12)
