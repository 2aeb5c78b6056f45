import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hofa.errors import (
    CapExceeded,
    DecompositionMismatch,
    InvalidPartition,
    InvalidSamples,
    UnsupportedOrder,
)
from hofa.functions import GroupFunction, character, constant, delta_multi, gen_quadratic_phase, psi_eval
from hofa.groups import element_of, index_of, make_group
from hofa.regularity import (
    Partition,
    character_test,
    complexity_check_c1,
    fourier_split,
    furreg_pipeline,
)

from conftest import random_function


def naive_residual(f, P, k):
    """Group Delta f over all (x, t) by corner-cell signature; L2 distance to the group means."""
    g = f.group
    d = k + 1
    groups = {}
    for idx in itertools.product(range(g.order), repeat=d + 1):
        x, ts = element_of(g, idx[0]), [element_of(g, i) for i in idx[1:]]
        sig = tuple(
            int(P.cell_of[index_of(g, psi_eval(g, x, ts, set(S)))])
            for r in range(d + 1)
            for S in itertools.combinations(range(1, d + 1), r)
        )
        groups.setdefault(sig, []).append(delta_multi(f, ts)(x))
    sq = sum(np.sum(np.abs(np.array(v) - np.mean(v)) ** 2) for v in groups.values())
    return np.sqrt(sq / g.order ** (d + 1))


def test_partition_basics():
    g = make_group([6])
    P = Partition.by_residue(g, 3)
    assert P.n_cells == 3
    assert list(P.indicator(1).values.real) == [0, 1, 0, 0, 1, 0]
    assert Partition.singletons(g).refines(P) and P.refines(Partition.one_cell(g))
    assert not Partition.one_cell(g).refines(P)
    assert Partition.from_dict(P.to_dict()).cell_of.tolist() == P.cell_of.tolist()
    with pytest.raises(InvalidPartition):
        Partition(g, np.array([0, 0, 2, 2, 0, 0]))


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("modulus", [1, 2, 3])
def test_character_test_matches_naive(k, modulus):
    g = make_group([6])
    f = random_function(g, 2, unimodular=True)
    P = Partition.by_residue(g, modulus)
    rep = character_test(f, P, k, 0.1)
    assert rep.mode == "exhaustive"
    assert rep.residual_estimate == pytest.approx(naive_residual(f, P, k), abs=1e-12)


def test_character_test_examples():
    z5 = make_group([5])
    q = gen_quadratic_phase(z5, 1)
    one = Partition.one_cell(z5)
    rep = character_test(q, one, 1, 0.5)
    assert rep.residual_estimate**2 == pytest.approx(1 - 1 / 25, abs=1e-9)
    assert not rep.passed
    assert character_test(character(z5, 3), one, 1, 0.1).residual_estimate < 1e-12
    f = random_function(z5, 0, unimodular=True)
    assert character_test(f, Partition.singletons(z5), 1, 0.1).residual_estimate == 0
    assert character_test(f, Partition.singletons(z5), 2, 0.1).residual_estimate == 0


def test_character_test_errors():
    z5 = make_group([5])
    one = Partition.one_cell(z5)
    with pytest.raises(InvalidSamples):
        character_test(constant(z5), one, 1, 0.1, samples=0)
    with pytest.raises(CapExceeded):
        character_test(constant(z5), one, 3, 0.1, cap=100, exhaustive=True)


def test_sampled_agrees_with_exhaustive():
    z5 = make_group([5])
    q = gen_quadratic_phase(z5, 1)
    one = Partition.one_cell(z5)
    exact = character_test(q, one, 1, 0.5).residual_estimate
    est = character_test(q, one, 1, 0.5, samples=10**5, seed=1, exhaustive=False)
    assert est.mode == "sampled" and est.samples == 10**5
    assert abs(est.residual_estimate - exact) <= 3 * est.std_error + 1e-12
    again = character_test(q, one, 1, 0.5, samples=10**5, seed=1, exhaustive=False)
    assert again.residual_estimate == est.residual_estimate


def test_refinement_monotone_z12():
    g = make_group([12])
    f = random_function(g, 5, unimodular=True)
    chain = [Partition.by_residue(g, m) for m in (1, 2, 4, 12)]
    res = [character_test(f, P, 1, 0.1).residual_estimate for P in chain]
    assert all(b <= a + 1e-9 for a, b in zip(res, res[1:]))
    assert res[-1] == 0


def test_complexity_examples():
    z5 = make_group([5])
    chi = character(z5, 2)
    zero = constant(z5, 0)
    one = Partition.one_cell(z5)
    rep = complexity_check_c1(chi, zero, [chi], [one], [2, 2], [0.1, 0.1], 1)
    assert rep.passed

    z7 = make_group([7])
    q = gen_quadratic_phase(z7, 1)
    h = 0.05 * character(z7, 3)
    f = q + h
    rep = complexity_check_c1(f, h, [q], [Partition.singletons(z7)], [7] * 4, [0.1] * 4, 2)
    char = [c for c in rep.clauses if c.name.startswith("character")]
    assert char[0].value == 0 and char[0].passed
    assert rep.passed == all(c.passed for c in rep.clauses) and rep.children

    too_many = complexity_check_c1(f, h, [q * 0.5, q * 0.5], [Partition.one_cell(z7)], [1, 1, 1, 1], [0.1] * 4, 2)
    assert "count" in too_many.failed_clauses()


def test_complexity_errors():
    z5 = make_group([5])
    chi = character(z5, 1)
    with pytest.raises(DecompositionMismatch):
        complexity_check_c1(chi, constant(z5, 0), [], [], [1, 1], [0.1, 0.1], 1)
    with pytest.raises(UnsupportedOrder):
        complexity_check_c1(chi, constant(z5, 0), [chi], [], [1] * 6, [0.1] * 6, 3)


@given(st.integers(0, 10**6), st.floats(0.01, 0.5), st.floats(1.0, 3.0))
def test_complexity_monotone_in_eps(seed, base, factor):
    z5 = make_group([5])
    f = random_function(z5, seed, unimodular=True)
    comps, rest = fourier_split(f, 2)
    P = [Partition.by_residue(z5, 5)]
    small = complexity_check_c1(f, rest, comps, P, [5] * 4, [base] * 4, 2, samples=2000)
    for j in range(4):
        eps = [base] * 4
        eps[j] *= factor
        big = complexity_check_c1(f, rest, comps, P, [5] * 4, eps, 2, samples=2000)
        if small.passed:
            assert big.passed


def test_fourier_split_sums_back():
    f = random_function(make_group([9]), 1)
    comps, rest = fourier_split(f, 3)
    assert len(comps) == 3
    assert np.allclose(sum(c.values for c in comps) + rest.values, f.values)
    comps, _ = fourier_split(constant(make_group([9])), 5)
    assert len(comps) == 1


def test_pipeline_examples():
    z7 = make_group([7])
    chi = character(z7, 4)
    rep = furreg_pipeline(chi, 1)
    assert rep.residual_uk <= 1e-8
    assert np.allclose(rep.decomposition.structured().values, chi.values)
    assert rep.complexity.passed

    z101 = make_group([101])
    rng = np.random.default_rng(0)
    noise = GroupFunction(z101, np.exp(2j * np.pi * rng.random(101)))
    f = 0.9 * gen_quadratic_phase(z101, 1) + 0.1 * noise
    f = f / np.max(np.abs(f.values))
    rep = furreg_pipeline(f, 2, samples=20000)
    assert rep.residual_uk <= 0.5
    assert len(rep.decomposition.components) == 1
    assert rep.to_dict()["certified"] in (True, False)

    with pytest.raises(UnsupportedOrder):
        furreg_pipeline(chi, 3)
