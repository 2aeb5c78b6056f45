import cmath
import itertools

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from hofa.functions import GroupFunction
from hofa.groups import make_group

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def e(x):
    return cmath.exp(2j * cmath.pi * x)


def naive_elements(factors):
    return list(itertools.product(*(range(n) for n in factors)))


def naive_gowers_power(values, factors, k):
    """Pure-Python average of Delta_{t_1..t_k} f(x) using tuple arithmetic."""
    elems = naive_elements(factors)
    index = {x: i for i, x in enumerate(elems)}

    def plus(a, b):
        return tuple((u + v) % n for u, v, n in zip(a, b, factors))

    total = 0j
    for x in elems:
        for ts in itertools.product(elems, repeat=k):
            prod = 1 + 0j
            for r in range(k + 1):
                for S in itertools.combinations(range(k), r):
                    y = x
                    for i in S:
                        y = plus(y, ts[i])
                    v = values[index[y]]
                    prod *= v.conjugate() if (k - r) % 2 else v
            total += prod
    return total / len(elems) ** (k + 1)


def naive_dft(values, factors):
    elems = naive_elements(factors)
    out = []
    for m in elems:
        s = 0j
        for i, x in enumerate(elems):
            phase = sum(mj * xj / n for mj, xj, n in zip(m, x, factors))
            s += values[i] * e(-phase)
        out.append(s / len(elems))
    return np.array(out)


def random_function(g, seed, unimodular=False):
    rng = np.random.default_rng(seed)
    if unimodular:
        return GroupFunction(g, np.exp(2j * np.pi * rng.random(g.order)))
    return GroupFunction(g, rng.standard_normal(g.order) + 1j * rng.standard_normal(g.order))


@st.composite
def small_groups(draw, max_order=60):
    factors = draw(st.lists(st.integers(2, 7), min_size=1, max_size=3))
    while np.prod(factors) > max_order:
        factors = factors[:-1]
    return make_group(factors)


@pytest.fixture
def z5():
    return make_group([5])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
