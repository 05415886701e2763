import random

import pytest
from hypothesis import given, settings, strategies as st

from qsphere.ncpoly import SLq2, classical_dim, hopf_suite, pbw_monomials, pbw_upto
from qsphere.qfield import QP, SpecializedField

A = SLq2(QP)
a, b, c, d = A.gens()
q = QP.q
seeds = st.integers(min_value=0, max_value=2 ** 31)


def test_defining_relations():
    assert a * b == b * a * q
    assert a * c == c * a * q
    assert b * c == c * b
    assert b * d == d * b * q
    assert c * d == d * c * q
    assert a * d - d * a == b * c * (q - 1 / q)
    assert a * d - b * c * q == A.one()


def test_pbw_counts_match_classical_limit():
    # sum_{j <= n} (j + 1)^2: 1, 5, 14, 30
    assert [classical_dim(n) for n in range(4)] == [1, 5, 14, 30]
    for n in range(5):
        assert len(pbw_upto(n)) == classical_dim(n)
        assert len(pbw_monomials(n)) == (n + 1) ** 2


def test_antipode_and_star_on_generators():
    assert a.antipode() == d and d.antipode() == a
    assert b.antipode() == b * (-1 / q) and c.antipode() == c * (-q)
    assert a.star() == d and b.star() == c * (-q) and c.star() == b * (-1 / q)


@pytest.mark.parametrize("F", [QP, SpecializedField(2)], ids=["exact", "p=2"])
def test_hopf_suite_degree_3(F):
    res = hopf_suite(SLq2(F), degree=3, n_random=20)
    bad = {k: v[1] for k, v in res.items() if v[1]}
    assert not bad


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_random_associativity(seed):
    rng = random.Random(seed)
    x, y, z = (A.random_element(rng, max_deg=2) for _ in range(3))
    assert (x * y) * z == x * (y * z)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_random_coproduct_multiplicative(seed):
    rng = random.Random(seed)
    x, y = (A.random_element(rng, max_deg=2) for _ in range(2))
    assert (x * y).coproduct() == x.coproduct() * y.coproduct()
    assert (x * y).counit() == x.counit() * y.counit()


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_random_antipode_and_star_antimultiplicative(seed):
    rng = random.Random(seed)
    x, y = (A.random_element(rng, max_deg=2) for _ in range(2))
    assert (x * y).antipode() == y.antipode() * x.antipode()
    assert (x * y).star() == y.star() * x.star()
