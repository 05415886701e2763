import random

import pytest

from qsphere.ncpoly import SLq2
from qsphere.qfield import QP, SpecializedField
from qsphere.rform import Functionals, RForm, axiom_suite, functional_identities, rform_report

A = SLq2(QP)


def _failures(res):
    return {k: v[1] for k, v in res.items() if v[1]}


@pytest.mark.parametrize("prime", [False, True], ids=["r", "r'"])
def test_axioms_on_generators_and_samples(prime):
    rng = random.Random(3)
    samples = [(A.random_element(rng, max_deg=2), A.random_element(rng, max_deg=2)) for _ in range(5)]
    assert not _failures(axiom_suite(A, RForm(A), use_prime=prime, samples=samples))


def test_functional_identities_degree_3():
    assert not _failures(functional_identities(A, degree=3))


def test_report_over_specialized_field():
    assert not _failures(rform_report(SLq2(SpecializedField(3)), degree=2, n_samples=4))


def test_l_inverse_on_diagonal_generators():
    # l and l^-1 are convolution inverse, so l * l^-1 is the counit
    fn = Functionals(A)
    for g in ("a", "d"):
        x = A.gen(g)
        assert (fn.l * fn.l_inv).mono(next(iter(x.terms))) == x.counit()
