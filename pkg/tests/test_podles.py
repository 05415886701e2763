import pytest

from qsphere import calculus as C
from qsphere.classify import filter_report
from qsphere.ncpoly import SLq2
from qsphere.podles import (EmbeddingError, PRESET_ALPHAS, admissible_characters, c_minus, c_plus,
                            find_embedding, is_admissible, preset_alphas, rho_lambda, spin_subcomodule,
                            xy_subalgebra, IDX)
from qsphere.qfield import QP, SpecializedField, c_of

from helpers import embedding

q = QP.q


@pytest.mark.parametrize("name", sorted(PRESET_ALPHAS))
def test_preset_embeddings_pass_checks(name):
    E = find_embedding(*preset_alphas(name))
    assert all(E.check().values())
    for i in IDX:
        assert E.e[i].counit() == E.alpha[i]


def test_c_values_of_presets():
    assert embedding("c-").c == c_minus()
    assert embedding("c+").c == c_plus()
    assert embedding("c2").c == c_of(2)
    for name in ("c0", "c0m", "c0p"):
        assert not embedding(name).c


def test_character_is_admissible():
    for name in ("c-", "c+", "c2", "c0"):
        E = embedding(name)
        assert is_admissible(E.rho, E.lam, *[E.alpha[i] for i in IDX])


def test_admissible_characters_case_split():
    rho, lam = rho_lambda(QP.coerce(2), QP.one, QP.one)
    branches = admissible_characters(rho, lam)
    assert [b.condition for b in branches] == ["a0 != 0"]
    assert branches[0].alphas[1] == QP.one


def test_zero_character_rejected():
    with pytest.raises(EmbeddingError):
        find_embedding(0, 0, 0)


def test_inadmissible_character_rejected():
    with pytest.raises(EmbeddingError):
        find_embedding(1, 1, 1, rho=QP.coerce(5), lam=QP.one)


@pytest.mark.parametrize("name", ["c0", "c-", "c+", "c2"])
def test_filter_kills_augmentation(name):
    res = filter_report(embedding(name), degree=2)
    assert not {k: v[1] for k, v in res.items() if v[1]}


def test_star_compatibility_at_c0():
    # alpha_-1 = alpha_1 = 0 is self-conjugate, and then e_i* = e_-i
    E = embedding("c0")
    for i in IDX:
        assert E.e[i].star() == E.e[-i]
        assert E.B.star(E.B.gen(i)) == E.B.gen(-i)


def test_xy_subalgebra_relation():
    E = embedding("c-")
    x1, x2 = xy_subalgebra(E)
    assert x1 * x2 - x2 * x1 * q == E.alg.one()


def _coaction(E, x):
    out = {}
    for m, cm in x.terms.items():
        for m1, P in E.coaction_mono(m).items():
            out[m1] = out.get(m1, E.alg.zero()) + P * cm
    return {k: v for k, v in out.items() if not v.is_zero()}


def test_spin2_subcomodule_is_invariant():
    E = embedding("c0")
    S = spin_subcomodule(E, 2)
    assert len(S.elements) == 5
    for i, x in enumerate(S.elements):
        expect = {}
        for j, y in enumerate(S.elements):
            for m, cm in y.terms.items():
                expect[m] = expect.get(m, E.alg.zero()) + S.psi[(j, i)] * cm
        expect = {k: v for k, v in expect.items() if not v.is_zero()}
        assert _coaction(E, x) == expect


def test_spin2_lowest_weight_normalization():
    # the fitted scale of e~-2 makes the cube identity hold exactly
    E = embedding("c0")
    S, scales, report = C.normalize_spin2(E, prime=True)
    assert report["delta(e[-1]^3)"]
    assert C.spin2_identities(E, prime=True)["delta(e[-1]^3)"]


def test_spin1_subcomodule_is_the_generators():
    E = embedding("c0")
    S = spin_subcomodule(E, 1)
    assert len(S.elements) == 3


def test_embedding_over_specialized_field():
    A2 = SLq2(SpecializedField(2))
    E = find_embedding(*preset_alphas("c2"), alg=A2)
    assert all(E.check().values())


def test_rewriting_confluent_up_to_degree_5():
    # associativity of normal-word products is equivalent to confluence of the rewriting
    from qsphere.podles import bnormal_upto
    B = embedding("c-").B
    words = bnormal_upto(3)
    for x in words:
        for y in words:
            for z in words:
                if sum(x) + sum(y) + sum(z) <= 5 and sum(x) and sum(y) and sum(z):
                    X, Y, Z = B.mono(x), B.mono(y), B.mono(z)
                    assert (X * Y) * Z == X * (Y * Z)


def test_abstract_relations_hold_for_generators():
    B = embedding("c2").B
    e = {i: B.gen(i) for i in IDX}
    assert all(r.is_zero() for r in B.relations(e))


@pytest.mark.parametrize("name", ["c-", "c+", "c2", "c1"])
def test_c_is_counit_ratio(name):
    E = embedding(name)
    assert E.c == E.alpha[-1] * E.alpha[1] / E.alpha[0] ** 2
