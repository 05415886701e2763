import pytest

from qsphere.classify import (Mat, chi_plane_key, cocycle_space, filter_seven, is_cocycle,
                              listed_solutions, relations_hold, solve_representations, verify_solution)
from qsphere.podles import alphas_for_c, find_embedding
from qsphere.qfield import QP, SpecializedField

from helpers import embedding, report

q = QP.q


@pytest.mark.parametrize("branch, count", [("c-", 1), ("c+", 1), ("c2", 2), ("c0", 3), ("c0m", 3),
                                           ("c0p", 3), ("c1", 0)])
def test_solution_counts(branch, count):
    rep = report(branch)
    assert len(rep.solutions) == count
    assert not rep.unresolved
    if branch != "c1":
        assert not rep.spurious


@pytest.mark.parametrize("branch, indices", [("c-", [1]), ("c+", [2]), ("c2", [3, 4]), ("c0", [5, 6, 7]),
                                             ("c0m", [5, 6, 7]), ("c0p", [5, 6, 7])])
def test_solution_labels(branch, indices):
    assert [s.index for s in report(branch).solutions] == indices


@pytest.mark.parametrize("c", [1, -1, "q"])
def test_generic_c_has_no_solutions(c):
    E = find_embedding(*alphas_for_c(QP.q if c == "q" else c))
    assert not filter_seven(E).solutions


@pytest.mark.parametrize("alphas, count", [
    ((2 / (q * q - 1), 1, -q * (q - 1) / (2 * (q + 1))), 1),
    ((3 / (q ** 4 + 1), 1, -q ** 4 / (3 * (q ** 4 + 1))), 2),
    ((2, 1, 0), 3),
    ((0, 1, 5), 3),
    ((0, 2, 0), 3),
])
def test_counts_are_gauge_independent(alphas, count):
    rep = filter_seven(find_embedding(*alphas))
    assert len(rep.solutions) == count
    assert not rep.spurious


@pytest.mark.parametrize("branch", ["c-", "c+", "c2", "c0", "c0m", "c0p"])
def test_representation_families_satisfy_relations(branch):
    E = embedding(branch)
    for fam in solve_representations(E):
        if not fam.free:
            assert relations_hold(fam, E)


@pytest.mark.parametrize("branch", ["c-", "c2", "c0"])
def test_listed_solutions_are_cocycles(branch):
    E = embedding(branch)
    for sol in listed_solutions(E, branch):
        from qsphere.classify import make_family
        fam = make_family(sol.family, E, K=QP, **sol.params)
        assert is_cocycle(fam, E, sol.chi)


def test_found_solutions_match_listed_planes():
    E = embedding("c0")
    listed = {chi_plane_key(s, E): s.index for s in listed_solutions(E, "c0")}
    found = {chi_plane_key(s, E): s.index for s in report("c0").solutions}
    assert listed == found


def test_cocycle_space_contains_coboundaries():
    E = embedding("c0")
    sol = report("c0").solutions[0]
    from qsphere.classify import make_family
    fam = make_family(sol.family, E, K=QP, **sol.params)
    cs = cocycle_space(fam, E)
    assert len(cs.basis) >= 1


def test_mat_arithmetic():
    X = Mat(QP, [[1, q], [0, 2]])
    Y = Mat(QP, [[0, 1], [1, 0]])
    assert (X * Y - Y * X + q).a == Mat(QP, [[2 * q, -1], [1, 0]]).a
    assert (X - X).is_zero()


@pytest.mark.parametrize("k", [5, 6, 7, 3])
def test_verify_solution_specialized(k):
    res = verify_solution(k, F=SpecializedField(2))
    assert res["passed"]
    assert res["dims"]["right"]["value"] == 2
