import random

from hypothesis import given, settings, strategies as st

from qsphere.linalg import Echelon, PolyEchelon, QMatrix, kernel, rank, solve_linear
from qsphere.qfield import QP, QHalf

seeds = st.integers(min_value=0, max_value=2 ** 31)


def _rand_scalar(rng):
    return QP.coerce(rng.randint(-3, 3)) * QHalf.p_pow(rng.randint(-1, 2)) + rng.choice([0, 1]) * QP.q


def _rand_matrix(rng, n, m):
    return QMatrix.from_rows([[_rand_scalar(rng) if rng.random() < 0.6 else 0 for _ in range(m)]
                              for _ in range(n)])


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_kernel_vectors_are_annihilated(seed):
    rng = random.Random(seed)
    M = _rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
    ker, rk = kernel(M)
    assert rk + len(ker) == M.cols
    for v in ker:
        assert all(not x for x in M.mul_vec(v))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_fraction_free_rank_agrees(seed):
    rng = random.Random(seed)
    M = _rand_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
    pe = PolyEchelon()
    for r in M.sparse_rows():
        pe.add(r)
    assert len(pe) == rank(M)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_solve_linear_consistent_system(seed):
    rng = random.Random(seed)
    M = _rand_matrix(rng, 3, 4)
    x0 = [_rand_scalar(rng) for _ in range(4)]
    rhs = QMatrix.from_rows([[y] for y in M.mul_vec(x0)])
    sol = solve_linear(M, rhs)
    assert sol.consistent
    assert M.mul_vec(sol.particular) == M.mul_vec(x0)


def test_inconsistent_system():
    M = QMatrix.from_rows([[1, 1], [1, 1]])
    rhs = QMatrix.from_rows([[1], [QP.q]])
    assert not solve_linear(M, rhs).consistent


def test_echelon_membership():
    e = Echelon(QP)
    assert e.add({0: QP.q, 1: QP.one})
    assert not e.add({0: QP.q * QP.q, 1: QP.q})
    assert e.contains({0: QP.one, 1: 1 / QP.q})
