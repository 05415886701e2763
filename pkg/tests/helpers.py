"""Shared, cached objects for the test modules (the exact runs are the slow part)."""
import random
from functools import lru_cache

from qsphere import calculus as C
from qsphere.classify import (SOLUTION_BRANCH, branch_embedding, construction_for, filter_seven,
                              find_solution, solution_fodc)
from qsphere.ncpoly import SLq2
from qsphere.podles import BElem, bnormal_upto
from qsphere.qfield import QP

D_ACC = 4


@lru_cache(maxsize=None)
def alg():
    return SLq2(QP)


@lru_cache(maxsize=None)
def embedding(branch):
    return branch_embedding(branch, alg())


@lru_cache(maxsize=None)
def report(branch):
    return filter_seven(embedding(branch))


def solution(k):
    branch = SOLUTION_BRANCH[k]
    return find_solution(k, embedding(branch), report(branch))


@lru_cache(maxsize=None)
def calculus(k, d=D_ACC):
    """Cocycle calculus of solution k on its preset branch."""
    branch = SOLUTION_BRANCH[k]
    return solution_fodc(solution(k), embedding(branch), d)


@lru_cache(maxsize=None)
def construction(k, d=D_ACC):
    return construction_for(k, embedding(SOLUTION_BRANCH[k]), d, SOLUTION_BRANCH[k])


@lru_cache(maxsize=None)
def roundtrip(k, d=D_ACC):
    return C.roundtrip_report(calculus(k, d), d)


@lru_cache(maxsize=None)
def abar(branch, d=D_ACC):
    return C.abar(embedding(branch), d)


def random_belem(rng, B, max_deg=2, n_terms=3, plus=None):
    """Random element of B (or of B+ when ``plus`` is an embedding) with small integer coefficients."""
    words = [m for m in bnormal_upto(max_deg) if sum(m) or plus is None]
    x = None
    for m in rng.sample(words, min(n_terms, len(words))):
        y = BElem(B, plus.plus_mono(m)) if plus is not None else B.mono(m)
        y = y * rng.choice([1, -1, 2, 3, -2])
        x = y if x is None else x + y
    return x


def random_ideal_gens(rng, E, k=2):
    return [random_belem(rng, E.B, 2, rng.randint(1, 3), plus=E) for _ in range(k)]


def rng(seed):
    return random.Random(seed)


# criterion number -> (description, passed); filled by test_acceptance, printed by conftest
ACCEPTANCE = {}
