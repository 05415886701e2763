"""Star permutation of the c = 0 solutions and the ideal roundtrip for all seven.

    python scripts/star_and_roundtrip.py [--degree 4]
"""
import argparse
from dataclasses import dataclass

from qsphere import calculus as C
from qsphere.classify import SOLUTION_BRANCH, branch_embedding, construction_for, filter_seven, solution_fodc


@dataclass
class Config:
    degree: int = 4


def main(cfg: Config):
    d = cfg.degree
    E = branch_embedding("c0")
    rep = filter_seven(E)
    D = {s.index: solution_fodc(s, E, d) for s in rep.solutions}
    for k, Dk in D.items():
        img = [j for j, Dj in D.items() if C.equal_check(C.StarFODC(Dk), Dj, d)]
        print(f"star(solution {k}) = solution {img}")
    for k in range(1, 8):
        br = SOLUTION_BRANCH[k]
        Ek = branch_embedding(br)
        sol = next(s for s in filter_seven(Ek).solutions if s.index == k)
        res = C.roundtrip_report(solution_fodc(sol, Ek, d), d)
        print(f"solution {k}: ideal dims {res['ideal_dims']}  {res['checks']}")
    Ec = branch_embedding("c2")
    for k, case in ((3, "i"), (4, "ii")):
        X = construction_for(k, Ec, d, "c2")
        R = C.ideal_from_derivation(X, d, side="right")
        same = C.equal_check(C.derivation_from_ideal(R), X, d)
        print(f"c2 construction ({case}): opposite-side ideal dims {R.dims()}, calculus recovered: {same}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degree", type=int, default=4)
    main(Config(ap.parse_args().degree))
