"""Left and right dimensions of the seven calculi at truncation levels d - 1 and d.

    python scripts/dims_table.py [--degree 4] [--specialize 2]

The classification always runs over Q(p); --specialize only moves the
dimension computation to Q with p fixed (fast, NON-AUTHORITATIVE).
"""
import argparse
import time
from dataclasses import dataclass
from fractions import Fraction

from qsphere import calculus as C
from qsphere.classify import (SOLUTION_BRANCH, branch_embedding, find_solution, generator_image_dim,
                              solution_fodc)
from qsphere.ncpoly import SLq2
from qsphere.qfield import QP, SpecializedField


@dataclass
class Config:
    degree: int = 4
    specialize: Fraction | None = None
    solutions: tuple = (1, 2, 3, 4, 5, 6, 7)


def main(cfg: Config):
    F = QP if cfg.specialize is None else SpecializedField(cfg.specialize)
    print(f"field {F.name}, truncation {cfg.degree}")
    print("sol  right(d-1,d)  left(d-1,d)  dim chi(e)  time")
    for k in cfg.solutions:
        t = time.perf_counter()
        br = SOLUTION_BRANCH[k]
        E0 = branch_embedding(br)
        sol = find_solution(k, E0)
        E = E0 if F is QP else branch_embedding(br, SLq2(F))
        D = solution_fodc(sol, E, cfg.degree + 1)
        r, l = C.dims(D, "right", cfg.degree), C.dims(D, "left", cfg.degree)
        print(f"{k:3d}  {str(tuple(r.by_level.values())):12s}  {str(tuple(l.by_level.values())):11s}"
              f"  {generator_image_dim(sol):10d}  {time.perf_counter() - t:5.1f} s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degree", type=int, default=4)
    ap.add_argument("--specialize", type=Fraction)
    ap.add_argument("--solutions", type=int, nargs="+")
    a = ap.parse_args()
    cfg = Config(a.degree, a.specialize)
    if a.solutions:
        cfg.solutions = tuple(a.solutions)
    main(cfg)
