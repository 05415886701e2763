"""Run the filter on every branch and print one row per solution found.

    python scripts/run_classification.py [--branches c- c+ c2 c0] [--json out.json]
"""
import argparse
import json
import time
from dataclasses import dataclass, field

from qsphere.classify import branch_embedding, filter_seven


@dataclass
class Config:
    branches: list = field(default_factory=lambda: ["c-", "c+", "c2", "c1", "c0", "c0m", "c0p"])
    json_path: str | None = None


def main(cfg: Config):
    rows = {}
    for br in cfg.branches:
        t = time.perf_counter()
        rep = filter_seven(branch_embedding(br))
        dt = time.perf_counter() - t
        rows[br] = rep.describe()
        print(f"{br:5s} {len(rep.solutions)} solution(s) in {dt:5.1f} s"
              f"  unresolved={len(rep.unresolved)} unmatched={len(rep.spurious)}")
        for s in rep.solutions:
            params = ", ".join(f"{k}={v}" for k, v in s.describe()["params"].items())
            print(f"      #{s.index}  family ({s.family})  {params}")
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--branches", nargs="+")
    ap.add_argument("--json", dest="json_path")
    a = ap.parse_args()
    cfg = Config(json_path=a.json_path)
    if a.branches:
        cfg.branches = a.branches
    main(cfg)
