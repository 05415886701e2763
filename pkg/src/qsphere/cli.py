"""Command line interface: ``qsphere <command> [options]``.

Every command prints one report (JSON or Markdown) and exits with 0 when all
checks pass, 1 when a check fails and 2 on usage errors.  Reports are
deterministic apart from the ``wall_time_s`` field.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .ncpoly import SLq2, hopf_suite, render_scalar
from .parse import ParseError, parse_scalar
from .podles import (EmbeddingError, alphas_for_c, find_embedding, is_admissible, preset_alphas,
                     PRESET_ALPHAS)
from .qfield import QP, SpecializedField

SCHEMA_VERSION = "1.0"

CONVENTIONS = "; ".join([
    "field Q(p), q = p^2",
    "ab = q ba, ac = q ca, bc = cb, bd = q db, cd = q dc",
    "ad - da = (q - q^-1) bc, ad - q bc = 1",
    "Delta u[i,j] = sum_k u[i,k] (x) u[k,j]",
    "S(a) = d, S(b) = -q^-1 b, S(c) = -q c, S(d) = a",
    "a* = d, b* = -q c, c* = -q^-1 b, d* = a",
    "B_c: e[i] -> sum_j alpha_j pi[j][i], coideal Delta(B) in B (x) A",
])
CONVENTION_HASH = hashlib.sha256(CONVENTIONS.encode()).hexdigest()[:16]

COMMANDS = ("verify-hopf", "verify-rform", "verify-podles", "classify", "construct", "dims",
            "roundtrip", "solution")
PRESETS = tuple(f"sol{k}" for k in range(1, 8)) + ("c2-i", "c2-ii", "spin2")
# preset -> (branch of the embedding, solution index or None)
PRESET_TABLE = {f"sol{k}": (b, k) for k, b in
                {1: "c-", 2: "c+", 3: "c2", 4: "c2", 5: "c0", 6: "c0", 7: "c0"}.items()}
PRESET_TABLE.update({"c2-i": ("c2", 3), "c2-ii": ("c2", 4), "spin2": ("c0", 6)})
# number of solutions on each branch of the classification
EXPECTED_COUNT = {"c-": 1, "c+": 1, "c2": 2, "c0": 3, "c0m": 3, "c0p": 3, "generic": 0}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    """Parsed and validated command line options."""

    command: str
    c: str | None = None
    rho: str | None = None
    lam: str | None = None
    alpha: str | None = None
    degree: int = 4
    preset: str | None = None
    fmt: str = "json"
    specialize: str | None = None

    def echo(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class Context:
    """Field, algebra and (optionally) the embedding selected by the options."""

    F: object
    alg: SLq2
    branch: str | None = None
    E: object = None
    E_exact: object = None
    alphas: tuple | None = None
    notes: list = field(default_factory=list)


def _specialized_field(text):
    if text is None:
        return QP
    name, sep, val = text.partition("=")
    if name.strip() != "p" or not sep:
        raise UsageError("--specialize expects p=<rational>")
    try:
        p0 = Fraction(val.strip())
        return SpecializedField(p0)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--specialize: {exc}") from None


def _scalar(text, opt):
    try:
        return parse_scalar(text, QP)
    except ParseError as exc:
        raise UsageError(f"{opt}: {exc}") from None


def _alphas_from_options(cfg: RunConfig):
    """(alphas, branch hint) from --preset/--c/--alpha/--rho/--lambda, or (None, None)."""
    if cfg.c is not None and (cfg.rho is not None or cfg.lam is not None):
        raise UsageError("--c cannot be combined with --rho/--lambda")
    if (cfg.rho is None) != (cfg.lam is None):
        raise UsageError("--rho and --lambda must be given together")
    if cfg.preset and (cfg.c is not None or cfg.rho is not None or cfg.alpha is not None):
        raise UsageError("--preset fixes the embedding; drop --c/--rho/--lambda/--alpha")
    if cfg.preset:
        branch = PRESET_TABLE[cfg.preset][0]
        return preset_alphas(branch), branch
    given = None
    if cfg.alpha is not None:
        parts = cfg.alpha.split(",")
        if len(parts) != 3:
            raise UsageError("--alpha expects three comma separated values a-1,a0,a1")
        given = tuple(_scalar(x, "--alpha") for x in parts)
        if all(not x for x in given):
            raise UsageError("--alpha: all counit values vanish")
    if cfg.c is not None:
        if cfg.c.startswith("preset:"):
            name = cfg.c[len("preset:"):]
            if name not in PRESET_ALPHAS:
                raise UsageError(f"--c: unknown preset {name!r} (choose from {', '.join(PRESET_ALPHAS)})")
            alphas = preset_alphas(name)
        else:
            alphas = alphas_for_c(_scalar(cfg.c, "--c"))
        if given is not None:
            from .podles import Embedding
            if Embedding(SLq2(QP), given).c != Embedding(SLq2(QP), alphas).c:
                raise UsageError("--alpha is inconsistent with --c")
            alphas = given
        return alphas, None
    if cfg.rho is not None:
        rho, lam = _scalar(cfg.rho, "--rho"), _scalar(cfg.lam, "--lambda")
        if given is not None:
            if not is_admissible(rho, lam, *given):
                raise UsageError("--alpha is not a character of B for the given --rho/--lambda")
            return given, None
        q = QP.q
        a0 = lam / (1 - q * q)
        P = (rho - a0 * a0) / (q + 1 / q) ** 2
        if not a0 and not P:
            raise UsageError("rho = lam = 0 admits only the zero character")
        return ((P, a0, QP.one) if P else (QP.zero, a0, QP.zero)), None
    if given is not None:
        return given, None
    return None, None


def build_context(cfg: RunConfig, need_embedding: bool) -> Context:
    F = _specialized_field(cfg.specialize)
    alg = SLq2(F)
    ctx = Context(F, alg)
    alphas, branch = _alphas_from_options(cfg)
    if alphas is None:
        if need_embedding:
            raise UsageError("this command needs an embedding: give --preset, --c, --alpha or --rho/--lambda")
        return ctx
    from .classify import branch_of
    try:
        ctx.E_exact = find_embedding(*alphas, alg=SLq2(QP))
        ctx.E = ctx.E_exact if F is QP else find_embedding(*alphas, alg=alg)
    except (EmbeddingError, ZeroDivisionError) as exc:
        raise UsageError(f"no embedding for these options: {exc}") from None
    ctx.alphas = alphas
    ctx.branch = branch or branch_of(ctx.E_exact)
    return ctx


# ---------------------------------------------------------------------------
# check collection

class Checks:
    def __init__(self):
        self.items = []

    def add(self, name, ok, **detail):
        self.items.append({"name": name, "passed": bool(ok), **detail})

    def suite(self, prefix, res: dict, limit=5):
        """Add a name -> (count, failures) suite."""
        for name, (count, bad) in res.items():
            self.add(f"{prefix}{name}", not bad, checked=count, failures=[str(b) for b in bad[:limit]])

    def flags(self, prefix, res: dict):
        for name, ok in res.items():
            self.add(f"{prefix}{name}", ok)

    @property
    def failed(self):
        return sum(not c["passed"] for c in self.items)


# ---------------------------------------------------------------------------
# commands

def _alphas_str(alphas):
    return [render_scalar(QP.coerce(a)) for a in alphas]


def _embedding_payload(ctx: Context):
    return {"branch": ctx.branch, "alpha": _alphas_str(ctx.alphas),
            "c": render_scalar(ctx.E_exact.c),
            "rho": render_scalar(ctx.E_exact.rho), "lambda": render_scalar(ctx.E_exact.lam)}


def cmd_verify_hopf(cfg, ctx, chk):
    res = hopf_suite(ctx.alg, degree=cfg.degree)
    chk.suite("", res)
    return {"suite": {k: v[0] for k, v in res.items()}}


def cmd_verify_rform(cfg, ctx, chk):
    from .rform import rform_report
    res = rform_report(ctx.alg, degree=cfg.degree)
    chk.suite("", res)
    return {"suite": {k: v[0] for k, v in res.items()}}


def cmd_verify_podles(cfg, ctx, chk):
    from .classify import filter_report
    E = ctx.E
    chk.flags("embedding:", E.check())
    probe = max(1, cfg.degree - 2)
    res = filter_report(E, degree=probe)
    chk.suite("filter:", res)
    return {"embedding": _embedding_payload(ctx), "images": E.render(), "filter_probe_degree": probe}


def _solution_dims(sol, ctx, d, chk):
    from . import calculus as C
    from .classify import generator_image_dim, solution_fodc
    D = solution_fodc(sol, ctx.E, d + 1)
    eq = C.equivariance_check(D, min(d, 3))
    r, l = C.dims(D, "right", d), C.dims(D, "left", d)
    tag = f"solution {sol.index}:"
    chk.add(tag + "equivariant", eq)
    chk.add(tag + "dim_r = 2", r.value == 2 and r.stable, value=r.value)
    chk.add(tag + "left dim stable", l.stable, value=l.value)
    return {"equivariant": eq, "dims": {"right": r.as_dict(), "left": l.as_dict()},
            "generator_image_dim": generator_image_dim(sol)}


def cmd_classify(cfg, ctx, chk):
    from .classify import filter_seven
    E = ctx.E_exact
    rep = filter_seven(E)
    exp = EXPECTED_COUNT.get(rep.branch)
    chk.add("solution count", len(rep.solutions) == exp, found=len(rep.solutions), expected=exp)
    chk.add("no unresolved branch factors", not rep.unresolved)
    chk.add("every solution identified", not rep.spurious)
    sols = []
    for s in rep.solutions:
        entry = {"index": s.index, "family": s.family, "params": s.describe()["params"],
                 "conditions": list(s.conditions), "locus": s.describe()["locus"]}
        if s.K in (None, QP):
            entry.update(_solution_dims(s, ctx, cfg.degree, chk))
        else:
            entry["note"] = "coefficients in an algebraic extension; calculus checks skipped"
        sols.append(entry)
    return {"embedding": _embedding_payload(ctx), "branch": rep.branch, "count": len(rep.solutions),
            "families": rep.families, "solutions": sols,
            "unresolved": rep.describe()["unresolved_branch_factors"]}


def _construction(preset, E, d):
    from .classify import construction_for
    branch, k = PRESET_TABLE[preset]
    if preset == "sol2":
        raise UsageError("solution 2 has no explicit construction; use the 'solution' command")
    return construction_for(k, E, d, branch)


def _require_preset(cfg, allowed=PRESETS):
    if cfg.preset is None:
        raise UsageError(f"--preset is required ({', '.join(allowed)})")
    if cfg.preset not in allowed:
        raise UsageError(f"--preset {cfg.preset} is not valid here ({', '.join(allowed)})")


def cmd_construct(cfg, ctx, chk):
    from . import calculus as C
    _require_preset(cfg)
    d = cfg.degree
    X = _construction(cfg.preset, ctx.E, d + 1)
    branch, k = PRESET_TABLE[cfg.preset]
    if k == 1:
        chk.flags("identity:", C.xy_identities(X))
    elif k in (3, 4):
        chk.flags("identity:", C.c2_identities(X))
    elif cfg.preset in ("spin2", "sol6"):
        chk.flags("identity:", C.spin2_identities(ctx.E, prime=True, d=d))
    eq = C.equivariance_check(X, min(d, 3))
    chk.add("equivariant", eq)
    r, l = C.dims(X, "right", d), C.dims(X, "left", d)
    chk.add("right dim stable", r.stable, value=r.value)
    chk.add("left dim stable", l.stable, value=l.value)
    return {"embedding": _embedding_payload(ctx), "construction": X.name, "solution": k,
            "dims": {"right": r.as_dict(), "left": l.as_dict()}}


def _calculus_for_preset(cfg, ctx, d):
    """Solution calculus (sol1..sol7) or construction (c2-i, c2-ii, spin2) at truncation d."""
    from .classify import find_solution, solution_fodc
    branch, k = PRESET_TABLE[cfg.preset]
    if cfg.preset.startswith("sol"):
        sol = find_solution(k, ctx.E_exact)
        return solution_fodc(sol, ctx.E, d), k
    return _construction(cfg.preset, ctx.E, d), k


def cmd_dims(cfg, ctx, chk):
    from . import calculus as C
    _require_preset(cfg)
    d = cfg.degree
    D, k = _calculus_for_preset(cfg, ctx, d + 1)
    r, l = C.dims(D, "right", d), C.dims(D, "left", d)
    chk.add("right dim stable", r.stable, value=r.value)
    chk.add("left dim stable", l.stable, value=l.value)
    return {"embedding": _embedding_payload(ctx), "calculus": D.name, "solution": k,
            "dims": {"right": r.as_dict(), "left": l.as_dict()}}


def cmd_roundtrip(cfg, ctx, chk):
    from . import calculus as C
    _require_preset(cfg)
    d = cfg.degree
    D, k = _calculus_for_preset(cfg, ctx, d)
    res = C.roundtrip_report(D, d)
    chk.flags("", res["checks"])
    out = {"embedding": _embedding_payload(ctx), "calculus": D.name, "solution": k,
           "ideal_dims": res["ideal_dims"]}
    if cfg.preset in ("c2-i", "c2-ii"):
        # ideal read in the coopposite convention: it is all of B+, so its calculus is trivial
        R = C.ideal_from_derivation(D, d, side="right")
        aug = C.IdealTrunc.augmentation(ctx.E, d)
        chk.add("opposite-side ideal is B+", R.equals(aug, d - 2))
        out["opposite_side_ideal_dims"] = R.dims()
    return out


def cmd_solution(cfg, ctx, chk):
    from .classify import verify_solution
    allowed = tuple(f"sol{k}" for k in range(1, 8))
    _require_preset(cfg, allowed)
    branch, k = PRESET_TABLE[cfg.preset]
    res = verify_solution(k, branch, cfg.degree, F=ctx.F)
    chk.flags("", res["checks"])
    chk.add("dim_r = 2", res["dims"]["right"]["value"] == 2 and res["dims"]["right"]["stable"])
    chk.add("left dim stable", res["dims"]["left"]["stable"])
    res.pop("passed")
    res.pop("checks")
    res["embedding"] = _embedding_payload(ctx)
    return res


HANDLERS = {
    "verify-hopf": (cmd_verify_hopf, False),
    "verify-rform": (cmd_verify_rform, False),
    "verify-podles": (cmd_verify_podles, True),
    "classify": (cmd_classify, True),
    "construct": (cmd_construct, True),
    "dims": (cmd_dims, True),
    "roundtrip": (cmd_roundtrip, True),
    "solution": (cmd_solution, True),
}

# commands whose case analysis needs exact Q(p) even when --specialize is given
EXACT_CLASSIFICATION = ("classify", "solution")


# ---------------------------------------------------------------------------
# output

def render_markdown(report: dict) -> str:
    lines = [f"# qsphere {report['command']}", ""]
    lines.append(f"- schema: {report['schema_version']}")
    lines.append(f"- conventions: {report['convention_hash']}")
    lines.append(f"- field: {report['field']}" + ("" if report["authoritative"] else " (NON-AUTHORITATIVE)"))
    lines.append(f"- degree: {report['degree']}")
    for n in report.get("notes", []):
        lines.append(f"- note: {n}")
    lines += ["", "| check | result |", "|---|---|"]
    for c in report["checks"]:
        lines.append(f"| {c['name']} | {'pass' if c['passed'] else 'FAIL'} |")
    cnt = report["counters"]
    lines += ["", f"passed {cnt['passed']}, failed {cnt['failed']}, wall time {report['wall_time_s']} s",
              "", "```json", json.dumps(report["payload"], indent=2, sort_keys=True), "```"]
    return "\n".join(lines) + "\n"


def build_parser():
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = common.add_argument_group("embedding and run options")
    g.add_argument("--c", help="value of c (expression in p, q) or preset:NAME")
    g.add_argument("--rho", help="Podles parameter rho")
    g.add_argument("--lambda", dest="lam", help="Podles parameter lambda")
    g.add_argument("--alpha", help="counit values a-1,a0,a1")
    g.add_argument("--degree", type=int, default=4, help="truncation degree (default 4)")
    g.add_argument("--preset", choices=PRESETS, help="named solution or construction")
    g.add_argument("--format", dest="fmt", choices=("json", "markdown"), default="json")
    g.add_argument("--specialize", metavar="p=<rational>",
                   help="evaluate at a rational p (fast, NON-AUTHORITATIVE)")
    parser = _Parser(prog="qsphere", allow_abbrev=False,
                     description="Covariant calculi on the Podles spheres over Q(p).")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], allow_abbrev=False, help=HANDLERS[name][0].__name__[4:])
    return parser


def run(argv=None) -> tuple[int, str]:
    """Parse, execute and render; returns (exit code, text)."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig(ns.command, ns.c, ns.rho, ns.lam, ns.alpha, ns.degree, ns.preset, ns.fmt, ns.specialize)
    if not 2 <= cfg.degree <= 6:
        raise UsageError("--degree must lie in 2..6")
    handler, need_E = HANDLERS[cfg.command]
    t0 = time.perf_counter()
    ctx = build_context(cfg, need_E)
    chk = Checks()
    payload = handler(cfg, ctx, chk)
    notes = []
    if ctx.F is not QP:
        notes.append("NON-AUTHORITATIVE: values evaluated at " + ctx.F.name)
        if cfg.command in EXACT_CLASSIFICATION:
            notes.append("the solution search ran over Q(p); only the calculus checks are specialized")
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "options": cfg.echo(),
        "convention_hash": CONVENTION_HASH,
        "degree": cfg.degree,
        "field": ctx.F.name,
        "authoritative": ctx.F is QP,
        "notes": notes,
        "checks": chk.items,
        "payload": payload,
        "counters": {"checks": len(chk.items), "passed": len(chk.items) - chk.failed, "failed": chk.failed},
        "wall_time_s": round(time.perf_counter() - t0, 3),
    }
    text = (json.dumps(report, indent=2, sort_keys=True) + "\n" if cfg.fmt == "json"
            else render_markdown(report))
    return (0 if chk.failed == 0 else 1), text


def main(argv=None) -> int:
    try:
        code, text = run(argv)
    except UsageError as exc:
        print(f"qsphere: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
