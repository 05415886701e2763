"""Podles sphere algebras B_c: abstract presentation and embedding into A.

Abstract B_c is generated by e[-1], e[0], e[1] with

    (q^2+1) e-1 e1 + e0^2 + (q^-2+1) e1 e-1 = rho
    -q^2 e-1 e0 + e0 e-1 = lam e-1
    (q^2+1) e-1 e1 - (q^2-1) e0^2 - (q^2+1) e1 e-1 = lam e0
    -q^2 e0 e1 + e1 e0 = lam e1

The first and third relations solve for both e1 e-1 and e0^2, so the
normal words are e-1^i e0^j e1^k with j in {0, 1}; degree <= n has
(n+1)^2 of them.  Normal words are stored as tuples (i, j, k).

The embedding realises e_i = sum_j alpha_j pi[j][i] where pi is the
spin-1 matrix corepresentation read off from span{a^2, ab, b^2}, conjugated
by a diagonal gauge that is solved for (not tabulated) in
``_solve_normalization``.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from .linalg import Echelon
from .ncpoly import NCPoly, SLq2, ONE_M, render_terms, render_scalar
from .qfield import QP, ParamField, QHalf, c_of

IDX = (-1, 0, 1)
LETTER = {-1: "e[-1]", 0: "e[0]", 1: "e[1]"}


class EmbeddingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# abstract algebra

def bmono_str(m) -> str:
    i, j, k = m
    parts = []
    for e, name in ((i, "e[-1]"), (j, "e[0]"), (k, "e[1]")):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def bmono_key(m):
    return (sum(m), m)


def bmono_weight(m) -> int:
    """Weight in units of e[1]: e[i] has weight i."""
    return m[2] - m[0]


def bnormal_words(n: int):
    """Normal words of degree exactly n."""
    out = []
    for j in (0, 1):
        for i in range(n - j + 1):
            k = n - j - i
            if k >= 0:
                out.append((i, j, k))
    return sorted(out)


def bnormal_upto(n: int):
    return [m for d in range(n + 1) for m in bnormal_words(d)]


class PodlesAlgebra:
    """Abstract B_c with parameters rho, lam over a coefficient field."""

    def __init__(self, rho, lam, F=QP):
        self.F = F
        self.rho = F.coerce(rho)
        self.lam = F.coerce(lam)
        q = F.q
        # e1 e-1 = q^4 e-1 e1 - q^2 lam/(q^2+1) e0 - q^2 (q^2-1) rho/(q^2+1)
        # e0^2  = q^2 rho + lam e0 - (q^2+1)^2 e-1 e1
        self.rule_10 = {(1, 0, 1): q ** 4, (0, 1, 0): -q * q * self.lam / (q * q + 1),
                        (0, 0, 0): -q * q * (q * q - 1) * self.rho / (q * q + 1)}
        self.rule_00 = {(0, 0, 0): q * q * self.rho, (0, 1, 0): self.lam,
                        (1, 0, 1): -(q * q + 1) ** 2}
        self._mg = {}
        self._mm = {}

    @classmethod
    def from_alpha(cls, am1, a0, a1, F=QP):
        rho, lam = rho_lambda(am1, a0, a1, F)
        return cls(rho, lam, F)

    def c_value(self, am1, a0, a1):
        return self.F.coerce(am1) * self.F.coerce(a1) / (self.F.coerce(a0) ** 2)

    def zero(self):
        return BElem(self, {})

    def one(self):
        return BElem(self, {(0, 0, 0): self.F.one})

    def gen(self, i: int):
        return BElem(self, {{-1: (1, 0, 0), 0: (0, 1, 0), 1: (0, 0, 1)}[i]: self.F.one})

    def mono(self, m, coeff=None):
        return BElem(self, {m: self.F.one if coeff is None else coeff})

    def _acc(self, out, terms, s):
        for m, c in terms.items():
            v = out.get(m)
            out[m] = c * s if v is None else v + c * s

    def mono_times_gen(self, m, g: int) -> dict:
        key = (m, g)
        r = self._mg.get(key)
        if r is not None:
            return r
        i, j, k = m
        F = self.F
        q = F.q
        out = {}
        if g == 1:
            out = {(i, j, k + 1): F.one}
        elif g == 0:
            if k == 0:
                if j == 0:
                    out = {(i, 1, 0): F.one}
                else:
                    out = {(i + a, b, c): v for (a, b, c), v in self.rule_00.items()}
            else:
                # m' e1 e0 = m' (q^2 e0 e1 + lam e1)
                base = self.mono_times_gen((i, j, k - 1), 0)
                for mm, v in base.items():
                    self._acc(out, self.mono_times_gen(mm, 1), v * q * q)
                if self.lam:
                    self._acc(out, {(i, j, k): F.one}, self.lam)
        else:  # g == -1
            if k == 0 and j == 0:
                out = {(i + 1, 0, 0): F.one}
            elif k == 0:
                # e-1^i e0 e-1 = q^2 e-1^(i+1) e0 + lam e-1^(i+1)
                out = {(i + 1, 1, 0): q * q}
                if self.lam:
                    out[(i + 1, 0, 0)] = self.lam
            else:
                rest = (i, j, k - 1)
                for (a, b, c), v in self.rule_10.items():
                    if not v:
                        continue
                    word = [-1] * a + [0] * b + [1] * c
                    terms = {rest: F.one}
                    for g2 in word:
                        nt = {}
                        for mm, cv in terms.items():
                            self._acc(nt, self.mono_times_gen(mm, g2), cv)
                        terms = nt
                    self._acc(out, terms, v)
        out = {mm: v for mm, v in out.items() if v}
        self._mg[key] = out
        return out

    def mono_mul(self, m1, m2) -> dict:
        key = (m1, m2)
        r = self._mm.get(key)
        if r is not None:
            return r
        terms = {m1: self.F.one}
        for g in word_of(m2):
            nt = {}
            for mm, cv in terms.items():
                self._acc(nt, self.mono_times_gen(mm, g), cv)
            terms = {mm: v for mm, v in nt.items() if v}
        self._mm[key] = terms
        return terms

    def pbw_reduce(self, word) -> "BElem":
        """Normal form of a word in the letters -1, 0, 1."""
        terms = {(0, 0, 0): self.F.one}
        for g in word:
            nt = {}
            for mm, cv in terms.items():
                self._acc(nt, self.mono_times_gen(mm, g), cv)
            terms = {mm: v for mm, v in nt.items() if v}
        return BElem(self, terms)

    def star_mono(self, m) -> "BElem":
        """e_i* = e_-i extended as an anti-homomorphism (real scalars)."""
        return self.pbw_reduce([-g for g in reversed(word_of(m))])

    def star(self, x: "BElem") -> "BElem":
        out = self.zero()
        for m, c in x.terms.items():
            out = out + self.star_mono(m) * c
        return out

    def relations(self, e):
        """The four defining relations evaluated on e = {i: element}; zero iff they hold."""
        F = self.F
        q = F.q
        return [
            (q * q + 1) * e[-1] * e[1] + e[0] * e[0] + (F.one / (q * q) + 1) * e[1] * e[-1] - self.rho,
            -q * q * e[-1] * e[0] + e[0] * e[-1] - self.lam * e[-1],
            (q * q + 1) * e[-1] * e[1] - (q * q - 1) * e[0] * e[0] - (q * q + 1) * e[1] * e[-1] - self.lam * e[0],
            -q * q * e[0] * e[1] + e[1] * e[0] - self.lam * e[1],
        ]


def word_of(m):
    i, j, k = m
    return [-1] * i + [0] * j + [1] * k


class BElem:
    """Element of abstract B_c as dict normal word -> scalar."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: PodlesAlgebra, terms: dict):
        self.alg = alg
        self.terms = terms

    def _lift(self, y):
        if isinstance(y, BElem):
            return y
        s = self.alg.F.coerce(y)
        return BElem(self.alg, {(0, 0, 0): s} if s else {})

    def __add__(self, y):
        y = self._lift(y)
        out = dict(self.terms)
        for m, c in y.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return BElem(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return BElem(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, y):
        return self + (-self._lift(y))

    def __rsub__(self, y):
        return (-self) + y

    def __mul__(self, y):
        if isinstance(y, BElem):
            out = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in y.terms.items():
                    s = c1 * c2
                    self.alg._acc(out, self.alg.mono_mul(m1, m2), s)
            return BElem(self.alg, {m: v for m, v in out.items() if v})
        s = self.alg.F.coerce(y)
        if not s:
            return self.alg.zero()
        return BElem(self.alg, {m: c * s for m, c in self.terms.items()})

    def __rmul__(self, s):
        return self * s

    def __pow__(self, n):
        r = self.alg.one()
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, y):
        return self.terms == self._lift(y).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def __repr__(self):
        return render_terms(self.terms, bmono_str, bmono_key)

    __str__ = __repr__


# ---------------------------------------------------------------------------
# characters

def rho_lambda(am1, a0, a1, F=QP):
    """(rho, lam) forced by the counit values when a0 != 0."""
    am1, a0, a1 = F.coerce(am1), F.coerce(a0), F.coerce(a1)
    q = F.q
    if not a0:
        raise ValueError("a0 = 0: rho, lam are not determined by the character")
    lam = (1 - q * q) * a0
    rho = (q + F.one / q) ** 2 * am1 * a1 + a0 * a0
    return rho, lam


@dataclass
class CharacterBranch:
    """Solution set of the counit image of the relations."""

    condition: str
    alphas: tuple | None
    constraint: str
    degenerate: bool = False


def admissible_characters(rho, lam, F=QP):
    """All characters (a-1, a0, a1) of B_c, as a case split."""
    rho, lam = F.coerce(rho), F.coerce(lam)
    q = F.q
    out = []
    qq = (q + F.one / q) ** 2
    # a0 != 0 forces lam = (1 - q^2) a0
    a0 = lam / (1 - q * q)
    if a0:
        out.append(CharacterBranch(
            "a0 != 0", (None, a0, None),
            f"a0 = {render_scalar(a0)}, a-1*a1 = {render_scalar((rho - a0 * a0) / qq)}"))
    # a0 = 0: lam a-1 = lam a1 = 0
    if lam:
        if not rho:
            out.append(CharacterBranch("a0 = 0, lam != 0", (F.zero, F.zero, F.zero),
                                       "a-1 = a0 = a1 = 0", True))
    else:
        out.append(CharacterBranch(
            "a0 = 0, lam = 0", (None, F.zero, None),
            f"a-1*a1 = {render_scalar(rho / qq)}", not rho))
    return out


def is_admissible(rho, lam, am1, a0, a1, F=QP) -> bool:
    rho, lam = F.coerce(rho), F.coerce(lam)
    am1, a0, a1 = F.coerce(am1), F.coerce(a0), F.coerce(a1)
    q = F.q
    eqs = [
        (q * q + 2 + F.one / (q * q)) * am1 * a1 + a0 * a0 - rho,
        ((1 - q * q) * a0 - lam) * am1,
        (-(q * q - 1) * a0 - lam) * a0,
        ((1 - q * q) * a0 - lam) * a1,
    ]
    return all(not e for e in eqs)


# ---------------------------------------------------------------------------
# spin-1 corepresentation and its gauge

def _readoff(alg: SLq2, basis):
    """pi with Delta(w_i) = sum_j w_j (x) pi[j][i] for single-monomial basis elements."""
    idx = {}
    scal = {}
    for j, x in enumerate(basis):
        (m, c), = x.terms.items()
        idx[m] = j
        scal[m] = c
    n = len(basis)
    pi = [[alg.zero() for _ in range(n)] for _ in range(n)]
    for i, x in enumerate(basis):
        for (m1, m2), cf in x.coproduct().terms.items():
            if m1 not in idx:
                raise EmbeddingError("reference span is not a subcomodule")
            j = idx[m1]
            pi[j][i] = pi[j][i] + alg.mono(m2, cf / scal[m1])
    return pi


def reference_spin1(alg: SLq2):
    """Spin-1 corepresentation on span{a^2, ab, b^2} (right weights 2, 0, -2)."""
    a, b, c, d = alg.gens()
    return _readoff(alg, [a * a, a * b, b * b])


@functools.lru_cache(maxsize=None)
def _solve_normalization():
    """Solve for the orientation and diagonal gauge of the spin-1 matrix.

    Works over Q(p, s, t, a-1, a0, a1): e_i = sum_j alpha_j k_j^-1 pi_ref k_i
    with k = (s, 1, t).  The orientation is the one making the two
    weight-shift relations hold identically; the product s*t comes from the
    remaining relations and the ratio from f(e_i^+) = 0.
    Returns (orientation, k_-1, k_1) with k values in Q(p).
    """
    from .rform import Functionals
    G = ParamField(["s", "t", "am", "a0", "ap"])
    A = SLq2(G)
    pi = reference_spin1(A)
    s, t, am, a0, ap = (G.sym(n) for n in ("s", "t", "am", "a0", "ap"))
    alpha = {-1: am, 0: a0, 1: ap}
    kap = {-1: s, 0: G.one, 1: t}
    q = G.q
    lam = (1 - q * q) * a0
    rho = (q + 1 / q) ** 2 * am * ap + a0 * a0
    B = PodlesAlgebra(rho, lam, G)
    chosen = None
    for col in ({-1: 2, 0: 1, 1: 0}, {-1: 0, 0: 1, 1: 2}):
        e = {i: sum((pi[col[j]][col[i]] * (alpha[j] / kap[j] * kap[i]) for j in IDX), A.zero()) for i in IDX}
        rels = B.relations(e)
        if rels[1].is_zero() and rels[3].is_zero():
            chosen = (col, e, rels)
            break
    if chosen is None:
        raise EmbeddingError("no orientation satisfies the weight-shift relations")
    col, e, rels = chosen
    g = None
    for rel in (rels[0], rels[2]):
        for v in rel.terms.values():
            g = v.num if g is None else g.gcd(v.num)
    st_factor = _pick_factor(g, G, "s")
    s_val = _solve_linear_in(st_factor, G, "s")           # s as function of t
    e = {i: NCPoly(A, {m: c.subs("s", s_val) for m, c in e[i].terms.items()}) for i in IDX}
    e = {i: NCPoly(A, {m: c for m, c in x.terms.items() if c}) for i, x in e.items()}
    f = Functionals(A).build_filter(am, a0, ap)
    g = None
    for i in IDX:
        v = f(e[i].plus())
        if v:
            g = v.num if g is None else g.gcd(v.num)
    t_factor = _pick_factor(g, G, "t")
    t_val = _solve_linear_in(t_factor, G, "t")
    s_val = s_val.subs("t", t_val)
    return col, G.to_qhalf(s_val), G.to_qhalf(t_val)


def _pick_factor(g, G, var):
    """The unique irreducible factor of g that involves ``var``."""
    if g is None:
        raise EmbeddingError(f"no condition found for {var}")
    idx = G.names.index(var) + 1
    facs = [f for f, _ in g.factor()[1] if f.degrees()[idx] > 0]
    if len(facs) != 1:
        raise EmbeddingError(f"gauge condition for {var} is not unique: {facs}")
    return facs[0]


def _solve_linear_in(poly, G, var):
    """Solve poly = 0 for ``var`` (poly must be linear in it) as a RatFun."""
    idx = G.names.index(var) + 1
    if poly.degrees()[idx] != 1:
        raise EmbeddingError(f"condition is not linear in {var}")
    c1 = G.ctx.from_dict({})
    c0 = G.ctx.from_dict({})
    for ex, cf in poly.to_dict().items():
        mono = G.ctx.from_dict({tuple(0 if k == idx else ex[k] for k in range(len(ex))): cf})
        if ex[idx] == 1:
            c1 += mono
        else:
            c0 += mono
    from .qfield import RatFun
    return RatFun(G, -c0, c1)


def spin1_matrix(alg: SLq2):
    """Normalized spin-1 corepresentation pi[j][i] indexed by j, i in (-1, 0, 1)."""
    col, km, kp = _solve_normalization()
    F = alg.F
    kap = {-1: F.from_qhalf(km), 0: F.one, 1: F.from_qhalf(kp)}
    ref = reference_spin1(alg)
    return {(j, i): ref[col[j]][col[i]] * (kap[i] / kap[j]) for j in IDX for i in IDX}


# ---------------------------------------------------------------------------
# embedding

class Embedding:
    """B_c inside A: images of e_i, spin-1 matrix, abstract coaction."""

    def __init__(self, alg: SLq2, alphas, pi=None):
        self.alg = alg
        F = alg.F
        self.alpha = {i: F.coerce(v) for i, v in zip(IDX, alphas)}
        if all(not v for v in self.alpha.values()):
            raise EmbeddingError("all counit values vanish")
        self.pi = pi if pi is not None else spin1_matrix(alg)
        self.e = {i: sum((self.pi[(j, i)] * self.alpha[j] for j in IDX if self.alpha[j]), alg.zero())
                  for i in IDX}
        if self.alpha[0]:
            self.rho, self.lam = rho_lambda(*[self.alpha[i] for i in IDX], F)
        else:
            q = F.q
            self.lam = F.zero
            self.rho = (q + F.one / q) ** 2 * self.alpha[-1] * self.alpha[1]
        self.B = PodlesAlgebra(self.rho, self.lam, F)
        self._img = {}
        self._piw = {}
        self._cop = {}

    @property
    def F(self):
        return self.alg.F

    @property
    def c(self):
        a = self.alpha
        return a[-1] * a[1] / (a[0] ** 2)

    def image_mono(self, m) -> NCPoly:
        r = self._img.get(m)
        if r is None:
            if m == (0, 0, 0):
                r = self.alg.one()
            else:
                i, j, k = m
                if k:
                    r = self.image_mono((i, j, k - 1)) * self.e[1]
                elif j:
                    r = self.image_mono((i, j - 1, 0)) * self.e[0]
                else:
                    r = self.image_mono((i - 1, 0, 0)) * self.e[-1]
            self._img[m] = r
        return r

    def eps_mono(self, m):
        i, j, k = m
        a = self.alpha
        return a[-1] ** i * a[0] ** j * a[1] ** k

    def eps(self, x: BElem):
        return sum((c * self.eps_mono(m) for m, c in x.terms.items()), self.F.zero)

    def plus_mono(self, m) -> dict:
        """Normal-word vector of m - eps(m)."""
        out = {m: self.F.one}
        if m != (0, 0, 0):
            e = self.eps_mono(m)
            if e:
                out[(0, 0, 0)] = -e
        else:
            out = {}
        return out

    def image(self, x: BElem) -> NCPoly:
        out = self.alg.zero()
        for m, c in x.terms.items():
            out = out + self.image_mono(m) * c
        return out

    def pi_word(self, J, I) -> NCPoly:
        """pi[j1][i1] ... pi[jn][in] for index words J, I."""
        key = (J, I)
        r = self._piw.get(key)
        if r is None:
            if not I:
                r = self.alg.one()
            else:
                r = self.pi_word(J[:-1], I[:-1]) * self.pi[(J[-1], I[-1])]
            self._piw[key] = r
        return r

    def coaction_word(self, I):
        """Delta(e_I) = sum_J e_J (x) pi_J^I as list of (J, pi-product), nonzero terms only."""
        out = []
        for J in itertools.product(IDX, repeat=len(I)):
            P = self.pi_word(J, tuple(I))
            if not P.is_zero():
                out.append((J, P))
        return out

    def coaction_mono(self, m):
        """Delta of a normal word as dict normal-word -> NCPoly (right legs)."""
        r = self._cop.get(m)
        if r is None:
            acc = {}
            for J, P in self.coaction_word(tuple(word_of(m))):
                red = self.B.pbw_reduce(J)
                for mm, c in red.terms.items():
                    v = acc.get(mm)
                    acc[mm] = P * c if v is None else v + P * c
            r = {mm: v for mm, v in acc.items() if not v.is_zero()}
            self._cop[m] = r
        return r

    def check(self):
        """Exact verification of the defining properties; returns dict name -> bool."""
        e = self.e
        rels = self.B.relations(e)
        ok_rel = all(r.is_zero() for r in rels)
        ok_coideal = True
        for i in IDX:
            lhs = e[i].coproduct()
            rhs = None
            for j in IDX:
                t = _tensor(e[j], self.pi[(j, i)])
                rhs = t if rhs is None else rhs + t
            ok_coideal &= lhs == rhs
        ok_counit = all(e[i].counit() == self.alpha[i] for i in IDX)
        return {"relations": ok_rel, "coideal": ok_coideal, "counit": ok_counit}

    def render(self):
        return {LETTER[i]: str(self.e[i]) for i in IDX}


def _tensor(x: NCPoly, y: NCPoly):
    from .ncpoly import TensorElem
    return TensorElem(x.alg, 2, {(m1, m2): c1 * c2 for m1, c1 in x.terms.items()
                                 for m2, c2 in y.terms.items() if c1 * c2})


def find_embedding(am1, a0, a1, alg: SLq2 | None = None, rho=None, lam=None) -> Embedding:
    """Embedding with counit values (a-1, a0, a1); verified before returning."""
    alg = alg or SLq2(QP)
    F = alg.F
    if rho is not None and lam is not None:
        if not is_admissible(rho, lam, am1, a0, a1, F):
            raise EmbeddingError("counit values are not a character for the given rho, lam")
    E = Embedding(alg, (am1, a0, a1))
    chk = E.check()
    if not all(chk.values()):
        raise EmbeddingError(f"embedding check failed: {chk}")
    return E


# ---------------------------------------------------------------------------
# gauges for the special values of c

def c_minus():
    """c = -q/(q+1)^2."""
    q = QP.q
    return -q / (q + 1) ** 2


def c_plus():
    """c = q/(-q+1)^2."""
    q = QP.q
    return q / (1 - q) ** 2


PRESET_ALPHAS = {
    # name: (alphas, c) ; alpha0 = 1 throughout
    "c-": lambda q: (1 / (q * q - 1), QHalf(1), -q * (q - 1) / (q + 1)),
    "c+": lambda q: (1 / (q * q - 1), QHalf(1), q * (q + 1) / (q - 1)),
    "c2": lambda q: (1 / (q ** 4 + 1), QHalf(1), -q ** 4 / (q ** 4 + 1)),
    "c1": lambda q: (1 / (q * q + 1), QHalf(1), -q * q / (q * q + 1)),
    "c0": lambda q: (QHalf(0), QHalf(1), QHalf(0)),
    "c0m": lambda q: (QHalf(1), QHalf(1), QHalf(0)),
    "c0p": lambda q: (QHalf(0), QHalf(1), QHalf(1)),
}


def preset_alphas(name: str):
    return PRESET_ALPHAS[name](QP.q)


def alphas_for_c(c):
    """Default gauge (c, 1, 1) for a generic value of c."""
    c = QP.coerce(c)
    return (c, QHalf(1), QHalf(1))


# ---------------------------------------------------------------------------
# the x1, x2 subalgebra

def xy_subalgebra(E: Embedding, sign=1):
    """x1 = m1 a + m2 c, x2 = m1 b + m2 d with x1 x2 - q x2 x1 = 1.

    Requires c = -q/(q+1)^2 (sign=+1).  The ratio m1/m2 is fixed by the
    counit values; m1^2 must be a square in the field, which the preset
    gauge arranges (m1 = 1 there).
    """
    alg = E.alg
    F = alg.F
    q = F.q
    a, b, c, d = alg.gens()
    al = E.alpha
    if sign != 1:
        raise ValueError("the q -> -q variant does not live in O(SL_q(2)) over Q(p)")
    if E.c != -q / (q + 1) ** 2:
        raise ValueError("xy subalgebra needs c = -q/(q+1)^2")
    ratio = (q + 1) * al[1] / (q * al[0])          # m1/m2
    m1sq = ratio / (1 - q)                          # m1 m2 = 1/(1-q)
    m1 = _sqrt(m1sq, F)
    if m1 is None:
        raise ValueError("choose counit values making eps(x1)^2 a square")
    m2 = m1 / ratio
    x1 = a * m1 + c * m2
    x2 = b * m1 + d * m2
    return x1, x2


def _sqrt(x, F):
    if isinstance(x, QHalf):
        from flint import fmpq_poly
        n, d = x.num, x.den
        rn = _poly_sqrt(n)
        rd = _poly_sqrt(d)
        if rn is None or rd is None:
            return None
        return QHalf(rn, rd)
    try:
        from flint import fmpq
        if isinstance(x, fmpq):
            import math
            a, b = int(x.p), int(x.q)
            if a < 0:
                return None
            ra, rb = math.isqrt(a), math.isqrt(b)
            if ra * ra == a and rb * rb == b:
                return fmpq(ra, rb)
    except ImportError:  # pragma: no cover
        pass
    return None


def _poly_sqrt(f):
    from flint import fmpq_poly, fmpq
    if f.degree() % 2:
        return None
    c, facs = f.factor()
    r = fmpq_poly([1])
    for g, m in facs:
        if m % 2:
            return None
        r *= g ** (m // 2)
    # constant must be a rational square
    import math
    cq = fmpq(c)
    a, b = int(cq.p), int(cq.q)
    if a < 0:
        return None
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra != a or rb * rb != b:
        return None
    r = r * fmpq(ra, rb)
    return r if r * r == f else (-r if (-r) * (-r) == f else None)


def c2_pair(E: Embedding, case: str):
    """x and y for the c(2) construction, cases 'i' or 'ii' (scale x2 = b + d etc.)."""
    alg = E.alg
    F = alg.F
    q = F.q
    al = E.alpha
    a, b, c, d = alg.gens()
    if case == "i":
        rx = (q ** 4 + 1) * al[1] / (q ** 4 * al[0])
        ry = (q ** 4 + 1) * al[1] / (q * al[0])
    elif case == "ii":
        rx = (q ** 4 + 1) * al[1] / al[0]
        ry = (q ** 4 + 1) * al[1] / (q ** 5 * al[0])
    else:
        raise ValueError("case must be 'i' or 'ii'")
    x1, x2 = a * rx + c, b * rx + d
    y1, y2 = a * ry + c, b * ry + d
    return (x1, x2), (y1, y2)


# ---------------------------------------------------------------------------
# spin subcomodules inside B_c

@dataclass
class SpinBasis:
    n: int
    elements: list          # BElem values, weight order -n..n
    images: list            # NCPoly images
    psi: dict               # (j, i) -> NCPoly with Delta(b_i) = sum_j b_j (x) psi[j][i]


def spin_subcomodule(E: Embedding, n: int, scales=None) -> SpinBasis:
    """Right subcomodule generated by e[-1]^n (lowest weight), weight-ordered.

    ``scales`` optionally rescales the weight vectors (list of 2n+1 field
    values).  By default each weight vector has coefficient 1 on its
    highest-degree normal word.
    """
    B = E.B
    F = E.F
    seed = B.mono((n, 0, 0))
    # left legs of the coaction of the seed
    legs = {}
    for mm, P in E.coaction_mono((n, 0, 0)).items():
        for am, c in P.terms.items():
            legs.setdefault(am, {})
            legs[am][mm] = c
    ech = Echelon(F, order=bmono_key)
    for v in legs.values():
        ech.add(v)
    if len(ech) != 2 * n + 1:
        raise EmbeddingError(f"spin-{n} subcomodule has dimension {len(ech)}")
    # weight vectors: each weight space of the span is one-dimensional
    basis = ech.basis()
    by_w = {}
    for v in basis:
        ws = {bmono_weight(m) for m in v}
        if len(ws) != 1:
            raise EmbeddingError("echelon basis vector is not weight-homogeneous")
        by_w[ws.pop()] = v
    if sorted(by_w) != list(range(-n, n + 1)):
        raise EmbeddingError("unexpected weights in spin subcomodule")
    elems = []
    for k, w in enumerate(range(-n, n + 1)):
        v = by_w[w]
        # normalize: coefficient of the highest-degree word e-1^a e1^b equals 1
        top = max(v, key=lambda m: (sum(m), m[1] == 0, m))
        s = F.one / v[top]
        if scales is not None:
            s = s * scales[k]
        elems.append(BElem(B, {m: c * s for m, c in v.items()}))
    images = [E.image(x) for x in elems]
    psi = _read_psi(E, elems)
    return SpinBasis(n, elems, images, psi)


def _read_psi(E: Embedding, elems):
    """psi[(j, i)] with Delta(b_i) = sum_j b_j (x) psi[(j, i)] via the abstract coaction."""
    F = E.F
    N = len(elems)
    # coordinates of elements in normal words
    ech = Echelon(F, order=bmono_key)
    ech.track = True
    for k, x in enumerate(elems):
        ech.add(x.terms, tag=k)
    psi = {}
    alg = E.alg
    for i, x in enumerate(elems):
        acc = {}
        for m, c in x.terms.items():
            for mm, P in E.coaction_mono(m).items():
                v = acc.get(mm)
                acc[mm] = P * c if v is None else v + P * c
        # acc: normal word -> A element; rewrite as sum_j b_j (x) psi_ji
        # by solving per A-monomial
        per_am = {}
        for mm, P in acc.items():
            for am, cc in P.terms.items():
                per_am.setdefault(am, {})[mm] = cc
        col = {j: {} for j in range(N)}
        for am, vec in per_am.items():
            vec = {m: c for m, c in vec.items() if c}
            if not vec:
                continue
            rem, combo = ech.reduce(vec, {})
            if rem:
                raise EmbeddingError("span is not a subcomodule")
            for j, cc in combo.items():
                col[j][am] = -cc
        for j in range(N):
            psi[(j, i)] = NCPoly(alg, {m: c for m, c in col[j].items() if c})
    return psi
