"""First-order differential calculi over an embedded B_c.

Every presentation realises Gamma(delta) inside a finite sum of copies of A,
as sparse vectors keyed by (component, PBW monomial of A):

* module form: V (x) A with delta(b) = chi(b_(1)) (x) b_(2) for a cocycle
  chi: B -> V over a left B-module V.  The cocycle presentation (tau, chi)
  and the ideal presentation V = B+/L are both of this form.
* gamma form: A^N with delta(a) = omega a - a omega and left action
  a.gamma^j = sum_i gamma^i Lambda_ij(a).

B_c is a right coideal, so ideals are left ideals L of B+ and the quotient
of A used for refinement is A/(A B+).  Gamma(delta) is spanned by the
vectors delta(b).a for normal words b, a; everything below is exact linear
algebra on these vectors at a truncation degree d (total e-degree of b, a).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import Echelon, PolyEchelon, make_echelon, vec_add
from .ncpoly import NCPoly, render_scalar
from .podles import BElem, Embedding, IDX, bnormal_upto, bmono_str, bmono_key, word_of
from .rform import RForm


ONE_B = (0, 0, 0)
GEN_WORD = {-1: (1, 0, 0), 0: (0, 1, 0), 1: (0, 0, 1)}


def bdeg(m) -> int:
    return sum(m)


# ---------------------------------------------------------------------------
# sparse vectors in (components) x A

def _components(v: dict) -> dict:
    comps = {}
    for (k, am), c in v.items():
        comps.setdefault(k, {})[am] = c
    return comps


def _from_components(comps: dict) -> dict:
    return {(k, am): c for k, t in comps.items() for am, c in t.items() if c}


def _acc_terms(out: dict, terms: dict, s=None):
    for m, c in terms.items():
        if s is not None:
            c = c * s
        v = out.get(m)
        if v is None:
            out[m] = c
        else:
            v = v + c
            if v:
                out[m] = v
            else:
                del out[m]


class DegreeError(ValueError):
    pass


class FODC:
    """Base class: subclasses provide delta_mono, left_mono and optionally right_mono."""

    kind = "abstract"

    def __init__(self, E: Embedding, d: int = 4, name: str = ""):
        self.E = E
        self.B = E.B
        self.alg = E.alg
        self.F = E.F
        self.d = d
        self.name = name
        self._delta = {}

    # -- mono level
    def delta_mono(self, m) -> dict:
        raise NotImplementedError

    def left_mono(self, m, v: dict) -> dict:
        raise NotImplementedError

    def right_mono(self, v: dict, m) -> dict:
        if m == ONE_B:
            return dict(v)
        img = self.E.image_mono(m).terms
        out = {}
        mm = self.alg.mul_terms
        for k, t in _components(v).items():
            for am, c in mm(t, img).items():
                out[(k, am)] = c
        return out

    def delta_cached(self, m) -> dict:
        r = self._delta.get(m)
        if r is None:
            if bdeg(m) > self.d:
                raise DegreeError(f"degree of {bmono_str(m)} exceeds truncation {self.d}")
            r = {} if m == ONE_B else self.delta_mono(m)
            self._delta[m] = r
        return r

    # -- element level
    def delta(self, x: BElem) -> dict:
        out = {}
        for m, c in x.terms.items():
            _acc_terms(out, self.delta_cached(m), c)
        return out

    def left(self, x: BElem, v: dict) -> dict:
        out = {}
        for m, c in x.terms.items():
            _acc_terms(out, self.left_mono(m, v), c)
        return out

    def right(self, v: dict, x: BElem) -> dict:
        out = {}
        for m, c in x.terms.items():
            _acc_terms(out, self.right_mono(v, m), c)
        return out

    def pair(self, b, a) -> dict:
        """delta(b).a for normal words b, a."""
        return self.right_mono(self.delta_cached(b), a)

    def describe(self) -> dict:
        return {"kind": self.kind, "name": self.name, "degree": self.d}


# ---------------------------------------------------------------------------
# module form

class ModuleFODC(FODC):
    """delta(b) = chi(b_(1)) (x) b_(2) over a left B-module V."""

    kind = "module"

    def chi_mono(self, m) -> dict:
        raise NotImplementedError

    def act_mono(self, m, w: dict) -> dict:
        raise NotImplementedError

    def delta_mono(self, m) -> dict:
        out = {}
        for m1, P in self.E.coaction_mono(m).items():
            ch = self.chi_mono(m1)
            for k, s in ch.items():
                for am, c in P.terms.items():
                    key = (k, am)
                    v = out.get(key)
                    v = c * s if v is None else v + c * s
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return out

    def left_mono(self, m, v: dict) -> dict:
        if m == ONE_B:
            return dict(v)
        comps = _components(v)
        out = {}
        mm = self.alg.mul_terms
        for m1, P in self.E.coaction_mono(m).items():
            for k, t in comps.items():
                w = self.act_mono(m1, {k: self.F.one})
                if not w:
                    continue
                prod = mm(P.terms, t)
                for k2, s in w.items():
                    for am, c in prod.items():
                        key = (k2, am)
                        x = out.get(key)
                        x = c * s if x is None else x + c * s
                        if x:
                            out[key] = x
                        else:
                            out.pop(key, None)
        return out


def _matvec(M, v):
    n = len(M)
    return [sum((M[i][j] * v[j] for j in range(len(v)) if M[i][j] and v[j]), v[0] * 0) for i in range(n)]


def _matmul(X, Y, F):
    n, k, m = len(X), len(Y), len(Y[0])
    return [[sum((X[i][t] * Y[t][j] for t in range(k)), F.zero) for j in range(m)] for i in range(n)]


class CocycleFODC(ModuleFODC):
    """Cocycle presentation: tau on generators (n x n) and chi on generators (n-vectors)."""

    kind = "cocycle"

    def __init__(self, E, tau: dict, chi: dict, d=4, name=""):
        super().__init__(E, d, name)
        F = self.F
        self.tau = {i: [[F.coerce(x) for x in row] for row in tau[i]] for i in IDX}
        self.chi = {i: [F.coerce(x) for x in chi[i]] for i in IDX}
        self.n = len(self.chi[-1])
        self._tau_m = {}
        self._chi_m = {}

    def tau_mono(self, m):
        r = self._tau_m.get(m)
        if r is None:
            F = self.F
            r = [[F.one if i == j else F.zero for j in range(self.n)] for i in range(self.n)]
            for g in word_of(m):
                r = _matmul(r, self.tau[g], F)
            self._tau_m[m] = r
        return r

    def tau_elem(self, x: BElem):
        F = self.F
        out = [[F.zero] * self.n for _ in range(self.n)]
        for m, c in x.terms.items():
            T = self.tau_mono(m)
            out = [[out[i][j] + c * T[i][j] for j in range(self.n)] for i in range(self.n)]
        return out

    def chi_vec(self, m):
        """chi on a normal word as a dense list."""
        r = self._chi_m.get(m)
        if r is None:
            F = self.F
            w = word_of(m)
            if not w:
                r = [F.zero] * self.n
            else:
                g, rest = w[0], w[1:]
                mr = (rest.count(-1), rest.count(0), rest.count(1))
                # rest of a normal word is again a normal word
                cr = self.chi_vec(mr)
                Tg = self.tau[g]
                er = self.E.eps_mono(mr)
                r = [sum((Tg[i][k] * cr[k] for k in range(self.n)), F.zero) + self.chi[g][i] * er
                     for i in range(self.n)]
            self._chi_m[m] = r
        return r

    def chi_elem(self, x: BElem):
        F = self.F
        out = [F.zero] * self.n
        for m, c in x.terms.items():
            v = self.chi_vec(m)
            out = [out[i] + c * v[i] for i in range(self.n)]
        return out

    def chi_mono(self, m) -> dict:
        return {i: x for i, x in enumerate(self.chi_vec(m)) if x}

    def act_mono(self, m, w: dict) -> dict:
        T = self.tau_mono(m)
        out = {}
        for k, s in w.items():
            for i in range(self.n):
                if T[i][k]:
                    v = out.get(i)
                    out[i] = T[i][k] * s if v is None else v + T[i][k] * s
        return {i: x for i, x in out.items() if x}

    def relation_check(self):
        """tau and chi respect the defining relations (checked on the four relation elements)."""
        B = self.B
        e = {i: B.gen(i) for i in IDX}
        ok = True
        for rel in B.relations(e):
            T = self.tau_elem(rel)
            ok &= all(not x for row in T for x in row)
            ok &= all(not x for x in self.chi_elem(rel))
        return ok

    def describe(self):
        d = super().describe()
        d["tau"] = {f"e[{i}]": [[render_scalar(x) for x in row] for row in self.tau[i]] for i in IDX}
        d["chi"] = {f"e[{i}]": [render_scalar(x) for x in self.chi[i]] for i in IDX}
        return d


class RFormCocycleFODC(ModuleFODC):
    """chi_i(b) = r(b_i (x) b) - eps(b_i) eps(b), tau_ij(a) = r(psi[j][i] (x) a) for a spin basis."""

    kind = "rform-cocycle"

    def __init__(self, E, basis, psi, use_prime=False, d=4, name=""):
        super().__init__(E, d, name)
        self.r = RForm(self.alg)
        self.basis = basis
        self.psi = psi
        self.n = len(basis)
        self.use_prime = use_prime
        self._tau = {}
        self._chi = {}

    def _r(self, x, y):
        return self.r.prime(x, y) if self.use_prime else self.r(x, y)

    def tau_mono(self, m):
        T = self._tau.get(m)
        if T is None:
            img = self.E.image_mono(m)
            T = [[self._r(self.psi[(j, i)], img) for j in range(self.n)] for i in range(self.n)]
            self._tau[m] = T
        return T

    def chi_mono(self, m):
        r = self._chi.get(m)
        if r is None:
            img = self.E.image_mono(m)
            em = self.E.eps_mono(m)
            r = {}
            for i, x in enumerate(self.basis):
                v = self._r(x, img) - x.counit() * em
                if v:
                    r[i] = v
            self._chi[m] = r
        return r

    def act_mono(self, m, w):
        T = self.tau_mono(m)
        out = {}
        for k, s in w.items():
            for i in range(self.n):
                if T[i][k]:
                    v = out.get(i)
                    out[i] = T[i][k] * s if v is None else v + T[i][k] * s
        return {i: x for i, x in out.items() if x}


# ---------------------------------------------------------------------------
# ideals

class IdealTrunc:
    """Left ideal L of B+ truncated at degree d, kept as one echelon basis.

    Pivots are highest-degree normal words, so the rows with pivot degree
    <= k span L intersected with B_{<=k}.
    """

    def __init__(self, E: Embedding, d: int):
        self.E = E
        self.B = E.B
        self.F = E.F
        self.d = d
        self.ech = Echelon(self.F, order=lambda m: (-bdeg(m), m))

    @classmethod
    def from_vectors(cls, E, vectors, d):
        L = cls(E, d)
        for v in vectors:
            if any(bdeg(m) > d for m in v):
                continue
            L.ech.add(v)
        L._check_aug()
        return L

    @classmethod
    def generated(cls, E, gens, d):
        """Left ideal generated by BElem generators, truncated at degree d."""
        L = cls(E, d)
        B = E.B
        for g in gens:
            dg = g.degree()
            for x in bnormal_upto(d - dg):
                v = (B.mono(x) * g).terms
                if v and max(bdeg(m) for m in v) <= d:
                    L.ech.add(v)
        L._check_aug()
        return L

    @classmethod
    def augmentation(cls, E, d):
        """L = B+ (all counit-zero elements)."""
        return cls.from_vectors(E, [E.plus_mono(m) for m in bnormal_upto(d) if m != ONE_B], d)

    @classmethod
    def zero(cls, E, d):
        return cls(E, d)

    @classmethod
    def augmentation_square(cls, E, d):
        """(B+)^2 spanned by products of augmentation elements."""
        B = E.B
        vecs = []
        plus = {m: BElem(B, E.plus_mono(m)) for m in bnormal_upto(d) if m != ONE_B}
        for m1, x in plus.items():
            for m2, y in plus.items():
                if bdeg(m1) + bdeg(m2) <= d:
                    vecs.append((x * y).terms)
        return cls.from_vectors(E, vecs, d)

    def _check_aug(self):
        for v in self.ech.rows.values():
            if self.E.eps(BElem(self.B, v)):
                raise ValueError("ideal generator with nonzero counit")

    def level(self, k):
        return [r for p, r in self.ech.rows.items() if bdeg(p) <= k]

    def dims(self):
        return [len(self.level(k)) for k in range(self.d + 1)]

    def contains(self, v: dict) -> bool:
        return self.ech.contains(v)

    def reduce(self, v: dict) -> dict:
        return self.ech._fully_reduce(dict(v))

    def subset_of(self, other: "IdealTrunc", k=None) -> bool:
        k = self.d if k is None else k
        return all(other.contains(r) for r in self.level(k))

    def equals(self, other, k=None):
        return self.subset_of(other, k) and other.subset_of(self, k)

    def basis_strings(self):
        from .ncpoly import render_terms
        out = {}
        for k in range(self.d + 1):
            out[k] = [render_terms(r, bmono_str, bmono_key) for r in self.level(k) if
                      max(bdeg(m) for m in r) == k]
        return out


class IdealFODC(ModuleFODC):
    """delta(b) = p(b_(1)^+) (x) b_(2) with V = B+/L realised by reduction modulo L."""

    kind = "ideal"

    def __init__(self, L: IdealTrunc, d=None, name=""):
        super().__init__(L.E, L.d if d is None else d, name)
        self.L = L

    def chi_mono(self, m):
        return self.L.reduce(self.E.plus_mono(m))

    def act_mono(self, m, w):
        x = BElem(self.B, w)
        return self.L.reduce((self.B.mono(m) * x).terms)


def derivation_from_ideal(L: IdealTrunc, name="") -> IdealFODC:
    return IdealFODC(L, name=name)


# ---------------------------------------------------------------------------
# gamma form

class GammaFODC(FODC):
    """Gamma = sum gamma^i A, omega = sum gamma^i b_i, delta a = omega a - a omega.

    ``lam(m)`` returns the N x N matrix Lambda(m) of A elements with
    a.gamma^j = sum_i gamma^i Lambda_ij(a) for the normal word m.
    """

    kind = "gamma"

    def __init__(self, E, bvec, lam, d=4, name=""):
        super().__init__(E, d, name)
        self.bvec = bvec
        self.N = len(bvec)
        self._lam_fn = lam
        self._lam = {}

    def lam(self, m):
        r = self._lam.get(m)
        if r is None:
            r = self._lam_fn(m)
            self._lam[m] = r
        return r

    def omega(self) -> dict:
        return {(i, am): c for i, b in enumerate(self.bvec) for am, c in b.terms.items()}

    def left_mono(self, m, v):
        if m == ONE_B:
            return dict(v)
        Lm = self.lam(m)
        comps = _components(v)
        out = {}
        mm = self.alg.mul_terms
        for i in range(self.N):
            acc = {}
            for j, t in comps.items():
                if not Lm[i][j].is_zero():
                    _acc_terms(acc, mm(Lm[i][j].terms, t))
            for am, c in acc.items():
                out[(i, am)] = c
        return out

    def delta_mono(self, m):
        om = self.omega()
        out = self.right_mono(om, m)
        _acc_terms(out, self.left_mono(m, om), self.F.coerce(-1))
        return out


def rmatrix_lambda(E: Embedding, psi, use_prime=False):
    """Lambda_ij(a) = sum a_(1) r(psi[j][i] (x) a_(2)) (nu = id), r or r'."""
    alg = E.alg
    r = RForm(alg)
    N = int(round(len(psi) ** 0.5))

    def rr(x, y):
        return r.prime(x, y) if use_prime else r(x, y)

    def lam(m):
        img = E.image_mono(m)
        cop = img.coproduct().terms
        out = [[alg.zero() for _ in range(N)] for _ in range(N)]
        for i in range(N):
            for j in range(N):
                acc = {}
                p = psi[(j, i)]
                for (m1, m2), c in cop.items():
                    s = rr(p, alg.mono(m2))
                    if s:
                        _acc_terms(acc, {m1: c * s})
                out[i][j] = NCPoly(alg, acc)
        return out

    return lam


def tau_lambda(E: Embedding, tau_mono):
    alg = E.alg

    def lam(m):
        T = tau_mono(m)
        return [[alg.scalar(x) if x else alg.zero() for x in row] for row in T]

    return lam


# ---------------------------------------------------------------------------
# star

class StarFODC(FODC):
    """delta*: delta*(b) = delta(b*), right action = old left action by c*, and vice versa."""

    kind = "star"

    def __init__(self, D: FODC, name=""):
        super().__init__(D.E, D.d, name or f"star({D.name})")
        self.D = D

    def delta_mono(self, m):
        return self.D.delta(self.B.star_mono(m))

    def right_mono(self, v, m):
        return self.D.left(self.B.star_mono(m), v)

    def left_mono(self, m, v):
        return self.D.right(v, self.B.star_mono(m))


def star_derivation(D: FODC) -> FODC:
    if isinstance(D, StarFODC):
        return D.D
    return StarFODC(D)


# ---------------------------------------------------------------------------
# generic checks

def pairs(d: int):
    """Normal-word pairs (b, a), b != 1, deg b + deg a <= d."""
    words = bnormal_upto(d)
    return [(b, a) for b in words if b != ONE_B for a in words if bdeg(b) + bdeg(a) <= d]


def leibniz_check(D: FODC, x: BElem, y: BElem) -> bool:
    lhs = D.delta(x * y)
    rhs = D.left(x, D.delta(y))
    _acc_terms(rhs, D.right(D.delta(x), y))
    return lhs == rhs


def _rank(F, vectors) -> int:
    ech = make_echelon(F)
    for v in vectors:
        ech.add(v)
    return len(ech)


@dataclass
class DimResult:
    side: str
    value: int
    d: int
    stable: bool
    by_level: dict = field(default_factory=dict)

    def as_dict(self):
        return {"side": self.side, "value": self.value, "degree": self.d,
                "stable": self.stable, "by_level": self.by_level}


def _dim_right(D: FODC, d: int) -> int:
    # dim (U + Q)/Q with U = span{delta b : deg b < d} and
    # Q = span{delta b . a+ : deg b + deg a <= d}
    ech = make_echelon(D.F)
    for b, a in pairs(d):
        if a == ONE_B:
            continue
        v = D.pair(b, a)
        e = D.E.eps_mono(a)
        if e:
            v = vec_add(v, D.delta_cached(b), -e)
        ech.add(v)
    q = len(ech)
    for b in bnormal_upto(d - 1):
        if b != ONE_B:
            ech.add(D.delta_cached(b))
    return len(ech) - q


def _dim_left(D: FODC, d: int) -> int:
    # dim (G + P)/P with G = span{delta b . a : total degree <= d - 1} and
    # P = span{c+ . (delta b . a) : total degree <= d + 1}
    top = d + 1
    ech = make_echelon(D.F)
    gens = {(b, a): D.pair(b, a) for b, a in pairs(top)}
    for (b, a), v in gens.items():
        for c in bnormal_upto(top - bdeg(b) - bdeg(a)):
            if c == ONE_B:
                continue
            w = D.left_mono(c, v)
            e = D.E.eps_mono(c)
            if e:
                w = vec_add(w, v, -e)
            ech.add(w)
    p = len(ech)
    for (b, a), v in gens.items():
        if bdeg(b) + bdeg(a) <= d - 1:
            ech.add(v)
    return len(ech) - p


def dims(D: FODC, side: str, d: int | None = None) -> DimResult:
    """dim Gamma/(Gamma B+) (right) or dim Gamma/(B+ Gamma) (left) at truncation d.

    On both sides the generators are the delta(b).a of total degree <= d - 1.
    Right relations delta(b).a+ have degree <= d.  Left relations c+ . g reach
    degree d + 1, since inverting the action of e_0 on a generator needs
    deg c = 2; the left side therefore needs D built with truncation d + 1.
    The value is reported stable when truncations d - 1 and d agree.
    """
    if d is None:
        d = D.d if side == "right" else D.d - 1
    fn = {"right": _dim_right, "left": _dim_left}[side]
    vals = {k: fn(D, k) for k in (d - 1, d)}
    return DimResult(side, vals[d], d, vals[d - 1] == vals[d], vals)


def _field_rows(ech, F):
    return ech.field_rows(F) if isinstance(ech, PolyEchelon) else ech.rows


def _tagged(v, tag):
    return {(tag, k): c for k, c in v.items()}


def leq_check(D1: FODC, D2: FODC, d: int | None = None) -> bool:
    """D1 <= D2: every relation among the delta2(b).a is a relation among the delta1(b).a."""
    d = min(D1.d, D2.d) if d is None else d
    ech = make_echelon(D1.F)
    for b, a in pairs(d):
        v = _tagged(D2.pair(b, a), 0)
        v.update(_tagged(D1.pair(b, a), 1))
        ech.add(v)
    return all(p[0] == 0 for p in ech.rows)


def equal_check(D1, D2, d=None) -> bool:
    return leq_check(D1, D2, d) and leq_check(D2, D1, d)


def equivariance_check(D: FODC, d: int | None = None) -> bool:
    """Well-definedness of delta(b).a -> sum delta(b_(1)).a_(1) (x) b_(2) a_(2)."""
    d = D.d if d is None else d
    E = D.E
    mm = D.alg.mul_terms
    ech = make_echelon(D.F)
    for b, a in pairs(d):
        row = _tagged(D.pair(b, a), 0)
        img = {}
        cb = E.coaction_mono(b)
        ca = E.coaction_mono(a) if a != ONE_B else {ONE_B: D.alg.one()}
        for m1, P in cb.items():
            if m1 == ONE_B:
                continue
            for n1, Q in ca.items():
                w = D.pair(m1, n1)
                if not w:
                    continue
                PQ = mm(P.terms, Q.terms)
                for k, s in w.items():
                    for am, c in PQ.items():
                        key = (1, k, am)
                        x = img.get(key)
                        x = s * c if x is None else x + s * c
                        if x:
                            img[key] = x
                        else:
                            img.pop(key, None)
        row.update(img)
        ech.add(row)
    return all(p[0] == 0 for p in ech.rows)


def ideal_from_derivation(D: FODC, d: int | None = None, side: str = "left") -> IdealTrunc:
    """L_delta = { sum eps(a_k) b_k+ : sum delta(b_k).a_k = 0 } at truncation d.

    side="right" gives instead R_delta = { sum eps(a_k) b_k+ : sum a_k.delta(b_k) = 0 },
    the ideal attached to delta when B_c is read as a left coideal of the
    coopposite Hopf algebra.
    """
    d = D.d if d is None else d
    E = D.E
    ech = make_echelon(D.F, order=lambda k: (k[0],) + ((-bdeg(k[1]), k[1]) if k[0] == 1 else (k[1],)))
    for b, a in pairs(d):
        v = D.pair(b, a) if side == "left" else D.left_mono(a, D.delta_cached(b))
        row = {(0, k): c for k, c in v.items()}
        e = E.eps_mono(a)
        if e:
            for m, c in E.plus_mono(b).items():
                row[(1, m)] = c * e
        if row:
            ech.add(row)
    vecs = [{k[1]: c for k, c in r.items()} for p, r in _field_rows(ech, D.F).items() if p[0] == 1]
    return IdealTrunc.from_vectors(E, vecs, d)


def abar(E: Embedding, d: int):
    """Echelon basis of A B+ truncated at A-degree 2d (pivot-based complement gives A/(A B+))."""
    from .ncpoly import pbw_upto
    alg = E.alg
    ech = Echelon(E.F, order=lambda m: (-sum(m), m))
    mm = alg.mul_terms
    for m in bnormal_upto(d):
        if m == ONE_B:
            continue
        bp = E.image(BElem(E.B, E.plus_mono(m))).terms
        for am in pbw_upto(2 * d - 2 * bdeg(m)):
            ech.add(mm({am: E.F.one}, bp))
    return ech


def refine_ideal(L: IdealTrunc, _abar=None) -> IdealTrunc:
    """L' = {b in L : Delta(b) in L (x) A + B (x) A B+} at the truncation of L."""
    E = L.E
    F = L.F
    ab = _abar or abar(E, L.d)
    basis = L.level(L.d)
    # for each basis element: map (Abar key) -> B vector modulo L
    cols = []
    for v in basis:
        img = {}
        for m, c in v.items():
            for m1, P in E.coaction_mono(m).items():
                red = ab._fully_reduce({am: x * c for am, x in P.terms.items()})
                for am, x in red.items():
                    img.setdefault(am, {})
                    _acc_terms(img[am], {m1: x})
        w = {}
        for am, bv in img.items():
            r = L.reduce(bv)
            for m1, x in r.items():
                w[(am, m1)] = x
        cols.append(w)
    # kernel of the linear map coefficient vector -> sum c_k cols[k]
    ech = make_echelon(F, order=lambda k: (k[0],) + ((k[1],) if k[0] == 1 else (k[1], k[2])))
    for idx, w in enumerate(cols):
        row = {(0,) + k: c for k, c in w.items()}
        row[(1, idx)] = F.one
        ech.add(row)
    vecs = []
    for p, r in _field_rows(ech, F).items():
        if p[0] == 1:
            acc = {}
            for k, c in r.items():
                _acc_terms(acc, basis[k[1]], c)
            vecs.append(acc)
    return IdealTrunc.from_vectors(E, vecs, L.d)


def inner_form_search(D: FODC, deg: int = 3) -> bool:
    """True iff some omega in span{delta(b).a : deg b + deg a <= deg} has
    delta(e_i) = omega e_i - e_i omega for i = -1, 0, 1 (exact consistency test)."""
    F = D.F
    gens = pairs(deg)
    rows = {}
    for kidx, (b, a) in enumerate(gens):
        v = D.pair(b, a)
        for i in IDX:
            g = GEN_WORD[i]
            w = D.right_mono(v, g)
            _acc_terms(w, D.left_mono(g, v), F.coerce(-1))
            for key, c in w.items():
                rows.setdefault((i, key), {})[(0, kidx)] = c
    for i in IDX:
        for key, c in D.delta_cached(GEN_WORD[i]).items():
            rows.setdefault((i, key), {})[(1, 0)] = c
    ech = make_echelon(F)
    for r in rows.values():
        ech.add(r)
    return (1, 0) not in ech.rows


# ---------------------------------------------------------------------------
# constructions from the r-form

def lincomb(F, *terms) -> dict:
    """sum s * v over (s, v) pairs of scalars and sparse vectors."""
    out = {}
    for s, v in terms:
        _acc_terms(out, v, F.coerce(s))
    return out


def gamma_vec(i: int, x: NCPoly) -> dict:
    """gamma^i x as a sparse vector."""
    return {(i, m): c for m, c in x.terms.items()}


def proportionality(F, u: dict, v: dict):
    """s with u = s v, or None if u is not a multiple of v (v nonzero)."""
    if not v:
        return None
    k0 = next(iter(v))
    s = u.get(k0, F.zero) / v[k0]
    return s if not lincomb(F, (1, u), (-s, v)) else None


def matrix_psi(alg):
    """psi[(j, i)] = u[j, i] for x_i in the span of u[1, i], u[2, i]."""
    return {(j, i): alg.u(j + 1, i + 1) for i in range(2) for j in range(2)}


def xy_construct(E: Embedding, d: int = 4) -> GammaFODC:
    """Gamma calculus with b_i = x_i (N = 2, nu = id) at c = -q/(q+1)^2."""
    from .podles import xy_subalgebra
    x1, x2 = xy_subalgebra(E)
    D = GammaFODC(E, [x1, x2], rmatrix_lambda(E, matrix_psi(E.alg)), d=d, name="xy")
    D.x = (x1, x2)
    return D


def xy_identities(D: GammaFODC) -> dict:
    """The closed-form delta e_i formulas and the omega-recovery identity."""
    E, F = D.E, D.F
    q, a0 = F.q, E.alpha[0]
    x1, x2 = D.x
    om = D.omega()
    g = GEN_WORD
    out = {
        "delta e[-1]": D.delta_cached(g[-1]) == lincomb(
            F, (1 - q, D.right_mono(om, g[-1])), ((q - 1) * a0 / q ** 2, gamma_vec(0, x2))),
        "delta e[0]": D.delta_cached(g[0]) == lincomb(
            F, (1 - q, D.right_mono(om, g[0])), (-(q - 1) * a0 / q ** 2, gamma_vec(0, x1)),
            ((q - 1) * a0, gamma_vec(1, x2))),
        "delta e[1]": D.delta_cached(g[1]) == lincomb(
            F, (1 - q, D.right_mono(om, g[1])), ((q - 1) * a0, gamma_vec(1, x1))),
    }
    pref = q ** 2 * (q + 1) ** 2 / ((q - 1) * (q ** 3 - 1) * a0 ** 2)
    out["omega recovery"] = om == lincomb(
        F, (pref, D.pair(g[-1], g[1])), (pref / (q ** 2 + 1), D.pair(g[0], g[0])),
        (pref / q ** 2, D.pair(g[1], g[-1])))
    return out


def family_f_tau(E: Embedding) -> dict:
    """tau of family (f) at c = c(2)."""
    F = E.F
    q = F.q
    k = (q ** 2 - 1) * E.alpha[0] / (q ** 4 + 1)
    z = F.zero
    return {-1: [[z, k], [z, z]], 0: [[-k, z], [z, q ** 2 * k]], 1: [[z, z], [q ** 2 * k, z]]}


def c2_construct(E: Embedding, case: str, d: int = 4) -> GammaFODC:
    """B_c-A bimodule with basis gamma^1, gamma^2, left action by tau of family (f), omega = sum gamma^i x_i."""
    from .podles import c2_pair
    (x1, x2), (y1, y2) = c2_pair(E, case)
    T = CocycleFODC(E, family_f_tau(E), {i: [0, 0] for i in IDX}, d=d)
    D = GammaFODC(E, [x1, x2], tau_lambda(E, T.tau_mono), d=d, name=f"c2-{case}")
    D.x, D.y, D.case, D.tau_rep = (x1, x2), (y1, y2), case, T
    return D


def c2_identities(D: GammaFODC) -> dict:
    E, F, B = D.E, D.F, D.B
    q, a0 = F.q, E.alpha[0]
    k = (q ** 2 - 1) * a0 / (q ** 4 + 1)
    x1, x2 = D.x
    y1, y2 = D.y
    om = D.omega()
    g = GEN_WORD
    out = {}
    # y_i x_j in B_c: membership of the image in the span of embedded normal words
    span = Echelon(F)
    for m in bnormal_upto(2):
        span.add(E.image_mono(m).terms)
    out["y_i x_j in B_c"] = all(span.contains((yi * xj).terms) for yi in (y1, y2) for xj in (x1, x2))
    zeta = x1 * y2 - x2 * y1 * q
    out["x1 y2 - q x2 y1 scalar"] = (not zeta.is_zero()) and set(zeta.terms) == {(0, 0, 0, 0)}
    out["delta e[-1]"] = D.delta_cached(g[-1]) == lincomb(
        F, (1, D.right_mono(om, g[-1])), (-k, gamma_vec(0, x2)))
    out["delta e[0]"] = D.delta_cached(g[0]) == lincomb(
        F, (1, D.right_mono(om, g[0])), (k, gamma_vec(0, x1)), (-q ** 2 * k, gamma_vec(1, x2)))
    out["delta e[1]"] = D.delta_cached(g[1]) == lincomb(
        F, (1, D.right_mono(om, g[1])), (-q ** 2 * k, gamma_vec(1, x1)))
    out["intertwiner"] = _c2_intertwiner(D)
    e = {i: B.gen(i) for i in IDX}
    one = B.one()
    dl, L, R = D.delta, D.left, D.right
    if D.case == "ii":
        pref = (q ** 4 + 1) ** 2 / ((q ** 2 - 1) ** 2 * (q ** 2 + 1) * a0 ** 2)
        out["omega recovery"] = om == lincomb(
            F, (pref, D.pair(g[-1], g[1])), (pref / (q ** 2 + 1), D.pair(g[0], g[0])),
            (pref / q ** 2, D.pair(g[1], g[-1])))
    else:
        kk = (q ** 2 - 1) / (q ** 4 + 1)
        h = (q ** 6 - 1) / (q ** 4 + 1) * a0
        out["relation 1"] = not lincomb(F, (q ** 2, L(e[-1], dl(e[0]))),
                                        (-1, L(e[0] - one * (q ** 2 * kk * a0), dl(e[-1]))))
        out["relation 2"] = not lincomb(F, (q ** -2, L(e[1], dl(e[0]))),
                                        (-1, L(e[0] + one * (kk * a0), dl(e[1]))))
        out["relation 3"] = not lincomb(F, (1, R(dl(e[-1]), e[0] * q ** 2 - one * h)),
                                        (-1, R(dl(e[0]), e[-1])))
        out["relation 4"] = not lincomb(F, (1, R(dl(e[1]), e[0] + one * h)),
                                        (-q ** 2, R(dl(e[0]), e[1])))
        out["relation 5"] = not lincomb(F, (q ** 2 + 1, R(dl(e[-1]), e[1])), (1, R(dl(e[0]), e[0])),
                                        (q ** -2 + 1, R(dl(e[1]), e[-1])))
    return out


def _c2_intertwiner(D) -> bool:
    """sum_m u[i,m] tau_jm(e_k) = sum_mn tau_mi(e_n) u[m,j] pi[n][k]."""
    E, alg = D.E, D.alg
    tau = D.tau_rep.tau
    for i in range(2):
        for j in range(2):
            for k in IDX:
                lhs = alg.zero()
                for m in range(2):
                    if tau[k][j][m]:
                        lhs = lhs + alg.u(i + 1, m + 1) * tau[k][j][m]
                rhs = alg.zero()
                for m in range(2):
                    for n in IDX:
                        if tau[n][m][i]:
                            rhs = rhs + alg.u(m + 1, j + 1) * E.pi[(n, k)] * tau[n][m][i]
                if lhs != rhs:
                    return False
    return True


# ---------------------------------------------------------------------------
# spin 2

SPIN2_LABELS = (-2, -1, 0, 1, 2)


def spin2_construct(E: Embedding, basis=None, prime=False, form="cocycle", d: int = 4):
    """Calculus from the spin-2 subcomodule: cocycle form chi_i(b) = r(b_i (x) b) - eps eps
    or the gamma form delta a = omega a - a omega; ``prime`` uses r' instead of r."""
    from .podles import spin_subcomodule
    S = basis or spin_subcomodule(E, 2)
    name = "spin2" + ("'" if prime else "")
    if form == "cocycle":
        D = RFormCocycleFODC(E, S.images, S.psi, use_prime=prime, d=d, name=name)
    elif form == "gamma":
        D = GammaFODC(E, S.images, rmatrix_lambda(E, S.psi, use_prime=prime), d=d, name=name)
    else:
        raise ValueError("form must be 'cocycle' or 'gamma'")
    D.spin = S
    return D


def normalize_spin2(E: Embedding, prime=True, d: int = 4):
    """Fix the scales of the spin-2 weight vectors from the construction identities.

    Each identity is linear in exactly one new weight vector, so each step is a
    proportionality test that either yields the unique scale or fails.
    Returns (SpinBasis, scales, report).
    """
    from .podles import SpinBasis, spin_subcomodule
    F, B = E.F, E.B
    q, a0 = F.q, E.alpha[0]
    S = spin_subcomodule(E, 2)
    D = spin2_construct(E, S, prime=prime, d=d)
    e = {i: B.gen(i) for i in IDX}
    one = B.one()
    dl, R = D.delta, D.right
    et = list(S.elements)
    scales, report = [], {}

    def fit(name, u, v, idx):
        s = proportionality(F, u, v)
        report[name] = s is not None
        if s is None:
            raise ValueError(f"spin-2 identity '{name}' is not a proportionality")
        et[idx] = et[idx] * s
        scales.append(s)

    u = dl(e[-1] ** 3)
    v = lincomb(F, (q ** -4 * (q ** 4 + q ** 2 + 1), R(dl(et[0]), e[-1])),
                (-q ** -6 * (q ** 4 + q ** 2 + 1), R(dl(e[-1]), et[0])))
    # the right side is linear in e~-2: u = s v
    fit("delta(e[-1]^3)", u, v, 0)
    u = lincomb(F, (q ** 4 + 1, R(dl(et[0]), e[0] * q ** 2 + one * a0)),
                (-q ** 4 * (q ** 2 + 1) * a0, R(dl(e[-1]), e[-1])))
    fit("e~-2 relation", u, R(dl(et[1]), e[-1]), 1)
    u = lincomb(F, (a0 ** 2, dl(e[-1])), (-(q ** 4 + 1) / q ** 2, R(dl(et[0]), e[1])),
                (-1 / (q ** 2 * (q ** 2 + 1)), R(dl(et[1]), e[0])))
    fit("alpha0^2 delta e[-1]", u, lincomb(F, (-1 / (q ** 2 * (q ** 4 + q ** 2 + 1)), R(dl(et[2]), e[-1]))), 2)
    u = lincomb(F, (a0 ** 2, dl(e[0])), (-1, R(dl(et[1]), e[1])),
                (-(q ** 4 - 1) / (q ** 6 - 1), R(dl(et[2]), e[0])))
    fit("alpha0^2 delta e[0]", u, lincomb(F, (q ** -4, R(dl(et[3]), e[-1]))), 3)
    u = lincomb(F, (a0 ** 2, dl(e[1])), (q ** 4 / (q ** 4 + q ** 2 + 1), R(dl(et[2]), e[1])),
                (-1 / (q ** 2 + 1), R(dl(et[3]), e[0])))
    fit("alpha0^2 delta e[1]", u, lincomb(F, ((q ** 4 + 1) / q ** 4, R(dl(et[4]), e[-1]))), 4)
    report["sum relation"] = not lincomb(F, (q ** 2 + 1, R(dl(e[-1]), e[1])), (1, R(dl(e[0]), e[0])),
                                         (q ** -2 + 1, R(dl(e[1]), e[-1])))
    report["e[-1] e[0] relation"] = not lincomb(F, (1, R(dl(e[-1]), e[0] * q ** 2 + one * a0)),
                                                (-1, R(dl(e[0]), e[-1])))
    S2 = SpinBasis(2, et, [E.image(x) for x in et], None)
    S2.psi = _psi_rescale(S.psi, scales)
    return S2, scales, report


def _psi_rescale(psi, scales):
    # b'_i = s_i b_i  =>  psi'[j][i] = (s_i / s_j) psi[j][i]
    return {(j, i): P * (scales[i] / scales[j]) for (j, i), P in psi.items()}


def spin2_identities(E: Embedding, prime=True, d: int = 4) -> dict:
    """Displayed spin-2 identities with the fitted normalization (all must hold)."""
    S, scales, report = normalize_spin2(E, prime=prime, d=d)
    D = spin2_construct(E, S, prime=prime, d=d)
    F, B = E.F, E.B
    q, a0 = F.q, E.alpha[0]
    e = {i: B.gen(i) for i in IDX}
    one = B.one()
    dl, R = D.delta, D.right
    et = S.elements
    w = q ** 4 + q ** 2 + 1
    out = dict(report)
    out["delta(e[-1]^3)"] = dl(e[-1] ** 3) == lincomb(
        F, (q ** -4 * w, R(dl(et[0]), e[-1])), (-q ** -6 * w, R(dl(e[-1]), et[0])))
    out["e~-2 relation"] = not lincomb(
        F, (q ** 4 + 1, R(dl(et[0]), e[0] * q ** 2 + one * a0)), (-1, R(dl(et[1]), e[-1])),
        (-q ** 4 * (q ** 2 + 1) * a0, R(dl(e[-1]), e[-1])))
    out["alpha0^2 delta e[-1]"] = not lincomb(
        F, (a0 ** 2, dl(e[-1])), (-(q ** 4 + 1) / q ** 2, R(dl(et[0]), e[1])),
        (-1 / (q ** 2 * (q ** 2 + 1)), R(dl(et[1]), e[0])), (1 / (q ** 2 * w), R(dl(et[2]), e[-1])))
    out["alpha0^2 delta e[0]"] = not lincomb(
        F, (a0 ** 2, dl(e[0])), (-1, R(dl(et[1]), e[1])), (-(q ** 4 - 1) / (q ** 6 - 1), R(dl(et[2]), e[0])),
        (-q ** -4, R(dl(et[3]), e[-1])))
    out["alpha0^2 delta e[1]"] = not lincomb(
        F, (a0 ** 2, dl(e[1])), (q ** 4 / w, R(dl(et[2]), e[1])), (-1 / (q ** 2 + 1), R(dl(et[3]), e[0])),
        (-(q ** 4 + 1) / q ** 4, R(dl(et[4]), e[-1])))
    return out


def roundtrip_report(D: FODC, d: int | None = None) -> dict:
    """Ideal of a derivation, the derivation of that ideal, and the refinement of the ideal."""
    d = D.d if d is None else d
    L = ideal_from_derivation(D, d)
    DL = derivation_from_ideal(L)
    ab = abar(D.E, d)
    L1 = refine_ideal(L, ab)
    L2 = refine_ideal(L1, ab)
    return {
        "ideal_dims": L.dims(),
        "checks": {
            "delta_L <= delta": leq_check(DL, D, d),
            "delta <= delta_L": leq_check(D, DL, d),
            "refine(L) = L": L1.equals(L),
            "refine idempotent": L2.equals(L1),
        },
    }
