"""The coquasitriangular form r on O(SL_q(2)) and functionals built from it.

On generators r(u[i,k] (x) u[j,l]) = p^-1 R[ij,kl] with the SL_q(2)
R-matrix below.  Values on PBW monomials follow from

    r(xy (x) z) = r(x (x) z1) r(y (x) z2),   r(x (x) yz) = r(x1 (x) z) r(x2 (x) y),

so the 2x2 matrix M(y)[i][k] = r(u[i,k] (x) y) is anti-multiplicative in y.
"""
from __future__ import annotations

import itertools

from .ncpoly import ONE_M, GENS, GEN_M, NCPoly, SLq2

# R-matrix entries R[(i, j, k, l)] = R^{ij}_{kl}; all other entries vanish.
R_TABLE = {
    (1, 1, 1, 1): "q",
    (2, 2, 2, 2): "q",
    (1, 2, 1, 2): "1",
    (2, 1, 2, 1): "1",
    (2, 1, 1, 2): "q-1/q",
}
LETTER_IJ = {"a": (1, 1), "b": (1, 2), "c": (2, 1), "d": (2, 2)}


def _first_letter(m):
    """Split a PBW monomial into (first generator, rest)."""
    i, j, k, l = m
    if i:
        return "a", (i - 1, j, k, l)
    if j:
        return "b", (0, j - 1, k, l)
    if k:
        return "c", (0, 0, k - 1, l)
    return "d", (0, 0, 0, l - 1)


class RForm:
    """Memoized evaluation of r and r' on an SLq2 algebra."""

    def __init__(self, alg: SLq2):
        self.alg = alg
        F = alg.F
        vals = {"q": F.q, "1": F.one, "q-1/q": F.q - F.qinv}
        self.gen = {}
        for g1 in GENS:
            i, k = LETTER_IJ[g1]
            for g2 in GENS:
                j, l = LETTER_IJ[g2]
                key = R_TABLE.get((i, j, k, l))
                self.gen[(g1, g2)] = vals[key] * F.pinv if key else F.zero
        self._M = {}
        self._r = {}

    def gen_matrix(self, g):
        """M(g)[i][k] = r(u[i,k] (x) g) for a generator g."""
        return [[self.gen[("abcd"[2 * i + k], g)] for k in range(2)] for i in range(2)]

    def M(self, m):
        """M(y) for a PBW monomial y (as 2x2 nested lists)."""
        r = self._M.get(m)
        if r is not None:
            return r
        F = self.alg.F
        if m == ONE_M:
            r = [[F.one, F.zero], [F.zero, F.one]]
        else:
            # y = g * rest, M(g rest) = M(rest) M(g)
            g, rest = _first_letter(m)
            A_, B_ = self.M(rest), self.gen_matrix(g)
            r = [[A_[i][0] * B_[0][k] + A_[i][1] * B_[1][k] for k in range(2)] for i in range(2)]
        self._M[m] = r
        return r

    def mono(self, m1, m2):
        """r(m1 (x) m2) on PBW monomials."""
        key = (m1, m2)
        v = self._r.get(key)
        if v is not None:
            return v
        alg = self.alg
        F = alg.F
        if m1 == ONE_M:
            v = alg.counit_mono(m2)
        elif m2 == ONE_M:
            v = alg.counit_mono(m1)
        else:
            g, rest = _first_letter(m1)
            if rest == ONE_M:
                i, k = LETTER_IJ[g]
                v = self.M(m2)[i - 1][k - 1]
            else:
                v = F.zero
                gi, gk = LETTER_IJ[g]
                for (y1, y2), cf in alg.coproduct_mono(m2).items():
                    s = self.M(y1)[gi - 1][gk - 1]
                    if s:
                        t = self.mono(rest, y2)
                        if t:
                            v = v + cf * s * t
        self._r[key] = v
        return v

    def __call__(self, x: NCPoly, y: NCPoly):
        F = self.alg.F
        out = F.zero
        for m1, c1 in x.terms.items():
            for m2, c2 in y.terms.items():
                v = self.mono(m1, m2)
                if v:
                    out = out + c1 * c2 * v
        return out

    def prime(self, x: NCPoly, y: NCPoly):
        """r'(x (x) y) = r(S(y) (x) x)."""
        return self(y.antipode(), x)


# ---------------------------------------------------------------------------
# functionals

class Functional:
    """Linear functional on A, evaluated monomialwise with memoization."""

    def __init__(self, alg: SLq2, fn, name="f"):
        self.alg = alg
        self._fn = fn
        self._memo = {}
        self.name = name

    def mono(self, m):
        v = self._memo.get(m)
        if v is None:
            v = self._fn(m)
            self._memo[m] = v
        return v

    def __call__(self, x: NCPoly):
        F = self.alg.F
        out = F.zero
        for m, c in x.terms.items():
            v = self.mono(m)
            if v:
                out = out + c * v
        return out

    def __mul__(self, g: "Functional") -> "Functional":
        return convolve(self, g)

    def __add__(self, g):
        return Functional(self.alg, lambda m: self.mono(m) + g.mono(m), f"({self.name}+{g.name})")

    def __sub__(self, g):
        return Functional(self.alg, lambda m: self.mono(m) - g.mono(m), f"({self.name}-{g.name})")

    def scale(self, s):
        return Functional(self.alg, lambda m: s * self.mono(m), f"s*{self.name}")

    def __repr__(self):
        return f"Functional({self.name})"


def convolve(f: Functional, g: Functional) -> Functional:
    """(f*g)(x) = f(x1) g(x2)."""
    alg = f.alg

    def fn(m):
        F = alg.F
        out = F.zero
        for (m1, m2), cf in alg.coproduct_mono(m).items():
            u = f.mono(m1)
            if u:
                v = g.mono(m2)
                if v:
                    out = out + cf * u * v
        return out

    return Functional(alg, fn, f"{f.name}{g.name}")


def feval(f: Functional, x: NCPoly):
    return f(x)


def counit_functional(alg: SLq2) -> Functional:
    return Functional(alg, alg.counit_mono, "eps")


class Functionals:
    """The l-functionals and the filter functional for one algebra instance."""

    def __init__(self, alg: SLq2, r: RForm | None = None):
        self.alg = alg
        self.r = r or RForm(alg)
        r = self.r
        F = alg.F
        A = alg
        self.eps = counit_functional(alg)
        # left slices of r: x -> r(g (x) x)
        self.l = Functional(alg, lambda m: r.mono(GEN_M["a"], m), "l")
        self.l_inv = Functional(alg, lambda m: r.mono(GEN_M["d"], m), "l^-1")
        self.l_minus = Functional(alg, lambda m: -F.q * r.mono(GEN_M["c"], m), "l(-)")
        # right slice: x -> r(x (x) b)
        self.l_plus = Functional(alg, lambda m: r.mono(m, GEN_M["b"]), "l(+)")
        self.l_right = Functional(alg, lambda m: r.mono(m, GEN_M["a"]), "l'")
        del A

    def lpm(self, sign: str, i: int, j: int) -> Functional:
        """l(+)_ij(x) = r(x (x) u[i,j]);  l(-)_ij(x) = r(S(u[i,j]) (x) x)."""
        alg, r = self.alg, self.r
        u = alg.u(i, j)
        if sign == "+":
            return Functional(alg, lambda m: r(alg.mono(m), u), f"l+{i}{j}")
        Su = u.antipode()
        return Functional(alg, lambda m: r(Su, alg.mono(m)), f"l-{i}{j}")

    def build_filter(self, am1, a0, a1) -> Functional:
        """f = a0 (l^2 - eps) - a1 l(+) l + a(-1) l(-) l."""
        F = self.alg.F
        l, lp, lm, eps = self.l, self.l_plus, self.l_minus, self.eps
        ll = l * l
        pl = lp * l
        ml = lm * l
        am1, a0, a1 = F.coerce(am1), F.coerce(a0), F.coerce(a1)

        def fn(m):
            return a0 * (ll.mono(m) - eps.mono(m)) - a1 * pl.mono(m) + am1 * ml.mono(m)

        return Functional(self.alg, fn, "f")


# ---------------------------------------------------------------------------
# axiom suite

def axiom_suite(alg: SLq2, r: RForm, use_prime=False, samples=(), gens_only=False):
    """Check the seven coquasitriangularity identities.

    Returns a dict name -> (checked count, failures list).  ``samples`` is
    an iterable of (x, y) NCPoly pairs checked in addition to generators.
    """
    F = alg.F
    gens = [alg.one()] + list(alg.gens())
    rr = (lambda x, y: r.prime(x, y)) if use_prime else r

    def rt(x_terms, y_terms):
        return rr(x_terms, y_terms)

    def braid(x, y):
        # r(x1 (x) y1) x2 y2 == y1 x1 r(x2 (x) y2)
        lhs = alg.zero()
        rhs = alg.zero()
        for (x1, x2), cx in x.coproduct().terms.items():
            for (y1, y2), cy in y.coproduct().terms.items():
                X1, X2, Y1, Y2 = (alg.mono(m) for m in (x1, x2, y1, y2))
                s = rt(X1, Y1)
                if s:
                    lhs = lhs + X2 * Y2 * (cx * cy * s)
                t = rt(X2, Y2)
                if t:
                    rhs = rhs + Y1 * X1 * (cx * cy * t)
        return lhs == rhs

    def mult_left(x, y, z):
        lhs = rt(x * y, z)
        rhs = F.zero
        for (z1, z2), cz in z.coproduct().terms.items():
            rhs = rhs + cz * rt(x, alg.mono(z1)) * rt(y, alg.mono(z2))
        return lhs == rhs

    def mult_right(x, y, z):
        lhs = rt(x, y * z)
        rhs = F.zero
        for (x1, x2), cx in x.coproduct().terms.items():
            rhs = rhs + cx * rt(alg.mono(x1), z) * rt(alg.mono(x2), y)
        return lhs == rhs

    def unit_left(x):
        return rt(alg.one(), x) == x.counit()

    def unit_right(x):
        return rt(x, alg.one()) == x.counit()

    def antipode_inv(x, y):
        return rt(x.antipode(), y.antipode()) == rt(x, y)

    def conv_inverse(x, y):
        # r(x1 (x) y1) r(S(x2) (x) y2) = eps(x) eps(y)
        tot = F.zero
        for (x1, x2), cx in x.coproduct().terms.items():
            for (y1, y2), cy in y.coproduct().terms.items():
                s = rt(alg.mono(x1), alg.mono(y1))
                if s:
                    tot = tot + cx * cy * s * rt(alg.mono(x2).antipode(), alg.mono(y2))
        return tot == x.counit() * y.counit()

    pairs = [(x, y) for x in gens for y in gens] + list(samples)
    triples = [(x, y, z) for x in gens for y in gens for z in gens]
    extra_tr = [(x, y, z) for (x, y) in samples for z in gens[1:]]
    res = {}

    def run(name, fn, args):
        bad = [a for a in args if not fn(*a)]
        res[name] = (len(args), [tuple(str(t) for t in a) for a in bad])

    run("braiding", braid, pairs)
    run("mult_first_argument", mult_left, triples + extra_tr)
    run("mult_second_argument", mult_right, triples + extra_tr)
    run("unit_first_argument", unit_left, [(y,) for _, y in pairs])
    run("unit_second_argument", unit_right, [(x,) for x, _ in pairs])
    run("antipode_invariance", antipode_inv, pairs)
    run("convolution_inverse", conv_inverse, pairs)
    return res


def functional_identities(alg: SLq2, r: RForm | None = None, degree: int = 3) -> dict:
    """l l^-1 = eps = l^-1 l and l l(-) = q l(-) l on all PBW monomials of degree <= ``degree``."""
    from .ncpoly import pbw_upto
    fn = Functionals(alg, r)
    q = alg.F.q
    l, li, lm, eps = fn.l, fn.l_inv, fn.l_minus, fn.eps
    checks = {
        "l*l_inv = eps": (l * li, eps, alg.F.one),
        "l_inv*l = eps": (li * l, eps, alg.F.one),
        "l*l(-) = q l(-)*l": (l * lm, lm * l, q),
    }
    mons = pbw_upto(degree)
    out = {}
    for name, (f, g, s) in checks.items():
        bad = [mono for mono in mons if f.mono(mono) != s * g.mono(mono)]
        out[name] = (len(mons), [str(alg.mono(m)) for m in bad])
    return out


def rform_report(alg: SLq2, degree: int = 3, n_samples: int = 50, seed: int = 0) -> dict:
    """Axiom suite for r and r' (generators plus random samples) and the functional identities."""
    import random
    rng = random.Random(seed)
    r = RForm(alg)
    samples = [(alg.random_element(rng, max_deg=2), alg.random_element(rng, max_deg=2))
               for _ in range(n_samples)]
    out = {}
    for prime in (False, True):
        for k, v in axiom_suite(alg, r, use_prime=prime, samples=samples).items():
            out[("r'" if prime else "r") + ":" + k] = v
    out.update(functional_identities(alg, r, degree))
    return out
