"""Two-dimensional covariant calculi on B_c: representations, cocycles, filter.

A calculus with dim_{eps,r} = 2 is given by a representation tau of B_c on
K^2 and a 1-cocycle chi: B_c -> K^2 (chi(ab) = tau(a) chi(b) + chi(a) eps(b)).
Both are encoded at once by the block homomorphism

    e_i  ->  [[tau(e_i), chi(e_i)], [0, alpha_i]],

so the defining relations of B_c on these 3x3 matrices are exactly the
conditions on (tau, chi).  A candidate survives the filter when the plane
spanned by chi_1, chi_2 (as functionals on the probe words of length 1..3)
is invariant under right convolution with the filter functional f.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .linalg import Echelon
from .podles import IDX, Embedding, bnormal_upto, find_embedding, preset_alphas, alphas_for_c, word_of
from .qfield import QP, QHalf, ParamField, RatFun, render
from .rform import Functionals

PROBES = [w for n in (1, 2, 3) for w in itertools.product(IDX, repeat=n)]


# ---------------------------------------------------------------------------
# small dense matrices

class Mat:
    """Dense square matrix over a field, enough arithmetic to evaluate relations."""

    __slots__ = ("K", "a")

    def __init__(self, K, rows):
        self.K = K
        self.a = [[K.coerce(x) for x in r] for r in rows]

    @property
    def n(self):
        return len(self.a)

    @classmethod
    def scalar(cls, K, n, s):
        s = K.coerce(s)
        return cls(K, [[s if i == j else K.zero for j in range(n)] for i in range(n)])

    def _lift(self, y):
        if isinstance(y, Mat):
            return y
        return Mat.scalar(self.K, self.n, y)

    def __add__(self, y):
        y = self._lift(y)
        return Mat(self.K, [[u + v for u, v in zip(r, s)] for r, s in zip(self.a, y.a)])

    __radd__ = __add__

    def __neg__(self):
        return Mat(self.K, [[-u for u in r] for r in self.a])

    def __sub__(self, y):
        return self + (-self._lift(y))

    def __rsub__(self, y):
        return (-self) + y

    def __mul__(self, y):
        K = self.K
        if isinstance(y, Mat):
            n = self.n
            return Mat(K, [[sum((self.a[i][k] * y.a[k][j] for k in range(n) if self.a[i][k] and y.a[k][j]), K.zero)
                            for j in range(n)] for i in range(n)])
        s = K.coerce(y)
        return Mat(K, [[u * s for u in r] for r in self.a])

    def __rmul__(self, s):
        return self * s

    def is_zero(self):
        return all(not u for r in self.a for u in r)

    def __eq__(self, y):
        return (self - y).is_zero()

    def rows_str(self):
        return [[_fmt(x) for x in r] for r in self.a]


def _fmt(x):
    if isinstance(x, QHalf):
        return render(x)
    if isinstance(x, RatFun):
        F = x.F
        if all(not any(e[1:]) for e in x.num.to_dict()) and all(not any(e[1:]) for e in x.den.to_dict()):
            return render(F.to_qhalf(x))
        return str(x)
    return str(x)


# ---------------------------------------------------------------------------
# fields with parameters

def param_field(names):
    return ParamField(tuple(names)) if names else QP


def to_field(x, K):
    """Move a value between coefficient fields (matching parameter names)."""
    if isinstance(K, AlgExt):
        return K.coerce(x)
    if isinstance(x, ExtElem):
        raise TypeError("cannot move an extension element to a smaller field")
    if K is QP:
        if isinstance(x, RatFun):
            return x.F.to_qhalf(x)
        return QP.coerce(x)
    if isinstance(x, RatFun):
        if x.F is K:
            return x
        src = ("p",) + x.F.names
        tgt = ("p",) + K.names

        def conv(poly):
            d = {}
            for e, c in poly.to_dict().items():
                ne = [0] * len(tgt)
                for name, k in zip(src, e):
                    if k:
                        ne[tgt.index(name)] = k
                d[tuple(ne)] = c
            return K.ctx.from_dict(d)

        return RatFun(K, conv(x.num), conv(x.den))
    return K.coerce(x)


def free_symbols(x) -> set:
    if not isinstance(x, RatFun):
        return set()
    names = ("p",) + x.F.names
    out = set()
    for poly in (x.num, x.den):
        for e in poly.to_dict():
            out |= {names[i] for i, k in enumerate(e) if k and i}
    return out


class AlgExt:
    """K0[z]/(f) for an irreducible f, elements as coefficient lists over K0.

    Used to follow branch points given by nonlinear irreducible factors:
    the branch parameter becomes the class z of the generator.
    """

    authoritative = True

    def __init__(self, K0, minpoly, name):
        lead = minpoly[-1]
        self.K0 = K0
        self.f = [c / lead for c in minpoly]       # monic, low degree first
        self.n = len(self.f) - 1
        self.name = name
        self.names = getattr(K0, "names", ())
        self.zero = self._const(K0.zero)
        self.one = self._const(K0.one)
        self.q = self._const(K0.q)
        self.p = self._const(K0.p)
        self.gen = ExtElem(self, [K0.zero, K0.one] + [K0.zero] * (self.n - 2))

    def _const(self, c):
        return ExtElem(self, [c] + [self.K0.zero] * (self.n - 1))

    def sym(self, name):
        if name == self.name:
            return self.gen
        return self._const(self.K0.sym(name))

    def coerce(self, x):
        if isinstance(x, ExtElem):
            return x
        if isinstance(x, RatFun):
            return self.from_ratfun(x)
        return self._const(self.K0.coerce(x))

    def from_ratfun(self, x):
        names = ("p",) + x.F.names

        def ev(poly):
            out = self.zero
            for e, c in poly.to_dict().items():
                t = self._const(self.K0.coerce(c) * self.K0.p ** e[0])
                for nm, k in zip(names[1:], e[1:]):
                    if k:
                        t = t * self.sym(nm) ** k
                out = out + t
            return out

        return ev(x.num) / ev(x.den)

    def __repr__(self):
        return f"AlgExt({self.name})"


class ExtElem:
    __slots__ = ("K", "c")

    def __init__(self, K, c):
        self.K = K
        self.c = list(c)

    def _lift(self, y):
        if isinstance(y, ExtElem):
            return y
        if isinstance(y, (Mat, dict, list)):
            return NotImplemented
        return self.K.coerce(y)

    def __add__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return ExtElem(self.K, [u + v for u, v in zip(self.c, y.c)])

    __radd__ = __add__

    def __neg__(self):
        return ExtElem(self.K, [-u for u in self.c])

    def __sub__(self, y):
        return self + (-self._lift(y))

    def __rsub__(self, y):
        return (-self) + y

    def __mul__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        K = self.K
        n, f, z = K.n, K.f, K.K0.zero
        prod = [z] * (2 * n - 1)
        for i, u in enumerate(self.c):
            if u:
                for j, v in enumerate(y.c):
                    if v:
                        prod[i + j] = prod[i + j] + u * v
        for k in range(2 * n - 2, n - 1, -1):
            t = prod[k]
            if t:
                for j in range(n):
                    prod[k - n + j] = prod[k - n + j] - t * f[j]
        return ExtElem(K, prod[:n])

    __rmul__ = __mul__

    def __pow__(self, k):
        out = self.K.one
        for _ in range(k):
            out = out * self
        return out

    def inv(self):
        # solve self * w = 1 via the multiplication matrix
        K = self.K
        n = K.n
        cols = []
        basis = [ExtElem(K, [K.K0.one if i == j else K.K0.zero for i in range(n)]) for j in range(n)]
        for b in basis:
            cols.append((self * b).c)
        rows = [[cols[j][i] for j in range(n)] + [K.K0.one if i == 0 else K.K0.zero] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if rows[r][col]), None)
            if piv is None:
                raise ZeroDivisionError("zero divisor in extension")
            rows[col], rows[piv] = rows[piv], rows[col]
            s = K.K0.one / rows[col][col]
            rows[col] = [x * s for x in rows[col]]
            for r in range(n):
                if r != col and rows[r][col]:
                    t = rows[r][col]
                    rows[r] = [x - t * y for x, y in zip(rows[r], rows[col])]
        return ExtElem(K, [rows[i][n] for i in range(n)])

    def __truediv__(self, y):
        return self * self._lift(y).inv()

    def __rtruediv__(self, y):
        return self._lift(y) * self.inv()

    def __bool__(self):
        return any(bool(u) for u in self.c)

    def __eq__(self, y):
        return not (self - y)

    def __hash__(self):
        return hash(tuple(str(u) for u in self.c))

    def __repr__(self):
        terms = [f"({_fmt(u)})*{self.K.name}^{k}" for k, u in enumerate(self.c) if u]
        return " + ".join(terms) or "0"

    __str__ = __repr__


def _base_field(K):
    return K.K0 if isinstance(K, AlgExt) else K


# ---------------------------------------------------------------------------
# representation families

FAMILY_PARAMS = {
    "a": ("x",), "b": ("x",), "c": ("x", "y"), "d": ("x",), "e": (), "f": (),
    "a'": ("x",), "b'": ("s", "t"), "b''": ("s",), "c'": ("s", "t", "u", "v"),
}
NONZERO = {"a": ("x",), "b": ("x",), "c": ("x", "y"), "d": ("x",), "a'": ("x",)}


@dataclass
class RepFamily:
    """tau on the generators for one family and concrete parameter values."""

    label: str
    K: object
    params: dict
    tau: dict
    conditions: list = field(default_factory=list)

    @property
    def free(self):
        out = set()
        for v in self.params.values():
            out |= free_symbols(v)
        return tuple(sorted(out))

    def describe(self):
        return {"family": self.label,
                "params": {k: _fmt(v) for k, v in self.params.items()},
                "conditions": list(self.conditions),
                "tau": {f"e[{i}]": self.tau[i].rows_str() for i in IDX}}


def _tau_tables(label, al, q, P, K):
    """tau(e_-1), tau(e_0), tau(e_1) as nested lists for family ``label``."""
    am, a0, ap = al[-1], al[0], al[1]
    z, one = K.zero, K.one
    c = am * ap
    if label == "a":
        x = P["x"]
        return ([[c / (q * q * x), a0 / x], [z, c / x]],
                [[a0, -(q * q + 1)], [z, a0]],
                [[x * q * q, z], [z, x]])
    if label == "b":
        x = P["x"]
        return ([[c / x, -c / x], [z, c / x]], [[a0, z], [z, a0]], [[x, x], [z, x]])
    if label == "c":
        x, y = P["x"], P["y"]
        return ([[c / x, z], [z, c / y]], [[a0, z], [z, a0]], [[x, z], [z, y]])
    if label == "d":
        x = P["x"]
        return ([[c / x, z], [z, z]], [[a0, z], [z, z]], [[x, z], [z, z]])
    if label == "e":
        return ([[z, z], [z, z]],) * 3
    if label == "f":
        k = (q * q - 1) * a0 / (q ** 4 + 1)
        return ([[z, k], [z, z]], [[-k, z], [z, q * q * k]], [[z, z], [q * q * k, z]])
    if label == "a'":
        x = P["x"]
        return ([[x / (q * q), z], [z, x]], [[a0, -(one / (q * q) + 1)], [z, a0]], [[z, a0 / x], [z, z]])
    if label == "b'":
        s, t = P["s"], P["t"]
        return ([[z, s], [z, z]], [[a0, z], [z, a0]], [[t, one], [z, t]])
    if label == "b''":
        s = P["s"]
        return ([[s, one], [z, s]], [[a0, z], [z, a0]], [[z, z], [z, z]])
    if label == "c'":
        s, t, u, v = P["s"], P["t"], P["u"], P["v"]
        return ([[s, z], [z, u]], [[a0, z], [z, a0]], [[t, z], [z, v]])
    raise KeyError(label)


def make_family(label: str, E: Embedding, K=None, conditions=(), **vals) -> RepFamily:
    """Family ``label`` with parameter values (field elements or symbol names)."""
    names = FAMILY_PARAMS[label]
    if K is None:
        syms = sorted({v for v in vals.values() if isinstance(v, str)} |
                      {n for n in names if n not in vals})
        K = param_field(syms)
    P = {}
    for n in names:
        v = vals.get(n, n)
        P[n] = K.sym(v) if isinstance(v, str) else to_field(v, K)
    for n in NONZERO.get(label, ()):
        if not P[n]:
            raise ZeroDivisionError(f"family ({label}) needs {n} != 0")
    al = {i: to_field(E.alpha[i], K) for i in IDX}
    q = K.q
    tabs = _tau_tables(label, al, q, P, K)
    tau = {i: Mat(K, t) for i, t in zip(IDX, tabs)}
    return RepFamily(label, K, P, tau, list(conditions))


def relations_hold(fam: RepFamily, E: Embedding) -> bool:
    """tau respects the four defining relations as matrix identities."""
    return all(r.is_zero() for r in _relations(E, fam.K, fam.tau))


def _relations(E, K, e):
    q = K.q
    rho, lam = to_field(E.rho, K), to_field(E.lam, K)
    one = K.one
    return [
        (q * q + 1) * (e[-1] * e[1]) + e[0] * e[0] + (one / (q * q) + 1) * (e[1] * e[-1]) - rho,
        -(q * q) * (e[-1] * e[0]) + e[0] * e[-1] - lam * e[-1],
        (q * q + 1) * (e[-1] * e[1]) - (q * q - 1) * (e[0] * e[0]) - (q * q + 1) * (e[1] * e[-1]) - lam * e[0],
        -(q * q) * (e[0] * e[1]) + e[1] * e[0] - lam * e[1],
    ]


def c_class(E: Embedding):
    """Which special values of c apply: subset of {'0', 'c1', 'c2'}."""
    from .qfield import c_of
    c = E.c
    out = set()
    if not c:
        out.add("0")
    if c == c_of(1):
        out.add("c1")
    if c == c_of(2):
        out.add("c2")
    return out


def solve_representations(E: Embedding) -> list:
    """Representation families valid at the c value of E (alpha_0 != 0).

    The branches follow the case split on S = tau(e_0) - alpha_0: S scalar,
    S diagonalizable with two eigenvalues, S a Jordan block.  Every family
    returned is checked against the relations with symbolic parameters.
    """
    if not E.alpha[0]:
        raise ValueError("the classification assumes eps(e_0) != 0")
    cls = c_class(E)
    out = [make_family("a", E), make_family("b", E), make_family("c", E)]
    if "c1" in cls:
        out += [make_family("d", E), make_family("e", E)]
    if "c2" in cls:
        out.append(make_family("f", E))
    if "0" in cls:
        out.append(make_family("a'", E))
        out.append(make_family("b'", E, s=0, conditions=["s = 0"]))
        out.append(make_family("b'", E, t=0, conditions=["t = 0"]))
        out.append(make_family("b''", E))
        for s0, u0 in (("s", "u"), ("s", "v"), ("t", "u"), ("t", "v")):
            out.append(make_family("c'", E, **{s0: 0, u0: 0}, conditions=[f"{s0} = 0", f"{u0} = 0"]))
    for fam in out:
        if not relations_hold(fam, E):
            raise AssertionError(f"family ({fam.label}) violates the relations")
    return out


# ---------------------------------------------------------------------------
# pivot-recording linear algebra

class RecEchelon(Echelon):
    """Echelon that records every pivot value it divides by."""

    def __init__(self, K, order=None, record=None):
        super().__init__(K, order)
        self.record = record if record is not None else []

    def insert(self, r, combo=None):
        piv = self._pivot(r)
        self.record.append(r[piv])
        s = self.F.one / r[piv]
        self.rows[piv] = {k: x * s for k, x in r.items()}
        if combo is not None:
            self.tags[piv] = {k: x * s for k, x in combo.items()}
        return piv

    def add(self, v, tag=None):
        if self.track:
            r, combo = self.reduce(v, {tag: self.F.one} if tag is not None else {})
        else:
            r, combo = self._fully_reduce(dict(v)), None
        if not r:
            return False
        self.insert(r, combo)
        return True


def kernel_combos(vectors, K, record):
    """Basis of {c : sum c_k v_k = 0} for a list of sparse vectors."""
    ech = RecEchelon(K, record=record)
    ech.track = True
    ker = []
    for k, v in enumerate(vectors):
        r, combo = ech.reduce(v, {k: K.one})
        if r:
            ech.insert(r, combo)
        else:
            ker.append(combo)
    return ker


# ---------------------------------------------------------------------------
# cocycles

def _block(fam, E, chi):
    K = fam.K
    out = {}
    for i in IDX:
        t = fam.tau[i].a
        ch = chi[i]
        a = to_field(E.alpha[i], K)
        out[i] = Mat(K, [[t[0][0], t[0][1], ch[0]], [t[1][0], t[1][1], ch[1]], [K.zero, K.zero, a]])
    return out


def cocycle_conditions(fam: RepFamily, E: Embedding):
    """Linear conditions on the six values chi_k(e_i): list of rows over keys (i, k)."""
    K = fam.K
    keys = [(i, k) for i in IDX for k in range(2)]
    cols = {}
    for key in keys:
        chi = {i: [K.zero, K.zero] for i in IDX}
        chi[key[0]][key[1]] = K.one
        rel = _relations(E, K, _block(fam, E, chi))
        cols[key] = [(r.a[0][2], r.a[1][2]) for r in rel]
    rows = []
    for ri in range(4):
        for comp in range(2):
            row = {key: cols[key][ri][comp] for key in keys if cols[key][ri][comp]}
            if row:
                rows.append(row)
    return rows


def is_cocycle(fam, E, chi) -> bool:
    rel = _relations(E, fam.K, _block(fam, E, {i: [to_field(x, fam.K) for x in chi[i]] for i in IDX}))
    return all(r.a[0][2] == 0 and r.a[1][2] == 0 for r in rel) if False else all(
        not r.a[0][2] and not r.a[1][2] for r in rel)


def coboundary(fam, E, k):
    """chi_i = tau_ik - delta_ik eps (coordinate beta_k)."""
    K = fam.K
    out = {}
    for g in IDX:
        a = to_field(E.alpha[g], K)
        out[g] = [fam.tau[g].a[i][k] - (a if i == k else K.zero) for i in range(2)]
    return out


def tabulated_xi(fam: RepFamily, E: Embedding):
    """Extra cocycles (n, xi^n) listed for the family at its parameter values (empty if none apply)."""
    K = fam.K
    q = K.q
    al = {i: to_field(E.alpha[i], K) for i in IDX}
    am, a0, ap = al[-1], al[0], al[1]
    P = fam.params
    z = K.zero
    L = fam.label
    xs = []

    def vec(m1, z0, p1):
        return {-1: list(m1), 0: list(z0), 1: list(p1)}

    def eq(u, v):
        return to_field(u, K) == to_field(v, K)

    if L == "a":
        x = P["x"]
        if eq(x, ap / (q * q)):
            xs.append((1, vec((-am, z), (z, z), (ap, z))))
        if eq(x, q * q * ap):
            xs.append((1, vec((-K.one, a0), (z, -(q * q + 1) * ap), (z, z))))
    elif L == "b":
        x = P["x"]
        if eq(x, ap):
            xs.append((1, vec((am, -am), (z, z), (z, ap))))
        if eq(x, q * q * ap):
            xs.append((1, vec((a0, z), (-(q * q + 1) * ap, z), (z, z))))
    elif L in ("c", "d"):
        for idx, nm in enumerate(("x", "y") if L == "c" else ("x",)):
            x = P[nm]

            def put(a, b, c_):
                m = [[z, z], [z, z], [z, z]]
                m[0][idx], m[1][idx], m[2][idx] = a, b, c_
                return vec(*m)
            if eq(x, ap):
                xs.append((idx + 1, put(am, z, -ap)))
            if eq(x, q * q * ap):
                xs.append((idx + 1, put(a0, -(q * q + 1) * ap, z)))
    elif L == "a'":
        x = P["x"]
        if eq(x, q * q * am):
            xs.append((1, vec((K.one, z), (z, z), (z, z))))
        if eq(x, am / (q * q)):
            xs.append((1, vec((z, z), (z, -(K.one / (q * q) + 1) * am), (-K.one, a0))))
    elif L == "b'":
        s, t = P["s"], P["t"]
        if not am and eq(t, ap):
            xs.append((1, vec((z, q * q * s * a0), (-(q * q + 1) * s, z), (z, a0))))
        if not am and eq(t, q * q * ap):
            xs.append((2, vec((a0, z), (-(q * q + 1) * ap, z), (z, z))))
    elif L == "b''":
        s = P["s"]
        if not ap and eq(s, am):
            xs.append((1, vec((z, K.one), (z, z), (z, z))))
        if not ap and eq(s, am / (q * q)):
            xs.append((2, vec((z, z), (-(K.one / (q * q) + 1) * am, z), (a0, z))))
    elif L == "c'":
        for idx, (s, t) in enumerate(((P["s"], P["t"]), (P["u"], P["v"]))):
            def put(a, b, c_):
                m = [[z, z], [z, z], [z, z]]
                m[0][idx], m[1][idx], m[2][idx] = a, b, c_
                return vec(*m)
            if eq(s, am / (q * q)) and eq(t, ap):
                xs.append((2 * idx + 1, put(z, -(K.one / (q * q) + 1) * am, a0)))
            if eq(s, am) and eq(t, q * q * ap):
                xs.append((2 * idx + 2, put(a0, -(q * q + 1) * ap, z)))
    return xs


@dataclass
class CocycleSpace:
    family: RepFamily
    basis: list          # cocycles (dict i -> 2-vector), coboundaries first
    names: list          # 'beta1', 'beta2', "beta'1", ...
    dim: int             # dimension of the full cocycle space
    xi_source: str       # 'table' or 'computed'
    record: list


def cocycle_space(fam: RepFamily, E: Embedding, record=None) -> CocycleSpace:
    """Cocycle space as coboundaries plus a complement, preferring the tabulated xi.

    Raises if a tabulated xi is not a cocycle or if the table does not fill
    the complement of the coboundaries.
    """
    K = fam.K
    record = record if record is not None else []
    rows = cocycle_conditions(fam, E)
    keys = [(i, k) for i in IDX for k in range(2)]
    ech = RecEchelon(K, order=lambda k: keys.index(k), record=record)
    for r in rows:
        ech.add(r)
    dim = 6 - len(ech)
    cob = [coboundary(fam, E, k) for k in range(2)]
    xs = tabulated_xi(fam, E)
    for _, x in xs:
        if not is_cocycle(fam, E, x):
            raise AssertionError(f"tabulated xi for ({fam.label}) is not a cocycle")

    def flat(ch):
        return {(i, k): ch[i][k] for i in IDX for k in range(2) if ch[i][k]}

    span = Echelon(K, order=lambda k: keys.index(k))
    basis, names = [], []
    for n, c in enumerate(cob):
        if span.add(flat(c)):
            basis.append(c)
            names.append(f"beta{n + 1}")
    src = "table"
    for n, x in xs:
        if not span.add(flat(x)):
            raise AssertionError("tabulated xi is a coboundary combination")
        basis.append(x)
        names.append(f"beta'{n}")
    if len(span) < dim:
        # complement from the kernel of the condition rows
        src = "computed" if not xs else "table+computed"
        from .linalg import rref
        piv = list(ech.rows)
        free = [k for k in keys if k not in ech.rows]
        full = {}
        for fc in free:
            v = {fc: K.one}
            for pc, r in ech.rows.items():
                pass
            full[fc] = v
        # exact kernel basis via reduced rows
        pv, red = rref(list(ech.rows.values()), K, order=lambda k: keys.index(k))
        for fc in free:
            v = {fc: K.one}
            for pc, r in zip(pv, red):
                x = r.get(fc)
                if x:
                    v[pc] = -x
            if span.add(v):
                ch = {i: [v.get((i, k), K.zero) for k in range(2)] for i in IDX}
                basis.append(ch)
                names.append(f"gamma{len(names) - 1 - len(xs)}")
    if len(span) != dim:
        raise AssertionError("cocycle space bookkeeping mismatch")
    return CocycleSpace(fam, basis, names, dim, src, record)


# ---------------------------------------------------------------------------
# probes and the filter matrix

def chi_on_probes(fam: RepFamily, E: Embedding, chi):
    """Values of chi on the probe words: two dicts (one per component) probe index -> value."""
    K = fam.K
    eps = {i: to_field(E.alpha[i], K) for i in IDX}
    tau = {i: fam.tau[i].a for i in IDX}
    ch = {i: [to_field(x, K) for x in chi[i]] for i in IDX}
    memo = {(): ([K.zero, K.zero], K.one)}

    def val(w):
        r = memo.get(w)
        if r is None:
            c, e = val(w[1:])
            g = w[0]
            t = tau[g]
            v = [t[i][0] * c[0] + t[i][1] * c[1] + ch[g][i] * e for i in range(2)]
            r = (v, eps[g] * e)
            memo[w] = r
        return r

    out = ({}, {})
    for n, w in enumerate(PROBES):
        v, _ = val(w)
        for i in range(2):
            if v[i]:
                out[i][n] = v[i]
    return out


_FILTER_CACHE = {}


def filter_matrix(E: Embedding):
    """F[J][I] = f(pi_J^I) for probe words of equal length, as dict I -> {J: value}."""
    key = id(E)
    hit = _FILTER_CACHE.get(key)
    if hit is not None and hit[0] is E:
        return hit[1]
    fn = Functionals(E.alg)
    f = fn.build_filter(E.alpha[-1], E.alpha[0], E.alpha[1])
    index = {w: n for n, w in enumerate(PROBES)}
    cols = {}
    for I in PROBES:
        col = {}
        for J in itertools.product(IDX, repeat=len(I)):
            v = f(E.pi_word(J, I))
            if v:
                col[index[J]] = v
        cols[index[I]] = col
    _FILTER_CACHE[key] = (E, cols)
    return cols


def filter_report(E: Embedding, degree: int = 2) -> dict:
    """f(x e_i+) = 0 for PBW monomials x of degree <= ``degree``, and (f*g) = 0 on B_c up to ``degree``."""
    from .ncpoly import pbw_upto
    alg = E.alg
    fn = Functionals(alg)
    f = fn.build_filter(E.alpha[-1], E.alpha[0], E.alpha[1])
    plus = {i: E.e[i] - alg.scalar(E.alpha[i]) for i in IDX}
    xs = pbw_upto(degree)
    bad = [f"{alg.mono(m)} * e[{i}]+" for m in xs for i in IDX if f(alg.mono(m) * plus[i])]
    out = {"f(x e_i+) = 0": (len(xs) * 3, bad)}
    words = bnormal_upto(degree)
    for name, g in (("l", fn.l), ("l^-1", fn.l_inv), ("l(-)", fn.l_minus)):
        fg = f * g
        bad = [str(E.B.mono(m)) for m in words if fg(E.image_mono(m))]
        out[f"(f*{name}) = 0 on B"] = (len(words), bad)
    return out


def filter_kills_check(E: Embedding) -> bool:
    return all(not bad for _, bad in filter_report(E).values())


def apply_filter(vec: dict, Fm, K):
    """(y F)_I = sum_J y_J F[J][I]."""
    out = {}
    for I, col in Fm.items():
        s = K.zero
        for J, f in col.items():
            y = vec.get(J)
            if y:
                s = s + y * f
        if s:
            out[I] = s
    return out


# ---------------------------------------------------------------------------
# invariant subspace and the filter

def invariant_core(rows, Fm, K, record):
    """Largest subspace of span(rows) invariant under y -> y F (rows sparse over probes)."""
    ech = RecEchelon(K, record=record)
    for r in rows:
        ech.add(r)
    basis = ech.basis()
    while basis:
        cur = RecEchelon(K, record=record)
        for b in basis:
            cur.add(b)
        images = [cur._fully_reduce(apply_filter(b, Fm, K)) for b in basis]
        ker = kernel_combos(images, K, record)
        if len(ker) == len(basis):
            return basis
        new = RecEchelon(K, record=record)
        for c in ker:
            v = {}
            for k, s in c.items():
                for j, x in basis[k].items():
                    v[j] = v.get(j, K.zero) + s * x
            new.add({j: x for j, x in v.items() if x})
        basis = new.basis()
    return basis


@dataclass
class FilterResult:
    family: RepFamily
    space: CocycleSpace
    core_dim: int
    solutions: list            # list of dicts: {'W': [...], 'plane': [...]}
    record: list
    note: str = ""


def _combine(cs, gam, K):
    out = {}
    for g, ch in zip(gam, cs.basis):
        if not g:
            continue
        for i in IDX:
            v = out.setdefault(i, [K.zero, K.zero])
            v[0] = v[0] + g * ch[i][0]
            v[1] = v[1] + g * ch[i][1]
    for i in IDX:
        out.setdefault(i, [K.zero, K.zero])
    return out


def filter_family(fam: RepFamily, E: Embedding) -> FilterResult:
    """Run the filter on one family at fixed (possibly symbolic) parameters."""
    K = fam.K
    record = []
    cs = cocycle_space(fam, E, record)
    Fm = {I: {J: to_field(v, K) for J, v in col.items()} for I, col in filter_matrix(E).items()}
    probe_rows = [chi_on_probes(fam, E, ch) for ch in cs.basis]
    rows = [r for pr in probe_rows for r in pr if r]
    core = invariant_core(rows, Fm, K, record)
    res = FilterResult(fam, cs, len(core), [], record)
    if len(core) < 2:
        return res
    # W: coefficient vectors gamma with both chi rows inside the core
    cech = RecEchelon(K, record=record)
    cech.track = True
    for n, b in enumerate(core):
        cech.add(b, tag=n)
    rems, coords = [], []
    for pr in probe_rows:
        rem, co = [], []
        for comp in range(2):
            r, combo = cech.reduce(pr[comp], {})
            rem.append(r)
            co.append({k: -x for k, x in combo.items()})
        rems.append({(comp, k): x for comp in range(2) for k, x in rem[comp].items()})
        coords.append(co)
    W = kernel_combos(rems, K, record)
    if not W:
        return res
    if len(core) > 2:
        res.note = f"invariant core of dimension {len(core)}"
        res.solutions.extend(_invariant_planes(K, core, cech, coords, W, Fm, record, res))
        return res
    # coordinate 2x2 matrices C_w for each W basis vector
    Cs = []
    for w in W:
        C = [[K.zero, K.zero], [K.zero, K.zero]]
        for j, s in w.items():
            for comp in range(2):
                for k, x in coords[j][comp].items():
                    C[comp][k] = C[comp][k] + s * x
        Cs.append(C)
    # det(sum_w g_w C_w) as a quadratic form in g; nonzero iff some coefficient is nonzero
    quad = {}
    for a_, Ca in enumerate(Cs):
        for b_, Cb in enumerate(Cs):
            v = Ca[0][0] * Cb[1][1] - Ca[0][1] * Cb[1][0]
            key = (min(a_, b_), max(a_, b_))
            quad[key] = quad.get(key, K.zero) + v
    quad = {k: v for k, v in quad.items() if v}
    if not quad:
        return res
    res.solutions.append({"W": W, "plane": core, "open": quad, "core_gt2": False})
    return res


def _rows_of(gamma, coords, K, k):
    """Core coordinates of the two chi rows for a coefficient vector gamma."""
    out = []
    for comp in range(2):
        v = {}
        for j, g in gamma.items():
            for n, x in coords[j][comp].items():
                v[n] = v.get(n, K.zero) + g * x
        out.append({n: x for n, x in v.items() if x})
    return out


def _plane_invariant(u, T, K, record):
    """(independent, invariant) for the plane spanned by u[0], u[1] under y -> y T."""
    ech = RecEchelon(K, record=record)
    if not (ech.add(u[0]) and ech.add(u[1])):
        return False, False
    imgs = [_apply_sq(x, T, K) for x in u]
    return True, all(not ech._fully_reduce(dict(y)) for y in imgs)


def _apply_sq(v, T, K):
    out = {}
    for n, x in v.items():
        for m, y in T[n].items():
            out[m] = out.get(m, K.zero) + x * y
    return {m: x for m, x in out.items() if x}


def _invariant_planes(K, core, cech, coords, W, Fm, record, res):
    """Two-dimensional invariant planes spanned by chi rows when the core is larger than 2.

    The coefficient vector runs over the projective space of W, covered by
    affine charts with adjoined symbols t0, t1, ...  Invariance reduces to
    rational conditions in the t's; each irreducible factor that is linear
    in some t is substituted and the search recurses.  Every candidate is
    re-checked exactly over K.
    """
    k = len(core)
    T = {}
    for n, b in enumerate(core):
        r, combo = cech.reduce(apply_filter(b, Fm, K), {})
        if r:
            raise AssertionError("core is not invariant")
        T[n] = {m: -x for m, x in combo.items() if x}
    if isinstance(K, AlgExt):
        if len(W) == 1:
            cands = [dict(W[0])]
        else:
            res.note += "; coefficient search over an extension field skipped"
            return []
    else:
        cands = []
        m = len(W)
        for j in range(m):
            tn = tuple(f"t{i}" for i in range(j))
            Kt = ParamField(tuple(getattr(K, "names", ())) + tn) if tn else K
            gam = {}
            for i in range(j + 1):
                s_ = Kt.sym(tn[i]) if i < j else Kt.one
                for jj, x in W[i].items():
                    gam[jj] = gam.get(jj, Kt.zero) + s_ * to_field(x, Kt)
            ct = [[{n: to_field(x, Kt) for n, x in c.items()} for c in cc] for cc in coords]
            Tt = {n: {mm: to_field(x, Kt) for mm, x in row.items()} for n, row in T.items()}
            _pencil_search(Kt, tn, gam, ct, Tt, k, cands, record, res, K)
    out = []
    for g in cands:
        ind, inv = _plane_invariant(_rows_of(g, coords, K, k), T, K, record)
        if ind and inv:
            out.append({"W": [g], "plane": None, "open": None, "gamma": g})
    return out


def _pencil_search(Kt, tn, gam, ct, Tt, k, cands, record, res, K, seen=None):
    seen = seen if seen is not None else set()
    key = tuple(sorted((j, str(x)) for j, x in gam.items()))
    if key in seen:
        return
    seen.add(key)
    live = tuple(n for n in tn if any(n in free_symbols(x) for x in gam.values()))
    u = _rows_of(gam, ct, Kt, k)
    rec = []
    ech = RecEchelon(Kt, record=rec)
    if not (ech.add(u[0]) and ech.add(u[1])):
        return
    rems = [x for y in u for x in ech._fully_reduce(dict(_apply_sq(y, Tt, Kt))).values()]
    if not live:
        if not rems:
            cands.append({j: to_field(x, K) for j, x in gam.items() if x})
        return
    # conditions on family parameters alone go back to the outer branching
    record.extend(v for v in rems + rec if not (free_symbols(v) & set(live)))
    if not rems:
        # invariant for generic t: keep a specialization if the plane does not move
        from .linalg import rref
        _, red = rref(u, Kt)
        if any(free_symbols(x) & set(live) for r in red for x in r.values()):
            res.note += "; a continuous family of invariant planes"
            return
        for vals in itertools.product(range(1, 4), repeat=len(live)):
            g = {}
            try:
                for j, x in gam.items():
                    for n, v in zip(live, vals):
                        x = x.subs(n, Kt.coerce(v))
                    g[j] = to_field(x, K)
            except ZeroDivisionError:
                continue
            cands.append({j: x for j, x in g.items() if x})
            break
        return
    for f, KF in critical_factors(rems + rec, live):
        sol = _solve_linear_factor(f, KF, live)
        if sol is None:
            res.note += f"; nonlinear condition {f}"
            continue
        name, val = sol
        try:
            g2 = {j: x.subs(name, to_field(val, Kt)) if name in free_symbols(x) else x for j, x in gam.items()}
        except ZeroDivisionError:
            continue
        _pencil_search(Kt, tn, g2, ct, Tt, k, cands, record, res, K, seen)


# ---------------------------------------------------------------------------
# branching over parameter loci

def critical_factors(record, free):
    """Irreducible factors (as fmpq_mpoly) of recorded pivots that involve free parameters."""
    out = {}
    for v in record:
        if not isinstance(v, RatFun):
            continue
        names = ("p",) + v.F.names
        for poly in (v.num,):
            if poly.is_constant():
                continue
            _, facs = poly.factor()
            for f, _m in facs:
                degs = f.degrees()
                used = {names[i] for i, k in enumerate(degs) if k and i}
                if used & set(free):
                    out[str(f)] = (f, v.F)
    return list(out.values())


def _solve_linear_factor(f, K, free):
    """(name, value) with f = 0 <=> name = value, for the first free name in which f is linear."""
    names = ("p",) + K.names
    degs = f.degrees()
    for name in free:
        i = names.index(name)
        if degs[i] != 1:
            continue
        # f = A * name + B with A, B free of name
        A, B = {}, {}
        for e, c in f.to_dict().items():
            if e[i] == 1:
                A[tuple(0 if j == i else e[j] for j in range(len(e)))] = c
            else:
                B[e] = c
        A = K.ctx.from_dict(A)
        B = K.ctx.from_dict(B)
        val = RatFun(K, -B, A)
        if name in free_symbols(val):
            continue
        return name, val
    return None


@dataclass
class Locus:
    family: str
    params: dict             # name -> value (QHalf or RatFun)
    conditions: list
    result: FilterResult


def explore(label, E, fixed=None, conditions=(), depth=3, seen=None, out=None, unresolved=None):
    """Filter the family at symbolic parameters, then recurse into every ℚ(p)-rational branch point."""
    seen = seen if seen is not None else set()
    out = out if out is not None else []
    unresolved = unresolved if unresolved is not None else []
    fixed = dict(fixed or {})
    key = (label, tuple(sorted((k, str(v)) for k, v in fixed.items())))
    if key in seen:
        return out, unresolved
    seen.add(key)
    try:
        fam = make_family(label, E, **fixed, conditions=conditions)
        ok = relations_hold(fam, E)
    except ZeroDivisionError:
        return out, unresolved
    if not ok:
        return out, unresolved
    res = filter_family(fam, E)
    if res.solutions:
        out.append(Locus(label, dict(fam.params), list(conditions), res))
    free = fam.free
    if depth <= 0 or not free:
        return out, unresolved
    for f, KF in critical_factors(res.record, free):
        sol = _solve_linear_factor(f, KF, free)
        if sol is None:
            if not _explore_extension(label, E, fixed, conditions, f, KF, free, out, unresolved):
                unresolved.append((label, dict(fixed), str(f)))
            continue
        name, val = sol
        new = dict(fixed)
        # substitute into the already fixed values, then fix the new one
        rest = [n for n in free if n != name]
        K2 = param_field(rest)
        try:
            v2 = to_field(val, K2)
        except Exception:
            continue
        try:
            for k, v in list(new.items()):
                if isinstance(v, RatFun) and name in free_symbols(v):
                    v = to_field(v, KF).subs(name, val)
                new[k] = to_field(v, K2) if isinstance(v, RatFun) else v
        except ZeroDivisionError:
            continue
        new[name] = v2
        explore(label, E, new, list(conditions) + [f"{name} = {_fmt(v2)}"], depth - 1, seen, out, unresolved)
    return out, unresolved


def _explore_extension(label, E, fixed, conditions, f, KF, free, out, unresolved) -> bool:
    """Filter the family at a root of an irreducible nonlinear factor f (exact, in K0[z]/(f)).

    Returns False when f cannot be handled this way.
    """
    names = ("p",) + KF.names
    degs = f.degrees()
    cand = [n for n in free if degs[names.index(n)] >= 2]
    if not cand:
        return False
    name = min(cand, key=lambda n: degs[names.index(n)])
    i = names.index(name)
    rest = tuple(n for n in free if n != name)
    K0 = param_field(rest)
    coeffs = {}
    for e, c in f.to_dict().items():
        z = tuple(0 if j == i else e[j] for j in range(len(e)))
        coeffs.setdefault(e[i], {})[z] = c
    minpoly = [to_field(RatFun(KF, KF.ctx.from_dict(coeffs.get(k, {})), KF._one), K0)
               for k in range(degs[i] + 1)]
    Kx = AlgExt(K0, minpoly, name)
    try:
        new = {k: Kx.coerce(to_field(v, KF)) if isinstance(v, RatFun) else v for k, v in fixed.items()}
        new[name] = Kx.gen
        fam = make_family(label, E, K=Kx, **new, conditions=list(conditions) + [f"{name} is a root of {f}"])
    except ZeroDivisionError:
        return True
    if not relations_hold(fam, E):
        return True
    res = filter_family(fam, E)
    if res.solutions:
        out.append(Locus(label, dict(fam.params), fam.conditions, res))
    if rest and any(isinstance(v, ExtElem) and any(free_symbols(c) for c in v.c) for v in res.record):
        unresolved.append((label, {k: str(v) for k, v in new.items()},
                           f"branch points over the extension at {f} not followed"))
    return True


# ---------------------------------------------------------------------------
# solutions and deduplication

@dataclass
class CocycleSolution:
    family: str
    params: dict
    conditions: list
    names: list                  # coordinate names beta1, beta2, beta'n
    gamma: list                  # one representative coefficient vector
    W: list                      # basis of admissible coefficient vectors
    chi: dict                    # representative chi on generators
    tau: dict
    index: int | None = None
    matches: list = field(default_factory=list)
    K: object = None

    def describe(self):
        return {"index": self.index, "family": self.family,
                "params": {k: _fmt(v) for k, v in self.params.items()},
                "conditions": self.conditions,
                "locus": [{self.names[j]: _fmt(x) for j, x in w.items()} for w in self.W],
                "representative": {self.names[j]: _fmt(x) for j, x in enumerate(self.gamma) if x},
                "chi": {f"e[{i}]": [_fmt(x) for x in self.chi[i]] for i in IDX},
                "tau": {f"e[{i}]": [[_fmt(x) for x in r] for r in self.tau[i]] for i in IDX}}


def _representative(sol, K):
    """An integer combination of the W basis with nonzero determinant."""
    W, quad = sol["W"], sol["open"]
    n = len(W)
    for coeffs in itertools.chain([[1] + [0] * (n - 1)], itertools.product(range(-2, 3), repeat=n)):
        if not any(coeffs):
            continue
        det = K.zero
        for (a, b), v in quad.items():
            det = det + v * (coeffs[a] * coeffs[b])
        if det:
            g = {}
            for c, w in zip(coeffs, W):
                for j, x in w.items():
                    g[j] = g.get(j, K.zero) + x * c
            return g
    return None


def loci_to_solutions(loci, E):
    sols = []
    for loc in loci:
        res = loc.result
        fam = res.family
        K = fam.K
        for s in res.solutions:
            g = s["gamma"] if s.get("gamma") is not None else _representative(s, K)
            if g is None:
                continue
            gam = [g.get(j, K.zero) for j in range(len(res.space.basis))]
            chi = _combine(res.space, gam, K)
            sols.append(CocycleSolution(
                loc.family, loc.params, loc.conditions, res.space.names, gam, s["W"], chi,
                {i: fam.tau[i].a for i in IDX}, K=K))
    return sols


def chi_plane_key(sol: CocycleSolution, E: Embedding, deg=3):
    """Row-reduced span of (chi_1, chi_2) on normal words up to deg (identifies the derivation)."""
    fam = _family_of(sol, E)
    K = fam.K
    words = [m for m in bnormal_upto(deg) if sum(m)]
    eps = {i: to_field(E.alpha[i], K) for i in IDX}

    rows = ({}, {})
    for n, m in enumerate(words):
        c = [K.zero, K.zero]
        e = K.one
        for g in reversed(word_of(m)):
            t = fam.tau[g].a
            ch = [to_field(x, K) for x in sol.chi[g]]
            c = [t[i][0] * c[0] + t[i][1] * c[1] + ch[i] * e for i in range(2)]
            e = eps[g] * e
        for i in range(2):
            if c[i]:
                rows[i][n] = c[i]
    from .linalg import rref
    piv, red = rref([r for r in rows if r], K)
    return tuple((p, tuple(sorted((k, _fmt(v)) for k, v in r.items()))) for p, r in zip(piv, red))


def _family_of(sol, E):
    return make_family(sol.family, E, K=sol.K, **{k: v for k, v in sol.params.items()})


def dedupe(sols, E):
    out = {}
    for s in sols:
        if any(free_symbols(v) for v in s.params.values()):
            out[("free", s.family, id(s))] = s
            continue
        k = chi_plane_key(s, E)
        if k in out:
            out[k].matches.append((s.family, s.conditions))
        else:
            out[k] = s
    return list(out.values())


# ---------------------------------------------------------------------------
# the listed solutions, used to label what the filter finds

def _listed_solution_specs(E: Embedding, branch: str):
    """(index, family, params, gamma over names) for the listed solutions in a branch."""
    F = QP
    q = F.q
    am, a0, ap = E.alpha[-1], E.alpha[0], E.alpha[1]
    specs = []
    if branch in ("c-", "c+"):
        sgn = 1 if branch == "c-" else -1
        x = sgn * ap / q
        r = ap ** 2 / (a0 * x * (x - ap))          # beta1/beta2
        specs.append((1 if branch == "c-" else 2, "a", {"x": x}, {"beta1": r, "beta2": 1}))
    elif branch == "c2":
        specs.append((3, "f", {}, {"beta1": (q ** 4 + 1) * ap / (q ** 4 * a0), "beta2": 1}))
        specs.append((4, "f", {}, {"beta1": (q ** 4 + 1) * ap / a0, "beta2": 1}))
    elif branch == "c0":
        specs.append((5, "b''", {"s": 0}, {"beta'1": 1}))
        specs.append((6, "b'", {"s": 0, "t": 0}, {"beta'1": 1}))
        specs.append((7, "c'", {"s": 0, "t": 0, "u": 0, "v": 0}, {"beta'1": 1, "beta'4": 1}))
    elif branch == "c0m":
        specs.append((5, "c'", {"s": q ** 2 * am, "u": q ** 4 * am, "t": 0, "v": 0}, {"beta1": 1, "beta2": 1}))
        b2 = 1
        b1 = q ** 2 / ((q ** 4 - 1) * a0) * b2
        bp1 = b2 * (q ** 2 - 1) * a0 / am
        specs.append((6, "a'", {"x": am / q ** 2}, {"beta1": b1, "beta2": b2, "beta'1": bp1}))
        bp1 = (q ** 2 - 1) * a0 / am
        specs.append((7, "c'", {"s": am / q ** 2, "u": q ** 2 * am, "t": 0, "v": 0},
                      {"beta1": 1, "beta'1": bp1, "beta2": 1}))
    elif branch == "c0p":
        b2 = 1
        b1 = -q ** 2 / ((q ** 4 - 1) * a0) * b2
        bp1 = b2 * (1 / q ** 2 - 1) * a0 / ap
        specs.append((5, "a", {"x": q ** 2 * ap}, {"beta1": b1, "beta2": b2, "beta'1": bp1}))
        specs.append((6, "c'", {"s": 0, "u": 0, "t": ap / q ** 2, "v": ap / q ** 4}, {"beta1": 1, "beta2": 1}))
        bp2 = (1 / q ** 2 - 1) * a0 / ap
        specs.append((7, "c'", {"s": 0, "u": 0, "t": q ** 2 * ap, "v": ap / q ** 2},
                      {"beta1": 1, "beta'2": bp2, "beta2": 1}))
    return specs


def listed_solutions(E: Embedding, branch: str):
    """CocycleSolution objects built from the listed branch data."""
    out = []
    for idx, label, params, gam in _listed_solution_specs(E, branch):
        fam = make_family(label, E, K=QP, **params)
        cs = cocycle_space(fam, E)
        g = [QP.coerce(gam.get(n, 0)) for n in cs.names]
        unknown = set(gam) - set(cs.names)
        if unknown:
            raise AssertionError(f"solution {idx}: coordinates {unknown} not present")
        chi = _combine(cs, g, QP)
        sol = CocycleSolution(label, fam.params, [], cs.names, g, [], chi,
                              {i: fam.tau[i].a for i in IDX}, index=idx)
        out.append(sol)
    return out


def branch_of(E: Embedding) -> str:
    """Branch tag of the embedding for labelling solutions."""
    q = QP.q
    c = E.c
    if not c:
        am, ap = E.alpha[-1], E.alpha[1]
        if not am and not ap:
            return "c0"
        return "c0m" if am else "c0p"
    if c == -q / (q + 1) ** 2:
        return "c-"
    if c == q / (1 - q) ** 2:
        return "c+"
    from .qfield import c_of
    if c == c_of(2):
        return "c2"
    return "generic"


@dataclass
class ClassifyReport:
    branch: str
    solutions: list
    unresolved: list
    families: list
    spurious: list

    def describe(self):
        return {"branch": self.branch, "count": len(self.solutions),
                "solutions": [s.describe() for s in self.solutions],
                "unmatched": [s.describe() for s in self.spurious],
                "unresolved_branch_factors": [f"({l}) {p}: {f}" for l, p, f in self.unresolved]}


def filter_seven(E: Embedding, depth: int = 4) -> ClassifyReport:
    """All distinct solutions of the filter at the c value and character of E."""
    fams = solve_representations(E)
    loci, unresolved, seen = [], [], set()
    for fam in fams:
        fixed = {k: v for k, v in fam.params.items() if not free_symbols(v)}
        explore(fam.label, E, fixed, fam.conditions, depth, seen, loci, unresolved)
    sols = dedupe(loci_to_solutions(loci, E), E)
    branch = branch_of(E)
    spurious = []
    if branch != "generic":
        refs = {chi_plane_key(s, E): s.index for s in listed_solutions(E, branch)}
        for s in sols:
            k = chi_plane_key(s, E)
            s.index = refs.get(k)
            if s.index is None:
                spurious.append(s)
    else:
        spurious = list(sols)
    sols.sort(key=lambda s: (s.index is None, s.index or 0))
    return ClassifyReport(branch, sols, unresolved, [f.label for f in fams], spurious)


# ---------------------------------------------------------------------------
# solutions as calculi

SOLUTION_BRANCH = {1: "c-", 2: "c+", 3: "c2", 4: "c2", 5: "c0", 6: "c0", 7: "c0"}
BRANCH_PRESET = {"c-": "c-", "c+": "c+", "c2": "c2", "c1": "c1", "c0": "c0", "c0m": "c0m", "c0p": "c0p"}


def branch_embedding(branch: str, alg=None) -> Embedding:
    from .ncpoly import SLq2
    alg = alg or SLq2()
    return find_embedding(*preset_alphas(BRANCH_PRESET[branch]), alg=alg)


def solution_fodc(sol: CocycleSolution, E: Embedding, d: int = 4):
    """The calculus delta(b).a = chi(b1) (x) b2 a of a solution (coefficients in Q(p))."""
    from .calculus import CocycleFODC
    if sol.K not in (None, QP):
        raise ValueError("solution has coefficients outside Q(p)")
    F = E.F
    tau = {i: [[F.coerce(to_field(x, QP)) for x in r] for r in sol.tau[i]] for i in IDX}
    chi = {i: [F.coerce(to_field(x, QP)) for x in sol.chi[i]] for i in IDX}
    return CocycleFODC(E, tau, chi, d, name=f"solution {sol.index}")


def find_solution(k: int, E: Embedding, report: ClassifyReport | None = None) -> CocycleSolution:
    report = report or filter_seven(E)
    for s in report.solutions:
        if s.index == k:
            return s
    raise LookupError(f"solution {k} not found on branch {report.branch}")


def generator_image_dim(sol: CocycleSolution) -> int:
    """dim span{chi(e_-1), chi(e_0), chi(e_1)}."""
    K = sol.K or QP
    ech = Echelon(K)
    for i in IDX:
        v = {n: x for n, x in enumerate(sol.chi[i]) if x}
        if v:
            ech.add(v)
    return len(ech)


def construction_for(k: int, E: Embedding, d: int = 4, branch: str | None = None):
    """The explicit construction identified with solution k (None if there is none)."""
    from . import calculus as C
    branch = branch or branch_of(E)
    if k == 1 and branch == "c-":
        return C.xy_construct(E, d)
    if k in (3, 4) and branch == "c2":
        return C.c2_construct(E, "i" if k == 3 else "ii", d)
    if k == 5 and branch == "c0":
        return C.spin2_construct(E, prime=False, d=d)
    if k == 6 and branch == "c0":
        return C.spin2_construct(E, prime=True, d=d)
    if k == 7 and branch == "c0":
        return C.IdealFODC(C.IdealTrunc.augmentation_square(E, d), name="(B+)^2")
    return None


def verify_solution(k: int, branch: str | None = None, d: int = 4, F=None) -> dict:
    """Build solution k, check equivariance and dims, and compare with its construction.

    For the c(2) constructions (which do not come from right ideals) the
    comparison is with delta_{R_delta}: the solution must equal the calculus
    of the ideal of the construction while differing from the construction.
    The solution is always found over Q(p); ``F`` (a specialized field)
    only changes where the calculus checks are evaluated.
    """
    from . import calculus as C
    from .ncpoly import SLq2
    branch = branch or SOLUTION_BRANCH[k]
    E0 = branch_embedding(branch)
    sol = find_solution(k, E0)
    E = E0 if F is None or F is QP else branch_embedding(branch, SLq2(F))
    D = solution_fodc(sol, E, d + 1)
    out = {"solution": k, "branch": branch, "family": sol.family, "conditions": sol.conditions,
           "degree": d, "checks": {}}
    chk = out["checks"]
    chk["equivariant"] = C.equivariance_check(D, min(d, 3))
    r, l = C.dims(D, "right", d), C.dims(D, "left", d)
    out["dims"] = {"right": r.as_dict(), "left": l.as_dict()}
    out["generator_image_dim"] = generator_image_dim(sol)
    X = construction_for(k, E, d, branch)
    if X is not None:
        if k in (3, 4):
            chk["equals_construction"] = C.equal_check(D, X, d)
            L = C.ideal_from_derivation(X, d)
            chk["construction_from_left_ideal"] = C.equal_check(C.derivation_from_ideal(L), X, d)
            R = C.ideal_from_derivation(X, d, side="right")
            # R is a right ideal containing every e_i+, which generate B+; the
            # comparison is made below the truncation edge
            chk["right_ideal_is_augmentation"] = R.equals(C.IdealTrunc.augmentation(E, d), d - 2)
        else:
            chk["equals_construction"] = C.equal_check(D, X, d)
    out["passed"] = all(chk.values())
    return out
