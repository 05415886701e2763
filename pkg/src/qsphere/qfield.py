"""Exact arithmetic in Q(p), where p is a square root of q.

Elements are stored as a reduced quotient num/den of flint ``fmpq_poly``
with a monic denominator.  Half-integer powers of q become integer powers
of p, so every scalar in the package is a rational function of p.

Three coefficient domains share one small interface (``zero``, ``one``,
``p``, ``q``, ``coerce``, ``is_zero``):

* ``QP``            generic Q(p), the authoritative field;
* ``Specialized``   Q with p replaced by a rational number (smoke mode);
* ``ParamField``    rational functions in p and extra parameter symbols,
                    used internally by the representation solver.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce

from flint import fmpq, fmpq_poly, fmpz, fmpq_mpoly_ctx, fmpq_mpoly

_P = fmpq_poly([0, 1])
_ONE = fmpq_poly([1])


class PoleError(ZeroDivisionError):
    """Raised when a specialization hits a root of the denominator."""


class QHalf:
    """Element of Q(p) in canonical form: gcd(num, den) = 1, den monic."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, num=0, den=None, _reduced=False):
        if not isinstance(num, fmpq_poly):
            num = fmpq_poly([num]) if not isinstance(num, (list, tuple)) else fmpq_poly(list(num))
        if den is None:
            den = _ONE
        elif not isinstance(den, fmpq_poly):
            den = fmpq_poly([den])
        if not _reduced:
            if den == 0:
                raise ZeroDivisionError("zero denominator in QHalf")
            if num == 0:
                den = _ONE
            else:
                g = num.gcd(den)
                if g != 1:
                    num = num // g
                    den = den // g
                lc = den[den.degree()]
                if lc != 1:
                    num = num / lc
                    den = den / lc
        self.num = num
        self.den = den
        self._h = None

    # construction helpers
    @classmethod
    def from_poly(cls, coeffs):
        return cls(fmpq_poly(list(coeffs)))

    @classmethod
    def p_pow(cls, n: int) -> "QHalf":
        if n >= 0:
            return cls(_P ** n, _ONE, True)
        return cls(_ONE, _P ** (-n), True)

    @classmethod
    def parse(cls, text: str) -> "QHalf":
        from .parse import parse_scalar
        return parse_scalar(text)

    # predicates
    def is_zero(self) -> bool:
        return self.num == 0

    def __bool__(self):
        return self.num != 0

    def is_const(self) -> bool:
        return self.den == 1 and self.num.degree() <= 0

    # arithmetic
    @staticmethod
    def _lift(y):
        if isinstance(y, QHalf):
            return y
        if isinstance(y, (int, fmpz, fmpq)):
            return QHalf(fmpq_poly([y]), _ONE, True)
        if isinstance(y, Fraction):
            return QHalf(fmpq_poly([fmpq(y.numerator, y.denominator)]), _ONE, True)
        return NotImplemented

    def __add__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        if self.den == y.den:
            return QHalf(self.num + y.num, self.den)
        if self.den == 1:
            return QHalf(self.num * y.den + y.num, y.den, True)
        if y.den == 1:
            return QHalf(self.num + y.num * self.den, self.den, True)
        return QHalf(self.num * y.den + y.num * self.den, self.den * y.den)

    __radd__ = __add__

    def __neg__(self):
        return QHalf(-self.num, self.den, True)

    def __sub__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return self + (-y)

    def __rsub__(self, y):
        return (-self) + y

    def __mul__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        if self.num == 0 or y.num == 0:
            return QHalf(0)
        if self.den == 1 and y.den == 1:
            return QHalf(self.num * y.num, _ONE, True)
        return QHalf(self.num * y.num, self.den * y.den)

    __rmul__ = __mul__

    def inv(self) -> "QHalf":
        if self.num == 0:
            raise ZeroDivisionError("division by zero in Q(p)")
        return QHalf(self.den, self.num)

    def __truediv__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return self * y.inv()

    def __rtruediv__(self, y):
        return self.inv() * y

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return QHalf(self.num ** n, self.den ** n, True)

    def __eq__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return False
        return self.num == y.num and self.den == y.den

    def __hash__(self):
        if self._h is None:
            self._h = hash((tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._h

    # evaluation
    def specialize(self, p0) -> Fraction:
        """Exact value at p = p0, raising PoleError at a pole."""
        p0 = fmpq(Fraction(p0).numerator, Fraction(p0).denominator)
        dv = self.den(p0)
        if dv == 0:
            bad = [f for f, _ in self.den.factor()[1] if f(p0) == 0]
            raise PoleError(f"denominator factor {render_poly(bad[0])} vanishes at p = {p0}")
        v = self.num(p0) / dv
        return Fraction(int(v.p), int(v.q))

    def __repr__(self):
        return f"QHalf({render(self)!r})"

    def __str__(self):
        return render(self)


# ---------------------------------------------------------------------------
# rendering

def _int_coeffs(poly: fmpq_poly):
    """(integer coefficient list, rational scale) with poly = scale * intpoly."""
    cs = poly.coeffs()
    den = reduce(lambda u, v: u * v // _gcd(u, v), [int(c.q) for c in cs], 1)
    ints = [int(c.p) * (den // int(c.q)) for c in cs]
    g = reduce(_gcd, [abs(v) for v in ints if v], 0) or 1
    ints = [v // g for v in ints]
    return ints, Fraction(g, den)


def _gcd(u, v):
    while v:
        u, v = v, u % v
    return abs(u)


def _laurent_terms(coeffs, shift=0):
    """Render integer coefficients c_i p^(i+shift), highest power first."""
    out = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        e = i + shift
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "p" if e == 1 else f"p^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        out.append((sign, body))
    if not out:
        return "0"
    s = "".join(sg + b for sg, b in out)
    return s[1:] if s[0] == "+" else s


def render_poly(poly: fmpq_poly) -> str:
    ints, scale = _int_coeffs(poly) if poly != 0 else ([0], Fraction(1))
    if scale.denominator == 1:
        return _laurent_terms([v * scale.numerator for v in ints])
    return f"({_laurent_terms([v * scale.numerator for v in ints])})/{scale.denominator}"


def render(x: QHalf) -> str:
    """Canonical string: Laurent numerator over a p-free factored denominator."""
    num, den = x.num, x.den
    if num == 0:
        return "0"
    # move powers of p out of the denominator into negative exponents
    shift = 0
    while den.degree() > 0 and den[0] == 0:
        den = den // _P
        shift -= 1
    while num[0] == 0:
        num = num // _P
        shift += 1
    factors = []
    if den.degree() > 0:
        _, fl = den.factor()
        for f, m in fl:
            fi, _ = _int_coeffs(f)
            if fi[-1] < 0:
                fi = [-v for v in fi]
            factors.append((fi, m))
        factors.sort(key=lambda t: (len(t[0]), t[0]))
    # den = const * prod(fi^m); absorb the constant into the numerator
    dprod = _ONE
    for fi, m in factors:
        dprod *= fmpq_poly(fi) ** m
    k = dprod[dprod.degree()]
    num = num * k
    ints, scale = _int_coeffs(num)
    nstr = _laurent_terms([v * scale.numerator for v in ints], shift)
    dparts = []
    if scale.denominator != 1:
        dparts.append(str(scale.denominator))
    for fi, m in factors:
        body = f"({_laurent_terms(fi)})"
        dparts.append(body if m == 1 else f"{body}^{m}")
    if not dparts:
        return nstr
    if len(dparts) == 1:
        dstr = dparts[0]
    else:
        dstr = "(" + "*".join(dparts) + ")"
    return f"({nstr})/{dstr}"


# ---------------------------------------------------------------------------
# fields

class QPField:
    """The generic field Q(p)."""

    name = "Q(p)"
    authoritative = True

    def __init__(self):
        self.zero = QHalf(0)
        self.one = QHalf(1)
        self.p = QHalf(_P, _ONE, True)
        self.q = self.p * self.p
        self.pinv = self.p.inv()
        self.qinv = self.q.inv()

    def coerce(self, x):
        if isinstance(x, QHalf):
            return x
        return QHalf._lift(x)

    def from_qhalf(self, x: QHalf):
        return x

    @staticmethod
    def is_zero(x) -> bool:
        return x.num == 0

    def __repr__(self):
        return "QP"


class SpecializedField:
    """Q with p fixed to a rational value; a fast non-authoritative track."""

    authoritative = False

    def __init__(self, p0):
        p0 = Fraction(p0)
        if p0 in (0, 1, -1):
            raise ValueError("p0 must avoid 0 and +-1")
        self.p0 = p0
        self.name = f"Q[p={p0}]"
        self.zero = fmpq(0)
        self.one = fmpq(1)
        self.p = fmpq(p0.numerator, p0.denominator)
        self.q = self.p * self.p
        self.pinv = 1 / self.p
        self.qinv = 1 / self.q

    def coerce(self, x):
        if isinstance(x, fmpq):
            return x
        if isinstance(x, QHalf):
            return self.from_qhalf(x)
        if isinstance(x, Fraction):
            return fmpq(x.numerator, x.denominator)
        return fmpq(x)

    def from_qhalf(self, x: QHalf):
        v = x.specialize(self.p0)
        return fmpq(v.numerator, v.denominator)

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0

    def __repr__(self):
        return f"SpecializedField({self.p0})"


QP = QPField()


def c_of(n: int) -> QHalf:
    """c(n) = -q^(2n) / (q^(2n) + 1)^2."""
    q2n = QP.q ** (2 * n)
    return -q2n / (q2n + 1) ** 2


# ---------------------------------------------------------------------------
# rational functions in p and extra symbols

class ParamField:
    """Field of fractions of Q[p, t_1, ..., t_k] over flint multivariate polys.

    Elements are ``RatFun`` values.  Only used where genuinely free
    parameters appear (representation families, embedding gauges).
    """

    authoritative = True

    def __init__(self, names):
        self.names = tuple(names)
        self.ctx = fmpq_mpoly_ctx.get(("p",) + self.names, "lex")
        gens = self.ctx.gens()
        self._one = self.ctx.from_dict({(0,) * (len(self.names) + 1): 1})
        self.zero = RatFun(self, self.ctx.from_dict({}), self._one, True)
        self.one = RatFun(self, self._one, self._one, True)
        self.p = RatFun(self, gens[0], self._one, True)
        self.q = self.p * self.p
        self.pinv = self.one / self.p
        self.qinv = self.one / self.q
        self.syms = {n: RatFun(self, g, self._one, True) for n, g in zip(self.names, gens[1:])}
        self.name = "Q(p," + ",".join(self.names) + ")"

    def sym(self, name):
        return self.syms[name]

    def poly_from_qpoly(self, f: fmpq_poly):
        k = len(self.names)
        return self.ctx.from_dict({(i,) + (0,) * k: c for i, c in enumerate(f.coeffs()) if c != 0})

    def from_qhalf(self, x: QHalf):
        return RatFun(self, self.poly_from_qpoly(x.num), self.poly_from_qpoly(x.den))

    def coerce(self, x):
        if isinstance(x, RatFun):
            return x
        if isinstance(x, QHalf):
            return self.from_qhalf(x)
        if isinstance(x, Fraction):
            x = fmpq(x.numerator, x.denominator)
        return RatFun(self, self._one * x, self._one, True)

    @staticmethod
    def is_zero(x) -> bool:
        return x.num == 0

    def to_qhalf(self, x: "RatFun") -> QHalf:
        """Convert a parameter-free value back to Q(p)."""
        return QHalf(_mpoly_to_qpoly(x.num), _mpoly_to_qpoly(x.den))

    def __repr__(self):
        return f"ParamField({self.names})"


def _mpoly_to_qpoly(f: fmpq_mpoly) -> fmpq_poly:
    d = f.to_dict()
    if not d:
        return fmpq_poly([])
    deg = max(e[0] for e in d)
    cs = [fmpq(0)] * (deg + 1)
    for e, c in d.items():
        if any(e[1:]):
            raise ValueError("value still depends on parameters")
        cs[e[0]] = c
    return fmpq_poly(cs)


class RatFun:
    """Reduced fraction of multivariate polynomials (denominator has positive leading coefficient)."""

    __slots__ = ("F", "num", "den")

    def __init__(self, F, num, den, _reduced=False):
        self.F = F
        if not _reduced:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if num == 0:
                den = F._one
            else:
                g = num.gcd(den)
                if g != 1:
                    num = num / g
                    den = den / g
                lc = den.leading_coefficient()
                if lc != 1:
                    num = num / lc
                    den = den / lc
        self.num = num
        self.den = den

    def _lift(self, y):
        if isinstance(y, RatFun):
            return y
        if isinstance(y, (int, fmpz, fmpq, Fraction, QHalf)):
            return self.F.coerce(y)
        return NotImplemented

    def __add__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        if self.den == y.den:
            return RatFun(self.F, self.num + y.num, self.den)
        return RatFun(self.F, self.num * y.den + y.num * self.den, self.den * y.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(self.F, -self.num, self.den, True)

    def __sub__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return self + (-y)

    def __rsub__(self, y):
        return (-self) + y

    def __mul__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        if self.num == 0 or y.num == 0:
            return self.F.zero
        return RatFun(self.F, self.num * y.num, self.den * y.den)

    __rmul__ = __mul__

    def inv(self):
        if self.num == 0:
            raise ZeroDivisionError("division by zero")
        return RatFun(self.F, self.den, self.num)

    def __truediv__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return self * y.inv()

    def __rtruediv__(self, y):
        return self.inv() * y

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        return RatFun(self.F, self.num ** n, self.den ** n, True)

    def __eq__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return False
        return self.num == y.num and self.den == y.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __bool__(self):
        return self.num != 0

    def is_zero(self):
        return self.num == 0

    def subs(self, name, value: "RatFun") -> "RatFun":
        """Substitute a symbol by a rational function."""
        F = self.F
        gens = [F.ctx.gens()[0]] + [F.ctx.gens()[i + 1] for i in range(len(F.names))]
        idx = F.names.index(name) + 1
        # homogenize: f(.., v/w, ..) = F(..)/w^deg
        vn, vd = value.num, value.den

        def sub(poly):
            dg = poly.degrees()[idx]
            terms = F.zero.num
            for e, c in poly.to_dict().items():
                k = e[idx]
                mono = F.ctx.from_dict({tuple(0 if j == idx else e[j] for j in range(len(e))): c})
                terms += mono * vn ** k * vd ** (dg - k)
            return terms, dg

        n, dn = sub(self.num)
        d, dd = sub(self.den)
        if dn >= dd:
            return RatFun(F, n, d * vd ** (dn - dd))
        return RatFun(F, n * vd ** (dd - dn), d)

    def __repr__(self):
        return render_ratfun(self)

    __str__ = __repr__


def _mpoly_str(f) -> str:
    s = str(f).replace(" ", "")
    return s


def render_ratfun(x: RatFun) -> str:
    """Rendering in the expression grammar: numerator, then ``/`` and the denominator if any."""
    n = _mpoly_str(x.num)
    single = len(x.num.to_dict()) == 1
    if x.den == 1:
        return n
    d = _mpoly_str(x.den)
    dsingle = len(x.den.to_dict()) == 1 and "*" not in d
    return f"{n if single else '(' + n + ')'}/{d if dsingle else '(' + d + ')'}"
