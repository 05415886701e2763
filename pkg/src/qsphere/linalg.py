"""Exact sparse linear algebra over any field from ``qfield``.

Vectors are dicts ``{column: value}`` without zero entries.  ``Echelon``
keeps an incrementally built echelon basis; ``QMatrix`` is the dense
row-major carrier used at module boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from flint import fmpz_poly

from .qfield import QP, QHalf
from flint import fmpq_poly


def vec_add(u: dict, v: dict, s=None) -> dict:
    """u + s*v (s defaults to 1); returns a new dict."""
    out = dict(u)
    for k, x in v.items():
        if s is not None:
            x = x * s
        y = out.get(k)
        if y is None:
            out[k] = x
        else:
            y = y + x
            if y:
                out[k] = y
            else:
                del out[k]
    return out


def vec_scale(v: dict, s) -> dict:
    if not s:
        return {}
    return {k: x * s for k, x in v.items()}


class Echelon:
    """Incremental echelon form: ``add`` reduces a vector and keeps it if new.

    Pivot of a row is its smallest key under ``key_order`` (default:
    natural order of the keys).  Rows are normalized to pivot 1.
    """

    def __init__(self, F=QP, order=None):
        self.F = F
        self.rows: dict = {}        # pivot -> row
        self.order = order or (lambda k: k)
        self.tags: dict = {}        # pivot -> combination of inputs (if tracking)
        self.track = False

    def __len__(self):
        return len(self.rows)

    def _pivot(self, v):
        return min(v, key=self.order)

    def reduce(self, v: dict, combo: dict | None = None):
        """Reduce v against the basis; returns remainder (and combo when tracking)."""
        v = dict(v)
        while v:
            hit = None
            for k in sorted(v, key=self.order):
                if k in self.rows:
                    hit = k
                    break
            if hit is None:
                break
            s = -v[hit]
            v = vec_add(v, self.rows[hit], s)
            if combo is not None:
                combo = vec_add(combo, self.tags[hit], s)
        return v if combo is None else (v, combo)

    def _fully_reduce(self, v):
        # only pivots of existing rows matter; loop until none present
        changed = True
        while changed:
            changed = False
            for k in list(v):
                if k in self.rows and k in v:
                    v = vec_add(v, self.rows[k], -v[k])
                    changed = True
        return v

    def add(self, v: dict, tag=None) -> bool:
        """Insert v; returns True iff it was independent of the basis."""
        if self.track:
            r, combo = self.reduce(v, {tag: self.F.one} if tag is not None else {})
        else:
            r = self._fully_reduce(dict(v))
            combo = None
        if not r:
            return False
        piv = self._pivot(r)
        s = self.F.one / r[piv]
        r = vec_scale(r, s)
        self.rows[piv] = r
        if self.track:
            self.tags[piv] = vec_scale(combo, s)
        return True

    def contains(self, v: dict) -> bool:
        return not self._fully_reduce(dict(v))

    def basis(self):
        return [self.rows[k] for k in sorted(self.rows, key=self.order)]


def rref(rows, F=QP, order=None):
    """Reduced row echelon form of a list of sparse rows.

    Returns (pivot_list, reduced_rows) with reduced_rows[i] having pivot
    pivot_list[i], every pivot column cleared in the other rows.
    """
    E = Echelon(F, order)
    for r in rows:
        E.add(r)
    piv = sorted(E.rows, key=E.order)
    # back substitution: clear each pivot from earlier rows
    for i in range(len(piv) - 1, -1, -1):
        pi = piv[i]
        ri = E.rows[pi]
        for j in range(i):
            rj = E.rows[piv[j]]
            x = rj.get(pi)
            if x:
                E.rows[piv[j]] = vec_add(rj, ri, -x)
    return piv, [E.rows[k] for k in piv]


def kernel_sparse(rows, cols, F=QP):
    """Basis of {v : row.v = 0 for all rows} over the column list ``cols``.

    Each basis vector has a 1 at one free column and zeros at the other
    free columns (pivot-normalized form).
    """
    index = {c: i for i, c in enumerate(cols)}
    piv, red = rref(rows, F, order=lambda k: index[k])
    pivset = set(piv)
    basis = []
    for fc in cols:
        if fc in pivset:
            continue
        v = {fc: F.one}
        for pc, r in zip(piv, red):
            x = r.get(fc)
            if x:
                v[pc] = -x
        basis.append(v)
    return basis


@dataclass
class QMatrix:
    """Dense matrix with field entries in row-major order."""

    rows: int
    cols: int
    entries: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, data, F=QP):
        data = [[F.coerce(x) for x in r] for r in data]
        nc = len(data[0]) if data else 0
        return cls(len(data), nc, [x for r in data for x in r])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def sparse_rows(self):
        return [{j: x for j, x in enumerate(self.row(i)) if x} for i in range(self.rows)]

    def mul_vec(self, v):
        return [sum((self[i, j] * v[j] for j in range(self.cols)), v[0] * 0) for i in range(self.rows)]


@dataclass
class Solution:
    """Solution set descriptor: empty when inconsistent."""

    consistent: bool
    particular: list | None
    kernel: list
    rank: int


def kernel(M: QMatrix, F=QP):
    """Kernel basis (dense vectors) and rank of M."""
    ks = kernel_sparse(M.sparse_rows(), list(range(M.cols)), F)
    dense = [[v.get(j, F.zero) for j in range(M.cols)] for v in ks]
    return dense, M.cols - len(ks)


def rank(M: QMatrix, F=QP) -> int:
    E = Echelon(F)
    for r in M.sparse_rows():
        E.add(r)
    return len(E)


def solve_linear(M: QMatrix, rhs: QMatrix, F=QP) -> Solution:
    """Solve M x = rhs (rhs a single column) exactly."""
    if rhs.rows != M.rows or rhs.cols != 1:
        raise ValueError("shape mismatch")
    n = M.cols
    aug = []
    for i, r in enumerate(M.sparse_rows()):
        b = rhs[i, 0]
        if b:
            r = dict(r)
            r[n] = b
        aug.append(r)
    piv, red = rref(aug, F)
    rk = len([k for k in piv if k < n])
    if n in piv:
        return Solution(False, None, [], rk)
    x = [F.zero] * n
    for pc, r in zip(piv, red):
        x[pc] = r.get(n, F.zero)
    ker, _ = kernel(M, F)
    return Solution(True, x, ker, rk)



class PolyEchelon:
    """Fraction-free echelon form for vectors over Q(p) (rank and membership only).

    Rows are stored as primitive integer polynomial vectors; reduction is a
    cross-multiplication followed by removal of the polynomial content, which
    avoids one gcd per entry.
    """

    def __init__(self, order=None):
        self.rows: dict = {}
        self.order = order or (lambda k: k)

    def __len__(self):
        return len(self.rows)

    @staticmethod
    def _prim(v: dict) -> dict:
        g = None
        for x in v.values():
            g = x if g is None else g.gcd(x)
            if g.degree() == 0 and abs(g[0]) == 1:
                return v
        return {k: x // g for k, x in v.items()}

    @staticmethod
    def from_field(v: dict) -> dict:
        """Scale a QHalf vector to a primitive fmpz_poly vector."""
        den = None
        for x in v.values():
            den = x.den if den is None else den * x.den // den.gcd(x.den)
        num = {k: x.num * (den // x.den) for k, x in v.items()}
        m = 1
        for y in num.values():
            d = int(y.denom())
            m = m * d // gcd(m, d)
        return PolyEchelon._prim({k: fmpz_poly([int(c) for c in (y * m).coeffs()]) for k, y in num.items()})

    def _reduce(self, v: dict) -> dict:
        order = self.order
        while v:
            hit = None
            for k in v:
                if k in self.rows and (hit is None or order(k) < order(hit)):
                    hit = k
            if hit is None:
                return v
            r = self.rows[hit]
            a, b = r[hit], v[hit]
            g = a.gcd(b)
            if g.degree() > 0 or abs(g[0]) != 1:
                a, b = a // g, b // g
            out = {k: x * a for k, x in v.items()}
            for k, x in r.items():
                y = out.get(k)
                y = -(x * b) if y is None else y - x * b
                if y == 0:
                    out.pop(k, None)
                else:
                    out[k] = y
            v = self._prim(out) if out else out
        return v

    def add(self, v: dict) -> bool:
        """Insert v (QHalf entries); True iff independent of the current rows."""
        if not v:
            return False
        r = self._reduce(self.from_field(v))
        if not r:
            return False
        self.rows[min(r, key=self.order)] = r
        return True

    def contains(self, v: dict) -> bool:
        return not v or not self._reduce(self.from_field(v))

    def field_rows(self, F=QP):
        """Rows converted back to field entries (same span)."""
        return {p: {k: F.coerce(QHalf(fmpq_poly(x.coeffs()))) for k, x in r.items()}
                for p, r in self.rows.items()}


def make_echelon(F=QP, order=None):
    """Fraction-free echelon over the generic field, plain echelon otherwise."""
    if F is QP:
        return PolyEchelon(order)
    return Echelon(F, order)
