"""Exact dense linear algebra over Q and over Q(i).

Scalars are :class:`fractions.Fraction` for the rationals and :class:`GaussRat`
for the Gaussian rationals.  Matrices are immutable :class:`Mat` objects holding
rows as tuples.  All elimination routines reduce to the unique reduced row
echelon form, so every strategy returns bit-identical results.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "GaussRat",
    "Mat",
    "as_scalar",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "common_kernel",
    "inertia",
    "dot",
    "is_zero_vector",
    "primitive",
]


class GaussRat:
    """Element ``re + im*i`` of the field Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRat(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        num = self * o.conjugate()
        return GaussRat(num.re / nrm, num.im / nrm)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return GaussRat(1) / self ** (-k)
        out = GaussRat(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussRat(0, 1)


def as_scalar(x):
    """Normalise ints and numeric strings to Fraction; leave GaussRat alone."""
    if isinstance(x, (Fraction, GaussRat)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    return Fraction(x)


def _real_if_possible(x):
    if isinstance(x, GaussRat) and x.im == 0:
        return x.re
    return x


def dot(u: Sequence, v: Sequence):
    s = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def is_zero_vector(v: Iterable) -> bool:
    return not any(v)


def primitive(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale a nonzero rational vector to a primitive integral one whose first
    nonzero entry is positive."""
    v = [Fraction(x) for x in v]
    nz = [x for x in v if x]
    if not nz:
        raise ValueError("zero vector has no primitive representative")
    den = 1
    for x in nz:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    if nz[0] < 0:
        g = -g
    return tuple(Fraction(a // g) for a in ints)


class Mat:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_scalar(x) for x in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, cols: int) -> "Mat":
        m = object.__new__(cls)
        m._data = rows
        m.rows = len(rows)
        m.cols = cols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        one, z = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def diag(cls, entries: Sequence) -> "Mat":
        n = len(entries)
        z = Fraction(0)
        return cls._raw(
            tuple(tuple(as_scalar(entries[i]) if i == j else z for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Mat":
        if not columns:
            return cls._raw(tuple(() for _ in range(rows or 0)), 0)
        return cls(zip(*columns), cols=len(columns))

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            i, j = ij
            return self._data[i][j]
        return self._data[ij]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "Mat":
        if self.rows == 0:
            return Mat._raw((), 0)
        return Mat._raw(tuple(zip(*self._data)), self.rows)

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.T._data
            out = []
            for r in self._data:
                nz = [(k, a) for k, a in enumerate(r) if a]
                out.append(tuple(_dot_sparse(nz, c) for c in ocols))
            return Mat._raw(tuple(out), other.cols)
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("vector length does not match matrix columns")
        return tuple(dot(r, vec) for r in self._data)

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __neg__(self) -> "Mat":
        return Mat._raw(tuple(tuple(-a for a in r) for r in self._data), self.cols)

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            return NotImplemented
        c = as_scalar(c)
        return Mat._raw(tuple(tuple(c * a for a in r) for r in self._data), self.cols)

    __rmul__ = __mul__

    def conjugate(self) -> "Mat":
        return Mat._raw(
            tuple(tuple(a.conjugate() if isinstance(a, GaussRat) else a for a in r) for r in self._data),
            self.cols,
        )

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def is_gaussian(self) -> bool:
        return any(isinstance(a, GaussRat) and a.im != 0 for r in self._data for a in r)

    def flatten(self) -> tuple:
        return tuple(a for r in self._data for a in r)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(a == b for r, s in zip(self._data, other._data) for a, b in zip(r, s))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, tuple(hash(a) for a in self.flatten())))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(a) for a in r) for r in self._data)
        return f"Mat({self.rows}x{self.cols}: [{body}])"


def _dot_sparse(nz, col):
    s = Fraction(0)
    for k, a in nz:
        b = col[k]
        if b:
            s = s + a * b
    return s


def _rows_of(m) -> list[list]:
    if isinstance(m, Mat):
        return [list(r) for r in m._data]
    return [[as_scalar(x) for x in r] for r in m]


def _gauss_rref(a: list[list], ncols: int) -> tuple[list[list], list[int]]:
    pivots: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            inv = 1 / piv
            a[r] = [x * inv if x else x for x in a[r]]
        prow = a[r]
        nz = [(k, prow[k]) for k in range(c, ncols) if prow[k]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    row = a[i]
                    for k, x in nz:
                        row[k] = row[k] - f * x
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _bareiss_rref(a: list[list], ncols: int) -> tuple[list[list], list[int]]:
    # Fraction-free forward elimination on integers, then normalisation to RREF.
    ints = []
    for row in a:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        ints.append([int(x * den) for x in row])
    nrows = len(ints)
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if ints[i][c]), None)
        if p is None:
            continue
        ints[r], ints[p] = ints[p], ints[r]
        piv = ints[r][c]
        for i in range(r + 1, nrows):
            f = ints[i][c]
            row = ints[i]
            prow = ints[r]
            for k in range(c, ncols):
                row[k] = (piv * row[k] - f * prow[k]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    echelon = [[Fraction(x) for x in row] for row in ints[:r]]
    # back substitution to reduced form
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        inv = 1 / echelon[i][c]
        echelon[i] = [x * inv for x in echelon[i]]
        for j in range(i):
            f = echelon[j][c]
            if f:
                echelon[j] = [x - f * y for x, y in zip(echelon[j], echelon[i])]
    return echelon, pivots


def rref(m, method: str = "auto", ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns.

    ``method`` is ``"gauss"`` (ordinary exact elimination), ``"bareiss"``
    (fraction-free, rational input only) or ``"auto"``, which picks Bareiss
    when every entry is an integer.
    """
    a = _rows_of(m)
    if ncols is None:
        ncols = m.cols if isinstance(m, Mat) else (len(a[0]) if a else 0)
    if not a or ncols == 0:
        return [], []
    if method == "auto":
        method = "gauss"
        if all(isinstance(x, Fraction) and x.denominator == 1 for r in a for x in r):
            method = "bareiss"
    if method == "bareiss":
        if any(isinstance(x, GaussRat) for r in a for x in r):
            raise ValueError("Bareiss elimination is implemented for rational matrices only")
        return _bareiss_rref(a, ncols)
    if method != "gauss":
        raise ValueError(f"unknown elimination method {method!r}")
    rows, piv = _gauss_rref(a, ncols)
    return [[_real_if_possible(x) for x in r] for r in rows], piv


def rank(m, method: str = "auto") -> int:
    return len(rref(m, method)[1])


def kernel_basis(m, method: str = "auto", ncols: int | None = None) -> list[tuple]:
    """Basis of the right null space, one vector per free column of the RREF."""
    if ncols is None:
        ncols = m.cols if isinstance(m, Mat) else (len(m[0]) if m else 0)
    rows, pivots = rref(m, method, ncols=ncols)
    pivset = set(pivots)
    basis = []
    zero, one = Fraction(0), Fraction(1)
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for row, pc in zip(rows, pivots):
            x = row[free]
            if x:
                v[pc] = -x
        basis.append(tuple(v))
    return basis


def solve(m, b: Sequence, method: str = "auto"):
    """Some exact solution of ``m x = b``, or ``None`` when ``b`` is outside
    the column space (an infeasible system is a normal outcome)."""
    a = _rows_of(m)
    ncols = m.cols if isinstance(m, Mat) else (len(a[0]) if a else 0)
    b = [as_scalar(x) for x in b]
    if len(b) != len(a):
        raise ValueError("right-hand side length does not match matrix rows")
    aug = [row + [bi] for row, bi in zip(a, b)]
    if method == "bareiss" and any(isinstance(x, GaussRat) for x in b):
        method = "gauss"
    rows, pivots = rref(aug, method, ncols=ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(rows, pivots):
        x[pc] = _real_if_possible(row[ncols])
    return tuple(x)


def common_kernel(mats: Iterable, n: int) -> list[tuple]:
    """Basis of the intersection of the kernels of ``mats`` (all with ``n``
    columns), computed by successive restriction."""
    basis = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    for m in mats:
        if not basis:
            break
        B = Mat.from_columns(basis)
        restricted = m @ B
        ker = kernel_basis(restricted)
        basis = [B @ k for k in ker]
        # keep the basis in reduced form so sizes stay small
        if basis:
            red, _ = rref(Mat(basis))
            basis = [tuple(r) for r in red]
    return basis


def inertia(gram) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix, by
    congruence diagonalisation."""
    a = _rows_of(gram)
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        i = next((k for k in active if a[k][k]), None)
        if i is None:
            pair = next(((k, l) for k in active for l in active if l != k and a[k][l]), None)
            if pair is None:
                break
            k, l = pair
            # x_k -> x_k + x_l makes the (k,k) entry 2*a[k][l] != 0
            for j in range(n):
                a[k][j] = a[k][j] + a[l][j]
            for j in range(n):
                a[j][k] = a[j][k] + a[j][l]
            i = k
        piv = a[i][i]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for k in active:
            f = a[k][i] / piv
            if f:
                for j in range(n):
                    a[k][j] = a[k][j] - f * a[i][j]
                for j in range(n):
                    a[j][k] = a[j][k] - f * a[j][i]
    return pos, neg, n - pos - neg
