"""The LLV algebra so(H~) and its action on symmetric powers.

``Sym^n(H~)`` is modelled as homogeneous polynomials of degree ``n`` in the
basis ``(alpha, e_1, ..., e_b2, beta)``; a :class:`SymVector` stores the
coefficients of monomials keyed by exponent tuples.  Under this identification
a pure tensor ``v_1 ... v_n`` is the product of the linear forms ``v_i``.

Conventions (fixed once, used everywhere):

* ``g`` in so(H~) acts by the derivation ``sum_{i,j} g[j][i] e_j d/de_i``.
* The Laplacian is ``Delta = 1/2 sum_{a,b} G[a][b] d_a d_b``.  On pure tensors
  this is ``sum_{i<j} q(v_i, v_j) v_1 .. ^v_i .. ^v_j .. v_n``; on monomials it
  gives ``Delta(alpha*beta) = q(alpha, beta)`` and ``Delta(e^2) = q(e, e)``.
* ``sym_form`` is the permutation-sum form
  ``<v_1..v_n, w_1..w_n> = sum_sigma prod_i q(v_i, w_sigma(i))`` with no 1/n!.
"""
from __future__ import annotations

import contextlib
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from math import comb, factorial
from typing import Iterable, Sequence

from .errors import DegreeTooSmall, DimensionMismatch, IsotropicClass, NotHarmonic, SplitFailure
from .exactalg import Mat, as_scalar, kernel_basis, rank, rref
from .mukai import LieOperator, MukaiSpace, cup_matrix, gram_inverse

__all__ = [
    "SymVector",
    "ShModel",
    "monomials",
    "so_basis",
    "so_coordinates",
    "cup_operator",
    "dual_lefschetz",
    "sym_action",
    "laplacian",
    "laplacian_matrix",
    "dual_form_element",
    "h2_dual_form_element",
    "harmonic_project",
    "sh_model",
    "sh_dimension",
    "sym_form",
    "sym_power",
    "apply_linear_map",
    "action_matrix",
]

_LAPLACIAN_SIGN = 1


@lru_cache(maxsize=None)
def monomials(N: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``n`` in ``N`` variables, in a fixed order."""
    out = []
    for combo in combinations_with_replacement(range(N), n):
        e = [0] * N
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(N: int, n: int) -> dict:
    return {m: k for k, m in enumerate(monomials(N, n))}


def h_degree(mono: Sequence[int]) -> int:
    """Eigenvalue of the grading operator on a monomial: 2(#beta - #alpha)."""
    return 2 * (mono[-1] - mono[0])


class SymVector:
    """Element of ``Sym^n(H~)`` with exact coefficients."""

    __slots__ = ("space", "n", "coeffs")

    def __init__(self, space: MukaiSpace, n: int, coeffs: dict | None = None):
        self.space = space
        self.n = n
        clean = {}
        N = space.dim
        for mono, c in (coeffs or {}).items():
            mono = tuple(mono)
            if len(mono) != N or sum(mono) != n or min(mono, default=0) < 0:
                raise DimensionMismatch(f"invalid exponent vector {mono} for degree {n}")
            c = as_scalar(c)
            if c:
                clean[mono] = c
        self.coeffs = clean

    @classmethod
    def _trusted(cls, space, n, coeffs: dict) -> "SymVector":
        x = object.__new__(cls)
        x.space = space
        x.n = n
        x.coeffs = {m: c for m, c in coeffs.items() if c}
        return x

    @classmethod
    def zero(cls, space: MukaiSpace, n: int) -> "SymVector":
        return cls._trusted(space, n, {})

    @classmethod
    def one(cls, space: MukaiSpace) -> "SymVector":
        return cls._trusted(space, 0, {(0,) * space.dim: Fraction(1)})

    @classmethod
    def linear(cls, space: MukaiSpace, v: Sequence) -> "SymVector":
        v = space.check_vector(v)
        N = space.dim
        coeffs = {}
        for i, c in enumerate(v):
            if c:
                e = [0] * N
                e[i] = 1
                coeffs[tuple(e)] = c
        return cls._trusted(space, 1, coeffs)

    @classmethod
    def monomial(cls, space: MukaiSpace, exps: Sequence[int], coeff=1) -> "SymVector":
        return cls(space, sum(exps), {tuple(exps): coeff})

    @classmethod
    def from_coords(cls, space: MukaiSpace, n: int, coords: Sequence) -> "SymVector":
        monos = monomials(space.dim, n)
        if len(coords) != len(monos):
            raise DimensionMismatch("coordinate vector has the wrong length")
        return cls._trusted(space, n, dict(zip(monos, coords)))

    def coords(self) -> tuple:
        z = Fraction(0)
        return tuple(self.coeffs.get(m, z) for m in monomials(self.space.dim, self.n))

    def _check(self, other: "SymVector"):
        if not isinstance(other, SymVector):
            raise TypeError("expected a SymVector")
        if other.space != self.space or other.n != self.n:
            raise DimensionMismatch("symmetric vectors live in different spaces")

    def __add__(self, other: "SymVector") -> "SymVector":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return SymVector._trusted(self.space, self.n, out)

    def __sub__(self, other: "SymVector") -> "SymVector":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) - c
        return SymVector._trusted(self.space, self.n, out)

    def __neg__(self) -> "SymVector":
        return SymVector._trusted(self.space, self.n, {m: -c for m, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, SymVector):
            if other.space != self.space:
                raise DimensionMismatch("symmetric vectors live in different spaces")
            out: dict = {}
            for m1, c1 in self.coeffs.items():
                for m2, c2 in other.coeffs.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    out[m] = out.get(m, 0) + c1 * c2
            return SymVector._trusted(self.space, self.n + other.n, out)
        c = as_scalar(other)
        return SymVector._trusted(self.space, self.n, {m: c * v for m, v in self.coeffs.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, c):
        c = as_scalar(c)
        return SymVector._trusted(self.space, self.n, {m: v / c for m, v in self.coeffs.items()})

    def __pow__(self, k: int) -> "SymVector":
        out = SymVector.one(self.space)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, SymVector):
            return NotImplemented
        return self.space == other.space and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exps: Sequence[int]):
        return self.coeffs.get(tuple(exps), Fraction(0))

    def component(self, degree: int) -> "SymVector":
        """Graded piece on which the grading operator acts by ``degree``."""
        return SymVector._trusted(
            self.space, self.n, {m: c for m, c in self.coeffs.items() if h_degree(m) == degree}
        )

    def conjugate(self) -> "SymVector":
        return SymVector._trusted(
            self.space,
            self.n,
            {m: c.conjugate() for m, c in self.coeffs.items()},
        )

    def __repr__(self):
        if not self.coeffs:
            return f"SymVector(n={self.n}, 0)"
        labels = self.space.labels
        terms = []
        for m, c in sorted(self.coeffs.items(), reverse=True):
            mon = "*".join(
                labels[i] if k == 1 else f"{labels[i]}^{k}" for i, k in enumerate(m) if k
            ) or "1"
            terms.append(f"({c})*{mon}")
        return f"SymVector(n={self.n}, " + " + ".join(terms) + ")"


def sym_power(space: MukaiSpace, v: Sequence, n: int) -> SymVector:
    """The pure power ``v^n`` (as a product of linear forms)."""
    return SymVector.linear(space, v) ** n


def _matrix_of(g) -> Mat:
    return g.matrix if hasattr(g, "matrix") else g


def _column_lists(m: Mat) -> list[list[tuple[int, object]]]:
    N = m.rows
    return [[(j, m[j, i]) for j in range(N) if m[j, i]] for i in range(m.cols)]


def so_basis(space: MukaiSpace) -> list[LieOperator]:
    """Basis ``e_{i,j}(x) = q(e_i, x) e_j - q(e_j, x) e_i`` for ``i < j``."""
    N = space.dim
    G = space.gram
    out = []
    for i in range(N):
        for j in range(i + 1, N):
            rows = [[Fraction(0)] * N for _ in range(N)]
            for k in range(N):
                rows[j][k] += G[i, k]
                rows[i][k] -= G[j, k]
            out.append(LieOperator(Mat(rows), space, check=False))
    return out


@lru_cache(maxsize=None)
def _so_basis_cached(space: MukaiSpace) -> tuple[LieOperator, ...]:
    return tuple(so_basis(space))


@lru_cache(maxsize=None)
def _so_coordinate_solver(space: MukaiSpace):
    basis = _so_basis_cached(space)
    cols = [g.matrix.flatten() for g in basis]
    return Mat.from_columns(cols)


def so_coordinates(g) -> tuple:
    """Coordinates of an operator in :func:`so_basis`, or ``None`` if it is
    not in the (complexified) span."""
    from .exactalg import solve

    m = _matrix_of(g)
    space = g.space
    return solve(_so_coordinate_solver(space), m.flatten())


def pair_operator(space: MukaiSpace, v: Sequence, w: Sequence) -> LieOperator:
    """``e_{v,w}(x) = q(v, x) w - q(w, x) v`` for arbitrary (possibly complex) v, w."""
    G = space.gram
    gv = G @ tuple(v)
    gw = G @ tuple(w)
    N = space.dim
    rows = [[w[a] * gv[b] - v[a] * gw[b] for b in range(N)] for a in range(N)]
    return LieOperator(Mat(rows), space, check=False)


def cup_operator(space: MukaiSpace, omega: Sequence) -> LieOperator:
    """e_omega: alpha -> omega, mu -> q(omega, mu) beta, beta -> 0."""
    return LieOperator(cup_matrix(space, omega), space)


def dual_lefschetz(space: MukaiSpace, omega: Sequence) -> LieOperator:
    """The sl2 partner of e_omega with [e_omega, Lambda] = h.

    Lambda has grading degree -2: it kills alpha, sends beta to 2/q(omega) omega
    and mu to 2 q(omega, mu)/q(omega) alpha.
    """
    omega = space.check_h2(omega)
    qw = space.q(omega, omega)
    if qw == 0:
        raise IsotropicClass("an isotropic class has no sl2 completion")
    N = space.dim
    rows = [[Fraction(0)] * N for _ in range(N)]
    c = 2 / qw
    for i in range(1, N - 1):
        rows[i][N - 1] = c * omega[i]
    gw = space.gram @ omega
    for j in range(1, N - 1):
        rows[0][j] = c * gw[j]
    return LieOperator(Mat(rows), space)


def sym_action(g, x: SymVector) -> SymVector:
    """Action of ``g`` on ``Sym^n`` by derivations (Leibniz rule)."""
    m = _matrix_of(g)
    if m.rows != x.space.dim:
        raise DimensionMismatch("operator and vector live in different spaces")
    cols = _column_lists(m)
    out: dict = {}
    for mono, c in x.coeffs.items():
        for i, k in enumerate(mono):
            if not k:
                continue
            base = list(mono)
            base[i] -= 1
            ck = c * k
            for j, gji in cols[i]:
                base[j] += 1
                key = tuple(base)
                base[j] -= 1
                out[key] = out.get(key, 0) + ck * gji
    return SymVector._trusted(x.space, x.n, out)


def apply_linear_map(m, x: SymVector) -> SymVector:
    """``Sym^n(m)``: substitute ``e_i -> m e_i`` in every monomial."""
    m = _matrix_of(m)
    space = x.space
    if m.rows != space.dim:
        raise DimensionMismatch("map and vector live in different spaces")
    images = [SymVector.linear(space, m.column(i)) for i in range(m.cols)]
    powers: dict = {}
    out = SymVector.zero(space, x.n)
    for mono, c in x.coeffs.items():
        term = SymVector.one(space)
        for i, k in enumerate(mono):
            if k:
                key = (i, k)
                if key not in powers:
                    powers[key] = images[i] ** k
                term = term * powers[key]
        out = out + term * c
    return out


def laplacian(x: SymVector) -> SymVector:
    """Contraction ``Sym^n -> Sym^{n-2}`` with the form (see module docstring)."""
    if x.n < 2:
        raise DegreeTooSmall("the Laplacian needs degree at least 2")
    G = x.space.gram
    N = x.space.dim
    diag = [(a, G[a, a]) for a in range(N) if G[a, a]]
    off = [(a, b, G[a, b]) for a in range(N) for b in range(a + 1, N) if G[a, b]]
    half = Fraction(1, 2)
    sign = _LAPLACIAN_SIGN
    out: dict = {}
    for mono, c in x.coeffs.items():
        for a, gaa in diag:
            k = mono[a]
            if k >= 2:
                m = list(mono)
                m[a] -= 2
                key = tuple(m)
                out[key] = out.get(key, 0) + sign * c * gaa * half * k * (k - 1)
        for a, b, gab in off:
            ka, kb = mono[a], mono[b]
            if ka and kb:
                m = list(mono)
                m[a] -= 1
                m[b] -= 1
                key = tuple(m)
                out[key] = out.get(key, 0) + sign * c * gab * ka * kb
    return SymVector._trusted(x.space, x.n - 2, out)


def action_matrix(space: MukaiSpace, n: int, fn) -> Mat:
    """Matrix (in monomial bases) of a linear map defined on ``Sym^n``."""
    cols = []
    for mono in monomials(space.dim, n):
        y = fn(SymVector._trusted(space, n, {mono: Fraction(1)}))
        cols.append(y.coords())
    return Mat.from_columns(cols)


def laplacian_matrix(space: MukaiSpace, n: int) -> Mat:
    if n < 2:
        raise DegreeTooSmall("the Laplacian needs degree at least 2")
    return action_matrix(space, n, laplacian)


def dual_form_element(space: MukaiSpace) -> SymVector:
    """The inverse-Gram tensor ``sum_{a,b} G^{-1}[a][b] e_a e_b``; Delta of it is dim."""
    return _dual_form(space, range(space.dim), gram_inverse(space))


def h2_dual_form_element(space: MukaiSpace) -> SymVector:
    """Dual form of the H^2 block only (alpha and beta do not appear)."""
    inv = gram_inverse(space.base)
    N = space.dim
    full = [[Fraction(0)] * N for _ in range(N)]
    for i in range(space.b2):
        for j in range(space.b2):
            full[i + 1][j + 1] = inv[i, j]
    return _dual_form(space, range(1, N - 1), Mat(full))


def _dual_form(space: MukaiSpace, idx: Iterable[int], inv: Mat) -> SymVector:
    N = space.dim
    idx = list(idx)
    coeffs: dict = {}
    for a in idx:
        for b in idx:
            if inv[a, b]:
                e = [0] * N
                e[a] += 1
                e[b] += 1
                key = tuple(e)
                coeffs[key] = coeffs.get(key, 0) + inv[a, b]
    return SymVector(space, 2, coeffs)


@lru_cache(maxsize=64)
def _splitter(space: MukaiSpace, n: int, sign: int):
    """Inverse of r -> Delta(q_dual * r) on Sym^{n-2}."""
    qd = dual_form_element(space)
    m = action_matrix(space, n - 2, lambda r: laplacian(qd * r))
    k = m.rows
    aug = [list(m.row(i)) + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    rows, piv = rref(aug, "gauss", ncols=2 * k)
    if piv[:k] != list(range(k)) or len(piv) != k:
        raise SplitFailure("Delta o (q_dual *) is singular; the form is degenerate")
    inv = Mat([r[k:] for r in rows])
    return qd, inv


def harmonic_project(x: SymVector) -> SymVector:
    """Projection T onto ker Delta along the image of multiplication by q_dual."""
    if x.n < 2:
        return x
    qd, inv = _splitter(x.space, x.n, _LAPLACIAN_SIGN)
    d = laplacian(x)
    r = SymVector.from_coords(x.space, x.n - 2, inv @ d.coords())
    return x - qd * r


def sh_dimension(space: MukaiSpace, n: int) -> int:
    """dim ker(Delta) on Sym^n, computed from the rank of the Laplacian."""
    total = comb(space.dim + n - 1, n)
    if n < 2:
        return total
    return total - rank(laplacian_matrix(space, n))


class ShModel:
    """Basis of ker(Delta) in ``Sym^n`` with its induced symmetric form.

    ``gram_sym`` is computed on first access.
    """

    def __init__(self, space: MukaiSpace, n: int):
        if n < 1:
            raise DegreeTooSmall("the Verbitsky model needs n >= 1")
        self.space = space
        self.n = n
        if n < 2:
            self.basis = [SymVector.from_coords(space, n, c)
                          for c in Mat.identity(len(monomials(space.dim, n))).tolist()]
        else:
            ker = kernel_basis(laplacian_matrix(space, n))
            self.basis = [SymVector.from_coords(space, n, v) for v in ker]
        self._gram = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def gram_sym(self) -> Mat:
        if self._gram is None:
            k = self.dim
            rows = [[Fraction(0)] * k for _ in range(k)]
            for i in range(k):
                for j in range(i, k):
                    rows[i][j] = rows[j][i] = sym_form(self.basis[i], self.basis[j])
            self._gram = Mat(rows)
        return self._gram

    def contains(self, x: SymVector) -> bool:
        return x.space == self.space and x.n == self.n and (self.n < 2 or laplacian(x).is_zero())


def sh_model(space: MukaiSpace, n: int) -> ShModel:
    return ShModel(space, n)


def _factors(mono: Sequence[int]) -> tuple[int, ...]:
    out = []
    for i, k in enumerate(mono):
        out.extend([i] * k)
    return tuple(out)


@lru_cache(maxsize=200_000)
def _monomial_pairing(gram: Mat, m1: tuple, m2: tuple):
    f, g = _factors(m1), _factors(m2)
    total = Fraction(0)
    for perm in permutations(range(len(g))):
        p = Fraction(1)
        for i, j in enumerate(perm):
            v = gram[f[i], g[j]]
            if not v:
                break
            p = p * v
        else:
            total = total + p
    return total


def sym_form(x: SymVector, y: SymVector):
    """Permutation-sum form ``sum_sigma prod q(v_i, w_sigma(i))`` extended bilinearly."""
    x._check(y)
    G = x.space.gram
    total = Fraction(0)
    for m1, c1 in x.coeffs.items():
        for m2, c2 in y.coeffs.items():
            v = _monomial_pairing(G, m1, m2)
            if v:
                total = total + c1 * c2 * v
    return total


def is_harmonic(x: SymVector) -> bool:
    return x.n < 2 or laplacian(x).is_zero()


def require_harmonic(x: SymVector):
    if not is_harmonic(x):
        raise NotHarmonic("vector is not in the kernel of the Laplacian")


@contextlib.contextmanager
def laplacian_sign_fault():
    """Debug canary: flip the sign of the Laplacian inside the block."""
    global _LAPLACIAN_SIGN
    _LAPLACIAN_SIGN = -1
    try:
        yield
    finally:
        _LAPLACIAN_SIGN = 1


def psi_one(space: MukaiSpace, n: int) -> SymVector:
    """psi(1) = alpha^n / n!."""
    return sym_power(space, space.alpha, n) / factorial(n)
