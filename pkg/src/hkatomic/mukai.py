"""Rational quadratic spaces, the extended Mukai lattice and its isometries.

Basis order of a Mukai space is fixed as ``(alpha, e_1, ..., e_b2, beta)``;
every vector in the package is a tuple of coordinates in that order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateForm, DimensionMismatch, NotDegreeZero, NotIsometry
from .exactalg import GaussRat, Mat, as_scalar, dot, rank

Vector = tuple  # tuple of Fraction (or GaussRat)


@dataclass(frozen=True)
class QuadSpace:
    """A nondegenerate rational quadratic space given by its Gram matrix."""

    gram: Mat
    labels: tuple[str, ...] = ()
    meta: tuple = field(default=(), compare=False)

    def __post_init__(self):
        g = self.gram if isinstance(self.gram, Mat) else Mat(self.gram)
        object.__setattr__(self, "gram", g)
        if g.rows != g.cols:
            raise DegenerateForm("Gram matrix must be square")
        if g != g.T:
            raise DegenerateForm("Gram matrix must be symmetric")
        if g.rows and rank(g) != g.rows:
            raise DegenerateForm("Gram matrix is singular")
        labels = tuple(self.labels) or tuple(f"e{i + 1}" for i in range(g.rows))
        if len(labels) != g.rows:
            raise DimensionMismatch("label count does not match dimension")
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.gram.rows

    def q(self, u: Sequence, v: Sequence):
        return dot(u, self.gram @ tuple(v))

    @property
    def metadata(self) -> dict:
        return dict(self.meta)


@dataclass(frozen=True)
class MukaiSpace:
    """``Q alpha + H^2 + Q beta`` with alpha, beta isotropic and q(alpha, beta) = -1."""

    base: QuadSpace

    def __post_init__(self):
        b2 = self.base.dim
        N = b2 + 2
        rows = [[Fraction(0)] * N for _ in range(N)]
        rows[0][N - 1] = rows[N - 1][0] = Fraction(-1)
        for i in range(b2):
            for j in range(b2):
                rows[i + 1][j + 1] = self.base.gram[i, j]
        object.__setattr__(self, "_gram", Mat(rows))

    @property
    def gram(self) -> Mat:
        return self._gram

    @property
    def b2(self) -> int:
        return self.base.dim

    @property
    def dim(self) -> int:
        return self.base.dim + 2

    @property
    def alpha_index(self) -> int:
        return 0

    @property
    def beta_index(self) -> int:
        return self.dim - 1

    @property
    def labels(self) -> tuple[str, ...]:
        return ("alpha",) + self.base.labels + ("beta",)

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(i == j)) for j in range(self.dim))

    @property
    def alpha(self) -> Vector:
        return self.basis_vector(0)

    @property
    def beta(self) -> Vector:
        return self.basis_vector(self.dim - 1)

    def vector(self, alpha=0, h2: Sequence = (), beta=0) -> Vector:
        """Assemble ``alpha*a + h2 + beta*b`` from its three blocks."""
        h2 = tuple(as_scalar(x) for x in h2) or (Fraction(0),) * self.b2
        if len(h2) != self.b2:
            raise DimensionMismatch("H^2 block has the wrong length")
        return (as_scalar(alpha),) + h2 + (as_scalar(beta),)

    def h2_part(self, v: Sequence) -> Vector:
        return tuple(v[1:-1])

    def q(self, u: Sequence, v: Sequence):
        return dot(u, self.gram @ tuple(v))

    def check_vector(self, v: Sequence) -> Vector:
        v = tuple(as_scalar(x) for x in v)
        if len(v) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(v)}")
        return v

    def check_h2(self, omega: Sequence) -> Vector:
        """Accept either a b2-vector or a full vector with zero alpha/beta parts."""
        omega = tuple(as_scalar(x) for x in omega)
        if len(omega) == self.b2:
            return (Fraction(0),) + omega + (Fraction(0),)
        omega = self.check_vector(omega)
        if omega[0] or omega[-1]:
            raise NotDegreeZero("class must lie in the H^2 block")
        return omega


def make_mukai(base: QuadSpace) -> MukaiSpace:
    """The (b2+2)-dimensional extended Mukai space over ``base``."""
    if not isinstance(base, QuadSpace):
        base = QuadSpace(Mat(base))
    return MukaiSpace(base)


class LieOperator:
    """A q-skew endomorphism of a Mukai space (an element of so(H~)).

    Entries may be rational or Gaussian rational; skewness is checked exactly
    on construction.
    """

    __slots__ = ("matrix", "space")

    def __init__(self, matrix: Mat, space: MukaiSpace, check: bool = True):
        if not isinstance(matrix, Mat):
            matrix = Mat(matrix)
        if matrix.shape != (space.dim, space.dim):
            raise DimensionMismatch("operator shape does not match the space")
        self.matrix = matrix
        self.space = space
        if check and not is_skew(matrix, space.gram):
            raise ValueError("operator is not skew with respect to the form")

    def __call__(self, v: Sequence) -> Vector:
        return self.matrix @ tuple(v)

    def bracket(self, other: "LieOperator") -> "LieOperator":
        a, b = self.matrix, other.matrix
        return LieOperator(a @ b - b @ a, self.space, check=False)

    def __add__(self, other: "LieOperator") -> "LieOperator":
        return LieOperator(self.matrix + other.matrix, self.space, check=False)

    def __sub__(self, other: "LieOperator") -> "LieOperator":
        return LieOperator(self.matrix - other.matrix, self.space, check=False)

    def __neg__(self) -> "LieOperator":
        return LieOperator(-self.matrix, self.space, check=False)

    def __mul__(self, c) -> "LieOperator":
        return LieOperator(self.matrix * c, self.space, check=False)

    __rmul__ = __mul__

    def conjugate(self) -> "LieOperator":
        return LieOperator(self.matrix.conjugate(), self.space, check=False)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other):
        if not isinstance(other, LieOperator):
            return NotImplemented
        return self.space == other.space and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"LieOperator({self.matrix!r})"


def is_skew(m: Mat, gram: Mat) -> bool:
    return (m.T @ gram + gram @ m).is_zero()


class Isometry:
    """A matrix ``M`` with ``M^T G M = G``; composition is ``@``."""

    __slots__ = ("matrix", "space")

    def __init__(self, matrix: Mat, space: MukaiSpace):
        if not isinstance(matrix, Mat):
            matrix = Mat(matrix)
        if matrix.shape != (space.dim, space.dim):
            raise DimensionMismatch("isometry shape does not match the space")
        if matrix.T @ space.gram @ matrix != space.gram:
            raise NotIsometry("matrix does not preserve the form")
        self.matrix = matrix
        self.space = space

    def __call__(self, v: Sequence) -> Vector:
        return self.matrix @ tuple(v)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.matrix @ other.matrix, self.space)

    def inverse(self) -> "Isometry":
        # M^{-1} = G^{-1} M^T G for an isometry
        g = self.space.gram
        return Isometry(_inverse(g) @ self.matrix.T @ g, self.space)

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.space == other.space and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Isometry({self.matrix!r})"


def _inverse(m: Mat) -> Mat:
    from .exactalg import solve

    n = m.rows
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        x = solve(m, e)
        if x is None:
            raise DegenerateForm("matrix is singular")
        cols.append(x)
    return Mat.from_columns(cols)


def gram_inverse(space) -> Mat:
    return _inverse(space.gram)


def cup_matrix(space: MukaiSpace, omega: Sequence) -> Mat:
    """Matrix of e_omega: alpha -> omega, mu -> q(omega, mu) beta, beta -> 0."""
    omega = space.check_h2(omega)
    N = space.dim
    rows = [[Fraction(0)] * N for _ in range(N)]
    for i in range(1, N - 1):
        rows[i][0] = omega[i]
    w = space.gram @ omega
    for j in range(1, N - 1):
        rows[N - 1][j] = w[j]
    return Mat(rows)


def exp_cup(space: MukaiSpace, omega: Sequence) -> Isometry:
    """exp(e_omega): alpha -> alpha + omega + q(omega)/2 beta, mu -> mu + q(omega, mu) beta."""
    omega = space.check_h2(omega)
    e = cup_matrix(space, omega)
    m = Mat.identity(space.dim) + e + (e @ e) * Fraction(1, 2)
    return Isometry(m, space)


def grading_operator(space: MukaiSpace) -> LieOperator:
    """Cohomological grading h: -2 on alpha, 0 on H^2, +2 on beta."""
    entries = [Fraction(-2)] + [Fraction(0)] * space.b2 + [Fraction(2)]
    return LieOperator(Mat.diag(entries), space)


def reflection(space: MukaiSpace, v: Sequence) -> Isometry:
    """Reflection x -> x - 2 q(x, v)/q(v) v in an anisotropic vector."""
    v = space.check_vector(v)
    qv = space.q(v, v)
    if qv == 0:
        raise ValueError("cannot reflect in an isotropic vector")
    gv = space.gram @ v
    N = space.dim
    rows = [[Fraction(int(i == j)) - 2 * v[i] * gv[j] / qv for j in range(N)] for i in range(N)]
    return Isometry(Mat(rows), space)


def signature(space) -> tuple[int, int]:
    from .exactalg import inertia

    pos, neg, _ = inertia(space.gram)
    return pos, neg


def gaussian_vector(v: Sequence) -> tuple:
    return tuple(x if isinstance(x, GaussRat) else GaussRat(x) for x in v)
