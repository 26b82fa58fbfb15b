"""Rational model of a K3-type Hodge structure on the Mukai lattice.

A period is ``sigma = e + i f`` with rational ``e, f`` in H^2 satisfying
``q(e) = q(f) > 0`` and ``q(e, f) = 0``.  The Hodge grading operator acts by
-2 on sigma, +2 on its conjugate and 0 on the q-orthogonal complement of the
sigma-plane (which contains alpha and beta).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidPeriod
from .exactalg import GaussRat, Mat, kernel_basis, rank, solve
from .llv import SymVector, pair_operator, so_basis, so_coordinates, sym_action
from .mukai import LieOperator, MukaiSpace, as_scalar, cup_matrix, grading_operator
from .verdict import Verdict

@dataclass(frozen=True)
class HodgeData:
    """Real and imaginary parts of the period, as full Mukai-basis vectors."""

    e: tuple
    f: tuple

    @classmethod
    def create(cls, space: MukaiSpace, e: Sequence, f: Sequence) -> "HodgeData":
        hd = cls(space.check_h2(e), space.check_h2(f))
        hd.validate(space)
        return hd

    def validate(self, space: MukaiSpace) -> None:
        e, f = self.e, self.f
        if len(e) != space.dim or len(f) != space.dim:
            raise InvalidPeriod("period vectors have the wrong length")
        if e[0] or e[-1] or f[0] or f[-1]:
            raise InvalidPeriod("period must lie in the H^2 block")
        qe, qf, qef = space.q(e, e), space.q(f, f), space.q(e, f)
        if qe != qf or qe <= 0 or qef != 0:
            raise InvalidPeriod("need q(e) = q(f) > 0 and q(e, f) = 0")
        if rank(Mat([e, f])) != 2:
            raise InvalidPeriod("e and f must be linearly independent")

    def sigma(self) -> tuple:
        return tuple(GaussRat(a, b) for a, b in zip(self.e, self.f))

    def sigma_bar(self) -> tuple:
        return tuple(GaussRat(a, -b) for a, b in zip(self.e, self.f))


def hodge_rotation(space: MukaiSpace, hd: HodgeData) -> LieOperator:
    """Rational operator R with h' = -(2i/q(e)) R, namely R(x) = q(e,x) f - q(f,x) e."""
    return pair_operator(space, hd.e, hd.f)


def hodge_grading(space: MukaiSpace, hd: HodgeData) -> LieOperator:
    """The Hodge grading operator h' over Q(i)."""
    hd.validate(space)
    qe = space.q(hd.e, hd.e)
    c = GaussRat(0, Fraction(-2) / qe)
    return LieOperator(hodge_rotation(space, hd).matrix * c, space)


def is_hodge_type(space: MukaiSpace, hd: HodgeData, x: SymVector) -> bool:
    """h'(x) = 0; since h' is i times a rational operator this is a rational test."""
    return sym_action(hodge_rotation(space, hd), x).is_zero()


def zero_eigenspace(space: MukaiSpace, hd: HodgeData) -> list[tuple]:
    """Rational basis of ker h' in H~: alpha, the complement of the sigma-plane
    in H^2, and beta."""
    hd.validate(space)
    ge = space.base.gram @ space.h2_part(hd.e)
    gf = space.base.gram @ space.h2_part(hd.f)
    comp = kernel_basis(Mat([ge, gf])) if space.b2 > 2 else []
    zero = Fraction(0)
    return [space.alpha] + [(zero,) + tuple(v) + (zero,) for v in comp] + [space.beta]


def ht2_space(space: MukaiSpace, hd: HodgeData) -> list[LieOperator]:
    """Basis of the degree-2 eigenspace of ad(h'): e_{sigma_bar, w} for w in ker h'."""
    sb = hd.sigma_bar()
    return [pair_operator(space, sb, w) for w in zero_eigenspace(space, hd)]


def so_h2_subalgebra(space: MukaiSpace) -> list[LieOperator]:
    """so(H^2) inside so(H~): operators killing alpha and beta."""
    N = space.dim
    out = []
    for i in range(1, N - 1):
        for j in range(i + 1, N - 1):
            out.append(pair_operator(space, space.basis_vector(i), space.basis_vector(j)))
    return out


def _ad(a: Mat, b: Mat) -> Mat:
    return a @ b - b @ a


def eigenspace(space: MukaiSpace, ops: Sequence[tuple[Mat, object]]) -> list[LieOperator]:
    """Simultaneous eigenspace in so(H~)_C of ad(op) with the given eigenvalues."""
    basis = so_basis(space)
    blocks = []
    for op, lam in ops:
        blocks.append([(_ad(op, g.matrix) - g.matrix * lam).flatten() for g in basis])
    cols = [sum((blk[k] for blk in blocks), ()) for k in range(len(basis))]
    ker = kernel_basis(Mat.from_columns(cols))
    out = []
    for c in ker:
        m = Mat.zeros(space.dim, space.dim)
        for ck, g in zip(c, basis):
            if ck:
                m = m + g.matrix * ck
        out.append(LieOperator(m, space, check=False))
    return out


def bracket_degree_check(space: MukaiSpace, hd: HodgeData) -> Verdict:
    """ad(e_sigma) maps the (h=0, h'=2) eigenspace bijectively onto the (h=2, h'=0) one."""
    hp = hodge_grading(space, hd).matrix
    h = grading_operator(space).matrix
    src = eigenspace(space, [(h, 0), (hp, 2)])
    dst = eigenspace(space, [(h, 2), (hp, 0)])
    es = cup_matrix(space, hd.sigma())
    images = [_ad(es, g.matrix).flatten() for g in src]
    dst_cols = Mat.from_columns([g.matrix.flatten() for g in dst]) if dst else None
    lands = all(dst_cols is not None and solve(dst_cols, im) is not None for im in images) if images else True
    img_rank = rank(Mat(images)) if images else 0
    twice = [_ad(es, _ad(es, g.matrix)).flatten() for g in src]
    twice_rank = rank(Mat(twice)) if twice else 0
    bijective = lands and img_rank == len(src) == len(dst)
    return Verdict(
        outcome=bijective,
        label="bijective" if bijective else "not_bijective",
        data={
            "dim_source": len(src),
            "dim_target": len(dst),
            "image_rank": img_rank,
            "image_in_target": lands,
            "second_application_rank": twice_rank,
        },
        notes=("source: ad h = 0, ad h' = 2; target: ad h = 2, ad h' = 0",),
    )


def in_so_span(op: LieOperator) -> bool:
    return so_coordinates(op) is not None


def sigma_cup(space: MukaiSpace, hd: HodgeData) -> LieOperator:
    return LieOperator(cup_matrix(space, hd.sigma()), space)


def parse_hodge(space: MukaiSpace, data: dict) -> HodgeData:
    return HodgeData.create(space, [as_scalar(x) for x in data["e"]], [as_scalar(x) for x in data["f"]])
