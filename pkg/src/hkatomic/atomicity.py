"""Decision procedures for atomicity of classes in the Verbitsky model.

Two independent deciders are provided and are expected to agree:

* :func:`is_atomic_codim` computes the annihilator of ``x`` in so(H~) and
  compares its codimension with ``b2 + 1``;
* :func:`is_atomic_obstruction` contracts ``x`` with the degree-two operators
  of a Hodge structure and tests whether the image is a line.

The remaining helpers recover the extended vector ``r alpha + c1 + s beta``,
twist it to the ``alpha, beta`` plane and test modularity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DegreeTooSmall,
    DimensionMismatch,
    NotAtomic,
    NotHodgeType,
    WitnessAmbiguous,
    ZeroRank,
)
from .exactalg import GaussRat, Mat, as_scalar, common_kernel, kernel_basis, primitive, rank
from .hodge import HodgeData, ht2_space, hodge_rotation, zero_eigenspace
from .llv import (
    SymVector,
    apply_linear_map,
    harmonic_project,
    h2_dual_form_element,
    require_harmonic,
    sh_model,
    so_basis,
    sym_action,
    sym_form,
    sym_power,
)
from .mukai import Isometry, LieOperator, MukaiSpace, cup_matrix, exp_cup
from .verdict import Verdict, jsonable


@dataclass(frozen=True)
class AnnihilatorReport:
    dim_ann: int
    codim: int
    basis: tuple

    def to_json(self) -> dict:
        return {"dim_ann": self.dim_ann, "codim": self.codim}


@dataclass(frozen=True)
class AtomicVerdict:
    atomic: bool
    vtilde: tuple | None
    criterion: str
    report: AnnihilatorReport | None = None
    obs_rank: int | None = None
    notes: tuple[str, ...] = ()

    def __bool__(self):
        return self.atomic

    @property
    def codim(self) -> int | None:
        return None if self.report is None else self.report.codim

    def to_json(self) -> dict:
        out = {
            "atomic": self.atomic,
            "criterion": self.criterion,
            "codim": self.codim,
            "vtilde": None if self.vtilde is None else jsonable(self.vtilde),
            "notes": list(self.notes),
        }
        if self.obs_rank is not None:
            out["obs_rank"] = self.obs_rank
        return out


@dataclass(frozen=True)
class ExtendedVector:
    """``r alpha + c1 + s beta`` together with the scale ``a`` in x = a T(v^n)."""

    r: Fraction
    c1: tuple
    s: Fraction
    a: Fraction

    @property
    def vector(self) -> tuple:
        return (self.r,) + tuple(self.c1[1:-1]) + (self.s,)

    def to_json(self) -> dict:
        return jsonable({"r": self.r, "c1": self.c1[1:-1], "s": self.s, "a": self.a, "vtilde": self.vector})


def annihilator(x: SymVector) -> AnnihilatorReport:
    """Exact kernel of ``g -> g.x`` on so(H~)."""
    basis = so_basis(x.space)
    cols = [sym_action(g, x).coords() for g in basis]
    ker = kernel_basis(Mat.from_columns(cols)) if x.coeffs else [
        tuple(Fraction(int(i == j)) for j in range(len(basis))) for i in range(len(basis))
    ]
    ops = []
    for c in ker:
        m = Mat.zeros(x.space.dim, x.space.dim)
        for ck, g in zip(c, basis):
            if ck:
                m = m + g.matrix * ck
        ops.append(LieOperator(m, x.space, check=False))
    return AnnihilatorReport(len(ops), len(basis) - len(ops), tuple(ops))


def fixed_vectors(report: AnnihilatorReport, space: MukaiSpace) -> list[tuple]:
    """Vectors of H~ killed by every element of the annihilator."""
    return common_kernel([g.matrix for g in report.basis], space.dim)


def is_atomic_codim(x: SymVector) -> AtomicVerdict:
    """Atomic iff the annihilator has codimension ``b2 + 1``."""
    require_harmonic(x)
    report = annihilator(x)
    if x.is_zero():
        return AtomicVerdict(False, None, "codim", report, notes=("zero vector is not atomic",))
    if report.codim != x.space.b2 + 1:
        return AtomicVerdict(False, None, "codim", report)
    fixed = fixed_vectors(report, x.space)
    if len(fixed) != 1:
        raise WitnessAmbiguous(f"annihilator fixes a {len(fixed)}-dimensional subspace")
    return AtomicVerdict(True, primitive(fixed[0]), "codim", report)


def _rational_line(v: Sequence) -> tuple | None:
    """A primitive rational vector spanning the line of ``v``, if there is one."""
    lead = next(c for c in v if c)
    scaled = [(c if isinstance(c, GaussRat) else GaussRat(c)) / lead for c in v]
    if any(c.im for c in scaled):
        return None
    return primitive([c.re for c in scaled])


def obstruction_images(x: SymVector, hd: HodgeData) -> list[SymVector]:
    return [sym_action(g, x) for g in ht2_space(x.space, hd)]


def obstruction_rank(x: SymVector, hd: HodgeData) -> int:
    if not sym_action(hodge_rotation(x.space, hd), x).is_zero():
        raise NotHodgeType("x is not of Hodge type for this period")
    images = obstruction_images(x, hd)
    return rank(Mat([y.coords() for y in images]))


def is_atomic_obstruction(x: SymVector, hd: HodgeData) -> AtomicVerdict:
    """Atomic iff contraction with the degree-two operators has rank one."""
    require_harmonic(x)
    space = x.space
    if not sym_action(hodge_rotation(space, hd), x).is_zero():
        raise NotHodgeType("x is not of Hodge type for this period")
    images = obstruction_images(x, hd)
    m = Mat.from_columns([y.coords() for y in images])
    r = rank(m)
    if r != 1:
        return AtomicVerdict(False, None, "obstruction", obs_rank=r)
    # W = operators killing x; the witness is the vector of Z orthogonal to W
    W = kernel_basis(m)
    Z = zero_eigenspace(space, hd)
    zg = Mat.from_columns(Z)
    gz = zg.T @ space.gram @ zg
    rows = [gz @ w for w in W]
    cand = kernel_basis(Mat(rows)) if rows else [tuple(Fraction(int(i == j)) for j in range(len(Z))) for i in range(len(Z))]
    if len(cand) != 1:
        raise WitnessAmbiguous(f"orthogonal complement of the kernel has dimension {len(cand)}")
    v = zg @ cand[0]
    line = _rational_line(v)
    if line is None:
        return AtomicVerdict(True, None, "obstruction", obs_rank=r, notes=("witness line is not rational",))
    return AtomicVerdict(True, line, "obstruction", obs_rank=r)


def trivial_subrepresentation(x: SymVector, report: AnnihilatorReport | None = None) -> list[SymVector]:
    """Elements of the Verbitsky model killed by every operator in Ann(x)."""
    report = report or annihilator(x)
    model = sh_model(x.space, x.n)
    basis = model.basis
    if not report.basis:
        return list(basis)
    cols = []
    for b in basis:
        col = ()
        for g in report.basis:
            col += sym_action(g, b).coords()
        cols.append(col)
    out = []
    for c in kernel_basis(Mat.from_columns(cols)):
        y = SymVector.zero(x.space, x.n)
        for ck, b in zip(c, basis):
            if ck:
                y = y + b * ck
        out.append(y)
    return out


def solve_extended_vector(x: SymVector, r, c1: Sequence) -> ExtendedVector | None:
    """Find ``(a, s)`` with ``x = a T((r alpha + c1 + s beta)^n)``; None if impossible."""
    space, n = x.space, x.n
    r = as_scalar(r)
    if r == 0:
        raise ZeroRank("rank zero classes are not normalised")
    c1 = space.check_h2(c1)
    require_harmonic(x)
    alpha_n = (n,) + (0,) * (space.dim - 1)
    a = x.coefficient(alpha_n) / r**n
    if a == 0:
        return None
    u = tuple(r * (i == 0) + c for i, c in enumerate(c1))
    deg = 4 - 2 * n
    # the s-linear term is the only one reaching h-degree 4 - 2n besides T(u^n)
    lhs = x.component(deg) / a - harmonic_project(sym_power(space, u, n)).component(deg)
    t = harmonic_project(
        sym_power(space, space.alpha, n - 1) * SymVector.linear(space, space.beta)
    ) * (n * r ** (n - 1))
    mono = next(iter(sorted(t.coeffs)), None)
    if mono is None:
        return None
    s = lhs.coefficient(mono) / t.coefficient(mono)
    v = tuple(u[i] + (s if i == space.dim - 1 else 0) for i in range(space.dim))
    if x != harmonic_project(sym_power(space, v, n)) * a:
        return None
    return ExtendedVector(r, c1, s, a)


def transport(g, x: SymVector) -> SymVector:
    """``Sym^n(g) x`` for an isometry ``g``."""
    m = g.matrix if isinstance(g, Isometry) else g
    if m.shape != (x.space.dim, x.space.dim):
        raise DimensionMismatch("isometry and vector live in different spaces")
    return apply_linear_map(m, x)


def kappa_twist(x: SymVector, r, c1: Sequence) -> SymVector:
    r = as_scalar(r)
    if r == 0:
        raise ZeroRank("cannot twist by c1/r with r = 0")
    c1 = x.space.check_h2(c1)
    return transport(exp_cup(x.space, [-c / r for c in c1]), x)


def so_h2_killed(x: SymVector) -> bool:
    from .hodge import so_h2_subalgebra

    return all(sym_action(g, x).is_zero() for g in so_h2_subalgebra(x.space))


def is_deformation_invariant(x: SymVector) -> bool:
    """Killed by the full so(H^2) block, i.e. of Hodge type for every period."""
    return so_h2_killed(x)


def q2_model(space: MukaiSpace, n: int) -> SymVector:
    """T(alpha^{n-2} q_dual(H^2)), the line of the dual BBF class in degree 4."""
    if n < 2:
        raise DegreeTooSmall("the dual BBF class needs n >= 2")
    return harmonic_project(sym_power(space, space.alpha, n - 2) * h2_dual_form_element(space))


def modularity_check(x: SymVector, r, c1: Sequence) -> Verdict:
    """The degree-4 part of the twisted class lies on the line of q2."""
    n = x.n
    if n < 2:
        raise DegreeTooSmall("modularity needs n >= 2")
    ev = solve_extended_vector(x, r, c1)
    if ev is None:
        raise NotAtomic("x is not a multiple of T(v^n) with this rank and c1")
    kappa = kappa_twist(x, r, c1)
    piece = kappa.component(4 - 2 * n)
    target = q2_model(x.space, n)
    mono = sorted(target.coeffs)[0]
    scalar = piece.coefficient(mono) / target.coefficient(mono)
    ok = piece == target * scalar
    t = ev.s - x.space.base.q(ev.c1[1:-1], ev.c1[1:-1]) / (2 * ev.r)
    return Verdict(
        outcome=ok,
        label="modular" if ok else "not_modular",
        data={"scalar": scalar, "t": t, "a": ev.a, "r": ev.r, "s": ev.s},
    )


def isotropy_check(x: SymVector, vtilde: Sequence, hd: HodgeData) -> Verdict:
    """Cup with the sigma-plane kills ``x`` when the witness has no alpha part."""
    space = x.space
    vtilde = space.check_vector(vtilde)
    kills = all(sym_action(cup_matrix(space, w), x).is_zero() for w in (hd.e, hd.f))
    applicable = vtilde[0] == 0
    if not applicable:
        return Verdict(
            True,
            "not_applicable",
            {"applicable": False, "sigma_annihilates": kills},
            ("witness has a nonzero alpha coordinate",),
        )
    return Verdict(kills, "isotropic" if kills else "not_isotropic", {"applicable": True, "sigma_annihilates": kills})


def mukai_pairing(x: SymVector, y: SymVector, epsilon=1):
    if x.space != y.space or x.n != y.n:
        raise DimensionMismatch("classes live in different models")
    return as_scalar(epsilon) * sym_form(x, y)


def spherical_verdict(preset) -> Verdict:
    """Spherical objects are excluded once cohomology is generated below degree 2n - 1."""
    from .presets import lattice_preset

    if isinstance(preset, str):
        meta = lattice_preset(preset).metadata
        name = preset
    else:
        meta = dict(preset)
        name = meta.get("name", "custom")
    n = int(meta.get("n", 1))
    flag = bool(meta.get("generated_below_2n_minus_1", False))
    data = {"preset": name, "n": n, "generated_below_2n_minus_1": flag}
    if "generation_source" in meta:
        data["generation_source"] = meta["generation_source"]
    if flag and n > 1:
        chain = (
            "Ext^i(E, E) = 0 for 0 < i < 2n kills the projection of v(E) to the subalgebra generated below degree 2n-1",
            "that subalgebra is all of cohomology, so v(E) = 0",
            "contradiction with <v(E), v(E)> = chi(E, E) = 2",
        )
        return Verdict(True, "no_spherical_objects", data, chain)
    return Verdict(False, "not_excluded", data, ("generation hypothesis unavailable or n = 1",))


def extended_scalar(ev: ExtendedVector, n: int, space: MukaiSpace) -> Fraction:
    """Expected modularity scalar ``a n r^{n-1} t / 2`` for a solved vector."""
    t = ev.s - space.base.q(ev.c1[1:-1], ev.c1[1:-1]) / (2 * ev.r)
    return ev.a * n * ev.r ** (n - 1) * t / 2
