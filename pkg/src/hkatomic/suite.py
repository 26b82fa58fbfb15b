"""Seeded random instances and the property suites run by ``hkatomic suite``."""
from __future__ import annotations

import contextlib
import random
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator

from .atomicity import (
    extended_scalar,
    is_atomic_codim,
    is_atomic_obstruction,
    modularity_check,
    solve_extended_vector,
    transport,
)
from .exactalg import Mat, kernel_basis, primitive
from .hodge import HodgeData, hodge_rotation, zero_eigenspace
from .llv import (
    SymVector,
    action_matrix,
    cup_operator,
    dual_form_element,
    dual_lefschetz,
    harmonic_project,
    laplacian,
    laplacian_sign_fault,
    monomials,
    so_basis,
    sym_action,
    sym_form,
    sym_power,
)
from .mukai import Isometry, MukaiSpace, QuadSpace, exp_cup, grading_operator, make_mukai, reflection

DEFAULT_SIZES = ((3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (5, 3))
FAULTS = ("laplacian-sign",)


# -- random instances ---------------------------------------------------------

def _unimodular(rng: random.Random, k: int) -> list[list[int]]:
    """Product of a unit lower and a unit upper triangular integer matrix."""
    lo = [[1 if i == j else (rng.randint(-1, 1) if i > j else 0) for j in range(k)] for i in range(k)]
    up = [[1 if i == j else (rng.randint(-1, 1) if i < j else 0) for j in range(k)] for i in range(k)]
    return [[sum(lo[i][t] * up[t][j] for t in range(k)) for j in range(k)] for i in range(k)]


def random_space(rng: random.Random, b2: int) -> tuple[MukaiSpace, HodgeData]:
    """A Mukai space with a period: Gram P^T D P with D = diag(d, d, ...)."""
    d = rng.choice([1, 2, 4])
    rest = [rng.choice([-1, 1]) * rng.randint(1, 3) for _ in range(b2 - 2)]
    if rest:
        rest[0] = -abs(rest[0])
    D = [d, d] + rest
    P = _unimodular(rng, b2)
    G = [[sum(P[t][i] * D[t] * P[t][j] for t in range(b2)) for j in range(b2)] for i in range(b2)]
    space = make_mukai(QuadSpace(Mat(G)))
    Pinv = _integer_inverse(P)
    e = [Pinv[i][0] for i in range(b2)]
    f = [Pinv[i][1] for i in range(b2)]
    return space, HodgeData.create(space, e, f)


def _integer_inverse(P: list[list[int]]) -> list[list[Fraction]]:
    from .mukai import _inverse

    return _inverse(Mat(P)).tolist()


def _small(rng: random.Random, k: int, lo: int = -2, hi: int = 2) -> list[int]:
    return [rng.randint(lo, hi) for _ in range(k)]


def random_zero_vector(rng: random.Random, space: MukaiSpace, hd: HodgeData, isotropic: bool = False) -> tuple:
    """A nonzero rational vector killed by the Hodge grading."""
    Z = zero_eigenspace(space, hd)
    while True:
        c = _small(rng, len(Z))
        v = tuple(sum(ci * z[k] for ci, z in zip(c, Z)) for k in range(space.dim))
        if isotropic:
            w = (Fraction(0),) + v[1:-1] + (Fraction(0),)
            a = rng.choice([1, 2, -1])
            v = tuple(x * a for x in w)
            v = (Fraction(a),) + v[1:-1] + (space.q(w, w) * a / 2,)
        if any(v):
            return v


def random_symvector(rng: random.Random, space: MukaiSpace, n: int, terms: int = 4) -> SymVector:
    monos = monomials(space.dim, n)
    coeffs = {rng.choice(monos): rng.randint(-3, 3) for _ in range(terms)}
    return SymVector(space, n, coeffs)


def random_lie(rng: random.Random, space: MukaiSpace, terms: int = 3):
    basis = so_basis(space)
    g = basis[0] * 0
    for _ in range(terms):
        g = g + rng.choice(basis) * rng.randint(-2, 2)
    return g


def random_isometry(rng: random.Random, space: MukaiSpace) -> Isometry:
    g = Isometry(Mat.identity(space.dim), space)
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.5:
            g = exp_cup(space, _small(rng, space.b2, -1, 1)) @ g
        else:
            while True:
                v = _small(rng, space.dim, -1, 1)
                if space.q(v, v):
                    break
            g = reflection(space, v) @ g
    return g


@contextlib.contextmanager
def _nothing():
    yield


def _hodge_kernel(space: MukaiSpace, hd: HodgeData, n: int) -> list[tuple]:
    R = hodge_rotation(space, hd)
    lap = action_matrix(space, n, laplacian)
    rot = action_matrix(space, n, lambda x: sym_action(R, x))
    return kernel_basis(Mat(list(lap.tolist()) + list(rot.tolist())))


def random_hodge_class(rng: random.Random, space: MukaiSpace, hd: HodgeData, n: int) -> tuple[str, SymVector]:
    """A nonzero harmonic class of Hodge type, labelled by how it was built."""
    kind = rng.choices(["power", "isotropic", "sum", "kernel"], weights=[2, 1, 1, 1])[0]
    if kind == "power":
        x = harmonic_project(sym_power(space, random_zero_vector(rng, space, hd), n)) * rng.choice([1, 2, -3])
    elif kind == "isotropic":
        x = harmonic_project(sym_power(space, random_zero_vector(rng, space, hd, isotropic=True), n))
    elif kind == "sum":
        x = harmonic_project(sym_power(space, random_zero_vector(rng, space, hd), n))
        x = x + harmonic_project(sym_power(space, random_zero_vector(rng, space, hd), n))
    else:
        ker = _hodge_kernel(space, hd, n)
        c = [rng.randint(-2, 2) for _ in ker]
        x = SymVector.from_coords(space, n, [sum(ci * v[k] for ci, v in zip(c, ker)) for k in range(len(ker[0]))])
    if x.is_zero():
        return random_hodge_class(rng, space, hd, n)
    return kind, x


# -- invariants -----------------------------------------------------------------

def check_sl2(rng, space, hd, n) -> bool:
    while True:
        omega = _small(rng, space.b2)
        if space.base.q(omega, omega):
            break
    e, lam, h = cup_operator(space, omega), dual_lefschetz(space, omega), grading_operator(space)
    return e.bracket(lam) == h and h.bracket(e) == e * 2 and h.bracket(lam) == lam * -2


def check_t_equivariance(rng, space, hd, n) -> bool:
    g = random_lie(rng, space)
    x = random_symvector(rng, space, n)
    return harmonic_project(sym_action(g, x)) == sym_action(g, harmonic_project(x))


def _pure_tensor_laplacian(space, vs) -> SymVector:
    out = SymVector.zero(space, len(vs) - 2)
    for i, j in combinations(range(len(vs)), 2):
        term = SymVector.one(space)
        for k, v in enumerate(vs):
            if k not in (i, j):
                term = term * SymVector.linear(space, v)
        out = out + term * space.q(vs[i], vs[j])
    return out


def check_laplacian(rng, space, hd, n) -> bool:
    """Delta against the pure-tensor contraction formula, and exactness of the splitting."""
    vs = [_small(rng, space.dim) for _ in range(n)]
    prod = SymVector.one(space)
    for v in vs:
        prod = prod * SymVector.linear(space, v)
    if laplacian(prod) != _pure_tensor_laplacian(space, vs):
        return False
    x = random_symvector(rng, space, n)
    t = harmonic_project(x)
    if not laplacian(t).is_zero() or harmonic_project(t) != t:
        return False
    # x - T(x) must be a multiple of the dual form
    qd = dual_form_element(space)
    if n < 2:
        return (x - t).is_zero()
    mult = action_matrix(space, n - 2, lambda r: qd * r)
    from .exactalg import solve

    return solve(mult, (x - t).coords()) is not None


def check_isometry(rng, space, hd, n) -> bool:
    g = random_isometry(rng, space)
    u, v = _small(rng, space.dim), _small(rng, space.dim)
    if space.q(g(u), g(v)) != space.q(u, v):
        return False
    x, y = random_symvector(rng, space, n), random_symvector(rng, space, n)
    if sym_form(transport(g, x), transport(g, y)) != sym_form(x, y):
        return False
    return harmonic_project(transport(g, x)) == transport(g, harmonic_project(x))


def _same_line(u, v) -> bool:
    return u is not None and v is not None and primitive(u) == primitive(v)


def check_transport(rng, space, hd, n) -> bool:
    g = random_isometry(rng, space)
    _, x = random_hodge_class(rng, space, hd, n)
    before, after = is_atomic_codim(x), is_atomic_codim(transport(g, x))
    if before.atomic != after.atomic or before.codim != after.codim:
        return False
    return not before.atomic or _same_line(g(before.vtilde), after.vtilde)


def check_atomic_modular(rng, space, hd, n) -> bool:
    r = rng.choice([1, 2, 3, -1, -2])
    c1 = _small(rng, space.b2)
    s = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    a = Fraction(rng.choice([1, 2, -1, 3]), rng.choice([1, 2]))
    v = space.vector(r, c1, s)
    x = harmonic_project(sym_power(space, v, n)) * a
    if not is_atomic_codim(x).atomic:
        return False
    ev = solve_extended_vector(x, r, c1)
    if ev is None or (ev.a, ev.s) != (a, s):
        return False
    m = modularity_check(x, r, c1)
    return m.outcome is True and m.data["scalar"] == extended_scalar(ev, n, space)


def check_sym_form_skew(rng, space, hd, n) -> bool:
    g = random_lie(rng, space)
    x, y = random_symvector(rng, space, n), random_symvector(rng, space, n)
    return sym_form(sym_action(g, x), y) + sym_form(x, sym_action(g, y)) == 0


def check_criteria_agree(rng, space, hd, n) -> bool:
    kind, x = random_hodge_class(rng, space, hd, n)
    a, b = is_atomic_codim(x), is_atomic_obstruction(x, hd)
    if a.atomic != b.atomic:
        return False
    if a.atomic and not (_same_line(a.vtilde, b.vtilde) and a.codim == space.b2 + 1):
        return False
    return kind not in ("power", "isotropic") or a.atomic


INVARIANTS: dict[str, Callable] = {
    "sl2_relations": check_sl2,
    "t_equivariance": check_t_equivariance,
    "laplacian_exactness": check_laplacian,
    "isometry_invariants": check_isometry,
    "transport_invariance": check_transport,
    "atomic_implies_modular": check_atomic_modular,
    "sym_form_skew_invariance": check_sym_form_skew,
    "criterion_equivalence": check_criteria_agree,
}


def _instances(rng: random.Random, sizes, count: int) -> Iterator[tuple]:
    for i in range(count):
        b2, n = sizes[i % len(sizes)]
        space, hd = random_space(rng, b2)
        yield space, hd, n


def run_invariant(name: str, seed: int = 0, sizes=DEFAULT_SIZES, count: int = 100) -> dict:
    check = INVARIANTS[name]
    rng = random.Random(f"{seed}:{name}")
    passed = failed = 0
    first_failure = None
    for i, (space, hd, n) in enumerate(_instances(rng, list(sizes), count)):
        try:
            ok = check(rng, space, hd, n)
        except Exception as exc:  # an exception is a failed instance, reported by type
            ok = False
            first_failure = first_failure or {"instance": i, "error": type(exc).__name__}
        if ok:
            passed += 1
        else:
            failed += 1
            first_failure = first_failure or {"instance": i}
    out = {"count": count, "passed": passed, "failed": failed}
    if first_failure:
        out["first_failure"] = first_failure
    return out


def run_suite(seed: int = 0, sizes=DEFAULT_SIZES, count: int = 100, fault: str | None = None,
              names=None) -> dict:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    ctx = laplacian_sign_fault() if fault == "laplacian-sign" else _nothing()
    results = {}
    with ctx:
        for name in names or INVARIANTS:
            results[name] = run_invariant(name, seed, sizes, count)
    return {
        "seed": seed,
        "sizes": [{"b2": b, "n": n} for b, n in sizes],
        "count": count,
        "fault": fault,
        "invariants": results,
        "ok": all(r["failed"] == 0 for r in results.values()),
    }
