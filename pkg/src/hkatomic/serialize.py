"""JSON I/O.  Rationals travel as strings ``"p/q"`` (integers may be bare)."""
from __future__ import annotations

from fractions import Fraction

from .errors import MalformedInput
from .exactalg import GaussRat, Mat
from .hodge import HodgeData
from .llv import SymVector, harmonic_project, sym_power
from .mukai import MukaiSpace, QuadSpace, make_mukai
from .verdict import jsonable


def parse_rat(v) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise MalformedInput(f"inexact or non-numeric value {v!r}; use an integer or a 'p/q' string")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except ValueError:
            raise MalformedInput(f"cannot parse rational {v!r}") from None
    raise MalformedInput(f"cannot parse rational {v!r}")


def parse_scalar(v):
    if isinstance(v, dict):
        return GaussRat(parse_rat(v.get("re", 0)), parse_rat(v.get("im", 0)))
    return parse_rat(v)


def parse_vector(vs) -> tuple:
    """A list of rationals or ``{"coords": [...]}``."""
    if isinstance(vs, dict) and "coords" in vs:
        vs = vs["coords"]
    if not isinstance(vs, list):
        raise MalformedInput("expected a list of numbers")
    return tuple(parse_rat(v) for v in vs)


def parse_matrix(rows) -> Mat:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MalformedInput("expected a list of rows")
    return Mat([[parse_rat(v) for v in r] for r in rows])


def lattice_from_json(data: dict) -> QuadSpace:
    """``{"gram": [[...]], "labels": [...]}`` or ``{"preset": name, "n": k}``."""
    if not isinstance(data, dict):
        raise MalformedInput("lattice must be a JSON object")
    if "preset" in data:
        from .presets import lattice_preset

        return lattice_preset(data["preset"], data.get("n"))
    if "gram" not in data:
        raise MalformedInput("lattice needs a 'gram' or a 'preset' entry")
    gram = parse_matrix(data["gram"])
    if "dim" in data and int(data["dim"]) != gram.rows:
        raise MalformedInput("'dim' does not match the Gram matrix")
    return QuadSpace(gram, tuple(data.get("labels", ())))


def lattice_to_json(q: QuadSpace) -> dict:
    return {"dim": q.dim, "gram": jsonable(q.gram), "labels": list(q.labels)}


def mukai_from_json(data: dict) -> MukaiSpace:
    return make_mukai(lattice_from_json(data.get("base", data)))


def mukai_to_json(space: MukaiSpace) -> dict:
    return {"mukai": True, "base": lattice_to_json(space.base)}


def vector_to_json(v) -> dict:
    return {"coords": jsonable(list(v))}


def _monomial(space: MukaiSpace, key) -> tuple:
    if isinstance(key, list):
        if len(key) != space.dim:
            raise MalformedInput("exponent vector has the wrong length")
        return tuple(int(k) for k in key)
    if isinstance(key, dict):
        labels = space.labels
        exps = [0] * space.dim
        for name, k in key.items():
            if name not in labels:
                raise MalformedInput(f"unknown basis label {name!r}")
            exps[labels.index(name)] += int(k)
        return tuple(exps)
    raise MalformedInput("monomial must be an exponent list or a label->power map")


def symvector_from_json(space: MukaiSpace, data: dict) -> SymVector:
    """Sum of explicit monomial ``terms`` and harmonic projections of pure ``powers``."""
    if not isinstance(data, dict) or "n" not in data:
        raise MalformedInput("vector must be an object with a degree 'n'")
    n = int(data["n"])
    coeffs: dict = {}
    for t in data.get("terms", []):
        if "exp" not in t and "monomial" not in t:
            raise MalformedInput("each term needs 'exp' or 'monomial'")
        mono = _monomial(space, t["exp"] if "exp" in t else t["monomial"])
        if sum(mono) != n:
            raise MalformedInput(f"monomial of degree {sum(mono)} in a degree {n} vector")
        coeffs[mono] = coeffs.get(mono, 0) + parse_scalar(t.get("coeff", 1))
    x = SymVector(space, n, coeffs)
    for p in data.get("powers", []):
        v = space.check_vector(parse_vector(p["vector"]))
        x = x + harmonic_project(sym_power(space, v, n)) * parse_scalar(p.get("coeff", 1))
    return x


def symvector_to_json(x: SymVector) -> dict:
    terms = [{"exp": list(mono), "coeff": jsonable(c)} for mono, c in sorted(x.coeffs.items(), reverse=True)]
    return {"n": x.n, "terms": terms}


def hodge_from_json(space: MukaiSpace, data: dict) -> HodgeData:
    if not isinstance(data, dict) or "e" not in data or "f" not in data:
        raise MalformedInput("Hodge data needs 'e' and 'f'")
    return HodgeData.create(space, parse_vector(data["e"]), parse_vector(data["f"]))


def hodge_to_json(space: MukaiSpace, hd: HodgeData) -> dict:
    return {"e": jsonable(space.h2_part(hd.e)), "f": jsonable(space.h2_part(hd.f))}
