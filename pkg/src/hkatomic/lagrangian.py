"""Atomic Lagrangians at the level of restriction maps and Hodge numbers."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadInput
from .exactalg import Mat, rank, solve
from .verdict import Verdict


@dataclass(frozen=True)
class RestrictionData:
    """Matrix of iota^*: H^2(X) -> H^2(L) and, optionally, c1(L) in H^2(L)."""

    matrix: Mat
    c1L: tuple | None = None

    def __post_init__(self):
        if not isinstance(self.matrix, Mat):
            object.__setattr__(self, "matrix", Mat(self.matrix))
        if self.c1L is not None:
            c = tuple(Fraction(v) for v in self.c1L)
            if len(c) != self.matrix.rows:
                raise BadInput("c1L must live in the target of the restriction map")
            object.__setattr__(self, "c1L", c)

    @classmethod
    def from_json(cls, data: dict) -> "RestrictionData":
        from .serialize import parse_matrix, parse_vector

        c1 = data.get("c1L")
        return cls(parse_matrix(data["matrix"]), None if c1 is None else parse_vector(c1))


@dataclass(frozen=True)
class HodgeDiamond:
    """h[p][q] for 0 <= p, q <= dim L."""

    h: tuple

    def __post_init__(self):
        h = tuple(tuple(int(v) for v in row) for row in self.h)
        d = len(h)
        if any(len(row) != d for row in h):
            raise BadInput("Hodge diamond must be square")
        if any(h[p][q] != h[q][p] for p in range(d) for q in range(d)):
            raise BadInput("Hodge diamond must satisfy h^{p,q} = h^{q,p}")
        if d and h[0][0] != 1:
            raise BadInput("h^{0,0} = 1 for a connected Lagrangian")
        object.__setattr__(self, "h", h)

    @property
    def dim(self) -> int:
        return len(self.h) - 1


def lagrangian_atomic(rd: RestrictionData) -> Verdict:
    """Atomic iff iota^* has rank one and c1(L) lies in its image."""
    r = rank(rd.matrix)
    rank_one = r == 1
    if rd.c1L is None:
        member = None
    else:
        member = solve(rd.matrix, rd.c1L) is not None
    if not rank_one:
        outcome = False
    elif member is None:
        outcome = None
    else:
        outcome = member
    label = {True: "atomic", False: "not_atomic", None: "undetermined"}[outcome]
    notes = () if member is not None else ("c1(L) not supplied; only the rank condition was tested",)
    return Verdict(outcome, label, {"rank": r, "rank_one": rank_one, "c1_in_image": member}, notes)


def ext_dims_structure_sheaf(hd: HodgeDiamond) -> list[int]:
    """ext^k(O_L, O_L) = sum_{p+q=k} h^{q,p}, using N_{L/X} = Omega_L."""
    d = hd.dim
    return [sum(hd.h[q][k - q] for q in range(max(0, k - d), min(k, d) + 1)) for k in range(2 * d + 1)]


class WeightedPoly:
    """Polynomials in h (weight 1), c2 (weight 2) and z (weight 2) over Q."""

    VARS = ("h", "c2", "z")
    WEIGHTS = (1, 2, 2)

    def __init__(self, terms: dict | None = None):
        self.terms = {tuple(e): Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def gen(cls, name: str) -> "WeightedPoly":
        e = [0, 0, 0]
        e[cls.VARS.index(name)] = 1
        return cls({tuple(e): 1})

    def __add__(self, other):
        other = other if isinstance(other, WeightedPoly) else WeightedPoly({(0, 0, 0): other})
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return WeightedPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return WeightedPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, WeightedPoly):
            return WeightedPoly({e: c * Fraction(other) for e, c in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return WeightedPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = WeightedPoly({(0, 0, 0): 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, WeightedPoly) and self.terms == other.terms

    def weights(self) -> set[int]:
        return {sum(a * w for a, w in zip(e, self.WEIGHTS)) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def substitute_z(self, value: "WeightedPoly") -> "WeightedPoly":
        out = WeightedPoly()
        for (a, b, c), coeff in self.terms.items():
            out = out + WeightedPoly({(a, b, 0): coeff}) * value**c
        return out

    def reduce(self, rules: list[tuple["WeightedPoly", "WeightedPoly"]]) -> "WeightedPoly":
        """Normal form under rules ``z -> value`` (only z is ever rewritten)."""
        out = self
        for _, value in rules:
            out = out.substitute_z(value)
        return out

    def __repr__(self):
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.VARS, e) if k)
            parts.append(f"{c}*{mon}" if mon else str(c))
        return " + ".join(parts) or "0"

    def to_json(self):
        return repr(self)


def epw_class_identities() -> Verdict:
    """Replay the class identities of the EPW example with the rule z = 5h^2 - c2/3.

    ``z`` stands for the pushforward of the fundamental class of the
    Lagrangian surface; c3 and c4 are those of the pushed-forward canonical
    bundle.
    """
    h, c2, z = (WeightedPoly.gen(v) for v in WeightedPoly.VARS)
    rule_value = h**2 * 5 - c2 * Fraction(1, 3)
    rules = [(z, rule_value)]
    c3 = h * z * 9
    c4 = z**2 - h**2 * z * 63
    forms = {"z": z, "c3": c3, "c4": c4}
    normal = {k: v.reduce(rules) for k, v in forms.items()}
    expected_weight = {"z": 2, "c3": 3, "c4": 4}
    homogeneous = all(
        normal[k].is_homogeneous() and normal[k].weights() == {expected_weight[k]} for k in forms
    )
    # confluence: reducing z first inside products or after expansion gives one normal form
    alt_c4 = rule_value**2 - h**2 * rule_value * 63
    confluent = normal["c4"] == alt_c4 and normal["c3"] == h * rule_value * 9
    idempotent = all(v.reduce(rules) == v for v in normal.values())
    linear = all((forms[k] * 2).reduce(rules) == normal[k] * 2 for k in forms)
    ok = homogeneous and confluent and idempotent and linear
    return Verdict(
        ok,
        "consistent" if ok else "inconsistent",
        {
            "normal_forms": {k: repr(v) for k, v in normal.items()},
            "homogeneous": homogeneous,
            "confluent": confluent,
            "idempotent": idempotent,
            "linear": linear,
        },
        ("z = 5h^2 - c2/3", "c3 = 9 h z", "c4 = z^2 - 63 h^2 z"),
    )


def example_restriction(name: str) -> tuple[RestrictionData, HodgeDiamond]:
    from .presets import example_preset

    data = example_preset(name)
    return RestrictionData.from_json(data), HodgeDiamond(data["diamond"])
