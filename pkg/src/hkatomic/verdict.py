from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exactalg import GaussRat, Mat


def jsonable(x: Any) -> Any:
    """Convert exact values to JSON-friendly data (rationals become strings)."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, GaussRat):
        return str(x.re) if x.im == 0 else {"re": str(x.re), "im": str(x.im)}
    if isinstance(x, Mat):
        return [[jsonable(a) for a in r] for r in x.tolist()]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"cannot serialise {type(x).__name__}")


@dataclass(frozen=True)
class Verdict:
    """Structured decision record.

    ``outcome`` is the boolean answer (``None`` if the inputs do not decide
    it), ``label`` a short machine-readable tag and ``data`` carries witnesses.
    """

    outcome: bool | None
    label: str
    data: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def __bool__(self):
        return bool(self.outcome)

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "label": self.label,
            "data": jsonable(self.data),
            "notes": list(self.notes),
        }
