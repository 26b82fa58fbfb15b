"""Shipped lattice and Lagrangian presets (JSON files under ``data/``)."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .errors import BadInput, UnknownPreset
from .exactalg import Mat
from .mukai import QuadSpace


def _load(name: str):
    return json.loads(resources.files("hkatomic").joinpath("data", name).read_text())


@lru_cache(maxsize=None)
def _summands() -> dict:
    return _load("summands.json")


@lru_cache(maxsize=None)
def _lattices() -> dict:
    return _load("lattices.json")


def example_names() -> list[str]:
    folder = resources.files("hkatomic").joinpath("data", "examples")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def lattice_names() -> list[str]:
    return sorted(_lattices())


def _block_sum(blocks: list[list[list[int]]]) -> list[list[int]]:
    size = sum(len(b) for b in blocks)
    out = [[0] * size for _ in range(size)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[k + i][k : k + len(row)] = row
        k += len(b)
    return out


def assemble_gram(summands: list[dict], n: int) -> list[list[int]]:
    """Orthogonal sum of the listed summands; ``diag`` entries are ``a*n + b``."""
    table = _summands()
    blocks = []
    for s in summands:
        if s["type"] == "diag":
            a, b = s["entry"]
            block = [[a * n + b]]
        elif s["type"] in table:
            block = [[s.get("scale", 1) * v for v in row] for row in table[s["type"]]]
        else:
            raise BadInput(f"unknown lattice summand {s['type']!r}")
        blocks.extend([block] * s.get("count", 1))
    return _block_sum(blocks)


def lattice_preset(name: str, n: int | None = None) -> QuadSpace:
    """The BBF lattice of a deformation type as a QuadSpace with metadata.

    ``n`` overrides the default dimension parameter for the families whose
    lattice depends on it (``k3n`` and ``kum_n``).
    """
    lats = _lattices()
    if name not in lats:
        raise UnknownPreset(name)
    entry = dict(lats[name])
    if n is not None:
        if name not in ("k3n", "kum_n"):
            raise BadInput(f"preset {name!r} has a fixed dimension")
        if n < 2:
            raise BadInput("n must be at least 2")
        entry["n"] = n
    gram = assemble_gram(entry["summands"], entry["n"])
    meta = {k: v for k, v in entry.items() if k != "summands"}
    meta["name"] = name
    if len(gram) != meta["b2"]:
        raise BadInput(f"preset {name!r}: assembled rank {len(gram)} != recorded b2 {meta['b2']}")
    return QuadSpace(Mat(gram), meta=tuple(sorted(meta.items())))


def example_preset(name: str) -> dict:
    if name not in example_names():
        raise UnknownPreset(name)
    return _load(f"examples/{name}.json")


def show(name: str) -> dict:
    """JSON-ready description of any preset."""
    if name in _lattices():
        space = lattice_preset(name)
        out = space.metadata
        out["kind"] = "lattice"
        out["gram"] = [[str(v) for v in row] for row in space.gram.tolist()]
        return out
    if name in example_names():
        out = example_preset(name)
        out["kind"] = "lagrangian_example"
        return out
    raise UnknownPreset(name)


def listing() -> dict:
    lats = _lattices()
    return {
        "lattices": [{"name": k, "b2": lats[k]["b2"], "n": lats[k]["n"], "provenance": lats[k]["provenance"]} for k in sorted(lats)],
        "examples": [{"name": k, "provenance": example_preset(k)["provenance"]} for k in example_names()],
    }
