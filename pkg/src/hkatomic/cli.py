"""Command-line interface.  Every command prints one JSON document.

Exit codes: 0 for any verdict (negative ones included), 1 for a failed
suite or an internal disagreement, 2 for unreadable or malformed input, 3
when an operation is called outside its domain or a preset is unknown.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from math import comb

from . import atomicity, charclass, lagrangian, presets, serialize
from .errors import HKError, MalformedInput, PreconditionError, UnknownPreset
from .exactalg import Mat
from .llv import sh_dimension
from .mukai import QuadSpace, make_mukai
from .verdict import jsonable


class InputError(Exception):
    """Unreadable or malformed input (exit 2)."""


def _read_json(arg: str):
    text = arg if arg.lstrip().startswith(("{", "[")) else None
    if text is None:
        try:
            with open(arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {arg}: {exc.msg}") from None


def _lattice(arg: str | None, n: int | None = None) -> QuadSpace:
    if arg is None:
        raise InputError("--lattice is required")
    if not os.path.exists(arg) and not arg.lstrip().startswith("{") and arg in presets.lattice_names():
        return presets.lattice_preset(arg, n if arg in ("k3n", "kum_n") else None)
    return serialize.lattice_from_json(_read_json(arg))


def _space_and_vector(args):
    space = make_mukai(_lattice(args.lattice))
    if args.vector is None:
        raise InputError("--vector is required")
    x = serialize.symvector_from_json(space, _read_json(args.vector))
    hd = serialize.hodge_from_json(space, _read_json(args.hodge)) if getattr(args, "hodge", None) else None
    return space, x, hd


def cmd_atomic_check(args) -> tuple[dict, int]:
    space, x, hd = _space_and_vector(args)
    codim = atomicity.is_atomic_codim(x)
    out = {"atomic": codim.atomic, "codim": codim.to_json(), "obstruction": None}
    code = 0
    if hd is not None:
        obs = atomicity.is_atomic_obstruction(x, hd)
        out["obstruction"] = obs.to_json()
        agree = obs.atomic == codim.atomic
        out["criteria_agree"] = agree
        if not agree:
            out["internal_error"] = "codimension and obstruction criteria disagree"
            code = 1
    return out, code


def cmd_vtilde_recover(args) -> tuple[dict, int]:
    space, x, _ = _space_and_vector(args)
    v = atomicity.is_atomic_codim(x)
    out = {"atomic": v.atomic, "vtilde": jsonable(v.vtilde), "extended": None}
    if args.rank is not None:
        c1 = serialize.parse_vector(_read_json(args.c1)) if args.c1 else (Fraction(0),) * space.b2
        ev = atomicity.solve_extended_vector(x, serialize.parse_rat(args.rank), c1)
        out["extended"] = None if ev is None else ev.to_json()
        out["feasible"] = ev is not None
    return out, 0


def cmd_obs_rank(args) -> tuple[dict, int]:
    space, x, hd = _space_and_vector(args)
    if hd is None:
        raise InputError("--hodge is required")
    v = atomicity.is_atomic_obstruction(x, hd)
    return {"rank": v.obs_rank, "atomic": v.atomic, "vtilde": jsonable(v.vtilde)}, 0


def _default_lattice(b2: int) -> QuadSpace:
    pos = min(3, b2)
    return QuadSpace(Mat.diag([1] * pos + [-1] * (b2 - pos)))


def cmd_verbitsky_dims(args) -> tuple[dict, int]:
    q = _lattice(args.lattice, args.n) if args.lattice else None
    if q is None:
        if args.b2 is None or args.b2 < 1:
            raise InputError("give --b2 (positive) or --lattice")
        q = _default_lattice(args.b2)
    space = make_mukai(q)
    n = args.n
    dim_sym = comb(space.dim + n - 1, n)
    return {"b2": space.b2, "n": n, "dim_sym": dim_sym, "dim_sh": sh_dimension(space, n)}, 0


def cmd_tangent_bundle(args) -> tuple[dict, int]:
    if args.n != 2:
        raise PreconditionError("the closed linear system is available in dimension four (n = 2) only")
    v = charclass.fourfold_contradiction()
    return {
        "c2sq": str(v.data["c2sq"]),
        "c4": str(v.data["c4"]),
        "verdict": v.label,
        "reason": v.data["reason"],
    }, 0


def cmd_fujiki_check(args) -> tuple[dict, int]:
    if args.c2sq is None and args.c4 is None:
        if args.n != 2:
            raise PreconditionError("derived inputs exist for n = 2 only; pass --c2sq and --c4")
        d = charclass.derive_k3n2_fujiki_inputs()
        c2sq, c4, source = d["C_c2sq"], d["C_c4"], "derived: chi(O_X) = 3, e(X) = dim of the Verbitsky model"
    elif args.c2sq is None or args.c4 is None:
        raise InputError("give both --c2sq and --c4")
    else:
        c2sq, c4, source = serialize.parse_rat(args.c2sq), serialize.parse_rat(args.c4), "command line"
    v = charclass.fujiki_consistency(args.n, c2sq, c4)
    out = v.to_json()
    out["inputs_source"] = source
    return out, 0


def cmd_lagrangian_check(args) -> tuple[dict, int]:
    if args.preset:
        data = presets.example_preset(args.preset)
    elif args.restriction:
        data = _read_json(args.restriction)
    else:
        raise InputError("give --preset or --restriction")
    try:
        rd = lagrangian.RestrictionData.from_json(data)
    except KeyError as exc:
        raise InputError(f"restriction data lacks {exc}") from None
    out = {"verdict": lagrangian.lagrangian_atomic(rd).to_json(), "ext_dims": None}
    if data.get("diamond") is not None:
        out["ext_dims"] = lagrangian.ext_dims_structure_sheaf(lagrangian.HodgeDiamond(data["diamond"]))
    return out, 0


def cmd_spherical_verdict(args) -> tuple[dict, int]:
    if args.preset in ("k3n", "kum_n") and args.n is not None:
        meta = presets.lattice_preset(args.preset, args.n).metadata
        return atomicity.spherical_verdict(meta).to_json(), 0
    return atomicity.spherical_verdict(args.preset).to_json(), 0


def cmd_series_verify(args) -> tuple[dict, int]:
    ok = charclass.verify_lagrangian_identity(args.order)
    return {"order": args.order, "lagrangian_identity": ok}, 0


def _parse_sizes(text: str | None):
    if not text:
        from .suite import DEFAULT_SIZES

        return DEFAULT_SIZES
    fields = {}
    for part in text.split(","):
        key, _, val = part.partition("=")
        if key.strip() not in ("b2", "n") or not val.strip().isdigit():
            raise InputError(f"bad size specification {part!r}; use b2=K,n=M")
        fields[key.strip()] = int(val)
    return ((fields.get("b2", 3), fields.get("n", 2)),)


def cmd_suite(args) -> tuple[dict, int]:
    from .suite import run_suite

    report = run_suite(args.seed, _parse_sizes(args.sizes), args.count, args.inject_fault)
    return report, 0 if report["ok"] else 1


def cmd_presets(args) -> tuple[dict, int]:
    if args.action == "list":
        return presets.listing(), 0
    if not args.name:
        raise InputError("presets show needs a name")
    return presets.show(args.name), 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hkatomic", description="Exact atomicity checks on the extended Mukai lattice.")
    p.add_argument("--out", help="write the JSON result to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def io_flags(sp, hodge=True):
        sp.add_argument("--lattice", help="lattice JSON file or preset name")
        sp.add_argument("--vector", help="SymVector JSON file")
        if hodge:
            sp.add_argument("--hodge", help="Hodge data JSON file")

    atomic = sub.add_parser("atomic").add_subparsers(dest="action", required=True)
    sp = atomic.add_parser("check")
    io_flags(sp)
    sp.set_defaults(func=cmd_atomic_check)

    vt = sub.add_parser("vtilde").add_subparsers(dest="action", required=True)
    sp = vt.add_parser("recover")
    io_flags(sp, hodge=False)
    sp.add_argument("--rank", help="rank r for solving the extended vector")
    sp.add_argument("--c1", help="c1 as a JSON list")
    sp.set_defaults(func=cmd_vtilde_recover)

    obs = sub.add_parser("obs").add_subparsers(dest="action", required=True)
    sp = obs.add_parser("rank")
    io_flags(sp)
    sp.set_defaults(func=cmd_obs_rank)

    vb = sub.add_parser("verbitsky").add_subparsers(dest="action", required=True)
    sp = vb.add_parser("dims")
    sp.add_argument("--b2", type=int)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lattice")
    sp.set_defaults(func=cmd_verbitsky_dims)

    sp = sub.add_parser("tangent-bundle")
    sp.add_argument("--n", type=int, default=2)
    sp.set_defaults(func=cmd_tangent_bundle)

    fj = sub.add_parser("fujiki").add_subparsers(dest="action", required=True)
    sp = fj.add_parser("check")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--c2sq")
    sp.add_argument("--c4")
    sp.set_defaults(func=cmd_fujiki_check)

    lg = sub.add_parser("lagrangian").add_subparsers(dest="action", required=True)
    sp = lg.add_parser("check")
    sp.add_argument("--preset")
    sp.add_argument("--restriction", help="RestrictionData JSON file")
    sp.set_defaults(func=cmd_lagrangian_check)

    sv = sub.add_parser("spherical").add_subparsers(dest="action", required=True)
    sp = sv.add_parser("verdict")
    sp.add_argument("--preset", required=True)
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_spherical_verdict)

    se = sub.add_parser("series").add_subparsers(dest="action", required=True)
    sp = se.add_parser("verify")
    sp.add_argument("--order", type=int, default=charclass.DEFAULT_TRUNC)
    sp.set_defaults(func=cmd_series_verify)

    sp = sub.add_parser("suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sizes", help="e.g. b2=5,n=3")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--inject-fault", choices=["laplacian-sign"], help="debug canary")
    sp.set_defaults(func=cmd_suite)

    sp = sub.add_parser("presets")
    sp.add_argument("action", choices=["list", "show"])
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_presets)
    return p


def _emit(doc, out: str | None):
    text = json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = args.func(args)
    except (InputError, MalformedInput) as exc:
        print(json.dumps({"error": "input", "message": str(exc)}), file=sys.stderr)
        return 2
    except (PreconditionError, UnknownPreset) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3
    except HKError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        # structurally invalid input that slipped past the parsers
        print(json.dumps({"error": "input", "message": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 2
    _emit(doc, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
