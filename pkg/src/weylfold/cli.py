"""
Command-line front end: ``weylfold <command> ...`` prints one JSON report.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 a checked
identity failed. Diagnostics go to stderr and nothing is printed on stdout
when a command fails.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Any, Callable

from . import __version__
from .errors import ConsistencyError, InvalidInput, WeylfoldError
from .linalg import fmt


def _load_json_file(path: str) -> tuple[Any, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None


def _int_list(s: str, what: str) -> list[int]:
    parts = [p.strip() for p in s.split(",") if p.strip()]
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise InvalidInput(f"{what} must be a comma-separated list of integers, got {s!r}") from None


def _matrix(m) -> list[list[str]]:
    return [[fmt(x) for x in row] for row in m]


# Each command returns (result payload, extra input text to digest).


def cmd_fold(args) -> tuple[dict, str]:
    from .folding import FoldingAction, fold

    gens = []
    for g in args.gen:
        if g.strip().startswith("["):
            try:
                gens.append(json.loads(g))
            except json.JSONDecodeError:
                raise InvalidInput(f"cannot parse generator {g!r}") from None
        else:
            gens.append(g)
    action = FoldingAction.from_generators(args.type, gens)
    d = fold(action)
    result = {
        "type": str(action.slice_type),
        "group_order": action.order,
        "orbits": [list(o.nodes) for o in d.orbits],
        "components": [o.N for o in d.orbits],
        "betas": [[fmt(x) for x in b] for b in d.betas],
        "folded_cartan": _matrix(d.folded_cartan),
        "folded_type": d.type_label,
        "folded_components": [{"type": str(t), "nodes": list(nodes)} for t, nodes in d.folded_type],
    }
    return result, ""


def cmd_namikawa(args) -> tuple[dict, str]:
    from .namikawa import PartialResolutionSpec, SingularityData, namikawa_weyl, partial_weyl

    obj, text = _load_json_file(args.singularity)
    data = SingularityData.from_json(obj)
    contract = None
    if args.contract is not None:
        contract = [p.strip() for p in args.contract.split(",") if p.strip()]
    wx = namikawa_weyl(data)
    result: dict = {
        "order": wx.order,
        "generators": wx.simple_generators,
        "factors": [
            {"leaf": f.leaf.id, "slice": str(f.leaf.slice_type), "folded_type": f.folded_type, "cartan": _matrix(f.cartan)}
            for f in wx.factors
        ],
    }
    if contract is not None:
        for gid in contract:
            wx.label_of(gid)
        sub = partial_weyl(wx, PartialResolutionSpec.of(contract))
        result["partial"] = {
            "contracted": sorted(set(contract), key=wx.label_of),
            "order": sub.order,
            "generators": wx.ids_of(sub.subset),
            "longest_word": wx.ids_of(sub.elements[-1].word),
        }
    return result, text


def cmd_fan(args) -> tuple[dict, str]:
    from .cones import MoriFanData, fundamental_domain_check, psi_face_map
    from .namikawa import SingularityData, namikawa_weyl

    obj, text = _load_json_file(args.fan)
    if not isinstance(obj, dict):
        raise InvalidInput("fan JSON must be an object")
    if args.singularity:
        sing_obj, sing_text = _load_json_file(args.singularity)
        text += sing_text
    elif "singularity" in obj:
        sing_obj = obj["singularity"]
    else:
        raise InvalidInput('fan needs leaf data: pass --singularity or embed a "singularity" object')
    data = SingularityData.from_json(sing_obj)
    fan = MoriFanData.from_json(obj)
    wx = namikawa_weyl(data)
    report = psi_face_map(fan, wx)
    faces = []
    for face, sub in zip(report.faces, report.images):
        faces.append({
            "dim": face.dim,
            "rays": [list(r) for r in face.rays],
            "chambers": list(face.chambers),
            "generators": wx.ids_of(sub.subset),
            "parabolic_order": sub.order,
        })
    fundamental = None
    if fan.weyl_action is not None and fan.dim <= 3:
        fundamental = fundamental_domain_check(fan, args.samples, args.seed)
    result = {
        "dim": fan.dim,
        "chambers": report.chambers,
        "face_count": len(faces),
        "z2_faces": sum(1 for f in faces if f["parabolic_order"] == 2),
        "trivial_faces": sum(1 for f in faces if f["parabolic_order"] == 1),
        "faces": faces,
        "surjective": report.surjective,
        "injective": report.injective,
        "bijective": report.bijective,
        "fundamental_domain": fundamental,
    }
    return result, text


def cmd_kleinian(args) -> tuple[dict, str]:
    from .kleinian import KleinianPartial, report

    kp = KleinianPartial.make(args.type, _int_list(args.contract, "--contract"))
    return report(kp, args.samples, args.seed), ""


def cmd_hecke(args) -> tuple[dict, str]:
    from .hecke import associativity_check, build, invariant_module_dim, unit_check
    from .root_systems import DynkinType, cartan_matrix
    from .weyl import WeylGroup

    t = DynkinType.parse(args.type)
    subset = _int_list(args.parabolic, "--parabolic")
    w = WeylGroup.from_cartan(cartan_matrix(t))
    sub = w.parabolic(subset)
    h = build(w, sub)
    left, double = invariant_module_dim(w, sub)
    result = {
        "type": str(t),
        "parabolic": list(sub.subset),
        "group_order": w.order,
        "parabolic_order": sub.order,
        "dim": h.dim,
        "left_cosets": left,
        "double_cosets": double,
        "unit": unit_check(h),
        "associative": associativity_check(h),
        "representatives": [list(r.word) for r in h.decomposition.representatives],
        "sizes": h.coset_sizes(),
    }
    if args.constants:
        result["constants"] = h.to_json()["constants"]
    return result, ""


def cmd_selftest(args) -> tuple[dict, str]:
    from .acceptance import run_all

    results = run_all(seed=args.seed)
    return {"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}, ""


COMMANDS: dict[str, Callable] = {
    "fold": cmd_fold,
    "namikawa": cmd_namikawa,
    "fan": cmd_fan,
    "kleinian": cmd_kleinian,
    "hecke": cmd_hecke,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="print a readable table instead of JSON")
    p = argparse.ArgumentParser(prog="weylfold", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=f"weylfold {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fold", parents=[common], help="fold a simply-laced diagram by automorphisms")
    f.add_argument("--type", required=True)
    f.add_argument("--gen", action="append", default=[],
                   help='automorphism in cycle notation "(1 4)(2 3)" or as a JSON image list')

    n = sub.add_parser("namikawa", parents=[common], help="Namikawa Weyl group from leaf data")
    n.add_argument("singularity")
    n.add_argument("--contract", help='comma-separated generator ids, e.g. "L1:1,L1:2"')

    fa = sub.add_parser("fan", parents=[common], help="face lattice and face -> parabolic map of a fan")
    fa.add_argument("fan")
    fa.add_argument("--singularity")
    fa.add_argument("--samples", type=int, default=100)
    fa.add_argument("--seed", type=int, default=0)

    k = sub.add_parser("kleinian", parents=[common], help="partial resolution of a Kleinian singularity")
    k.add_argument("--type", required=True)
    k.add_argument("--contract", default="", help='comma-separated contracted nodes, e.g. "1,3"')
    k.add_argument("--samples", type=int, default=20)
    k.add_argument("--seed", type=int, default=0)

    h = sub.add_parser("hecke", parents=[common], help="double-coset algebra of a parabolic subgroup")
    h.add_argument("--type", required=True)
    h.add_argument("--parabolic", default="", help='comma-separated generator labels, e.g. "1"')
    h.add_argument("--constants", action="store_true", help="include the structure constants")

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    s.add_argument("--seed", type=int, default=0)
    return p


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "pretty"}


def _digest(echo: dict, extra: str) -> str:
    blob = json.dumps({"args": echo, "input": extra}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _pretty(report: dict) -> str:
    lines = [f"weylfold {report['version']}  {report['command']['command']}", f"digest {report['input_digest']}"]
    result = report["result"]
    width = max((len(k) for k in result), default=0)
    for key, value in result.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            for item in value:
                lines.append("  " + "  ".join(f"{k}={json.dumps(v)}" for k, v in item.items()))
        else:
            lines.append(f"{key.ljust(width)}  {json.dumps(value)}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    echo = _echo(args)
    try:
        result, extra = COMMANDS[args.command](args)
    except WeylfoldError as exc:
        print(f"weylfold {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except RecursionError:
        print(f"weylfold {args.command}: input too large", file=sys.stderr)
        return InvalidInput.exit_code
    report = {"command": echo, "input_digest": _digest(echo, extra), "result": result, "version": __version__}
    print(_pretty(report) if args.pretty else json.dumps(report, sort_keys=True))
    if args.command == "selftest" and not result["passed"]:
        print("weylfold selftest: some criteria failed", file=sys.stderr)
        return ConsistencyError.exit_code
    return 0
