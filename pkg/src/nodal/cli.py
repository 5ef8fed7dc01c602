"""Batch command-line interface over JSON files.

Every command is deterministic: identical invocations produce byte
identical standard output.  Exit codes: 0 for success or a positive
decision, 1 for a negative decision (not equivalent, not nodal, reduction
rejected), 2 for schema, parse or validation errors.  Class filters of
``enumerate`` are evaluated by assembling at truncation 4, which decides
them exactly; ``--trunc`` controls the build and verification commands.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .assembly import assemble, build, dimension_profile, is_commutative, verify_nodal
from .hereditary import TruncationError, normal_form
from .semisimple import decompose, is_homomorphism
from .series import square_class
from .tuples import (
    ClassTuple,
    TupleError,
    basify,
    canonical_form,
    canonical_key,
    enumerate_tuples,
    equivalent,
)

FILTER_TRUNCATION = 4


def _emit(payload, verbose_note: str | None = None, verbose: bool = False) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    if verbose and verbose_note:
        sys.stderr.write(verbose_note + "\n")


def _load(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _load_tuple(path: str) -> ClassTuple:
    return jsonio.tuple_from_json(_load(path))


def _witness_json(witness) -> dict:
    return {
        "chain_map": list(witness.chain_map),
        "rotations": list(witness.rotations),
        "eta": {str(chain): sign for chain, sign in witness.eta},
        "swaps": [list(e) for e in sorted(witness.swaps)],
    }


def cmd_validate(args) -> int:
    data = _load(args.file)
    try:
        t = jsonio.tuple_from_json(data)
    except TupleError as exc:
        _emit({"valid": False, "errors": exc.errors}, verbose=args.verbose,
              verbose_note="invalid tuple")
        return 2
    payload = {
        "valid": True,
        "elements": len(t.elements()),
        "chains": len(t.chains),
        "shape_vectors": t.shape_vectors(),
        "basic": t.is_basic(),
        "hereditary": t.is_hereditary(),
    }
    _emit(payload, verbose=args.verbose, verbose_note="valid tuple")
    return 0


def cmd_canon(args) -> int:
    t = _load_tuple(args.file)
    rep = canonical_form(t)
    payload = {
        "key": canonical_key(t).decode("ascii"),
        "representative": jsonio.tuple_to_json(rep),
    }
    _emit(payload, verbose=args.verbose, verbose_note="canonical key computed")
    return 0


def cmd_equiv(args) -> int:
    t = _load_tuple(args.first)
    u = _load_tuple(args.second)
    witness = equivalent(t, u)
    if witness is None:
        _emit({"equivalent": False}, verbose=args.verbose,
              verbose_note="tuples are not equivalent")
        return 1
    _emit({"equivalent": True, "witness": _witness_json(witness)},
          verbose=args.verbose, verbose_note="tuples are equivalent")
    return 0


def cmd_enumerate(args) -> int:
    max_weight = 1 if args.basic else args.max_weight
    predicate = None
    if args.commutative or args.non_hereditary:
        def predicate(t: ClassTuple) -> bool:
            if args.non_hereditary:
                # census of proper nodal orders: indecomposable and strictly
                # below the hereditary cover
                if not t.is_connected():
                    return False
                built = build(t, 2)
                if built.lam.dim == built.hbar.dim:
                    return False
            if args.commutative:
                flag, _ = is_commutative(assemble(t, FILTER_TRUNCATION))
                if not flag:
                    return False
            return True

    classes = enumerate_tuples(args.max_elements, max_weight=max_weight,
                               predicate=predicate)
    for key, rep in classes:
        _emit({"key": key.decode("ascii"),
               "representative": jsonio.tuple_to_json(rep)})
    if args.verbose:
        sys.stderr.write(f"{len(classes)} classes\n")
    return 0


def cmd_basify(args) -> int:
    t = _load_tuple(args.file)
    reduced = basify(t)
    _emit({"tuple": jsonio.tuple_to_json(reduced),
           "key": canonical_key(reduced).decode("ascii")},
          verbose=args.verbose, verbose_note="weights reduced to one")
    return 0


def cmd_build(args) -> int:
    t = _load_tuple(args.file)
    a = assemble(t, args.trunc)
    payload = dimension_profile(a)
    payload["basis"] = a.dim_a
    payload["chains"] = [
        {"tag": o.tag, "shape": list(o.shape)} for o in a.built.orders
    ]
    payload["lambda_factors"] = [[r, tag] for r, tag in a.built.lam.factors]
    _emit(payload, verbose=args.verbose,
          verbose_note=f"assembled at truncation {args.trunc}")
    return 0


def cmd_verify(args) -> int:
    t = _load_tuple(args.file)
    report = verify_nodal(t, args.trunc)
    _emit(report.as_dict(), verbose=args.verbose,
          verbose_note="all checks pass" if report.all_pass else "checks failed")
    return 0 if report.all_pass else 1


def cmd_decompose(args) -> int:
    phi = jsonio.embedding_from_json(_load(args.file))
    ok, problems = is_homomorphism(phi)
    if not ok:
        _emit({"error": "not a homomorphism", "problems": problems})
        return 2
    try:
        components = decompose(phi)
    except ValueError as exc:
        _emit({"error": str(exc)})
        return 1
    payload = {
        "components": [
            {
                "kind": comp.kind,
                "sources": [int(i) for i in comp.sources],
                "targets": [int(j) for j in comp.targets],
                "tau": comp.tau,
                "inclusion": comp.inclusion,
                "witness": {
                    str(j): [[jsonio.scalar_to_json(x) for x in row] for row in mat]
                    for j, mat in sorted(comp.witness.items())
                },
                "source_twist": {
                    str(i): tw for i, tw in sorted(comp.source_twist.items())
                },
            }
            for comp in components
        ]
    }
    _emit(payload, verbose=args.verbose,
          verbose_note=f"{len(components)} elementary components")
    return 0


def cmd_normal_form(args) -> int:
    order, matrix = jsonio.matrix_from_json(_load(args.file))
    try:
        form = normal_form(order, matrix)
    except TruncationError as exc:
        _emit({"error": str(exc), "required_trunc": exc.required})
        return 1
    except ValueError as exc:
        _emit({"error": str(exc)})
        return 1
    _emit({"d": form.d, "k": form.k}, verbose=args.verbose,
          verbose_note="witnesses verified at the working truncation")
    if args.witness:
        payload = {
            "d": form.d,
            "k": form.k,
            "g": jsonio.matrix_to_json(order, form.g),
            "h": jsonio.matrix_to_json(order, form.h),
        }
        with open(args.witness, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, sort_keys=True)
            handle.write("\n")
    return 0


def cmd_square_class(args) -> int:
    data = _load(args.file)
    f = jsonio.laurent_from_json(data)
    if f.tag != "re":
        _emit({"error": "square classes are defined for the real series model"})
        return 2
    if f.is_zero():
        _emit({"error": "zero has no square class"})
        return 2
    _emit({"class": square_class(f)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodal",
        description="Exact classification toolkit for complete real nodal orders.",
    )
    parser.add_argument("--verbose", action="store_true",
                        help="human-readable summary on standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a tuple file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("canon", help="canonical key and representative of a tuple")
    p.add_argument("file")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("equiv", help="decide equivalence of two tuples")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("enumerate", help="enumerate equivalence classes")
    p.add_argument("--max-elements", type=int, required=True)
    p.add_argument("--max-weight", type=int, default=1)
    p.add_argument("--basic", action="store_true", help="restrict to weight one")
    p.add_argument("--commutative", action="store_true",
                   help="keep classes whose assembled order is commutative")
    p.add_argument("--non-hereditary", action="store_true",
                   help="keep indecomposable classes strictly below their "
                        "hereditary cover")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("basify", help="forget weights (Morita reduction)")
    p.add_argument("file")
    p.set_defaults(func=cmd_basify)

    p = sub.add_parser("build", help="assemble a tuple into a truncated order")
    p.add_argument("file")
    p.add_argument("--trunc", type=int, default=8)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="verify nodality of an assembled tuple")
    p.add_argument("file")
    p.add_argument("--trunc", type=int, default=8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="split a nodal embedding into elementary parts")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("normal-form", help="monomial normal form of a normalizing matrix")
    p.add_argument("file")
    p.add_argument("--witness", help="write unit witnesses to this path")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("square-class", help="square class of a real Laurent series")
    p.add_argument("file")
    p.set_defaults(func=cmd_square_class)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TupleError as exc:
        _emit({"error": "invalid tuple", "errors": exc.errors})
        return 2
    except jsonio.SchemaError as exc:
        _emit({"error": str(exc)})
        return 2
    except FileNotFoundError as exc:
        _emit({"error": f"cannot read {exc.filename}"})
        return 2
    except json.JSONDecodeError as exc:
        _emit({"error": f"invalid JSON: {exc}"})
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
