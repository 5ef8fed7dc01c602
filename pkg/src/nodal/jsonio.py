"""JSON encodings of scalars, series, matrices, embeddings and tuples.

Rationals are strings "p/q" (or "p"), division scalars arrays of 1, 2 or
4 rationals, series objects with a tag, an offset and a coefficient list.
Tuple files follow the schema of the classification datum with a
required ``version`` field; matrices and embeddings accept an optional
one.  Element ids are written "chain:index".
"""

from __future__ import annotations

from fractions import Fraction

from .hereditary import HereditaryOrder
from .scalars import DIMENSION, RESIDUE_TAG, DivisionScalar
from .semisimple import AlgebraHom, SSAlgebra
from .series import TLaurent
from .tuples import ClassTuple

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Malformed input file (wrong shape, missing field, bad literal)."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise SchemaError(message)


def rat_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def str_to_rat(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational literal {s!r}") from exc


def scalar_to_json(x: DivisionScalar) -> list:
    return [rat_to_str(p) for p in x.parts]


def scalar_from_json(data, tag: str) -> DivisionScalar:
    _require(isinstance(data, list), "scalar must be an array of rationals")
    _require(len(data) == DIMENSION[tag], f"scalar needs {DIMENSION[tag]} coordinates")
    return DivisionScalar(tag, [str_to_rat(p) for p in data])


def laurent_to_json(f: TLaurent) -> dict:
    return {
        "tag": f.tag,
        "offset": f.offset if f.coeffs else 0,
        "coeffs": [scalar_to_json(c) for c in f.coeffs],
    }


def laurent_from_json(data, n: int | None = None, tag: str | None = None) -> TLaurent:
    _require(isinstance(data, dict), "series must be an object")
    file_tag = data.get("tag", tag)
    _require(file_tag is not None, "series needs a tag")
    if tag is not None:
        _require(file_tag == tag, f"series tag {file_tag!r} does not match {tag!r}")
    offset = data.get("offset", 0)
    _require(isinstance(offset, int), "offset must be an integer")
    coeffs = data.get("coeffs", [])
    _require(isinstance(coeffs, list), "coeffs must be an array")
    rtag = RESIDUE_TAG.get(file_tag)
    _require(rtag is not None, f"unknown series tag {file_tag!r}")
    scalars = [scalar_from_json(c, rtag) for c in coeffs]
    if n is None:
        n = max(len(scalars), 1)
    terms = {offset + m: c for m, c in enumerate(scalars)}
    return TLaurent.from_terms(file_tag, terms, n)


# -- hereditary matrices --------------------------------------------------------------


def matrix_to_json(order: HereditaryOrder, x) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "tag": order.tag,
        "shape": list(order.shape),
        "trunc": order.n,
        "entries": [[laurent_to_json(e) for e in row] for row in x],
    }


def matrix_from_json(data) -> tuple[HereditaryOrder, tuple]:
    _require(isinstance(data, dict), "matrix file must be an object")
    for key in ("tag", "shape", "trunc", "entries"):
        _require(key in data, f"matrix file needs field {key!r}")
    order = HereditaryOrder(data["tag"], data["shape"], int(data["trunc"]))
    entries = data["entries"]
    _require(
        isinstance(entries, list) and len(entries) == order.p,
        f"entries must be a {order.p} x {order.p} array",
    )
    rows = []
    for row in entries:
        _require(isinstance(row, list) and len(row) == order.p, "ragged matrix")
        rows.append(tuple(laurent_from_json(e, order.n, order.tag) for e in row))
    return order, tuple(rows)


# -- embeddings -------------------------------------------------------------------------


def _algebra_from_json(data, what: str) -> SSAlgebra:
    _require(isinstance(data, list) and data, f"{what} must be a factor list")
    factors = []
    for item in data:
        _require(
            isinstance(item, list) and len(item) == 2,
            f"{what} factors are [size, tag] pairs",
        )
        factors.append((int(item[0]), item[1]))
    return SSAlgebra(factors)


def embedding_to_json(phi: AlgebraHom) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "source": [[r, tag] for r, tag in phi.source.factors],
        "target": [[r, tag] for r, tag in phi.target.factors],
        "matrix": [[rat_to_str(x) for x in row] for row in phi.matrix],
    }


def embedding_from_json(data) -> AlgebraHom:
    _require(isinstance(data, dict), "embedding file must be an object")
    for key in ("source", "target", "matrix"):
        _require(key in data, f"embedding file needs field {key!r}")
    source = _algebra_from_json(data["source"], "source")
    target = _algebra_from_json(data["target"], "target")
    matrix = data["matrix"]
    _require(
        isinstance(matrix, list) and len(matrix) == target.dim,
        f"matrix needs {target.dim} rows",
    )
    rows = []
    for row in matrix:
        _require(
            isinstance(row, list) and len(row) == source.dim,
            f"matrix rows need {source.dim} entries",
        )
        rows.append(tuple(str_to_rat(x) for x in row))
    return AlgebraHom(source, target, tuple(rows))


# -- tuples ---------------------------------------------------------------------------


def _elem_to_str(elem) -> str:
    return f"{elem[0]}:{elem[1]}"


def _elem_from_str(s) -> tuple[int, int]:
    try:
        c, i = str(s).split(":")
        return (int(c), int(i))
    except ValueError as exc:
        raise SchemaError(f"bad element id {s!r} (want 'chain:index')") from exc


def _elem_from_json(item) -> tuple[int, int]:
    _require(
        isinstance(item, list) and len(item) == 2,
        f"element ids are [chain, index] pairs, got {item!r}",
    )
    return (int(item[0]), int(item[1]))


def tuple_to_json(t: ClassTuple) -> dict:
    wt = {}
    for slot, w in sorted(t.weights.items()):
        kind = slot[0]
        if kind == "s" or kind == "d":
            wt[_elem_to_str(slot[1])] = w
        elif kind == "d+":
            wt[_elem_to_str(slot[1]) + ":+"] = w
        elif kind == "d-":
            wt[_elem_to_str(slot[1]) + ":-"] = w
        else:
            wt[_elem_to_str(slot[1])] = w
    return {
        "version": SCHEMA_VERSION,
        "chains": [{"tag": tag, "len": length} for tag, length in t.chains],
        "sim": [[list(a), list(b)] for a, b in sorted(t.pairs)],
        "alpha": {_elem_to_str(e): m for e, m in sorted(t.single_mode.items())},
        "beta": {_elem_to_str(e): m for e, m in sorted(t.double_mode.items())},
        "gamma": [[[list(a), list(b)], s] for (a, b), s in sorted(t.glue_sign.items())],
        "wt": wt,
    }


def tuple_data_from_json(data) -> dict:
    """Raw constructor arguments from a tuple file (validation happens later)."""
    _require(isinstance(data, dict), "tuple file must be an object")
    _require("version" in data, "tuple file needs a 'version' field")
    _require(data["version"] == SCHEMA_VERSION, f"unsupported version {data['version']!r}")
    _require(isinstance(data.get("chains"), list), "tuple file needs 'chains'")
    chains = []
    for item in data["chains"]:
        _require(
            isinstance(item, dict) and "tag" in item and "len" in item,
            "chains are objects with 'tag' and 'len'",
        )
        chains.append((item["tag"], int(item["len"])))
    sim = set()
    for pair in data.get("sim", []):
        _require(isinstance(pair, list) and len(pair) == 2, "sim entries are pairs")
        sim.add((_elem_from_json(pair[0]), _elem_from_json(pair[1])))
    alpha = {_elem_from_str(k): v for k, v in data.get("alpha", {}).items()}
    beta = {_elem_from_str(k): v for k, v in data.get("beta", {}).items()}
    gamma = {}
    for item in data.get("gamma", []):
        _require(
            isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)
            and len(item[0]) == 2,
            "gamma entries are [[elem, elem], sign]",
        )
        sign = item[1]
        _require(sign in (1, -1), f"gamma signs are +1/-1, got {sign!r}")
        gamma[(_elem_from_json(item[0][0]), _elem_from_json(item[0][1]))] = sign

    pairs_norm = {(min(a, b), max(a, b)) for a, b in sim}
    loops = {a for a, b in pairs_norm if a == b}
    glued = {p for p in pairs_norm if p[0] != p[1]}
    glued_members = {e for p in glued for e in p}
    wt = {}
    for key, value in data.get("wt", {}).items():
        parts = str(key).split(":")
        _require(
            isinstance(value, int),
            f"weights must be integers, got {value!r} for {key!r}",
        )
        if len(parts) == 3:
            elem = (int(parts[0]), int(parts[1]))
            _require(parts[2] in "+-", f"bad weight key {key!r}")
            wt[("d+" if parts[2] == "+" else "d-", elem)] = value
        elif len(parts) == 2:
            elem = (int(parts[0]), int(parts[1]))
            if elem in loops:
                wt[("d", elem)] = value
            elif elem in glued_members:
                pair = next(p for p in glued if elem in p)
                _require(
                    elem == pair[0],
                    f"glued weight {key!r} must be keyed at the first member",
                )
                wt[("g",) + pair] = value
            else:
                wt[("s", elem)] = value
        else:
            raise SchemaError(f"bad weight key {key!r}")
    return {
        "chains": chains,
        "sim": pairs_norm,
        "alpha": alpha,
        "beta": beta,
        "gamma": gamma,
        "wt": wt,
    }


def tuple_from_json(data) -> ClassTuple:
    kw = tuple_data_from_json(data)
    return ClassTuple(kw["chains"], kw["sim"], kw["alpha"], kw["beta"],
                      kw["gamma"], kw["wt"])
