"""Combinatorial classification data for complete real nodal orders.

A :class:`ClassTuple` is a finite union of ordered chains of elements,
each chain carrying one of the four order tags, together with

* ``sim`` -- a partial matching on elements (loops allowed); a looped
  element is *doubled*, a matched pair of distinct elements is *glued*
  (glued pairs must have equal residue tags), everything else *single*;
* ``single_mode`` (JSON key ``alpha``) -- "id" or "ex" per single element,
  forced to "id" on real chains                               [clause (d)(i)];
* ``double_mode`` (JSON key ``beta``) -- "can" or "reg" per doubled
  element, forced to "can" on quaternion chains               [clause (d)(ii)];
* ``glue_sign`` (JSON key ``gamma``) -- +1 or -1 per glued pair with
  complex residue tag                                         [clause (d)(iii)];
* ``weights`` (JSON key ``wt``) -- positive integers on the weight slots:
  one per single element, one per glued pair, one per doubled element
  with mode "reg", and a (+, -) pair per doubled element with mode "can".

Two tuples are equivalent when a chain bijection (respecting tags, and
rotating each chain cyclically) transports the matching and the modes,
the glue signs match up to the rotation twist on twisted-complex chains
times an arbitrary per-chain sign gauge, and the weights match up to
swapping the (+, -) pair of any doubled "can" element.  Equivalence is
decided exactly; canonical keys are minimal serializations over the full
orbit and therefore collide precisely on equivalence classes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .scalars import ORDER_TAGS, RESIDUE_TAG

ElemId = tuple  # (chain index, position)


class TupleError(ValueError):
    """Validation failure; ``errors`` lists every violated clause."""

    def __init__(self, errors):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


def _fmt(elem: ElemId) -> str:
    return f"{elem[0]}:{elem[1]}"


class ClassTuple:
    """Validated classification datum; see the module docstring."""

    __slots__ = ("chains", "pairs", "single_mode", "double_mode", "glue_sign",
                 "weights", "singles", "doubled", "glued")

    def __init__(self, chains, sim, single_mode, double_mode, glue_sign, weights):
        errors = []
        chains = tuple((tag, int(length)) for tag, length in chains)
        for tag, length in chains:
            if tag not in ORDER_TAGS:
                errors.append(f"clause (b): unknown chain tag {tag!r}")
            if length < 1:
                errors.append("clause (a): chains must have positive length")
        if errors:
            raise TupleError(errors)
        elements = [
            (c, i) for c, (_, length) in enumerate(chains) for i in range(length)
        ]
        element_set = set(elements)

        pairs = set()
        for pair in sim:
            a, b = tuple(pair)
            if a not in element_set or b not in element_set:
                errors.append(f"clause (c): unknown element in pair {pair!r}")
                continue
            pairs.add((min(a, b), max(a, b)))
        partner_count: dict[ElemId, int] = {}
        for a, b in pairs:
            partner_count[a] = partner_count.get(a, 0) + 1
            if b != a:
                partner_count[b] = partner_count.get(b, 0) + 1
        for elem, cnt in partner_count.items():
            if cnt > 1:
                errors.append(
                    f"clause (c)(i): element {_fmt(elem)} appears in {cnt} pairs"
                )
        doubled = frozenset(a for a, b in pairs if a == b)
        glued_pairs = frozenset((a, b) for a, b in pairs if a != b)
        for a, b in sorted(glued_pairs):
            if self._chi(chains, a) != self._chi(chains, b):
                errors.append(
                    f"clause (c)(ii): glued pair {_fmt(a)}~{_fmt(b)} mixes residue tags"
                )
        singles = frozenset(e for e in elements if e not in partner_count)

        single_mode = dict(single_mode)
        for elem in sorted(singles):
            mode = single_mode.get(elem)
            if mode not in ("id", "ex"):
                errors.append(f"clause (d)(i): single {_fmt(elem)} needs alpha id/ex")
            elif mode == "ex" and self._chi(chains, elem) == "re":
                errors.append(
                    f"clause (d)(i): alpha must be id on the real element {_fmt(elem)}"
                )
        for elem in sorted(set(single_mode) - singles):
            errors.append(f"clause (d)(i): alpha given for non-single {_fmt(elem)}")

        double_mode = dict(double_mode)
        for elem in sorted(doubled):
            mode = double_mode.get(elem)
            if mode not in ("can", "reg"):
                errors.append(f"clause (d)(ii): doubled {_fmt(elem)} needs beta can/reg")
            elif mode == "reg" and self._chi(chains, elem) == "qt":
                errors.append(
                    f"clause (d)(ii): beta must be can on the quaternion element "
                    f"{_fmt(elem)}"
                )
        for elem in sorted(set(double_mode) - doubled):
            errors.append(f"clause (d)(ii): beta given for non-doubled {_fmt(elem)}")

        glue_sign = {(min(a, b), max(a, b)): s for (a, b), s in dict(glue_sign).items()}
        co_pairs = frozenset(
            p for p in glued_pairs if self._chi(chains, p[0]) == "co"
        )
        for pair in sorted(co_pairs):
            if glue_sign.get(pair) not in (1, -1):
                errors.append(
                    f"clause (d)(iii): glued pair {_fmt(pair[0])}~{_fmt(pair[1])} "
                    "needs gamma +1/-1"
                )
        for pair in sorted(set(glue_sign) - co_pairs):
            errors.append(
                f"clause (d)(iii): gamma given for non-complex pair "
                f"{_fmt(pair[0])}~{_fmt(pair[1])}"
            )

        weights = dict(weights)
        expected = set(
            _weight_slots(singles, doubled, glued_pairs, double_mode)
        )
        for slot in sorted(set(weights) - expected):
            errors.append(f"clause (w): weight given for unknown slot {slot!r}")
        for slot in sorted(expected):
            w = weights.get(slot)
            if not isinstance(w, int) or w < 1:
                errors.append(f"clause (w): slot {slot!r} needs a positive weight")

        if errors:
            raise TupleError(errors)

        self.chains = chains
        self.pairs = frozenset(pairs)
        self.single_mode = single_mode
        self.double_mode = double_mode
        self.glue_sign = glue_sign
        self.weights = weights
        self.singles = singles
        self.doubled = doubled
        self.glued = glued_pairs

    # -- basic views -----------------------------------------------------------

    @staticmethod
    def _chi(chains, elem: ElemId) -> str:
        return RESIDUE_TAG[chains[elem[0]][0]]

    def tag(self, elem: ElemId) -> str:
        return self.chains[elem[0]][0]

    def chi(self, elem: ElemId) -> str:
        return RESIDUE_TAG[self.tag(elem)]

    def elements(self):
        return [
            (c, i) for c, (_, length) in enumerate(self.chains)
            for i in range(length)
        ]

    def partner(self, elem: ElemId) -> ElemId | None:
        for a, b in self.pairs:
            if a == elem:
                return b
            if b == elem:
                return a
        return None

    def block_size(self, elem: ElemId) -> int:
        """1 for single and glued elements, 2 for doubled ones."""
        return 2 if elem in self.doubled else 1

    def weighted_block(self, elem: ElemId) -> int:
        """Weighted diagonal block size of an element in its chain."""
        if elem in self.singles:
            return self.weights[("s", elem)]
        if elem in self.doubled:
            if self.double_mode[elem] == "reg":
                return 2 * self.weights[("d", elem)]
            return self.weights[("d+", elem)] + self.weights[("d-", elem)]
        pair = next(p for p in self.glued if elem in p)
        return self.weights[("g",) + pair]

    def shape_vectors(self):
        """Per chain, the list of weighted block sizes in chain order."""
        return [
            [self.weighted_block((c, i)) for i in range(length)]
            for c, (_, length) in enumerate(self.chains)
        ]

    def weight_slots(self):
        return sorted(self.weights)

    def is_basic(self) -> bool:
        return all(w == 1 for w in self.weights.values())

    def is_hereditary(self) -> bool:
        """No relation and no exotic single mode: the pair has full image."""
        return not self.pairs and all(
            m == "id" for m in self.single_mode.values()
        )

    def is_connected(self) -> bool:
        """Single chain, or chains linked into one piece by glued pairs.

        A disconnected tuple assembles to a product of smaller orders, so
        censuses of indecomposable orders restrict to connected tuples.
        """
        n = len(self.chains)
        if n <= 1:
            return True
        adjacency = {c: set() for c in range(n)}
        for a, b in self.glued:
            adjacency[a[0]].add(b[0])
            adjacency[b[0]].add(a[0])
        seen = {0}
        stack = [0]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == n

    def canonical_data(self):
        return (
            self.chains,
            tuple(sorted(self.pairs)),
            tuple(sorted(self.single_mode.items())),
            tuple(sorted(self.double_mode.items())),
            tuple(sorted(self.glue_sign.items())),
            tuple(sorted(self.weights.items())),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassTuple) and self.canonical_data() == other.canonical_data()

    def __hash__(self) -> int:
        return hash(self.canonical_data())

    def __repr__(self) -> str:
        return f"ClassTuple{self.canonical_data()!r}"


def _weight_slots(singles, doubled, glued, double_mode):
    slots = [("s", e) for e in singles]
    for e in doubled:
        if double_mode.get(e) == "reg":
            slots.append(("d", e))
        else:
            slots.append(("d+", e))
            slots.append(("d-", e))
    slots.extend(("g",) + p for p in glued)
    return slots


def validate(chains, sim, alpha, beta, gamma, wt) -> ClassTuple:
    """Build a validated tuple; raises :class:`TupleError` listing violations."""
    return ClassTuple(chains, sim, alpha, beta, gamma, wt)


def validation_errors(chains, sim, alpha, beta, gamma, wt) -> list[str]:
    try:
        ClassTuple(chains, sim, alpha, beta, gamma, wt)
        return []
    except TupleError as exc:
        return exc.errors


def basify(t: ClassTuple) -> ClassTuple:
    """Same underlying datum with every weight set to one (Morita reduction)."""
    return ClassTuple(
        t.chains, t.pairs, t.single_mode, t.double_mode, t.glue_sign,
        {slot: 1 for slot in t.weights},
    )


# -- transport ------------------------------------------------------------------


@dataclass(frozen=True)
class EquivWitness:
    """Chain bijection with rotations, sign gauge and weight swaps.

    ``chain_map[k]`` is the image chain of chain k; ``rotations[k]`` the
    cyclic offset; ``eta`` maps complex chains of the source to +-1;
    ``swaps`` lists doubled-"can" elements whose weight pair is exchanged.
    """

    chain_map: tuple
    rotations: tuple
    eta: tuple
    swaps: frozenset

    def map_element(self, t: ClassTuple, elem: ElemId) -> ElemId:
        c, i = elem
        length = t.chains[c][1]
        return (self.chain_map[c], (i + self.rotations[c]) % length)

    def eta_of(self, chain: int) -> int:
        return dict(self.eta).get(chain, 1)


def delta_twist(t: ClassTuple, elem: ElemId, rotation: int) -> int:
    """-1 exactly when a twisted-complex element wraps past its chain end."""
    c, i = elem
    if t.chains[c][0] != "tc":
        return 1
    return -1 if i + rotation >= t.chains[c][1] else 1


def transport(t: ClassTuple, witness: EquivWitness) -> ClassTuple:
    """Apply a witness to a tuple, producing the exact transported tuple."""
    phi = lambda e: witness.map_element(t, e)
    chains = [None] * len(t.chains)
    for c, data in enumerate(t.chains):
        chains[witness.chain_map[c]] = data
    pairs = set()
    for a, b in t.pairs:
        fa, fb = phi(a), phi(b)
        pairs.add((min(fa, fb), max(fa, fb)))
    single_mode = {phi(e): m for e, m in t.single_mode.items()}
    double_mode = {phi(e): m for e, m in t.double_mode.items()}
    glue_sign = {}
    for (a, b), sign in t.glue_sign.items():
        fa, fb = phi(a), phi(b)
        factor = (
            delta_twist(t, a, witness.rotations[a[0]])
            * delta_twist(t, b, witness.rotations[b[0]])
            * witness.eta_of(a[0])
            * witness.eta_of(b[0])
        )
        glue_sign[(min(fa, fb), max(fa, fb))] = sign * factor
    weights = {}
    for slot, w in t.weights.items():
        kind = slot[0]
        if kind == "s":
            weights[("s", phi(slot[1]))] = w
        elif kind == "d":
            weights[("d", phi(slot[1]))] = w
        elif kind in ("d+", "d-"):
            elem = slot[1]
            flip = elem in witness.swaps
            out_kind = kind
            if flip:
                out_kind = "d-" if kind == "d+" else "d+"
            weights[(out_kind, phi(elem))] = w
        else:  # glued class
            fa, fb = phi(slot[1]), phi(slot[2])
            weights[("g", min(fa, fb), max(fa, fb))] = w
    return ClassTuple(chains, pairs, single_mode, double_mode, glue_sign, weights)


def identity_witness(t: ClassTuple) -> EquivWitness:
    return EquivWitness(
        chain_map=tuple(range(len(t.chains))),
        rotations=(0,) * len(t.chains),
        eta=(),
        swaps=frozenset(),
    )


def invert_witness(t: ClassTuple, witness: EquivWitness) -> EquivWitness:
    """Witness for the reverse direction; exact by construction."""
    n = len(t.chains)
    inv_map = [0] * n
    for k in range(n):
        inv_map[witness.chain_map[k]] = k
    rotations = [0] * n
    eta = {}
    wdict = dict(witness.eta)
    for k in range(n):
        length = t.chains[k][1]
        rho = witness.rotations[k]
        rotations[witness.chain_map[k]] = (length - rho) % length
        if RESIDUE_TAG[t.chains[k][0]] == "co":
            sign = wdict.get(k, 1)
            if t.chains[k][0] == "tc" and rho % length != 0:
                sign = -sign
            eta[witness.chain_map[k]] = sign
    swaps = frozenset(witness.map_element(t, e) for e in witness.swaps)
    return EquivWitness(tuple(inv_map), tuple(rotations), tuple(sorted(eta.items())), swaps)


def compose_witness(t: ClassTuple, first: EquivWitness, second: EquivWitness) -> EquivWitness:
    """Witness for the composite transport (first, then second)."""
    n = len(t.chains)
    chain_map = tuple(second.chain_map[first.chain_map[k]] for k in range(n))
    rotations = []
    eta = {}
    e1, e2 = dict(first.eta), dict(second.eta)
    for k in range(n):
        length = t.chains[k][1]
        r1 = first.rotations[k]
        r2 = second.rotations[first.chain_map[k]]
        rotations.append((r1 + r2) % length)
        if RESIDUE_TAG[t.chains[k][0]] == "co":
            sign = e1.get(k, 1) * e2.get(first.chain_map[k], 1)
            if t.chains[k][0] == "tc" and r1 + r2 >= length:
                sign = -sign
            eta[k] = sign
    swaps = set()
    for elem in t.doubled:
        if t.double_mode.get(elem) != "can":
            continue
        image = first.map_element(t, elem)
        if (elem in first.swaps) ^ (image in second.swaps):
            swaps.add(elem)
    return EquivWitness(chain_map, tuple(rotations), tuple(sorted(eta.items())), frozenset(swaps))


# -- equivalence decision ----------------------------------------------------------


class _ParityUnionFind:
    """Union-find carrying a sign from each node to its representative."""

    def __init__(self):
        self.parent = {}
        self.sign = {}

    def find(self, x):
        """Return (root, sign of the path from x to the root)."""
        if x not in self.parent:
            self.parent[x] = x
            self.sign[x] = 1
            return x, 1
        if self.parent[x] == x:
            return x, 1
        root, s = self.find(self.parent[x])
        self.sign[x] = self.sign[x] * s
        self.parent[x] = root
        return root, self.sign[x]

    def relate(self, x, y, sign) -> bool:
        """Impose sign(x)*sign(y) = sign; False on contradiction."""
        rx, sx = self.find(x)
        ry, sy = self.find(y)
        if rx == ry:
            return sx * sy == sign
        self.parent[rx] = ry
        self.sign[rx] = sx * sy * sign
        return True

    def value(self, x) -> int:
        """A concrete solution value (the root is gauged to +1)."""
        return self.find(x)[1]


def solve_sign_gauge(edges, loops) -> dict | None:
    """Per-vertex signs eta with eta(u) eta(v) = sign on each edge.

    ``edges`` is a list of (u, v, sign) with u != v, ``loops`` of (u, sign);
    returns one solution or None (a loop needs sign +1, every cycle needs
    product +1).
    """
    for _, sign in loops:
        if sign != 1:
            return None
    uf = _ParityUnionFind()
    vertices = set()
    for u, v, sign in edges:
        vertices.update((u, v))
        if not uf.relate(u, v, sign):
            return None
    for u, _ in loops:
        vertices.add(u)
    return {v: uf.value(v) for v in vertices}


def _chain_groups(t: ClassTuple):
    groups: dict[tuple, list[int]] = {}
    for c, data in enumerate(t.chains):
        groups.setdefault(data, []).append(c)
    return groups


def _assignments(t: ClassTuple, u: ClassTuple):
    """All chain bijections preserving (tag, length)."""
    from itertools import permutations

    gt, gu = _chain_groups(t), _chain_groups(u)
    if set(gt) != set(gu) or any(len(gt[k]) != len(gu[k]) for k in gt):
        return
    keys = sorted(gt)
    per_group = [
        [list(zip(gt[k], perm)) for perm in permutations(gu[k])] for k in keys
    ]
    for choice in product(*per_group):
        mapping = [0] * len(t.chains)
        for group in choice:
            for src, dst in group:
                mapping[src] = dst
        yield tuple(mapping)


def equivalent(t: ClassTuple, u: ClassTuple) -> EquivWitness | None:
    """Search for an equivalence witness; None when the tuples differ."""
    for chain_map in _assignments(t, u):
        rotation_ranges = [range(t.chains[c][1]) for c in range(len(t.chains))]
        for rotations in product(*rotation_ranges):
            witness = _try_assignment(t, u, chain_map, rotations)
            if witness is not None:
                return witness
    return None


def _try_assignment(t, u, chain_map, rotations):
    def phi(elem):
        c, i = elem
        return (chain_map[c], (i + rotations[c]) % t.chains[c][1])

    # matching must transport exactly
    image_pairs = {(min(phi(a), phi(b)), max(phi(a), phi(b))) for a, b in t.pairs}
    if image_pairs != u.pairs:
        return None
    for e, m in t.single_mode.items():
        if u.single_mode.get(phi(e)) != m:
            return None
    for e, m in t.double_mode.items():
        if u.double_mode.get(phi(e)) != m:
            return None
    # glue signs up to gauge: solve for eta on complex chains
    edges, loops = [], []
    for (a, b), sign in t.glue_sign.items():
        fa, fb = phi(a), phi(b)
        target = u.glue_sign[(min(fa, fb), max(fa, fb))]
        need = (
            target * sign
            * delta_twist(t, a, rotations[a[0]])
            * delta_twist(t, b, rotations[b[0]])
        )
        if a[0] == b[0]:
            loops.append((a[0], need))
        else:
            edges.append((a[0], b[0], need))
    eta = solve_sign_gauge(edges, loops)
    if eta is None:
        return None
    # weights up to (+, -) swaps on doubled "can" elements
    swaps = set()
    for slot, w in t.weights.items():
        kind = slot[0]
        if kind == "s":
            if u.weights.get(("s", phi(slot[1]))) != w:
                return None
        elif kind == "d":
            if u.weights.get(("d", phi(slot[1]))) != w:
                return None
        elif kind == "g":
            fa, fb = phi(slot[1]), phi(slot[2])
            if u.weights.get(("g", min(fa, fb), max(fa, fb))) != w:
                return None
    for elem in t.doubled:
        if t.double_mode[elem] != "can":
            continue
        img = phi(elem)
        plus, minus = t.weights[("d+", elem)], t.weights[("d-", elem)]
        uplus, uminus = u.weights[("d+", img)], u.weights[("d-", img)]
        if (plus, minus) == (uplus, uminus):
            continue
        if (plus, minus) == (uminus, uplus):
            swaps.add(elem)
            continue
        return None
    witness = EquivWitness(
        tuple(chain_map), tuple(rotations), tuple(sorted(eta.items())),
        frozenset(swaps),
    )
    return witness


# -- canonical keys ------------------------------------------------------------------


def _normalize_gauge(t: ClassTuple):
    """Forest-normalized glue signs; canonical within a switching class."""
    edges = sorted(t.glue_sign.items())
    uf = _ParityUnionFind()
    out = []
    for (a, b), sign in edges:
        ca, cb = a[0], b[0]
        if ca == cb:
            out.append(((a, b), sign))
            continue
        ra, _ = uf.find(ca)
        rb, _ = uf.find(cb)
        if ra != rb:
            uf.relate(ca, cb, sign)
            out.append(((a, b), 1))
        else:
            out.append(((a, b), sign * uf.value(ca) * uf.value(cb)))
    return tuple(out)


def _normalized_weights(t: ClassTuple):
    items = []
    done = set()
    for slot in sorted(t.weights):
        if slot[0] in ("d+", "d-"):
            elem = slot[1]
            if elem in done:
                continue
            done.add(elem)
            pair = sorted((t.weights[("d+", elem)], t.weights[("d-", elem)]))
            items.append((("d+", elem), pair[0]))
            items.append((("d-", elem), pair[1]))
        else:
            items.append((slot, t.weights[slot]))
    return tuple(sorted(items))


def _presentation_data(t: ClassTuple):
    return (
        t.chains,
        tuple(sorted(t.pairs)),
        tuple(sorted(t.single_mode.items())),
        tuple(sorted(t.double_mode.items())),
        _normalize_gauge(t),
        _normalized_weights(t),
    )


def _minimal_presentation(t: ClassTuple):
    slots = sorted(t.chains)
    groups = _chain_groups(t)
    from itertools import permutations

    slot_index: dict[tuple, list[int]] = {}
    pos = 0
    for data in slots:
        slot_index.setdefault(data, []).append(pos)
        pos += 1
    per_group = []
    keys = sorted(groups)
    for key in keys:
        members = groups[key]
        targets = slot_index[key]
        per_group.append([list(zip(members, perm)) for perm in permutations(targets)])
    best = None
    for choice in product(*per_group):
        chain_map = [0] * len(t.chains)
        for group in choice:
            for src, dst in group:
                chain_map[src] = dst
        rotation_ranges = [range(t.chains[c][1]) for c in range(len(t.chains))]
        for rotations in product(*rotation_ranges):
            witness = EquivWitness(tuple(chain_map), tuple(rotations), (), frozenset())
            moved = transport(t, witness)
            data = _presentation_data(moved)
            if best is None or data < best:
                best = data
    return best


def canonical_key(t: ClassTuple) -> bytes:
    """Minimal serialization over the equivalence orbit; equal iff equivalent."""
    return _serialize_key(_minimal_presentation(t))


def canonical_form(t: ClassTuple) -> ClassTuple:
    """The representative realizing the canonical key (equivalent to ``t``)."""
    chains, pairs, singles, doubles, gauge, weights = _minimal_presentation(t)
    return ClassTuple(
        chains, set(pairs), dict(singles), dict(doubles),
        {pair: sign for pair, sign in gauge}, dict(weights),
    )


def _serialize_key(data) -> bytes:
    def plain(x):
        if isinstance(x, tuple):
            return [plain(y) for y in x]
        if isinstance(x, (list, frozenset, set)):
            return [plain(y) for y in sorted(x)]
        return x

    return json.dumps(plain(data), separators=(",", ":")).encode("ascii")


# -- enumeration ------------------------------------------------------------------------


def _chain_structures(n: int, tags):
    """Non-increasing multisets of (length, tag) pairs with total length n."""
    tags = tuple(tags)
    options = sorted(
        ((length, tag) for length in range(1, n + 1) for tag in tags), reverse=True
    )

    def rec(remaining, max_index):
        if remaining == 0:
            yield ()
            return
        for idx in range(max_index, len(options)):
            length, tag = options[idx]
            if length > remaining:
                continue
            for rest in rec(remaining - length, idx):
                yield ((length, tag),) + rest

    yield from rec(n, 0)


def _matchings(elements, chi):
    """Partial involutions with loops; glued pairs need equal residue tags."""
    elements = list(elements)

    def rec(todo):
        if not todo:
            yield ()
            return
        head, rest = todo[0], todo[1:]
        for tail in rec(rest):
            yield tail
            yield ((head, head),) + tail
        for idx, other in enumerate(rest):
            if chi[head] == chi[other]:
                remaining = rest[:idx] + rest[idx + 1:]
                for tail in rec(remaining):
                    yield ((head, other),) + tail

    yield from rec(elements)


def enumerate_tuples(max_elements: int, tags=ORDER_TAGS, max_weight: int = 1,
                     predicate=None):
    """All equivalence classes with at most ``max_elements`` elements.

    Yields (canonical key, representative) sorted by key.  ``predicate``
    filters representatives after deduplication.
    """
    found: dict[bytes, ClassTuple] = {}
    for n in range(1, max_elements + 1):
        for structure in _chain_structures(n, tags):
            chains = [(tag, length) for length, tag in structure]
            elements = [
                (c, i) for c, (_, length) in enumerate(chains) for i in range(length)
            ]
            chi = {e: RESIDUE_TAG[chains[e[0]][0]] for e in elements}
            for matching in _matchings(elements, chi):
                pairs = {(min(a, b), max(a, b)) for a, b in matching}
                doubled = sorted(a for a, b in pairs if a == b)
                glued = sorted(p for p in pairs if p[0] != p[1])
                paired = {e for p in pairs for e in p}
                singles = sorted(e for e in elements if e not in paired)
                alpha_opts = [
                    ("id",) if chi[e] == "re" else ("id", "ex") for e in singles
                ]
                beta_opts = [
                    ("can",) if chi[e] == "qt" else ("can", "reg") for e in doubled
                ]
                co_glued = [p for p in glued if chi[p[0]] == "co"]
                for alpha_choice in product(*alpha_opts):
                    alpha = dict(zip(singles, alpha_choice))
                    for beta_choice in product(*beta_opts):
                        beta = dict(zip(doubled, beta_choice))
                        slots = _weight_slots(singles, doubled, glued, beta)
                        for gamma_choice in product((1, -1), repeat=len(co_glued)):
                            gamma = dict(zip(co_glued, gamma_choice))
                            for weight_choice in product(
                                range(1, max_weight + 1), repeat=len(slots)
                            ):
                                weights = dict(zip(slots, weight_choice))
                                t = ClassTuple(
                                    chains, pairs, alpha, beta, gamma, weights
                                )
                                key = canonical_key(t)
                                if key not in found:
                                    found[key] = t
    items = sorted(found.items())
    if predicate is not None:
        items = [(k, t) for k, t in items if predicate(t)]
    return items
