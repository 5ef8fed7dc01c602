"""Assembling a nodal order from its classification datum and verifying it.

``build`` turns a :class:`ClassTuple` into the triple (hereditary orders
per chain, semi-simple algebra, embedding into the quotient).  ``assemble``
realizes the pullback -- all matrices whose residue lies in the image of
the embedding -- as an explicit basis of the truncation at t**n, and
``verify_nodal`` re-derives the defining properties by finite-dimensional
linear algebra: the radical match against the hereditary radical, the
dimension identity of the defining exact sequence, the semi-simplicity of
the quotient, and the generator bound on multiplicities.

The truncated algebra has an integer monomial basis (matrix unit, power of
t, scalar basis vector), so structure constants are signed monomials and
trace forms are exact integer matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .hereditary import HereditaryOrder
from .scalars import DIMENSION, DivisionScalar
from .semisimple import AlgebraHom, SSAlgebra
from .series import TLaurent
from .tuples import ClassTuple, basify

Label = tuple  # (chain, row, col, power, scalar index)


def _lambda_factor(t: ClassTuple, slot) -> tuple[int, str]:
    """(matrix size, division tag) of the semi-simple factor at a weight slot."""
    kind = slot[0]
    w = t.weights[slot]
    if kind == "s":
        chi = t.chi(slot[1])
        if t.single_mode[slot[1]] == "id":
            return w, chi
        return (w, "re") if chi == "co" else (w, "co")
    if kind == "d":
        chi = t.chi(slot[1])
        return (w, "co") if chi == "re" else (w, "qt")
    if kind in ("d+", "d-"):
        return w, t.chi(slot[1])
    return w, t.chi(slot[1])  # glued class


def _slot_order(t: ClassTuple):
    """Canonical factor order: elements in chain order, glued at first member."""
    slots = []
    for elem in t.elements():
        if elem in t.singles:
            slots.append(("s", elem))
        elif elem in t.doubled:
            if t.double_mode[elem] == "reg":
                slots.append(("d", elem))
            else:
                slots.append(("d+", elem))
                slots.append(("d-", elem))
        else:
            pair = next(p for p in t.glued if elem in p)
            if elem == pair[0]:
                slots.append(("g",) + pair)
    return tuple(slots)


@dataclass(frozen=True)
class BuildResult:
    """Hereditary cover, semi-simple part and embedding built from a tuple."""

    orders: tuple
    lam: SSAlgebra
    hbar: SSAlgebra
    embedding: AlgebraHom
    slots: tuple
    elements: tuple


def build(t: ClassTuple, n: int = 8) -> BuildResult:
    """Hereditary orders per chain, the basic part and the gluing embedding."""
    shapes = t.shape_vectors()
    orders = tuple(
        HereditaryOrder(tag, shapes[c], n) for c, (tag, _) in enumerate(t.chains)
    )
    elements = tuple(t.elements())
    hbar = SSAlgebra([(t.weighted_block(e), t.chi(e)) for e in elements])
    slots = _slot_order(t)
    lam = SSAlgebra([_lambda_factor(t, slot) for slot in slots])
    elem_index = {e: idx for idx, e in enumerate(elements)}

    def images_of_slot(slot, s_idx):
        """Map Lambda factor basis to H-bar blocks; returns {factor: matrix}."""
        kind = slot[0]
        size, ftag = lam.factors[s_idx]
        out = {}
        if kind == "s":
            elem = slot[1]
            chi = t.chi(elem)
            target = elem_index[elem]

            def fn(mat):
                return {target: _entrywise_embed(mat, chi)}

        elif kind == "g":
            e1, e2 = slot[1], slot[2]
            chi = t.chi(e1)
            sign = t.glue_sign.get((slot[1], slot[2]), 1)

            def fn(mat):
                first = mat
                second = mat
                if chi == "co" and sign == -1:
                    second = tuple(tuple(x.conj() for x in row) for row in mat)
                return {elem_index[e1]: first, elem_index[e2]: second}

        elif kind in ("d+", "d-"):
            elem = slot[1]
            target = elem_index[elem]
            chi = t.chi(elem)
            wp = t.weights[("d+", elem)]
            wm = t.weights[("d-", elem)]
            offset = 0 if kind == "d+" else wp
            total = wp + wm

            def fn(mat):
                z = DivisionScalar.zero(chi)
                big = [[z] * total for _ in range(total)]
                for a, row in enumerate(mat):
                    for b, x in enumerate(row):
                        big[offset + a][offset + b] = x
                return {target: tuple(tuple(r) for r in big)}

        else:  # doubled element with regular mode
            elem = slot[1]
            target = elem_index[elem]
            chi = t.chi(elem)

            def fn(mat):
                return {target: _inflate_regular(mat, chi)}

        return fn

    images = []
    for s_idx, slot in enumerate(slots):
        fn = images_of_slot(slot, s_idx)
        size, ftag = lam.factors[s_idx]
        for a in range(size):
            for b in range(size):
                for m in range(DIMENSION[ftag]):
                    mat = tuple(
                        tuple(
                            DivisionScalar.unit(ftag, m) if (r, c) == (a, b)
                            else DivisionScalar.zero(ftag)
                            for c in range(size)
                        )
                        for r in range(size)
                    )
                    blocks = fn(mat)
                    full = [hbar._zero_matrix(j) for j in range(len(elements))]
                    for j, block in blocks.items():
                        full[j] = tuple(tuple(row) for row in block)
                    images.append(tuple(full))
    embedding = AlgebraHom.from_images(lam, hbar, images)
    return BuildResult(orders, lam, hbar, embedding, slots, elements)


def _entrywise_embed(mat, target_tag: str):
    out = []
    for row in mat:
        new_row = []
        for x in row:
            parts = x.parts + (Fraction(0),) * (DIMENSION[target_tag] - len(x.parts))
            new_row.append(DivisionScalar(target_tag, parts))
        out.append(tuple(new_row))
    return tuple(out)


def _inflate_regular(mat, chi: str):
    """Blockwise regular embedding: M_w(C) -> M_2w(R) or M_w(H) -> M_2w(C)."""
    w = len(mat)
    if chi == "re":
        z = DivisionScalar.zero("re")
        big = [[z] * (2 * w) for _ in range(2 * w)]
        for a, row in enumerate(mat):
            for b, x in enumerate(row):
                re_, im_ = x.parts
                big[2 * a][2 * b] = DivisionScalar("re", (re_,))
                big[2 * a][2 * b + 1] = DivisionScalar("re", (-im_,))
                big[2 * a + 1][2 * b] = DivisionScalar("re", (im_,))
                big[2 * a + 1][2 * b + 1] = DivisionScalar("re", (re_,))
        return tuple(tuple(r) for r in big)
    z = DivisionScalar.zero("co")
    big = [[z] * (2 * w) for _ in range(2 * w)]
    for a, row in enumerate(mat):
        for b, x in enumerate(row):
            p0, p1, p2, p3 = x.parts
            za = DivisionScalar("co", (p0, p1))
            wb = DivisionScalar("co", (p2, p3))
            big[2 * a][2 * b] = za
            big[2 * a][2 * b + 1] = wb
            big[2 * a + 1][2 * b] = -wb.conj()
            big[2 * a + 1][2 * b + 1] = za.conj()
    return tuple(tuple(r) for r in big)


# -- the truncated pullback algebra ------------------------------------------------


class AssembledOrder:
    """Basis-level model of the pullback inside the truncated hereditary order.

    The basis consists of lifts of the semi-simple part (constant diagonal
    blocks) together with all radical monomials; multiplication is sparse
    and exact.
    """

    def __init__(self, built: BuildResult, n: int, tup: ClassTuple | None = None):
        self.built = built
        self.tup = tup
        self.n = n
        self.labels: list[Label] = []
        self.radical_labels: list[Label] = []
        for c, order in enumerate(built.orders):
            rtag = order.residue_tag()
            d = DIMENSION[rtag]
            for a in range(order.p):
                for b in range(order.p):
                    lo = order.min_valuation(a, b)
                    for m in range(lo, n):
                        for s in range(d):
                            label = (c, a, b, m, s)
                            self.labels.append(label)
                            if m >= 1 or order.block_of(a) != order.block_of(b):
                                self.radical_labels.append(label)
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.dim_h = len(self.labels)
        self.dim_hbar = built.hbar.dim
        self.dim_lambda = built.lam.dim
        radical_set = set(self.radical_labels)
        self.residue_labels = [lab for lab in self.labels if lab not in radical_set]
        # H-bar coordinates (factor, row, col, scalar) -> residue label
        self._hbar_to_label = {}
        elem_positions = []
        for c, order in enumerate(built.orders):
            for blk in range(len(order.shape)):
                elem_positions.append((c, blk))
        flat = 0
        self._label_to_hbar_index = {}
        for factor, (c, blk) in enumerate(elem_positions):
            order = built.orders[c]
            start = order.starts[blk]
            size = order.shape[blk]
            rtag = order.residue_tag()
            for a in range(size):
                for b in range(size):
                    for s in range(DIMENSION[rtag]):
                        label = (c, start + a, start + b, 0, s)
                        self._hbar_to_label[(factor, a, b, s)] = label
                        self._label_to_hbar_index[label] = flat
                        flat += 1
        self._scalar_tables = {}
        self.lifts = [self.lift(x) for x in built.lam.basis()]
        self.dim_a = len(self.lifts) + len(self.radical_labels)

    # -- linear structure -----------------------------------------------------------

    def lift(self, x) -> dict:
        """Sparse coordinates of the canonical lift of a semi-simple element."""
        vec = self.built.hbar.to_vector(self.built.embedding.apply(x))
        out = {}
        idx = 0
        for factor, (size, ftag) in enumerate(self.built.hbar.factors):
            for a in range(size):
                for b in range(size):
                    for s in range(DIMENSION[ftag]):
                        coeff = vec[idx]
                        idx += 1
                        if coeff:
                            out[self._hbar_to_label[(factor, a, b, s)]] = coeff
        return out

    def basis_vectors(self) -> list[dict]:
        out = list(self.lifts)
        out.extend({lab: Fraction(1)} for lab in self.radical_labels)
        return out

    def _scalar_table(self, rtag: str, twisted: bool):
        key = (rtag, twisted)
        if key not in self._scalar_tables:
            table = {}
            d = DIMENSION[rtag]
            for s1 in range(d):
                u1 = DivisionScalar.unit(rtag, s1)
                for s2 in range(d):
                    u2 = DivisionScalar.unit(rtag, s2)
                    if twisted:
                        u2 = u2.conj()
                    prod = u1 * u2
                    nz = [(i, v) for i, v in enumerate(prod.parts) if v]
                    table[(s1, s2)] = nz
            self._scalar_tables[key] = table
        return self._scalar_tables[key]

    def multiply(self, x: dict, y: dict) -> dict:
        """Product of sparse coordinate vectors, truncated at t**n."""
        out: dict[Label, Fraction] = {}
        by_row: dict[tuple, list] = {}
        for (c, a, b, m, s), coeff in y.items():
            by_row.setdefault((c, a), []).append((b, m, s, coeff))
        for (c, a, b, m, s), coeff in x.items():
            order = self.built.orders[c]
            rtag = order.residue_tag()
            twisted = order.tag == "tc" and m % 2 == 1
            table = self._scalar_table(rtag, twisted)
            for (b2, m2, s2, coeff2) in by_row.get((c, b), ()):
                e = m + m2
                if e >= self.n:
                    continue
                for s3, val in table[(s, s2)]:
                    lab = (c, a, b2, e, s3)
                    acc = out.get(lab, Fraction(0)) + coeff * coeff2 * val
                    if acc:
                        out[lab] = acc
                    elif lab in out:
                        del out[lab]
        return out

    def in_radical_span(self, vec: dict) -> bool:
        radical = set(self.radical_labels)
        return all(lab in radical for lab in vec)

    def residue_vector(self, vec: dict) -> list[Fraction]:
        """H-bar coordinates of the residue (constant diagonal part)."""
        out = [Fraction(0)] * self.dim_hbar
        for lab, coeff in vec.items():
            idx = self._label_to_hbar_index.get(lab)
            if idx is not None:
                out[idx] = coeff
        return out

    def to_chain_matrices(self, vec: dict):
        """Realize a sparse vector as one series matrix per chain."""
        out = []
        for c, order in enumerate(self.built.orders):
            terms = {}
            for (cc, a, b, m, s), coeff in vec.items():
                if cc != c:
                    continue
                terms.setdefault((a, b), {}).setdefault(m, []).append((s, coeff))
            rtag = order.residue_tag()
            rows = []
            for a in range(order.p):
                row = []
                for b in range(order.p):
                    entry_terms = {}
                    for m, parts in terms.get((a, b), {}).items():
                        coeffs = [Fraction(0)] * DIMENSION[rtag]
                        for s, coeff in parts:
                            coeffs[s] += coeff
                        entry_terms[m] = DivisionScalar(rtag, coeffs)
                    row.append(TLaurent.from_terms(order.tag, entry_terms, self.n))
                rows.append(tuple(row))
            out.append(tuple(rows))
        return out

    # -- traces ------------------------------------------------------------------------

    def monomial_trace(self, lab: Label) -> Fraction:
        """Trace of left multiplication by a monomial on the truncated order.

        Only constant diagonal monomials survive; the value is the number
        of basis monomials they fix times the real part of the scalar
        product rule.
        """
        c, a, b, m, s = lab
        if a != b or m != 0:
            return Fraction(0)
        order = self.built.orders[c]
        rtag = order.residue_tag()
        table = self._scalar_table(rtag, False)
        total = Fraction(0)
        d = DIMENSION[rtag]
        for b2 in range(order.p):
            lo = order.min_valuation(a, b2)
            count = self.n - lo
            for s2 in range(d):
                for s3, val in table[(s, s2)]:
                    if s3 == s2:
                        total += val * count
        return total

    def vector_trace(self, vec: dict) -> Fraction:
        return sum(
            (coeff * self.monomial_trace(lab) for lab, coeff in vec.items()),
            Fraction(0),
        )


@dataclass
class NodalityReport:
    """Outcome of the independent nodality verification."""

    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def all_pass(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def as_dict(self) -> dict:
        return {
            "checks": [
                {"name": name, "pass": ok, "detail": detail}
                for name, ok, detail in self.checks
            ],
            "all_pass": self.all_pass,
        }


def assemble(t: ClassTuple, n: int = 8) -> AssembledOrder:
    return AssembledOrder(build(t, n), n, t)


def dimension_profile(a: AssembledOrder) -> dict:
    return {
        "dim_h": a.dim_h,
        "dim_hbar": a.dim_hbar,
        "dim_lambda": a.dim_lambda,
        "dim_a": a.dim_a,
        "radical_dim": len(a.radical_labels),
    }


def is_commutative(a: AssembledOrder):
    """(flag, witness pair or None): commutativity of the truncated algebra."""
    basis = a.basis_vectors()
    for i, x in enumerate(basis):
        for y in basis[i + 1:]:
            if a.multiply(x, y) != a.multiply(y, x):
                return False, (x, y)
    return True, None


def radical_finite(names, structure) -> list:
    """Trace-form radical of an associative algebra over the rationals.

    ``structure[(i, j)]`` maps basis index pairs to {k: coefficient} dicts.
    Returns a basis (list of coordinate vectors) of the radical.  Relies on
    the characteristic-zero fact that the trace-form kernel is the radical.
    """
    dim = len(names)

    def mult(i, j):
        return structure.get((i, j), {})

    left_trace = []
    for w in range(dim):
        acc = Fraction(0)
        for k in range(dim):
            acc += mult(w, k).get(k, Fraction(0))
        left_trace.append(acc)
    gram = [
        [
            sum((cw * left_trace[w] for w, cw in mult(i, j).items()), Fraction(0))
            for j in range(dim)
        ]
        for i in range(dim)
    ]
    return linalg.kernel(gram)


def structure_constants(a: AssembledOrder):
    """Names and structure constants of the assembled algebra basis.

    Only intended for small truncations; the verification pipeline uses
    the sparse certificate instead.
    """
    basis = a.basis_vectors()
    index_of_label = {lab: len(a.lifts) + i for i, lab in enumerate(a.radical_labels)}

    def expand(vec: dict) -> dict:
        out = {}
        residue = a.residue_vector(vec)
        if any(residue):
            sol = linalg.solve([list(r) for r in a.built.embedding.matrix], residue)
            if sol is None:
                raise ValueError("vector does not lie in the assembled algebra")
            rest = dict(vec)
            for u, coeff in enumerate(sol):
                if coeff:
                    out[u] = coeff
                    for lab, c2 in a.lifts[u].items():
                        cur = rest.get(lab, Fraction(0)) - coeff * c2
                        if cur:
                            rest[lab] = cur
                        elif lab in rest:
                            del rest[lab]
            vec = rest
        for lab, coeff in vec.items():
            out[index_of_label[lab]] = coeff
        return out

    structure = {}
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            structure[(i, j)] = expand(a.multiply(x, y))
    names = [f"lift{u}" for u in range(len(a.lifts))] + [
        str(lab) for lab in a.radical_labels
    ]
    return names, structure


def verify_assembly(a: AssembledOrder, brute_radical_limit: int = 60) -> NodalityReport:
    """Independent verification of the nodality structure at the truncation."""
    report = NodalityReport()
    built = a.built
    emb = built.embedding

    report.add("embedding-injective", emb.is_injective(),
               f"rank of the embedding matrix vs dim {a.dim_lambda}")
    hom_ok = emb.is_unital() and emb.is_multiplicative()
    report.add("embedding-homomorphism", hom_ok, "unital and multiplicative")

    if a.tup is not None:
        from .semisimple import multiplicities
        basic = build(basify(a.tup), 2)
        try:
            profile = multiplicities(basic.embedding)
            ok = all(v <= 2 for v in profile.t)
            report.add("nodal-multiplicities", ok, f"t = {profile.t}")
        except ValueError as exc:
            report.add("nodal-multiplicities", False, str(exc))
    else:
        try:
            from .semisimple import multiplicities
            profile = multiplicities(emb)
            report.add("nodal-multiplicities", all(v <= 2 for v in profile.t),
                       f"t = {profile.t}")
        except ValueError as exc:
            report.add("nodal-multiplicities", False, str(exc))

    expected = a.dim_h - a.dim_hbar + a.dim_lambda
    report.add("dimension-identity", a.dim_a == expected,
               f"dim A = {a.dim_a}, dim H - dim Hbar + dim Lambda = {expected}")

    # radical match: the hereditary radical inside A is an ideal with zero
    # traces, and the lift Gram matrix is nondegenerate, so the trace-form
    # radical of A is exactly rad(H) within A.
    radical = set(a.radical_labels)
    ideal_ok = True
    basis = a.basis_vectors()
    rad_vecs = [{lab: Fraction(1)} for lab in a.radical_labels]
    for x in basis:
        for r in rad_vecs:
            if not a.in_radical_span(a.multiply(x, r)):
                ideal_ok = False
                break
            if not a.in_radical_span(a.multiply(r, x)):
                ideal_ok = False
                break
        if not ideal_ok:
            break
    report.add("radical-ideal", ideal_ok, "rad(H) is a two-sided ideal of A")

    traces_ok = all(a.monomial_trace(lab) == 0 for lab in a.radical_labels)
    report.add("radical-traces", traces_ok, "left-multiplication traces vanish")

    lam = built.lam
    lam_basis = lam.basis()
    gram = []
    for x in lam_basis:
        row = []
        for y in lam_basis:
            row.append(a.vector_trace(a.lift(lam.mul(x, y))))
        gram.append(row)
    lift_nondeg = not linalg.kernel(gram)
    report.add("radical-match", ideal_ok and traces_ok and lift_nondeg,
               "trace form vanishes on rad(H) and is nondegenerate on the lifts")

    if a.dim_a <= brute_radical_limit:
        names, struct = structure_constants(a)
        rad_basis = radical_finite(names, struct)
        expected_rad = len(a.radical_labels)
        brute_ok = len(rad_basis) == expected_rad and all(
            all(v[u] == 0 for u in range(len(a.lifts))) for v in rad_basis
        )
        report.add("radical-brute-force", brute_ok,
                   f"trace-form kernel dim {len(rad_basis)} vs {expected_rad}")

    # quotient isomorphic to Lambda: lift multiplication matches Lambda's
    table_ok = True
    for x in lam_basis:
        for y in lam_basis:
            prod = a.multiply(a.lift(x), a.lift(y))
            diff = dict(prod)
            for lab, coeff in a.lift(lam.mul(x, y)).items():
                cur = diff.get(lab, Fraction(0)) - coeff
                if cur:
                    diff[lab] = cur
                elif lab in diff:
                    del diff[lab]
            if not a.in_radical_span(diff):
                table_ok = False
                break
        if not table_ok:
            break
    # Lambda itself must be semi-simple for the quotient claim (always true
    # structurally; verified via its own trace form)
    lam_names = list(range(lam.dim))
    lam_struct = {}
    for i, x in enumerate(lam_basis):
        for j, y in enumerate(lam_basis):
            vec = lam.to_vector(lam.mul(x, y))
            lam_struct[(i, j)] = {k: v for k, v in enumerate(vec) if v}
    lam_semisimple = not radical_finite(lam_names, lam_struct)
    report.add(
        "quotient-semisimple-lambda",
        table_ok and lam_semisimple and (a.dim_a - len(a.radical_labels) == a.dim_lambda),
        "lift table reproduces the semi-simple part modulo the radical",
    )
    return report


def verify_nodal(t: ClassTuple, n: int = 4) -> NodalityReport:
    if n < 2:
        raise ValueError("verification needs truncation at least 2")
    return verify_assembly(assemble(t, n))
