"""Finite-dimensional semi-simple real algebras and verified embeddings.

An :class:`SSAlgebra` is a product of matrix algebras over R, C or H.
Elements are tuples of matrices of :class:`DivisionScalar`.  Algebra
homomorphisms are stored as exact rational matrices of the underlying
R-linear maps in the standard real bases, so unitality, multiplicativity
and injectivity are all decidable by finite exact computations.

The module implements the structure theory used downstream: multiplicity
bookkeeping deciding when a subalgebra pair is nodal, decomposition of a
nodal embedding into the five elementary shapes, the two regular
embeddings C -> M2(R) and H -> M2(C), and a constructive similarity test
for homomorphisms (similarity = equality up to an inner automorphism of
the target).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count, product

from . import linalg
from .scalars import DIMENSION, DIVISION_TAGS, DivisionScalar, embed_scalar, scalar_basis

Element = tuple  # tuple of matrices; matrix = tuple of tuples of DivisionScalar


class SSAlgebra:
    """Product of matrix algebras ``M_r(F)`` over real division algebras."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        factors = tuple((int(r), tag) for r, tag in factors)
        for r, tag in factors:
            if r < 1:
                raise ValueError("matrix sizes must be positive")
            if tag not in DIVISION_TAGS:
                raise ValueError(f"unknown division algebra tag {tag!r}")
        self.factors = factors

    # -- bookkeeping -------------------------------------------------------

    @property
    def dim(self) -> int:
        return sum(r * r * DIMENSION[tag] for r, tag in self.factors)

    def is_basic(self) -> bool:
        return all(r == 1 for r, _ in self.factors)

    def factor_offset(self, j: int) -> int:
        return sum(r * r * DIMENSION[tag] for r, tag in self.factors[:j])

    def __eq__(self, other) -> bool:
        return isinstance(other, SSAlgebra) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        body = " x ".join(f"M{r}({tag})" for r, tag in self.factors)
        return f"SSAlgebra({body})"

    # -- elements ----------------------------------------------------------

    def _zero_matrix(self, j: int):
        r, tag = self.factors[j]
        return tuple(tuple(DivisionScalar.zero(tag) for _ in range(r)) for _ in range(r))

    def _identity_matrix(self, j: int):
        r, tag = self.factors[j]
        return tuple(
            tuple(
                DivisionScalar.one(tag) if a == b else DivisionScalar.zero(tag)
                for b in range(r)
            )
            for a in range(r)
        )

    def zero(self) -> Element:
        return tuple(self._zero_matrix(j) for j in range(len(self.factors)))

    def one(self) -> Element:
        return tuple(self._identity_matrix(j) for j in range(len(self.factors)))

    def factor_unit(self, j: int) -> Element:
        """Central idempotent supported on factor ``j``."""
        out = [self._zero_matrix(i) for i in range(len(self.factors))]
        out[j] = self._identity_matrix(j)
        return tuple(out)

    def central_imaginary(self, j: int) -> Element:
        """``i * identity`` in a complex factor (central imaginary unit)."""
        r, tag = self.factors[j]
        if tag != "co":
            raise ValueError("central imaginary unit needs a complex factor")
        out = [self._zero_matrix(i) for i in range(len(self.factors))]
        i_unit = DivisionScalar.unit("co", 1)
        out[j] = tuple(
            tuple(i_unit if a == b else DivisionScalar.zero(tag) for b in range(r))
            for a in range(r)
        )
        return tuple(out)

    def with_matrix(self, j: int, matrix) -> Element:
        """Element supported on factor ``j`` with the given matrix there."""
        out = [self._zero_matrix(i) for i in range(len(self.factors))]
        out[j] = tuple(tuple(row) for row in matrix)
        return tuple(out)

    def basis_labels(self):
        """Coordinates: (factor, row, col, scalar-basis index), in order."""
        out = []
        for j, (r, tag) in enumerate(self.factors):
            for a in range(r):
                for b in range(r):
                    for m in range(DIMENSION[tag]):
                        out.append((j, a, b, m))
        return out

    def basis(self) -> list[Element]:
        out = []
        for j, a, b, m in self.basis_labels():
            r, tag = self.factors[j]
            rows = [list(row) for row in self._zero_matrix(j)]
            rows[a][b] = DivisionScalar.unit(tag, m)
            mats = [self._zero_matrix(i) for i in range(len(self.factors))]
            mats[j] = tuple(tuple(row) for row in rows)
            out.append(tuple(mats))
        return out

    def to_vector(self, x: Element) -> list[Fraction]:
        vec = []
        for j, (r, _) in enumerate(self.factors):
            for a in range(r):
                for b in range(r):
                    vec.extend(x[j][a][b].parts)
        return vec

    def from_vector(self, vec) -> Element:
        it = iter(vec)
        out = []
        for r, tag in self.factors:
            d = DIMENSION[tag]
            rows = []
            for _ in range(r):
                row = []
                for _ in range(r):
                    row.append(DivisionScalar(tag, [next(it) for _ in range(d)]))
                rows.append(tuple(row))
            out.append(tuple(rows))
        return tuple(out)

    # -- arithmetic ----------------------------------------------------------

    def add(self, x: Element, y: Element) -> Element:
        return tuple(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(ma, mb))
            for ma, mb in zip(x, y)
        )

    def sub(self, x: Element, y: Element) -> Element:
        return tuple(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(ma, mb))
            for ma, mb in zip(x, y)
        )

    def neg(self, x: Element) -> Element:
        return tuple(tuple(tuple(-a for a in row) for row in m) for m in x)

    def smul(self, c, x: Element) -> Element:
        return tuple(tuple(tuple(a.scale(c) for a in row) for row in m) for m in x)

    def mul(self, x: Element, y: Element) -> Element:
        out = []
        for j, (r, tag) in enumerate(self.factors):
            xm, ym = x[j], y[j]
            rows = []
            for a in range(r):
                row = []
                for b in range(r):
                    acc = DivisionScalar.zero(tag)
                    for c in range(r):
                        acc = acc + xm[a][c] * ym[c][b]
                    row.append(acc)
                rows.append(tuple(row))
            out.append(tuple(rows))
        return tuple(out)

    def left_mult_matrix(self, x: Element) -> list[list[Fraction]]:
        """Real matrix of ``y -> x*y`` in the standard basis."""
        cols = [self.to_vector(self.mul(x, b)) for b in self.basis()]
        return [list(row) for row in zip(*cols)]

    def is_invertible(self, x: Element) -> bool:
        return linalg.rank(self.left_mult_matrix(x)) == self.dim

    def invert(self, x: Element) -> Element:
        inv = linalg.invert(self.left_mult_matrix(x))
        if inv is None:
            raise ZeroDivisionError("element is not invertible")
        return self.from_vector(linalg.mat_vec(inv, self.to_vector(self.one())))

    def conjugate(self, b: Element, x: Element) -> Element:
        """``b x b^{-1}``; b must be invertible."""
        return self.mul(self.mul(b, x), self.invert(b))


@dataclass(frozen=True)
class AlgebraHom:
    """R-linear map between semi-simple algebras as an exact rational matrix.

    The matrix has shape (target.dim, source.dim); column ``u`` holds the
    coordinates of the image of source basis vector ``u``.
    """

    source: SSAlgebra
    target: SSAlgebra
    matrix: tuple

    @classmethod
    def from_images(cls, source: SSAlgebra, target: SSAlgebra, images) -> "AlgebraHom":
        cols = [target.to_vector(img) for img in images]
        matrix = tuple(tuple(row) for row in zip(*cols))
        return cls(source, target, matrix)

    @classmethod
    def from_callable(cls, source: SSAlgebra, target: SSAlgebra, fn) -> "AlgebraHom":
        return cls.from_images(source, target, [fn(b) for b in source.basis()])

    @classmethod
    def identity(cls, algebra: SSAlgebra) -> "AlgebraHom":
        return cls.from_images(algebra, algebra, algebra.basis())

    def apply(self, x: Element) -> Element:
        return self.target.from_vector(
            linalg.mat_vec(self.matrix, self.source.to_vector(x))
        )

    def compose(self, inner: "AlgebraHom") -> "AlgebraHom":
        if inner.target != self.source:
            raise ValueError("composition signature mismatch")
        return AlgebraHom(
            inner.source,
            self.target,
            tuple(tuple(row) for row in linalg.mat_mul(self.matrix, inner.matrix)),
        )

    # -- verification ---------------------------------------------------------

    def is_unital(self) -> bool:
        return self.apply(self.source.one()) == self.target.one()

    def is_multiplicative(self) -> bool:
        basis = self.source.basis()
        images = [self.apply(b) for b in basis]
        for u, x in enumerate(basis):
            for v, y in enumerate(basis):
                left = self.apply(self.source.mul(x, y))
                if left != self.target.mul(images[u], images[v]):
                    return False
        return True

    def is_injective(self) -> bool:
        return linalg.rank([list(r) for r in self.matrix]) == self.source.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraHom)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))


@lru_cache(maxsize=4096)
def _verified(f: AlgebraHom) -> bool:
    return f.is_unital() and f.is_multiplicative()


def is_homomorphism(f: AlgebraHom) -> tuple[bool, list[str]]:
    """Unital + multiplicative check with human-readable diagnostics."""
    problems = []
    if len(f.matrix) != f.target.dim or any(len(r) != f.source.dim for r in f.matrix):
        return False, ["matrix shape does not match source/target dimensions"]
    if not f.is_unital():
        problems.append("map does not send 1 to 1")
    if not f.is_multiplicative():
        problems.append("map is not multiplicative on basis pairs")
    return not problems, problems


def conjugate_hom(b: Element, f: AlgebraHom) -> AlgebraHom:
    """The homomorphism ``Ad_b o f``."""
    tgt = f.target
    b_inv = tgt.invert(b)
    return AlgebraHom.from_callable(
        f.source, tgt, lambda x: tgt.mul(tgt.mul(b, f.apply(x)), b_inv)
    )


@dataclass(frozen=True)
class MultiplicityProfile:
    """Exact multiplicities of a basic subalgebra inside a semi-simple one.

    ``q[j][i]`` counts copies of source factor i inside the simple module
    of target factor j; ``t[i] = sum_j r_j * q[j][i]`` counts copies of
    source factor i in the whole target viewed as a left source-module.
    """

    q: tuple
    t: tuple


def _column_module_action(target: SSAlgebra, j: int, x: Element):
    """Real matrix of left multiplication by ``x[j]`` on the column space F^r."""
    r, tag = target.factors[j]
    d = DIMENSION[tag]
    cols = []
    for b in range(r):
        for m in range(d):
            v = [DivisionScalar.zero(tag)] * r
            v[b] = DivisionScalar.unit(tag, m)
            image = []
            for a in range(r):
                acc = DivisionScalar.zero(tag)
                for c in range(r):
                    acc = acc + x[j][a][c] * v[c]
                image.extend(acc.parts)
            cols.append(image)
    return [list(row) for row in zip(*cols)]


def multiplicities(phi: AlgebraHom) -> MultiplicityProfile:
    src, tgt = phi.source, phi.target
    if not src.is_basic():
        raise ValueError("multiplicities need a basic source")
    if not _verified(phi):
        raise ValueError("multiplicities need a verified homomorphism")
    if not phi.is_injective():
        raise ValueError("embedding is not injective")
    q_rows = []
    for j in range(len(tgt.factors)):
        row = []
        for i, (_, ltag) in enumerate(src.factors):
            e_img = phi.apply(src.factor_unit(i))
            image_dim = linalg.rank(_column_module_action(tgt, j, e_img))
            dim_i = DIMENSION[ltag]
            if image_dim % dim_i:
                raise ValueError("idempotent image dimension is not a multiple")
            row.append(image_dim // dim_i)
        q_rows.append(tuple(row))
    q = tuple(q_rows)
    t = tuple(
        sum(tgt.factors[j][0] * q[j][i] for j in range(len(tgt.factors)))
        for i in range(len(src.factors))
    )
    return MultiplicityProfile(q, t)


def is_nodal_embedding(phi: AlgebraHom) -> bool:
    """True iff the target needs at most two generators as a source-module."""
    return all(t <= 2 for t in multiplicities(phi).t)


# -- regular embeddings ------------------------------------------------------


def regular_embed(k_tag: str, l_tag: str) -> AlgebraHom:
    """The regular embedding of L into M2(K) for (K, L) in {(R, C), (C, H)}.

    Complex numbers act on themselves as real 2x2 matrices; quaternions
    z + w j act on the right complex module with basis (1, j) as
    [[z, w], [-conj(w), conj(z)]].
    """
    if (k_tag, l_tag) == ("re", "co"):
        source = SSAlgebra([(1, "co")])
        target = SSAlgebra([(2, "re")])

        def image(z: DivisionScalar):
            a, b = z.parts
            return (
                (
                    (DivisionScalar("re", (a,)), DivisionScalar("re", (-b,))),
                    (DivisionScalar("re", (b,)), DivisionScalar("re", (a,))),
                ),
            )

    elif (k_tag, l_tag) == ("co", "qt"):
        source = SSAlgebra([(1, "qt")])
        target = SSAlgebra([(2, "co")])

        def image(x: DivisionScalar):
            a, b, c, d = x.parts
            z = DivisionScalar("co", (a, b))
            w = DivisionScalar("co", (c, d))
            return (((z, w), (-w.conj(), z.conj())),)

    else:
        raise ValueError(f"no regular embedding for pair ({k_tag!r}, {l_tag!r})")
    return AlgebraHom.from_images(
        source, target, [image(b[0][0][0]) for b in source.basis()]
    )


def scalar_action_embedding(delta: AlgebraHom, v) -> AlgebraHom:
    """Invert ``b -> delta(b) v`` to express the right scalar action.

    For a homomorphism ``delta: L -> M2(K)`` with dim L = 2 dim K and a
    nonzero column ``v`` in K^2, returns the unique embedding
    ``gamma: K -> L`` satisfying ``delta(gamma(a)) v = v a``.
    """
    (l_size, l_tag), = delta.source.factors
    (k_size, k_tag), = delta.target.factors
    if l_size != 1 or k_size != 2:
        raise ValueError("expected a map from a division algebra into 2x2 matrices")
    if DIMENSION[l_tag] != 2 * DIMENSION[k_tag]:
        raise ValueError("dimension constraint dim L = 2 dim K fails")
    if not _verified(delta):
        raise ValueError("need a verified homomorphism")
    v = tuple(v)
    if len(v) != 2 or all(c.is_zero() for c in v):
        raise ValueError("need a nonzero vector in K^2")

    def to_coords(col):
        out = []
        for c in col:
            out.extend(c.parts)
        return out

    cols = []
    for b in delta.source.basis():
        m = delta.apply(b)[0]
        image = []
        for a in range(2):
            acc = DivisionScalar.zero(k_tag)
            for c in range(2):
                acc = acc + m[a][c] * v[c]
            image.append(acc)
        cols.append(to_coords(image))
    xi = [list(row) for row in zip(*cols)]
    xi_inv = linalg.invert(xi)
    if xi_inv is None:
        raise ValueError("the vector does not generate the column space over L")
    source = SSAlgebra([(1, k_tag)])
    images = []
    for a in scalar_basis(k_tag):
        rhs = to_coords([v[0] * a, v[1] * a])
        images.append(delta.source.from_vector(linalg.mat_vec(xi_inv, rhs)))
    gamma = AlgebraHom.from_images(source, delta.source, images)
    if not _verified(gamma):
        raise ValueError("extracted scalar action is not a homomorphism")
    return gamma


def regular_embedding_of(gamma: AlgebraHom, basis=None) -> AlgebraHom:
    """Regular embedding L -> M_n(K) attached to an inclusion gamma: K -> L.

    L acts on itself by left multiplication; the right K-module structure
    through ``gamma`` turns that action into matrices over K.  ``basis``
    optionally fixes the right-K-basis of L (defaults to a greedy one);
    different bases give similar embeddings.
    """
    (k_size, k_tag), = gamma.source.factors
    (l_size, l_tag), = gamma.target.factors
    if k_size != 1 or l_size != 1:
        raise ValueError("regular embeddings act on division algebra pairs")
    if not _verified(gamma):
        raise ValueError("need a verified homomorphism")
    L = gamma.target
    dim_k = DIMENSION[k_tag]
    dim_l = DIMENSION[l_tag]
    if dim_l % dim_k:
        raise ValueError("dimension of L must be a multiple of dim K")
    n = dim_l // dim_k
    gamma_scalars = [gamma.apply(b)[0][0][0] for b in gamma.source.basis()]

    if basis is None:
        basis = []
        span_rows: list[list[Fraction]] = []
        for cand in scalar_basis(l_tag):
            candidate_rows = list(span_rows)
            for g in gamma_scalars:
                candidate_rows.append(list((cand * g).parts))
            if linalg.rank(candidate_rows) == len(candidate_rows):
                basis.append(cand)
                span_rows = candidate_rows
            if len(basis) == n:
                break
        if len(basis) != n:
            raise ValueError("could not complete a right basis of L over K")
    basis = list(basis)
    # coordinates: columns b_i * gamma(e_m) expressed in the real basis of L
    coord_cols = []
    for b in basis:
        for g in gamma_scalars:
            coord_cols.append(list((b * g).parts))
    coord = [list(row) for row in zip(*coord_cols)]
    coord_inv = linalg.invert(coord)
    if coord_inv is None:
        raise ValueError("chosen elements do not form a right K-basis")
    target = SSAlgebra([(n, k_tag)])

    def image(x_elem):
        x = x_elem[0][0][0]
        cols = []
        for b in basis:
            vec = linalg.mat_vec(coord_inv, list((x * b).parts))
            entries = []
            for i in range(n):
                entries.append(
                    DivisionScalar(k_tag, vec[i * dim_k:(i + 1) * dim_k])
                )
            cols.append(entries)
        matrix = tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))
        return (matrix,)

    return AlgebraHom.from_callable(L, target, image)


# -- similarity ---------------------------------------------------------------


def _cc_multiplicities(phi: AlgebraHom, i: int, j: int):
    """Holomorphic/antiholomorphic multiplicities of e_i S_j (both complex).

    The bimodule e_i * S_j over (complex source factor i, complex target
    factor j) splits into copies where the central imaginary unit acts as
    right multiplication by +i or by -i; the pair of multiplicities is the
    exact invariant separating diag from diag*.
    """
    tgt = phi.target
    e_act = _column_module_action(tgt, j, phi.apply(phi.source.factor_unit(i)))
    i_act = _column_module_action(tgt, j, phi.apply(phi.source.central_imaginary(i)))
    r, tag = tgt.factors[j]
    d = DIMENSION[tag]
    n = r * d
    right_i = [[Fraction(0)] * n for _ in range(n)]
    col = 0
    for b in range(r):
        for m in range(d):
            w = DivisionScalar.unit(tag, m) * DivisionScalar.unit(tag, 1)
            for mm, val in enumerate(w.parts):
                right_i[b * d + mm][col] = val
            col += 1
    ident = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    out = []
    for sign in (1, -1):
        rows = []
        for a in range(n):
            rows.append([e_act[a][b] - ident[a][b] for b in range(n)])
        for a in range(n):
            rows.append([i_act[a][b] - sign * right_i[a][b] for b in range(n)])
        out.append(len(linalg.kernel(rows)) // 2)
    return tuple(out)


def _similarity_invariant(phi: AlgebraHom):
    """Bimodule multiplicities deciding similarity factor by factor.

    Any bimodule over a pair of real division algebras is determined by
    its dimension except in the complex-complex case, which splits into
    holomorphic and antiholomorphic parts.
    """
    src, tgt = phi.source, phi.target
    out = []
    for j, (_, ftag) in enumerate(tgt.factors):
        row = []
        for i, (_, ltag) in enumerate(src.factors):
            e_img = phi.apply(src.factor_unit(i))
            dim = linalg.rank(_column_module_action(tgt, j, e_img))
            if ltag == "co" and ftag == "co" and dim:
                row.append(("cc",) + _cc_multiplicities(phi, i, j))
            else:
                row.append(("dim", dim))
        out.append(tuple(row))
    return tuple(out)


def are_similar(f: AlgebraHom, g: AlgebraHom):
    """Witness ``b`` with ``g = Ad_b o f``, or None when no unit exists.

    The intertwiner space {b : b f(x) = g(x) b} is an exact kernel; whether
    it contains a unit is decided by the bimodule invariant, after which a
    witness is found by scanning integer combinations of a kernel basis
    (grid bound grows until a unit appears; one always does once the
    invariants agree).
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps must share source and target")
    if not (_verified(f) and _verified(g)):
        raise ValueError("similarity is defined for verified homomorphisms")
    if f.matrix == g.matrix:
        return f.target.one()
    if _similarity_invariant(f) != _similarity_invariant(g):
        return None
    tgt = f.target
    tgt_basis = tgt.basis()
    rows = []
    for x in f.source.basis():
        fx, gx = f.apply(x), g.apply(x)
        cols = []
        for b in tgt_basis:
            diff = tgt.sub(tgt.mul(b, fx), tgt.mul(gx, b))
            cols.append(tgt.to_vector(diff))
        rows.extend([list(r) for r in zip(*cols)])
    space = linalg.kernel(rows)
    if not space:
        raise AssertionError("invariants agree but the intertwiner space is zero")
    dim = len(space)
    for bound in count(1):
        for combo in product(range(-bound, bound + 1), repeat=dim):
            if not any(abs(c) == bound for c in combo):
                continue
            vec = [
                sum(Fraction(c) * base[u] for c, base in zip(combo, space))
                for u in range(tgt.dim)
            ]
            cand = tgt.from_vector(vec)
            if tgt.is_invertible(cand):
                return cand


# -- decomposition into elementary embeddings ----------------------------------


@dataclass
class ElementaryComponent:
    """One elementary block of a nodal embedding.

    ``kind`` enumerates the five shapes: 1 identity onto a division
    factor, 2 twisted diagonal into two division factors, 3 index-two
    inclusion of division algebras, 4 canonical F x F inside M2(F),
    5 regular embedding into M2 of the half-dimensional algebra.

    ``witness`` maps each involved target factor to a matrix; conjugating
    the standard form (precomposed with ``source_twist``) by the witness
    reproduces the restriction of the decomposed map exactly.
    """

    kind: int
    sources: tuple
    targets: tuple
    tau: str | None = None            # kind 2: "id" or "conj"
    inclusion: str | None = None      # kind 3: "re<co" or "co<qt"
    witness: dict = field(default_factory=dict)
    source_twist: dict = field(default_factory=dict)  # source factor -> "id"/"conj"


def _division_iso_data(values: list[DivisionScalar], tag: str):
    """Normalize an automorphism of a division algebra given on basis scalars.

    Returns (u, twist) with Ad_u o twist equal to the automorphism; twist
    is "conj" only in the complex case, quaternion automorphisms are inner.
    """
    if tag == "re":
        return DivisionScalar.one("re"), "id"
    if tag == "co":
        if values[1] == DivisionScalar.unit("co", 1):
            return DivisionScalar.one("co"), "id"
        if values[1] == -DivisionScalar.unit("co", 1):
            return DivisionScalar.one("co"), "conj"
        raise ValueError("not an automorphism of the complex numbers")
    rows = []
    for m in (1, 2):  # the images of i and j pin the automorphism
        a = DivisionScalar.unit("qt", m)
        sa = values[m]
        cols = []
        for mm in range(4):
            u = DivisionScalar.unit("qt", mm)
            cols.append((sa * u - u * a).parts)
        rows.extend([list(r) for r in zip(*cols)])
    space = linalg.kernel(rows)
    if not space:
        raise ValueError("no conjugating unit for the quaternion automorphism")
    return DivisionScalar("qt", space[0]), "id"


def _inclusion_witness(values: list[DivisionScalar], src_tag: str, tgt_tag: str):
    """Unit u with Ad_u o (standard inclusion) equal to the given embedding."""
    if (src_tag, tgt_tag) == ("re", "co"):
        return DivisionScalar.one("co")  # the unital real embedding is unique
    if (src_tag, tgt_tag) == ("co", "qt"):
        q = values[1]  # image of i; solve u i = q u
        a = DivisionScalar.unit("qt", 1)
        cols = []
        for mm in range(4):
            u = DivisionScalar.unit("qt", mm)
            cols.append((u * a - q * u).parts)
        rows = [list(r) for r in zip(*cols)]
        for vec in linalg.kernel(rows):
            u = DivisionScalar("qt", vec)
            if u.norm() != 0:
                return u
        raise ValueError("no conjugating unit for the complex inclusion")
    raise ValueError(f"unexpected inclusion pair ({src_tag!r}, {tgt_tag!r})")


def _restriction_images(phi: AlgebraHom, i: int) -> list[Element]:
    """Images of the scalar basis of (basic) source factor i."""
    src = phi.source
    offset = src.factor_offset(i)
    basis = src.basis()
    return [phi.apply(basis[offset + m]) for m in range(DIMENSION[src.factors[i][1]])]


def decompose(phi: AlgebraHom) -> list[ElementaryComponent]:
    """Split a nodal embedding of a basic algebra into elementary components."""
    profile = multiplicities(phi)
    if any(t > 2 for t in profile.t):
        raise ValueError("embedding is not nodal: a factor needs > 2 generators")
    src, tgt = phi.source, phi.target
    q = profile.q
    components: list[ElementaryComponent] = []
    seen_sources: set[int] = set()
    for j, (rj, ftag) in enumerate(tgt.factors):
        contributors = [i for i in range(len(src.factors)) if q[j][i]]
        if not contributors:
            raise ValueError(f"target factor {j} receives nothing")
        if rj == 1:
            i = contributors[0]
            stag = src.factors[i][1]
            values = [img[j][0][0] for img in _restriction_images(phi, i)]
            if q[j][i] == 2:
                u = _inclusion_witness(values, stag, ftag)
                inclusion = "re<co" if (stag, ftag) == ("re", "co") else "co<qt"
                components.append(
                    ElementaryComponent(3, (i,), (j,), inclusion=inclusion,
                                        witness={j: ((u,),)})
                )
                seen_sources.add(i)
                continue
            other = [l for l in range(len(tgt.factors)) if l != j and q[l][i]]
            if not other:
                u, twist = _division_iso_data(values, stag)
                components.append(
                    ElementaryComponent(1, (i,), (j,), witness={j: ((u,),)},
                                        source_twist={i: twist})
                )
                seen_sources.add(i)
                continue
            if i in seen_sources:
                continue
            l = other[0]
            values_l = [img[l][0][0] for img in _restriction_images(phi, i)]
            u1, tw1 = _division_iso_data(values, stag)
            u2, tw2 = _division_iso_data(values_l, stag)
            tau = "conj" if tw1 != tw2 else "id"
            components.append(
                ElementaryComponent(2, (i,), (j, l), tau=tau,
                                    witness={j: ((u1,),), l: ((u2,),)},
                                    source_twist={i: tw1})
            )
            seen_sources.add(i)
            continue
        if len(contributors) == 2:
            i, k = contributors
            components.append(_canonical_pair_component(phi, i, k, j))
            seen_sources.update((i, k))
        else:
            i = contributors[0]
            stag = src.factors[i][1]
            if (ftag, stag) not in (("re", "co"), ("co", "qt")):
                raise ValueError("unexpected tags for a regular component")
            single_src = SSAlgebra([(1, stag)])
            single_tgt = SSAlgebra([(2, ftag)])
            restricted = AlgebraHom.from_images(
                single_src, single_tgt,
                [(img[j],) for img in _restriction_images(phi, i)],
            )
            b = are_similar(regular_embed(ftag, stag), restricted)
            if b is None:
                raise ValueError("regular component not similar to the standard form")
            components.append(ElementaryComponent(5, (i,), (j,), witness={j: b[0]}))
            seen_sources.add(i)
    return components


def _canonical_pair_component(phi: AlgebraHom, i: int, k: int, j: int) -> ElementaryComponent:
    tgt = phi.target
    ftag = tgt.factors[j][1]
    single = SSAlgebra([(2, ftag)])
    p_mat = phi.apply(phi.source.factor_unit(i))[j]
    q_mat = phi.apply(phi.source.factor_unit(k))[j]
    v1 = _nonzero_column(p_mat)
    v2 = _nonzero_column(q_mat)
    binv = ((v1[0], v2[0]), (v1[1], v2[1]))
    b = single.invert((binv,))[0]
    twists = {}
    units = []
    for pos, src_index in ((0, i), (1, k)):
        corner_values = []
        for img in _restriction_images(phi, src_index):
            m = single.conjugate((b,), (img[j],))[0]
            corner_values.append(m[pos][pos])
        u, twist = _division_iso_data(corner_values, phi.source.factors[src_index][1])
        units.append(u)
        twists[src_index] = twist
    zero = DivisionScalar.zero(ftag)
    diag_u = ((units[0], zero), (zero, units[1]))
    # sigma = Ad_{b^{-1} diag(u)} o can o twist
    full = single.mul((binv,), (diag_u,))[0]
    return ElementaryComponent(4, (i, k), (j,), witness={j: full},
                               source_twist=twists)


def _nonzero_column(mat):
    r = len(mat)
    for c in range(r):
        col = tuple(mat[a][c] for a in range(r))
        if any(not x.is_zero() for x in col):
            return col
    raise ValueError("idempotent has no nonzero column")


def reassemble(phi: AlgebraHom, components: list[ElementaryComponent]) -> AlgebraHom:
    """Product of the standard forms with source twists, without witnesses.

    The result is similar to ``phi``: conjugating factorwise by the
    component witnesses recovers ``phi`` on the nose.
    """
    src, tgt = phi.source, phi.target

    def standard_blocks(comp: ElementaryComponent, i_local: int, scalar: DivisionScalar):
        out = {}
        if comp.kind == 1:
            tw = comp.source_twist.get(comp.sources[0], "id")
            x = scalar.conj() if tw == "conj" else scalar
            out[comp.targets[0]] = ((x,),)
        elif comp.kind == 2:
            tw = comp.source_twist.get(comp.sources[0], "id")
            x = scalar.conj() if tw == "conj" else scalar
            y = x.conj() if comp.tau == "conj" else x
            out[comp.targets[0]] = ((x,),)
            out[comp.targets[1]] = ((y,),)
        elif comp.kind == 3:
            ftag = tgt.factors[comp.targets[0]][1]
            out[comp.targets[0]] = ((embed_scalar(scalar, ftag),),)
        elif comp.kind == 4:
            ftag = tgt.factors[comp.targets[0]][1]
            tw = comp.source_twist.get(comp.sources[i_local], "id")
            x = scalar.conj() if tw == "conj" else scalar
            z = DivisionScalar.zero(ftag)
            if i_local == 0:
                out[comp.targets[0]] = ((x, z), (z, z))
            else:
                out[comp.targets[0]] = ((z, z), (z, x))
        elif comp.kind == 5:
            ftag = tgt.factors[comp.targets[0]][1]
            reg = regular_embed(ftag, src.factors[comp.sources[0]][1])
            out[comp.targets[0]] = reg.apply(reg.source.from_vector(scalar.parts))[0]
        return out

    by_source = {}
    for comp in components:
        for i_local, i in enumerate(comp.sources):
            by_source[i] = (comp, i_local)
    images = []
    for i, (_, stag) in enumerate(src.factors):
        comp, i_local = by_source[i]
        for scalar in scalar_basis(stag):
            blocks = standard_blocks(comp, i_local, scalar)
            full = [tgt._zero_matrix(j) for j in range(len(tgt.factors))]
            for j, m in blocks.items():
                full[j] = m
            images.append(tuple(full))
    return AlgebraHom.from_images(src, tgt, images)


def component_witness_element(phi: AlgebraHom, components) -> Element:
    """Global unit assembling the per-factor component witnesses."""
    tgt = phi.target
    mats = [tgt._identity_matrix(j) for j in range(len(tgt.factors))]
    for comp in components:
        for j, m in comp.witness.items():
            mats[j] = tuple(tuple(row) for row in m)
    return tuple(mats)
