"""Standard hereditary orders over the four maximal scalar local models.

``HereditaryOrder(tag, shape, n)`` is the block-triangular order inside
p x p matrices over the series model tagged ``tag``: entries strictly
above the diagonal blocks have valuation >= 1, everything else is a
power series.  Elements are plain tuples of tuples of :class:`TLaurent`
with the order providing membership, radical and unit tests, the
semi-simple quotient, the rotation normalizing the order, and the
monomial normal form of normalizing matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import RESIDUE_TAG, DivisionScalar, scalar_basis
from .semisimple import AlgebraHom, SSAlgebra
from .series import DEFAULT_TRUNCATION, TLaurent

Matrix = tuple  # tuple of tuples of TLaurent


def minimal_period(shape) -> tuple[int, int]:
    """Smallest cyclic period t of the block-size vector; returns (t, r // t)."""
    shape = tuple(shape)
    r = len(shape)
    if r == 0:
        raise ValueError("shape must be nonempty")
    for t in range(1, r + 1):
        if r % t == 0 and all(shape[i] == shape[i % t] for i in range(r)):
            return t, r // t
    raise AssertionError("unreachable: r is always a period")


class HereditaryOrder:
    """The standard hereditary order with given scalar tag and block sizes."""

    __slots__ = ("tag", "shape", "n", "p", "starts", "period", "turns", "q")

    def __init__(self, tag: str, shape, n: int = DEFAULT_TRUNCATION):
        shape = tuple(int(s) for s in shape)
        if not shape or any(s < 1 for s in shape):
            raise ValueError("shape must be a nonempty list of positive integers")
        self.tag = tag
        self.shape = shape
        self.n = n
        self.p = sum(shape)
        starts = [0]
        for s in shape:
            starts.append(starts[-1] + s)
        self.starts = tuple(starts)
        self.period, self.turns = minimal_period(shape)
        self.q = sum(shape[: self.period])

    # -- structure ------------------------------------------------------------

    def block_of(self, index: int) -> int:
        for b in range(len(self.shape)):
            if index < self.starts[b + 1]:
                return b
        raise IndexError(index)

    def min_valuation(self, a: int, b: int) -> int:
        """Required valuation of entry (a, b): 1 strictly above the diagonal blocks."""
        return 1 if self.block_of(a) < self.block_of(b) else 0

    def residue_tag(self) -> str:
        return RESIDUE_TAG[self.tag]

    def quotient_algebra(self) -> SSAlgebra:
        return SSAlgebra([(s, self.residue_tag()) for s in self.shape])

    def __repr__(self) -> str:
        return f"HereditaryOrder({self.tag!r}, {self.shape}, n={self.n})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HereditaryOrder)
            and self.tag == other.tag
            and self.shape == other.shape
            and self.n == other.n
        )

    def __hash__(self) -> int:
        return hash((self.tag, self.shape, self.n))

    # -- element constructors ---------------------------------------------------

    def zero_series(self) -> TLaurent:
        return TLaurent.zero(self.tag, self.n)

    def one_series(self) -> TLaurent:
        return TLaurent.one(self.tag, self.n)

    def t_series(self, e: int = 1, scalar=1) -> TLaurent:
        return TLaurent.t_power(self.tag, e, self.n, scalar)

    def identity(self) -> Matrix:
        z, o = self.zero_series(), self.one_series()
        return tuple(
            tuple(o if a == b else z for b in range(self.p)) for a in range(self.p)
        )

    def zero_matrix(self) -> Matrix:
        z = self.zero_series()
        return tuple(tuple(z for _ in range(self.p)) for _ in range(self.p))

    def matrix_unit(self, a: int, b: int, entry: TLaurent | None = None) -> Matrix:
        entry = self.one_series() if entry is None else entry
        z = self.zero_series()
        return tuple(
            tuple(entry if (r, c) == (a, b) else z for c in range(self.p))
            for r in range(self.p)
        )

    def check_matrix(self, x: Matrix) -> None:
        if len(x) != self.p or any(len(row) != self.p for row in x):
            raise ValueError(f"matrix must be {self.p} x {self.p}")
        for row in x:
            for entry in row:
                if entry.tag != self.tag or entry.n != self.n:
                    raise ValueError("entry tag or truncation mismatch")

    # -- membership ----------------------------------------------------------------

    def contains(self, x: Matrix) -> bool:
        self.check_matrix(x)
        return all(
            x[a][b].val() >= self.min_valuation(a, b)
            for a in range(self.p)
            for b in range(self.p)
        )

    def in_radical(self, x: Matrix) -> bool:
        if not self.contains(x):
            return False
        return all(
            x[a][b].val() >= 1
            for a in range(self.p)
            for b in range(self.p)
            if self.block_of(a) == self.block_of(b)
        )

    def quotient(self, x: Matrix):
        """Diagonal blocks at t = 0, as an element of the quotient algebra."""
        if not self.contains(x):
            raise ValueError("matrix is not a member of the order")
        blocks = []
        for b, size in enumerate(self.shape):
            s = self.starts[b]
            blocks.append(
                tuple(
                    tuple(x[s + a][s + c].residue() for c in range(size))
                    for a in range(size)
                )
            )
        return tuple(blocks)

    def is_unit(self, x: Matrix) -> bool:
        if not self.contains(x):
            return False
        return self.quotient_algebra().is_invertible(self.quotient(x))

    # -- the rotation -----------------------------------------------------------------

    def rotation(self) -> Matrix:
        """Block matrix with identity subdiagonal and t * identity corner.

        Its l-th power is t times the identity and conjugation by it
        preserves the order.
        """
        z, o = self.zero_series(), self.one_series()
        t = self.t_series()
        q, l = self.q, self.turns
        rows = []
        for a in range(self.p):
            block_a, pos_a = divmod(a, q)
            row = []
            for b in range(self.p):
                block_b, pos_b = divmod(b, q)
                if pos_a == pos_b and block_a == 0 and block_b == l - 1:
                    row.append(t)
                elif pos_a == pos_b and block_a == block_b + 1:
                    row.append(o)
                else:
                    row.append(z)
            rows.append(tuple(row))
        return tuple(rows)

    def generators(self) -> list[Matrix]:
        """Finite ring generating set: in-pattern scalar units plus t-units."""
        gens = []
        for a in range(self.p):
            for b in range(self.p):
                m = self.min_valuation(a, b)
                for s in scalar_basis(self.residue_tag()):
                    gens.append(self.matrix_unit(a, b, self.t_series(m, s)))
        for a in range(self.p):
            gens.append(self.matrix_unit(a, a, self.t_series(1)))
        return gens


# -- matrix arithmetic over the series model -------------------------------------


def mat_add(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


def mat_sub(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


def mat_neg(x: Matrix) -> Matrix:
    return tuple(tuple(-a for a in row) for row in x)


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    p = len(x)
    cols = list(zip(*y))
    out = []
    for a in range(p):
        row = []
        for b in range(p):
            acc = None
            for c in range(p):
                term = x[a][c] * cols[b][c]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_scale_left(f: TLaurent, x: Matrix) -> Matrix:
    return tuple(tuple(f * a for a in row) for row in x)


def mat_equal(x: Matrix, y: Matrix) -> bool:
    return all(a == b for rx, ry in zip(x, y) for a, b in zip(rx, ry))


def mat_inverse(x: Matrix) -> Matrix | None:
    """Inverse over the Laurent field model, or None when singular.

    Gauss-Jordan with valuation pivoting; rows are multiplied on the left
    only, which is what a (possibly twisted) coefficient ring requires.
    """
    p = len(x)
    if p == 0:
        return ()
    tag, n = x[0][0].tag, x[0][0].n
    zero = TLaurent.zero(tag, n)
    one = TLaurent.one(tag, n)
    aug = [
        list(row) + [one if i == j else zero for j in range(p)]
        for i, row in enumerate(x)
    ]
    for col in range(p):
        pivot, best = None, None
        for r in range(col, p):
            v = aug[r][col].val()
            if aug[r][col] and (best is None or v < best):
                pivot, best = r, v
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [inv * e for e in aug[col]]
        for r in range(p):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [e - f * g for e, g in zip(aug[r], aug[col])]
    return tuple(tuple(row[p:]) for row in aug)


# -- normalizer normal form ------------------------------------------------------


class TruncationError(ValueError):
    """Raised when the working truncation cannot certify a result."""

    def __init__(self, required: int, message: str):
        super().__init__(message)
        self.required = required


@dataclass
class MonomialForm:
    """Result of reducing a normalizing matrix to ``t**(-d)`` times a rotation power.

    The witnesses satisfy ``x = g * t**(-d) * rotation**k * h`` exactly at
    the working truncation, with g and h units of the order.
    """

    d: int
    k: int
    g: Matrix
    h: Matrix

    def verify(self, order: HereditaryOrder, x: Matrix) -> bool:
        core = monomial_matrix(order, self.d, self.k)
        recon = mat_mul(mat_mul(self.g, core), self.h)
        return (
            order.is_unit(self.g)
            and order.is_unit(self.h)
            and mat_equal(recon, x)
        )


def monomial_matrix(order: HereditaryOrder, d: int, k: int) -> Matrix:
    """The matrix ``t**(-d) * rotation**k``."""
    out = order.identity()
    rho = order.rotation()
    for _ in range(k % order.turns):
        out = mat_mul(out, rho)
    scale = tuple(
        tuple(
            order.t_series(-d) if a == b else order.zero_series()
            for b in range(order.p)
        )
        for a in range(order.p)
    )
    return mat_mul(scale, out)


def normalizes(order: HereditaryOrder, x: Matrix, x_inv: Matrix | None = None) -> bool:
    """Check that conjugation by ``x`` (both ways) maps the order into itself.

    Conjugating a one-entry generator ``s t^m e_ab`` gives the rank-one
    matrix ``x[r][a] (s t^m) xinv[b][c]``; each entry is a single product
    of nonzero factors, so its valuation is the exact sum of valuations
    and membership reduces to integer inequalities over the generators.
    """
    if x_inv is None:
        x_inv = mat_inverse(x)
        if x_inv is None:
            return False
    p = order.p

    def side_ok(left: Matrix, right: Matrix) -> bool:
        left_val = [[left[r][a].val() for a in range(p)] for r in range(p)]
        right_val = [[right[b][c].val() for c in range(p)] for b in range(p)]
        for a in range(p):
            for b in range(p):
                m = order.min_valuation(a, b)
                for r in range(p):
                    va = left_val[r][a]
                    for c in range(p):
                        if va + m + right_val[b][c] < order.min_valuation(r, c):
                            return False
        return True

    return side_ok(x, x_inv) and side_ok(x_inv, x)


def normal_form(order: HereditaryOrder, x: Matrix) -> MonomialForm:
    """Monomial normal form of a matrix normalizing the order.

    Valuation-pivot reduction: repeatedly select the entry of smallest
    valuation that is strictly smaller than everything above it in its
    column and after it in its row, clear its row and column by unit row
    and column operations of the order, and normalize the pivot to a power
    of t.  The exponent profile of the resulting monomial matrix reads off
    (d, k) on the lattice chain; the accumulated operations provide unit
    witnesses.
    """
    order.check_matrix(x)
    p, n, tag = order.p, order.n, order.tag
    x_inv = mat_inverse(x)
    if x_inv is None:
        raise ValueError("matrix is not invertible over the Laurent model")
    if not normalizes(order, x, x_inv):
        raise ValueError("matrix does not normalize the order")

    m = [list(row) for row in x]
    zero = TLaurent.zero(tag, n)
    one = TLaurent.one(tag, n)
    g_inv = [[one if a == b else zero for b in range(p)] for a in range(p)]
    h_inv = [[one if a == b else zero for b in range(p)] for a in range(p)]
    active_rows = set(range(p))
    active_cols = set(range(p))

    for _ in range(p):
        pivot = None
        for i in active_rows:
            for j in active_cols:
                if not m[i][j]:
                    continue
                key = (m[i][j].val(), -j, -i)
                if pivot is None or key < pivot[0]:
                    pivot = (key, i, j)
        if pivot is None:
            raise ValueError("matrix became singular during reduction")
        _, i, j = pivot
        delta = m[i][j].val()
        # normalize the pivot to t**delta by a left unit row scaling
        s = m[i][j] * TLaurent.t_power(tag, -delta, n)
        s_inv = s.inverse()
        m[i] = [s_inv * e for e in m[i]]
        for r in range(p):
            g_inv[r][i] = g_inv[r][i] * s
        # clear the pivot column by row operations
        t_neg = TLaurent.t_power(tag, -delta, n)
        for i2 in range(p):
            if i2 == i or not m[i2][j]:
                continue
            f = m[i2][j] * t_neg
            m[i2] = [e - f * g for e, g in zip(m[i2], m[i])]
            for r in range(p):
                g_inv[r][i] = g_inv[r][i] + g_inv[r][i2] * f
        # clear the pivot row by column operations
        for j2 in range(p):
            if j2 == j or not m[i][j2]:
                continue
            gq = t_neg * m[i][j2]
            for r in range(p):
                m[r][j2] = m[r][j2] - m[r][j] * gq
            for c in range(p):
                h_inv[j][c] = h_inv[j][c] + gq * h_inv[j2][c]
        active_rows.discard(i)
        active_cols.discard(j)

    # read the exponent profile from the rows of the monomial matrix
    exps = []
    for i in range(p):
        entries = [j for j in range(p) if m[i][j]]
        if len(entries) != 1:
            raise AssertionError("reduction did not produce a monomial matrix")
        exps.append(m[i][entries[0]].val())
    if any(exps[i] < exps[i + 1] for i in range(p - 1)) or exps[0] - exps[-1] > 1:
        raise ValueError("exponent profile incompatible with the lattice chain")
    d = -exps[-1]
    c = sum(1 for e in exps if e == exps[-1] + 1)
    if c % order.q:
        raise ValueError("profile step is not at a period boundary")
    k = c // order.q
    if abs(d) + 2 > n:
        raise TruncationError(
            abs(d) + 2,
            f"truncation {n} cannot certify d = {d}; rerun with n >= {abs(d) + 2}",
        )

    core = monomial_matrix(order, d, k)
    core_inv = mat_inverse(core)
    if core_inv is None:
        raise AssertionError("monomial core must be invertible")
    w = mat_mul(tuple(tuple(row) for row in m), core_inv)
    g = mat_mul(tuple(tuple(row) for row in g_inv), w)
    h = tuple(tuple(row) for row in h_inv)
    form = MonomialForm(d=d, k=k, g=g, h=h)
    if not form.verify(order, x):
        raise AssertionError("witness identity failed at the working truncation")
    return form


# -- induced automorphisms of the quotient ----------------------------------------


@dataclass(frozen=True)
class InnerAuto:
    u: tuple  # unit matrix of the order


@dataclass(frozen=True)
class CoefficientAuto:
    kind: str  # "identity" or "conjugation"


@dataclass(frozen=True)
class RotationAuto:
    k: int


def induced_map(order: HereditaryOrder, descriptor) -> AlgebraHom:
    """Automorphism of the semi-simple quotient induced by a descriptor.

    Inner units act blockwise by conjugation of their residues; coefficient
    conjugation acts entrywise (on quaternions as conjugation by j, the
    inner automorphism restricting to complex conjugation); the rotation
    acts as the cyclic block shift, twisted by conjugation on the twisted
    model.
    """
    algebra = order.quotient_algebra()
    r = len(order.shape)
    period = order.period

    if isinstance(descriptor, InnerAuto):
        if not order.is_unit(descriptor.u):
            raise ValueError("inner descriptor needs a unit of the order")
        ubar = order.quotient(descriptor.u)
        ubar_inv = algebra.invert(ubar)
        return AlgebraHom.from_callable(
            algebra, algebra, lambda x: algebra.mul(algebra.mul(ubar, x), ubar_inv)
        )

    if isinstance(descriptor, CoefficientAuto):
        if descriptor.kind == "identity":
            return AlgebraHom.identity(algebra)
        if descriptor.kind != "conjugation":
            raise ValueError(f"unknown coefficient automorphism {descriptor.kind!r}")
        if order.tag == "re":
            raise ValueError("the real model has no coefficient conjugation")
        return AlgebraHom.from_callable(
            algebra, algebra, lambda x: _entrywise(algebra, _scalar_twist(order.tag), x)
        )

    if isinstance(descriptor, RotationAuto):
        # The raw exponent matters: every full turn wraps each component
        # once, so rotation by l acts entrywise by the residue twist.
        shifts = descriptor.k * period

        def act(x):
            blocks = [None] * r
            for i in range(r):
                new_i = (i + shifts) % r
                wraps = (i + shifts) // r
                mat = x[i]
                if wraps % 2 and order.tag == "tc":
                    mat = tuple(tuple(s.conj() for s in row) for row in mat)
                blocks[new_i] = mat
            return tuple(blocks)

        return AlgebraHom.from_callable(algebra, algebra, act)

    raise TypeError(f"unknown automorphism descriptor {descriptor!r}")


def _scalar_twist(tag: str):
    if tag in ("cx", "tc"):
        return lambda s: s.conj()
    j_unit = DivisionScalar.unit("qt", 2)
    j_inv = j_unit.inverse()

    def twist(s: DivisionScalar) -> DivisionScalar:
        return j_unit * s * j_inv

    return twist


def _entrywise(algebra: SSAlgebra, fn, x):
    return tuple(tuple(tuple(fn(s) for s in row) for row in mat) for mat in x)
