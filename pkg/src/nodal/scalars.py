"""Exact arithmetic in the three finite-dimensional real division algebras.

Scalars are elements of R, C or H ("re", "co", "qt") with rational
coordinates in the standard basis (1), (1, i) or (1, i, j, k).  All
operations are exact; nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction

#: Tags of the real division algebras (residue skew fields).
DIVISION_TAGS = ("re", "co", "qt")

#: Tags of the four maximal scalar local orders: real, complex, twisted
#: complex and quaternion power series.
ORDER_TAGS = ("re", "cx", "tc", "qt")

#: Residue division algebra of each maximal order ("cx" and "tc" both
#: reduce to the complex numbers).
RESIDUE_TAG = {"re": "re", "cx": "co", "tc": "co", "qt": "qt"}

#: Real dimension of each division algebra.
DIMENSION = {"re": 1, "co": 2, "qt": 4}

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class DivisionScalar:
    """An element of R, C or H with exact rational coordinates."""

    __slots__ = ("tag", "parts")

    def __init__(self, tag: str, parts):
        if tag not in DIVISION_TAGS:
            raise ValueError(f"unknown division algebra tag {tag!r}")
        parts = tuple(_as_fraction(p) for p in parts)
        if len(parts) != DIMENSION[tag]:
            raise ValueError(
                f"tag {tag!r} needs {DIMENSION[tag]} coordinates, got {len(parts)}"
            )
        self.tag = tag
        self.parts = parts

    @classmethod
    def _make(cls, tag: str, parts: tuple) -> "DivisionScalar":
        """Internal constructor for already-validated rational parts."""
        obj = object.__new__(cls)
        obj.tag = tag
        obj.parts = parts
        return obj

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, tag: str) -> "DivisionScalar":
        return cls(tag, (0,) * DIMENSION[tag])

    @classmethod
    def one(cls, tag: str) -> "DivisionScalar":
        return cls(tag, (1,) + (0,) * (DIMENSION[tag] - 1))

    @classmethod
    def real(cls, tag: str, value) -> "DivisionScalar":
        """The scalar ``value * 1`` inside the algebra tagged ``tag``."""
        return cls(tag, (_as_fraction(value),) + (0,) * (DIMENSION[tag] - 1))

    @classmethod
    def unit(cls, tag: str, index: int) -> "DivisionScalar":
        """Basis element number ``index`` (0 -> 1, 1 -> i, 2 -> j, 3 -> k)."""
        parts = [0] * DIMENSION[tag]
        parts[index] = 1
        return cls(tag, parts)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return all(p == 0 for p in self.parts)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- ring structure ---------------------------------------------------

    def _check(self, other: "DivisionScalar") -> None:
        if self.tag != other.tag:
            raise ValueError(f"tag mismatch: {self.tag!r} vs {other.tag!r}")

    def __add__(self, other: "DivisionScalar") -> "DivisionScalar":
        self._check(other)
        return DivisionScalar._make(
            self.tag, tuple(a + b for a, b in zip(self.parts, other.parts))
        )

    def __sub__(self, other: "DivisionScalar") -> "DivisionScalar":
        self._check(other)
        return DivisionScalar._make(
            self.tag, tuple(a - b for a, b in zip(self.parts, other.parts))
        )

    def __neg__(self) -> "DivisionScalar":
        return DivisionScalar._make(self.tag, tuple(-a for a in self.parts))

    def scale(self, c) -> "DivisionScalar":
        c = _as_fraction(c)
        return DivisionScalar._make(self.tag, tuple(c * a for a in self.parts))

    def __mul__(self, other: "DivisionScalar") -> "DivisionScalar":
        self._check(other)
        t = self.tag
        if t == "re":
            return DivisionScalar._make(t, (self.parts[0] * other.parts[0],))
        if t == "co":
            a, b = self.parts
            c, d = other.parts
            return DivisionScalar._make(t, (a * c - b * d, a * d + b * c))
        a, b, c, d = self.parts
        e, f, g, h = other.parts
        return DivisionScalar._make(
            t,
            (
                a * e - b * f - c * g - d * h,
                a * f + b * e + c * h - d * g,
                a * g - b * h + c * e + d * f,
                a * h + b * g - c * f + d * e,
            ),
        )

    def conj(self) -> "DivisionScalar":
        """Standard conjugation: negates all imaginary coordinates."""
        return DivisionScalar._make(
            self.tag, (self.parts[0],) + tuple(-a for a in self.parts[1:])
        )

    def norm(self) -> Fraction:
        """``x * conj(x)`` as a rational; zero iff ``x`` is zero."""
        return sum(a * a for a in self.parts)

    def inverse(self) -> "DivisionScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division scalar is zero")
        return DivisionScalar._make(self.tag, tuple(a / n for a in self.conj().parts))

    def real_part(self) -> Fraction:
        return self.parts[0]

    # -- hashing / comparison ----------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DivisionScalar)
            and self.tag == other.tag
            and self.parts == other.parts
        )

    def __hash__(self) -> int:
        return hash((self.tag, self.parts))

    def __repr__(self) -> str:
        body = ", ".join(str(p) for p in self.parts)
        return f"DivisionScalar({self.tag!r}, ({body}))"


def embed_scalar(x: DivisionScalar, target_tag: str) -> DivisionScalar:
    """Inclusion along R < C < H; errors when the target is smaller."""
    if DIMENSION[target_tag] < DIMENSION[x.tag]:
        raise ValueError(f"cannot embed {x.tag!r} into {target_tag!r}")
    parts = x.parts + (_ZERO,) * (DIMENSION[target_tag] - DIMENSION[x.tag])
    return DivisionScalar(target_tag, parts)


def scalar_basis(tag: str) -> tuple[DivisionScalar, ...]:
    """The standard real basis of the algebra tagged ``tag``."""
    return tuple(DivisionScalar.unit(tag, m) for m in range(DIMENSION[tag]))
