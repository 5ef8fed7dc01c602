"""Truncated (twisted) power and Laurent series over exact scalars.

A :class:`TLaurent` carries an order tag from ``ORDER_TAGS``, a relative
truncation cap ``n``, an integer ``offset`` and a coefficient window.  A
nonzero element represents

    sum_{m} coeffs[m] * t**(offset + m)    known modulo t**(offset + width)

with ``coeffs[0] != 0``, so ``offset`` is the exact valuation.  Freshly
constructed elements know exactly ``n`` coefficients; sums whose leading
terms cancel keep every honestly-known coefficient and never invent
zeros, so the known width can drop below ``n`` (products propagate the
smaller width).  Equality compares the common known window, which is the
exact notion of identity at the working truncation.  A sum that cancels
on its whole window is identified with the distinguished zero.

For the tag ``tc`` the variable twists complex coefficients past it:
``t * a = conj(a) * t``, so multiplication applies conjugation according
to the absolute exponent of each left-hand term.  For the other three
tags the convolution is untwisted.
"""

from __future__ import annotations

from math import inf

from .scalars import DivisionScalar, ORDER_TAGS, RESIDUE_TAG

DEFAULT_TRUNCATION = 8

#: Sentinel valuation of the zero element.
INFINITE = inf


def _twisted(tag: str, exponent: int, c: DivisionScalar) -> DivisionScalar:
    """Move ``c`` across ``t**exponent``: conjugates iff tc and odd power."""
    if tag == "tc" and exponent % 2:
        return c.conj()
    return c


class TLaurent:
    """Truncated Laurent series over one of the four scalar order models."""

    __slots__ = ("tag", "n", "offset", "coeffs")

    def __init__(self, tag: str, n: int, offset: int, coeffs):
        if tag not in ORDER_TAGS:
            raise ValueError(f"unknown order tag {tag!r}")
        if n < 1:
            raise ValueError("truncation must be a positive integer")
        coeffs = tuple(coeffs)
        rtag = RESIDUE_TAG[tag]
        for c in coeffs:
            if not isinstance(c, DivisionScalar) or c.tag != rtag:
                raise ValueError(f"coefficients must be {rtag!r} scalars")
        if coeffs:
            if len(coeffs) > n:
                raise ValueError(f"at most {n} coefficients allowed")
            if coeffs[0].is_zero():
                raise ValueError("leading coefficient of a nonzero series is zero")
        self.tag = tag
        self.n = n
        self.offset = offset if coeffs else 0
        self.coeffs = coeffs

    @classmethod
    def _make(cls, tag: str, n: int, offset: int, coeffs: tuple) -> "TLaurent":
        """Internal constructor when the invariants hold by construction."""
        obj = object.__new__(cls)
        obj.tag = tag
        obj.n = n
        obj.offset = offset if coeffs else 0
        obj.coeffs = coeffs
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, tag: str, n: int = DEFAULT_TRUNCATION) -> "TLaurent":
        return cls(tag, n, 0, ())

    @classmethod
    def from_terms(cls, tag: str, terms, n: int = DEFAULT_TRUNCATION) -> "TLaurent":
        """Build from ``{exponent: scalar-or-rational}``; far tail is dropped."""
        rtag = RESIDUE_TAG[tag]
        clean = {}
        for e, c in terms.items():
            if not isinstance(c, DivisionScalar):
                c = DivisionScalar.real(rtag, c)
            if not c.is_zero():
                clean[e] = clean.get(e, DivisionScalar.zero(rtag)) + c
        clean = {e: c for e, c in clean.items() if not c.is_zero()}
        if not clean:
            return cls.zero(tag, n)
        lo = min(clean)
        zero = DivisionScalar.zero(rtag)
        coeffs = tuple(clean.get(lo + m, zero) for m in range(n))
        return cls(tag, n, lo, coeffs)

    @classmethod
    def constant(cls, tag: str, value, n: int = DEFAULT_TRUNCATION) -> "TLaurent":
        return cls.from_terms(tag, {0: value}, n)

    @classmethod
    def one(cls, tag: str, n: int = DEFAULT_TRUNCATION) -> "TLaurent":
        return cls.constant(tag, 1, n)

    @classmethod
    def t_power(cls, tag: str, e: int, n: int = DEFAULT_TRUNCATION, scalar=1) -> "TLaurent":
        return cls.from_terms(tag, {e: scalar}, n)

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def width(self) -> int:
        """Number of exactly known coefficients from the valuation on."""
        return len(self.coeffs)

    def val(self):
        """Valuation: exponent of the lowest nonzero term, ``inf`` for zero."""
        return self.offset if self.coeffs else INFINITE

    def coefficient(self, exponent: int) -> DivisionScalar:
        """Coefficient at an absolute exponent inside the known window."""
        rtag = RESIDUE_TAG[self.tag]
        if not self.coeffs or exponent < self.offset:
            return DivisionScalar.zero(rtag)
        m = exponent - self.offset
        if m >= len(self.coeffs):
            return DivisionScalar.zero(rtag)
        return self.coeffs[m]

    def terms(self):
        """Iterate ``(exponent, coefficient)`` over nonzero known terms."""
        for m, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield self.offset + m, c

    def residue(self) -> DivisionScalar:
        """Coefficient at ``t**0``; requires valuation >= 0."""
        if self.coeffs and self.offset < 0:
            raise ValueError("negative valuation has no residue")
        return self.coefficient(0)

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "TLaurent") -> None:
        if self.tag != other.tag:
            raise ValueError(f"tag mismatch: {self.tag!r} vs {other.tag!r}")
        if self.n != other.n:
            raise ValueError(f"truncation mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "TLaurent") -> "TLaurent":
        self._check(other)
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.offset, other.offset)
        hi = min(self.offset + len(self.coeffs), other.offset + len(other.coeffs))
        hi = min(hi, lo + self.n)
        window = [
            self.coefficient(e) + other.coefficient(e) for e in range(lo, hi)
        ]
        shift = 0
        while shift < len(window) and window[shift].is_zero():
            shift += 1
        if shift == len(window):
            return TLaurent.zero(self.tag, self.n)
        return TLaurent._make(self.tag, self.n, lo + shift, tuple(window[shift:]))

    def __neg__(self) -> "TLaurent":
        return TLaurent._make(self.tag, self.n, self.offset, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "TLaurent") -> "TLaurent":
        return self + (-other)

    def __mul__(self, other: "TLaurent") -> "TLaurent":
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return TLaurent.zero(self.tag, self.n)
        tag = self.tag
        rtag = RESIDUE_TAG[tag]
        zero = DivisionScalar.zero(rtag)
        width = min(len(self.coeffs), len(other.coeffs), self.n)
        out = [zero] * width
        for u, a in enumerate(self.coeffs):
            if u >= width:
                break
            if a.is_zero():
                continue
            e = self.offset + u
            for v in range(width - u):
                b = other.coeffs[v]
                if b.is_zero():
                    continue
                out[u + v] = out[u + v] + a * _twisted(tag, e, b)
        return TLaurent._make(tag, self.n, self.offset + other.offset, tuple(out))

    def scale(self, c) -> "TLaurent":
        """Left multiplication by a constant scalar."""
        if not isinstance(c, DivisionScalar):
            c = DivisionScalar.real(RESIDUE_TAG[self.tag], c)
        return TLaurent.constant(self.tag, c, self.n) * self

    def __pow__(self, k: int) -> "TLaurent":
        if k < 0:
            return self.inverse() ** (-k)
        out = TLaurent.one(self.tag, self.n)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "TLaurent":
        """Two-sided inverse of a nonzero element, exact at the known width."""
        if not self.coeffs:
            raise ZeroDivisionError("zero series is not invertible")
        tag, e = self.tag, self.offset
        width = len(self.coeffs)
        lead_inv = self.coeffs[0].inverse()
        out = [_twisted(tag, e, lead_inv)]
        for s in range(1, width):
            acc = DivisionScalar.zero(RESIDUE_TAG[tag])
            for u in range(1, s + 1):
                a = self.coeffs[u]
                if a.is_zero():
                    continue
                acc = acc + a * _twisted(tag, e + u, out[s - u])
            out.append(_twisted(tag, e, lead_inv * (-acc)))
        return TLaurent._make(tag, self.n, -e, tuple(out))

    def conj_coefficients(self) -> "TLaurent":
        """Coefficientwise conjugation (a ring automorphism for cx and tc)."""
        return TLaurent._make(
            self.tag, self.n, self.offset, tuple(c.conj() for c in self.coeffs)
        )

    # -- comparison ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        """Equality on the common known window (both zero counts as equal)."""
        if not isinstance(other, TLaurent):
            return NotImplemented
        if self.tag != other.tag or self.n != other.n:
            return False
        if not self.coeffs or not other.coeffs:
            return not self.coeffs and not other.coeffs
        if self.offset != other.offset:
            return False
        shared = min(len(self.coeffs), len(other.coeffs))
        return self.coeffs[:shared] == other.coeffs[:shared]

    def identical(self, other: "TLaurent") -> bool:
        """Strict structural equality including the known width."""
        return (
            self.tag == other.tag
            and self.n == other.n
            and self.offset == other.offset
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.tag, self.n, self.offset))

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"TLaurent({self.tag!r}, 0)"
        body = " + ".join(f"({c.parts})t^{e}" for e, c in self.terms())
        return f"TLaurent({self.tag!r}, {body})"


def series(tag: str, coeffs, n: int = DEFAULT_TRUNCATION) -> TLaurent:
    """Power series from a coefficient list (index = exponent, from 0)."""
    return TLaurent.from_terms(tag, dict(enumerate(coeffs)), n)


def square_class(f: TLaurent) -> str:
    """Square class of a nonzero real Laurent series in {1, -1, t, -t}.

    The class is read off the parity of the valuation and the sign of the
    leading coefficient; the four values enumerate K*/(K*)^2 for K = R((t)).
    """
    if f.tag != "re":
        raise ValueError("square classes are defined over the real series model")
    if f.is_zero():
        raise ValueError("zero has no square class")
    odd = f.offset % 2 != 0
    negative = f.coeffs[0].real_part() < 0
    if odd:
        return "-t" if negative else "t"
    return "-1" if negative else "1"
