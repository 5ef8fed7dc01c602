"""Seeded random generators shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from nodal import DivisionScalar, HereditaryOrder, TLaurent
from nodal.scalars import DIMENSION, RESIDUE_TAG


def random_scalar(rng, tag: str, nonzero: bool = False) -> DivisionScalar:
    while True:
        parts = [Fraction(rng.randint(-3, 3)) for _ in range(DIMENSION[tag])]
        s = DivisionScalar(tag, parts)
        if not nonzero or not s.is_zero():
            return s


def random_laurent(rng, tag: str, n: int, lo: int = -3, hi: int = 3,
                   nonzero: bool = True) -> TLaurent:
    rtag = RESIDUE_TAG[tag]
    while True:
        offset = rng.randint(lo, hi)
        terms = {}
        for m in range(n):
            if rng.random() < 0.6:
                terms[offset + m] = random_scalar(rng, rtag)
        f = TLaurent.from_terms(tag, terms, n)
        if not nonzero or not f.is_zero():
            return f


def random_series(rng, tag: str, n: int, min_val: int = 0) -> TLaurent:
    """Random element of the maximal order with valuation >= min_val."""
    rtag = RESIDUE_TAG[tag]
    terms = {}
    for m in range(min_val, n):
        if rng.random() < 0.5:
            terms[m] = random_scalar(rng, rtag)
    return TLaurent.from_terms(tag, terms, n)


def random_member(rng, order: HereditaryOrder):
    """Random member of the hereditary order."""
    return tuple(
        tuple(
            random_series(rng, order.tag, order.n, order.min_valuation(a, b))
            for b in range(order.p)
        )
        for a in range(order.p)
    )


def random_radical_member(rng, order: HereditaryOrder):
    return tuple(
        tuple(
            random_series(
                rng, order.tag, order.n,
                max(1, order.min_valuation(a, b))
                if order.block_of(a) == order.block_of(b)
                else order.min_valuation(a, b),
            )
            for b in range(order.p)
        )
        for a in range(order.p)
    )


def random_unit(rng, order: HereditaryOrder):
    """Random unit of the order (invertible residue diagonal blocks)."""
    while True:
        m = random_member(rng, order)
        if order.is_unit(m):
            return m
