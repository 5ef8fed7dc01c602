import random
from fractions import Fraction

import pytest

from nodal import (
    AlgebraHom,
    AssembledOrder,
    ClassTuple,
    DivisionScalar,
    SSAlgebra,
    assemble,
    build,
    dimension_profile,
    enumerate_tuples,
    is_commutative,
    radical_finite,
    structure_constants,
    transport,
    verify_assembly,
    verify_nodal,
)
from nodal.assembly import BuildResult
from nodal.hereditary import HereditaryOrder

from test_tuples import _random_witness


def t_complex_node():
    """The order {f in C[[t]] : f(0) real}."""
    return ClassTuple([("cx", 1)], set(), {(0, 0): "ex"}, {}, {},
                      {("s", (0, 0)): 1})


def t_nilpotent_pair():
    """Series matrices with equal diagonal residues (x^2 = y^2 = 0 relations)."""
    return ClassTuple([("re", 2)], {((0, 0), (0, 1))}, {}, {}, {},
                      {("g", (0, 0), (0, 1)): 1})


def t_real_node():
    return ClassTuple([("re", 1), ("re", 1)], {((0, 0), (1, 0))}, {}, {}, {},
                      {("g", (0, 0), (1, 0)): 1})


def t_complex_axes():
    return ClassTuple([("cx", 1), ("cx", 1)], {((0, 0), (1, 0))}, {}, {},
                      {((0, 0), (1, 0)): 1}, {("g", (0, 0), (1, 0)): 1})


def test_build_examples():
    built = build(t_complex_node(), 4)
    assert [o.shape for o in built.orders] == [(1,)]
    assert built.lam.factors == ((1, "re"),)
    assert built.hbar.factors == ((1, "co"),)
    built2 = build(t_nilpotent_pair(), 4)
    assert [o.shape for o in built2.orders] == [(1, 1)]
    assert built2.lam.factors == ((1, "re"),)
    dreg = ClassTuple([("re", 1)], {((0, 0), (0, 0))}, {}, {(0, 0): "reg"}, {},
                      {("d", (0, 0)): 1})
    built3 = build(dreg, 4)
    assert built3.lam.factors == ((1, "co"),)
    assert built3.hbar.factors == ((2, "re"),)
    img = built3.embedding.apply(built3.lam.from_vector([0, 1]))
    assert img[0] == (
        (DivisionScalar("re", (0,)), DivisionScalar("re", (-1,))),
        (DivisionScalar("re", (1,)), DivisionScalar("re", (0,))),
    )


@pytest.mark.parametrize("builder,dim_formula", [
    (t_complex_node, lambda n: 2 * n - 1),
    (t_nilpotent_pair, lambda n: 4 * n - 2),
    (t_real_node, lambda n: 2 * n - 1),
    (t_complex_axes, lambda n: 4 * n - 2),
])
def test_dimension_profiles(builder, dim_formula):
    for n in (2, 4, 8):
        prof = dimension_profile(assemble(builder(), n))
        assert prof["dim_a"] == dim_formula(n)
        assert prof["dim_a"] == prof["dim_h"] - prof["dim_hbar"] + prof["dim_lambda"]


def test_hereditary_tuple_assembles_to_full_order():
    hered = ClassTuple([("cx", 1)], set(), {(0, 0): "id"}, {}, {},
                       {("s", (0, 0)): 1})
    for n in (2, 4, 8):
        prof = dimension_profile(assemble(hered, n))
        assert prof["dim_a"] == prof["dim_h"] == 2 * n


def test_weighted_dimensions_follow_block_inflation():
    heavy = ClassTuple([("cx", 1)], set(), {(0, 0): "ex"}, {}, {},
                       {("s", (0, 0)): 2})
    built = build(heavy, 4)
    assert [o.shape for o in built.orders] == [(2,)]
    prof = dimension_profile(assemble(heavy, 4))
    # H = M2(C[[t]]) truncated: 4 entries x 4 x 2 real dims
    assert prof["dim_h"] == 4 * 4 * 2
    assert prof["dim_lambda"] == 4
    assert prof["dim_a"] == prof["dim_h"] - prof["dim_hbar"] + prof["dim_lambda"]
    weighted_mixed = ClassTuple(
        [("re", 2)], {((0, 1), (0, 1))}, {(0, 0): "id"}, {(0, 1): "can"}, {},
        {("s", (0, 0)): 3, ("d+", (0, 1)): 3, ("d-", (0, 1)): 3},
    )
    built3 = build(weighted_mixed, 2)
    assert [o.shape for o in built3.orders] == [(3, 6)]


def test_commutativity_census_behaviour():
    assert is_commutative(assemble(t_complex_node(), 4))[0]
    assert is_commutative(assemble(t_real_node(), 4))[0]
    assert is_commutative(assemble(t_complex_axes(), 4))[0]
    flag, witness = is_commutative(assemble(t_nilpotent_pair(), 4))
    assert not flag and witness is not None
    mixed = ClassTuple([("cx", 1), ("tc", 1)], {((0, 0), (1, 0))}, {}, {},
                       {((0, 0), (1, 0)): 1}, {("g", (0, 0), (1, 0)): 1})
    assert not is_commutative(assemble(mixed, 4))[0]
    doubled = ClassTuple([("re", 1)], {((0, 0), (0, 0))}, {}, {(0, 0): "can"},
                         {}, {("d+", (0, 0)): 1, ("d-", (0, 0)): 1})
    assert not is_commutative(assemble(doubled, 2))[0]


def test_radical_finite_examples():
    # complex numbers over the reals: semi-simple
    struct = {(0, 0): {0: Fraction(1)}, (0, 1): {1: Fraction(1)},
              (1, 0): {1: Fraction(1)}, (1, 1): {0: Fraction(-1)}}
    assert radical_finite(["1", "i"], struct) == []
    # truncated complex node at n = 2: basis 1, t, it; radical = span(t, it)
    names, struct2 = structure_constants(assemble(t_complex_node(), 2))
    rad = radical_finite(names, struct2)
    assert len(rad) == 2
    assert all(v[0] == 0 for v in rad)
    # upper triangular 2x2 matrices: strict upper triangle
    one = Fraction(1)
    struct3 = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 2): {1: one},
               (2, 2): {2: one}}
    assert len(radical_finite(["e11", "e12", "e22"], struct3)) == 1


def test_verify_nodal_passes_on_examples():
    for builder in (t_complex_node, t_nilpotent_pair, t_real_node, t_complex_axes):
        report = verify_nodal(builder(), 4)
        assert report.all_pass, report.as_dict()
    with pytest.raises(ValueError):
        verify_nodal(t_complex_node(), 1)


def test_verify_rejects_non_injective_embedding():
    # Lambda = R x R mapped non-injectively onto the diagonal residues
    orders = (HereditaryOrder("re", (1, 1), 4),)
    hbar = SSAlgebra([(1, "re"), (1, "re")])
    lam = SSAlgebra([(1, "re"), (1, "re")])
    emb = AlgebraHom.from_callable(lam, hbar, lambda x: (x[0], x[0]))
    built = BuildResult(orders, lam, hbar, emb, slots=(), elements=((0, 0), (0, 1)))
    report = verify_assembly(AssembledOrder(built, 4))
    failed = {name for name, ok, _ in report.checks if not ok}
    assert "embedding-injective" in failed


def test_verify_rejects_scalars_in_m3():
    orders = (HereditaryOrder("re", (3,), 4),)
    hbar = SSAlgebra([(3, "re")])
    lam = SSAlgebra([(1, "re")])

    def scalars(x):
        s = x[0][0][0]
        zero = DivisionScalar.zero("re")
        return (
            tuple(
                tuple(s if a == b else zero for b in range(3)) for a in range(3)
            ),
        )

    emb = AlgebraHom.from_callable(lam, hbar, scalars)
    built = BuildResult(orders, lam, hbar, emb, slots=(), elements=((0, 0),))
    report = verify_assembly(AssembledOrder(built, 4))
    failed = {name for name, ok, _ in report.checks if not ok}
    assert "nodal-multiplicities" in failed


def test_equivalent_tuples_share_assembly_invariants():
    rng = random.Random(14)
    reps = [t for _, t in enumerate_tuples(2)]
    rng.shuffle(reps)
    for t in reps[:12]:
        u = transport(t, _random_witness(rng, t))
        for n in (2, 4):
            pa = dimension_profile(assemble(t, n))
            pb = dimension_profile(assemble(u, n))
            assert pa == pb
        assert is_commutative(assemble(t, 4))[0] == is_commutative(assemble(u, 4))[0]
