import random
from fractions import Fraction

import pytest

from nodal import (
    AlgebraHom,
    DivisionScalar,
    SSAlgebra,
    are_similar,
    conjugate_hom,
    decompose,
    is_homomorphism,
    is_nodal_embedding,
    multiplicities,
    reassemble,
    regular_embed,
    regular_embedding_of,
    scalar_action_embedding,
)
from nodal.semisimple import component_witness_element

R = SSAlgebra([(1, "re")])
C = SSAlgebra([(1, "co")])
Q = SSAlgebra([(1, "qt")])
CC = SSAlgebra([(1, "co"), (1, "co")])
M2R = SSAlgebra([(2, "re")])


def diag_hom(algebra, twice):
    return AlgebraHom.from_callable(algebra, twice, lambda x: (x[0], x[0]))


def diag_star():
    return AlgebraHom.from_callable(
        C, CC, lambda x: (x[0], tuple(tuple(s.conj() for s in r) for r in x[0]))
    )


def scalars_in(n):
    target = SSAlgebra([(n, "re")])

    def fn(x):
        s = x[0][0][0]
        return (
            tuple(
                tuple(s if a == b else DivisionScalar.zero("re") for b in range(n))
                for a in range(n)
            ),
        )

    return AlgebraHom.from_callable(R, target, fn)


def can_hom(tag="re"):
    source = SSAlgebra([(1, tag), (1, tag)])
    target = SSAlgebra([(2, tag)])
    zero = DivisionScalar.zero(tag)
    return AlgebraHom.from_callable(
        source, target,
        lambda x: (((x[0][0][0], zero), (zero, x[1][0][0])),),
    )


def random_invertible(rng, algebra):
    while True:
        vec = [Fraction(rng.randint(-2, 2)) for _ in range(algebra.dim)]
        cand = algebra.from_vector(vec)
        if algebra.is_invertible(cand):
            return cand


def test_is_homomorphism_examples():
    ident = AlgebraHom.identity(M2R)
    assert is_homomorphism(ident) == (True, [])
    assert is_homomorphism(diag_hom(C, CC))[0]
    zero_map = AlgebraHom(R, R, ((Fraction(0),),))
    ok, problems = is_homomorphism(zero_map)
    assert not ok and any("1" in p for p in problems)


def test_multiplicities_examples():
    # scalars inside 3x3 matrices: q = 3 copies in the column space, t = 9
    prof = multiplicities(scalars_in(3))
    assert prof.q == ((3,),) and prof.t == (9,)
    prof2 = multiplicities(can_hom())
    assert prof2.q == ((1, 1),) and prof2.t == (2, 2)
    prof3 = multiplicities(regular_embed("re", "co"))
    assert prof3.t == (2,)
    # cross-check t against the right-ideal dimension count
    phi = scalars_in(3)
    tgt = phi.target
    e_img = phi.apply(R.factor_unit(0))
    from nodal import linalg
    ideal = [tgt.to_vector(tgt.mul(e_img, b)) for b in tgt.basis()]
    assert linalg.rank(ideal) // R.dim == prof.t[0]


def test_nodal_embedding_examples():
    diag_r = AlgebraHom.from_callable(
        R, SSAlgebra([(1, "re"), (1, "re")]), lambda x: (x[0], x[0])
    )
    assert is_nodal_embedding(diag_r)
    assert not is_nodal_embedding(scalars_in(3))
    assert is_nodal_embedding(regular_embed("co", "qt"))


def test_total_dimension_bookkeeping():
    # for a nodal embedding meeting every factor: sum t_i dim Lambda_i = dim target
    for phi in [diag_hom(C, CC), can_hom(), regular_embed("re", "co"),
                regular_embed("co", "qt"), diag_star()]:
        prof = multiplicities(phi)
        total = sum(
            t * (phi.source.factors[i][0] ** 2) *
            {"re": 1, "co": 2, "qt": 4}[phi.source.factors[i][1]]
            for i, t in enumerate(prof.t)
        )
        assert total == phi.target.dim


def test_regular_embedding_matrices():
    reg1 = regular_embed("re", "co")
    img_i = reg1.apply(C.from_vector([0, 1]))[0]
    assert img_i == (
        (DivisionScalar("re", (0,)), DivisionScalar("re", (-1,))),
        (DivisionScalar("re", (1,)), DivisionScalar("re", (0,))),
    )
    reg2 = regular_embed("co", "qt")
    img_j = reg2.apply(Q.from_vector([0, 0, 1, 0]))[0]
    assert img_j == (
        (DivisionScalar("co", (0, 0)), DivisionScalar("co", (1, 0))),
        (DivisionScalar("co", (-1, 0)), DivisionScalar("co", (0, 0))),
    )
    img_i2 = reg2.apply(Q.from_vector([0, 1, 0, 0]))[0]
    assert img_i2[0][0] == DivisionScalar("co", (0, 1))
    assert img_i2[1][1] == DivisionScalar("co", (0, -1))
    assert img_i2[0][1].is_zero() and img_i2[1][0].is_zero()
    with pytest.raises(ValueError):
        regular_embed("re", "qt")


def test_scalar_action_embedding():
    reg1 = regular_embed("re", "co")
    v = (DivisionScalar.one("re"), DivisionScalar.zero("re"))
    gamma = scalar_action_embedding(reg1, v)
    assert gamma.apply(R.one())[0][0][0] == DivisionScalar.one("co")
    # key identity: delta(gamma(a)) v = v a on basis scalars
    for a_vec in ([1],):
        a = DivisionScalar("re", tuple(map(Fraction, a_vec)))
        img = reg1.apply(gamma.apply(R.from_vector(a_vec)))[0]
        applied = tuple(
            sum((img[r][c] * v[c] for c in range(2)), DivisionScalar.zero("re"))
            for r in range(2)
        )
        assert applied == tuple(x * a for x in v)
    gamma2 = scalar_action_embedding(
        regular_embed("co", "qt"),
        (DivisionScalar.one("co"), DivisionScalar.zero("co")),
    )
    assert gamma2.apply(C.from_vector([0, 1]))[0][0][0] == DivisionScalar.unit("qt", 1)
    # different anchor vectors give similar actions
    v2 = (DivisionScalar.zero("re"), DivisionScalar.one("re"))
    gamma_v2 = scalar_action_embedding(reg1, v2)
    assert are_similar(gamma, gamma_v2) is not None
    with pytest.raises(ValueError):
        scalar_action_embedding(reg1, (DivisionScalar.zero("re"),) * 2)


def test_regular_reconstruction_round_trip():
    # extracting the scalar action and rebuilding the regular embedding
    # recovers the input up to similarity
    rng = random.Random(15)
    for reg, tag in [(regular_embed("re", "co"), "re"),
                     (regular_embed("co", "qt"), "co")]:
        inc = scalar_action_embedding(
            reg, (DivisionScalar.one(tag), DivisionScalar.zero(tag))
        )
        rebuilt = regular_embedding_of(inc)
        assert is_homomorphism(rebuilt)[0]
        assert are_similar(rebuilt, reg) is not None
        for _ in range(3):
            b = random_invertible(rng, reg.target)
            delta = conjugate_hom(b, reg)
            gamma = scalar_action_embedding(
                delta, (DivisionScalar.one(tag), DivisionScalar.zero(tag))
            )
            assert are_similar(delta, regular_embedding_of(gamma)) is not None


def test_similarity_examples():
    reg1 = regular_embed("re", "co")
    assert are_similar(reg1, reg1) == M2R.one()
    rng = random.Random(2)
    b = random_invertible(rng, M2R)
    pert = conjugate_hom(b, reg1)
    w = are_similar(reg1, pert)
    assert w is not None and conjugate_hom(w, reg1) == pert
    assert are_similar(diag_hom(C, CC), diag_star()) is None


def test_similarity_is_equivalence_relation():
    rng = random.Random(8)
    base = regular_embed("co", "qt")
    tgt = base.target
    homs = [base]
    for _ in range(3):
        homs.append(conjugate_hom(random_invertible(rng, tgt), base))
    for f in homs:
        assert are_similar(f, f) is not None
    for f in homs:
        for g in homs:
            w = are_similar(f, g)
            assert w is not None
            w_back = are_similar(g, f)
            assert w_back is not None
            for h in homs:
                w2 = are_similar(g, h)
                composed = tgt.mul(w2, w)
                assert conjugate_hom(composed, f) == h


def _component_kinds(phi):
    return sorted(c.kind for c in decompose(phi))


def test_decompose_examples():
    comps = decompose(diag_star())
    assert [(c.kind, c.tau) for c in comps] == [(2, "conj")]
    rng = random.Random(4)
    source = SSAlgebra([(1, "re"), (1, "re"), (1, "re")])
    target = SSAlgebra([(1, "re"), (2, "re")])
    zero = DivisionScalar.zero("re")
    phi = AlgebraHom.from_callable(
        source, target,
        lambda x: (x[0], ((x[1][0][0], zero), (zero, x[2][0][0]))),
    )
    b = random_invertible(rng, target)
    conj = conjugate_hom(b, phi)
    assert _component_kinds(conj) == [1, 4]
    inc = AlgebraHom.from_callable(
        R, C, lambda x: (((DivisionScalar("co", (x[0][0][0].parts[0], 0)),),),)
    )
    comps3 = decompose(inc)
    assert comps3[0].kind == 3 and comps3[0].inclusion == "re<co"


def test_decompose_rejects_non_nodal():
    with pytest.raises(ValueError):
        decompose(scalars_in(3))


@pytest.mark.parametrize("phi_builder", [
    lambda: diag_star(),
    lambda: diag_hom(C, CC),
    lambda: diag_hom(Q, SSAlgebra([(1, "qt"), (1, "qt")])),
    lambda: can_hom("re"),
    lambda: can_hom("co"),
    lambda: can_hom("qt"),
    lambda: regular_embed("re", "co"),
    lambda: regular_embed("co", "qt"),
    lambda: AlgebraHom.identity(Q),
])
def test_reassembly_round_trip(phi_builder):
    rng = random.Random(6)
    phi = phi_builder()
    for trial in range(2):
        probe = phi if trial == 0 else conjugate_hom(
            random_invertible(rng, phi.target), phi
        )
        comps = decompose(probe)
        rebuilt = reassemble(probe, comps)
        witness = component_witness_element(probe, comps)
        assert conjugate_hom(witness, rebuilt) == probe
        assert are_similar(rebuilt, probe) is not None
