import pytest

from lpakit import (
    AbstractRing,
    FgAbGroup,
    apply_witness,
    bk_matrix,
    canonical_representative,
    classify,
    cokernel,
    compute_invariants,
    ext_group,
    is_purely_infinite_simple,
    is_simple,
    rose,
    simplicity_of,
)
from lpakit.errors import InputError
from lpakit.invariants import NOT_SIMPLE, PURELY_INFINITE_SIMPLE, SIMPLE_MATRIX

from conftest import corpus, make_E34, make_K2, make_line3, make_zmod22


def test_compute_invariants_examples():
    inv = compute_invariants(rose(2))
    assert inv.k0.group.is_trivial()
    assert inv.k0.point == ()
    assert inv.kernel == ()
    assert inv.k1_free_rank == 0
    assert inv.k1_twist.is_trivial()
    assert inv.simplicity.kind == PURELY_INFINITE_SIMPLE

    inv = compute_invariants(rose(4))
    assert inv.k0.group == FgAbGroup.cyclic(3)
    assert inv.k0.point == (1,)
    assert inv.kernel == ()

    inv = compute_invariants(make_K2())
    assert inv.k0.group == FgAbGroup.free(1)
    assert inv.k0.point == (0,)
    assert len(inv.kernel) == 1
    assert inv.kernel[0] in ((1, -1), (-1, 1))


def test_kernel_vectors_satisfy_equation():
    for g in corpus().values():
        inv = compute_invariants(g)
        b = bk_matrix(g)
        for x in inv.kernel:
            assert not any(b.mulvec(x))
        assert inv.k1_free_rank == len(inv.kernel)


def test_unit_class_is_projection_of_ones():
    for g in corpus().values():
        ck = cokernel(bk_matrix(g))
        assert compute_invariants(g).k0.point == ck.project(tuple(1 for _ in g.vertices))


def test_simplicity_trichotomy():
    assert simplicity_of(rose(1)).kind == NOT_SIMPLE
    assert simplicity_of(rose(2)).kind == PURELY_INFINITE_SIMPLE
    line3 = make_line3()
    s = simplicity_of(line3)
    assert s.kind == SIMPLE_MATRIX and s.n == 3


def test_classify_examples():
    r2 = rose(2)
    v = classify(r2, r2)
    assert v.kind == "UnitalHomotopyEquivalent"

    v = classify(rose(3), rose(5))
    assert v.kind == "NotEquivalent"
    assert v.detail["certificate"]["reason"] == "group_mismatch"

    v = classify(rose(4), make_E34())
    assert v.kind == "UnitalHomotopyEquivalent"
    witness = v.detail["witness"]
    group = compute_invariants(rose(4)).k0.group
    assert apply_witness(group, witness, (1,)) == (2,)

    v = classify(make_line3(), make_line3())
    assert v.kind == "MatrixCase"
    assert v.detail == {"n": 3, "m": 3, "equivalent": True}


def test_classify_not_applicable():
    v = classify(rose(1), rose(2))
    assert v.kind == "NotApplicable"
    assert "left" in v.detail["reason"]


def test_classify_mixed_types():
    v = classify(make_line3(), rose(2))
    assert v.kind == "NotEquivalent"
    assert v.detail["certificate"]["reason"] == "simplicity_type_mismatch"


def test_classify_reflexive():
    for g in corpus().values():
        v = classify(g, g)
        if not is_simple(g):
            assert v.kind == "NotApplicable"
        elif is_purely_infinite_simple(g):
            assert v.kind == "UnitalHomotopyEquivalent"
        else:
            assert v.kind == "MatrixCase" and v.detail["n"] == v.detail["m"]


def test_classify_symmetric():
    pairs = [
        (rose(4), make_E34()),
        (rose(3), rose(5)),
        (rose(2), rose(2)),
        (make_K2(), make_K2()),
    ]
    for a, b in pairs:
        va, vb = classify(a, b), classify(b, a)
        assert va.kind == vb.kind
        if va.kind == "UnitalHomotopyEquivalent":
            ga = compute_invariants(a).k0
            gb = compute_invariants(b).k0
            assert apply_witness(ga.group, va.detail["witness"], ga.point) == gb.point
            assert apply_witness(gb.group, vb.detail["witness"], gb.point) == ga.point


def test_ext_examples():
    rep = ext_group(rose(3))
    assert rep.exact and rep.group == FgAbGroup.cyclic(2)

    rep = ext_group(rose(3), rose(3))
    assert rep.exact and rep.group == FgAbGroup.cyclic(2)
    assert rep.sub == FgAbGroup.cyclic(2)

    rep = ext_group(make_K2())
    assert rep.sub.is_trivial()
    assert rep.quotient == FgAbGroup.free(1)
    assert rep.exact and rep.group == FgAbGroup.free(1)


def test_ext_abstract_ring():
    ring = AbstractRing(k0=FgAbGroup.cyclic(4), kminus1=FgAbGroup.trivial())
    rep = ext_group(rose(3), ring)
    assert rep.sub == FgAbGroup.cyclic(2)
    assert rep.exact and rep.group == FgAbGroup.cyclic(2)
    # nonzero K_{-1} of the target feeds the quotient term
    ring2 = AbstractRing(k0=FgAbGroup.trivial(), kminus1=FgAbGroup.free(1))
    rep2 = ext_group(make_K2(), ring2)
    assert rep2.sub.is_trivial()
    assert rep2.quotient.is_trivial() is False


def test_ext_preconditions():
    with pytest.raises(InputError, match="is_simple"):
        ext_group(rose(1))
    with pytest.raises(InputError, match="is_purely_infinite_simple"):
        ext_group(rose(3), make_line3())


def test_ext_transpose_invariance():
    for g in corpus().values():
        if not is_simple(g):
            continue
        rep = ext_group(g)
        k0 = compute_invariants(g).k0.group
        assert rep.group.torsion == k0.torsion


def test_canonical_representative():
    got = canonical_representative(rose(4))
    assert len(got.vertices) == 1 and len(got.edges) == 4

    got = canonical_representative(make_E34())
    assert len(got.vertices) == 1 and len(got.edges) == 4

    got = canonical_representative(rose(2))
    assert len(got.vertices) == 1 and len(got.edges) == 2

    with pytest.raises(InputError, match="finite"):
        canonical_representative(make_K2())
    with pytest.raises(InputError, match="is_simple"):
        canonical_representative(rose(1))


def test_canonical_multi_factor():
    z22 = make_zmod22()
    assert compute_invariants(z22).k0.group == FgAbGroup(0, (2, 2))
    got = canonical_representative(z22)
    assert len(got.vertices) == 2
    assert compute_invariants(got).k0.group == FgAbGroup(0, (2, 2))


def test_canonical_fixed_point():
    for g in (rose(2), rose(4), make_E34()):
        rep = canonical_representative(g)
        again = canonical_representative(rep)
        assert len(again.vertices) == len(rep.vertices)
        assert sorted(len(rep.out_edges(v)) for v in rep.vertices) == sorted(
            len(again.out_edges(v)) for v in again.vertices
        )
