from itertools import combinations, product

import pytest

from lpakit import (
    FgAbGroup,
    IntMatrix,
    PointedAbGroup,
    apply_witness,
    check_witness,
    cokernel,
    det,
    ext1,
    hom_group,
    invariant_factors,
    kernel_basis,
    pointed_isomorphic,
    smith,
)
from lpakit.errors import InputError
from lpakit.zlinalg import IsoNo, IsoYes

from conftest import seeded


def assert_smith_valid(m):
    dec = smith(m)
    assert dec.U.mul(m).mul(dec.V).data == dec.D.data
    assert abs(det(dec.U)) == 1
    assert abs(det(dec.V)) == 1
    diag = dec.diagonal
    assert all(d >= 0 for d in diag)
    for i in range(len(diag) - 1):
        if diag[i]:
            assert diag[i + 1] % diag[i] == 0
        else:
            assert diag[i + 1] == 0
    for i in range(dec.D.rows):
        for j in range(dec.D.cols):
            if i != j:
                assert dec.D.data[i][j] == 0
    return dec


def minor_gcd(m, k):
    """gcd of all k x k minors, brute force; 0 when every minor vanishes."""
    import math

    g = 0
    for rows in combinations(range(m.rows), k):
        for cols in combinations(range(m.cols), k):
            sub = IntMatrix.from_rows([[m.data[i][j] for j in cols] for i in rows])
            g = math.gcd(g, det(sub))
            if g == 1:
                return 1
    return g


def test_smith_examples():
    assert smith(IntMatrix.from_rows([[2, 0], [0, 3]])).diagonal == (1, 6)
    assert smith(IntMatrix.from_rows([[0, 0], [0, 0]])).diagonal == (0, 0)
    assert smith(IntMatrix.from_rows([[-1, -1], [-1, -1]])).diagonal == (1, 0)


def test_smith_deterministic():
    m = IntMatrix.from_rows([[6, 4, 2], [4, 8, 0], [2, 0, 10]])
    first = smith(m)
    second = smith(m)
    assert first.U.data == second.U.data
    assert first.D.data == second.D.data
    assert first.V.data == second.V.data


def test_smith_random_small():
    rng = seeded("smith-small")
    for _ in range(150):
        r = rng.randint(1, 6)
        c = rng.randint(1, 6)
        m = IntMatrix.from_rows(
            [[rng.randint(-50, 50) for _ in range(c)] for _ in range(r)]
        )
        dec = assert_smith_valid(m)
        prefix = 1
        for k in range(1, min(r, c) + 1):
            d = dec.diagonal[k - 1]
            prefix *= d
            assert prefix == minor_gcd(m, k)


def test_kernel_examples():
    got = kernel_basis(IntMatrix.from_rows([[-1, -1], [-1, -1]]))
    assert len(got) == 1
    assert got[0] in ((1, -1), (-1, 1))
    assert kernel_basis(IntMatrix.identity(2)) == []
    assert kernel_basis(IntMatrix.from_rows([[0]])) in ([(1,)], [(-1,)])


def test_kernel_property():
    rng = seeded("kernel")
    for _ in range(60):
        r = rng.randint(1, 5)
        c = rng.randint(1, 5)
        m = IntMatrix.from_rows(
            [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        )
        basis = kernel_basis(m)
        for vec in basis:
            assert not any(m.mulvec(vec))
        rank = sum(1 for d in smith(m).diagonal if d)
        assert len(basis) == c - rank


def test_cokernel_examples():
    assert cokernel(IntMatrix.from_rows([[-1]])).group.is_trivial()
    ck = cokernel(IntMatrix.from_rows([[-3]]))
    assert ck.group == FgAbGroup.cyclic(3)
    assert ck.project((1,)) == (1,)
    ck2 = cokernel(IntMatrix.from_rows([[-1, -1], [-1, -1]]))
    assert ck2.group == FgAbGroup.free(1)
    assert ck2.project((1, 1)) == (0,)


def test_cokernel_kills_columns():
    rng = seeded("coker")
    for _ in range(40):
        r = rng.randint(1, 5)
        c = rng.randint(1, 5)
        m = IntMatrix.from_rows(
            [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        )
        ck = cokernel(m)
        zero = ck.group.zero()
        for j in range(c):
            col = tuple(m.data[i][j] for i in range(r))
            assert ck.project(col) == zero


def test_invariant_factors():
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([2, 4]) == (2, 4)
    assert invariant_factors([6, 4]) == (2, 12)
    assert invariant_factors([1, 1]) == ()
    assert invariant_factors([2, 2, 3]) == (2, 6)


def test_group_validation():
    with pytest.raises(InputError):
        FgAbGroup(0, (3, 2))
    with pytest.raises(InputError):
        FgAbGroup(0, (1,))
    with pytest.raises(InputError):
        FgAbGroup(-1, ())


def test_ext1():
    Z = FgAbGroup.free(1)
    assert ext1(FgAbGroup.cyclic(2), FgAbGroup.cyclic(2)) == FgAbGroup.cyclic(2)
    assert ext1(Z, FgAbGroup(1, (4, 8))).is_trivial()
    assert ext1(FgAbGroup.cyclic(6), FgAbGroup.cyclic(4)) == FgAbGroup.cyclic(2)


def test_hom_group():
    Z = FgAbGroup.free(1)
    assert hom_group(Z, FgAbGroup.cyclic(3)) == FgAbGroup.cyclic(3)
    assert hom_group(FgAbGroup.cyclic(2), FgAbGroup.cyclic(3)).is_trivial()
    assert hom_group(FgAbGroup.free(2), Z) == FgAbGroup.free(2)


def test_pointed_examples():
    Z4 = FgAbGroup.cyclic(4)
    res = pointed_isomorphic(PointedAbGroup(Z4, (1,)), PointedAbGroup(Z4, (3,)))
    assert isinstance(res, IsoYes)
    assert apply_witness(Z4, res.witness, (1,)) == (3,)

    res = pointed_isomorphic(PointedAbGroup(Z4, (2,)), PointedAbGroup(Z4, (1,)))
    assert isinstance(res, IsoNo)
    assert res.reason == "order_mismatch"

    Z = FgAbGroup.free(1)
    res = pointed_isomorphic(PointedAbGroup(Z, (1,)), PointedAbGroup(Z, (1,)))
    assert isinstance(res, IsoYes)
    assert res.witness == ((1,),)


def test_pointed_group_mismatch():
    a = PointedAbGroup(FgAbGroup.cyclic(2), (1,))
    b = PointedAbGroup(FgAbGroup.cyclic(4), (1,))
    res = pointed_isomorphic(a, b)
    assert isinstance(res, IsoNo)
    assert res.reason == "group_mismatch"


def test_pointed_symmetry_and_reflexivity():
    cases = [
        (FgAbGroup.cyclic(8), (2,), (6,)),
        (FgAbGroup(0, (2, 4)), (1, 0), (1, 2)),
        (FgAbGroup(0, (2, 4)), (1, 0), (0, 2)),
        (FgAbGroup(1, (2,)), (1, 1), (1, -1)),
        (FgAbGroup.free(2), (1, 0), (0, 1)),
    ]
    for group, p, q in cases:
        pp, qq = PointedAbGroup(group, p), PointedAbGroup(group, q)
        assert isinstance(pointed_isomorphic(pp, pp), IsoYes)
        fwd = pointed_isomorphic(pp, qq)
        bwd = pointed_isomorphic(qq, pp)
        assert type(fwd) is type(bwd)
        if isinstance(fwd, IsoYes):
            assert check_witness(group, fwd.witness, pp.point, qq.point)
            assert check_witness(group, bwd.witness, qq.point, pp.point)


def test_pointed_agrees_with_brute_force_small():
    from conftest import brute_pointed_orbit
    for torsion in [(4,), (6,), (2, 4), (3, 3), (2, 2, 2)]:
        group = FgAbGroup(0, torsion)
        elements = list(product(*(range(d) for d in torsion)))
        for p in elements[: max(4, len(elements) // 3)]:
            orbit = brute_pointed_orbit(torsion, p)
            for q in elements:
                res = pointed_isomorphic(
                    PointedAbGroup(group, p), PointedAbGroup(group, q)
                )
                assert (q in orbit) == isinstance(res, IsoYes), (torsion, p, q)
