import math

import pytest

from gdslab.intlinalg import (
    AbGroup,
    Lattice,
    NotSublattice,
    binomial,
    column_kernel,
    determinant,
    hermite_normal_form,
    identity_matrix,
    lattice_preimage,
    mat_mul,
    mat_vec,
    quotient_invariants,
    smith_normal_form,
    solve_int,
    transpose,
    xgcd,
)


def random_matrix(rng, nrows, ncols, bound=20):
    return tuple(
        tuple(rng.randint(-bound, bound) for _ in range(ncols)) for _ in range(nrows)
    )


def test_xgcd():
    for a, b in [(12, 18), (-9, 6), (0, 0), (0, -7), (1, -1), (35, 21)]:
        g, x, y = xgcd(a, b)
        assert g == math.gcd(a, b)
        assert a * x + b * y == g


def test_binomial():
    assert binomial(3, 2) == 3
    assert binomial(-1, 3) == -1
    assert binomial(-9, 2) == 45
    assert binomial(0, 0) == 1
    with pytest.raises(ValueError):
        binomial(2, -1)


def test_hnf_examples():
    assert Lattice(2, [(2, 0), (3, 0)]).rows == ((1, 0),)
    assert Lattice(2, identity_matrix(2)).rows == identity_matrix(2)
    assert Lattice(2, [(9, 0), (0, 3), (3, 3)]).rows == ((3, 0), (0, 3))


def test_hnf_idempotent(rng):
    for _ in range(200):
        rows = random_matrix(rng, rng.randint(0, 5), 4, 9)
        h = hermite_normal_form(rows, 4)
        assert hermite_normal_form(h, 4) == h


def test_smith_examples():
    assert smith_normal_form([(2, 0), (0, 3)])[0] == [1, 6]
    assert smith_normal_form([(0, 0), (0, 0)])[0] == [0, 0]
    assert smith_normal_form([(9, 0), (0, 3)])[0] == [3, 9]


def test_smith_soundness(rng):
    for _ in range(1000):
        nrows = rng.randint(1, 6)
        ncols = rng.randint(1, 6)
        m = random_matrix(rng, nrows, ncols)
        diag, left, right = smith_normal_form(m, nrows, ncols)
        product = mat_mul(mat_mul(left, m), right)
        for i in range(nrows):
            for j in range(ncols):
                expected = diag[i] if i == j and i < len(diag) else 0
                assert product[i][j] == expected
        assert determinant(left) in (1, -1)
        assert determinant(right) in (1, -1)
        for a, b in zip(diag, diag[1:]):
            assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
        assert all(d >= 0 for d in diag)


def test_member_examples():
    lat = Lattice(2, [(3, 0), (0, 3)])
    assert lat.member((6, 3))
    assert not lat.member((1, 0))
    assert Lattice(2, [(2, 1)]).member((4, 2))


def test_preimage_examples():
    assert lattice_preimage(((2,),), Lattice(1, [(6,)])).rows == ((3,),)
    lat = Lattice(2, [(5, 1), (0, 7)])
    assert lattice_preimage(identity_matrix(2), lat) == lat
    assert lattice_preimage(
        ((9, 0), (0, 3)), Lattice(2, [(27, 0), (0, 27)])
    ).rows == ((3, 0), (0, 9))


def test_preimage_properties(rng):
    for _ in range(150):
        a, b = rng.randint(1, 4), rng.randint(1, 4)
        phi = random_matrix(rng, b, a, 5)
        lat = Lattice(b, random_matrix(rng, rng.randint(0, b), b, 6))
        pre = lattice_preimage(phi, lat)
        for row in pre.rows:
            assert lat.member(mat_vec(phi, row))
        # Anything outside the preimage must map outside the lattice.
        for _ in range(10):
            v = tuple(rng.randint(-4, 4) for _ in range(a))
            if not pre.member(v):
                assert not lat.member(mat_vec(phi, v))
                break


def test_quotient_examples():
    assert quotient_invariants(
        Lattice.full(2), Lattice(2, [(9, 0), (0, 3)])
    ) == AbGroup((3, 9))
    assert quotient_invariants(Lattice(1, [(9,)]), Lattice(1, [(27,)])) == AbGroup((3,))
    lat = Lattice(2, [(3, 1), (0, 4)])
    assert quotient_invariants(lat, lat).is_trivial


def test_quotient_not_sublattice():
    with pytest.raises(NotSublattice) as err:
        quotient_invariants(Lattice(1, [(4,)]), Lattice(1, [(6,)]))
    assert err.value.witness == (6,)


def test_quotient_order_is_determinant_ratio(rng):
    for _ in range(100):
        n = rng.randint(1, 4)
        while True:
            a = random_matrix(rng, n, n, 5)
            if determinant(a):
                break
        scale = random_matrix(rng, n, n, 3)
        while not determinant(scale):
            scale = random_matrix(rng, n, n, 3)
        b = mat_mul(scale, a)
        num, den = Lattice(n, a), Lattice(n, b)
        group = quotient_invariants(num, den)
        assert group.order() == abs(determinant(scale))


def test_solve_and_kernel(rng):
    a = ((2, 0), (0, 3))
    assert solve_int(a, (4, 9), 2, 2) == (2, 3)
    assert solve_int(a, (1, 0), 2, 2) is None
    for _ in range(100):
        nrows, ncols = rng.randint(1, 4), rng.randint(1, 4)
        m = random_matrix(rng, nrows, ncols, 5)
        for row in column_kernel(m, nrows, ncols):
            assert mat_vec(m, row) == (0,) * nrows


def test_suffix_section():
    lat = Lattice(3, [(1, 2, 0), (0, 4, 1), (0, 0, 5)])
    section = lat.suffix_section(1)
    assert all(r[0] == 0 for r in section.rows)
    # every lattice vector with first coordinate zero is in the section
    assert section.member((0, 4, 1))
    assert not section.member((1, 2, 0))


def test_transpose_empty():
    assert transpose((), 3) == ((), (), ())
    with pytest.raises(ValueError):
        transpose(())


def test_abgroup_canonicalization():
    assert AbGroup((2, 3)).factors == (6,)
    assert AbGroup((4, 6)).factors == (2, 12)
    assert AbGroup((1, 1)).is_trivial
    assert AbGroup((0, 2, 0)).factors == (2, 0, 0)
    assert AbGroup((-3,)).factors == (3,)


def test_abgroup_operations():
    a = AbGroup((9, 3))
    assert a.order() == 27
    assert AbGroup((0,)).order() is None
    assert a.has_p_torsion(3) and not a.has_p_torsion(2)
    assert a.direct_sum(AbGroup((2,))).factors == (3, 18)
    assert a.tensor(AbGroup((3,))).factors == (3, 3)
    assert AbGroup((0,)).tensor(AbGroup((5,))).factors == (5,)
    assert str(AbGroup((3, 9, 0))) == "C3 x C9 x Z"
    assert str(AbGroup()) == "trivial"


def test_abgroup_embedding_criterion():
    assert AbGroup((2, 2)).embeds_by_invariants(AbGroup((4, 2)))
    assert not AbGroup((4,)).embeds_by_invariants(AbGroup((2, 2)))
    assert AbGroup((3,)).embeds_by_invariants(AbGroup((3, 3)))
    assert not AbGroup((3, 3)).embeds_by_invariants(AbGroup((9,)))
    assert AbGroup().embeds_by_invariants(AbGroup((2,)))
