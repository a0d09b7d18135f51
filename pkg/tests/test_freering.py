import pytest

from conftest import random_word

from gdslab.freering import (
    ExprSyntaxError,
    RingElement,
    WordSyntaxError,
    Word,
    commutator,
    conjugate,
    deviation,
    embed,
    eval_ideal,
    gen_word,
    get_context,
    invert_word,
    left_partial,
    membership,
    parse_ideal_expr,
    parse_word,
    right_partial,
    t_polynomial,
    validate_divisors,
    _atom_lattice,
    _span_closure,
    gen_power,
)
from gdslab.intlinalg import Lattice


def mono(ctx, *letters):
    return RingElement.monomial(ctx, tuple(letters))


def test_context_validation():
    ctx = get_context(2, 3)
    assert ctx.basis_size == 7
    assert ctx.monomials[:4] == ((), (1,), (2,), (1, 1))
    with pytest.raises(ValueError):
        get_context(7, 3)
    with pytest.raises(ValueError):
        get_context(2, 5)
    assert get_context(3, 4).basis_size == 1 + 3 + 9 + 27


def test_deviation_examples():
    ctx3 = get_context(2, 3)
    assert deviation(ctx3, parse_word("x1")) == mono(ctx3, 1)
    c1 = get_context(1, 4)
    expected = (
        mono(c1, 1).scaled(-1) + mono(c1, 1, 1) + mono(c1, 1, 1, 1).scaled(-1)
    )
    assert deviation(c1, parse_word("x1^-1")) == expected
    assert deviation(ctx3, parse_word("[x2,x1]")) == mono(ctx3, 2, 1) - mono(ctx3, 1, 2)


def test_multiply_examples():
    ctx = get_context(2, 4)
    assert mono(ctx, 1) * mono(ctx, 2) == mono(ctx, 1, 2)
    y12 = mono(ctx, 1, 2)
    assert (y12 * y12).is_zero
    c1 = get_context(1, 4)
    one = RingElement.one(c1)
    x = embed(c1, parse_word("x1"))
    xinv = embed(c1, parse_word("x1^-1"))
    assert x * xinv == one
    assert x * (xinv - one) == mono(c1, 1).scaled(-1)


def test_inverse_law(rng):
    for _ in range(200):
        rank = rng.randint(1, 3)
        ctx = get_context(rank, 4)
        w = random_word(rng, rank)
        assert embed(ctx, w) * embed(ctx, invert_word(w)) == RingElement.one(ctx)


def test_deviation_multiplicativity(rng):
    for _ in range(200):
        rank = rng.randint(1, 3)
        ctx = get_context(rank, 4)
        w1, w2 = random_word(rng, rank), random_word(rng, rank)
        lhs = deviation(ctx, w1 * w2)
        d1, d2 = deviation(ctx, w1), deviation(ctx, w2)
        assert lhs == d1 + d2 + d1 * d2


def test_partial_examples():
    ctx = get_context(2, 4)
    u = mono(ctx, 1, 2)
    assert left_partial(u, 2) == mono(ctx, 1)
    assert right_partial(u, 1) == mono(ctx, 2)
    assert left_partial(u, 1).is_zero
    with pytest.raises(ValueError):
        left_partial(RingElement.one(ctx), 1)


def test_fox_reconstruction(rng):
    for _ in range(300):
        rank = rng.randint(1, 3)
        ctx = get_context(rank, 4)
        u = deviation(ctx, random_word(rng, rank))
        left_sum = RingElement.zero(ctx)
        right_sum = RingElement.zero(ctx)
        for i in range(1, rank + 1):
            yi = mono(ctx, i)
            left_sum = left_sum + left_partial(u, i) * yi
            right_sum = right_sum + yi * right_partial(u, i)
        assert left_sum == u
        assert right_sum == u


def test_t_polynomial():
    c1 = get_context(1, 3)
    assert t_polynomial(c1, 1, 3) == (
        RingElement.one(c1).scaled(3) + mono(c1, 1).scaled(3) + mono(c1, 1, 1)
    )
    assert t_polynomial(c1, 1, 0).is_zero
    assert t_polynomial(c1, 1, 1) == RingElement.one(c1)
    # x^e - 1 factors as t(x, e) * (x - 1)
    c1b = get_context(1, 4)
    for e in (1, 2, 5, 9):
        assert t_polynomial(c1b, 1, e) * mono(c1b, 1) == deviation(
            c1b, gen_word(1, e)
        )


def test_word_parser():
    w = parse_word("[x2,x1]^9")
    assert deviation(get_context(2, 3), w) == deviation(
        get_context(2, 3), commutator(gen_word(2), gen_word(1), 9)
    )
    # parenthesized powers expand structurally
    ctx = get_context(2, 4)
    assert embed(ctx, parse_word("(x1 x2)^2")) == embed(
        ctx, parse_word("x1 x2 x1 x2")
    )
    assert embed(ctx, parse_word("(x1 x2)^-1")) == embed(
        ctx, parse_word("x2^-1 x1^-1")
    )
    with pytest.raises(WordSyntaxError):
        parse_word("x")
    with pytest.raises(WordSyntaxError):
        parse_word("[x1 x2]")
    with pytest.raises(WordSyntaxError):
        parse_word("(x1")
    err = None
    try:
        parse_word("x1^")
    except WordSyntaxError as exc:
        err = exc
    assert err is not None and err.offset == 3


def test_ideal_parser():
    assert parse_ideal_expr("f*r*f").products == (("f", "r", "f"),)
    assert parse_ideal_expr("r*r*f + r*f*r + f*r*r").products == (
        ("r", "r", "f"),
        ("r", "f", "r"),
        ("f", "r", "r"),
    )
    with pytest.raises(ExprSyntaxError) as err:
        parse_ideal_expr("f**r")
    assert err.value.offset == 2
    with pytest.raises(ExprSyntaxError):
        parse_ideal_expr("f +")
    with pytest.raises(ExprSyntaxError):
        parse_ideal_expr("q")
    with pytest.raises(ExprSyntaxError):
        parse_ideal_expr("")


def test_validate_divisors():
    assert validate_divisors((9, 3)) == (9, 3)
    assert validate_divisors((0, 6, 2)) == (0, 6, 2)
    with pytest.raises(ValueError):
        validate_divisors((3, 9))
    with pytest.raises(ValueError):
        validate_divisors((3, 0))
    with pytest.raises(ValueError):
        validate_divisors((-2,))
    with pytest.raises(ValueError):
        validate_divisors(())


def test_eval_ideal_examples():
    c1 = get_context(1, 3)
    assert eval_ideal(c1, (3,), "r").rows == ((0, 3, 3), (0, 0, 9))
    assert eval_ideal(c1, (3,), "f*r").rows == ((0, 0, 3),)
    ctx = get_context(2, 3)
    f = eval_ideal(ctx, (9, 3), "f")
    assert f.rows == tuple(
        tuple(int(i == j) for j in range(7)) for i in range(1, 7)
    )
    full = eval_ideal(ctx, (9, 3), "Z")
    assert full == Lattice.full(7)


def test_ideal_monotonicity():
    ctx = get_context(2, 4)
    e = (4, 2)
    for small, big in [("r*f", "r*f + f*r"), ("s*s", "s*s + f*r*f")]:
        assert eval_ideal(ctx, e, big).contains_lattice(eval_ideal(ctx, e, small))
    for atom in "frsZ":
        assert eval_ideal(ctx, e, f"Z*{atom}").contains_lattice(
            eval_ideal(ctx, e, f"f*{atom}")
        )


def test_closure_stability():
    ctx = get_context(2, 4)
    lat = _atom_lattice(2, 4, (9, 3), "r")
    elems = [RingElement.from_vector(ctx, r) for r in lat.rows]
    extra = []
    for t in elems:
        for j in (1, 2):
            u, uinv = gen_power(ctx, j, 1), gen_power(ctx, j, -1)
            extra.append((u * t * uinv).vector())
            extra.append((uinv * t * u).vector())
    for a in elems:
        for b in elems:
            extra.append((a * b).vector())
    assert lat + Lattice(ctx.basis_size, tuple(extra)) == lat


def test_conjugation_invariance(rng):
    ctx = get_context(2, 4)
    lat = _atom_lattice(2, 4, (9, 3), "r")
    for _ in range(50):
        g = random_word(rng, 2)
        i = rng.choice((1, 2))
        e = (9, 3)[i - 1]
        w = conjugate(gen_word(i, rng.choice((-e, e))), g)
        assert deviation(ctx, w).vector() in lat


def test_r_atom_with_zero_divisors():
    ctx = get_context(2, 4)
    lat = eval_ideal(ctx, (0, 0), "r")
    assert lat.rank == 0
    # S still contains gamma_2(F) even when all powers vanish
    s = eval_ideal(ctx, (0, 0), "s")
    assert deviation(ctx, parse_word("[x2,x1]")).vector() in s


def test_membership_examples():
    ctx3 = get_context(2, 3)
    assert membership(ctx3, (9, 3), parse_word("[x2,x1]^9"), "r*f")
    assert not membership(ctx3, (9, 3), parse_word("[x2,x1]^3"), "r*f")
    assert membership(ctx3, (9, 3), parse_word("x1^9"), "r")
    assert membership(get_context(2, 4), (9, 3), parse_word("x1^9"), "r")


def test_span_closure_certifies(rng):
    # products of random R-members stay in the closed lattice
    ctx = get_context(2, 4)
    lat = _atom_lattice(2, 4, (4, 2), "r")
    words = [gen_word(1, 4), gen_word(1, -4), gen_word(2, 2), gen_word(2, -2)]
    for _ in range(30):
        w = Word(())
        for _ in range(rng.randint(1, 3)):
            w = w * conjugate(rng.choice(words), random_word(rng, 2))
        assert deviation(ctx, w).vector() in lat
