"""Truncated free group ring Z[F]/f^N and ideal evaluation.

F is free on x_1..x_m (m <= 6) and f is its augmentation ideal.  Setting
y_i = x_i - 1, the quotient Z[F]/f^N is a free Z-module on the
noncommutative monomials in the y_i of degree < N, and every group word
embeds as a unit 1 + (higher terms).  Supported truncation degrees are
N in {3, 4}, matching the two membership levels the package computes.

Ideal expressions are built from four atoms:

    f   the augmentation ideal, Z-spanned by {w - 1 : w in F}
    r   the Z-span of {w - 1 : w in R}, R = normal closure of {x_i^{e_i}}
    s   the same for S = <x_1^{e_1}, ..., x_m^{e_m}, gamma_2(F)>
    Z   the whole ring

combined by ``*`` (Z-span of elementwise products) and ``+`` (sum).
Note that r and s denote spans of subgroup deviations, not two-sided
ideals; two-sided closures are written explicitly, e.g. ``r*r*Z``.

Grammar (whitespace ignored):

    expr    := product ('+' product)*
    product := atom ('*' atom)*
    atom    := 'f' | 'r' | 's' | 'Z'

Group-word grammar (whitespace ignored between tokens):

    word    := factor+
    factor  := atom ('^' signed-int)?
    atom    := 'x' digits | '[' word ',' word ']' | '(' word ')'

The commutator convention is [a, b] = a^-1 b^-1 a b, so the deviation of
[x_j, x_i] has leading term y_j y_i - y_i y_j.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .intlinalg import Lattice, binomial

MAX_RANK = 6
DEGREES = (3, 4)


class RingContext:
    """Rank, truncation degree and the ordered monomial basis."""

    __slots__ = ("rank", "degree", "monomials", "index")

    def __init__(self, rank: int, degree: int):
        if not 1 <= rank <= MAX_RANK:
            raise ValueError(f"rank must be between 1 and {MAX_RANK}")
        if degree not in DEGREES:
            raise ValueError(f"truncation degree must be one of {DEGREES}")
        self.rank = rank
        self.degree = degree
        mons = []
        for d in range(degree):
            mons.extend(itertools.product(range(1, rank + 1), repeat=d))
        self.monomials = tuple(mons)
        self.index = {w: i for i, w in enumerate(self.monomials)}

    @property
    def basis_size(self) -> int:
        return len(self.monomials)

    def __repr__(self) -> str:
        return f"RingContext(rank={self.rank}, degree={self.degree})"


@lru_cache(maxsize=None)
def get_context(rank: int, degree: int) -> RingContext:
    return RingContext(rank, degree)


class RingElement:
    """Truncated noncommutative integer polynomial in the y_i."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: RingContext, coeffs: dict):
        self.ctx = ctx
        self.coeffs = {w: c for w, c in coeffs.items() if c}

    @classmethod
    def zero(cls, ctx: RingContext) -> "RingElement":
        return cls(ctx, {})

    @classmethod
    def one(cls, ctx: RingContext) -> "RingElement":
        return cls(ctx, {(): 1})

    @classmethod
    def monomial(cls, ctx: RingContext, word: tuple, coeff: int = 1) -> "RingElement":
        if len(word) >= ctx.degree:
            return cls.zero(ctx)
        return cls(ctx, {tuple(word): coeff})

    @classmethod
    def from_vector(cls, ctx: RingContext, vec) -> "RingElement":
        return cls(ctx, {ctx.monomials[i]: c for i, c in enumerate(vec) if c})

    def vector(self) -> tuple:
        out = [0] * self.ctx.basis_size
        for w, c in self.coeffs.items():
            out[self.ctx.index[w]] = c
        return tuple(out)

    @property
    def constant_term(self) -> int:
        return self.coeffs.get((), 0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "RingElement"):
        if self.ctx is not other.ctx:
            raise ValueError("ring context mismatch")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return RingElement(self.ctx, out)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) - c
        return RingElement(self.ctx, out)

    def __neg__(self) -> "RingElement":
        return RingElement(self.ctx, {w: -c for w, c in self.coeffs.items()})

    def scaled(self, k: int) -> "RingElement":
        return RingElement(self.ctx, {w: k * c for w, c in self.coeffs.items()})

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        n = self.ctx.degree
        out: dict[tuple, int] = {}
        for w1, c1 in self.coeffs.items():
            for w2, c2 in other.coeffs.items():
                if len(w1) + len(w2) < n:
                    w = w1 + w2
                    out[w] = out.get(w, 0) + c1 * c2
        return RingElement(self.ctx, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.ctx), tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for w in sorted(self.coeffs, key=lambda w: (len(w), w)):
            c = self.coeffs[w]
            mon = "*".join(f"y{i}" for i in w) if w else "1"
            parts.append(f"{c}*{mon}" if w else str(c))
        return " + ".join(parts)


def ring_inverse(u: RingElement) -> RingElement:
    """Inverse of a unit u = 1 + z with z nilpotent, by geometric series."""
    if u.constant_term != 1:
        raise ValueError("can only invert units with constant term 1")
    z = u - RingElement.one(u.ctx)
    acc = RingElement.one(u.ctx)
    power = RingElement.one(u.ctx)
    sign = 1
    for _ in range(1, u.ctx.degree):
        power = power * z
        sign = -sign
        if power.is_zero:
            break
        acc = acc + power.scaled(sign)
    return acc


def ring_power(u: RingElement, e: int) -> RingElement:
    if e < 0:
        return ring_power(ring_inverse(u), -e)
    acc = RingElement.one(u.ctx)
    base = u
    while e:
        if e & 1:
            acc = acc * base
        base = base * base
        e >>= 1
    return acc


def gen_power(ctx: RingContext, i: int, e: int) -> RingElement:
    """(1 + y_i)^e expanded by binomials; exact for negative e as well."""
    if not 1 <= i <= ctx.rank:
        raise ValueError(f"generator index {i} out of range 1..{ctx.rank}")
    coeffs = {}
    for k in range(ctx.degree):
        c = binomial(e, k)
        if c:
            coeffs[(i,) * k] = c
    return RingElement(ctx, coeffs)


# --------------------------------------------------------------------------
# Group words


@dataclass(frozen=True)
class GenPower:
    gen: int
    exp: int = 1


@dataclass(frozen=True)
class Commutator:
    left: "Word"
    right: "Word"
    exp: int = 1


@dataclass(frozen=True)
class Word:
    factors: tuple = ()

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.factors + other.factors)


def gen_word(i: int, e: int = 1) -> Word:
    return Word((GenPower(i, e),))


def commutator(a: Word, b: Word, exp: int = 1) -> Word:
    return Word((Commutator(a, b, exp),))


def invert_word(w: Word) -> Word:
    out = []
    for f in reversed(w.factors):
        if isinstance(f, GenPower):
            out.append(GenPower(f.gen, -f.exp))
        else:
            out.append(Commutator(f.left, f.right, -f.exp))
    return Word(tuple(out))


def conjugate(w: Word, g: Word) -> Word:
    """g^-1 w g."""
    return invert_word(g) * w * g


def embed(ctx: RingContext, w: Word) -> RingElement:
    """Image of the group word in the truncated ring (a unit)."""
    acc = RingElement.one(ctx)
    for f in w.factors:
        if isinstance(f, GenPower):
            acc = acc * gen_power(ctx, f.gen, f.exp)
        else:
            u = embed(ctx, f.left)
            v = embed(ctx, f.right)
            c = ring_inverse(u) * ring_inverse(v) * u * v
            acc = acc * ring_power(c, f.exp)
    return acc


def deviation(ctx: RingContext, w: Word) -> RingElement:
    """trunc(w - 1)."""
    return embed(ctx, w) - RingElement.one(ctx)


def left_partial(u: RingElement, i: int) -> RingElement:
    """Coefficient of y_i in the unique expansion u = sum_i (coeff)*y_i.

    Monomial-wise this strips a trailing letter i; u must lie in the
    augmentation ideal (zero constant term).
    """
    if u.constant_term:
        raise ValueError("nonzero constant term")
    out = {}
    for w, c in u.coeffs.items():
        if w and w[-1] == i:
            out[w[:-1]] = out.get(w[:-1], 0) + c
    return RingElement(u.ctx, out)


def right_partial(u: RingElement, i: int) -> RingElement:
    """Coefficient of y_i in u = sum_i y_i*(coeff); strips a leading letter."""
    if u.constant_term:
        raise ValueError("nonzero constant term")
    out = {}
    for w, c in u.coeffs.items():
        if w and w[0] == i:
            out[w[1:]] = out.get(w[1:], 0) + c
    return RingElement(u.ctx, out)


def t_polynomial(ctx: RingContext, i: int, e: int) -> RingElement:
    """1 + x_i + ... + x_i^(e-1) for e >= 1, and 0 for e = 0.

    In the y_i coordinate this is e + C(e,2) y_i + C(e,3) y_i^2 + ...,
    and it satisfies trunc(x_i^e - 1) = t_polynomial(i, e) * y_i.
    """
    if e < 0:
        raise ValueError("e must be nonnegative")
    if e == 0:
        return RingElement.zero(ctx)
    coeffs = {}
    for k in range(ctx.degree):
        c = binomial(e, k + 1)
        if c:
            coeffs[(i,) * k] = c
    return RingElement(ctx, coeffs)


# --------------------------------------------------------------------------
# Word parser


class WordSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def _parse_int(text: str, i: int) -> tuple[int, int]:
    start = i
    if i < len(text) and text[i] in "+-":
        i += 1
    digits = i
    while i < len(text) and text[i].isdigit():
        i += 1
    if i == digits:
        raise WordSyntaxError("expected integer", start)
    return int(text[start:i]), i


def _parse_word(text: str, i: int, closers: str) -> tuple[Word, int]:
    factors: list = []
    i = _skip_ws(text, i)
    while i < len(text) and text[i] not in closers:
        base, i = _parse_atom(text, i)
        i = _skip_ws(text, i)
        exp = 1
        if i < len(text) and text[i] == "^":
            exp, i = _parse_int(text, i + 1)
            i = _skip_ws(text, i)
        kind, payload = base
        if kind == "gen":
            factors.append(GenPower(payload, exp))
        elif kind == "comm":
            factors.append(Commutator(payload[0], payload[1], exp))
        else:  # parenthesized word with an exponent: expand structurally
            inner = payload if exp >= 0 else invert_word(payload)
            factors.extend(inner.factors * abs(exp))
    if not factors:
        raise WordSyntaxError("empty word", i)
    return Word(tuple(factors)), i


def _parse_atom(text: str, i: int):
    c = text[i]
    if c == "x":
        j = i + 1
        while j < len(text) and text[j].isdigit():
            j += 1
        if j == i + 1:
            raise WordSyntaxError("expected generator index after 'x'", i + 1)
        return ("gen", int(text[i + 1 : j])), j
    if c == "[":
        w1, j = _parse_word(text, i + 1, ",")
        if j >= len(text) or text[j] != ",":
            raise WordSyntaxError("expected ',' in commutator", j)
        w2, j = _parse_word(text, j + 1, "]")
        if j >= len(text) or text[j] != "]":
            raise WordSyntaxError("unbalanced '['", j)
        return ("comm", (w1, w2)), j + 1
    if c == "(":
        w, j = _parse_word(text, i + 1, ")")
        if j >= len(text) or text[j] != ")":
            raise WordSyntaxError("unbalanced '('", j)
        return ("word", w), j + 1
    raise WordSyntaxError(f"unexpected character {c!r}", i)


def parse_word(text: str) -> Word:
    w, i = _parse_word(text, 0, "")
    i = _skip_ws(text, i)
    if i != len(text):
        raise WordSyntaxError("trailing input", i)
    return w


# --------------------------------------------------------------------------
# Ideal expressions

ATOMS = "frsZ"


@dataclass(frozen=True)
class IdealExpr:
    """Sum of products of the atoms f, r, s, Z."""

    products: tuple

    def __str__(self) -> str:
        return " + ".join("*".join(p) for p in self.products)


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


def parse_ideal_expr(text: str) -> IdealExpr:
    i = 0
    products = []
    atoms: list[str] = []
    expect_atom = True
    while True:
        i = _skip_ws(text, i)
        if i >= len(text):
            break
        c = text[i]
        if expect_atom:
            if c not in ATOMS:
                raise ExprSyntaxError(f"expected one of {ATOMS!r}, got {c!r}", i)
            atoms.append(c)
            expect_atom = False
            i += 1
        elif c == "*":
            expect_atom = True
            i += 1
        elif c == "+":
            products.append(tuple(atoms))
            atoms = []
            expect_atom = True
            i += 1
        else:
            raise ExprSyntaxError(f"expected '*' or '+', got {c!r}", i)
    if expect_atom or not atoms:
        raise ExprSyntaxError("unexpected end of input", len(text))
    products.append(tuple(atoms))
    return IdealExpr(tuple(products))


# --------------------------------------------------------------------------
# Divisor tuples and ideal evaluation


def validate_divisors(divisors, rank: int | None = None) -> tuple:
    """Check the divisibility chain e_m | ... | e_1 (zeros first); return a tuple."""
    e = tuple(int(v) for v in divisors)
    if not e:
        raise ValueError("empty divisor tuple")
    if any(v < 0 for v in e):
        raise ValueError("divisors must be nonnegative")
    for i in range(len(e) - 1):
        lo, hi = e[i + 1], e[i]
        ok = (lo == 0 and hi == 0) or (lo != 0 and hi % lo == 0)
        if not ok:
            raise ValueError(
                f"divisor chain violated: {lo} does not divide {hi} "
                f"(positions {i + 2}, {i + 1})"
            )
    if rank is not None and len(e) != rank:
        raise ValueError("divisor tuple length does not match rank")
    return e


_CLOSURE_ROUND_CAP = 64


def _span_closure(ctx: RingContext, seeds) -> Lattice:
    """Smallest lattice containing the seeds and stable under conjugation by
    the generators and under pairwise products of its elements.

    Terminates by the ascending chain condition on subgroups of Z^d; the
    loop exit condition is exactly one further closure round changing
    nothing, which certifies stability.
    """
    lat = Lattice(ctx.basis_size, tuple(s.vector() for s in seeds))
    units = [
        (gen_power(ctx, j, 1), gen_power(ctx, j, -1)) for j in range(1, ctx.rank + 1)
    ]
    for _ in range(_CLOSURE_ROUND_CAP):
        elems = [RingElement.from_vector(ctx, r) for r in lat.rows]
        new = []
        for t in elems:
            for u, uinv in units:
                new.append((u * t * uinv).vector())
                new.append((uinv * t * u).vector())
        for a in elems:
            for b in elems:
                new.append((a * b).vector())
        grown = lat + Lattice(ctx.basis_size, tuple(new))
        if grown == lat:
            return lat
        lat = grown
    raise AssertionError("span closure failed to stabilize")


@lru_cache(maxsize=None)
def _atom_lattice(rank: int, degree: int, divisors: tuple, atom: str) -> Lattice:
    ctx = get_context(rank, degree)
    n = ctx.basis_size
    if atom == "f":
        rows = []
        for i, w in enumerate(ctx.monomials):
            if w:
                row = [0] * n
                row[i] = 1
                rows.append(tuple(row))
        return Lattice(n, tuple(rows))
    if atom == "Z":
        return Lattice.full(n)
    seeds = []
    for i, e in enumerate(divisors, start=1):
        if e > 0:
            seeds.append(deviation(ctx, gen_word(i, e)))
            seeds.append(deviation(ctx, gen_word(i, -e)))
    if atom == "s":
        for a in range(1, rank + 1):
            for b in range(a + 1, rank + 1):
                seeds.append(deviation(ctx, commutator(gen_word(a), gen_word(b))))
                seeds.append(deviation(ctx, commutator(gen_word(b), gen_word(a))))
    elif atom != "r":
        raise ValueError(f"unknown ideal atom {atom!r}")
    return _span_closure(ctx, seeds)


def _lattice_product(ctx: RingContext, a: Lattice, b: Lattice) -> Lattice:
    rows = []
    aelems = [RingElement.from_vector(ctx, r) for r in a.rows]
    belems = [RingElement.from_vector(ctx, r) for r in b.rows]
    for x in aelems:
        for y in belems:
            rows.append((x * y).vector())
    return Lattice(ctx.basis_size, tuple(rows))


@lru_cache(maxsize=None)
def _eval_ideal_cached(rank: int, degree: int, divisors: tuple, text: str) -> Lattice:
    ctx = get_context(rank, degree)
    expr = parse_ideal_expr(text)
    total = Lattice(ctx.basis_size)
    for product in expr.products:
        lat = _atom_lattice(rank, degree, divisors, product[0])
        for atom in product[1:]:
            lat = _lattice_product(ctx, lat, _atom_lattice(rank, degree, divisors, atom))
        total = total + lat
    return total


def eval_ideal(ctx: RingContext, divisors, expr) -> Lattice:
    """Evaluate an ideal expression as a lattice in monomial coordinates."""
    e = validate_divisors(divisors, rank=ctx.rank)
    text = expr if isinstance(expr, str) else str(expr)
    parse_ideal_expr(text)  # reject malformed input before caching
    return _eval_ideal_cached(ctx.rank, ctx.degree, e, text)


def membership(ctx: RingContext, divisors, w: Word, expr) -> bool:
    """Whether w lies in F cap (1 + a + f^N) for the ideal expression a.

    The truncation degree of ctx is the membership level: f^N vanishes in
    the quotient, so the test is plain lattice membership of trunc(w - 1).
    """
    lat = eval_ideal(ctx, divisors, expr)
    return deviation(ctx, w).vector() in lat
