"""Coordinates on the free nilpotent group of class 3.

The section gamma_2(F)/gamma_4(F) is free abelian on the basic commutators

    weight 2:  [x_j, x_i]           for j > i
    weight 3:  [[x_j, x_i], x_k]    for j > i <= k

and ``word_log`` computes the exponent vector of any word in gamma_2(F)
against that basis, using the truncated group ring as the oracle: the
deviation of a word in gamma_2 is an exact Z-linear function of its
exponent vector once degree-4 terms vanish.

``subgroup_lattice`` realizes the denominator subgroups of the quotient
computations (gamma_2(R)gamma_3(F), [R,R,F]gamma_4(F), ...) as lattices in
these coordinates: a finite generating family is seeded from words in the
generator powers x_i^{e_i}, then the lattice is closed under the linear
action of conjugation by each generator until it stabilizes.  Stability
under one further round is the exit condition, so every returned lattice
is closure-certified.
"""

from dataclasses import dataclass
from functools import lru_cache

from .intlinalg import Lattice, solve_int
from .freering import (
    Word,
    commutator,
    conjugate,
    deviation,
    gen_word,
    get_context,
    validate_divisors,
)


@dataclass(frozen=True)
class CommutatorBasis:
    """Ordered basic commutators of weights 2 and 3 for F of the given rank."""

    rank: int
    weight2: tuple  # pairs (i, j) with i < j, meaning [x_j, x_i]
    weight3: tuple  # triples (i, j, k) with j > i <= k, meaning [[x_j, x_i], x_k]

    @property
    def weight2_count(self) -> int:
        return len(self.weight2)

    @property
    def length(self) -> int:
        return len(self.weight2) + len(self.weight3)

    def word(self, entry) -> Word:
        if len(entry) == 2:
            i, j = entry
            return commutator(gen_word(j), gen_word(i))
        i, j, k = entry
        return commutator(commutator(gen_word(j), gen_word(i)), gen_word(k))

    def label(self, position: int) -> str:
        if position < len(self.weight2):
            i, j = self.weight2[position]
            return f"[x{j},x{i}]"
        i, j, k = self.weight3[position - len(self.weight2)]
        return f"[[x{j},x{i}],x{k}]"

    def labels(self) -> tuple:
        return tuple(self.label(p) for p in range(self.length))


@lru_cache(maxsize=None)
def basic_commutators(rank: int) -> CommutatorBasis:
    if not 1 <= rank <= 6:
        raise ValueError("rank must be between 1 and 6")
    w2 = tuple((i, j) for i in range(1, rank + 1) for j in range(i + 1, rank + 1))
    w3 = tuple(
        (i, j, k)
        for i in range(1, rank + 1)
        for j in range(i + 1, rank + 1)
        for k in range(i, rank + 1)
    )
    assert len(w3) == (rank**3 - rank) // 3
    return CommutatorBasis(rank, w2, w3)


def log_length(rank: int, level: int) -> int:
    basis = basic_commutators(rank)
    return basis.weight2_count if level == 3 else basis.length


@lru_cache(maxsize=None)
def deviation_matrix(rank: int, level: int) -> tuple:
    """Columns are the deviations of the basic commutators, in monomial
    coordinates of the level's truncated ring (weight 2 only at level 3)."""
    if level not in (3, 4):
        raise ValueError("level must be 3 or 4")
    ctx = get_context(rank, level)
    basis = basic_commutators(rank)
    entries = basis.weight2 if level == 3 else basis.weight2 + basis.weight3
    cols = [deviation(ctx, basis.word(e)).vector() for e in entries]
    return tuple(tuple(col[i] for col in cols) for i in range(ctx.basis_size))


@lru_cache(maxsize=None)
def _weight2_deviations(rank: int) -> tuple:
    ctx = get_context(rank, 4)
    basis = basic_commutators(rank)
    return tuple(deviation(ctx, basis.word(e)) for e in basis.weight2)


@lru_cache(maxsize=None)
def _weight3_solver_data(rank: int):
    ctx = get_context(rank, 4)
    basis = basic_commutators(rank)
    deg3 = [i for i, w in enumerate(ctx.monomials) if len(w) == 3]
    cols = [deviation(ctx, basis.word(e)).vector() for e in basis.weight3]
    matrix = tuple(tuple(col[i] for col in cols) for i in deg3)
    return deg3, matrix


class NotInGamma2(ValueError):
    pass


def word_log(rank: int, w: Word) -> tuple:
    """Exponent vector of w over the basic commutators, modulo gamma_4(F).

    Raises NotInGamma2 when the word has a nonzero abelianization (its
    deviation then has degree-1 terms).  The weight-2 exponents are read
    off the degree-2 coefficients; the weight-3 block solves the exact
    residual linear system, and the result is verified against the ring.
    """
    ctx = get_context(rank, 4)
    dev = deviation(ctx, w)
    for mon, c in dev.coeffs.items():
        if len(mon) == 1 and c:
            raise NotInGamma2(f"word is not in gamma_2: degree-1 term y{mon[0]}")
    basis = basic_commutators(rank)
    d2 = []
    for (i, j) in basis.weight2:
        d2.append(dev.coeffs.get((j, i), 0))
    residual = dev
    for c, elt in zip(d2, _weight2_deviations(rank)):
        if c:
            residual = residual - elt.scaled(c)
    for mon, c in residual.coeffs.items():
        assert len(mon) == 3 or not c, "weight-2 reduction left a low-degree term"
    deg3, matrix = _weight3_solver_data(rank)
    target = residual.vector()
    rhs = tuple(target[i] for i in deg3)
    if basis.weight3:
        sol = solve_int(matrix, rhs, len(deg3), len(basis.weight3))
        assert sol is not None, "residual outside the weight-3 span"
        d3 = list(sol)
    else:
        assert not any(rhs)
        d3 = []
    return tuple(d2) + tuple(d3)


@lru_cache(maxsize=None)
def conjugation_matrices(rank: int) -> tuple:
    """Linear action of conjugation by x_j^(+-1) on log coordinates.

    Conjugation is an automorphism preserving gamma_2 and gamma_4, hence
    acts linearly on the section; columns are logs of conjugated basis
    words.
    """
    basis = basic_commutators(rank)
    entries = basis.weight2 + basis.weight3
    mats = []
    for j in range(1, rank + 1):
        for sign in (1, -1):
            cols = [
                word_log(rank, conjugate(basis.word(e), gen_word(j, sign)))
                for e in entries
            ]
            mats.append(
                tuple(tuple(col[i] for col in cols) for i in range(basis.length))
            )
    return tuple(mats)


_CLOSURE_ROUND_CAP = 64


def close_log_lattice(rank: int, lat: Lattice) -> Lattice:
    """Close a log-coordinate lattice under conjugation by all generators."""
    mats = conjugation_matrices(rank)
    n = lat.ambient
    for _ in range(_CLOSURE_ROUND_CAP):
        new = []
        for mat in mats:
            for row in lat.rows:
                image = [0] * n
                for c, col in zip(row, range(n)):
                    if c:
                        for i in range(n):
                            if mat[i][col]:
                                image[i] += c * mat[i][col]
                new.append(tuple(image))
        grown = lat + Lattice(n, tuple(new))
        if grown == lat:
            return lat
        lat = grown
    raise AssertionError("log-lattice closure failed to stabilize")


def log_lattice(rank: int, words, add_weight3_block: bool = False) -> Lattice:
    basis = basic_commutators(rank)
    rows = [word_log(rank, w) for w in words]
    if add_weight3_block:
        for t in range(basis.weight2_count, basis.length):
            row = [0] * basis.length
            row[t] = 1
            rows.append(tuple(row))
    return close_log_lattice(rank, Lattice(basis.length, tuple(rows)))


# --------------------------------------------------------------------------
# Denominator subgroups

SUBGROUP_TAGS = (
    "g2R.g3",
    "g2S.g3",
    "g2S.g4",
    "RRF.g4",
    "g3R.g4",
    "g2RF.g4",
    "Rg2F.g4",
    "RF.g4",
)


@dataclass(frozen=True)
class SubgroupSpec:
    """A named denominator subgroup, optionally enlarged by extra words.

    Extra generator words must lie in gamma_2(F); this is checked when the
    lattice is built (word_log rejects anything with weight-1 content).
    """

    tag: str
    extra_generators: tuple = ()

    def __post_init__(self):
        if self.tag not in SUBGROUP_TAGS:
            raise ValueError(f"unknown subgroup tag {self.tag!r}")


def _power_word(i: int, e: int) -> Word:
    return gen_word(i, e)


def _seed_words(tag: str, divisors: tuple) -> list:
    m = len(divisors)
    live = [i for i in range(1, m + 1) if divisors[i - 1] > 0]

    def pw(i):
        return _power_word(i, divisors[i - 1])

    seeds: list[Word] = []
    if tag == "g2R.g3":
        for a in range(len(live)):
            for b in range(a + 1, len(live)):
                seeds.append(commutator(pw(live[a]), pw(live[b])))
    elif tag in ("g2S.g3", "g2S.g4"):
        sgens = [pw(i) for i in live]
        for a in range(1, m + 1):
            for b in range(a + 1, m + 1):
                sgens.append(commutator(gen_word(a), gen_word(b)))
        for a in range(len(sgens)):
            for b in range(a + 1, len(sgens)):
                seeds.append(commutator(sgens[a], sgens[b]))
        if tag == "g2S.g4":
            for a in range(len(sgens)):
                for b in range(a + 1, len(sgens)):
                    inner = commutator(sgens[a], sgens[b])
                    for c in range(len(sgens)):
                        seeds.append(commutator(inner, sgens[c]))
    elif tag == "RRF.g4":
        for a in range(len(live)):
            for b in range(a + 1, len(live)):
                inner = commutator(pw(live[a]), pw(live[b]))
                for k in range(1, m + 1):
                    seeds.append(commutator(inner, gen_word(k)))
    elif tag == "g3R.g4":
        for a in range(len(live)):
            for b in range(a + 1, len(live)):
                inner = commutator(pw(live[a]), pw(live[b]))
                for k in live:
                    seeds.append(commutator(inner, pw(k)))
    elif tag == "g2RF.g4":
        for a in range(len(live)):
            for b in range(a + 1, len(live)):
                inner = commutator(pw(live[a]), pw(live[b]))
                for k in range(1, m + 1):
                    for sign in (1, -1):
                        seeds.append(commutator(inner, gen_word(k, sign)))
    elif tag == "Rg2F.g4":
        for i in live:
            for a in range(1, m + 1):
                for b in range(a + 1, m + 1):
                    seeds.append(
                        commutator(pw(i), commutator(gen_word(a), gen_word(b)))
                    )
    elif tag == "RF.g4":
        for i in live:
            for j in range(1, m + 1):
                for sign in (1, -1):
                    seeds.append(commutator(pw(i), gen_word(j, sign)))
        for i in live:
            for j in range(1, m + 1):
                inner = commutator(pw(i), gen_word(j))
                for k in range(1, m + 1):
                    for sign in (1, -1):
                        seeds.append(commutator(inner, gen_word(k, sign)))
    else:
        raise ValueError(f"unknown subgroup tag {tag!r}")
    return seeds


@lru_cache(maxsize=None)
def _subgroup_lattice_cached(rank: int, divisors: tuple, tag: str, extra: tuple):
    seeds = _seed_words(tag, divisors)
    seeds.extend(extra)
    gamma3_relative = tag.endswith(".g3")
    return log_lattice(rank, seeds, add_weight3_block=gamma3_relative)


def subgroup_lattice(rank: int, divisors, spec) -> Lattice:
    """Log-coordinate lattice of a denominator subgroup (full LogVector
    coordinates; gamma_3-relative tags include the entire weight-3 block)."""
    e = validate_divisors(divisors, rank=rank)
    if isinstance(spec, str):
        spec = SubgroupSpec(spec)
    return _subgroup_lattice_cached(rank, e, spec.tag, spec.extra_generators)
