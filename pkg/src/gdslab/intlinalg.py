"""Exact integer linear algebra: Hermite/Smith normal forms, lattices,
and finitely generated abelian groups.

Conventions used throughout the package:

- A matrix is a tuple of rows, each row a tuple of Python ints.  All
  arithmetic is arbitrary precision and exact; nothing here ever touches
  floating point.
- A ``Lattice`` is a subgroup of Z^n stored as its row Hermite normal
  form.  The HNF is canonical (pivots positive, entries above a pivot
  reduced into [0, pivot), rows ordered by pivot column), so two lattices
  are equal iff their stored bases are equal.
- A map Z^a -> Z^b acts on column vectors, i.e. ``phi`` has b rows and
  a columns and sends v to phi . v.

Everything is immutable after construction and safe to share between
threads.
"""

import math


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g == a*x + b*y."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) for arbitrary integer n and k >= 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    num = 1
    for t in range(k):
        num *= n - t
    return num // math.factorial(k)


def identity_matrix(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zero_matrix(nrows: int, ncols: int) -> tuple:
    return tuple((0,) * ncols for _ in range(nrows))


def mat_mul(a, b) -> tuple:
    """Matrix product; the number of columns of ``a`` must equal len(b)."""
    if not b:
        return tuple(() for _ in a)
    ncols = len(b[0])
    out = []
    for row in a:
        acc = [0] * ncols
        for coeff, brow in zip(row, b):
            if coeff:
                for j, entry in enumerate(brow):
                    if entry:
                        acc[j] += coeff * entry
        out.append(tuple(acc))
    return tuple(out)


def mat_vec(a, v) -> tuple:
    out = []
    for row in a:
        s = 0
        for coeff, x in zip(row, v):
            if coeff and x:
                s += coeff * x
        out.append(s)
    return tuple(out)


def transpose(rows, ncols: int | None = None) -> tuple:
    if rows:
        ncols = len(rows[0])
    elif ncols is None:
        raise ValueError("cannot infer width of an empty matrix")
    return tuple(tuple(row[j] for row in rows) for j in range(ncols))


def determinant(a) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _echelon_rows(rows, width: int) -> list:
    """Integer row echelon form: one row per pivot column, span preserved."""
    pivots: dict[int, list] = {}
    for r in rows:
        if len(r) != width:
            raise ValueError("row length does not match ambient rank")
        vec = list(r)
        j = 0
        while j < width:
            if vec[j] == 0:
                j += 1
                continue
            row = pivots.get(j)
            if row is None:
                pivots[j] = vec
                break
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for t in range(j, width):
                    if row[t]:
                        vec[t] -= q * row[t]
            else:
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                for t in range(j, width):
                    ra, vb = row[t], vec[t]
                    row[t] = x * ra + y * vb
                    vec[t] = ag * vb - bg * ra
            # vec[j] is now zero; keep reducing the remainder.
    return [pivots[j] for j in sorted(pivots)]


def hermite_normal_form(rows, width: int) -> tuple:
    """Canonical row HNF of the span of ``rows`` inside Z^width.

    Zero rows are dropped; pivots are positive; every entry above a pivot
    lies in [0, pivot).  The result is the unique canonical basis of the
    row span, so it doubles as an equality normal form for lattices.
    """
    ech = _echelon_rows(rows, width)
    for row in ech:
        p = next(j for j in range(width) if row[j])
        if row[p] < 0:
            for t in range(p, width):
                row[t] = -row[t]
    # Reduce entries above each pivot into the canonical range.
    pivcols = [next(j for j in range(width) if row[j]) for row in ech]
    for upper in range(len(ech)):
        for lower in range(upper + 1, len(ech)):
            p = pivcols[lower]
            q = ech[upper][p] // ech[lower][p]
            if q:
                for t in range(p, width):
                    if ech[lower][t]:
                        ech[upper][t] -= q * ech[lower][t]
    return tuple(tuple(row) for row in ech)


class Lattice:
    """A finitely generated subgroup of Z^ambient in canonical row HNF."""

    __slots__ = ("ambient", "rows", "_pivots")

    def __init__(self, ambient: int, rows=()):
        if ambient < 0:
            raise ValueError("ambient rank must be nonnegative")
        self.ambient = ambient
        self.rows = hermite_normal_form(rows, ambient)
        self._pivots = tuple(
            next(j for j in range(ambient) if row[j]) for row in self.rows
        )

    @classmethod
    def full(cls, ambient: int) -> "Lattice":
        return cls(ambient, identity_matrix(ambient))

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple:
        return self._pivots

    def coordinates(self, v):
        """Coefficients of v over the basis rows, or None if v is outside."""
        if len(v) != self.ambient:
            raise ValueError("vector length does not match ambient rank")
        vec = list(v)
        coeffs = [0] * len(self.rows)
        for j in range(self.ambient):
            if vec[j] == 0:
                continue
            try:
                k = self._pivots.index(j)
            except ValueError:
                return None
            row = self.rows[k]
            if vec[j] % row[j]:
                return None
            q = vec[j] // row[j]
            coeffs[k] = q
            for t in range(j, self.ambient):
                if row[t]:
                    vec[t] -= q * row[t]
        return coeffs

    def member(self, v) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v) -> bool:
        return self.member(v)

    def contains_lattice(self, other: "Lattice") -> bool:
        if other.ambient != self.ambient:
            raise ValueError("ambient ranks differ")
        return all(self.member(r) for r in other.rows)

    def first_row_outside(self, other: "Lattice"):
        """First basis row of self not contained in other (None if self <= other)."""
        for r in self.rows:
            if not other.member(r):
                return r
        return None

    def __add__(self, other: "Lattice") -> "Lattice":
        if other.ambient != self.ambient:
            raise ValueError("ambient ranks differ")
        return Lattice(self.ambient, self.rows + other.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.ambient == other.ambient and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.ambient, self.rows))

    def project(self, ncols: int) -> "Lattice":
        """Image under the projection onto the first ncols coordinates."""
        return Lattice(ncols, tuple(r[:ncols] for r in self.rows))

    def suffix_section(self, start: int) -> "Lattice":
        """Sublattice of vectors whose first ``start`` coordinates vanish.

        Exact for an HNF basis: such vectors are spanned by the basis rows
        whose pivot column is >= start.
        """
        rows = tuple(r for r, p in zip(self.rows, self._pivots) if p >= start)
        return Lattice(self.ambient, rows)

    def __repr__(self) -> str:
        return f"Lattice({self.ambient}, rank={self.rank})"


def smith_normal_form(a, nrows: int | None = None, ncols: int | None = None):
    """Smith normal form with transforms.

    Returns (diag, left, right) where left . a . right is diagonal with
    entries ``diag`` (length min(nrows, ncols)) satisfying d1 | d2 | ...,
    all di >= 0, and left/right are unimodular.
    """
    if nrows is None:
        nrows = len(a)
    if ncols is None:
        if a:
            ncols = len(a[0])
        else:
            raise ValueError("cannot infer width of an empty matrix")
    d = [list(row) for row in a]
    left = [list(row) for row in identity_matrix(nrows)]
    right = [list(row) for row in identity_matrix(ncols)]

    def row_combine(i1, i2, x, y, ag, bg):
        # (row i1, row i2) <- (x*r1 + y*r2, ag*r2 - bg*r1); determinant 1.
        for mat in (d, left):
            r1, r2 = mat[i1], mat[i2]
            for t in range(len(r1)):
                a1, a2 = r1[t], r2[t]
                r1[t] = x * a1 + y * a2
                r2[t] = ag * a2 - bg * a1

    def col_combine(j1, j2, x, y, ag, bg):
        for mat in (d, right):
            for row in mat:
                a1, a2 = row[j1], row[j2]
                row[j1] = x * a1 + y * a2
                row[j2] = ag * a2 - bg * a1

    def swap_rows(i1, i2):
        d[i1], d[i2] = d[i2], d[i1]
        left[i1], left[i2] = left[i2], left[i1]

    def swap_cols(j1, j2):
        for mat in (d, right):
            for row in mat:
                row[j1], row[j2] = row[j2], row[j1]

    n = min(nrows, ncols)
    for t in range(n):
        # Move a nonzero entry to (t, t).
        pivot = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if d[i][j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, nrows):
                b = d[i][t]
                if not b:
                    continue
                a = d[t][t]
                if a and b % a == 0:
                    # Plain elimination: never disturbs the pivot row.
                    q = b // a
                    for mat in (d, left):
                        r1, r2 = mat[t], mat[i]
                        for c in range(len(r1)):
                            if r1[c]:
                                r2[c] -= q * r1[c]
                else:
                    g, x, y = xgcd(a, b)
                    row_combine(t, i, x, y, a // g, b // g)
            for j in range(t + 1, ncols):
                b = d[t][j]
                if not b:
                    continue
                a = d[t][t]
                if a and b % a == 0:
                    q = b // a
                    for mat in (d, right):
                        for row in mat:
                            if row[t]:
                                row[j] -= q * row[t]
                else:
                    g, x, y = xgcd(a, b)
                    col_combine(t, j, x, y, a // g, b // g)
            if any(d[i][t] for i in range(t + 1, nrows)):
                continue
            if any(d[t][j] for j in range(t + 1, ncols)):
                continue
            # Absorb any entry not divisible by the pivot, then re-clear.
            bad = None
            piv = d[t][t]
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if d[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for mat in (d, left):
                for col in range(len(mat[t])):
                    mat[t][col] += mat[bad][col]
    diag = []
    for t in range(n):
        v = d[t][t]
        if v < 0:
            for mat in (d, left):
                for col in range(len(mat[t])):
                    mat[t][col] = -mat[t][col]
            v = -v
        diag.append(v)
    return diag, tuple(tuple(r) for r in left), tuple(tuple(r) for r in right)


def column_kernel(a, nrows: int, ncols: int) -> tuple:
    """Rows spanning {x in Z^ncols : a . x = 0}."""
    if ncols == 0:
        return ()
    if nrows == 0 or all(not any(row) for row in a):
        return identity_matrix(ncols)
    diag, _left, right = smith_normal_form(a, nrows, ncols)
    cols = [j for j in range(ncols) if j >= len(diag) or diag[j] == 0]
    return tuple(tuple(right[i][j] for i in range(ncols)) for j in cols)


def solve_int(a, b, nrows: int, ncols: int):
    """An integer solution x of a . x = b, or None if none exists."""
    diag, left, right = smith_normal_form(a, nrows, ncols)
    c = mat_vec(left, b)
    y = [0] * ncols
    for i in range(nrows):
        if i < len(diag) and diag[i]:
            if c[i] % diag[i]:
                return None
            y[i] = c[i] // diag[i]
        elif c[i]:
            return None
    x = mat_vec(right, y)
    if mat_vec(a, x) != tuple(b):
        return None
    return x


def lattice_preimage(phi, lat: Lattice) -> Lattice:
    """{v in Z^a : phi . v in lat} for phi: Z^a -> Z^b with b = lat.ambient.

    Computed by stacking phi against the lattice basis and projecting the
    integer kernel; no rational arithmetic is involved.
    """
    b = len(phi)
    if b != lat.ambient:
        raise ValueError("codomain rank does not match lattice ambient rank")
    a = len(phi[0]) if phi else 0
    r = lat.rank
    stacked = tuple(
        tuple(phi[i]) + tuple(-lat.rows[k][i] for k in range(r)) for i in range(b)
    )
    kern = column_kernel(stacked, b, a + r)
    return Lattice(a, tuple(row[:a] for row in kern))


class NotSublattice(ValueError):
    """Raised when a claimed sublattice contains a vector outside the ambient one."""

    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"not a sublattice; witness vector {self.witness}")


def quotient_invariants(num: Lattice, den: Lattice) -> "AbGroup":
    """Invariant factors of num/den; raises NotSublattice if den is not inside num."""
    if num.ambient != den.ambient:
        raise ValueError("ambient ranks differ")
    coords = []
    for row in den.rows:
        c = num.coordinates(row)
        if c is None:
            raise NotSublattice(row)
        coords.append(tuple(c))
    n = num.rank
    if n == 0:
        return AbGroup()
    if not coords:
        return AbGroup((0,) * n)
    diag, _l, _r = smith_normal_form(tuple(coords), len(coords), n)
    factors = list(diag) + [0] * (n - len(diag))
    return AbGroup(factors)


def _canonical_factors(values) -> tuple:
    zeros = 0
    fins = []
    for v in values:
        v = abs(int(v))
        if v == 0:
            zeros += 1
        elif v > 1:
            fins.append(v)
    # gcd/lcm bubble: converges to the divisibility chain.
    changed = True
    while changed:
        changed = False
        for i in range(len(fins)):
            for j in range(i + 1, len(fins)):
                if fins[j] % fins[i]:
                    g = math.gcd(fins[i], fins[j])
                    fins[i], fins[j] = g, fins[i] // g * fins[j]
                    changed = True
    fins = [f for f in sorted(fins) if f > 1]
    return tuple(fins) + (0,) * zeros


class AbGroup:
    """A finitely generated abelian group by its invariant factors.

    Factors are stored canonically: finite factors > 1 in an ascending
    divisibility chain, followed by one 0 per infinite cyclic summand.
    The constructor accepts any list of cyclic orders and canonicalizes.
    """

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        object.__setattr__(self, "factors", _canonical_factors(factors))

    def __setattr__(self, *_args):
        raise AttributeError("AbGroup is immutable")

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @property
    def free_rank(self) -> int:
        return sum(1 for f in self.factors if f == 0)

    @property
    def torsion_factors(self) -> tuple:
        return tuple(f for f in self.factors if f)

    def order(self):
        """Group order as an int, or None for an infinite group."""
        if self.free_rank:
            return None
        return math.prod(self.factors) if self.factors else 1

    def has_p_torsion(self, p: int) -> bool:
        return any(f and f % p == 0 for f in self.factors)

    def direct_sum(self, *others: "AbGroup") -> "AbGroup":
        vals = list(self.factors)
        for o in others:
            vals.extend(o.factors)
        return AbGroup(vals)

    def tensor(self, other: "AbGroup") -> "AbGroup":
        vals = []
        for a in self.factors:
            for b in other.factors:
                if a == 0 and b == 0:
                    vals.append(0)
                elif a == 0:
                    vals.append(b)
                elif b == 0:
                    vals.append(a)
                else:
                    vals.append(math.gcd(a, b))
        return AbGroup(vals)

    def embeds_by_invariants(self, other: "AbGroup") -> bool:
        """Necessary-and-sufficient chain test for an embedding self -> other.

        Descending invariant factors must divide pairwise and the free rank
        must not exceed the target's; for finite parts the order then divides.
        """
        if self.free_rank > other.free_rank:
            return False
        mine = sorted(self.torsion_factors, reverse=True)
        theirs = sorted(other.torsion_factors, reverse=True)
        if len(mine) > len(theirs):
            return False
        for a, b in zip(mine, theirs):
            if b % a:
                return False
        return True

    def to_list(self) -> list:
        return list(self.factors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbGroup):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"AbGroup({list(self.factors)})"

    def __str__(self) -> str:
        if not self.factors:
            return "trivial"
        return " x ".join("Z" if f == 0 else f"C{f}" for f in self.factors)
