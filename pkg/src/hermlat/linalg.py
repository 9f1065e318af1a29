"""Exact integer/rational matrix algebra and lattice reduction.

Matrices are plain lists of lists; integer matrices hold Python ints,
rational matrices hold ints or ``fractions.Fraction`` (Fraction keeps
denominators positive and fractions reduced, which is the canonical form
assumed everywhere).  Everything here is exact: no floating point.

The short-vector enumeration entry points live in :mod:`hermlat.enumeration`
and are re-exported here; this module provides their exact preprocessing
(positive-definiteness certification, LLL reduction, LDL^T factorization).
"""

import bisect
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


class SingularMatrixError(ZeroDivisionError):
    pass


class NotPositiveDefiniteError(ValueError):
    pass


# ---------------------------------------------------------------------------
# basic helpers


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def copy_matrix(m):
    return [list(row) for row in m]


def transpose(m):
    return [list(col) for col in zip(*m)]


def mat_mul(a, b):
    n, k = len(a), len(b)
    if any(len(row) != k for row in a):
        raise ValueError("dimension mismatch in mat_mul")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vec_mat(v, m):
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]))]


def mat_eq(a, b):
    return len(a) == len(b) and all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb))
        for ra, rb in zip(a, b)
    )


def xgcd(a, b):
    """Return (x, y, g) with a*x + b*y == g == gcd(a, b), g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _rows_cols(m):
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(row) != cols for row in m):
        raise ValueError("ragged matrix")
    return rows, cols


# ---------------------------------------------------------------------------
# Hermite normal form (column style)


def hnf(m):
    """Column-style Hermite normal form.

    Returns (h, u) with u unimodular, m . u = h, pivot entries positive,
    and every entry left of a pivot (same row, smaller column index)
    reduced into [0, pivot).  Zero columns are pushed to the right, so for
    a rank-r input the last cols-r columns of u span the integer kernel.
    """
    rows, cols = _rows_cols(m)
    h = copy_matrix(m)
    if any(not isinstance(x, int) for row in h for x in row):
        raise ValueError("hnf requires integer entries")
    u = identity(cols)
    pivot_col = 0
    for i in range(rows):
        if pivot_col >= cols:
            break
        # clear row i to the right of pivot_col by column operations
        j = pivot_col
        for j2 in range(pivot_col + 1, cols):
            if h[i][j2] == 0:
                continue
            a, b = h[i][j], h[i][j2]
            if a == 0:
                for mat in (h, u):
                    for r in mat:
                        r[j], r[j2] = r[j2], r[j]
                continue
            if b % a == 0:
                q = b // a
                for mat in (h, u):
                    for r in mat:
                        r[j2] -= q * r[j]
                continue
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            for mat in (h, u):
                for r in mat:
                    rj, rj2 = r[j], r[j2]
                    r[j] = x * rj + y * rj2
                    r[j2] = -bg * rj + ag * rj2
        if h[i][j] == 0:
            continue
        if h[i][j] < 0:
            for mat in (h, u):
                for r in mat:
                    r[j] = -r[j]
        piv = h[i][j]
        for j2 in range(pivot_col):
            q = h[i][j2] // piv
            if q:
                for mat in (h, u):
                    for r in mat:
                        r[j2] -= q * r[j]
        pivot_col += 1
    return h, u


def hnf_row_span(rows, ncols=None, modulus=None):
    """Canonical HNF basis of the lattice spanned by integer row vectors.

    Incremental insertion (no transform kept), suitable for large generator
    stacks such as products of ideal bases.  Output rows form a row-style
    HNF: pivots positive, in staircase order, entries above a pivot reduced
    into [0, pivot).

    `modulus`, when given, must be a positive integer m such that the
    spanned lattice provably contains m * Z^ncols (e.g. |det| of any
    full-rank subset of the rows).  The basis is then seeded with m * I and
    every intermediate entry is clamped into [0, m), which prevents the
    classical HNF coefficient explosion.  Adding multiples of m * e_t to a
    row never changes the span because m * e_t lies in it.
    """
    if ncols is None:
        if not rows:
            raise ValueError("need ncols for an empty generator list")
        ncols = len(rows[0])
    basis = []          # rows with pivot columns strictly increasing
    pivots = []         # pivot column of each basis row
    if modulus is not None:
        if modulus <= 0:
            raise ValueError("modulus must be positive")
        basis = [[modulus if i == j else 0 for j in range(ncols)]
                 for i in range(ncols)]
        pivots = list(range(ncols))
    m = modulus
    for vec0 in rows:
        if len(vec0) != ncols:
            raise ValueError("ragged generator stack")
        vec = [x % m for x in vec0] if m else list(vec0)
        j = 0
        while True:
            while j < ncols and vec[j] == 0:
                j += 1
            if j == ncols:
                break
            pos = bisect.bisect_left(pivots, j)
            if pos < len(pivots) and pivots[pos] == j:
                row = basis[pos]
                a, b = row[j], vec[j]
                if b % a == 0:
                    q = b // a
                    for t in range(j, ncols):
                        vec[t] -= q * row[t]
                else:
                    x, y, g = xgcd(a, b)
                    ag, bg = a // g, b // g
                    for t in range(j, ncols):
                        rt, vt = row[t], vec[t]
                        row[t] = x * rt + y * vt
                        vec[t] = -bg * rt + ag * vt
                    if m:
                        row[j + 1:] = [x % m for x in row[j + 1:]]
                if m:
                    vec[j + 1:] = [x % m for x in vec[j + 1:]]
                    vec[j] = 0
            else:
                basis.insert(pos, vec)
                pivots.insert(pos, j)
                break
    # canonical reduction: positive pivots, entries above reduced.  Must run
    # in ascending pivot order: reducing with a later row only touches
    # columns right of its pivot, so earlier reduced columns stay reduced.
    for idx, j in enumerate(pivots):
        if basis[idx][j] < 0:
            basis[idx] = [-x for x in basis[idx]]
    for idx in range(len(basis)):
        j = pivots[idx]
        piv = basis[idx][j]
        for above in range(idx):
            q = basis[above][j] // piv
            if q:
                basis[above] = [
                    a - q * b for a, b in zip(basis[above], basis[idx])
                ]
    return basis


def right_kernel(m):
    """Basis (list of integer column vectors, as rows here) of {x : m.x = 0}.

    The raw HNF transform tends to carry huge entries; the kernel basis is
    re-canonicalized through a row-span HNF to keep coordinates small.
    """
    rows, cols = _rows_cols(m)
    h, u = hnf(m)
    rank = 0
    for j in range(cols):
        if any(h[i][j] != 0 for i in range(rows)):
            rank += 1
    ut = transpose(u)
    raw = [ut[j] for j in range(rank, cols)]
    if not raw:
        return raw
    return hnf_row_span(raw, cols)


# ---------------------------------------------------------------------------
# determinants and inverses


def _scale_rows_to_int(m):
    """Return (integer matrix, overall Fraction scale) with m = scale-adjusted."""
    out = []
    scale = Fraction(1)
    for row in m:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
        scale *= den
    return out, scale


def det_exact(m):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    rows, cols = _rows_cols(m)
    if rows != cols:
        raise ValueError("determinant of a non-square matrix")
    if rows == 0:
        return Fraction(1)
    a, scale = _scale_rows_to_int(m)
    sign = 1
    prev = 1
    for k in range(rows - 1):
        if a[k][k] == 0:
            for i in range(k + 1, rows):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, rows):
            for j in range(k + 1, rows):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[rows - 1][rows - 1]) / scale


def invert(m):
    """Exact inverse over the rationals (Gauss-Jordan)."""
    rows, cols = _rows_cols(m)
    if rows != cols:
        raise ValueError("inverse of a non-square matrix")
    a = [[Fraction(x) for x in row] for row in m]
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(rows)]
           for i in range(rows)]
    for col in range(rows):
        piv = None
        for i in range(col, rows):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        inv[col] = [x / d for x in inv[col]]
        for i in range(rows):
            if i == col or a[i][col] == 0:
                continue
            f = a[i][col]
            a[i] = [x - f * y for x, y in zip(a[i], a[col])]
            inv[i] = [x - f * y for x, y in zip(inv[i], inv[col])]
    return inv


def solve_exact(m, rhs):
    """Solve m.x = rhs exactly (rhs a vector); raises if singular."""
    inv = invert(m)
    return mat_vec(inv, rhs)


# ---------------------------------------------------------------------------
# Gram forms


@dataclass(frozen=True)
class GramForm:
    """A symmetric rational quadratic form given by its Gram matrix."""

    dim: int
    g: tuple

    @classmethod
    def from_rows(cls, rows):
        n, c = _rows_cols(rows)
        if n != c:
            raise ValueError("Gram matrix must be square")
        g = tuple(tuple(Fraction(x) for x in row) for row in rows)
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        return cls(n, g)

    def rows(self):
        return [list(row) for row in self.g]

    def is_integral(self):
        return all(x.denominator == 1 for row in self.g for x in row)

    def value(self, x):
        """Evaluate x^T g x exactly."""
        gx = mat_vec(self.rows(), x)
        return sum(a * b for a, b in zip(x, gx))

    def pair(self, x, y):
        gy = mat_vec(self.rows(), y)
        return sum(a * b for a, b in zip(x, gy))

    def det(self):
        return det_exact(self.rows())

    def is_positive_definite(self):
        try:
            ldl(self)
        except NotPositiveDefiniteError:
            return False
        return True

    def transform(self, t):
        """Gram of the same form on the basis given by columns of t."""
        tt = transpose(t)
        return GramForm.from_rows(mat_mul(tt, mat_mul(self.rows(), t)))


def ldl(q):
    """Exact LDL^T factorization of a positive definite GramForm.

    Returns (d, L) with d a list of positive Fractions and L unit lower
    triangular, such that q = L . diag(d) . L^T.  Raises
    NotPositiveDefiniteError otherwise.
    """
    n = q.dim
    g = [[Fraction(x) for x in row] for row in q.g]
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        s = g[j][j] - sum(L[j][k] * L[j][k] * d[k] for k in range(j))
        if s <= 0:
            raise NotPositiveDefiniteError(
                "form is not positive definite (pivot %d)" % j)
        d[j] = s
        for i in range(j + 1, n):
            t = g[i][j] - sum(L[i][k] * L[j][k] * d[k] for k in range(j))
            L[i][j] = t / s
    return d, L


def _round_frac(x):
    """Nearest integer to a Fraction (ties to even, like round())."""
    return round(Fraction(x))


def lll_reduce(q, delta=Fraction(99, 100)):
    """Exact LLL reduction of a positive definite Gram form.

    Returns (q2, t) with t unimodular and q2 = t^T . q . t satisfying the
    size-reduction and Lovasz conditions for the given delta under exact
    rational Gram-Schmidt.
    """
    delta = Fraction(delta)
    if not (Fraction(1, 4) < delta < 1):
        raise ValueError("delta must lie in (1/4, 1)")
    if not q.is_positive_definite():
        raise NotPositiveDefiniteError("LLL input must be positive definite")
    n = q.dim
    g = [[Fraction(x) for x in row] for row in q.g]
    t = identity(n)

    def gso():
        # mu, B from the current Gram (exact); B[i] = ||b_i*||^2
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        r = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1):
                s = g[i][j] - sum(mu[j][k] * r[i][k] for k in range(j))
                r[i][j] = s
                if j < i:
                    mu[i][j] = s / B[j]
            B[i] = r[i][i]
        return mu, B

    def col_addmul(dst, src, c):
        # basis op b_dst += c * b_src, updating Gram and transform
        for row in t:
            row[dst] += c * row[src]
        for i in range(n):
            g[i][dst] += c * g[i][src]
        for j in range(n):
            g[dst][j] += c * g[src][j]

    def col_swap(a, b):
        for row in t:
            row[a], row[b] = row[b], row[a]
        for i in range(n):
            g[i][a], g[i][b] = g[i][b], g[i][a]
        g[a], g[b] = g[b], g[a]

    k = 1
    while k < n:
        mu, B = gso()
        for j in range(k - 1, -1, -1):
            c = _round_frac(mu[k][j])
            if c:
                col_addmul(k, j, -c)
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            col_swap(k, k - 1)
            k = max(k - 1, 1)
    q2 = GramForm.from_rows(g)
    return q2, t


# ---------------------------------------------------------------------------
# square root helpers for enumeration bounds


def floor_sqrt_frac(x):
    """floor(sqrt(x)) for a nonnegative Fraction."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative argument")
    return isqrt(x.numerator * x.denominator) // x.denominator


# ---------------------------------------------------------------------------
# enumeration entry points (delegate to the selected backend)


def enumerate_short(q, bound, parts=1, part=None):
    from . import enumeration
    return enumeration.enumerate_short(q, bound, parts=parts, part=part)


def enumerate_coset(q, bound, congruences):
    from . import enumeration
    return enumeration.enumerate_coset(q, bound, congruences)


def short_vector_counts(q, bound, threads=1):
    from . import enumeration
    return enumeration.short_vector_counts(q, bound, threads=threads)
