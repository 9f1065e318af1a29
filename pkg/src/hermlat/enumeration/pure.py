"""Exact short-vector enumeration (reference engine).

Fincke-Pohst style depth-first search driven by an exact rational LDL^T
factorization of the LLL-reduced Gram matrix.  All pruning decisions are
made with Fraction arithmetic, so the emitted vector set is exact by
construction; this engine doubles as the correctness oracle for the
compiled kernel.

Emission order: the recursion fixes the last reduced coordinate first and
walks every level in ascending order, so vectors come out sorted by the
key (z[n-1], ..., z[0]) of their reduced coordinates.  The search tree can
be partitioned into contiguous ranges of the last coordinate; concatenating
partition outputs reproduces the unpartitioned stream.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .. import linalg
from ..linalg import GramForm, floor_sqrt_frac


def _floor_shift(s, c):
    """floor(c + sqrt(s)) for Fractions s >= 0, c."""
    guess = c.numerator // c.denominator + floor_sqrt_frac(s)
    while True:
        nxt = guess + 1
        diff = nxt - c
        if diff <= 0 or diff * diff <= s:
            guess = nxt
        else:
            break
    while True:
        diff = guess - c
        if diff <= 0 or diff * diff <= s:
            break
        guess -= 1
    return guess


def level_range(dk, c, budget):
    """All integers x with dk*(x+c)^2 <= budget, as an inclusive (lo, hi)."""
    if budget < 0:
        return 0, -1
    s = budget / dk
    hi = _floor_shift(s, -c)
    lo = -_floor_shift(s, c)
    return lo, hi


@lru_cache(maxsize=64)
def reduce_form(q):
    """Shared exact preprocessing for a positive definite GramForm.

    Returns (scale, g2, t, d, L): scale clears denominators, g2 is the
    LLL-reduced integer Gram, t the unimodular transform with
    scale * (t^T q t) = g2, and (d, L) the exact LDL^T data of g2.
    """
    scale = 1
    for row in q.g:
        for x in row:
            den = x.denominator
            scale = scale * den // gcd(scale, den)
    gi = GramForm.from_rows([[x * scale for x in row] for row in q.g])
    g2, t = linalg.lll_reduce(gi)
    d, L = linalg.ldl(g2)
    return scale, g2, t, d, L


def _walk(n, d, L, shift, budget, top_range=None):
    """Yield (z tuple, scaled norm Fraction) for all integer z with
    (z + shift)^T G (z + shift) <= budget, G the form behind (d, L)."""
    if n == 0:
        if budget >= 0:
            yield (), Fraction(0)
        return
    z = [0] * n

    def rec(k, rem, sums):
        c = sums[k]
        lo, hi = level_range(d[k], c, rem)
        if k == n - 1 and top_range is not None:
            lo = max(lo, top_range[0])
            hi = min(hi, top_range[1])
        for x in range(lo, hi + 1):
            v = x + c
            rem2 = rem - d[k] * v * v
            z[k] = x
            if k == 0:
                yield tuple(z), budget - rem2
            else:
                sums2 = [sums[i] + L[k][i] * x for i in range(k)]
                yield from rec(k - 1, rem2, sums2)
        z[k] = 0

    yield from rec(n - 1, Fraction(budget), [Fraction(s) for s in shift])


def top_level_range(q, bound):
    """Inclusive range of the outermost reduced coordinate for this bound."""
    scale, g2, t, d, L = reduce_form(q)
    budget = Fraction(bound) * scale
    if budget < 0:
        return 0, -1
    return level_range(d[-1], Fraction(0), budget)


def partition_ranges(lo, hi, parts):
    """Split [lo, hi] into `parts` contiguous (possibly empty) subranges."""
    total = hi - lo + 1
    if total <= 0:
        return [(0, -1)] * parts
    out = []
    for i in range(parts):
        a = lo + (total * i) // parts
        b = lo + (total * (i + 1)) // parts - 1
        out.append((a, b))
    return out


def enumerate_short(q, bound, parts=1, part=None):
    """Yield every nonzero integer x (as a tuple) with x^T q x <= bound.

    Both x and -x are emitted.  `parts`/`part` restrict the walk to one
    contiguous slice of the outermost reduced coordinate.
    """
    scale, g2, t, d, L = reduce_form(q)
    n = q.dim
    budget = Fraction(bound) * scale
    if budget < 0:
        return
    top = None
    if part is not None:
        lo, hi = level_range(d[-1], Fraction(0), budget)
        top = partition_ranges(lo, hi, parts)[part]
    zero = (0,) * n
    for z, _ in _walk(n, d, L, zero, budget, top_range=top):
        if z == zero:
            continue
        yield tuple(
            sum(t[i][j] * z[j] for j in range(n)) for i in range(n)
        )


def short_vector_counts(q, bound, parts=1, part=None):
    """Count nonzero vectors with x^T q x <= bound, bucketed by exact norm.

    Returns a dict {Fraction norm: count}; both signs are counted.
    """
    scale, g2, t, d, L = reduce_form(q)
    n = q.dim
    budget = Fraction(bound) * scale
    counts = {}
    if budget < 0:
        return counts
    top = None
    if part is not None:
        lo, hi = level_range(d[-1], Fraction(0), budget)
        top = partition_ranges(lo, hi, parts)[part]
    zero = (0,) * n
    for z, scaled in _walk(n, d, L, zero, budget, top_range=top):
        if z == zero:
            continue
        norm = scaled / scale
        counts[norm] = counts.get(norm, 0) + 1
    return counts


def reduced_sort_key(q):
    """Key function ordering arbitrary coordinate vectors exactly as
    enumerate_short(q, ...) emits them."""
    scale, g2, t, d, L = reduce_form(q)
    tinv = linalg.invert(t)
    n = q.dim

    def key(x):
        z = [sum(tinv[i][j] * x[j] for j in range(n)) for i in range(n)]
        assert all(v.denominator == 1 for v in z)
        return tuple(int(v) for v in reversed(z))

    return key


def enumerate_shifted(gram, shift, bound):
    """Yield all integer z (including zero) with
    (z + shift)^T gram (z + shift) <= bound, exactly."""
    scale, g2, t, d, L = reduce_form(gram)
    n = gram.dim
    budget = Fraction(bound) * scale
    if budget < 0:
        return
    # z = t.w  =>  z + shift = t.(w + t^{-1} shift)
    tinv = linalg.invert(t)
    wshift = [sum(tinv[i][j] * Fraction(shift[j]) for j in range(n))
              for i in range(n)]
    for w, _ in _walk(n, d, L, wshift, budget):
        yield tuple(
            sum(t[i][j] * w[j] for j in range(n)) for i in range(n)
        )
