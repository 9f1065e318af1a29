"""Short-vector enumeration with a compiled kernel and a pure fallback.

At import time we try to load the Cython kernel ``hermlat._speedups``; if it
is missing (extension not built) or unusable, the exact pure-Python engine
takes over.  Both engines share the same exact preprocessing (LLL + LDL^T
over Fractions) and emit vectors in the same deterministic order, which the
test suite checks on the acceptance lattices.

``enumerate_coset`` always runs on the exact engine: it is used for the
per-entry representation-number backtracking, never in the hot loop.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd

from .. import linalg
from ..linalg import GramForm, NotPositiveDefiniteError
from . import pure

try:
    from .. import _speedups as _kernel
except ImportError:          # extension not built
    _kernel = None

BACKEND = "speedups" if _kernel is not None else "pure"


def backend_name():
    return BACKEND


def _require_posdef(q):
    if not q.is_positive_definite():
        raise NotPositiveDefiniteError(
            "enumeration requires a positive definite form")


def _kernel_applicable(g2, budget_int):
    """int64 safety check for the compiled kernel's exact re-evaluation."""
    if _kernel is None:
        return False
    n = g2.dim
    gmax = max(abs(int(x)) for row in g2.g for x in row)
    if gmax == 0:
        return False
    # |x_k| <= sqrt(budget / lambda_min) and the exact recheck accumulates
    # n^2 terms g_ij x_i x_j; demand a wide margin under 2^62.
    xmax = linalg.floor_sqrt_frac(Fraction(max(budget_int, 0))) + 1
    worst = n * n * gmax * xmax * xmax
    return worst < 2 ** 56


def enumerate_short(q, bound, parts=1, part=None):
    """Every nonzero integer vector x with x^T q x <= bound, each exactly
    once, both signs, in the engine's deterministic order."""
    _require_posdef(q)
    bound = Fraction(bound)
    if part is not None and not 0 <= part < parts:
        raise ValueError("part index out of range")
    if _kernel is not None:
        scale, g2, t, d, L = pure.reduce_form(q)
        budget = bound * scale
        bint = budget.numerator // budget.denominator  # z^T g2 z is integral
        if bint >= 0 and _kernel_applicable(g2, bint):
            n = q.dim
            top = None
            if part is not None:
                lo, hi = pure.level_range(d[-1], Fraction(0), budget)
                top = pure.partition_ranges(lo, hi, parts)[part]
            for z in _kernel.enumerate(
                    [[int(x) for x in row] for row in g2.g],
                    [float(x) for x in d],
                    [[float(x) for x in row] for row in L],
                    bint, top):
                yield tuple(
                    sum(t[i][j] * z[j] for j in range(n)) for i in range(n)
                )
            return
    yield from pure.enumerate_short(q, bound, parts=parts, part=part)


def short_vector_counts(q, bound, threads=1):
    """Counts of nonzero vectors by exact norm value: {Fraction: int}.

    With threads > 1 the outermost coordinate range is split into
    contiguous partitions executed on a thread pool; the merged result is
    independent of the thread count.
    """
    _require_posdef(q)
    bound = Fraction(bound)

    def one_part(parts, part):
        if _kernel is not None:
            scale, g2, t, d, L = pure.reduce_form(q)
            budget = bound * scale
            bint = budget.numerator // budget.denominator
            if bint >= 0 and _kernel_applicable(g2, bint):
                lo, hi = pure.level_range(d[-1], Fraction(0), budget)
                top = pure.partition_ranges(lo, hi, parts)[part] \
                    if parts > 1 else (lo, hi)
                raw = _kernel.count_by_norm(
                    [[int(x) for x in row] for row in g2.g],
                    [float(x) for x in d],
                    [[float(x) for x in row] for row in L],
                    bint, top)
                return {Fraction(v, scale): c for v, c in raw.items() if c}
        return pure.short_vector_counts(
            q, bound, parts=parts, part=part if parts > 1 else None)

    if threads <= 1:
        return one_part(1, 0)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [pool.submit(one_part, threads, i) for i in range(threads)]
        merged = {}
        for f in futs:
            for norm, c in f.result().items():
                merged[norm] = merged.get(norm, 0) + c
        return merged


def _solve_integer_affine(a_rows, targets):
    """Integer solutions of A x = t: (x0, kernel_basis) or None if empty.

    a_rows entries and targets may be rational; rows are scaled to integers
    first.  kernel_basis is a list of integer vectors.
    """
    m = len(a_rows)
    n = len(a_rows[0])
    a_int, t_int = [], []
    for row, tgt in zip(a_rows, targets):
        den = 1
        for x in list(row) + [tgt]:
            den = den * Fraction(x).denominator // gcd(
                den, Fraction(x).denominator)
        srow = [int(Fraction(x) * den) for x in row]
        st = Fraction(tgt) * den
        if st.denominator != 1:
            return None
        a_int.append(srow)
        t_int.append(int(st))
    h, u = linalg.hnf(a_int)
    rank = 0
    for j in range(n):
        if any(h[i][j] != 0 for i in range(m)):
            rank += 1
    # particular solution: solve h . y = t_int with y supported on pivots
    y = [0] * n
    rem = list(t_int)
    for j in range(rank):
        i = next(i for i in range(m) if h[i][j] != 0)
        piv = h[i][j]
        if rem[i] % piv != 0:
            return None
        c = rem[i] // piv
        y[j] = c
        for r in range(m):
            rem[r] -= c * h[r][j]
    if any(rem):
        return None
    x0 = [sum(u[i][j] * y[j] for j in range(n)) for i in range(n)]
    ut = linalg.transpose(u)
    kernel = [ut[j] for j in range(rank, n)]
    return x0, kernel


def enumerate_coset(q, bound, congruences):
    """All nonzero x with x^T q x <= bound meeting every linear constraint.

    congruences is a list of (row_vector, target) demanding
    row . x == target exactly.  Equals filtering enumerate_short by the
    constraints (same vectors, same order); inconsistent constraints give
    an empty stream.
    """
    _require_posdef(q)
    bound = Fraction(bound)
    congruences = list(congruences)
    if not congruences:
        yield from enumerate_short(q, bound)
        return
    if bound < 0:
        return
    n = q.dim
    sol = _solve_integer_affine(
        [list(row) for row, _ in congruences],
        [tgt for _, tgt in congruences])
    if sol is None:
        return
    x0, kernel = sol
    if not kernel:
        if any(x0) and q.value(x0) <= bound:
            yield tuple(x0)
        return
    k = len(kernel)
    # residual problem: x = x0 + N z, N columns = kernel vectors
    ncols = [list(v) for v in kernel]                     # k rows of length n
    qrows = q.rows()
    qp = [[sum(ncols[a][i] * qrows[i][j] * ncols[b][j]
               for i in range(n) for j in range(n))
           for b in range(k)] for a in range(k)]
    w = [sum(ncols[a][i] * qrows[i][j] * x0[j]
             for i in range(n) for j in range(n)) for a in range(k)]
    c0 = q.value(x0)
    qp_form = GramForm.from_rows(qp)
    e = linalg.solve_exact(qp, w)
    bprime = bound - c0 + sum(e[a] * qp[a][b] * e[b]
                              for a in range(k) for b in range(k))
    out = []
    for z in pure.enumerate_shifted(qp_form, e, bprime):
        x = tuple(x0[i] + sum(ncols[a][i] * z[a] for a in range(k))
                  for i in range(n))
        if any(x):
            out.append(x)
    out.sort(key=pure.reduced_sort_key(q))
    yield from out
