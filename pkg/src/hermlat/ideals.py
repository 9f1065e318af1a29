"""Fractional O_K-ideals and the even unimodular pair search.

An ideal is stored as an integer matrix whose rows are the coordinates of a
Z-basis over the integral basis {zeta^i, omega*zeta^i} of O_K, together
with a positive scalar denominator.  Rows are kept in canonical
row-style HNF and the gcd of all entries with the denominator is 1, so
ideal equality is plain matrix equality.

Inversion follows the definition I^{-1} = {x : x I subset O_K} through
lattice duality: {y : A y integral} is the dual of the row lattice of A.
No prime factorization is involved.

The search for a pair (A, d) with (d) A conj(A) D_{K/Q} = O_K walks a
deterministic pool of candidate ideals, enumerates short conjugation-fixed
elements of C = (A conj(A) D)^{-1} under the trace form, and repairs
embedding signs with real cyclotomic units via linear algebra over GF(2).
Every returned pair is re-verified exactly; failure raises SearchExhausted
with diagnostics rather than fabricating a lattice.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import fields, linalg
from .fields import FieldTower, KElement
from .linalg import GramForm


class SearchExhausted(RuntimeError):
    """The pair search ran out of budget; carries diagnostics."""

    def __init__(self, message, diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConstructionError(RuntimeError):
    """An internal arithmetic cross-check failed (implementation bug)."""


# ---------------------------------------------------------------------------
# per-tower cached order data


@lru_cache(maxsize=8)
def order_context(tower):
    """Precomputed integral-basis data for a tower."""
    n = tower.degK
    basis = tower.integral_basis()
    cols = [tower.coords_of(e) for e in basis]
    b_mat = linalg.transpose(cols)          # Q-basis coords of e_j in columns
    b_inv = linalg.invert(b_mat)
    # trace Gram of the integral basis
    tgram = [[int((basis[i] * basis[j]).trace_to_Q()) for j in range(n)]
             for i in range(n)]
    det_t = linalg.det_exact(tgram)
    expected = Fraction(tower.ell_norm) ** (tower.p - 1) * \
        Fraction(tower.p) ** (2 * (tower.p - 2))
    if det_t != expected:
        raise ConstructionError(
            "integral basis discriminant %s does not match the "
            "conductor-discriminant prediction %s" % (det_t, expected))
    # conjugation on integral coordinates
    conj_cols = [to_int_coords_raw(b_inv, tower.coords_of(e.conj()))
                 for e in basis]
    conj_int = linalg.transpose(conj_cols)
    conj_int = [[_expect_int(x) for x in row] for row in conj_int]
    # rational-basis data for the totally real subfield F
    qbasis = tower.basis_elements()
    qtrace = [[(qbasis[i] * qbasis[j]).trace_to_Q() for j in range(n)]
              for i in range(n)]
    fb = fields.f_fixed_basis(tower)
    fbt = linalg.transpose(fb)
    gram_f = linalg.mat_mul(fb, linalg.mat_mul(qtrace, fbt))
    f_pinv = linalg.mat_mul(
        linalg.invert(linalg.mat_mul(fb, fbt)), fb)
    return {
        "basis": basis,
        "b_mat": b_mat,
        "b_inv": b_inv,
        "trace_gram": tgram,
        "disc": det_t,
        "conj_int": conj_int,
        "f_basis": fb,
        "f_pinv": f_pinv,
        "f_t2gram": gram_f,
    }


def _expect_int(x):
    x = Fraction(x)
    if x.denominator != 1:
        raise ConstructionError("expected an integer, got %s" % x)
    return int(x)


def to_int_coords_raw(b_inv, qcoords):
    return linalg.mat_vec(b_inv, [Fraction(c) for c in qcoords])


def to_int_coords(tower, x):
    """Coordinates of x over the integral basis (rational)."""
    ctx = order_context(tower)
    return to_int_coords_raw(ctx["b_inv"], tower.coords_of(x))


def from_int_coords(tower, coords):
    ctx = order_context(tower)
    q = linalg.mat_vec(ctx["b_mat"], [Fraction(c) for c in coords])
    return tower.from_coords(q)


# ---------------------------------------------------------------------------
# fractional ideals


@dataclass(frozen=True)
class FracIdeal:
    """Fractional O_K-ideal: integer HNF basis rows over O_K, denominator."""

    tower: FieldTower
    rows: tuple
    den: int

    @classmethod
    def from_rational_rows(cls, tower, rat_rows, first_block_modulus=False):
        """Canonicalize a full set of generating rows (rational allowed).

        With `first_block_modulus` the first degK rows must be linearly
        independent; |det| of that block then bounds the row-span HNF
        (the span contains det * Z^n), taming coefficient growth.
        """
        n = tower.degK
        common = 1
        for row in rat_rows:
            for x in row:
                common = common * Fraction(x).denominator // gcd(
                    common, Fraction(x).denominator)
        int_rows = [[_expect_int(Fraction(x) * common) for x in row]
                    for row in rat_rows]
        modulus = None
        if first_block_modulus and len(int_rows) >= n:
            d = abs(linalg.det_exact([row[:] for row in int_rows[:n]]))
            if d != 0:
                modulus = int(d)
        basis = linalg.hnf_row_span(int_rows, n, modulus=modulus)
        if len(basis) != n:
            raise ValueError("generators do not span a full lattice")
        g = common
        for row in basis:
            for x in row:
                g = gcd(g, abs(x))
        basis = [[x // g for x in row] for row in basis]
        return cls(tower, tuple(tuple(r) for r in basis), common // g)

    @classmethod
    def maximal_order(cls, tower):
        order_context(tower)          # runs the discriminant verification
        n = tower.degK
        return cls(tower, tuple(tuple(1 if i == j else 0 for j in range(n))
                                for i in range(n)), 1)

    @classmethod
    def from_generators(cls, tower, gens):
        """O_K-module generated by the given field elements."""
        ctx = order_context(tower)
        rows = []
        for g in gens:
            if not isinstance(g, KElement):
                g = tower.rational(g)
            if g.is_zero():
                continue
            for e in ctx["basis"]:
                rows.append(to_int_coords(tower, g * e))
        if not rows:
            raise ValueError("zero ideal")
        return cls.from_rational_rows(tower, rows, first_block_modulus=True)

    @classmethod
    def principal(cls, tower, g):
        return cls.from_generators(tower, [g])

    # -- basic structure ------------------------------------------------------

    @property
    def dim(self):
        return self.tower.degK

    def elements(self):
        """The Z-basis as field elements."""
        return [from_int_coords(self.tower,
                                [Fraction(x, self.den) for x in row])
                for row in self.rows]

    def is_maximal_order(self):
        return self == FracIdeal.maximal_order(self.tower)

    def norm(self):
        """Ideal norm, normalized so that N(O_K) = 1."""
        d = linalg.det_exact([list(r) for r in self.rows])
        return abs(d) / Fraction(self.den) ** self.dim

    def contains(self, x):
        n = self.dim
        y = to_int_coords(self.tower, x)
        target = [Fraction(v) * self.den for v in y]
        rows_inv = linalg.invert([list(r) for r in self.rows])
        z = linalg.vec_mat(target, rows_inv)
        return all(c.denominator == 1 for c in z)

    def conj(self):
        ctx = order_context(self.tower)
        pt = linalg.transpose(ctx["conj_int"])
        new_rows = [[Fraction(x, self.den)
                     for x in linalg.vec_mat(list(r), pt)]
                    for r in self.rows]
        return FracIdeal.from_rational_rows(self.tower, new_rows)

    def __mul__(self, other):
        if not isinstance(other, FracIdeal):
            raise TypeError("can only multiply by another ideal")
        us = self.elements()
        vs = other.elements()
        rows = [to_int_coords(self.tower, u * v) for u in us for v in vs]
        return FracIdeal.from_rational_rows(self.tower, rows,
                                            first_block_modulus=True)

    def inverse(self):
        """{x : x * self subset O_K} via duality of the stacked
        multiplication-matrix row lattice."""
        t = self.tower
        n = self.dim
        ctx = order_context(t)
        stacked = []
        for v in self.elements():
            mv = v.mult_matrix()
            m_int = linalg.mat_mul(ctx["b_inv"],
                                   linalg.mat_mul(mv, ctx["b_mat"]))
            stacked.extend(m_int)
        common = 1
        for row in stacked:
            for x in row:
                common = common * x.denominator // gcd(common, x.denominator)
        int_rows = [[_expect_int(x * common) for x in row] for row in stacked]
        mod = abs(linalg.det_exact([row[:] for row in int_rows[:n]]))
        span = linalg.hnf_row_span(int_rows, n,
                                   modulus=int(mod) if mod else None)
        if len(span) != n:
            raise ValueError("zero ideal has no inverse")
        # row lattice of A has basis rows span/common; its dual has basis
        # rows transpose(inverse(span/common)) = common * transpose(span^{-1})
        span_inv = linalg.invert([list(r) for r in span])
        dual_rows = linalg.transpose(span_inv)
        dual_rows = [[x * common for x in row] for row in dual_rows]
        return FracIdeal.from_rational_rows(t, dual_rows)

    def closed_under_multipliers(self):
        """Check zeta * I and omega * I stay inside I (O_K-module test)."""
        t = self.tower
        for mult in (t.zeta(), t.omega()):
            for v in self.elements():
                if not self.contains(mult * v):
                    return False
        return True

    def __repr__(self):
        return "FracIdeal(den=%d, norm=%s)" % (self.den, self.norm())


def ideal_norm(ideal):
    return ideal.norm()


@lru_cache(maxsize=8)
def different_ideal(tower):
    """The different D_{K/Q}, computed as the inverse of the trace dual of
    O_K; conj-stable, with norm |disc K|."""
    ctx = order_context(tower)
    tinv = linalg.invert(ctx["trace_gram"])
    codifferent = FracIdeal.from_rational_rows(tower, tinv)
    d = codifferent.inverse()
    if d.norm() != abs(ctx["disc"]):
        raise ConstructionError("N(different) != |disc K|")
    return d


# ---------------------------------------------------------------------------
# conjugation-fixed sublattice of an ideal


def fixed_sublattice(ideal):
    """Z-basis (as field elements) of {x in ideal : conj(x) = x} along with
    the exact Gram of the trace form Tr_{K/Q}(x y) on that basis.

    Works in coordinates over a fixed Q-basis of F, where the sublattice
    has full rank p-1 and its HNF stays small (in ambient coordinates the
    rank-deficient HNF develops astronomically large free columns).  The
    lattice is built as the span of the relative traces v + conj(v) of the
    ideal basis, then saturated at 2: every fixed y has 2y in that span, so
    each missing generator appears as a GF(2) kernel vector of the span
    expressed in ideal coordinates.
    """
    t = ideal.tower
    ctx = order_context(t)
    n = ideal.dim
    rank = t.p - 1
    r = [list(row) for row in ideal.rows]
    r_inv = linalg.invert(r)
    fb = ctx["f_basis"]
    fbt = linalg.transpose(fb)
    f_pinv = ctx["f_pinv"]
    b_mat, b_inv = ctx["b_mat"], ctx["b_inv"]

    # F-coordinates of v_i + conj(v_i) for the ideal basis v_i
    fcoord_rows = []
    for v in ideal.elements():
        s = v + v.conj()
        fcoord_rows.append(linalg.mat_vec(f_pinv, t.coords_of(s)))
    den = 1
    for row in fcoord_rows:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    w = [[_expect_int(x * den) for x in row] for row in fcoord_rows]
    span = linalg.hnf_row_span(w, rank)
    if len(span) != rank:
        raise ConstructionError("fixed sublattice has unexpected rank %d"
                                % len(span))

    def ideal_coords(row, den):
        """Coordinates over the ideal basis of the element with scaled
        F-coordinates row/den; must be integral."""
        qc = [Fraction(sum(fbt[i][a] * row[a] for a in range(rank)), den)
              for i in range(n)]
        ic = linalg.mat_vec(b_inv, qc)
        z = linalg.vec_mat(ic, r_inv)
        out = []
        for v in z:
            v = Fraction(v) * ideal.den
            if v.denominator != 1:
                raise ConstructionError("fixed sublattice left the ideal")
            out.append(int(v))
        return out

    while True:
        zmat = [[zi & 1 for zi in ideal_coords(row, den)] for row in span]
        kernel = _gf2_left_kernel(zmat)
        if not kernel:
            break
        den *= 2
        new_rows = [[2 * x for x in row] for row in span]
        for c in kernel:
            new_rows.append([sum(ci * row[j] for ci, row in zip(c, span))
                             for j in range(rank)])
        span = linalg.hnf_row_span(new_rows, rank)
        if len(span) != rank:
            raise ConstructionError("saturation changed the rank")

    elems = []
    for row in span:
        qc = [Fraction(sum(fbt[i][a] * row[a] for a in range(rank)), den)
              for i in range(n)]
        elems.append(t.from_coords(qc))
    gf = ctx["f_t2gram"]
    gram = [[sum(span[i][a] * gf[a][b] * span[j][b]
                 for a in range(rank) for b in range(rank))
             / Fraction(den * den) for j in range(rank)] for i in range(rank)]
    # the HNF basis can be badly skewed; hand back an LLL-reduced basis
    g2, tmat = linalg.lll_reduce(GramForm.from_rows(gram))
    elems2 = []
    for a in range(rank):
        acc = t.zero()
        for i in range(rank):
            if tmat[i][a]:
                acc = acc + t.rational(tmat[i][a]) * elems[i]
        elems2.append(acc)
    return elems2, g2


def _gf2_left_kernel(zmat):
    """Left kernel over GF(2) of a 0/1 matrix given by rows."""
    k = len(zmat)
    n = len(zmat[0]) if k else 0
    aug = [list(row) + [1 if i == j else 0 for j in range(k)]
           for i, row in enumerate(zmat)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, k) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(k):
            if i != r and aug[i][c]:
                aug[i] = [a ^ b for a, b in zip(aug[i], aug[r])]
        r += 1
    out = []
    for i in range(r, k):
        if not any(aug[i][:n]):
            out.append(aug[i][n:])
    return out


# ---------------------------------------------------------------------------
# search configuration and result types


@dataclass
class SearchConfig:
    pool_norm: int = 200
    unit_range: int = 3
    max_ideals: int = 24
    max_generators: int = 200
    bound_steps: int = 14


@dataclass
class UnimodularPair:
    tower: FieldTower
    ideal: FracIdeal
    d: KElement
    search_log: dict


@dataclass
class TraceLattice:
    pair: UnimodularPair
    gram: GramForm

    @property
    def dim(self):
        return self.gram.dim


# ---------------------------------------------------------------------------
# candidate ideal pool


def _prime_ideals_above(tower, q):
    """Prime ideals above q by the Dedekind-Kummer criterion, or None when
    the criterion does not apply (q divides the index of the test element).

    Returns a list of (ideal, residue_degree) sorted by residue degree.
    """
    import sympy

    t = tower
    theta = t.omega() + t.zeta()
    mp = theta.minimal_polynomial()
    if len(mp) - 1 != t.degK:
        return None
    # index^2 = disc(minpoly) / disc(K)
    dpoly = _poly_disc(mp, theta)
    ctx = order_context(t)
    index_sq = dpoly / ctx["disc"]
    index_sq = abs(index_sq)
    if index_sq.denominator != 1:
        raise ConstructionError("index bookkeeping failed")
    if int(index_sq) % q == 0:
        return None
    x = sympy.symbols("x")
    poly = sympy.Poly([int(c) for c in reversed(mp)], x, modulus=q)
    factors = poly.factor_list()[1]
    out = []
    power_check = FracIdeal.maximal_order(t)
    for fac, mult in sorted(factors, key=lambda fm: (fm[0].degree(),
                                                     str(fm[0]))):
        coeffs = [Fraction(int(c)) for c in reversed(fac.all_coeffs())]
        gtheta = _eval_poly_at(t, coeffs, theta)
        ideal = FracIdeal.from_generators(t, [t.rational(q), gtheta])
        if ideal.norm() != Fraction(q) ** fac.degree():
            return None
        for _ in range(mult):
            power_check = power_check * ideal
        out.append((ideal, fac.degree()))
    if power_check != FracIdeal.principal(t, t.rational(q)):
        return None
    return out


def _eval_poly_at(tower, coeffs, x):
    acc = tower.zero()
    for c in reversed(coeffs):
        acc = acc * x + tower.rational(c)
    return acc


def _poly_disc(mp, theta):
    """Discriminant of the monic minimal polynomial via N(f'(theta))."""
    n = len(mp) - 1
    deriv = [i * mp[i] for i in range(1, len(mp))]
    value = _eval_poly_at(theta.tower, deriv, theta)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * value.norm_to_Q()


def candidate_ideals(tower, config, skipped=None):
    """Deterministic candidate pool: O_K first, then prime ideals of norm
    up to pool_norm (and pairwise products within the norm bound), in
    increasing norm.  Primes where the Dedekind criterion does not apply
    are appended to `skipped`."""
    yield "O_K", FracIdeal.maximal_order(tower)
    if config.pool_norm < 2:
        return
    primes = []
    q = 2
    while q <= config.pool_norm:
        if fields._is_prime(q):
            got = _prime_ideals_above(tower, q)
            if got is None:
                if skipped is not None:
                    skipped.append(q)
            else:
                for ideal, deg in got:
                    if Fraction(q) ** deg <= config.pool_norm:
                        primes.append((q ** deg, q, ideal))
        q += 1
    primes.sort(key=lambda item: (item[0], item[1]))
    seen = set()
    singles = []
    for normval, q, ideal in primes:
        if ideal.rows not in seen:
            seen.add(ideal.rows)
            singles.append((normval, ideal))
            yield "prime norm %d over %d" % (normval, q), ideal
    for i, (n1, p1) in enumerate(singles):
        for n2, p2 in singles[i:]:
            if n1 * n2 <= config.pool_norm:
                prod = p1 * p2
                if prod.rows not in seen:
                    seen.add(prod.rows)
                    yield "product norm %d" % (n1 * n2), prod


# ---------------------------------------------------------------------------
# sign repair over GF(2)


def _solve_gf2(columns, target):
    """Solve sum_j e_j col_j = target over GF(2); returns exponent list or
    None.  Deterministic Gaussian elimination."""
    if not any(target):
        return [0] * len(columns)
    rows = len(target)
    aug = [[col[i] & 1 for col in columns] + [target[i] & 1]
           for i in range(rows)]
    ncols = len(columns)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(rows):
            if i != r and aug[i][c]:
                aug[i] = [(a ^ b) for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if aug[i][ncols]:
            return None
    e = [0] * ncols
    for i, c in enumerate(pivots):
        e[c] = aug[i][ncols]
    return e


def _sign_vector(x):
    return [1 if s < 0 else 0 for s in fields.real_embedding_signs(x)]


# ---------------------------------------------------------------------------
# the search itself


def find_unimodular_pair(tower, config=None):
    """Find (A, d) with (d) A conj(A) D = O_K and d totally positive.

    The criterion is exactly the unimodularity of the twisted trace form on
    A; evenness then comes for free.  Raises SearchExhausted when the
    budget runs out.
    """
    config = config or SearchConfig()
    t = tower
    different = different_ideal(t)
    o_k = FracIdeal.maximal_order(t)
    units = fields.cyclotomic_units(t) if config.unit_range > 0 else []
    unit_signs = [_sign_vector(u) for u in units]
    minus_one = [1] * t.degK
    diag = {"ideals_tried": 0, "generators_checked": 0,
            "sign_solver_hits": 0, "skipped_primes": [],
            "bound_steps_used": 0}
    count = 0
    for label, cand in candidate_ideals(t, config, diag["skipped_primes"]):
        if count >= config.max_ideals:
            break
        count += 1
        diag["ideals_tried"] += 1
        c_ideal = (cand * cand.conj() * different).inverse()
        target_norm = c_ideal.norm()
        elems, gram = fixed_sublattice(c_ideal)
        rank = len(elems)
        # AM-GM floor for the trace form of a generator with the right norm
        float_target = float(target_norm)
        b0 = 2 * rank * max(float_target ** (1.0 / rank), 1e-300)
        bound = Fraction(b0 * 1.5).limit_denominator(10 ** 6)
        seen = set()
        for step in range(config.bound_steps):
            diag["bound_steps_used"] = max(diag["bound_steps_used"], step + 1)
            found_new = False
            for y in linalg.enumerate_short(gram, bound):
                if y in seen or tuple(-v for v in y) in seen:
                    continue
                seen.add(y)
                found_new = True
                if len(seen) > config.max_generators:
                    break
                g = t.zero()
                for yi, w in zip(y, elems):
                    if yi:
                        g = g + t.rational(yi) * w
                diag["generators_checked"] += 1
                if g.norm_to_Q() != target_norm:
                    continue
                gvec = _sign_vector(g)
                exps = _solve_gf2(unit_signs + [minus_one], gvec)
                if exps is None:
                    continue
                diag["sign_solver_hits"] += 1
                d = g
                for e, u in zip(exps[:len(units)], units):
                    if e:
                        d = d * u
                if exps[-1]:
                    d = -d
                if not fields.is_totally_positive(d):
                    raise ConstructionError(
                        "sign repair produced a non-totally-positive element")
                if verify_pair_criterion(t, cand, d, different):
                    log = {
                        "ideal_label": label,
                        "ideal_norm": str(cand.norm()),
                        "generator_coords": [int(v) for v in y],
                        "unit_exponents": exps,
                        "trace_bound": str(bound),
                        "pool_norm": config.pool_norm,
                        "unit_range": config.unit_range,
                        "ideals_tried": diag["ideals_tried"],
                        "generators_checked": diag["generators_checked"],
                    }
                    return UnimodularPair(t, cand, d, log)
            if len(seen) > config.max_generators:
                break
            bound *= 2 if found_new else 4
    raise SearchExhausted(
        "no unimodular pair within budget "
        "(pool_norm=%d, max_ideals=%d)" % (config.pool_norm,
                                           config.max_ideals), diag)


def verify_pair_criterion(tower, ideal, d, different=None):
    """Exact test of (d) * A * conj(A) * D == O_K."""
    different = different or different_ideal(tower)
    lhs = FracIdeal.principal(tower, d) * ideal * ideal.conj() * different
    return lhs == FracIdeal.maximal_order(tower)


# ---------------------------------------------------------------------------
# the integral trace lattice


def trace_gram(pair):
    """Integer Gram of b_d(x, y) = Tr_{K/Q}(d x conj(y)) on the ideal basis."""
    t = pair.tower
    vs = pair.ideal.elements()
    conjs = [v.conj() for v in vs]
    dvs = [pair.d * v for v in vs]
    n = len(vs)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            val = (dvs[i] * conjs[j]).trace_to_Q()
            if val.denominator != 1:
                raise ConstructionError(
                    "trace form is not integral on the ideal; "
                    "the pair fails its criterion")
            row.append(int(val))
        rows.append(row)
    return TraceLattice(pair, GramForm.from_rows(rows))


def verify_even_unimodular(lat):
    """The five even-unimodularity checks, reported individually."""
    g = lat.gram
    report = {}
    report["integral"] = g.is_integral()
    report["even_diagonal"] = all(g.g[i][i] % 2 == 0 for i in range(g.dim))
    report["determinant_one"] = (g.det() == 1)
    report["positive_definite"] = g.is_positive_definite()
    report["dimension_multiple_of_8"] = (g.dim % 8 == 0)
    report["all_pass"] = all(report.values())
    report["dim"] = g.dim
    return report
