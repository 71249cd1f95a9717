"""Growth certificates for kernel-functor cohomology.

Two families of module-valued functors built from the kernel of
multiplication by a single ring element are profiled here, with exact
linear algebra certifying how their minimal-generator counts grow:

* cohen_h1: the degree-0 quotient attached to multiplication by
  sx - ty on projective 3-space over B = F_p[s,t]/(s^k, t^k).  The
  classical generator description for the annihilator of sx - ty is
  verified per multidegree (ann_lemma_check), and the generator count
  of the quotient is computed two independent ways.  The two paths
  agree for k <= 5 and then split: the advertised generating set
  satisfies the syzygies s*g_r = y*g_{r-1} and t*g_r = x*g_{r-1}
  (the overflow term carries s^k resp. t^k and dies), so every layer
  below the top one is redundant modulo (s, t).  Both counts are
  reported; the direct linear-algebra count is the arbiter.  Either
  count grows like k^3, which is what the growth profile needs.

* tensor_mc_mu: the tensor square of Ann(s) evaluated on F_p[s,t,u]
  truncated in degree n; its generator count is the square of the
  triangular number n(n+1)/2.

growth_report fits least admissible constants mu_n <= c * n^e over the
sampled range for e near a target degree d and flags profiles whose
ratio mu_n / n^d still climbs at the end of the sample.  Nothing is
asserted beyond the sampled range.

All arithmetic is exact over F_p; no randomness.
"""

from fractions import Fraction
from math import comb

from .algebras import make_test_algebra
from .evaluation import eval_presentation, eval_tensor, eval_tensor_fp
from .functors import ann_of, normalize
from .linalg import fp_nullspace, fp_rank
from .rings import Fp, is_prime, poly_ring

K_CAP = 12          # window sizes grow quartically in k
TENSOR_CAP = 10     # tensor-square evaluation is the expensive route

__all__ = [
    "ann_lemma_check",
    "cohen_h1",
    "tensor_mc_mu",
    "growth_report",
    "claimed_generator_texts",
]


def _require_prime(p):
    if not is_prime(p):
        raise ValueError("p must be prime, got %r" % (p,))


def _require_k(k):
    if not isinstance(k, int) or not 1 <= k <= K_CAP:
        raise ValueError("k must be an integer in 1..%d, got %r"
                         % (K_CAP, k))


# ---------------------------------------------------------------------------
# the claimed annihilator generators over F_p[s,t,x,y]/(s^k, t^k)
# ---------------------------------------------------------------------------
#
# g_r = (st)^(k-1-r) * sum_{q=0..r} (sx)^q (ty)^(r-q),  r = 0 .. k-1.
#
# Ring elements are dicts {(i, j, a, b): coeff} for s^i t^j x^a y^b
# with i, j < k; monomials that overflow the truncation are dropped on
# the spot.

def _gen_exponents(k, r):
    return [(k - 1 - r + q, k - 1 - q, q, r - q) for q in range(r, -1, -1)]


def _gen_poly(k, r):
    return {e: 1 for e in _gen_exponents(k, r)}


def _mono_shift(k, p, poly, ds, dt, dx, dy):
    out = {}
    for (i, j, a, b), c in poly.items():
        if i + ds >= k or j + dt >= k:
            continue
        out[(i + ds, j + dt, a + dx, b + dy)] = c % p
    return out


def _mono_text(i, j, a, b):
    parts = []
    for name, e in (("s", i), ("t", j), ("x", a), ("y", b)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"


def _denom_text(a, b, c, d):
    parts = []
    for name, e in (("x", a), ("y", b), ("z", c), ("w", d)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"


def _gen_text(k, r):
    return " + ".join(_mono_text(*e) for e in _gen_exponents(k, r))


def claimed_generator_texts(k):
    """The k claimed annihilator generators, lowest layer first.

    >>> claimed_generator_texts(2)
    ['s*t', 's*x + t*y']
    >>> claimed_generator_texts(1)
    ['1']
    """
    _require_k(k)
    return [_gen_text(k, r) for r in range(k)]


def _syzygy_check(k, p):
    """Machine check that s*g_r = y*g_{r-1} and t*g_r = x*g_{r-1}.

    This is what makes every layer below the top one redundant modulo
    (s, t): the overflow term of g_r picks up s^k resp. t^k under the
    shift and dies.  Returns per-r results; all True for every k, p.
    """
    rows = []
    for r in range(1, k):
        ok_s = (_mono_shift(k, p, _gen_poly(k, r), 1, 0, 0, 0)
                == _mono_shift(k, p, _gen_poly(k, r - 1), 0, 0, 0, 1))
        ok_t = (_mono_shift(k, p, _gen_poly(k, r), 0, 1, 0, 0)
                == _mono_shift(k, p, _gen_poly(k, r - 1), 0, 0, 1, 0))
        rows.append((r, ok_s, ok_t))
    return rows


# ---------------------------------------------------------------------------
# annihilator lemma, checked per multidegree
# ---------------------------------------------------------------------------
#
# Multiplication by sx - ty is homogeneous for the bigrading
# (deg_s + deg_y, deg_t + deg_x): both sx and ty raise each component
# by one.  A bigraded piece (u, v) of F_p[s,t,x,y]/(s^k,t^k) is finite
# dimensional with basis s^i t^j x^(v-j) y^(u-i), indexed by the pairs
# (i, j) with 0 <= i <= min(k-1, u) and 0 <= j <= min(k-1, v).

def _piece_basis(k, u, v):
    return [(i, j)
            for i in range(min(k - 1, u) + 1)
            for j in range(min(k - 1, v) + 1)]


def _piece_matrix(k, p, u, v):
    """Multiplication by sx - ty from piece (u, v) to piece (u+1, v+1)."""
    src = _piece_basis(k, u, v)
    tgt = _piece_basis(k, u + 1, v + 1)
    index = {e: n for n, e in enumerate(tgt)}
    mat = [[0] * len(src) for _ in tgt]
    for col, (i, j) in enumerate(src):
        if i + 1 < k:
            mat[index[(i + 1, j)]][col] = 1
        if j + 1 < k:
            mat[index[(i, j + 1)]][col] = (-1) % p
    return mat, src


def _span_vectors(k, p, u, v, r_max=None):
    """Monomial multiples of the first r_max claimed generators that
    land in piece (u, v).

    Each generator is bihomogeneous of degree (k-1, k-1), so the
    multiplier s^a t^b x^alpha y^beta must satisfy a + beta = u-(k-1)
    and b + alpha = v-(k-1); the x, y exponents are then determined by
    the choice of a and b.
    """
    if u < k - 1 or v < k - 1:
        return []
    if r_max is None:
        r_max = k
    src = _piece_basis(k, u, v)
    index = {e: n for n, e in enumerate(src)}
    out = []
    for r in range(r_max):
        exps = _gen_exponents(k, r)
        for a in range(u - k + 2):
            for b in range(v - k + 2):
                vec = [0] * len(src)
                hit = False
                for (i, j, _, _) in exps:
                    if i + a < k and j + b < k:
                        vec[index[(i + a, j + b)]] = 1 % p
                        hit = True
                if hit:
                    out.append(vec)
    return out


def _piece_text(basis, vec, u, v, p):
    terms = []
    for (i, j), c in zip(basis, vec):
        c %= p
        if not c:
            continue
        mono = _mono_text(i, j, v - j, u - i)
        terms.append(mono if c == 1 else "%d*%s" % (c, mono))
    return " + ".join(terms) if terms else "0"


def _missing_kernel_vector(p, span, kernel):
    base_rank = fp_rank(p, span) if span else 0
    for vec in kernel:
        if fp_rank(p, span + [vec]) > base_rank:
            return vec
    raise AssertionError("dimension mismatch without a witness vector")


def _ann_core(k, p, degree_bound, r_max):
    """Span-vs-kernel sweep; r_max < k trims the generator list (the
    hook the sabotage tests use)."""
    checked = 0
    nonzero = 0
    max_dim = 0
    for u in range(degree_bound + 1):
        for v in range(degree_bound + 1):
            checked += 1
            mat, basis = _piece_matrix(k, p, u, v)
            kernel = fp_nullspace(p, mat) if mat else []
            span = _span_vectors(k, p, u, v, r_max)
            # containment is one-sided by construction; verify anyway
            for vec in span:
                img = [sum(row[c] * vec[c] for c in range(len(vec))) % p
                       for row in mat]
                if any(img):
                    return {"verdict": "FAIL",
                            "witness": {
                                "kind": "claimed element outside the "
                                        "annihilator",
                                "multidegree": (u, v),
                                "element": _piece_text(basis, vec, u, v, p)},
                            "checked_multidegrees": checked}
            dim_kernel = len(kernel)
            dim_span = fp_rank(p, span) if span else 0
            max_dim = max(max_dim, dim_kernel)
            if dim_kernel or dim_span:
                nonzero += 1
            if dim_span != dim_kernel:
                witness_vec = _missing_kernel_vector(p, span, kernel)
                return {"verdict": "FAIL",
                        "witness": {
                            "kind": "annihilator element outside the "
                                    "claimed span",
                            "multidegree": (u, v),
                            "dim_annihilator": dim_kernel,
                            "dim_claimed_span": dim_span,
                            "element": _piece_text(basis, witness_vec,
                                                   u, v, p)},
                        "checked_multidegrees": checked}
    return {"verdict": "PASS", "witness": None,
            "checked_multidegrees": checked,
            "nonzero_multidegrees": nonzero,
            "max_annihilator_dim": max_dim}


def ann_lemma_check(k, p, degree_bound=None):
    """Verify the claimed generators span the exact annihilator of sx - ty.

    Works in F_p[s,t,x,y]/(s^k, t^k); z and w are flat spectators and
    contribute nothing to the annihilator, so they are omitted.  Every
    bigraded piece with both degrees <= degree_bound (default 2k) is
    compared: the F_p-span of all monomial multiples of the claimed
    generators against the kernel of multiplication by sx - ty.

    >>> ann_lemma_check(2, 2)["verdict"]
    'PASS'
    >>> ann_lemma_check(1, 5)["verdict"]
    'PASS'
    """
    _require_prime(p)
    _require_k(k)
    if degree_bound is None:
        degree_bound = 2 * k
    if degree_bound < 0:
        raise ValueError("degree bound must be >= 0")
    if (degree_bound + 1) ** 2 * k ** 4 > 30_000_000:
        raise ValueError(
            "degree bound %d is infeasible for k = %d: the check walks "
            "(bound+1)^2 bigraded pieces of dimension up to k^2"
            % (degree_bound, k))
    report = _ann_core(k, p, degree_bound, None)
    report.update({"k": k, "p": p, "degree_bound": degree_bound,
                   "generators": claimed_generator_texts(k)})
    return report


# ---------------------------------------------------------------------------
# the degree-0 quotient on projective 3-space
# ---------------------------------------------------------------------------
#
# Ambient: Laurent monomials s^i t^j x^A y^B z^C w^D with i, j < k.
# The grading (g1, g2, gz, gw) = (i+B, j+A, C, D) is preserved by
# multiplication with sx - ty up to the uniform shift (1, 1, 0, 0).
# Inside one graded block the total x..w degree pins i + j, so the
# block's degree-0 part has basis indexed by the anti-diagonal
# i + j = g1 + g2 + gz + gw, clipped to the square [0, k-1]^2.
#
# The quotient is (degree-0 annihilator elements) modulo the images of
# the four localizations that omit one variable from the denominator.
# A denominator in three variables absorbs any negative exponent of
# those three, so each family's image inside a block is cut out by the
# sign of the missing variable's exponent alone:
#
#   no x in the denominator  ->  support restricted to  j <= g2
#   no y                     ->  support restricted to  i <= g1
#   no z                     ->  all of the block, but only when gz >= 0
#   no w                     ->  all of the block, but only when gw >= 0

def _anti_diag(k, sigma):
    if sigma < 0 or sigma > 2 * k - 2:
        return []
    return [(i, sigma - i)
            for i in range(max(0, sigma - k + 1), min(k - 1, sigma) + 1)]


def _diag_matrix(k, p, sigma):
    """Multiplication by sx - ty from anti-diagonal sigma to sigma + 1."""
    src = _anti_diag(k, sigma)
    tgt = _anti_diag(k, sigma + 1)
    index = {e: n for n, e in enumerate(tgt)}
    mat = [[0] * len(src) for _ in tgt]
    for col, (i, j) in enumerate(src):
        if i + 1 < k:
            mat[index[(i + 1, j)]][col] = 1
        if j + 1 < k:
            mat[index[(i, j + 1)]][col] = (-1) % p
    return mat, src, tgt


class _BlockCalc:
    """Per-block kernels and cover spaces for one (k, p)."""

    def __init__(self, k, p):
        self.k = k
        self.p = p
        self._diag = {}

    def diag(self, sigma):
        if sigma not in self._diag:
            self._diag[sigma] = _diag_matrix(self.k, self.p, sigma)
        return self._diag[sigma]

    def kernel(self, sigma):
        mat, src, _ = self.diag(sigma)
        if not src:
            return [], src
        if not mat:
            # empty target: everything annihilates
            return [[1 if c == n else 0 for c in range(len(src))]
                    for n in range(len(src))], src
        return fp_nullspace(self.p, mat), src

    def restricted_kernel(self, sigma, allowed):
        """Annihilator vectors supported on the allowed index set."""
        mat, src, _ = self.diag(sigma)
        cols = [n for n, e in enumerate(src) if e in allowed]
        if not cols:
            return []
        sub = [[row[c] for c in cols] for row in mat]
        if not sub:
            small = [[1 if c == n else 0 for c in range(len(cols))]
                     for n in range(len(cols))]
        else:
            small = fp_nullspace(self.p, sub)
        out = []
        for v in small:
            full = [0] * len(src)
            for c, val in zip(cols, v):
                full[c] = val
            out.append(full)
        return out

    def contribution(self, block):
        """Dimension of the block's slice of quotient / (s,t)*quotient."""
        k, p = self.k, self.p
        g1, g2, gz, gw = block
        sigma = g1 + g2 + gz + gw
        kernel, src = self.kernel(sigma)
        if not kernel:
            return 0
        index = {e: n for n, e in enumerate(src)}
        cover = []
        # localization families (see the block comment above)
        cover += self.restricted_kernel(
            sigma, {(i, j) for (i, j) in src if j <= g2})
        cover += self.restricted_kernel(
            sigma, {(i, j) for (i, j) in src if i <= g1})
        if gz >= 0 or gw >= 0:
            cover += kernel
        # (s, t) times the two neighbor blocks
        prev, src_prev = self.kernel(sigma - 1)
        for di, dj in ((1, 0), (0, 1)):
            for v in prev:
                out = [0] * len(src)
                hit = False
                for (i, j), val in zip(src_prev, v):
                    if val and i + di < k and j + dj < k:
                        out[index[(i + di, j + dj)]] = val
                        hit = True
                if hit:
                    cover.append(out)
        # every cover vector must itself annihilate sx - ty
        mat, _, _ = self.diag(sigma)
        for v in cover:
            img = [sum(row[c] * v[c] for c in range(len(v))) % p
                   for row in mat]
            assert not any(img), "cover vector escapes the annihilator"
        dim_all = len(kernel)
        dim_cov = fp_rank(p, cover) if cover else 0
        return dim_all - dim_cov


def _direct_mu(k, p):
    """Window sweep: sum of per-block contributions, with the boundary
    shell required to vanish (grow the pad until it does)."""
    calc = _BlockCalc(k, p)
    boundary_bad = None
    for pad in range(1, 5):
        lo_g, hi_g = 3 - pad, (k - 2) + pad
        lo_n, hi_n = (4 - k) - pad, -1 + pad
        blocks = 0
        total = 0
        survivors = []
        boundary_bad = None
        for g1 in range(lo_g, hi_g + 1):
            for g2 in range(lo_g, hi_g + 1):
                for gz in range(lo_n, hi_n + 1):
                    for gw in range(lo_n, hi_n + 1):
                        blocks += 1
                        c = calc.contribution((g1, g2, gz, gw))
                        if not c:
                            continue
                        if (g1 in (lo_g, hi_g) or g2 in (lo_g, hi_g)
                                or gz in (lo_n, hi_n) or gw in (lo_n, hi_n)):
                            boundary_bad = (g1, g2, gz, gw)
                        total += c
                        survivors.append(((g1, g2, gz, gw), c))
        if boundary_bad is None:
            return total, survivors, {"pad": pad, "blocks": blocks,
                                      "boundary_zero": True}
    raise AssertionError(
        "window growth exhausted at pad 4; nonzero boundary block %r"
        % (boundary_bad,))


def cohen_h1(k, p):
    """Generator count of the degree-0 quotient, computed two ways.

    The formula path evaluates the advertised count
    sum_{j=5..k} C(j-2, 3); the direct path runs exact per-block
    linear algebra and counts generators via Nakayama over the local
    coefficient ring.  The two agree for k <= 5 and differ from k = 6
    on, because the advertised generating set is redundant: the
    syzygies s*g_r = y*g_{r-1} and t*g_r = x*g_{r-1} (machine-checked
    here) put every layer below the top one inside (s, t) times the
    module.  The direct count is the arbiter; it equals C(k-2, 3).

    >>> cohen_h1(5, 2)["mu"]
    1
    >>> cohen_h1(4, 3)["paths_agree"]
    True
    """
    _require_prime(p)
    _require_k(k)
    mu_formula = sum(comb(j - 2, 3) for j in range(5, k + 1))
    mu_direct, survivors, window = _direct_mu(k, p)
    gens = []
    for (g1, g2, gz, gw), c in sorted(survivors):
        denom = _denom_text(k - 1 - g2, k - 1 - g1, -gz, -gw)
        gens.extend(["(%s) / (%s)" % (_gen_text(k, k - 1), denom)] * c)
    syz = _syzygy_check(k, p)
    return {
        "k": k,
        "p": p,
        "mu": mu_direct,
        "mu_direct": mu_direct,
        "mu_paper_formula": mu_formula,
        "paths_agree": mu_formula == mu_direct,
        "generators": gens,
        "survivor_blocks": [blk for blk, _ in sorted(survivors)],
        "formula_layers": {j: comb(j - 2, 3) for j in range(5, k + 1)},
        "syzygy_check": {
            "verified": all(s and t for _, s, t in syz),
            "pairs": len(syz),
            "statement": "s*g_r = y*g_{r-1} and t*g_r = x*g_{r-1} for "
                         "r = 1..k-1, so layers below the top one are "
                         "redundant modulo (s, t)",
        },
        "window": window,
    }


# ---------------------------------------------------------------------------
# tensor square of Ann(s) on truncations of F_p[s,t,u]
# ---------------------------------------------------------------------------

def tensor_mc_mu(n, p):
    """mu of Ann(s) (x) Ann(s) on F_p[s,t,u] truncated in degree n.

    Ann(s) evaluates to the span of the top-degree monomials, a
    triangular-number count; the tensor square therefore needs that
    count squared.  The evaluation route and the per-factor route are
    both computed and compared against [n(n+1)/2]^2.  Evaluation runs
    over F_p (the truncation has characteristic p, so the integer
    quotient is a mod-p quotient); for n <= 3 the integer-lattice route
    is recomputed and must agree.

    >>> tensor_mc_mu(2, 2)["mu"]
    9
    >>> tensor_mc_mu(1, 3)["agree"]
    True
    """
    _require_prime(p)
    if not isinstance(n, int) or not 1 <= n <= TENSOR_CAP:
        raise ValueError("n must be an integer in 1..%d, got %r"
                         % (TENSOR_CAP, n))
    base = poly_ring(Fp(p), "s", "t", "u")
    pres = normalize(ann_of(base, [base.var_elt("s")])).pres
    algebra = make_test_algebra(Fp(p), ("s", "t", "u"), trunc=n,
                                label="F%d[s,t,u]/(deg>=%d)" % (p, n))
    _, report = eval_tensor_fp(pres, pres, algebra)
    lattice_checked = n <= 3
    if lattice_checked:
        _, zrep = eval_tensor(pres, pres, algebra)
        assert (zrep["mu"] == report["mu"]
                and tuple(zrep["mu_factors"]) == tuple(report["mu_factors"])
                and sorted(zrep["invariants"]) == sorted(report["invariants"])
                ), "mod-p tensor disagrees with the integer lattice"
    factor_formula = n * (n + 1) // 2
    formula = factor_formula ** 2
    factors = tuple(report["mu_factors"])
    return {
        "n": n,
        "p": p,
        "mu": report["mu"],
        "mu_formula": formula,
        "mu_factor": factors[0],
        "mu_factor_formula": factor_formula,
        "mu_product_ok": report["mu_product_ok"],
        "lattice_checked": lattice_checked,
        "agree": (report["mu"] == formula
                  and report["mu_product_ok"]
                  and factors == (factor_formula, factor_formula)),
    }


# ---------------------------------------------------------------------------
# growth profiles and fits
# ---------------------------------------------------------------------------

_GROWTH_CAPS = {"cohen": K_CAP, "tensor": 8, "library": 16}


def _growth_samples(source, n_max, p):
    if source == "cohen":
        return {k: cohen_h1(k, p)["mu_direct"] for k in range(4, n_max + 1)}
    if source == "tensor":
        return {n: tensor_mc_mu(n, p)["mu"] for n in range(1, n_max + 1)}
    # library: the level-1 kernel functor Ann(s) over F_p[s,t]
    base = poly_ring(Fp(p), "s", "t")
    pres = normalize(ann_of(base, [base.var_elt("s")])).pres
    out = {}
    for n in range(1, n_max + 1):
        algebra = make_test_algebra(Fp(p), ("s", "t"), trunc=n,
                                    label="F%d[s,t]/(deg>=%d)" % (p, n))
        out[n] = eval_presentation(pres, algebra).mu()
    return out


def growth_report(source, n_max, d, p=2):
    """Exact growth fits for one of the three profiled sources.

    source: "cohen", "tensor", or "library" (the library-built Ann(s)
    kernel functor over F_p[s,t]).  For exponents d-1 .. d+2 the least
    admissible constant c with mu_n <= c * n^e over the sample is
    reported as an exact Fraction.  The profile is flagged when at
    least four points were sampled and the last four ratios mu_n / n^d
    strictly increase; the flag speaks about the sampled range only.

    >>> growth_report("library", 6, 2)["flagged"]
    False
    >>> growth_report("tensor", 4, 3)["flagged"]
    True
    """
    if source not in _GROWTH_CAPS:
        raise ValueError("unknown source %r; expected cohen, tensor, "
                         "or library" % (source,))
    _require_prime(p)
    cap = _GROWTH_CAPS[source]
    if not isinstance(n_max, int) or not 1 <= n_max <= cap:
        raise ValueError("n_max for source %r must be in 1..%d, got %r"
                         % (source, cap, n_max))
    if d < 1:
        raise ValueError("degree d must be >= 1")
    profile = _growth_samples(source, n_max, p)
    if not profile:
        raise ValueError("empty sample: source %r starts above n_max %d"
                         % (source, n_max))
    ns = sorted(profile)
    fits = []
    for e in range(d - 1, d + 3):
        if e < 1:
            continue
        c = max(Fraction(profile[n], n ** e) for n in ns)
        fits.append({"exponent": e, "c": c, "c_text": str(c)})
    ratios = [Fraction(profile[n], n ** d) for n in ns]
    flagged = len(ratios) >= 4 and all(
        ratios[i] < ratios[i + 1]
        for i in range(len(ratios) - 4, len(ratios) - 1))
    tail_from = None
    for start in range(len(ratios) - 1):
        if all(ratios[i] < ratios[i + 1]
               for i in range(start, len(ratios) - 1)):
            tail_from = ns[start]
            break
    return {
        "source": source,
        "degree": d,
        "p": p,
        "n_range": (ns[0], ns[-1]),
        "profile": profile,
        "fits": fits,
        "flagged": flagged,
        "increasing_tail_from": tail_from,
        "scope": "sampled range only; nothing is asserted beyond n = %d"
                 % ns[-1],
    }
