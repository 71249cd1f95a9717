"""Seeded random expression trees and the aggregated smoke suites.

The generator draws trees whose morphism squares commute by construction:
zero squares between any two nodes, scalar multiples of the identity on a
node and itself, and arbitrary maps out of a relation-free source into a
node whose normalized target has no generators (both composites are then
maps to zero).  Every draw therefore normalizes without rejection
sampling, and the checks stay checks: set-level agreement between the
normalized presentation and the direct tree evaluation, and surjectivity
of the linear-representation cover, are verified at every battery
algebra, never assumed.

Suite reports carry no wall-clock fields, so a fixed seed reproduces the
whole report byte for byte.
"""

import random

from .algebras import battery, make_test_algebra
from .counterexamples import (ann_lemma_check, cohen_h1, growth_report,
                              tensor_mc_mu)
from .evaluation import (action_matrix, apply_int_matrix,
                         check_finite_products, compare_normalization,
                         eval_presentation, flatness_equalizer_witness)
from .functors import (ann_of, cokernel_of, dominate_linear, equalizer,
                       image_of, kernel_of, kernel_pair, limit_of,
                       normalize, product, strict, tensor_module_expr)
from .modules import FPModule, ModuleMap
from .picard import conductor_chain, parse_subring, reproduce_table
from .rings import Fp, ZZ, parse_ring
from .witt import verify_eta, witt_algebra, witt_laws

SUITE_VERSION = 1


# ---------------------------------------------------------------------------
# random tree generator
# ---------------------------------------------------------------------------

class _Draw:
    """A drawn expression with its normalization and weight bookkeeping.

    out_w is the generator count of the normalized source: |F(B)| is at
    most |B|^out_w, and the lattice ambient at B is out_w * rank(B).
    peak_w is the maximum out_w over all nodes of the tree, which bounds
    the largest enumeration the direct tree evaluation performs.
    """

    __slots__ = ("expr", "norm", "out_w", "peak_w")

    def __init__(self, expr, norm, out_w, peak_w):
        self.expr = expr
        self.norm = norm
        self.out_w = out_w
        self.peak_w = peak_w


class _Overweight(Exception):
    pass


def _wrap(expr, *children):
    norm = normalize(expr)
    out_w = norm.pres.source.gens
    peak = out_w
    for c in children:
        peak = max(peak, c.peak_w)
    return _Draw(expr, norm, out_w, peak)


def _rand_elt(rng, base):
    return base.from_int(rng.randint(-3, 3))


def _rand_matrix(rng, base, rows, cols):
    return [[_rand_elt(rng, base) for _ in range(cols)] for _ in range(rows)]


def _zero_matrix(base, rows, cols):
    return [[base.zero() for _ in range(cols)] for _ in range(rows)]


def _rand_module(rng, base, max_gens=2, max_rels=2):
    gens = rng.randint(1, max_gens)
    rels = rng.randint(0, max_rels)
    return FPModule(base, gens, _rand_matrix(rng, base, gens, rels))


def _leaf(rng, base, w_cap):
    style = rng.choice(("strict", "kernel_pair", "ann"))
    g_cap = max(1, min(2, w_cap))
    if style == "strict":
        expr = strict(_rand_module(rng, base, max_gens=g_cap))
    elif style == "kernel_pair":
        src = FPModule.free(base, rng.randint(1, g_cap))
        tgt = _rand_module(rng, base, max_gens=2)
        fmap = ModuleMap(src, tgt, _rand_matrix(rng, base, tgt.gens, src.gens))
        expr = kernel_pair(fmap)
    else:
        elems = [_rand_elt(rng, base) for _ in range(rng.randint(1, 2))]
        if all(base.is_zero(e) for e in elems):
            elems[0] = base.from_int(2)
        expr = ann_of(base, elems)
    return _wrap(expr)


def _square(rng, base, child, other):
    """(phi, psi) for a morphism square child -> other, commuting by
    construction.  Zero squares always work; scalar multiples of the
    identity need other to be the same draw; an arbitrary phi needs a
    relation-free child source and a generator-free other target (then
    psi is the empty map and both composites are zero)."""
    styles = ["zero"]
    if other is child:
        styles += ["scalar", "scalar"]
    if (child.norm.pres.source.rels == 0
            and other.norm.pres.target.gens == 0):
        styles += ["free", "free"]
    style = rng.choice(styles)
    cs, ct = child.norm.pres.source, child.norm.pres.target
    os_, ot = other.norm.pres.source, other.norm.pres.target
    if style == "zero":
        return (_zero_matrix(base, os_.gens, cs.gens),
                _zero_matrix(base, ot.gens, ct.gens))
    if style == "scalar":
        c = base.from_int(rng.randint(0, 3))
        phi = [[c if i == j else base.zero() for j in range(cs.gens)]
               for i in range(cs.gens)]
        psi = [[c if i == j else base.zero() for j in range(ct.gens)]
               for i in range(ct.gens)]
        return phi, psi
    return (_rand_matrix(rng, base, os_.gens, cs.gens),
            _zero_matrix(base, 0, ct.gens))


def _pick_other(rng, base, child, depth, w_cap):
    r = rng.random()
    if r < 0.45:
        return child
    if r < 0.85 or depth <= 0:
        return _leaf(rng, base, w_cap)
    return _draw_tree(rng, base, depth, w_cap)


_KINDS = ("Product", "LimitOf", "Equalizer", "KernelOfMorphism",
          "CokernelOfMorphism", "ImageOfMorphism", "TensorModule")


def _combine(rng, base, kind, depth, w_cap):
    sub = lambda: _draw_tree(rng, base, rng.randint(0, depth - 1), w_cap)
    child = sub()

    if kind == "Product":
        kids = [child] + [sub() for _ in range(rng.randint(1, 2))]
        if sum(k.out_w for k in kids) > w_cap:
            raise _Overweight
        return _wrap(product([k.expr for k in kids]), *kids)

    if kind == "LimitOf":
        kids = [child] + [sub() for _ in range(rng.randint(1, 2))]
        if sum(k.out_w for k in kids) > w_cap:
            raise _Overweight
        arrows = []
        for _ in range(rng.randint(1, 2)):
            i = rng.randrange(len(kids))
            j = rng.randrange(len(kids))
            phi, psi = _square(rng, base, kids[i], kids[j])
            arrows.append((i, j, phi, psi))
        return _wrap(limit_of([k.expr for k in kids], arrows), *kids)

    if kind == "TensorModule":
        g_cap = 1 if 2 * child.out_w > w_cap else 2
        module = _rand_module(rng, base, max_gens=g_cap)
        if child.out_w * module.gens > w_cap:
            raise _Overweight
        return _wrap(tensor_module_expr(child.expr, module), child)

    other = _pick_other(rng, base, child, depth - 1, w_cap)
    if kind == "Equalizer":
        phi1, psi1 = _square(rng, base, child, other)
        phi2, psi2 = _square(rng, base, child, other)
        expr = equalizer(child.expr, other.expr, phi1, psi1, phi2, psi2)
        return _wrap(expr, child, other)
    phi, psi = _square(rng, base, child, other)
    if kind == "KernelOfMorphism":
        return _wrap(kernel_of(child.expr, other.expr, phi, psi),
                     child, other)
    if kind == "CokernelOfMorphism":
        if child.out_w + other.out_w > w_cap:
            raise _Overweight
        return _wrap(cokernel_of(child.expr, other.expr, phi, psi),
                     child, other)
    if kind == "ImageOfMorphism":
        return _wrap(image_of(child.expr, other.expr, phi, psi),
                     child, other)
    raise AssertionError(kind)


def _draw_tree(rng, base, depth, w_cap, root_kind=None):
    if depth <= 0 and root_kind is None:
        return _leaf(rng, base, w_cap)
    for _ in range(24):
        kind = root_kind or rng.choice(_KINDS)
        try:
            d = _combine(rng, base, kind, max(depth, 1), w_cap)
        except _Overweight:
            continue
        if d.peak_w <= w_cap:
            return d
    return _leaf(rng, base, w_cap)


def random_tree(rng, base, depth=3, w_cap=4, root_kind=None):
    """One random expression tree of depth at most `depth`, every node's
    normalized source kept at or below w_cap generators."""
    return _draw_tree(rng, base, depth, w_cap, root_kind=root_kind)


# ---------------------------------------------------------------------------
# per-tree checks
# ---------------------------------------------------------------------------

def check_linear_domination(pres, b, cap=100000):
    """Surjectivity of the linear-representation cover R -> F at B.

    Returns {"ok", "size", "cover_size"}, or None when either side's
    enumeration exceeds the cap."""
    rep = dominate_linear(pres)
    lin = rep.presentation()
    try:
        ev_f = eval_presentation(pres, b)
        ev_r = eval_presentation(lin, b)
        want = {tuple(ev_f.canon(v)) for v in ev_f.elements(cap)}
        cover = ev_r.elements(cap)
    except ValueError:
        return None
    mat = action_matrix(pres.base, rep.epi_matrix, b,
                        lin.source.gens, pres.source.gens)
    hit = {tuple(ev_f.canon(apply_int_matrix(mat, v))) for v in cover}
    return {"ok": hit == want, "size": len(want), "cover_size": len(cover)}


def _weight_cap(batt, elem_cap):
    biggest = max(b.size() for b in batt)
    w = 1
    while biggest ** (w + 1) <= elem_cap:
        w += 1
    return w


def run_tree_suite(seed, count_per_base=50, depth=3, bases=("Z", "Z/12"),
                   elem_cap=40000, enum_cap=100000, dominate=True):
    """Draw seeded trees over each base and verify, at every battery
    algebra: the normalized presentation evaluates to the same element set
    as the direct tree construction, and the linear cover is onto.

    The first len(_KINDS) draws per base force each combinator to appear
    as a root at least once; the rest are unconstrained.
    """
    rng = random.Random(seed)
    failures = []
    dom_failures = []
    kinds = {}
    modes = {}
    comparisons = 0
    dom_checked = 0
    dom_skipped = 0
    for base_text in bases:
        base = parse_ring(base_text)
        batt = battery(base)
        w_cap = _weight_cap(batt, elem_cap)
        for idx in range(count_per_base):
            root_kind = _KINDS[idx] if idx < len(_KINDS) else None
            d = random_tree(rng, base, depth=rng.randint(1, depth),
                            w_cap=w_cap, root_kind=root_kind)
            kinds[d.expr.kind] = kinds.get(d.expr.kind, 0) + 1
            for b in batt:
                try:
                    res = compare_normalization(d.norm, b, enum_cap)
                except ValueError:
                    modes["over_cap"] = modes.get("over_cap", 0) + 1
                    continue
                comparisons += 1
                modes[res["mode"]] = modes.get(res["mode"], 0) + 1
                if not res["ok"]:
                    failures.append({"base": base_text, "tree": idx,
                                     "kind": d.expr.kind,
                                     "algebra": b.label,
                                     "mode": res["mode"]})
                if dominate:
                    dom = check_linear_domination(d.norm.pres, b, enum_cap)
                    if dom is None:
                        dom_skipped += 1
                        continue
                    dom_checked += 1
                    if not dom["ok"]:
                        dom_failures.append({"base": base_text, "tree": idx,
                                             "kind": d.expr.kind,
                                             "algebra": b.label})
    return {
        "suite": "trees",
        "version": SUITE_VERSION,
        "seed": seed,
        "bases": list(bases),
        "count_per_base": count_per_base,
        "depth": depth,
        "trees": count_per_base * len(bases),
        "comparisons": comparisons,
        "modes": modes,
        "kinds": kinds,
        "failures": failures,
        "domination": {"checked": dom_checked, "skipped": dom_skipped,
                       "failures": dom_failures},
        "ok": not failures and not dom_failures,
        "timing": None,
    }


# ---------------------------------------------------------------------------
# the named smoke checks
# ---------------------------------------------------------------------------

def _suite_presentations():
    """Small named functors reused by the product and domination rows."""
    z = ZZ()
    torsion = FPModule(z, 1, [[4]])
    mixed = FPModule(z, 2, [[2, 0], [0, 3]])
    named = [
        ("strict torsion", strict(FPModule(z, 1, [[6]]))),
        ("kernel into torsion",
         kernel_pair(ModuleMap(FPModule.free(z, 1), torsion,
                               [[z.from_int(2)]]))),
        ("annihilator", ann_of(z, [z.from_int(2)])),
        ("product", product([strict(torsion), ann_of(z, [z.from_int(3)])])),
        ("tensor", tensor_module_expr(ann_of(z, [z.from_int(2)]), mixed)),
    ]
    return [(label, normalize(expr)) for label, expr in named]


def _check_picard(add, quick):
    for p in ((2,) if quick else (2, 3, 5)):
        rows = reproduce_table(p)
        add("picard.table.p%d" % p, all(r["ok"] for r in rows),
            rows=[{"ring": r["ring"], "pic": r["pic"].describe(),
                   "expected": r["expected"].describe(), "ok": r["ok"]}
                  for r in rows])


def _check_cohen(add, quick):
    # dual-route generator count; the closed-form target diverges from
    # the direct computation at k >= 6, so full mode reports honest FAIL
    # rows there (quick stays within the agreeing range)
    ks = range(4, 6) if quick else range(4, 11)
    rows = []
    ok = True
    for p in ((2,) if quick else (2, 3)):
        for k in ks:
            r = cohen_h1(k, p)
            rows.append({"k": k, "p": p, "mu": r["mu_direct"],
                         "expected": r["mu_paper_formula"],
                         "verdict": "PASS" if r["paths_agree"] else "FAIL"})
            ok = ok and r["paths_agree"]
    add("cohen.dual_route", ok, rows=rows)


def _check_ann(add, quick):
    rows = []
    ok = True
    for p in ((2,) if quick else (2, 3)):
        for k in range(1, 4 if quick else 5):
            r = ann_lemma_check(k, p)
            rows.append({"k": k, "p": p, "verdict": r["verdict"],
                         "checked": r["checked_multidegrees"]})
            ok = ok and r["verdict"] == "PASS"
    add("ann.lemma", ok, rows=rows)


def _check_tensor(add, quick):
    rows = []
    ok = True
    for p in ((2,) if quick else (2, 3)):
        for n in range(1, 5 if quick else 9):
            r = tensor_mc_mu(n, p)
            want = (n * (n + 1) // 2) ** 2
            row_ok = r["agree"] and r["mu"] == want
            rows.append({"n": n, "p": p, "mu": r["mu"], "expected": want,
                         "verdict": "PASS" if row_ok else "FAIL"})
            ok = ok and row_ok
    add("tensor.mu_square", ok, rows=rows)


def _check_growth(add, quick):
    gt = growth_report("tensor", 4 if quick else 8, 3)
    gc = growth_report("cohen", 7 if quick else 10, 2)
    gl = growth_report("library", 8 if quick else 12, 2)
    add("growth.flags",
        gt["flagged"] and gc["flagged"] and not gl["flagged"],
        tensor_flagged=gt["flagged"], cohen_flagged=gc["flagged"],
        library_flagged=gl["flagged"],
        ranges={"tensor": list(gt["n_range"]), "cohen": list(gc["n_range"]),
                "library": list(gl["n_range"])})


def _check_witt(add, quick):
    ghost_cases = ([(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)] if quick else
                   [(p, n) for p in (2, 3, 5) for n in range(1, 5)])
    rows = []
    ok = True
    for p, n in ghost_cases:
        g_ok = witt_laws(p, n).verify_ghost()
        rows.append({"p": p, "n": n,
                     "verdict": "PASS" if g_ok else "FAIL"})
        ok = ok and g_ok
    add("witt.ghost_identities", ok, rows=rows)

    cyc_cases = ([(2, 1), (2, 2)] if quick else
                 [(p, n) for p in (2, 3) for n in range(1, 4)])
    rows = []
    ok = True
    for p, n in cyc_cases:
        w = witt_algebra(make_test_algebra(Fp(p), ()), n)
        c_ok = w.is_cyclic() and w.order() == p ** n
        rows.append({"p": p, "n": n, "order": w.order(),
                     "verdict": "PASS" if c_ok else "FAIL"})
        ok = ok and c_ok
    add("witt.cyclic_on_prime_field", ok, rows=rows)

    eta_cases = [(2, 2, 1)] if quick else [(2, 2, 1), (2, 3, 1), (3, 2, 1),
                                           (2, 2, 2)]
    rows = []
    ok = True
    for p, n, k in eta_cases:
        r = verify_eta(p, n, k, 6)
        rows.append({"p": p, "n": n, "k": k,
                     "verdict": "PASS" if r["pass"] else "FAIL"})
        ok = ok and r["pass"]
    add("witt.eta_window", ok, rows=rows)


def _check_trees(add, quick, seed):
    rep = run_tree_suite(seed, count_per_base=12 if quick else 50)
    add("trees.normalization_and_domination", rep["ok"],
        trees=rep["trees"], comparisons=rep["comparisons"],
        modes=rep["modes"], failures=rep["failures"],
        domination=rep["domination"])


def _check_products(add, quick):
    pairs = [
        ("Z/4 x Z/3", make_test_algebra(parse_ring("Z/4"), ()),
         make_test_algebra(parse_ring("Z/3"), ())),
        ("F2 x F2[s]/(s^2)", make_test_algebra(Fp(2), ()),
         make_test_algebra(Fp(2), ("s",), ideal=["s^2"])),
    ]
    functors = _suite_presentations()
    if quick:
        functors = functors[:2]
    rows = []
    ok = True
    for label, norm in functors:
        for pair_label, b1, b2 in pairs:
            r = check_finite_products(norm.pres, b1, b2)
            rows.append({"functor": label, "pair": pair_label,
                         "sizes": list(r["sizes"]),
                         "verdict": "PASS" if r["ok"] else "FAIL"})
            ok = ok and r["ok"]
    add("products.bijective", ok, rows=rows)


def _check_flatness(add):
    z = ZZ()
    two = z.from_int(2)
    r = flatness_equalizer_witness(FPModule(z, 1, [[two]]), [two])
    torsion_ok = (r["verdict"] == "not-flat"
                  and r["certificate_equal_values"]
                  and r["certificate_not_in_equalizer_image"])
    free = flatness_equalizer_witness(FPModule.free(z, 1), [two])
    free_ok = free["verdict"] == "flat-on-this-ideal"
    add("flatness.equalizer_witness", torsion_ok and free_ok,
        torsion_verdict=r["verdict"], free_verdict=free["verdict"])


def _check_chains(add, quick):
    texts = ["F2[t^2,t^3]"] if quick else [
        "F2[t^2,t^3]", "F2[t^3,t^4,t^5]", "F2[t^3,t^5,t^7]", "Z[t^2,t^3]"]
    rows = []
    ok = True
    for text in texts:
        steps = conductor_chain(parse_subring(text))
        row_ok = (bool(steps)
                  and all(s.certificate["ok"] for s in steps)
                  and steps[-1].ring_after.is_normal())
        rows.append({"ring": text, "steps": len(steps),
                     "adjoined": [list(s.adjoined) for s in steps],
                     "verdict": "PASS" if row_ok else "FAIL"})
        ok = ok and row_ok
    add("chains.prime_colon", ok, rows=rows)


_DIVERGENCE_NOTE = (
    "known divergence: for the four-variable fraction-ideal family the "
    "directly computed minimal generator count and the built-in "
    "closed-form target disagree at k >= 6; the dual-route check reports "
    "those rows as FAIL by design (see cohen.dual_route)")


def run_suite(mode, seed=0):
    """Aggregate the named checks into one deterministic report."""
    if mode not in ("quick", "full"):
        raise ValueError("mode must be quick or full")
    quick = mode == "quick"
    checks = []

    def add(name, ok, **detail):
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    _check_picard(add, quick)
    _check_cohen(add, quick)
    _check_ann(add, quick)
    _check_tensor(add, quick)
    _check_growth(add, quick)
    _check_witt(add, quick)
    _check_trees(add, quick, seed)
    _check_products(add, quick)
    _check_flatness(add)
    _check_chains(add, quick)

    passed = sum(1 for c in checks if c["ok"])
    return {
        "suite": mode,
        "version": SUITE_VERSION,
        "seed": seed,
        "checks": checks,
        "counts": {"total": len(checks), "passed": passed,
                   "failed": len(checks) - passed},
        "ok": passed == len(checks),
        "notes": [] if quick else [_DIVERGENCE_NOTE],
        "timing": None,
    }


def suite_quick(seed=0):
    return run_suite("quick", seed)


def suite_full(seed=0):
    return run_suite("full", seed)
