import itertools

import pytest
from hypothesis import given, settings, strategies as st

from funcoh.rings import ZZ, Zmod, Fp, parse_ring, parse_elt
from funcoh.modules import (
    FPModule, ModuleMap, smith, kernel_of_map, cokernel_of_map, image_of_map,
    pushout, invariant_factors, min_generators, length_and_hs,
    cyclic_decomposition_tdvr, eu_ops,
)

Z = ZZ()


def zmod_elements(m, gens, relations):
    """Brute-force module elements of coker(relations) inside (Z/m)^gens,
    as canonical orbit representatives."""
    rels = [tuple(relations[i][c] % m for i in range(gens))
            for c in range(len(relations[0]) if relations and relations[0] else 0)]
    seen = {}
    for v in itertools.product(range(m), repeat=gens):
        if v in seen:
            continue
        orbit = {v}
        frontier = [v]
        while frontier:
            w = frontier.pop()
            for r in rels:
                for s in (1, m - 1):
                    u = tuple((a + s * b) % m for a, b in zip(w, r))
                    if u not in orbit:
                        orbit.add(u)
                        frontier.append(u)
        rep = min(orbit)
        for u in orbit:
            seen[u] = rep
    return seen


def test_smith_op_examples():
    sd = smith(Z, [[2, 4], [6, 8]])
    assert sd.diagonal() == [2, 4]
    sd = smith(Z, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert sd.diagonal() == [1, 1, 1]
    R = parse_ring("F2[x]")
    x = parse_elt(R, "x")
    x2 = parse_elt(R, "x^2")
    sd = smith(R, [[x, x2]])
    assert sd.diagonal() == [x]


def test_smith_zmod_reduces():
    sd = smith(Zmod(6), [[4, 2], [2, 2]])
    diag = sd.diagonal()
    assert all(0 <= x < 6 for row in sd.D for x in row)
    assert len(diag) == 2


def test_invariant_factors_examples():
    assert FPModule(Z, 2, [[2, 0], [0, 4]]).invariant_factors() == [2, 4]
    assert FPModule.free(Z, 3).invariant_factors() == [0, 0, 0]
    # Z/6 + Z/4 regroups to (2, 12)
    assert FPModule(Z, 2, [[6, 0], [0, 4]]).invariant_factors() == [2, 12]


def test_kernel_examples():
    times2 = ModuleMap(FPModule.free(Z, 1), FPModule.free(Z, 1), [[2]])
    k, inc = kernel_of_map(times2)
    assert k.is_zero_module()

    z4 = FPModule(Zmod(4), 1, [])
    k, inc = kernel_of_map(ModuleMap(z4, z4, [[2]]))
    assert k.invariant_factors() == [2]
    # inclusion hits {0, 2}: generator images mod 4
    gen_images = {x % 4 for row in inc.matrix for x in row}
    assert gen_images <= {0, 2} and 2 in gen_images

    proj = ModuleMap(FPModule.free(Z, 2), FPModule.free(Z, 1), [[1, 0]])
    k, inc = kernel_of_map(proj)
    assert k.invariant_factors() == [0]


def test_kernel_brute_force_zmod():
    # random small maps Z/m^a -> Z/m^b: kernel size must match enumeration
    import random
    rng = random.Random(3)
    for _ in range(25):
        m = rng.choice([2, 3, 4, 6, 8])
        a = rng.randrange(1, 3)
        b = rng.randrange(1, 3)
        mat = [[rng.randrange(m) for _ in range(a)] for _ in range(b)]
        src = FPModule(Zmod(m), a, [])
        tgt = FPModule(Zmod(m), b, [])
        f = ModuleMap(src, tgt, mat)
        k, inc = kernel_of_map(f)
        size = 1
        for d in k.invariant_factors():
            assert d != 0
            size *= d
        brute = sum(
            1 for v in itertools.product(range(m), repeat=a)
            if all(sum(mat[i][j] * v[j] for j in range(a)) % m == 0
                   for i in range(b)))
        assert size == brute, (m, mat)


def test_cokernel_image_examples():
    times2 = ModuleMap(FPModule.free(Z, 1), FPModule.free(Z, 1), [[2]])
    c, proj = cokernel_of_map(times2)
    assert c.invariant_factors() == [2]
    im, epi, mono = image_of_map(times2)
    assert im.invariant_factors() == [0]
    assert mono.matrix == [[2]]

    d24 = ModuleMap(FPModule.free(Z, 2), FPModule.free(Z, 2), [[2, 0], [0, 4]])
    c, _ = cokernel_of_map(d24)
    assert c.invariant_factors() == [2, 4]


def test_image_factorization_composes():
    f = ModuleMap(FPModule.free(Z, 2), FPModule.free(Z, 2), [[2, 4], [6, 8]])
    im, epi, mono = image_of_map(f)
    comp = mono.compose(epi)
    assert comp.matrix == f.matrix


def test_rank_accounting_over_field():
    F = Fp(5)
    for mat in ([[1, 2], [2, 4]], [[0, 0], [0, 0]], [[1, 0], [0, 1]]):
        f = ModuleMap(FPModule.free(F, 2), FPModule.free(F, 2), mat)
        k, _ = kernel_of_map(f)
        im, _, _ = image_of_map(f)
        dim_k = len(k.invariant_factors())
        dim_im = len(im.invariant_factors())
        assert dim_k + dim_im == 2


def test_pushout_examples():
    free = FPModule.free(Z, 1)
    d, im, in_ = pushout(ModuleMap(free, free, [[2]]),
                         ModuleMap(free, free, [[3]]))
    assert d.invariant_factors() == [0]
    m = FPModule(Z, 1, [[4]])
    d2, im2, in2 = pushout(ModuleMap.identity_map(m), ModuleMap.identity_map(m))
    assert d2.invariant_factors() == m.invariant_factors()
    # pushout along zero maps is the direct sum
    zsrc = FPModule(Z, 0, [])
    n = FPModule(Z, 1, [[6]])
    d3, _, _ = pushout(ModuleMap(zsrc, m, [[]]), ModuleMap(zsrc, n, [[]]))
    assert d3.invariant_factors() == [2, 12]


def test_pushout_universal_small():
    # brute force universal property over Z/4 at rank <= 2
    base = Zmod(4)
    p = FPModule(base, 1, [])
    m = FPModule(base, 1, [])
    n = FPModule(base, 1, [])
    f = ModuleMap(p, m, [[2]])
    g = ModuleMap(p, n, [[1]])
    d, into_m, into_n = pushout(f, g)
    # direct model: (Z/4 + Z/4) / <(2, -1)>
    seen = zmod_elements(4, 2, [[2], [-1 % 4]])
    assert len(set(seen.values())) == 4
    size = 1
    for x in d.invariant_factors():
        size *= x
    assert size == 4


def test_well_definedness_rejected():
    z2 = FPModule(Z, 1, [[2]])
    z = FPModule.free(Z, 1)
    with pytest.raises(ValueError, match="respect relations"):
        ModuleMap(z2, z, [[1]])
    ModuleMap(z2, FPModule(Z, 1, [[4]]), [[2]])  # 2*Z/2 -> Z/4 fine


def test_min_generators():
    assert min_generators(FPModule(Zmod(8), 2, [[2, 0], [0, 4]])) == 2
    assert min_generators(FPModule.free(Fp(3), 3)) == 3
    assert min_generators(FPModule(Fp(2), 2, [[1], [1]])) == 1
    with pytest.raises(ValueError, match="local"):
        min_generators(FPModule(Zmod(6), 1, []))
    with pytest.raises(ValueError, match="local"):
        min_generators(FPModule.free(Z, 2))


def test_min_generators_actually_generate():
    # lift a residue basis and check spanning: over Z/8, M = Z/2 + Z/4
    m = FPModule(Zmod(8), 2, [[2, 0], [0, 4]])
    mu = min_generators(m)
    # the two standard generators span by construction; check no single
    # element generates (mu is minimal)
    import itertools as it
    for v in it.product(range(8), repeat=2):
        span = set()
        for c in range(8):
            w = ((c * v[0]) % 2, (c * v[1]) % 4)
            span.add(w)
        if len(span) == 8:
            pytest.fail("single generator found; mu computed wrong")
    assert mu == 2


def test_length_and_hs():
    assert length_and_hs(2, 3) == 10
    assert length_and_hs(1, 9) == 10
    assert length_and_hs(3, 2) == 10


def test_cyclic_decomposition():
    assert cyclic_decomposition_tdvr(FPModule(Zmod(8), 2, [[2, 0], [0, 4]])) == [2, 4]
    assert cyclic_decomposition_tdvr(FPModule.free(Zmod(8), 2)) == [8, 8]
    assert cyclic_decomposition_tdvr(FPModule(Zmod(8), 0, [])) == []
    with pytest.raises(ValueError, match="prime power"):
        cyclic_decomposition_tdvr(FPModule.free(Zmod(6), 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_kernel_composite_is_zero(rows, cols, data):
    mat = [[data.draw(st.integers(-6, 6)) for _ in range(cols)]
           for _ in range(rows)]
    f = ModuleMap(FPModule.free(Z, cols), FPModule.free(Z, rows), mat)
    k, inc = kernel_of_map(f)
    comp = f.compose(inc)
    assert comp.is_zero_map()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_smith_poly_invariant_chain(data):
    R = parse_ring("F3[x]")
    ops = eu_ops(R)
    mat = [[data.draw(st.sampled_from(["0", "1", "x", "x+1", "x^2", "2*x"]))
            for _ in range(2)] for _ in range(2)]
    mat = [[parse_elt(R, e) for e in row] for row in mat]
    sd = smith(R, mat)
    diag = [d for d in sd.diagonal() if d]
    for a, b in zip(diag, diag[1:]):
        q, r = ops.divmod_(R.to_ops_elt(b), R.to_ops_elt(a))
        assert ops.is_zero(r)
