import pytest
from hypothesis import given, settings, strategies as st

from funcoh.rings import (
    ZZ, Zmod, Fp, Zinv, poly_ring, parse_ring, print_ring, parse_elt,
    print_elt, is_prime, RingHom,
)
from funcoh.algebras import (
    make_test_algebra, algebra_product, direct_product, local_data,
    battery, battery_homs, quotient_hom, AlgebraHom, FiniteAlgebra,
    product_injections_data,
)


# ---- ring grammar ----

def test_parse_basics():
    assert parse_ring("Z/12").m == 12
    assert parse_ring("F7").p == 7
    assert parse_ring("Z").tag == "Z"
    assert parse_ring("Z[1/6]").n == 6
    r = parse_ring("F2[s,t]")
    assert r.vars == ("s", "t") and r.coeff.p == 2


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_ring("F4")
    with pytest.raises(ValueError):
        parse_ring("Z/1")
    with pytest.raises(ValueError):
        parse_ring("Q")
    with pytest.raises(ValueError):
        parse_ring("Z[1/")


@pytest.mark.parametrize("spec", [
    "Z", "Z/12", "F7", "Z[1/6]", "F2[x]", "Z/4[x]", "F2[s,t]", "F3[s,t,u]",
    "Z[x]", "Z[1/2][x]",
])
def test_parse_print_roundtrip(spec):
    assert print_ring(parse_ring(spec)) == spec


def test_is_prime_matches_trial_division():
    def trial(n):
        return n >= 2 and all(n % d for d in range(2, n))
    for n in range(2000):
        assert is_prime(n) == trial(n)


# ---- elements ----

def test_poly_element_arithmetic_and_text():
    R = parse_ring("F2[s,t]")
    s, t = R.var_elt("s"), R.var_elt("t")
    e = R.add(R.mul(s, s), R.mul(s, t))
    assert print_elt(R, e) == "s^2 + s*t"
    assert parse_elt(R, "s^2 + s*t") == e
    assert R.add(e, e) == R.zero()


def test_int_poly_text_with_signs():
    R = parse_ring("Z[x]")
    e = parse_elt(R, "3*x^2 - 2*x + 1")
    assert print_elt(R, e) == "3*x^2 - 2*x + 1"
    assert parse_elt(R, "-x") == R.neg(R.var_elt("x"))


def test_zinv_elements():
    R = parse_ring("Z[1/6]")
    assert parse_elt(R, "5/12") == parse_elt(R, "5/12")
    with pytest.raises(ValueError):
        parse_elt(R, "1/5")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3),
                          st.integers(-5, 5)), max_size=5))
def test_poly_print_parse_roundtrip(terms):
    R = parse_ring("Z[x,y]")
    e = R.zero()
    for a, b, c in terms:
        e = R.add(e, {(a, b): c} if c else R.zero())
    assert parse_elt(R, print_elt(R, e)) == e


def test_ops_elt_conversion():
    R = parse_ring("F2[x]")
    e = parse_elt(R, "x^2 + 1")
    assert R.to_ops_elt(e) == (1, 0, 1)
    assert R.from_ops_elt((1, 0, 1)) == e


# ---- ring homs ----

def test_ring_hom_checks():
    RingHom(Zmod(8), Zmod(4))
    with pytest.raises(ValueError):
        RingHom(Zmod(8), Zmod(3))
    with pytest.raises(ValueError):
        RingHom(Fp(2), Fp(3))
    h = RingHom(parse_ring("F2[x]"), Fp(2), var_images={"x": 0})
    assert h.apply(parse_elt(parse_ring("F2[x]"), "x + 1")) == 1


# ---- test algebras ----

def test_make_test_algebra_examples():
    B = make_test_algebra(Fp(2), ("s", "t"), trunc=2)
    assert B.names == ("1", "s", "t")
    s, t = B.var_images["s"], B.var_images["t"]
    assert B.mul(s, t) == B.zero()
    B2 = make_test_algebra(Zmod(4), ("x",), ideal=["x^2"])
    assert B2.rank == 2
    x = B2.var_images["x"]
    assert B2.mul(x, x) == B2.zero()
    assert make_test_algebra(Fp(3), ("s", "t", "u"), trunc=3).rank == 10


def test_infinite_rank_rejected():
    with pytest.raises(ValueError, match="infinite"):
        make_test_algebra(Fp(2), ("x", "y"), ideal=["x^2"])


def test_algebra_product_contract():
    B1 = make_test_algebra(Fp(2), ("s",), ideal=["s^2"])
    B2 = make_test_algebra(Fp(2), ())
    P = algebra_product(B1, B2)
    assert P.rank == 3
    e1 = tuple(list(B1.one) + [0] * B2.rank)
    e2 = tuple([0] * B1.rank + list(B2.one))
    assert P.mul(e1, e2) == P.zero()
    assert P.add(e1, e2) == P.one
    with pytest.raises(ValueError, match="mismatched"):
        algebra_product(B1, make_test_algebra(Fp(3), ()))
    with pytest.raises(ValueError, match="rank-0"):
        algebra_product(B1, make_test_algebra(Fp(2), (), ideal=[()]))


def test_local_data_examples():
    rad, p = local_data(make_test_algebra(Fp(2), ("s", "t"), trunc=2))
    assert p == 2 and len(rad) == 2
    rad8, p8 = local_data(make_test_algebra(Zmod(8), ()))
    assert p8 == 2 and rad8 == [(2,)]
    prod = direct_product(make_test_algebra(Zmod(4), ()),
                          make_test_algebra(Zmod(3), ()))
    with pytest.raises(ValueError, match="not local"):
        local_data(prod)


def test_radical_is_nilpotent():
    B = make_test_algebra(Zmod(4), ("x",), ideal=["x^3"])
    rad, p = local_data(B)
    # (rad ideal)^e = 0 for some e <= rank bound: check all products of
    # radical generators of length rank(B)*2
    words = list(rad)
    for _ in range(B.rank * 2 - 1):
        words = [B.mul(w, r) for w in words for r in rad]
    assert all(B.is_zero(w) for w in words)


def test_char_and_units():
    B = direct_product(make_test_algebra(Zmod(4), ()),
                       make_test_algebra(Zmod(3), ()))
    assert B.char() == 12
    assert B.is_unit((1, 1))
    assert B.is_unit((3, 2))
    assert not B.is_unit((2, 1))
    assert B.mul(B.inverse((3, 2)), (3, 2)) == B.one


def test_battery_filtering():
    assert [b.label for b in battery(ZZ())] == [
        "Z/4", "Z/6", "Z/8", "F2", "F2[x]/(x^2)", "F3[s,t]/(deg>=2)",
        "Z/4 x Z/3"]
    assert [b.label for b in battery(Zmod(12))] == [
        "Z/4", "Z/6", "F2", "F2[x]/(x^2)", "F3[s,t]/(deg>=2)", "Z/4 x Z/3"]
    f2st = parse_ring("F2[s,t]")
    bb = battery(f2st)
    assert all(b.is_algebra_over(f2st) for b in bb)
    assert [b.label for b in bb] == ["F2", "F2[x]/(x^2)"]


def test_battery_homs_check_out():
    homs = battery_homs(ZZ())
    assert len(homs) >= 5
    for h in homs:
        # spot: hom applied to 1 is 1 (rechecked)
        assert h.apply(h.source.one) == h.target.one


def test_product_projections():
    B1 = make_test_algebra(Zmod(4), ())
    B2 = make_test_algebra(Zmod(3), ())
    P = direct_product(B1, B2)
    p1, p2 = product_injections_data(B1, B2, P)
    for a in P.elements():
        assert p1.apply(P.mul(a, a)) == B1.mul(p1.apply(a), p1.apply(a))
        assert p2.apply(P.mul(a, a)) == B2.mul(p2.apply(a), p2.apply(a))


def test_bad_hom_rejected():
    B1 = make_test_algebra(Zmod(4), ())
    B2 = make_test_algebra(Zmod(3), ())
    with pytest.raises(ValueError):
        AlgebraHom(B1, B2, [(1,)])  # 4*1 != 0 in Z/3


def test_structure_image_polynomial():
    f2st = parse_ring("F2[s,t]")
    B = make_test_algebra(Fp(2), ("s", "t"), trunc=2)
    img = B.structure_image(f2st, parse_elt(f2st, "s + t"))
    assert img == B.add(B.var_images["s"], B.var_images["t"])
    img2 = B.structure_image(f2st, parse_elt(f2st, "s*t + 1"))
    assert img2 == B.one


def test_algebra_json_roundtrip():
    B = make_test_algebra(Zmod(4), ("x",), ideal=["x^2"])
    B2 = FiniteAlgebra.from_json(B.to_json())
    assert B2.orders == B.orders
    assert B2.mult == B.mult
    assert B2.var_images == B.var_images
