"""Conductor squares, unit groups, and the six-row Picard table."""

import pytest

from funcoh.picard import (
    AbGroupDescriptor,
    MonomialSubring,
    TAG_FREE_COUNTABLE,
    TAG_INVERTED,
    TAG_MODP_COUNTABLE,
    TruncatedQuotient,
    conductor_chain,
    conductor_square,
    ideal_canon,
    ideal_colon,
    ideal_divides,
    ideal_intersect,
    parse_subring,
    picard_from_square,
    picard_group,
    reproduce_table,
    unit_group,
)
from funcoh.rings import ZZ, Fp, Zinv, Zmod


class TestIdealArithmetic:
    def test_canonical_forms(self):
        assert ideal_canon(ZZ(), -6) == 6
        assert ideal_canon(Zinv(10), 40) == 1
        assert ideal_canon(Zinv(10), 12) == 3
        assert ideal_canon(Fp(3), 6) == 0
        assert ideal_canon(Fp(3), 7) == 1
        assert ideal_canon(Zmod(12), 8) == 4

    def test_lattice_ops(self):
        z = ZZ()
        assert ideal_intersect(z, 4, 6) == 12
        assert ideal_intersect(z, 0, 5) == 0
        assert ideal_colon(z, 4, 2) == 2
        assert ideal_colon(z, 4, 8) == 1
        assert ideal_colon(z, 0, 3) == 0
        assert ideal_colon(z, 3, 0) == 1
        assert ideal_divides(z, 2, 6) and not ideal_divides(z, 4, 6)
        assert ideal_divides(z, 0, 0) and not ideal_divides(z, 0, 3)


class TestParsing:
    def test_cusp(self):
        a = parse_subring("Z[t^2,t^3]")
        assert a.coeffs == [1, 0] and a.c == 2
        assert not a.extra_variable
        # every degree at and above the conductor carries the unit ideal
        assert all(a.coeff(i) == 1 for i in range(2, 8))

    def test_scaled_cusp(self):
        a = parse_subring("Z[5t,t^2,t^3]")
        assert a.coeffs == [1, 5] and a.c == 2

    def test_degenerate(self):
        a = parse_subring("F2[t]")
        assert a.c == 0 and a.is_normal()

    def test_extra_variable_and_inverted(self):
        a = parse_subring("Z[5t,t^2,t^3,x]")
        assert a.extra_variable and a.coeffs == [1, 5]
        b = parse_subring("Z[1/5,t^2,t^3]")
        assert b.base.tag == "Zinv" and b.base.n == 5
        assert b.coeffs == [1, 0]

    def test_deep_semigroups(self):
        assert parse_subring("F2[t^3,t^4,t^5]").coeffs == [1, 0, 0]
        assert parse_subring("F2[t^3,t^5,t^7]").coeffs == [1, 0, 0, 1, 0]
        a = parse_subring("Z[4t,t^2,t^3]")
        assert a.coeffs == [1, 4]

    def test_no_finite_conductor(self):
        with pytest.raises(ValueError):
            parse_subring("Z[t^2]")     # even degrees only
        with pytest.raises(ValueError):
            parse_subring("Z[2t]")      # no unit coefficient anywhere

    def test_garbage(self):
        with pytest.raises(ValueError):
            parse_subring("Q[t^2,t^3]")
        with pytest.raises(ValueError):
            parse_subring("Z[u^2]")

    def test_closure_guard(self):
        # degree data with c_1*c_1 outside (c_2) is not a ring
        with pytest.raises(ValueError):
            MonomialSubring(ZZ(), [1, 2, 8, 8])

    def test_unit_rescaling_is_the_same_ring(self):
        assert MonomialSubring(ZZ(), [1, -5]) == MonomialSubring(ZZ(), [1, 5])


class TestConductorSquare:
    def test_cusp_square(self):
        sq = conductor_square(parse_subring("Z[t^2,t^3]"))
        assert sq.conductor == [0, 0]
        assert sq.conductor_text() == "(t^2Z[t])"
        # Abar/c = Z[t]/(t^2), A/c = Z
        assert sq.abar_quotient.m0 == 0
        assert sq.abar_quotient.pieces == [(1, 0)]
        assert sq.a_quotient.m0 == 0 and sq.a_quotient.pieces == []

    def test_scaled_cusp_square(self):
        sq = conductor_square(parse_subring("Z[5t,t^2,t^3]"))
        assert sq.conductor == [5, 5]
        assert sq.conductor_text() == "(5 + 5t + t^2Z[t])"
        # Abar/c = (Z/5)[t]/(t^2), A/c = Z/5
        assert sq.abar_quotient.m0 == 5
        assert sq.abar_quotient.pieces == [(1, 5)]
        assert sq.a_quotient.m0 == 5 and sq.a_quotient.pieces == []
        assert sq.inclusion_scalings == {}

    def test_degenerate_square(self):
        sq = conductor_square(parse_subring("F2[t]"))
        assert sq.conductor == [] and sq.conductor_text() == "(1)"
        assert sq.abar_quotient.is_zero_ring()
        assert sq.a_quotient.is_zero_ring()

    def test_scalings_recorded(self):
        # Z[4t,t^2,t^3]: b_1 = (4) but A's degree-1 part is 4Z, so the
        # subring quotient keeps no degree-1 piece
        sq = conductor_square(parse_subring("Z[4t,t^2,t^3]"))
        assert sq.conductor == [4, 4]
        assert sq.a_quotient.pieces == []
        # a deeper ring where the subring quotient keeps scaled pieces
        sq = conductor_square(MonomialSubring(ZZ(), [1, 2, 2, 4]))
        assert sq.a_quotient.pieces == [(1, 2), (2, 2)]
        assert sq.inclusion_scalings == {1: 2, 2: 2}
        assert sq.a_quotient.square_zero          # (2t + c)(2t + c) dies
        assert not sq.abar_quotient.square_zero   # but t*t survives

    def test_square_zero_over_deep_conductor(self):
        sq = conductor_square(parse_subring("F2[t^3,t^4,t^5]"))
        assert not sq.abar_quotient.square_zero


class TestUnitGroups:
    def test_dual_numbers_over_z(self):
        q = TruncatedQuotient(ZZ(), 0, [(1, 0)], 2)
        out = unit_group(q)
        assert out["descriptor"] == AbGroupDescriptor(free_rank=1,
                                                      torsion=[2])
        assert ("-1", 2) in out["generators"]

    def test_five_torsion_nilpotents(self):
        q = TruncatedQuotient(ZZ(), 0, [(1, 5)], 2)
        out = unit_group(q)
        assert out["descriptor"] == AbGroupDescriptor(torsion=[2, 5])
        assert out["one_plus_nilpotent"] == AbGroupDescriptor(torsion=[5])

    def test_polynomial_coefficients(self):
        q = TruncatedQuotient(Fp(2), 0, [(1, 0)], 2, extra_variable=True)
        out = unit_group(q)
        assert out["descriptor"] == AbGroupDescriptor(
            tags=[(TAG_MODP_COUNTABLE, 2)])
        assert out["reduced_units"].is_trivial()

    def test_inverted_integers_reduced_part(self):
        q = TruncatedQuotient(Zinv(10), 0, [], 1)
        out = unit_group(q)
        assert out["descriptor"] == AbGroupDescriptor(free_rank=2,
                                                      torsion=[2])

    def test_zmod_reduced_part_crt(self):
        q = TruncatedQuotient(ZZ(), 8, [(1, 2)], 2)
        out = unit_group(q)
        # (Z/8)^* = Z/2 x Z/2, then one more Z/2 from 1 + N
        assert out["descriptor"] == AbGroupDescriptor(torsion=[2, 2, 2])

    def test_matches_exhaustive_enumeration(self):
        for p in (2, 3, 5):
            q = TruncatedQuotient(Fp(p), 0, [(1, 0)], 2)
            assert unit_group(q)["descriptor"].order() == \
                q.enumerate_units()
        q = TruncatedQuotient(Zmod(4), 0, [(1, 2)], 2)
        assert unit_group(q)["descriptor"].order() == q.enumerate_units()

    def test_zero_ring(self):
        q = TruncatedQuotient(ZZ(), 1, [], 1)
        assert unit_group(q)["descriptor"].is_trivial()

    def test_square_zero_required(self):
        sq = conductor_square(parse_subring("F2[t^3,t^4,t^5]"))
        with pytest.raises(ValueError):
            unit_group(sq.abar_quotient)

    def test_non_reduced_polynomial_part_refused(self):
        q = TruncatedQuotient(ZZ(), 4, [], 1, extra_variable=True)
        with pytest.raises(ValueError):
            unit_group(q)


class TestPicard:
    def test_cusp(self):
        out = picard_group(parse_subring("Z[t^2,t^3]"))
        assert out["descriptor"] == AbGroupDescriptor(free_rank=1)

    def test_scaled_cusp(self):
        out = picard_group(parse_subring("Z[5t,t^2,t^3]"))
        assert out["descriptor"] == AbGroupDescriptor(torsion=[5])
        assert out["descriptor"].paper_text() == "F_5"
        assert out["generators"] == [("[1 + t]", 5)]

    def test_inverted(self):
        out = picard_group(parse_subring("Z[1/5,t^2,t^3]"))
        assert out["descriptor"] == AbGroupDescriptor(
            tags=[(TAG_INVERTED, 5)])

    def test_normal_ring_has_trivial_pic(self):
        assert picard_group(parse_subring("F2[t]"))[
            "descriptor"].is_trivial()

    def test_refusals(self):
        with pytest.raises(ValueError):
            picard_group(MonomialSubring(Zmod(4), [1, 2]))
        with pytest.raises(ValueError):
            picard_group(parse_subring("Z[6t,t^2,t^3]"))
        with pytest.raises(ValueError):
            picard_group(parse_subring("F2[t^3,t^4,t^5]"))

    def test_functorial_under_unit_rescaling(self):
        plus = picard_group(MonomialSubring(ZZ(), [1, 5]))
        minus = picard_group(MonomialSubring(ZZ(), [1, -5]))
        assert plus["descriptor"] == minus["descriptor"]

    def test_cartesian_holds_on_every_square(self):
        for text in ["Z[t^2,t^3]", "Z[5t,t^2,t^3]", "F3[t^2,t^3]",
                     "Z[1/2,t^2,t^3]", "F2[t^3,t^5,t^7]"]:
            sq = conductor_square(parse_subring(text))
            for d in range(sq.subring.c + 3):
                b = sq.conductor[d] if d < sq.subring.c else 1
                assert ideal_divides(sq.base, sq.subring.coeff(d), b)


class TestTable:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_all_rows(self, p):
        rows = reproduce_table(p)
        assert len(rows) == 6
        assert all(row["ok"] for row in rows)

    def test_row_descriptors_at_five(self):
        rows = reproduce_table(5)
        assert rows[0]["pic"] == AbGroupDescriptor(free_rank=1)
        assert rows[1]["pic"] == AbGroupDescriptor(
            tags=[(TAG_FREE_COUNTABLE,)])
        assert rows[2]["pic"] == AbGroupDescriptor(torsion=[5])
        assert rows[3]["pic"] == AbGroupDescriptor(
            tags=[(TAG_MODP_COUNTABLE, 5)])
        assert rows[4]["pic"] == AbGroupDescriptor(tags=[(TAG_INVERTED, 5)])
        assert rows[5]["pic"] == AbGroupDescriptor(
            tags=[(TAG_MODP_COUNTABLE, 5)])

    def test_phrases(self):
        rows = reproduce_table(3)
        assert rows[0]["pic"].paper_text() == "Z"
        assert rows[2]["pic"].paper_text() == "F_3"
        assert rows[4]["pic"].describe() == "Z[1/3]"

    def test_composite_p_rejected(self):
        with pytest.raises(ValueError):
            reproduce_table(6)


class TestDescriptors:
    def test_invariant_chain(self):
        assert AbGroupDescriptor(torsion=[2, 5]).torsion == [10]
        assert AbGroupDescriptor(torsion=[4, 6]).torsion == [2, 12]
        assert AbGroupDescriptor(torsion=[1, 1]).torsion == []

    def test_plus_and_order(self):
        a = AbGroupDescriptor(free_rank=1, torsion=[2])
        b = AbGroupDescriptor(torsion=[3])
        assert a.plus(b).free_rank == 1
        assert a.plus(b).torsion == [6]
        assert b.order() == 3 and a.order() is None

    def test_describe(self):
        d = AbGroupDescriptor(free_rank=2, torsion=[2, 4],
                              tags=[(TAG_MODP_COUNTABLE, 3)])
        assert d.describe() == ("Z^2 + Z/2 + Z/4 + "
                                "F_3-vector space of countably infinite "
                                "rank")


class TestChains:
    def test_cusp_single_step(self):
        steps = conductor_chain(parse_subring("Z[t^2,t^3]"))
        assert len(steps) == 1
        assert steps[0].adjoined == (1, 1)
        assert steps[0].colon == [0, 0]     # the conductor (t^2, t^3)
        assert steps[0].certificate["ok"]
        assert steps[0].certificate["reduced_modulus"] == 0   # A/c = Z
        assert steps[0].ring_after.is_normal()

    def test_gap_semigroup(self):
        # I_t and I_{t^2} coincide here; the degree tie-break adjoins t
        steps = conductor_chain(parse_subring("F2[t^3,t^4,t^5]"))
        assert [s.adjoined for s in steps] == [(1, 1)]
        assert all(s.certificate["ok"] for s in steps)

    def test_sparse_semigroup_two_steps(self):
        # t^3 * t^2-powers stay inside <3,5,7>, so I_{t^2} strictly
        # contains I_t and the chain passes through F2[t^2,t^3]
        steps = conductor_chain(parse_subring("F2[t^3,t^5,t^7]"))
        assert [s.adjoined for s in steps] == [(1, 2), (1, 1)]
        assert steps[0].ring_after.coeffs == [1, 0]
        assert all(s.certificate["ok"] for s in steps)

    def test_coefficient_ladder(self):
        steps = conductor_chain(parse_subring("Z[4t,t^2,t^3]"))
        assert [s.adjoined for s in steps] == [(2, 1), (1, 1)]
        assert steps[0].colon == [2, 4]
        assert steps[0].certificate["reduced_modulus"] == 2
        assert steps[1].certificate["reduced_modulus"] == 2
        assert all(s.certificate["ok"] for s in steps)

    def test_empty_chain(self):
        assert conductor_chain(parse_subring("F2[t]")) == []

    def test_unsupported_base(self):
        with pytest.raises(ValueError):
            conductor_chain(MonomialSubring(Zmod(4), [1, 2]))

    def test_certificates_reverify(self):
        # no zero divisors among monomial basis products below degree 2c
        for text in ["Z[t^2,t^3]", "F2[t^3,t^4,t^5]", "F2[t^3,t^5,t^7]",
                     "Z[4t,t^2,t^3]", "Z[9t,t^3,t^4,t^5]"]:
            a = parse_subring(text)
            for step in conductor_chain(a):
                base = a.base
                cert = step.certificate
                moduli = {int(d): q
                          for d, q in cert["monomial_moduli"].items()}
                for d, q in moduli.items():
                    for e, q2 in moduli.items():
                        prod = ideal_canon(
                            base, a.coeff(d) * a.coeff(e))
                        kill = (step.colon[d + e]
                                if d + e < a.c else 1)
                        assert not ideal_divides(base, kill, prod)
                a = step.ring_after
            assert a.is_normal()


class TestQuotientModel:
    def test_finiteness(self):
        assert TruncatedQuotient(Fp(3), 0, [(1, 0)], 2).is_finite()
        assert not TruncatedQuotient(ZZ(), 0, [], 1).is_finite()
        assert TruncatedQuotient(ZZ(), 7, [(1, 7)], 2).is_finite()
        assert not TruncatedQuotient(
            Fp(2), 0, [(1, 0)], 2, extra_variable=True).is_finite()

    def test_bad_degrees(self):
        with pytest.raises(ValueError):
            TruncatedQuotient(ZZ(), 0, [(2, 5)], 2)

    def test_default_square_zero_check(self):
        assert TruncatedQuotient(ZZ(), 5, [(1, 5)], 2).square_zero
        assert not TruncatedQuotient(ZZ(), 5, [(1, 5), (2, 5)],
                                     3).square_zero
