import json

import pytest

from funcoh.algebras import battery
from funcoh.evaluation import compare_normalization, eval_presentation
from funcoh.modules import FPModule, ModuleMap
from funcoh.rings import ZZ, parse_ring
from funcoh.suite import (_KINDS, check_linear_domination, random_tree,
                          run_tree_suite, _suite_presentations)

import random


Z = ZZ()


class TestGenerator:
    def test_forced_root_kinds(self):
        rng = random.Random(11)
        for kind in _KINDS:
            d = random_tree(rng, Z, depth=2, w_cap=4, root_kind=kind)
            assert d.expr.kind == kind

    def test_weight_cap_respected(self):
        rng = random.Random(5)
        for _ in range(40):
            d = random_tree(rng, Z, depth=3, w_cap=3)
            assert d.peak_w <= 3
            assert d.norm.pres.source.gens <= 3

    def test_every_draw_normalizes_and_evaluates(self):
        # squares from the commuting families never fail validation
        rng = random.Random(23)
        b = battery(Z)[0]
        for _ in range(25):
            d = random_tree(rng, Z, depth=2, w_cap=3)
            res = compare_normalization(d.norm, b, 50000)
            assert res["ok"]

    def test_composite_base_draws(self):
        rng = random.Random(31)
        base = parse_ring("Z/12")
        b = battery(base)[0]
        for _ in range(10):
            d = random_tree(rng, base, depth=2, w_cap=3)
            assert compare_normalization(d.norm, b, 50000)["ok"]


class TestComposeThroughZero:
    def test_zero_middle_module_keeps_shape(self):
        # composite through a 0-generator module is the zero map with the
        # outer shapes, not a 0-column matrix
        src = FPModule.free(Z, 2)
        mid = FPModule(Z, 0, [])
        tgt = FPModule.free(Z, 3)
        f = ModuleMap(src, mid, [], check=False)
        g = ModuleMap(mid, tgt, [[], [], []], check=False)
        h = g.compose(f)
        assert len(h.matrix) == 3
        assert all(len(r) == 2 for r in h.matrix)
        assert h.is_zero_map()


class TestDomination:
    def test_onto_for_kernel_presentation(self):
        from funcoh.functors import kernel_pair, normalize
        two = Z.from_int(2)
        f = ModuleMap(FPModule.free(Z, 1), FPModule(Z, 1, [[Z.from_int(4)]]),
                      [[two]])
        pres = normalize(kernel_pair(f)).pres
        for b in battery(Z):
            res = check_linear_domination(pres, b)
            assert res is not None and res["ok"]
            assert res["cover_size"] >= res["size"]

    def test_skip_over_cap(self):
        from funcoh.functors import kernel_pair, normalize
        f = ModuleMap(FPModule.free(Z, 2), FPModule(Z, 1, [[Z.from_int(8)]]),
                      [[Z.from_int(2), Z.from_int(4)]])
        pres = normalize(kernel_pair(f)).pres
        b = battery(Z)[2]
        assert check_linear_domination(pres, b, cap=2) is None


class TestTreeSuite:
    def test_small_batch_clean(self):
        rep = run_tree_suite(99, count_per_base=8, elem_cap=4000)
        assert rep["ok"]
        assert rep["trees"] == 16
        assert rep["failures"] == []
        assert rep["domination"]["failures"] == []
        assert rep["modes"].get("bijection", 0) > 0
        # forced roots cover every combinator kind in the first draws
        for kind in _KINDS:
            assert rep["kinds"].get(kind, 0) >= 1

    def test_reports_are_deterministic(self):
        a = run_tree_suite(42, count_per_base=5, elem_cap=4000)
        b = run_tree_suite(42, count_per_base=5, elem_cap=4000)
        c = run_tree_suite(43, count_per_base=5, elem_cap=4000)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
        assert json.dumps(a, sort_keys=True) != json.dumps(c, sort_keys=True)

    def test_report_is_json_clean(self):
        rep = run_tree_suite(7, count_per_base=3, elem_cap=2000)
        json.dumps(rep)  # no sets, Fractions, or other non-JSON values
        assert rep["timing"] is None
        assert rep["version"] == 1


class TestSuitePresentations:
    def test_named_functors_evaluate(self):
        b = battery(Z)[0]
        for label, norm in _suite_presentations():
            ev = eval_presentation(norm.pres, b)
            assert ev.order() >= 1, label
