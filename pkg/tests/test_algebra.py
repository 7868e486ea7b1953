import random
from fractions import Fraction

import pytest

from quasicluster.algebra import (LimitExceeded, check_laurent_positive,
                                  exchange_value, explore, initial_seed,
                                  mobius_variable_count, mutate_seed,
                                  polygon_variable_count, relation_text,
                                  unistructurality_scan)
from quasicluster.laurent import LaurentForm, LaurentViolation
from quasicluster.pquiver import VertexClassification
from quasicluster.surface import annulus_crosscap, mobius_fan, polygon_fan


def all_ones_seed(quiver):
    seed = initial_seed(quiver, coeff_free=True)
    one = LaurentForm.one(seed.context.nvars)
    for v in seed.values:
        seed.values[v] = one
    return seed


def test_v3_exchange_arithmetic():
    # (x_i + x_k)^2 + x_i x_j^2 x_k at all-ones is 5
    q = annulus_crosscap().build_quiver()
    seed = all_ones_seed(q)
    cls = q.classify_vertex(4)
    assert cls.type == "V3"
    e = exchange_value(seed, cls)
    assert e == LaurentForm.constant(5, seed.context.nvars)


def test_v1_exchange_arithmetic():
    q = polygon_fan(5).build_quiver()
    seed = all_ones_seed(q)
    t = q.mutable_ids()[0]
    two = LaurentForm.constant(2, seed.context.nvars)
    seed.values[t] = two
    cls = q.classify_vertex(t)
    assert cls.type == "V1"
    assert exchange_value(seed, cls) == two
    assert mutate_seed(seed, t).values[t] == LaurentForm.one(seed.context.nvars)


def test_v2_v4_return_exactly():
    q = mobius_fan(2).build_quiver()
    seed = initial_seed(q)
    s1 = mutate_seed(seed, 2)   # doubled arc -> quasi-arc
    s2 = mutate_seed(s1, 2)
    assert s2.values[2] == seed.values[2]
    # x_2' * x_2 multiplies back to x_1 exactly
    prod = s1.values[2] * seed.values[2]
    assert prod == seed.values[1]


def test_relation_text():
    q = annulus_crosscap().build_quiver()
    assert relation_text(q.classify_vertex(5)) == "[V4] x5 * x5' = x4"
    assert "(x3 + x2)^2 + x3*x5^2*x2" in relation_text(q.classify_vertex(4))


def test_m1_exploration_shape():
    g = explore(initial_seed(mobius_fan(1).build_quiver(), coeff_free=True))
    assert g.node_count() == 2
    assert g.edge_count() == 1
    assert g.variable_count() == 2
    assert g.degree_audit() == [] and g.connectivity_audit()


def test_m2_variables_match_hand_derivation():
    # the six variables around the M2 exchange cycle, derived by composing
    # the exchange relations by hand from the initial cluster {x1, x2}
    # (x1 = enclosing loop, x2 = doubled arc, coefficients set to 1):
    #   x2 -> x1/x2                 (doubled arc to quasi-arc)
    #   x1 -> (4x2^2+x1^2)/(x1x2^2) (loop re-hung around the quasi-arc)
    #   quasi-arc back to the second doubled arc, then the through-arc
    g = explore(initial_seed(mobius_fan(2).build_quiver(), coeff_free=True))
    ctx = g.nodes[g.sorted_keys()[0]].context
    got = sorted(lf.render(ctx) for lf, _ in g.variables.values())
    assert got == sorted([
        "x1", "x2", "x1 / x2", "2*x2 / x1",
        "(x1^2 + 4*x2^2) / x1*x2^2", "(x1^2 + 4*x2^2) / x1^2*x2",
    ])


def test_m2_variables_with_coefficients_match_hand_derivation():
    # same cycle with boundary coefficients carried: the big numerator is
    # (y1+y2)^2 x2^2 + y1 y2 x1^2
    g = explore(initial_seed(mobius_fan(2).build_quiver()))
    ctx = g.nodes[g.sorted_keys()[0]].context
    got = sorted(lf.render(ctx) for lf, _ in g.variables.values())
    big = "x1^2*y1*y2 + x2^2*y1^2 + 2*x2^2*y1*y2 + x2^2*y2^2"
    assert got == sorted([
        "x1", "x2", "x1 / x2", "(x2*y1 + x2*y2) / x1",
        f"({big}) / x1*x2^2", f"({big}) / x1^2*x2",
    ])


def test_m2_exploration_positive():
    g = explore(initial_seed(mobius_fan(2).build_quiver(), coeff_free=True))
    assert g.variable_count() == 6
    rep = check_laurent_positive(g)
    assert rep.ok and rep.checked == 6


def test_pentagon_variables_are_the_rank_two_classics():
    g = explore(initial_seed(polygon_fan(5).build_quiver(), coeff_free=True))
    ctx = g.nodes[g.sorted_keys()[0]].context
    got = sorted(lf.render(ctx) for lf, _ in g.variables.values())
    assert got == sorted(["x1", "x2", "(x2 + 1) / x1", "(x1 + 1) / x2",
                          "(x1 + x2 + 1) / x1*x2"])


def test_exploration_with_coefficients():
    g = explore(initial_seed(mobius_fan(2).build_quiver()))
    assert g.node_count() == 6
    rep = check_laurent_positive(g)
    assert rep.ok


def test_exploration_deterministic():
    def run():
        g = explore(initial_seed(mobius_fan(3).build_quiver(), coeff_free=True))
        return (g.sorted_keys(), sorted(g.variables))
    assert run() == run()


def test_exploration_jobs_agree():
    q = mobius_fan(3).build_quiver()
    a = explore(initial_seed(q, coeff_free=True))
    b = explore(initial_seed(q, coeff_free=True), jobs=4)
    assert a.sorted_keys() == b.sorted_keys()
    assert sorted(a.variables) == sorted(b.variables)


def test_counts_formulas():
    assert [mobius_variable_count(m) for m in (1, 2, 3, 4)] == [2, 6, 13, 23]
    assert polygon_variable_count(2) == 5
    assert polygon_variable_count(3) == 9


def test_node_budget():
    seed = initial_seed(annulus_crosscap().build_quiver(), coeff_free=True,
                        tracking="denominator")
    with pytest.raises(LimitExceeded) as err:
        explore(seed, max_nodes=200)
    g = err.value.graph
    assert g.node_count() == 200
    assert g.degree_audit() == []


def test_depth_limit():
    seed = initial_seed(mobius_fan(3).build_quiver(), coeff_free=True)
    with pytest.raises(LimitExceeded) as err:
        explore(seed, max_depth=1)
    assert err.value.graph.node_count() == 4  # root plus its three neighbours


def test_tracking_modes_agree_on_finite_types():
    for fixture in (mobius_fan(2), mobius_fan(3), polygon_fan(6)):
        q = fixture.build_quiver()
        ge = explore(initial_seed(q, coeff_free=True))
        gd = explore(initial_seed(q, coeff_free=True, tracking="denominator"))
        assert ge.node_count() == gd.node_count()
        assert ge.edge_count() == gd.edge_count()
        assert ge.variable_count() == gd.variable_count()


def test_tracking_modes_agree_on_infinite_type_fragment():
    from quasicluster.laurent import denominator_vector
    q = annulus_crosscap().build_quiver()
    got = {}
    for mode in ("exact", "denominator"):
        with pytest.raises(LimitExceeded) as err:
            explore(initial_seed(q, coeff_free=True, tracking=mode), max_depth=3)
        got[mode] = err.value.graph
    ge, gd = got["exact"], got["denominator"]
    assert ge.node_count() == gd.node_count()
    assert ge.variable_count() == gd.variable_count()
    exact_dvecs = sorted(denominator_vector(lf).canonical_serialize()
                         for lf, _ in ge.variables.values())
    assert exact_dvecs == sorted(gd.variables)


def test_m5_exhaustive_count():
    g = explore(initial_seed(mobius_fan(5).build_quiver(), coeff_free=True))
    assert g.variable_count() == mobius_variable_count(5) == 36
    assert g.degree_audit() == [] and g.connectivity_audit()


def test_evaluation_consistency_of_relations():
    rng = random.Random(97)
    for fixture in (mobius_fan(3), annulus_crosscap()):
        seed = initial_seed(fixture.build_quiver())
        point = [Fraction(rng.randrange(1, 9)) for _ in range(seed.context.nvars)]
        for _ in range(12):
            t = rng.choice(seed.quiver.mutable_ids())
            cls = seed.quiver.classify_vertex(t)
            e = exchange_value(seed, cls)
            after = mutate_seed(seed, t)
            lhs = seed.values[t].evaluate(point) * after.values[t].evaluate(point)
            assert lhs == e.evaluate(point)
            seed = after


def test_laurent_violation_aborts_loudly():
    # a corrupted assignment breaks the Laurent phenomenon; the mutation must
    # raise instead of returning a non-Laurent value
    q = mobius_fan(2).build_quiver()
    seed = initial_seed(q, coeff_free=True)
    n = seed.context.nvars
    seed.values[2] = LaurentForm.variable(0, n) + LaurentForm.constant(7, n)
    with pytest.raises(LaurentViolation):
        mutate_seed(seed, 2)


def test_scan_boundary_coincidence_and_spot_checks():
    rep = unistructurality_scan(100)
    boundary = [e for e in rep.collisions if e.m == 1]
    assert len(boundary) == 1
    e = boundary[0]
    assert (e.family, e.n) == ("A", 1)
    assert e.family_count == e.mobius_count == 2
    # the stated spot checks: 57 is not a square; m=2 type D root n=1 is no
    # collision because the counts 1 and 6 differ
    assert not any(x.m == 2 and x.family == "A" for x in rep.entries)
    d_two = [x for x in rep.entries if x.m == 2 and x.family == "D"]
    assert len(d_two) == 1 and d_two[0].n == 1 and not d_two[0].collision


def test_scan_finds_pell_collisions():
    # the count equation (3m^2-m+2)/2 = n(n+3)/2 has a Pell family of
    # solutions; the first beyond m=1 is m=16, n=26 (both counts 377)
    rep = unistructurality_scan(300)
    cols = {(e.family, e.m, e.n) for e in rep.collisions}
    assert ("A", 16, 26) in cols
    assert ("A", 221, 381) in cols
    assert ("D", 5, 6) in cols
    assert mobius_variable_count(16) == polygon_variable_count(26) == 377
    assert mobius_variable_count(5) == 36 == 6 * 6


def test_graph_exports():
    g = explore(initial_seed(mobius_fan(2).build_quiver(), coeff_free=True))
    data = g.to_json()
    assert len(data["nodes"]) == 6 and len(data["edges"]) == 6
    assert data["closed"] is True
    assert len(data["variables"]) == 6
    dot = g.to_dot()
    assert dot.count("--") == 6
