"""Descent data: validation, gluing, and the section round trips."""

import itertools
import random
from fractions import Fraction

import pytest

from fanrep.descent import (
    DescentDatum,
    DescentError,
    DescentMorphism,
    chart_quiver,
    descent_from_json,
    descent_to_json,
    glue,
    glue_morphism,
    section,
    validate_descent,
)
from fanrep.exactnum import RatMatrix, mat_mul
from fanrep.geometry import Cone, Fan, chart_bases, maximal_cones
from fanrep.quivers import fan_quiver
from fanrep.reps import (
    Morphism,
    Representation,
    hom_basis,
    rep_to_json,
    validate_CDelta,
)


def scalar(x):
    return RatMatrix(1, 1, [Fraction(x)])


def p1_fan():
    return Fan(1, [(1,), (-1,)], [(), (1,), (2,)])


def p2_fan():
    return Fan(2, [(1, 0), (0, 1), (-1, -1)], [(), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3)])


def c2_fan():
    return Fan.from_single_cone(2, [(1, 0), (0, 1)])


def p1_datum(m1, m2, delta=1):
    """P^1 descent datum with scalar chart monodromies m1, m2."""
    fan = p1_fan()
    bases = chart_bases(fan)
    k1, k2 = Cone((1,)), Cone((2,))
    charts = {}
    for cone, m in [(k1, m1), (k2, m2)]:
        quiver = chart_quiver(fan, bases, cone)
        edge = ((), cone.ray_indices)
        charts[cone] = Representation(
            quiver,
            {vtx: 1 for vtx in quiver.vertices},
            {edge: scalar(1)},
            {edge: scalar(Fraction(m) - 1)},
        )
    deltas = {(k1, k2, ()): scalar(delta)}
    return DescentDatum(fan, charts, deltas, bases=bases)


def p1_valid_rep(m1=Fraction(2)):
    fan = p1_fan()
    quiver = fan_quiver(fan)
    m2 = 1 / Fraction(m1)
    return Representation(
        quiver,
        {vtx: 1 for vtx in quiver.vertices},
        {((), (1,)): scalar(1), ((), (2,)): scalar(1)},
        {((), (1,)): scalar(m1 - 1), ((), (2,)): scalar(m2 - 1)},
    )


class TestValidateDescent:
    def test_p1_compatible_charts_ok(self):
        assert validate_descent(p1_datum(2, Fraction(1, 2))) == []

    def test_p1_transport_violation(self):
        violations = validate_descent(p1_datum(2, 2))
        locations = {(v.condition, v.location) for v in violations}
        assert ("transport", ("1", "2", "", 2)) in locations
        assert all(v.condition == "transport" for v in violations)

    def test_single_chart_vacuous(self):
        fan = c2_fan()
        bases = chart_bases(fan)
        cone = Cone((1, 2))
        quiver = chart_quiver(fan, bases, cone)
        chart = Representation(quiver, {vtx: 1 for vtx in quiver.vertices})
        d = DescentDatum(fan, {cone: chart}, {}, bases=bases)
        assert validate_descent(d) == []

    def test_invalid_chart_is_reported_with_chart_location(self):
        fan = c2_fan()
        bases = chart_bases(fan)
        cone = Cone((1, 2))
        quiver = chart_quiver(fan, bases, cone)
        u = {e: scalar(0) for e in quiver.arrow_pairs}
        v = {e: scalar(0) for e in quiver.arrow_pairs}
        u[((), (1,))] = scalar(1)
        v[((), (1,))] = scalar(-1)  # singular monodromy in the chart
        chart = Representation(quiver, {vtx: 1 for vtx in quiver.vertices}, u, v)
        d = DescentDatum(fan, {cone: chart}, {}, bases=bases)
        violations = validate_descent(d)
        assert ("i", ("1,2", "-1")) in {(x.condition, x.location) for x in violations}

    def test_missing_delta_rejected(self):
        fan = p1_fan()
        bases = chart_bases(fan)
        k1, k2 = Cone((1,)), Cone((2,))
        charts = {}
        for cone in (k1, k2):
            quiver = chart_quiver(fan, bases, cone)
            charts[cone] = Representation(quiver, {vtx: 1 for vtx in quiver.vertices})
        with pytest.raises(DescentError):
            DescentDatum(fan, charts, {}, bases=bases)

    def test_singular_delta_rejected(self):
        with pytest.raises(DescentError):
            p1_datum(2, Fraction(1, 2), delta=0)

    def test_conjugation_violation(self):
        # two charts sharing an edge: fan with maximal cones (1,) and (1,2)? no;
        # use the fan with two 2d charts sharing the ray 1 in Z^2
        fan = Fan(
            2,
            [(1, 0), (0, 1), (0, -1)],
            [(), (1,), (2,), (3,), (1, 2), (1, 3)],
        )
        bases = chart_bases(fan)
        k12, k13 = Cone((1, 2)), Cone((1, 3))
        charts = {}
        for cone in (k12, k13):
            quiver = chart_quiver(fan, bases, cone)
            u = {e: scalar(0) for e in quiver.arrow_pairs}
            v = {e: scalar(0) for e in quiver.arrow_pairs}
            charts[cone] = Representation(
                quiver, {vtx: 1 for vtx in quiver.vertices}, u, v
            )
        # break the shared u on edge () -> (1,): charts disagree, delta = Id
        u = dict(charts[k13].u)
        u[((), (1,))] = scalar(1)
        charts[k13] = Representation(
            charts[k13].quiver, charts[k13].dims, u, charts[k13].v
        )
        deltas = {}
        for j in [(), (1,)]:
            deltas[(k12, k13, j)] = scalar(1)
        d = DescentDatum(fan, charts, deltas, bases=bases)
        violations = validate_descent(d)
        conds = {(x.condition, x.location) for x in violations}
        assert ("conjugation", ("1,2", "1,3", "-1", "u")) in conds


class TestGlue:
    def test_single_chart_glue_is_chart(self):
        fan = c2_fan()
        bases = chart_bases(fan)
        cone = Cone((1, 2))
        quiver = chart_quiver(fan, bases, cone)
        u = {e: scalar(1) for e in quiver.arrow_pairs}
        v = {e: scalar(1) for e in quiver.arrow_pairs}
        chart = Representation(quiver, {vtx: 1 for vtx in quiver.vertices}, u, v)
        d = DescentDatum(fan, {cone: chart}, {}, bases=bases)
        glued = glue(d)
        assert glued.dims == chart.dims
        assert glued.u == chart.u and glued.v == chart.v

    def test_p1_scalar_assembly(self):
        d = p1_datum(2, Fraction(1, 2))
        glued = glue(d)
        assert glued == p1_valid_rep(Fraction(2))

    def test_glue_validates_output(self):
        d = p1_datum(2, Fraction(1, 2), delta=7)
        glued = glue(d)
        assert validate_CDelta(glued, p1_fan()) == []

    def test_invalid_datum_raises(self):
        with pytest.raises(DescentError):
            glue(p1_datum(2, 2))

    def test_nontrivial_delta_conjugates_arrows(self):
        d = p1_datum(2, Fraction(1, 2), delta=3)
        glued = glue(d)
        # owner of () is chart (1,), so the edge into chart (2,) is routed
        # through delta: u = 1 * 3, v = (1/2 - 1) / 3
        assert glued.u[((), (2,))] == scalar(3)
        assert glued.v[((), (2,))] == scalar(Fraction(-1, 6))
        assert validate_CDelta(glued, p1_fan()) == []


class TestSection:
    def test_p1_section_has_identity_deltas(self):
        rep = p1_valid_rep()
        d = section(rep, p1_fan())
        for (a, b, j), mat in d.stored_deltas().items():
            assert mat.is_identity()

    def test_section_requires_valid_rep(self):
        fan = p1_fan()
        quiver = fan_quiver(fan)
        bad = Representation(
            quiver,
            {vtx: 1 for vtx in quiver.vertices},
            {((), (1,)): scalar(1), ((), (2,)): scalar(1)},
            {((), (1,)): scalar(1), ((), (2,)): scalar(1)},  # M = 2 both
        )
        with pytest.raises(DescentError):
            section(bad, fan)

    def test_roundtrip_glue_section_exact(self):
        for m in [Fraction(2), Fraction(5, 3), Fraction(-7)]:
            rep = p1_valid_rep(m)
            assert glue(section(rep, p1_fan())) == rep

    def test_section_glue_gives_isomorphic_datum(self):
        d = p1_datum(2, Fraction(1, 2), delta=5)
        e = section(glue(d), p1_fan())
        tops = maximal_cones(d.fan)
        owner = tops[0]  # chart (1,) owns every shared vertex here
        comparison = {}
        for cone in tops:
            maps = {
                vtx: d.delta(cone, owner, vtx) if set(vtx) <= set(owner.ray_indices) and set(vtx) <= set(cone.ray_indices) else RatMatrix.identity(d.charts[cone].dims[vtx])
                for vtx in d.charts[cone].quiver.vertices
            }
            comparison[cone] = Morphism(d.charts[cone], e.charts[cone], maps)
        mor = DescentMorphism(d, e, comparison)
        assert mor.is_valid()
        for cone in tops:
            assert comparison[cone].is_invertible()


class TestChartLoops:
    def test_cxcstar_descent_with_loops(self):
        fan = Fan(2, [(1, 0)], [(), (1,)])
        bases = chart_bases(fan)
        cone = Cone((1,))
        quiver = chart_quiver(fan, bases, cone)
        chart = Representation(
            quiver,
            {(): 1, (1,): 1},
            loops={((), 2): scalar(2), ((1,), 2): scalar(2)},
        )
        d = DescentDatum(fan, {cone: chart}, {}, bases=bases)
        assert validate_descent(d) == []
        glued = glue(d)
        assert validate_CDelta(glued, fan) == []
        assert glue(section(glued, fan)) == glued

    def test_mismatched_chart_loop_transport(self):
        fan = Fan(2, [(1, 0)], [(), (1,)])
        bases = chart_bases(fan)
        cone = Cone((1,))
        quiver = chart_quiver(fan, bases, cone)
        chart = Representation(
            quiver,
            {(): 1, (1,): 1},
            u={((), (1,)): scalar(1)},
            loops={((), 2): scalar(2), ((1,), 2): scalar(3)},
        )
        d = DescentDatum(fan, {cone: chart}, {}, bases=bases)
        violations = validate_descent(d)
        assert any(v.condition == "loop" for v in violations)


def p2_descent_from_rep(rep=None):
    fan = p2_fan()
    if rep is None:
        quiver = fan_quiver(fan)
        rep = Representation(quiver, {vtx: 1 for vtx in quiver.vertices})
    return section(rep, fan), fan


class TestCocycle:
    def test_planted_cocycle_violation_detected(self):
        d, fan = p2_descent_from_rep()
        deltas = d.stored_deltas()
        k12, k13, k23 = maximal_cones(fan)
        deltas[(k12, k23, ())] = scalar(2)  # breaks delta(13->23) . delta(12->13)
        bad = DescentDatum(fan, d.charts, deltas, bases=d.bases)
        violations = validate_descent(bad)
        assert any(v.condition == "cocycle" for v in violations)

    def test_consistent_triple_passes(self):
        d, fan = p2_descent_from_rep()
        assert validate_descent(d) == []


class TestGlueMorphism:
    def test_functoriality_on_random_scalar_data(self):
        rng = random.Random(23)
        fan = p1_fan()
        for _ in range(10):
            m = Fraction(rng.choice([2, 3, 5]), rng.choice([1, 2]))
            d1 = p1_datum(m, 1 / m, delta=rng.choice([1, 2, 3]))
            d2 = p1_datum(m, 1 / m, delta=rng.choice([1, 2, 3]))
            # chart morphisms: scalars commuting with everything, delta-compatible
            k1, k2 = maximal_cones(fan)
            c = Fraction(rng.randint(1, 4))
            comp1 = Morphism(
                d1.charts[k1],
                d2.charts[k1],
                {vtx: scalar(c) for vtx in d1.charts[k1].quiver.vertices},
            )
            # compatibility forces the chart-2 component on the overlap
            delta_ratio = mat_mul(
                d2.delta(k1, k2, ()), mat_mul(scalar(c), d1.delta(k1, k2, ()).invert())
            )
            comp2_maps = {
                (): delta_ratio,
                (2,): scalar(
                    delta_ratio.entry(0, 0)
                ),  # transporting along u/v of chart 2 keeps the scalar
            }
            comp2 = Morphism(d1.charts[k2], d2.charts[k2], comp2_maps)
            mor = DescentMorphism(d1, d2, {k1: comp1, k2: comp2})
            assert mor.is_valid()
            glued = glue_morphism(mor)
            assert glued.is_valid()

    def test_glued_hom_dimension_matches_descent_homs(self):
        # 1-dimensional P^1 instances: the space of descent-compatible
        # morphism families, brute-forced as a small nullspace over the
        # scalar unknowns (x_0, x_1) chart 1, (y_0, y_2) chart 2
        from fanrep.exactnum import solve_nullspace

        cases = [
            (Fraction(2), 1, 1),
            (Fraction(2), 1, 3),
            (Fraction(3), 2, 5),
            (Fraction(5, 2), 1, 2),
        ]
        for m, d1_delta, d2_delta in cases:
            d1 = p1_datum(m, 1 / m, delta=d1_delta)
            d2 = p1_datum(m, 1 / m, delta=d2_delta)
            glued_dim = len(hom_basis(glue(d1), glue(d2)))
            k1, k2 = maximal_cones(d1.fan)
            rows = []

            def chart_rows(chart_a, chart_b, x_low, x_high):
                # x_high . u - u' . x_low = 0 and x_low . v - v' . x_high = 0
                edge = chart_a.quiver.arrow_pairs[0]
                row = [Fraction(0)] * 4
                row[x_high] = chart_a.u[edge].entry(0, 0)
                row[x_low] -= chart_b.u[edge].entry(0, 0)
                rows.append(list(row))
                row = [Fraction(0)] * 4
                row[x_low] = chart_a.v[edge].entry(0, 0)
                row[x_high] -= chart_b.v[edge].entry(0, 0)
                rows.append(list(row))

            chart_rows(d1.charts[k1], d2.charts[k1], 0, 1)
            chart_rows(d1.charts[k2], d2.charts[k2], 2, 3)
            # delta compatibility at the shared torus vertex:
            # y_0 . delta1 - delta2 . x_0 = 0
            row = [Fraction(0)] * 4
            row[2] = d1.delta(k1, k2, ()).entry(0, 0)
            row[0] = -d2.delta(k1, k2, ()).entry(0, 0)
            rows.append(row)
            descent_dim = len(solve_nullspace(RatMatrix.from_rows(rows)))
            assert glued_dim == descent_dim


class TestMixedDimensionCharts:
    """Fans whose maximal cones have different dimensions: the vertex
    owner and the loop-reference chart can differ, so section and glue
    must derive loop operators through expansions."""

    def mixed_fan(self):
        # Z^4: a ray chart (1,) and a 2-dimensional chart (2,3)
        cones = set(Cone((1,)).faces()) | set(Cone((2, 3)).faces())
        return Fan(
            4,
            [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)],
            cones,
        )

    def mixed_rep(self):
        fan = self.mixed_fan()
        quiver = fan_quiver(fan)
        dims = {v: 1 for v in quiver.vertices}
        u = {e: scalar(0) for e in quiver.arrow_pairs}
        v = {e: scalar(0) for e in quiver.arrow_pairs}
        u[((), (1,))] = scalar(1)
        v[((), (1,))] = scalar(1)  # arrow monodromy 2 toward ray 1
        loops = {key: scalar(1) for key in (
            ((2,), 7), ((2,), 8), ((3,), 7), ((3,), 8), ((2, 3), 7), ((2, 3), 8),
        )}
        loops[((), 7)] = scalar(2)  # direction e1 = ray 1, must equal the arrow monodromy
        loops[((), 8)] = scalar(3)  # free torus direction e4
        # the edge toward ray 1 has u = v = 1, so the chart-(1,) loops are
        # pinned to the origin operators of the same directions:
        loops[((1,), 4)] = scalar(1)  # e2 direction, matches M at the (2,) arrow
        loops[((1,), 5)] = scalar(1)  # e3 direction
        loops[((1,), 6)] = scalar(3)  # e4 direction, matches the label-8 loop
        return fan, Representation(quiver, dims, u, v, loops)

    def test_quiver_labels(self):
        fan = self.mixed_fan()
        q = fan_quiver(fan)
        assert q.loops[()] == (7, 8)       # reference chart (2,3), two completions
        assert q.loops[(1,)] == (4, 5, 6)  # reference chart (1,), three completions
        assert q.loops[(2,)] == (7, 8)

    def test_validate_and_roundtrip(self):
        fan, rep = self.mixed_rep()
        assert validate_CDelta(rep, fan) == []
        d = section(rep, fan)
        assert validate_descent(d) == []
        assert glue(d) == rep

    def test_loop_tied_to_arrow_monodromy(self):
        fan, rep = self.mixed_rep()
        loops = dict(rep.loop_maps)
        loops[((), 7)] = scalar(5)  # no longer equals the direction-1 monodromy
        bad = Representation(rep.quiver, rep.dims, rep.u, rep.v, loops)
        violations = validate_CDelta(bad, fan)
        assert any(v.condition == "iii" for v in violations)

    def test_cross_label_transport_enforced_globally(self):
        # the direction-e4 loop is labelled 8 at the origin and 6 at the
        # ray-1 vertex; breaking one end must fail global validation the
        # same way it fails the chart-side checks
        fan, rep = self.mixed_rep()
        loops = dict(rep.loop_maps)
        loops[((1,), 6)] = scalar(7)
        bad = Representation(rep.quiver, rep.dims, rep.u, rep.v, loops)
        global_violations = validate_CDelta(bad, fan)
        assert ("loop", ("-1", 6, "u")) in {
            (v.condition, v.location) for v in global_violations
        }
        with pytest.raises(DescentError):
            section(bad, fan)

    def test_full_dim_chart_with_lower_lex_neighbor(self):
        # maximal cones (1,4) and (2,3,5): the vertex owner (1,4) is not
        # the loop reference of the origin (no loops there at all)
        cones = set(Cone((1, 4)).faces()) | set(Cone((2, 3, 5)).faces())
        fan = Fan(
            3,
            [(-1, 0, 0), (1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1)],
            cones,
        )
        quiver = fan_quiver(fan)
        assert quiver.loops[()] == ()
        assert quiver.loops[(1,)] == (6,)
        rep = Representation(quiver, {v: 1 for v in quiver.vertices})
        assert validate_CDelta(rep, fan) == []
        assert glue(section(rep, fan)) == rep


class TestTwistedLoopDescent:
    """P^1 x C* with 2x2 data: loops built as I + k.BA / I + k.AB so the
    transport identities hold, then chart 2 conjugated by a random g with
    delta = g; gluing must reproduce a valid global representation."""

    def datum(self, rng):
        fan = Fan(2, [(1, 0), (-1, 0)], [(), (1,), (2,)])
        quiver = fan_quiver(fan)
        ident = RatMatrix.identity(2)
        while True:
            a = RatMatrix(2, 2, [rng.randint(-2, 2) for _ in range(4)])
            b = RatMatrix(2, 2, [rng.randint(-2, 2) for _ in range(4)])
            k = rng.choice([1, 2, -1])
            m1 = mat_mul(b, a).add(ident)
            loop_low = mat_mul(b, a).scale(k).add(ident)
            if m1.is_invertible() and loop_low.is_invertible():
                break
        loop_high = mat_mul(a, b).scale(k).add(ident)
        rep = Representation(
            quiver,
            {v: 2 for v in quiver.vertices},
            {((), (1,)): a, ((), (2,)): ident},
            {((), (1,)): b, ((), (2,)): m1.invert().sub(ident)},
            {((), 3): loop_low, ((1,), 3): loop_high, ((2,), 4): loop_low},
        )
        assert validate_CDelta(rep, fan) == []
        base = section(rep, fan)
        while True:
            g = RatMatrix(2, 2, [rng.randint(-2, 2) for _ in range(4)])
            if g.is_invertible():
                break
        k1, k2 = maximal_cones(fan)
        c2 = base.charts[k2]
        g_inv = g.invert()
        charts = {
            k1: base.charts[k1],
            k2: Representation(
                c2.quiver,
                c2.dims,
                {e: mat_mul(mat_mul(g, c2.u[e]), g_inv) for e in c2.quiver.arrow_pairs},
                {e: mat_mul(mat_mul(g, c2.v[e]), g_inv) for e in c2.quiver.arrow_pairs},
                {key: mat_mul(mat_mul(g, mat), g_inv) for key, mat in c2.loop_maps.items()},
            ),
        }
        return fan, rep, DescentDatum(fan, charts, {(k1, k2, ()): g}, bases=base.bases)

    def test_twisted_data_glue_to_valid_reps(self):
        rng = random.Random(5150)
        for _ in range(10):
            fan, rep, datum = self.datum(rng)
            assert validate_descent(datum) == []
            glued = glue(datum)
            assert validate_CDelta(glued, fan, datum.bases) == []
            # gluing undoes the twist on the spaces owned by chart 1
            assert glued.dims == rep.dims
            assert len(hom_basis(glued, rep)) == len(hom_basis(rep, rep))


class TestProductFan:
    """Complete product fan (P^1 x P^1): four full-dimensional charts, no
    loops, and two independent inverse-monodromy relations."""

    def fan(self):
        return Fan(
            2,
            [(1, 0), (-1, 0), (0, 1), (0, -1)],
            [(), (1,), (2,), (3,), (4,), (1, 3), (1, 4), (2, 3), (2, 4)],
        )

    def rep(self, mus):
        fan = self.fan()
        quiver = fan_quiver(fan)
        dims = {v: 1 for v in quiver.vertices}
        u = {}
        v = {}
        for e in quiver.arrow_pairs:
            low, high = e
            direction = next(iter(set(high) - set(low)))
            u[e] = scalar(1)
            v[e] = scalar(mus[direction] - 1)
        return fan, Representation(quiver, dims, u, v)

    def test_valid_product_rep(self):
        fan, rep = self.rep({1: Fraction(2), 2: Fraction(1, 2), 3: Fraction(3), 4: Fraction(1, 3)})
        assert validate_CDelta(rep, fan) == []
        assert glue(section(rep, fan)) == rep

    def test_single_factor_violation(self):
        fan, rep = self.rep({1: Fraction(2), 2: Fraction(1, 2), 3: Fraction(3), 4: Fraction(3)})
        violations = validate_CDelta(rep, fan)
        assert violations != []
        assert all(v.condition == "iii" for v in violations)
        # the broken relation names only directions 3 and 4
        for v in violations:
            assert v.location[3] in (3, 4)


def test_descent_json_roundtrip():
    d = p1_datum(2, Fraction(1, 2), delta=3)
    data = descent_to_json(d)
    back = descent_from_json(data)
    assert back == d
    assert descent_to_json(back) == data


def test_descent_json_roundtrip_with_loops():
    fan = Fan(2, [(1, 0)], [(), (1,)])
    bases = chart_bases(fan)
    cone = Cone((1,))
    quiver = chart_quiver(fan, bases, cone)
    chart = Representation(
        quiver,
        {(): 1, (1,): 1},
        loops={((), 2): scalar(2), ((1,), 2): scalar(2)},
    )
    d = DescentDatum(fan, {cone: chart}, {}, bases=bases)
    data = descent_to_json(d)
    assert descent_from_json(data) == d
