"""Descent data over the maximal charts of a fan, and the gluing functor.

A descent datum holds one representation per maximal cone (over that
chart's hypercube-with-loops quiver) plus invertible overlap matrices
delta indexed by ordered chart pairs and overlap vertices.  Gluing
assembles a single fan-quiver representation by letting the
lexicographically first chart containing each vertex own it and routing
cross-chart arrows through delta; the quasi-inverse restricts a global
representation to every chart with identity deltas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .charts import stratum_loop_exponents
from .exactnum import NotInvertibleError, RatMatrix, invert, mat_mul
from .geometry import (
    ChartBasis,
    Cone,
    Fan,
    chart_bases,
    cone_key,
    fan_from_json,
    fan_to_json,
    loop_reference,
    maximal_cones,
    parse_cone_key,
)
from .quivers import Quiver, Vertex, fan_quiver, vertex_key, parse_vertex_key
from .reps import (
    Morphism,
    Representation,
    Violation,
    _check_invertibility,
    _check_loops,
    _check_squares,
    _DirectionResolver,
    _violation_sort_key,
    monodromy,
    rep_from_json,
    rep_to_json,
    validate_CDelta,
)

__all__ = [
    "DescentDatum",
    "DescentError",
    "DescentMorphism",
    "chart_quiver",
    "validate_descent",
    "glue",
    "section",
    "glue_morphism",
    "descent_to_json",
    "descent_from_json",
]


class DescentError(ValueError):
    """Structural problem with a descent datum (shapes, missing pieces)."""


def chart_quiver(fan: Fan, bases: Dict[Cone, ChartBasis], cone: Cone) -> Quiver:
    """Quiver of one affine chart: the hypercube on the cone's ray set,
    with the chart's completion labels as loops at every vertex."""
    indices = cone.ray_indices
    vertices = [
        tuple(sub)
        for r in range(len(indices) + 1)
        for sub in itertools.combinations(indices, r)
    ]
    pairs = []
    for v in vertices:
        for p in indices:
            if p not in v:
                pairs.append((v, tuple(sorted(v + (p,)))))
    loops = {v: bases[cone].completion_labels for v in vertices}
    return Quiver(vertices, pairs, loops)


def _subsets(indices) -> list:
    indices = tuple(indices)
    return [
        tuple(sub)
        for r in range(len(indices) + 1)
        for sub in itertools.combinations(indices, r)
    ]


class DescentDatum:
    """Per-chart representations plus overlap isomorphisms delta.

    Deltas map the first chart's space into the second's:
    delta(K, K', J): E^K_J -> E^K'_J.  Only one direction per pair needs
    to be supplied; the reverse is the exact inverse.  delta(K, K, J) is
    the identity.
    """

    __slots__ = ("fan", "bases", "basis_overrides", "charts", "_deltas")

    def __init__(self, fan: Fan, charts: Dict[Cone, Representation], deltas, bases=None, basis_overrides=None):
        if bases is None:
            bases = chart_bases(fan, basis_overrides)
        object.__setattr__(self, "fan", fan)
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "basis_overrides", dict(basis_overrides or {}))
        tops = maximal_cones(fan)
        charts = dict(charts)
        for cone in tops:
            if cone not in charts:
                raise DescentError(f"missing chart representation for {cone.ray_indices}")
            expected = chart_quiver(fan, bases, cone)
            if charts[cone].quiver != expected:
                raise DescentError(
                    f"chart {cone.ray_indices} is not over its chart quiver"
                )
        extra = set(charts) - set(tops)
        if extra:
            raise DescentError(f"charts given for non-maximal cones {sorted(extra)}")
        object.__setattr__(self, "charts", charts)

        stored = {}
        for (k, kp, j), mat in dict(deltas).items():
            k = k if isinstance(k, Cone) else Cone(tuple(k))
            kp = kp if isinstance(kp, Cone) else Cone(tuple(kp))
            j = tuple(sorted(j))
            if k == kp:
                raise DescentError("deltas must join two distinct charts")
            forward = k.ray_indices < kp.ray_indices
            key = (k, kp, j) if forward else (kp, k, j)
            mat_fwd = mat if forward else _exact_inverse(mat, key)
            if key in stored and stored[key] != mat_fwd:
                raise DescentError(
                    f"deltas for {key[0].ray_indices}|{key[1].ray_indices}|{j} "
                    "disagree with the inverse-pair invariant"
                )
            stored[key] = mat_fwd
        for a, b in itertools.combinations(tops, 2):
            overlap = tuple(sorted(set(a.ray_indices) & set(b.ray_indices)))
            for j in _subsets(overlap):
                key = (a, b, j)
                if key not in stored:
                    raise DescentError(
                        f"missing delta for {cone_key(a)}|{cone_key(b)}|{vertex_key(j)}"
                    )
                mat = stored[key]
                want = (self.charts[b].dims[j], self.charts[a].dims[j])
                if mat.shape != want:
                    raise DescentError(
                        f"delta {cone_key(a)}|{cone_key(b)}|{vertex_key(j)} must be "
                        f"{want[0]}x{want[1]}, got {mat.rows}x{mat.cols}"
                    )
                if not mat.is_invertible():
                    raise DescentError(
                        f"delta {cone_key(a)}|{cone_key(b)}|{vertex_key(j)} is singular"
                    )
        object.__setattr__(self, "_deltas", stored)

    def __setattr__(self, name, value):
        raise AttributeError("DescentDatum is immutable")

    def delta(self, k: Cone, kp: Cone, j) -> RatMatrix:
        j = tuple(sorted(j))
        if k == kp:
            return RatMatrix.identity(self.charts[k].dims[j])
        if k.ray_indices < kp.ray_indices:
            return self._deltas[(k, kp, j)]
        return invert(self._deltas[(kp, k, j)])

    def stored_deltas(self) -> Dict[Tuple[Cone, Cone, Vertex], RatMatrix]:
        return dict(self._deltas)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DescentDatum)
            and self.fan == other.fan
            and self.charts == other.charts
            and self._deltas == other._deltas
        )


def _exact_inverse(mat: RatMatrix, key) -> RatMatrix:
    try:
        return invert(mat)
    except NotInvertibleError:
        raise DescentError(f"delta for {key} is singular")


def _chart_direction_operator(chart: Representation, cone: Cone, vertex, label) -> RatMatrix:
    """Monodromy of a basis direction inside one chart: an arrow
    monodromy for the chart's own rays, a loop map otherwise."""
    if label in cone.ray_indices:
        return monodromy(chart, (vertex, tuple(sorted(vertex + (label,)))), "low")
    return chart.loop_maps[(vertex, label)]


def validate_descent(d: DescentDatum) -> List[Violation]:
    """Check chart validity, overlap conjugation, monodromy transport,
    and the triple cocycle."""
    out: List[Violation] = []
    tops = maximal_cones(d.fan)
    for cone in tops:
        chart = d.charts[cone]
        for violation in (
            _check_invertibility(chart) + _check_squares(chart) + _check_loops(chart)
        ):
            out.append(
                Violation(
                    violation.condition,
                    (cone_key(cone),) + violation.location,
                    violation.detail,
                )
            )

    for a, b in itertools.combinations(tops, 2):
        overlap = tuple(sorted(set(a.ray_indices) & set(b.ray_indices)))
        ca, cb = d.charts[a], d.charts[b]
        for j in _subsets(overlap):
            for p in overlap:
                if p in j:
                    continue
                jp = tuple(sorted(j + (p,)))
                edge = (j, jp)
                try:
                    dj = d.delta(a, b, j)
                    djp_inv = invert(d.delta(a, b, jp))
                except NotInvertibleError:
                    continue
                lhs_u = mat_mul(mat_mul(djp_inv, cb.u[edge]), dj)
                if lhs_u != ca.u[edge]:
                    out.append(
                        Violation(
                            "conjugation",
                            (cone_key(a), cone_key(b), f"{vertex_key(j)}-{vertex_key(jp)}", "u"),
                            "delta does not conjugate the shared u map",
                        )
                    )
                lhs_v = mat_mul(mat_mul(invert(dj), cb.v[edge]), d.delta(a, b, jp))
                if lhs_v != ca.v[edge]:
                    out.append(
                        Violation(
                            "conjugation",
                            (cone_key(a), cone_key(b), f"{vertex_key(j)}-{vertex_key(jp)}", "v"),
                            "delta does not conjugate the shared v map",
                        )
                    )

    for a, b in itertools.permutations(tops, 2):
        overlap = set(a.ray_indices) & set(b.ray_indices)
        ca, cb = d.charts[a], d.charts[b]
        basis_a, basis_b = d.bases[a], d.bases[b]
        for j in _subsets(sorted(overlap)):
            try:
                dj = d.delta(a, b, j)
                dj_inv = invert(dj)
            except NotInvertibleError:
                continue
            for p in basis_b.labels:
                if p in overlap:
                    continue
                vector = basis_b.column(p)
                try:
                    m_far = _chart_direction_operator(cb, b, j, p)
                    lhs = mat_mul(mat_mul(dj_inv, m_far), dj)
                    alpha = stratum_loop_exponents(basis_a, j, vector)
                    rhs = RatMatrix.identity(ca.dims[j])
                    for label in sorted(alpha):
                        exp = alpha[label]
                        if exp == 0:
                            continue
                        op = _chart_direction_operator(ca, a, j, label)
                        rhs = mat_mul(rhs, op.power(exp))
                except NotInvertibleError:
                    continue  # the chart validity section already reports this
                if lhs != rhs:
                    out.append(
                        Violation(
                            "transport",
                            (cone_key(a), cone_key(b), vertex_key(j), p),
                            "conjugated monodromy does not match the exponent product",
                        )
                    )

    for a, b, c in itertools.permutations(tops, 3):
        overlap = set(a.ray_indices) & set(b.ray_indices) & set(c.ray_indices)
        for j in _subsets(sorted(overlap)):
            left = mat_mul(d.delta(b, c, j), d.delta(a, b, j))
            if left != d.delta(a, c, j):
                out.append(
                    Violation(
                        "cocycle",
                        (cone_key(a), cone_key(b), cone_key(c), vertex_key(j)),
                        "deltas fail the triple cocycle",
                    )
                )
    return sorted(out, key=_violation_sort_key)


def _owner(tops, vertex) -> Cone:
    for cone in tops:
        if set(vertex) <= set(cone.ray_indices):
            return cone
    raise DescentError(f"no maximal cone contains vertex {vertex}")


def glue(d: DescentDatum) -> Representation:
    """Assemble the global fan-quiver representation from a valid datum.

    Each vertex is owned by the lexicographically first maximal cone
    containing it; arrows whose two ends have different owners are routed
    through the owning charts' delta.
    """
    violations = validate_descent(d)
    if violations:
        raise DescentError(
            f"descent datum is invalid; first violation: {violations[0]}"
        )
    fan = d.fan
    bases = d.bases
    quiver = fan_quiver(fan, bases)
    tops = maximal_cones(fan)
    dims = {}
    owners = {}
    for vtx in quiver.vertices:
        owner = _owner(tops, vtx)
        owners[vtx] = owner
        dims[vtx] = d.charts[owner].dims[vtx]
    u = {}
    v = {}
    for edge in quiver.arrow_pairs:
        low, high = edge
        a = owners[low]
        b = owners[high]
        chart = d.charts[b]
        delta = d.delta(a, b, low)
        u[edge] = mat_mul(chart.u[edge], delta)
        v[edge] = mat_mul(invert(delta), chart.v[edge])
    loops = {}
    for vtx in quiver.vertices:
        owner = owners[vtx]
        chart = d.charts[owner]
        ref = loop_reference(fan, Cone(vtx))
        for label in quiver.loops[vtx]:
            if ref == owner:
                loops[(vtx, label)] = chart.loop_maps[(vtx, label)]
            else:
                vector = bases[ref].column(label)
                alpha = stratum_loop_exponents(bases[owner], vtx, vector)
                acc = RatMatrix.identity(chart.dims[vtx])
                for lab in sorted(alpha):
                    exp = alpha[lab]
                    if exp == 0:
                        continue
                    op = _chart_direction_operator(chart, owner, vtx, lab)
                    acc = mat_mul(acc, op.power(exp))
                loops[(vtx, label)] = acc
    return Representation(quiver, dims, u, v, loops)


def section(rep: Representation, fan: Fan, bases=None, basis_overrides=None) -> DescentDatum:
    """Restrict a valid fan-quiver representation to every chart, with
    identity deltas."""
    if bases is None:
        bases = chart_bases(fan, basis_overrides)
    violations = validate_CDelta(rep, fan, bases)
    if violations:
        raise DescentError(
            f"representation is invalid; first violation: {violations[0]}"
        )
    resolver = _DirectionResolver(rep, fan, bases)
    tops = maximal_cones(fan)
    charts = {}
    for cone in tops:
        quiver = chart_quiver(fan, bases, cone)
        dims = {vtx: rep.dims[vtx] for vtx in quiver.vertices}
        u = {edge: rep.u[edge] for edge in quiver.arrow_pairs}
        v = {edge: rep.v[edge] for edge in quiver.arrow_pairs}
        loops = {}
        for vtx in quiver.vertices:
            for label in quiver.loops[vtx]:
                vector = bases[cone].column(label)
                loops[(vtx, label)] = resolver.operator(vtx, label, vector)
        charts[cone] = Representation(quiver, dims, u, v, loops)
    deltas = {}
    for a, b in itertools.combinations(tops, 2):
        overlap = tuple(sorted(set(a.ray_indices) & set(b.ray_indices)))
        for j in _subsets(overlap):
            deltas[(a, b, j)] = RatMatrix.identity(rep.dims[j])
    return DescentDatum(fan, charts, deltas, bases=bases, basis_overrides=basis_overrides)


@dataclass
class DescentMorphism:
    """A morphism of descent data: one chart morphism per maximal cone,
    compatible with the deltas."""

    source: DescentDatum
    target: DescentDatum
    charts: Dict[Cone, Morphism]

    def is_valid(self) -> bool:
        tops = maximal_cones(self.source.fan)
        for cone in tops:
            mor = self.charts.get(cone)
            if mor is None or not mor.is_valid():
                return False
        for a, b in itertools.combinations(tops, 2):
            overlap = tuple(sorted(set(a.ray_indices) & set(b.ray_indices)))
            for j in _subsets(overlap):
                lhs = mat_mul(self.charts[b].maps[j], self.source.delta(a, b, j))
                rhs = mat_mul(self.target.delta(a, b, j), self.charts[a].maps[j])
                if lhs != rhs:
                    return False
        return True


def glue_morphism(m: DescentMorphism) -> Morphism:
    """Image of a descent morphism under gluing: the owning chart's
    component at each vertex."""
    glued_source = glue(m.source)
    glued_target = glue(m.target)
    tops = maximal_cones(m.source.fan)
    maps = {}
    for vtx in glued_source.quiver.vertices:
        owner = _owner(tops, vtx)
        maps[vtx] = m.charts[owner].maps[vtx]
    return Morphism(glued_source, glued_target, maps)


def descent_to_json(d: DescentDatum) -> dict:
    return {
        "fan": fan_to_json(d.fan, d.basis_overrides or None),
        "charts": {
            cone_key(cone): rep_to_json(chart, include_quiver=False)
            for cone, chart in sorted(d.charts.items(), key=lambda kv: kv[0].ray_indices)
        },
        "deltas": {
            f"{cone_key(a)}|{cone_key(b)}|{vertex_key(j)}": mat.to_json()
            for (a, b, j), mat in sorted(
                d.stored_deltas().items(),
                key=lambda kv: (kv[0][0].ray_indices, kv[0][1].ray_indices, kv[0][2]),
            )
        },
    }


def descent_from_json(data: dict) -> DescentDatum:
    if not isinstance(data, dict):
        raise ValueError("descent JSON must be an object")
    try:
        fan, overrides = fan_from_json(data["fan"])
        chart_data = data["charts"]
        delta_data = data["deltas"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed descent JSON: {exc}")
    bases = chart_bases(fan, overrides)
    charts = {}
    for key, rep_data in chart_data.items():
        cone = parse_cone_key(key)
        quiver = chart_quiver(fan, bases, cone)
        charts[cone] = rep_from_json(rep_data, quiver=quiver)
    deltas = {}
    for key, rows in delta_data.items():
        a_key, b_key, j_key = key.split("|")
        deltas[
            (parse_cone_key(a_key), parse_cone_key(b_key), parse_vertex_key(j_key))
        ] = RatMatrix.from_json(rows) if rows else RatMatrix.zeros(0, 0)
    return DescentDatum(fan, charts, deltas, bases=bases, basis_overrides=overrides)
