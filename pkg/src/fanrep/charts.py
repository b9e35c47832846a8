"""Toric chart transitions as integer exponent matrices.

A transition between smooth charts is a Laurent-monomial map; everything
the library needs from it (loop transport, cocycles) is linear in the
exponents, so the map is represented by its exponent matrix alone.  Row i
of the matrix holds the coordinates of the i-th dual basis vector of the
target chart against the source chart's dual basis, i.e. the map sends
source coordinates x to y_i = prod_j x_j ** A[i][j].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

from .exactnum import IntMatrix, invert, mat_mul
from .geometry import ChartBasis, Cone, Fan, chart_bases, maximal_cones

__all__ = [
    "MonomialMap",
    "CocycleError",
    "IllPosedError",
    "gluing_map",
    "compose",
    "check_cocycle",
    "stratum_loop_exponents",
    "basis_coordinates",
]


class CocycleError(ValueError):
    """A triple of chart transitions fails h_IJ then h_JK = h_IK."""

    def __init__(self, triple, detail: str):
        self.triple = triple
        super().__init__(detail)


class IllPosedError(ValueError):
    """A loop-exponent request names a vertex the chart cannot see."""


@dataclass(frozen=True)
class MonomialMap:
    """Invertible monomial coordinate change between charts of equal dim."""

    exponents: IntMatrix

    def __post_init__(self):
        if not self.exponents.is_unimodular():
            raise ValueError("monomial transition must have |det| = 1")

    @property
    def dim(self) -> int:
        return self.exponents.rows

    def is_identity(self) -> bool:
        return self.exponents == IntMatrix.identity(self.dim)

    def inverse(self) -> "MonomialMap":
        inv = invert(self.exponents.to_rational())
        return MonomialMap(
            IntMatrix(self.dim, self.dim, [x.numerator for x in inv.entries])
        )


def _integral_columns(mat) -> IntMatrix:
    for x in mat.entries:
        if x.denominator != 1:
            raise ValueError("change of basis is not integral; bases are not unimodular")
    return IntMatrix(mat.rows, mat.cols, [x.numerator for x in mat.entries])


from functools import lru_cache


@lru_cache(maxsize=256)
def _cached_inverse(matrix: IntMatrix):
    return invert(matrix.to_rational())


def basis_coordinates(basis: ChartBasis, vector: Sequence[int]) -> Dict[int, int]:
    """Exact coordinates of an integer vector in a chart basis, by label."""
    inv = _cached_inverse(basis.basis)
    coords = mat_mul(inv, _column(vector, basis.basis.rows))
    out = {}
    for label, value in zip(basis.labels, coords.entries):
        if value.denominator != 1:
            raise ValueError(f"{vector} has non-integer coordinates in the chart basis")
        out[label] = value.numerator
    return out


def _column(vector: Sequence[int], n: int):
    from .exactnum import RatMatrix

    vector = list(vector)
    if len(vector) != n:
        raise ValueError(f"vector {vector} is not {n}-dimensional")
    return RatMatrix.column(vector)


def gluing_map(basis_k: ChartBasis, basis_kp: ChartBasis) -> MonomialMap:
    """Exponent matrix of the transition from chart K to chart K'.

    A = B_K'^{-1} . B_K; row i gives the chart-K exponents of the i-th
    chart-K' coordinate.  When the charts coincide the result is the
    identity.
    """
    b_k = basis_k.basis
    b_kp = basis_kp.basis
    if b_k.shape != b_kp.shape:
        raise ValueError("charts live in different ambient dimensions")
    a = mat_mul(invert(b_kp.to_rational()), b_k.to_rational())
    return MonomialMap(_integral_columns(a))


def compose(m1: MonomialMap, m2: MonomialMap) -> MonomialMap:
    """Composite monomial map, applying m2 first and then m1."""
    if m1.dim != m2.dim:
        raise ValueError(f"dimension mismatch: {m1.dim} vs {m2.dim}")
    return MonomialMap(m1.exponents.mul(m2.exponents))


def check_cocycle(fan: Fan, bases: Dict[Cone, ChartBasis]) -> None:
    """Verify h_IJ then h_JK equals h_IK on every ordered maximal triple.

    Holds identically for bases produced by chart_bases (matrix
    associativity); kept as a regression guard on index bookkeeping and
    on user-supplied basis overrides.
    """
    tops = maximal_cones(fan)
    glue = {
        (a, b): gluing_map(bases[a], bases[b])
        for a, b in itertools.product(tops, repeat=2)
    }
    for i, j in itertools.product(tops, repeat=2):
        pair = compose(glue[j, i], glue[i, j])
        if not pair.is_identity():
            raise CocycleError(
                (i, j),
                f"transition {i.ray_indices}->{j.ray_indices} composed with its "
                "reverse is not the identity",
            )
    for i, j, k in itertools.product(tops, repeat=3):
        left = compose(glue[j, k], glue[i, j])
        if left.exponents != glue[i, k].exponents:
            raise CocycleError(
                (i, j, k),
                f"cocycle fails on ({i.ray_indices}, {j.ray_indices}, {k.ray_indices})",
            )


def stratum_loop_exponents(
    basis_k: ChartBasis, vertex: Iterable[int], vector: Sequence[int]
) -> Dict[int, int]:
    """Exponents expressing a monodromy direction at a stratum vertex.

    ``vector`` is the lattice vector of some basis direction p of another
    chart; the result maps each chart-K label outside the vertex to the
    coordinate of ``vector`` on it.  Coordinates on labels inside the
    vertex are discarded: the corresponding coordinates vanish on the
    stratum, so the transported loop is insensitive to them.  Raises
    IllPosedError when the vertex is not a face of chart K's cone, since
    then the chart has no monodromy operators at that vertex at all.
    """
    vertex = frozenset(int(i) for i in vertex)
    if not vertex <= set(basis_k.cone.ray_indices):
        raise IllPosedError(
            f"vertex {sorted(vertex)} is not a face of chart {basis_k.cone.ray_indices}"
        )
    coords = basis_coordinates(basis_k, vector)
    return {label: c for label, c in coords.items() if label not in vertex}
