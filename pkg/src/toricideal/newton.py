"""Newton polyhedra of monomial ideals.

The Newton polyhedron of a monomial ideal is the convex hull of its exponent
vectors plus the recession cone (the dual cone whose lattice points index the
ring's monomials). It is stored by certified vertices together with an
irredundant facet system, both computed exactly by double description on the
homogenized cone over the polyhedron. Scaling by a positive rational exponent
acts on the facet offsets; membership and strict (interior) membership are
facet-by-facet comparisons, which is exactly the boundary sensitivity the
ideal-membership tests require.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cones import Cone, polyhedron_facets, polyhedron_vertices
from .exact_linalg import (
    IntVec,
    RatVec,
    as_intvec,
    as_ratvec,
    dot_int,
    pairing,
    vec_sub,
)

__all__ = ["MonomialIdeal", "NewtonPolyhedron", "newton_polyhedron", "scale"]


@dataclass(frozen=True)
class MonomialIdeal:
    """Finite set of exponent vectors inside the dual cone's lattice points.

    ``ambient`` is the cone on the monomial side (the dual cone); every
    exponent must lie in it. Exponents are deduplicated and kept sorted.
    """

    ambient: Cone
    exponents: tuple[IntVec, ...]

    def __init__(self, ambient: Cone, exponents: Sequence[Sequence[int]]):
        exps = sorted({as_intvec(e) for e in exponents})
        for e in exps:
            if not ambient.contains(e):
                bad = next(
                    n for n in ambient.halfspaces() if dot_int(e, n) < 0
                )
                raise ValueError(
                    f"exponent {e} violates the halfspace with normal {bad}"
                )
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "exponents", tuple(exps))

    def is_empty(self) -> bool:
        return not self.exponents

    def minimal_exponents(self) -> tuple[IntVec, ...]:
        """Minimal-generator normal form: drop exponents dominated by another."""
        out: list[IntVec] = []
        for e in self.exponents:
            if any(
                e != f and self.ambient.contains(vec_sub(e, f))
                for f in self.exponents
            ):
                continue
            out.append(e)
        return tuple(out)


@dataclass(frozen=True)
class NewtonPolyhedron:
    """Unbounded rational polyhedron conv(exponents) + recession cone."""

    vertices: tuple[RatVec, ...]
    facets: tuple[tuple[IntVec, Fraction], ...]  # <m, normal> >= offset
    recession: Cone

    def contains(self, m: Sequence) -> bool:
        m = as_ratvec(m)
        return all(pairing(m, n) >= c for n, c in self.facets)

    def interior_contains(self, m: Sequence) -> bool:
        m = as_ratvec(m)
        return all(pairing(m, n) > c for n, c in self.facets)

    def scale(self, t: Fraction) -> "NewtonPolyhedron":
        """Dilate by a positive rational factor: offsets and vertices scale by t."""
        t = Fraction(t)
        if t <= 0:
            raise ValueError("scale factor must be positive")
        return NewtonPolyhedron(
            vertices=tuple(tuple(t * x for x in v) for v in self.vertices),
            facets=tuple((n, t * c) for n, c in self.facets),
            recession=self.recession,
        )


def newton_polyhedron(ideal: MonomialIdeal) -> NewtonPolyhedron:
    """Construct the Newton polyhedron of a nonempty monomial ideal."""
    if ideal.is_empty():
        raise ValueError("Newton polyhedron of the empty ideal is undefined")
    rec = ideal.ambient
    facets = polyhedron_facets(ideal.exponents, list(rec.rays()))
    verts, rec_rays = polyhedron_vertices(facets, rec.rank)
    assert tuple(rec_rays) == rec.rays(), "recession cone drifted during hull"
    return NewtonPolyhedron(
        vertices=tuple(verts), facets=tuple(facets), recession=rec
    )


def scale(p: NewtonPolyhedron, t: Fraction) -> NewtonPolyhedron:
    return p.scale(t)
