"""Fans, star subdivisions and smooth refinement, plus the resolution-based
multiplier ideal as an independent computation route.

A fan is stored by its maximal cones; faces are implied. ``resolve`` first
triangulates non-simplicial maximal cones by star subdivisions at their own
rays (adding no new rays), then repeatedly subdivides a maximal-multiplicity
simplicial cone at a parallelotope lattice point chosen with minimal
coefficient sum. The chosen point lies in no smooth cone, so smooth cones of
the input survive, the maximal multiplicity never increases, and the count
of cones realizing it strictly drops: the loop terminates with a smooth fan
on the same support. Steps are recorded and replayable.

The multiplier ideal route builds the vertex normal fan of the ideal's
Newton polyhedron (on which the ideal becomes locally principal), smooths
it, and turns the per-ray order-of-vanishing thresholds into a closed
membership region handed to the shared generator search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .cones import Cone, rays_from_halfspaces
from .divisors import QDivisor, pair_weight
from .exact_linalg import (
    IntVec,
    as_intvec,
    as_ratvec,
    dot_int,
    floor_frac,
    matrix_rank,
    pairing,
    primitive,
    solve_linear,
)
from .newton import MonomialIdeal
from .test_ideals import IdealAnswer, MembershipRegion, minimal_generators

__all__ = [
    "Fan",
    "ResolutionResult",
    "ResolutionError",
    "star_subdivision",
    "resolve",
    "replay",
    "ord_along_ray",
    "normal_fan",
    "multiplier_ideal_via_resolution",
]


class ResolutionError(RuntimeError):
    """Raised when the subdivision loop exceeds its iteration cap."""


@dataclass(frozen=True)
class Fan:
    """Finite fan described by its maximal cones, canonically ordered."""

    rank: int
    maximal: tuple[Cone, ...]

    def __init__(self, cones: Iterable[Cone], rank: Optional[int] = None):
        cones = list(cones)
        if rank is None:
            if not cones:
                raise ValueError("rank of the empty fan must be given")
            rank = cones[0].rank
        for c in cones:
            if c.rank != rank:
                raise ValueError("cone rank mismatch inside fan")
            if not c.is_strongly_convex():
                raise ValueError("fan cones must be strongly convex")
        dedup = {c.rays(): c for c in cones}
        kept = {}
        for key, c in dedup.items():
            absorbed = any(
                other_key != key and all(other.contains(r) for r in c.rays())
                for other_key, other in dedup.items()
            )
            if not absorbed:
                kept[key] = c
        ordered = tuple(kept[k] for k in sorted(kept))
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "maximal", ordered)

    def rays(self) -> tuple[IntVec, ...]:
        out: set[IntVec] = set()
        for c in self.maximal:
            out.update(c.rays())
        return tuple(sorted(out))

    def support_contains(self, x: Sequence) -> bool:
        return any(c.contains(x) for c in self.maximal)

    def is_smooth(self) -> bool:
        return all(c.is_smooth() for c in self.maximal)

    def lattice_volume(self) -> int:
        """Sum of simplex multiplicities over triangulations of the maximal cones."""
        total = 0
        for c in self.maximal:
            for simplex in c.triangulate():
                total += Cone(simplex, rank=self.rank).multiplicity()
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fan):
            return NotImplemented
        return self.rank == other.rank and tuple(
            c.rays() for c in self.maximal
        ) == tuple(c.rays() for c in other.maximal)

    def __hash__(self) -> int:
        return hash((self.rank, tuple(c.rays() for c in self.maximal)))


def star_subdivision(fan: Fan, v: Sequence[int]) -> Fan:
    """Star subdivision at a primitive lattice point of the support.

    Cones not containing v are kept; each cone containing v is replaced by
    the cones over its facets avoiding v, with v adjoined.
    """
    v = as_intvec(v)
    if all(x == 0 for x in v):
        raise ValueError("subdivision point must be nonzero")
    if primitive(v) != v:
        raise ValueError("subdivision point must be primitive")
    if not fan.support_contains(v):
        raise ValueError(f"subdivision point {v} lies outside the fan support")
    new_cones: list[Cone] = []
    for c in fan.maximal:
        if not c.contains(v):
            new_cones.append(c)
            continue
        if c.rays() == ():
            continue
        if len(c.rays()) == 1:
            new_cones.append(c)  # v on a 1-dimensional cone leaves it intact
            continue
        for face in c.facets_as_ray_sets():
            face_cone = Cone(face, rank=fan.rank)
            if face_cone.contains(v):
                continue
            new_cones.append(Cone(list(face) + [v], rank=fan.rank))
    return Fan(new_cones, rank=fan.rank)


@dataclass(frozen=True)
class ResolutionResult:
    """Smooth refinement of a fan with the replayable subdivision trail."""

    refined: Fan
    steps: tuple[tuple[int, IntVec], ...]  # (index of subdivided cone, point)
    rays: tuple[IntVec, ...]

    def log(self) -> str:
        lines = [
            f"subdivide cone-{idx} at {','.join(map(str, v))}"
            for idx, v in self.steps
        ]
        return "\n".join(lines)


def replay(fan: Fan, steps: Sequence[tuple[int, IntVec]]) -> Fan:
    """Re-apply a recorded subdivision trail to a fan."""
    cur = fan
    for _, v in steps:
        cur = star_subdivision(cur, v)
    return cur


def _parallelotope_coefficient_points(cone: Cone) -> list[tuple[tuple, IntVec]]:
    """Nonzero parallelotope lattice points of a simplicial cone with their
    coefficient vectors in the ray-generator coordinates."""
    from .cones import parallelotope_points

    rays = cone.rays()
    cols = [list(col) for col in zip(*rays)]
    out = []
    for p in parallelotope_points(rays):
        solved = solve_linear(cols, p)
        assert solved is not None
        lam, _ = solved
        out.append((tuple(lam), p))
    return out


def _subdivision_point(cone: Cone) -> IntVec:
    """Parallelotope point of minimal coefficient sum, graded-lex tie-break."""
    best = None
    for lam, p in _parallelotope_coefficient_points(cone):
        key = (sum(lam), sum(p), p)
        if best is None or key < best[0]:
            best = (key, p)
    assert best is not None, "smooth cone has no parallelotope points"
    return primitive(best[1])


def resolve(fan: Fan) -> ResolutionResult:
    """Smooth refinement by star subdivisions, recording each step."""
    cap = 64 * max(1, fan.lattice_volume())
    steps: list[tuple[int, IntVec]] = []
    cur = fan

    def record(idx: int, v: IntVec) -> Fan:
        if len(steps) >= cap:
            profile = sorted(
                (c.multiplicity() if c.is_simplicial() else -1)
                for c in cur.maximal
            )
            raise ResolutionError(
                f"subdivision cap exceeded; multiplicity profile {profile}"
            )
        steps.append((idx, v))
        return star_subdivision(cur, v)

    # stage 1: triangulate non-simplicial maximal cones at their own rays
    while True:
        idx = next(
            (
                i
                for i, c in enumerate(cur.maximal)
                if not c.is_simplicial()
            ),
            None,
        )
        if idx is None:
            break
        cone = cur.maximal[idx]
        for v in cone.rays():
            candidate = star_subdivision(cur, v)
            if candidate != cur:
                cur = record(idx, v)
                break
        else:
            # pyramid over its own facet: no ray subdivision changes it
            v = primitive([sum(col) for col in zip(*cone.rays())])
            cur = record(idx, v)

    # stage 2: drive simplicial multiplicities down to 1
    while True:
        mults = [c.multiplicity() for c in cur.maximal]
        worst = max(mults, default=1)
        if worst <= 1:
            break
        idx = mults.index(worst)
        v = _subdivision_point(cur.maximal[idx])
        cur = record(idx, v)

    return ResolutionResult(refined=cur, steps=tuple(steps), rays=cur.rays())


def ord_along_ray(e: Sequence[int], ideal: MonomialIdeal) -> int:
    """Order of vanishing of the ideal along the divisor of a primitive ray."""
    e = as_intvec(e)
    if ideal.is_empty():
        raise ValueError("monomial ideal must be nonempty")
    return min(dot_int(g, e) for g in ideal.exponents)


def normal_fan(ideal: MonomialIdeal, sigma: Cone) -> Fan:
    """Vertex normal fan of the ideal's Newton polyhedron, supported on sigma.

    The maximal cone attached to an exponent p consists of the functionals
    minimized at p; it is full-dimensional exactly when p is a vertex. On
    this fan the ideal sheaf is locally principal, so its smooth refinement
    is a log resolution.
    """
    if ideal.is_empty():
        raise ValueError("monomial ideal must be nonempty")
    sigma_halfspaces = list(sigma.halfspaces())
    maximal = []
    for p in ideal.exponents:
        normals = list(sigma_halfspaces)
        for e in ideal.exponents:
            if e != p:
                diff = tuple(a - b for a, b in zip(e, p))
                normals.append(diff)
        normals = sorted({primitive(n) for n in normals if any(n)})
        rays = rays_from_halfspaces(normals, sigma.rank)
        if matrix_rank(rays) == sigma.rank:
            maximal.append(Cone(rays, rank=sigma.rank))
    return Fan(maximal, rank=sigma.rank)


def multiplier_ideal_via_resolution(
    sigma: Cone, delta: QDivisor, ideal: MonomialIdeal, t: Fraction
) -> IdealAnswer:
    """Multiplier ideal computed through a toric log resolution.

    Resolving the vertex normal fan of the Newton polyhedron gives a smooth
    fan whose rays carry the order of vanishing of the ideal; a monomial
    belongs to the ideal when its pairing against every ray clears the
    floor-rounded discrepancy threshold.
    """
    t = Fraction(t)
    if t <= 0:
        raise ValueError("exponent t must be positive")
    pw = pair_weight(sigma, delta)
    fan = normal_fan(ideal, sigma)
    res = resolve(fan)
    facets = []
    for e in res.rays:
        threshold = floor_frac(pairing(pw.w, e) + t * ord_along_ray(e, ideal)) + 1
        facets.append((e, Fraction(threshold), False))
    region = MembershipRegion(
        ambient=sigma.dual(),
        shift=as_ratvec([0] * sigma.rank),
        facets=tuple(sorted(facets)),
    )
    gens = minimal_generators(region)
    return IdealAnswer(gens, pw.w, pw.r, region, route="resolution")
