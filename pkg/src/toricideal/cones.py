"""Strongly convex rational polyhedral cones.

A :class:`Cone` is stored by a generating set of primitive integer vectors
(the V-representation); facet normals, extremal rays, Hilbert bases and
triangulations are computed lazily and cached. Cones are immutable after
construction; the caches are computed-once and idempotent, so concurrent
first access from several threads is benign.

The facet/ray enumeration used throughout is exhaustive subset enumeration
with exact rational kernels: every facet of a cone contains rank-1-many
linearly independent generators, and dually every extremal ray of a pointed
H-cone is cut out by rank-1-many independent tight halfspaces. For the
desk-scale cones this package targets (rank <= ~4, few rays) this is both
simple and fast.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from .exact_linalg import (
    IntVec,
    RatVec,
    as_intvec,
    as_ratvec,
    clear_denominators,
    determinant,
    dot_int,
    feasible,
    hermite_normal_form,
    integer_kernel_basis,
    matrix_rank,
    pairing,
    primitive,
    solve_linear,
    vec_add,
    vec_sub,
)

__all__ = [
    "Cone",
    "HilbertBasis",
    "dual_cone",
    "rays",
    "is_strongly_convex",
    "contains",
    "interior_contains",
    "hilbert_basis",
    "is_smooth_cone",
    "multiplicity",
    "facet_normals_of",
    "rays_from_halfspaces",
    "polyhedron_facets",
    "polyhedron_vertices",
]


def facet_normals_of(vectors: Sequence[IntVec], dim: int) -> list[IntVec]:
    """All facet normals of the full-dimensional cone spanned by ``vectors``.

    ``vectors`` must linearly span the ambient ``dim``-dimensional space; the
    cone need not be pointed. Returned normals are primitive and sorted.
    """
    vectors = [as_intvec(v) for v in vectors]
    found: set[IntVec] = set()
    if dim == 0:
        return []
    if dim == 1:
        if all(v[0] > 0 for v in vectors):
            return [(1,)]
        if all(v[0] < 0 for v in vectors):
            return [(-1,)]
        return []
    for subset in combinations(range(len(vectors)), dim - 1):
        rows = [vectors[i] for i in subset]
        solved = solve_linear(rows, [0] * len(rows))
        assert solved is not None
        _, kernel = solved
        if len(kernel) != 1:
            continue
        z = clear_denominators(kernel[0])
        for cand in (z, tuple(-x for x in z)):
            if all(dot_int(v, cand) >= 0 for v in vectors):
                found.add(cand)
                break
    return sorted(found)


def rays_from_halfspaces(normals: Sequence[IntVec], dim: int) -> list[IntVec]:
    """Extremal rays of the pointed cone {x : <x, n> >= 0 for all n}.

    Works for cones of any dimension inside the ambient space, as long as the
    cone contains no line; a line triggers ``ValueError``.
    """
    normals = [as_intvec(n) for n in normals]
    found: set[IntVec] = set()
    if dim == 1:
        pos = all(n[0] >= 0 for n in normals)
        neg = all(n[0] <= 0 for n in normals)
        if pos and neg:
            raise ValueError("cone is not strongly convex (contains a line)")
        return [(1,)] if pos else ([(-1,)] if neg else [])
    for subset in combinations(range(len(normals)), dim - 1):
        rows = [normals[i] for i in subset]
        solved = solve_linear(rows, [0] * len(rows))
        assert solved is not None
        _, kernel = solved
        if len(kernel) != 1:
            continue
        z = clear_denominators(kernel[0])
        zneg = tuple(-x for x in z)
        pos = all(dot_int(z, n) >= 0 for n in normals)
        neg = all(dot_int(zneg, n) >= 0 for n in normals)
        if pos and neg:
            raise ValueError("cone is not strongly convex (contains a line)")
        if pos:
            found.add(z)
        elif neg:
            found.add(zneg)
    return sorted(found)


def _span_coordinates(vectors: Sequence[IntVec]) -> tuple[list[IntVec], list[IntVec]]:
    """Integer coordinates of ``vectors`` w.r.t. an HNF basis of their row lattice.

    Returns (coords, basis): each vector equals sum coords[i][k] * basis[k].
    """
    H, _ = hermite_normal_form(vectors)
    basis = [r for r in H if any(x != 0 for x in r)]
    coords = []
    for v in vectors:
        solved = solve_linear([list(col) for col in zip(*basis)], v)
        assert solved is not None, "vector outside its own span lattice"
        part, _ = solved
        coords.append(as_intvec(part))
    return coords, basis


class Cone:
    """Rational polyhedral cone given by integer generators."""

    def __init__(self, generators: Iterable[Sequence[int]], rank: Optional[int] = None):
        gens = []
        seen = set()
        for g in generators:
            g = as_intvec(g)
            if rank is None:
                rank = len(g)
            elif len(g) != rank:
                raise ValueError("generator rank mismatch")
            if all(x == 0 for x in g):
                continue
            p = primitive(g)
            if p not in seen:
                seen.add(p)
                gens.append(p)
        if rank is None:
            raise ValueError("rank of the zero cone must be given explicitly")
        self.rank = int(rank)
        self.generators: tuple[IntVec, ...] = tuple(sorted(gens))
        self._rays: Optional[tuple[IntVec, ...]] = None
        self._halfspaces: Optional[tuple[IntVec, ...]] = None
        self._equations: Optional[tuple[IntVec, ...]] = None
        self._hilbert: Optional[tuple[IntVec, ...]] = None
        self._pointed: Optional[bool] = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_halfspaces(cls, normals: Iterable[Sequence[int]], rank: int) -> "Cone":
        """Pointed cone {x : <x, n> >= 0 for all n}, built via ray enumeration."""
        normals = [primitive(n) for n in normals if not all(x == 0 for x in n)]
        rays_ = rays_from_halfspaces(sorted(set(normals)), rank)
        cone = cls(rays_, rank=rank)
        if cone.is_fulldim():
            cone._halfspaces = tuple(sorted(set(normals)))
            cone._prune_redundant_halfspaces()
        return cone

    def _prune_redundant_halfspaces(self) -> None:
        assert self._halfspaces is not None
        rays_ = self.rays()
        kept = []
        for n in self._halfspaces:
            tight = [r for r in rays_ if dot_int(r, n) == 0]
            if matrix_rank(tight) == self.rank - 1:
                kept.append(n)
        self._halfspaces = tuple(sorted(kept))

    # -- basic structure -----------------------------------------------------

    def is_trivial(self) -> bool:
        return not self.generators

    def dim(self) -> int:
        if self.is_trivial():
            return 0
        return matrix_rank(self.generators)

    def is_fulldim(self) -> bool:
        return self.dim() == self.rank

    def is_strongly_convex(self) -> bool:
        """True iff the cone contains no line, i.e. C and -C meet only in 0."""
        if self._pointed is None:
            if self.is_trivial():
                self._pointed = True
            else:
                n = len(self.generators)
                constraints = []
                for j in range(n):
                    e = [Fraction(0)] * n
                    e[j] = Fraction(1)
                    constraints.append((tuple(e), Fraction(0), "ge"))
                constraints.append((tuple([Fraction(1)] * n), Fraction(1), "eq"))
                for coords in zip(*self.generators):
                    constraints.append(
                        (as_ratvec(coords), Fraction(0), "eq")
                    )
                self._pointed = not feasible(constraints, n)
        return self._pointed

    def rays(self) -> tuple[IntVec, ...]:
        """Primitive generators of the extremal rays, lexicographically sorted."""
        if self._rays is None:
            if not self.is_strongly_convex():
                raise ValueError("extremal rays require a strongly convex cone")
            if self.is_trivial():
                self._rays = ()
            elif len(self.generators) == 1:
                self._rays = self.generators
            else:
                coords, basis = _span_coordinates(list(self.generators))
                k = len(basis)
                normals = facet_normals_of(coords, k)
                extremal = []
                for g, c in zip(self.generators, coords):
                    tight = [n for n in normals if dot_int(c, n) == 0]
                    if matrix_rank(tight) == k - 1:
                        extremal.append(g)
                self._rays = tuple(sorted(extremal))
        return self._rays

    def _compute_hrep(self) -> None:
        if self._halfspaces is not None and self._equations is not None:
            return
        if self.is_trivial():
            self._equations = tuple(
                as_intvec([int(i == j) for j in range(self.rank)])
                for i in range(self.rank)
            )
            self._halfspaces = ()
            return
        eqs = tuple(sorted(integer_kernel_basis(list(self.generators))))
        if self.is_fulldim():
            normals = facet_normals_of(list(self.generators), self.rank)
            self._equations = ()
            self._halfspaces = tuple(normals)
            return
        coords, basis = _span_coordinates(list(self.generators))
        k = len(basis)
        sub_normals = facet_normals_of(coords, k)
        lifted = []
        for n in sub_normals:
            solved = solve_linear(basis, n)
            assert solved is not None
            part, _ = solved
            lifted.append(clear_denominators(part))
        self._equations = eqs
        self._halfspaces = tuple(sorted(lifted))

    def halfspaces(self) -> tuple[IntVec, ...]:
        """Irredundant facet normals n with the cone equal to {x : <x,n> >= 0}.

        Only meaningful for full-dimensional cones; lower-dimensional ones
        need the span equations as well and raise here.
        """
        if not self.is_fulldim():
            raise ValueError("halfspace description requires a full-dimensional cone")
        self._compute_hrep()
        assert self._halfspaces is not None
        return self._halfspaces

    def equations(self) -> tuple[IntVec, ...]:
        self._compute_hrep()
        assert self._equations is not None
        return self._equations

    # -- membership ----------------------------------------------------------

    def contains(self, x: Sequence) -> bool:
        x = as_ratvec(x)
        if len(x) != self.rank:
            raise ValueError("point rank mismatch")
        self._compute_hrep()
        assert self._halfspaces is not None and self._equations is not None
        return all(pairing(x, e) == 0 for e in self._equations) and all(
            pairing(x, n) >= 0 for n in self._halfspaces
        )

    def interior_contains(self, x: Sequence) -> bool:
        if not self.is_fulldim():
            raise ValueError("interior test requires a full-dimensional cone")
        x = as_ratvec(x)
        if len(x) != self.rank:
            raise ValueError("point rank mismatch")
        return all(pairing(x, n) > 0 for n in self.halfspaces())

    # -- duality -------------------------------------------------------------

    def dual(self) -> "Cone":
        """The dual cone {m : <m, v> >= 0 for all v in this cone}.

        Requires the cone to be strongly convex and full-dimensional so that
        the dual is as well; both representations of the dual are populated.
        """
        if not (self.is_strongly_convex() and self.is_fulldim()):
            raise ValueError("dual requires a strongly convex full-dimensional cone")
        rays_ = self.rays()
        dual_rays = rays_from_halfspaces(rays_, self.rank)
        out = Cone(dual_rays, rank=self.rank)
        out._rays = tuple(dual_rays)
        out._halfspaces = tuple(rays_)
        out._equations = ()
        out._pointed = True
        return out

    # -- smoothness ----------------------------------------------------------

    def is_simplicial(self) -> bool:
        return len(self.rays()) == self.dim()

    def multiplicity(self) -> int:
        """Lattice index of the subgroup spanned by the rays of a simplicial cone.

        Equals |det| of the ray matrix in the full-dimensional case and is 1
        exactly when the cone is smooth.
        """
        if not self.is_simplicial():
            raise ValueError("multiplicity requires a simplicial cone")
        rays_ = self.rays()
        if not rays_:
            return 1
        k = len(rays_)
        dets = []
        for cols in combinations(range(self.rank), k):
            sub = [[r[c] for c in cols] for r in rays_]
            dets.append(int(determinant(sub)))
        g = 0
        for d in dets:
            g = gcd(g, abs(d))
        assert g > 0
        return g

    def is_smooth(self) -> bool:
        """True iff the ray generators extend to a basis of the ambient lattice."""
        if not self.is_strongly_convex():
            return False
        if not self.is_simplicial():
            return False
        return self.multiplicity() == 1

    # -- faces and triangulation ----------------------------------------------

    def facets_as_ray_sets(self) -> list[tuple[IntVec, ...]]:
        """Rays lying on each facet of the cone (within its own span)."""
        rays_ = self.rays()
        if len(rays_) <= 1:
            return [()] if rays_ else []
        coords, basis = _span_coordinates(list(rays_))
        k = len(basis)
        normals = facet_normals_of(coords, k)
        out = []
        for n in normals:
            face = tuple(
                r for r, c in zip(rays_, coords) if dot_int(c, n) == 0
            )
            out.append(face)
        return sorted(out)

    def triangulate(self) -> list[tuple[IntVec, ...]]:
        """Partition into simplicial subcones spanned by subsets of the rays.

        Uses the pulling triangulation at the lexicographically least ray, so
        the result is deterministic and introduces no new rays.
        """
        return _triangulate_rays(list(self.rays()))

    # -- Hilbert basis ---------------------------------------------------------

    def hilbert_basis(self) -> tuple[IntVec, ...]:
        """Minimal generating set of the semigroup of lattice points of the cone.

        Candidates are the rays plus the lattice points of the half-open
        fundamental parallelotopes of a triangulation; reducing those to
        irreducibles yields the unique Hilbert basis. Requires a pointed
        full-dimensional cone.
        """
        if self._hilbert is not None:
            return self._hilbert
        if not self.is_strongly_convex():
            raise ValueError("Hilbert basis requires a pointed cone")
        if not self.is_fulldim():
            raise ValueError("Hilbert basis requires a full-dimensional cone")
        cands: set[IntVec] = set(self.rays())
        for simplex in self.triangulate():
            cands.update(parallelotope_points(simplex))
        cands.discard(tuple([0] * self.rank))
        weight = [sum(col) for col in zip(*self.halfspaces())]
        ordered = sorted(cands, key=lambda v: (dot_int(v, weight), sum(v), v))
        basis: list[IntVec] = []
        for v in ordered:
            reducible = any(self.contains(vec_sub(v, h)) for h in basis)
            if not reducible:
                basis.append(v)
        self._hilbert = tuple(sorted(basis))
        return self._hilbert

    # -- dunder plumbing -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return self.rank == other.rank and self.rays() == other.rays()

    def __hash__(self) -> int:
        return hash((self.rank, self.rays()))

    def __repr__(self) -> str:
        return f"Cone({list(self.rays() if self._pointed else self.generators)!r})"


def _triangulate_rays(rays_: list[IntVec]) -> list[tuple[IntVec, ...]]:
    if not rays_:
        return []
    k = matrix_rank(rays_)
    if len(rays_) == k:
        return [tuple(sorted(rays_))]
    coords, _basis = _span_coordinates(rays_)
    normals = facet_normals_of(coords, k)
    apex = rays_[0]
    apex_c = coords[0]
    simplices: set[tuple[IntVec, ...]] = set()
    for n in normals:
        if dot_int(apex_c, n) == 0:
            continue
        face = [rays_[i] for i, c in enumerate(coords) if dot_int(c, n) == 0]
        for sub in _triangulate_rays(face):
            simplices.add(tuple(sorted(sub + (apex,))))
    return sorted(simplices)


def parallelotope_points(simplex: Sequence[IntVec]) -> list[IntVec]:
    """Nonzero lattice points of the half-open parallelotope of a simplicial cone.

    The points are coset representatives of the lattice spanned by the
    generators, so there are multiplicity-many including the origin; they are
    enumerated by a closure walk over the quotient group.
    """
    gens = [as_intvec(g) for g in simplex]
    d = len(gens[0])
    cols = [list(col) for col in zip(*gens)]

    def rep(x: Sequence[int]) -> IntVec:
        solved = solve_linear(cols, x)
        assert solved is not None, "point outside span of simplex"
        lam, kernel = solved
        assert not kernel, "simplex generators must be independent"
        frac = [l - (l.numerator // l.denominator) for l in lam]
        out = [Fraction(0)] * d
        for f, g in zip(frac, gens):
            for i in range(d):
                out[i] += f * g[i]
        return as_intvec(out)

    zero = tuple([0] * d)
    units = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    reps = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for p in frontier:
            for e in units:
                q = rep(vec_add(p, e))
                if q not in reps:
                    reps.add(q)
                    nxt.append(q)
        frontier = nxt
    reps.discard(zero)
    return sorted(reps)


# ---------------------------------------------------------------------------
# Polyhedra via homogenization. A polyhedron P = conv(points) + cone is
# encoded as the cone over {(p, 1)} and {(r, 0)}; facets and vertices of P
# are read off the facets and rays of that cone.
# ---------------------------------------------------------------------------


def polyhedron_facets(
    points: Sequence[Sequence], recession_rays: Sequence[IntVec]
) -> list[tuple[IntVec, Fraction]]:
    """Irredundant facet inequalities <m, n> >= c of conv(points) + cone(rays).

    Normals are primitive integer vectors; offsets are exact rationals.
    """
    pts = [as_ratvec(p) for p in points]
    if not pts:
        raise ValueError("empty point set")
    d = len(pts[0])
    gens = []
    for p in pts:
        scale = 1
        for c in p:
            scale = scale * c.denominator // gcd(scale, c.denominator)
        gens.append(as_intvec([c * scale for c in p] + [scale]))
    for r in recession_rays:
        gens.append(as_intvec(list(r) + [0]))
    normals = facet_normals_of(gens, d + 1)
    out = []
    for n in normals:
        body, last = n[:d], n[d]
        if all(x == 0 for x in body):
            continue  # hyperplane at infinity
        g = 0
        for x in body:
            g = gcd(g, abs(x))
        out.append((tuple(x // g for x in body), Fraction(-last, g)))
    return sorted(set(out))


def polyhedron_vertices(
    ineqs: Sequence[tuple[IntVec, Fraction]], rank: int
) -> tuple[list[RatVec], list[IntVec]]:
    """Vertices and recession rays of {m : <m, n_i> >= c_i}.

    The polyhedron must be nonempty with pointed recession cone.
    """
    normals = []
    for n, c in ineqs:
        c = Fraction(c)
        normals.append(as_intvec([x * c.denominator for x in n] + [-c.numerator]))
    normals.append(as_intvec([0] * rank + [1]))
    hom_rays = rays_from_halfspaces(sorted(set(normals)), rank + 1)
    verts: list[RatVec] = []
    rec: list[IntVec] = []
    for r in hom_rays:
        if r[rank] > 0:
            verts.append(tuple(Fraction(x, r[rank]) for x in r[:rank]))
        else:
            rec.append(primitive(r[:rank]))
    if not verts:
        raise ValueError("polyhedron is empty or has no vertices")
    return sorted(verts), sorted(rec)


# ---------------------------------------------------------------------------
# Module-level operation aliases matching the documented kernel surface.
# ---------------------------------------------------------------------------


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def rays(c: Cone) -> list[IntVec]:
    return list(c.rays())


def is_strongly_convex(c: Cone) -> bool:
    return c.is_strongly_convex()


def contains(c: Cone, x: Sequence) -> bool:
    return c.contains(x)


def interior_contains(c: Cone, x: Sequence) -> bool:
    return c.interior_contains(x)


class HilbertBasis:
    """Semigroup generators of the lattice points of a pointed cone."""

    def __init__(self, elements: Iterable[IntVec]):
        self.elements: tuple[IntVec, ...] = tuple(sorted(as_intvec(e) for e in elements))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if isinstance(other, HilbertBasis):
            return self.elements == other.elements
        return NotImplemented

    def __repr__(self) -> str:
        return f"HilbertBasis({list(self.elements)!r})"


def hilbert_basis(c: Cone) -> HilbertBasis:
    return HilbertBasis(c.hilbert_basis())


def is_smooth_cone(c: Cone) -> bool:
    return c.is_smooth()


def multiplicity(c: Cone) -> int:
    return c.multiplicity()
