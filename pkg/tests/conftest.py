"""Shared fixtures: random instances and independent brute-force oracles.

The oracles here deliberately avoid the package's facet machinery: cone
membership goes through nonnegative-combination feasibility, interior
membership through a cross-polytope neighborhood of closed memberships, and
semigroup decomposition through descent over the Hilbert basis. Expected
values frozen in the test modules were computed with these.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from toricideal.cones import Cone
from toricideal.divisors import QDivisor
from toricideal.exact_linalg import feasible, pairing, vec_sub
from toricideal.newton import MonomialIdeal


# ---------------------------------------------------------------------------
# Independent oracles.
# ---------------------------------------------------------------------------


def in_cone_oracle(point, rays) -> bool:
    """point == sum of nonnegative rational multiples of rays, by feasibility."""
    rays = list(rays)
    if not rays:
        return all(x == 0 for x in point)
    n = len(rays)
    cons = []
    for j in range(n):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(1)
        cons.append((tuple(unit), Fraction(0), "ge"))
    for coord in range(len(point)):
        row = tuple(Fraction(r[coord]) for r in rays)
        cons.append((row, Fraction(point[coord]), "eq"))
    return feasible(cons, n)


def in_scaled_newton_oracle(m, exponents, dual_rays, t: Fraction) -> bool:
    """Closed membership of m in t * (conv(exponents) + cone(dual_rays)).

    Feasibility of m = t * sum(mu_i e_i) + sum(nu_j r_j) with mu a convex
    combination and nu >= 0.
    """
    t = Fraction(t)
    exps = list(exponents)
    rays = list(dual_rays)
    k, s = len(exps), len(rays)
    nvars = k + s
    cons = []
    for j in range(nvars):
        unit = [Fraction(0)] * nvars
        unit[j] = Fraction(1)
        cons.append((tuple(unit), Fraction(0), "ge"))
    cons.append(
        (tuple([Fraction(1)] * k + [Fraction(0)] * s), Fraction(1), "eq")
    )
    for coord in range(len(m)):
        row = [t * Fraction(e[coord]) for e in exps]
        row += [Fraction(r[coord]) for r in rays]
        cons.append((tuple(row), Fraction(m[coord]), "eq"))
    return feasible(cons, nvars)


def in_scaled_newton_interior_oracle(m, exponents, dual_rays, t: Fraction) -> bool:
    """Interior membership via closed membership of a cross-polytope around m.

    m is interior iff m plus and minus a small multiple of every unit vector
    stays inside; the test quantifies the shift with an extra feasibility
    variable per direction.
    """
    d = len(m)
    eps = Fraction(1, 128)
    for axis in range(d):
        for sign in (1, -1):
            probe = list(Fraction(x) for x in m)
            probe[axis] += sign * eps
            if not in_scaled_newton_oracle(probe, exponents, dual_rays, t):
                return False
    return in_scaled_newton_oracle(m, exponents, dual_rays, t)


def region_points_oracle(sigma, w, exponents, t, bound):
    """Brute-force triple-region lattice points in a coordinate box."""
    dual_rays = sigma.dual().rays()
    out = set()
    for v in itertools.product(range(-bound, bound + 1), repeat=sigma.rank):
        if not in_cone_oracle(v, dual_rays):
            continue
        shifted = tuple(Fraction(x) - Fraction(ww) for x, ww in zip(v, w))
        if in_scaled_newton_interior_oracle(shifted, exponents, dual_rays, t):
            out.add(v)
    return out


def minimal_elements_oracle(points, dual_rays):
    """Minimal elements under the cone order, by pairwise feasibility checks."""
    points = sorted(points)
    out = []
    for p in points:
        if any(
            q != p and in_cone_oracle(vec_sub(p, q), dual_rays) for q in points
        ):
            continue
        out.append(p)
    return sorted(out)


def make_decomposition_oracle(basis, cone: Cone):
    """Memoized decomposition test over the basis, by descent on the weight level.

    Subtracting any basis element strictly lowers the (positive) weight level,
    so the search is finite; results are cached across queries.
    """
    basis = [tuple(h) for h in basis]
    zero = tuple(0 for _ in range(cone.rank))
    memo = {zero: True}

    def query(v):
        v = tuple(v)
        stack = [v]
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            result = False
            unresolved = []
            for h in basis:
                y = vec_sub(cur, h)
                if not cone.contains(y):
                    continue
                known = memo.get(y)
                if known:
                    result = True
                    break
                if known is None:
                    unresolved.append(y)
            if result:
                memo[cur] = True
                stack.pop()
            elif unresolved:
                stack.extend(unresolved)
            else:
                memo[cur] = False
                stack.pop()
        return memo[v]

    return query


def decomposes_oracle(v, basis, cone: Cone) -> bool:
    return make_decomposition_oracle(basis, cone)(v)


# ---------------------------------------------------------------------------
# Random instance generators.
# ---------------------------------------------------------------------------

INTERESTING_CONES_2D = [
    Cone([(1, 0), (0, 1)]),
    Cone([(1, -1), (0, 1)]),
    Cone([(1, 0), (1, 2)]),
    Cone([(0, 1), (2, -1)]),
    Cone([(0, 1), (3, -1)]),
    Cone([(0, 1), (3, -2)]),
    Cone([(1, -2), (1, 3)]),
    Cone([(2, -3), (1, 2)]),
]


def random_cone(rng: random.Random, rank: int, max_rays: int = 4, spread: int = 3) -> Cone:
    """Random strongly convex full-dimensional cone with modest multiplicity."""
    while True:
        k = rng.randint(rank, max_rays)
        vecs = []
        for _ in range(k):
            v = tuple(rng.randint(-spread, spread) for _ in range(rank))
            if any(v):
                vecs.append(v)
        if len(vecs) < rank:
            continue
        cone = Cone(vecs, rank=rank)
        if not (cone.is_strongly_convex() and cone.is_fulldim()):
            continue
        try:
            volume = sum(
                Cone(s, rank=rank).multiplicity() for s in cone.triangulate()
            )
        except ValueError:
            continue
        if volume > 12:
            continue
        return cone


def random_delta(rng: random.Random, cone: Cone, effective_only: bool = True) -> QDivisor:
    """Random Q-divisor with small denominators such that K + Delta is Q-Cartier."""
    rays = cone.rays()
    if len(rays) == cone.rank:
        choices = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2),
                   Fraction(3, 4), Fraction(1), Fraction(3, 2)]
        return QDivisor(cone, [rng.choice(choices) for _ in rays])
    # more rays than rank: build Delta from a witness so K + Delta stays Q-Cartier
    while True:
        den = rng.choice([1, 2, 3, 4])
        w = tuple(Fraction(rng.randint(-2 * den, 2 * den), den) for _ in range(cone.rank))
        coeffs = [pairing(w, r) + 1 for r in rays]
        if all(c >= 0 for c in coeffs) or not effective_only:
            return QDivisor(cone, coeffs)


def random_ideal(rng: random.Random, cone: Cone, max_gens: int = 5, coord_bound: int = 5) -> MonomialIdeal:
    """Random nonempty monomial ideal with exponents inside the dual cone."""
    dual = cone.dual()
    pool = [
        v
        for v in itertools.product(range(-coord_bound, coord_bound + 1), repeat=cone.rank)
        if dual.contains(v) and any(v)
    ]
    k = rng.randint(1, max_gens)
    exps = rng.sample(pool, min(k, len(pool)))
    return MonomialIdeal(dual, exps)


@pytest.fixture(scope="session")
def rng():
    return random.Random(20240811)
