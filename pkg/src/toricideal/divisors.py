"""Torus-invariant Q-divisors on an affine toric scheme.

A divisor is a tuple of rational coefficients indexed by the rays of the
defining cone in their canonical (lexicographic) order. The operations here
cover the canonical divisor, divisors of monomials, the Q-Cartier test, the
pair weight extracted from a Q-Cartier log divisor, and the lattice shift
that makes a non-effective divisor effective.

The pipeline requires the cone to be strongly convex and full-dimensional
with rays spanning the ambient space; then the Q-Cartier witness functional
is unique whenever it exists. Anything else is rejected with a diagnostic
rather than silently computed with a non-unique witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cones import Cone
from .exact_linalg import (
    IntVec,
    RatVec,
    as_intvec,
    as_ratvec,
    ceil_frac,
    lcm_denominators,
    pairing,
    solve_linear,
)

__all__ = [
    "QDivisor",
    "PairWeight",
    "NotQCartierError",
    "canonical_divisor",
    "div_monomial",
    "is_q_cartier",
    "pair_weight",
    "is_effective",
    "effectivizing_shift",
]


class NotQCartierError(ValueError):
    """Raised when a divisor admits no rational witness functional."""


def _require_standard_cone(cone: Cone) -> None:
    if not cone.is_strongly_convex():
        raise ValueError("cone must be strongly convex")
    if not cone.is_fulldim():
        raise ValueError(
            "cone must be full-dimensional (rays must span the ambient space); "
            "the witness functional is otherwise not unique"
        )


@dataclass(frozen=True)
class QDivisor:
    """Rational coefficients on the prime divisors dual to the cone's rays."""

    cone: Cone
    coeffs: tuple[Fraction, ...]

    def __init__(self, cone: Cone, coeffs: Sequence):
        coeffs = as_ratvec(coeffs)
        if len(coeffs) != len(cone.rays()):
            raise ValueError(
                f"expected {len(cone.rays())} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "cone", cone)
        object.__setattr__(self, "coeffs", coeffs)

    def __add__(self, other: "QDivisor") -> "QDivisor":
        if self.cone != other.cone:
            raise ValueError("divisors live on different cones")
        return QDivisor(
            self.cone, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "QDivisor":
        return QDivisor(self.cone, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "QDivisor") -> "QDivisor":
        return self + (-other)

    def scale(self, t) -> "QDivisor":
        t = Fraction(t)
        return QDivisor(self.cone, tuple(t * a for a in self.coeffs))


@dataclass(frozen=True)
class PairWeight:
    """Witness data for a Q-Cartier log divisor: w, its index r, and u = r*w."""

    w: RatVec
    r: int
    u: IntVec


def canonical_divisor(cone: Cone) -> QDivisor:
    """The canonical choice of canonical divisor: coefficient -1 on every ray."""
    _require_standard_cone(cone)
    return QDivisor(cone, [Fraction(-1)] * len(cone.rays()))


def div_monomial(v: Sequence, cone: Cone) -> QDivisor:
    """Divisor of the (possibly fractional) monomial with exponent v."""
    v = as_ratvec(v)
    return QDivisor(cone, tuple(pairing(v, ray) for ray in cone.rays()))


def is_q_cartier(d: QDivisor) -> Optional[RatVec]:
    """Witness functional w with <w, v_i> equal to each coefficient, or None."""
    _require_standard_cone(d.cone)
    solved = solve_linear(list(d.cone.rays()), list(d.coeffs))
    if solved is None:
        return None
    w, kernel = solved
    assert not kernel, "full-dimensional cone must determine w uniquely"
    return w


def pair_weight(cone: Cone, delta: QDivisor) -> PairWeight:
    """Weight of the pair: w with div x^u = r(K + Delta), u = r*w integral, r minimal."""
    log_div = canonical_divisor(cone) + delta
    w = is_q_cartier(log_div)
    if w is None:
        raise NotQCartierError(
            f"K + Delta with coefficients {log_div.coeffs} is not Q-Cartier"
        )
    r = lcm_denominators(w)
    u = as_intvec([x * r for x in w])
    return PairWeight(w=w, r=r, u=u)


def is_effective(d: QDivisor) -> bool:
    return all(c >= 0 for c in d.coeffs)


def effectivizing_shift(cone: Cone, d: QDivisor) -> IntVec:
    """Smallest lattice point a of the dual cone with d + div x^a effective.

    Enumerates dual-cone lattice points level by level along the functional
    summing the pairings with all rays (strictly positive off the origin),
    breaking ties graded-lexicographically. Such a shift always exists for a
    pointed full-dimensional cone.
    """
    _require_standard_cone(cone)
    dual = cone.dual()
    rays = cone.rays()
    rank = cone.rank

    def works(a: IntVec) -> bool:
        return all(
            pairing(a, ray) + c >= 0 for ray, c in zip(rays, d.coeffs)
        )

    zero = tuple([0] * rank)
    if works(zero):
        return zero

    ray_sum = tuple(sum(col) for col in zip(*rays))
    level = 1
    while True:
        bound = 0
        for r in dual.rays():
            denom = pairing(r, ray_sum)
            assert denom > 0
            for x in r:
                bound = max(bound, ceil_frac(Fraction(abs(x) * level) / denom))
        candidates = []
        for a in _box_points(rank, bound):
            if sum(pairing(a, ray) for ray in rays) != level:
                continue
            if not dual.contains(a):
                continue
            candidates.append(a)
        for a in sorted(candidates, key=lambda p: (sum(p), p)):
            if works(a):
                return a
        level += 1


def _box_points(rank: int, bound: int):
    if rank == 0:
        yield ()
        return
    for rest in _box_points(rank - 1, bound):
        for x in range(-bound, bound + 1):
            yield (x,) + rest
