"""Desk-scale annihilator oracle for pair test ideals.

The top local cohomology of the toric ring is spanned, degree by degree, by
monomials with exponents in the negated interior of the dual cone; the
multiplication kernel into a fractional-lattice thickening and the pairing
into the injective hull both reduce to lattice conditions. Truncating to a
coordinate box gives a finite computation that can only weaken the
annihilation condition: the oracle may over-approximate near the box
boundary but never excludes a true member. Candidate monomials are
restricted to the canonical module's support (the interior of the dual
cone, after the effectivizing twist), which is the ambient module of the
annihilator pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cones import Cone
from .divisors import (
    QDivisor,
    canonical_divisor,
    effectivizing_shift,
    is_effective,
    pair_weight,
)
from .exact_linalg import (
    IntVec,
    as_intvec,
    as_ratvec,
    pairing,
    vec_add,
    vec_neg,
)

__all__ = [
    "TruncationBox",
    "GradedKernel",
    "cohomology_monomials",
    "kernel_monomials",
    "pairs_to_zero",
    "oracle_pair_ideal",
]


@dataclass(frozen=True)
class TruncationBox:
    """Finite window onto the graded modules: coordinate bound and lattice scale."""

    bound: int
    lattice_scale: int = 1

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("box bound must be at least 1")
        if self.lattice_scale < 1:
            raise ValueError("lattice scale must be at least 1")


@dataclass(frozen=True)
class GradedKernel:
    """Degrees of the truncated multiplication kernel in top local cohomology."""

    points: frozenset[IntVec]


def _box_points(rank: int, bound: int):
    if rank == 0:
        yield ()
        return
    for x in range(-bound, bound + 1):
        for rest in _box_points(rank - 1, bound):
            yield (x,) + rest


def cohomology_monomials(sigma: Cone, box: TruncationBox) -> frozenset[IntVec]:
    """Monomial degrees spanning truncated top local cohomology.

    These are the negatives of interior lattice points of the dual cone with
    coordinates bounded by the box. With lattice scale n the returned vectors
    are n times the fractional degrees, i.e. interior points of the
    n-scaled window, kept integral.
    """
    dual = sigma.dual()
    n = box.lattice_scale
    out = set()
    for mu in _box_points(sigma.rank, box.bound * n):
        if dual.interior_contains(mu):
            out.add(vec_neg(mu))
    return frozenset(out)


def kernel_monomials(sigma: Cone, w: Sequence, box: TruncationBox) -> GradedKernel:
    """Degrees t of the kernel of multiplication by the weight-w monomial.

    The target lives on the 1/n lattice, so n*w must be integral for the
    box's scale n. A degree t = -lambda survives in the target exactly when
    -(t + w) stays interior to the dual cone; kernel membership is the
    complement.
    """
    w = as_ratvec(w)
    n = box.lattice_scale
    for x in w:
        if (x * n).denominator != 1:
            raise ValueError(
                f"lattice scale {n} does not make the weight {tuple(w)} integral"
            )
    dual = sigma.dual()
    points = set()
    for t in cohomology_monomials(sigma, TruncationBox(box.bound, 1)):
        if not dual.interior_contains(vec_neg(vec_add(t, w))):
            points.add(t)
    return GradedKernel(points=frozenset(points))


def pairs_to_zero(t: Sequence[int], v: Sequence[int], sigma: Cone) -> bool:
    """Whether the cohomology class in degree t kills the monomial of degree v.

    The pairing into the injective hull vanishes exactly when t + v pairs
    strictly positively against some ray of the cone.
    """
    s = vec_add(as_intvec(t), as_intvec(v))
    return any(pairing(s, ray) > 0 for ray in sigma.rays())


def oracle_pair_ideal(
    sigma: Cone, delta: QDivisor, box: TruncationBox
) -> frozenset[IntVec]:
    """Box-truncated annihilator approximation of the pair test ideal.

    Computes the kernel for the effectivized weight (shifting by a monomial
    when K + Delta is not effective, then translating candidates back) and
    keeps the dual-cone lattice points of the box whose twisted degree lies
    in the canonical module and pairs every kernel element to zero. The
    result agrees with the closed-formula region away from the box boundary
    and is a superset of it everywhere in the box.
    """
    pw = pair_weight(sigma, delta)
    log_div = canonical_divisor(sigma) + delta
    if is_effective(log_div):
        a: IntVec = tuple([0] * sigma.rank)
    else:
        a = effectivizing_shift(sigma, log_div)
    w_eff = vec_add(pw.w, a)
    kern = kernel_monomials(
        sigma, w_eff, TruncationBox(box.bound, pw.r)
    ).points
    dual = sigma.dual()
    out = set()
    for v in _box_points(sigma.rank, box.bound):
        if not dual.contains(v):
            continue
        shifted = vec_add(v, a)
        if not dual.interior_contains(shifted):
            continue
        if all(pairs_to_zero(t, shifted, sigma) for t in kern):
            out.add(v)
    return frozenset(out)
