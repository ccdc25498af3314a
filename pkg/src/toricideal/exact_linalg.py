"""Exact rational and integer linear algebra kernels.

All values are immutable tuples of ``int`` or ``fractions.Fraction``; every
function is pure and deterministic, so the module is safe to use from multiple
threads. No floating point occurs anywhere: membership tests downstream hinge
on strict-vs-nonstrict comparisons that floats would get wrong.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Rat = Fraction
IntVec = tuple[int, ...]
RatVec = tuple[Fraction, ...]

# a linear constraint coeffs . x REL rhs with REL one of "eq", "ge", "gt"
Constraint = tuple[RatVec, Fraction, str]


def as_intvec(xs: Sequence[int]) -> IntVec:
    out = []
    for x in xs:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral coordinate {x}")
            x = x.numerator
        out.append(int(x))
    return tuple(out)


def as_ratvec(xs: Sequence) -> RatVec:
    return tuple(Fraction(x) for x in xs)


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_neg(a: Sequence) -> tuple:
    return tuple(-x for x in a)


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def is_zero_vec(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def pairing(m: Sequence, n: Sequence) -> Fraction:
    """Pairing of dual lattice (or rational) vectors, i.e. the dot product.

    Raises ``ValueError`` on a rank mismatch.
    """
    if len(m) != len(n):
        raise ValueError(f"rank mismatch: {len(m)} vs {len(n)}")
    return sum((Fraction(x) * y for x, y in zip(m, n)), Fraction(0))


def dot_int(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise ValueError(f"rank mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Sequence[int]) -> IntVec:
    """Divide an integer vector by the gcd of its entries, keeping direction."""
    v = as_intvec(v)
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


def lcm_denominators(v: Sequence[Fraction]) -> int:
    out = 1
    for x in v:
        out = lcm(out, Fraction(x).denominator)
    return out


def clear_denominators(v: Sequence[Fraction]) -> IntVec:
    """Scale a rational vector by a positive rational into a primitive integer vector."""
    scale = lcm_denominators(v)
    ints = [int(Fraction(x) * scale) for x in v]
    return primitive(ints)


def floor_frac(x: Fraction) -> int:
    # Python's // floors toward -inf, which is the sign-correct behaviour needed
    # for discrepancy thresholds.
    x = Fraction(x)
    return x.numerator // x.denominator


def ceil_frac(x: Fraction) -> int:
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def matrix_rank(rows: Sequence[Sequence]) -> int:
    work = [list(map(Fraction, r)) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def solve_linear(
    rows: Sequence[Sequence], rhs: Sequence
) -> Optional[tuple[RatVec, list[RatVec]]]:
    """Solve the exact linear system rows . x = rhs.

    Returns ``None`` when the system is infeasible, otherwise a particular
    solution together with a basis of the kernel (empty when the solution is
    unique).
    """
    rows = [list(map(Fraction, r)) for r in rows]
    rhs = [Fraction(b) for b in rhs]
    if len(rows) != len(rhs):
        raise ValueError("row count does not match right-hand side length")
    if not rows:
        return (), []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")

    aug = [rows[i] + [rhs[i]] for i in range(len(rows))]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(aug)) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = 1 / aug[rank][col]
        aug[rank] = [x * inv for x in aug[rank]]
        for r in range(len(aug)):
            if r != rank and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(aug)):
        if aug[r][ncols] != 0:
            return None

    particular = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        particular[col] = aug[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    kernel: list[RatVec] = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, col in enumerate(pivots):
            vec[col] = -aug[i][fc]
        kernel.append(tuple(vec))
    return tuple(particular), kernel


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-preserving Gaussian elimination."""
    n = len(rows)
    work = [list(map(Fraction, r)) for r in rows]
    if any(len(r) != n for r in work):
        raise ValueError("determinant requires a square matrix")
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        det *= work[col][col]
        inv = 1 / work[col][col]
        for r in range(col + 1, n):
            if work[r][col] != 0:
                f = work[r][col] * inv
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return det


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def hermite_normal_form(
    rows: Sequence[Sequence[int]],
) -> tuple[tuple[IntVec, ...], tuple[IntVec, ...]]:
    """Row-style Hermite normal form H = U . A with U unimodular.

    H is in row echelon form with positive pivots and entries above each pivot
    reduced into [0, pivot); zero rows sink to the bottom. det(U) = +-1.
    """
    A = [list(as_intvec(r)) for r in rows]
    m = len(A)
    ncols = len(A[0]) if A else 0
    if any(len(r) != ncols for r in A):
        raise ValueError("ragged matrix")
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, m) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        U[row], U[piv] = U[piv], U[row]
        for r in range(row + 1, m):
            while A[r][col] != 0:
                g, s, t = _xgcd(A[row][col], A[r][col])
                p, q = A[row][col] // g, A[r][col] // g
                new_top = [s * x + t * y for x, y in zip(A[row], A[r])]
                new_bot = [-q * x + p * y for x, y in zip(A[row], A[r])]
                A[row], A[r] = new_top, new_bot
                new_top_u = [s * x + t * y for x, y in zip(U[row], U[r])]
                new_bot_u = [-q * x + p * y for x, y in zip(U[row], U[r])]
                U[row], U[r] = new_top_u, new_bot_u
        if A[row][col] < 0:
            A[row] = [-x for x in A[row]]
            U[row] = [-x for x in U[row]]
        for r in range(row):
            q = A[r][col] // A[row][col]
            if q:
                A[r] = [x - q * y for x, y in zip(A[r], A[row])]
                U[r] = [x - q * y for x, y in zip(U[r], U[row])]
        row += 1
        if row == m:
            break
    H = tuple(tuple(r) for r in A)
    return H, tuple(tuple(r) for r in U)


def integer_kernel_basis(rows: Sequence[Sequence[int]]) -> list[IntVec]:
    """Primitive integer basis of {y : rows . y = 0}."""
    solved = solve_linear(rows, [0] * len(rows))
    assert solved is not None
    _, kernel = solved
    return [clear_denominators(k) for k in kernel]


# ---------------------------------------------------------------------------
# Linear feasibility by Gaussian substitution plus Fourier-Motzkin elimination.
# Strictness flags are tracked exactly: combining a strict with a non-strict
# inequality yields a strict one, which is what decides interior membership.
# ---------------------------------------------------------------------------

_Ineq = tuple[RatVec, Fraction, bool]  # coeffs . x >= rhs, strict flag for >


def _normalize_ineq(coeffs: Sequence[Fraction], rhs: Fraction, strict: bool) -> _Ineq:
    scale = lcm_denominators(list(coeffs) + [rhs])
    ints = [int(Fraction(c) * scale) for c in coeffs]
    r = int(Fraction(rhs) * scale)
    g = 0
    for x in ints + [r]:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
        r //= g
    return tuple(Fraction(x) for x in ints), Fraction(r), strict


def _fm_eliminate(ineqs: list[_Ineq], j: int) -> Optional[list[_Ineq]]:
    """Project variable j out of the system; None signals proven infeasibility."""
    pos, neg, rest = [], [], []
    for coeffs, rhs, strict in ineqs:
        c = coeffs[j]
        if c > 0:
            pos.append((coeffs, rhs, strict))
        elif c < 0:
            neg.append((coeffs, rhs, strict))
        else:
            rest.append((coeffs, rhs, strict))
    out: dict[tuple, _Ineq] = {}
    for item in rest:
        key = (item[0], item[1])
        prev = out.get(key)
        out[key] = (item[0], item[1], item[2] or (prev[2] if prev else False))
    for pc, pr, ps in pos:
        a = pc[j]
        for nc, nr, ns in neg:
            b = -nc[j]
            coeffs = tuple(b * x + a * y for x, y in zip(pc, nc))
            rhs = b * pr + a * nr
            strict = ps or ns
            if all(c == 0 for c in coeffs):
                if rhs > 0 or (strict and rhs == 0):
                    return None
                continue
            norm = _normalize_ineq(coeffs, rhs, strict)
            key = (norm[0], norm[1])
            prev = out.get(key)
            out[key] = (norm[0], norm[1], norm[2] or (prev[2] if prev else False))
    return list(out.values())


def fm_project(
    ineqs: Sequence[tuple[Sequence[Fraction], Fraction, bool]],
    nvars: int,
    drop: Sequence[int],
) -> Optional[list[_Ineq]]:
    """Eliminate the variables listed in ``drop``, returning constraints on the rest.

    Input and output rows read coeffs . x >= rhs (or > when the flag is set).
    Returns ``None`` when elimination proves the system infeasible for every
    assignment of the kept variables. Output coefficient tuples are indexed by
    the kept variables in their original order.
    """
    work: list[_Ineq] = []
    for coeffs, rhs, strict in ineqs:
        coeffs = as_ratvec(coeffs)
        if len(coeffs) != nvars:
            raise ValueError("constraint width does not match nvars")
        if all(c == 0 for c in coeffs):
            if Fraction(rhs) > 0 or (strict and Fraction(rhs) == 0):
                return None
            continue
        work.append(_normalize_ineq(coeffs, Fraction(rhs), strict))
    for j in sorted(drop, reverse=False):
        res = _fm_eliminate(work, j)
        if res is None:
            return None
        work = res
    keep = [k for k in range(nvars) if k not in set(drop)]
    out: list[_Ineq] = []
    seen = set()
    for coeffs, rhs, strict in work:
        kept = tuple(coeffs[k] for k in keep)
        if all(c == 0 for c in kept):
            if rhs > 0 or (strict and rhs == 0):
                return None
            continue
        norm = _normalize_ineq(kept, rhs, strict)
        if norm not in seen:
            seen.add(norm)
            out.append(norm)
    return out


def feasible(constraints: Sequence[Constraint], nvars: int) -> bool:
    """Exact feasibility of a mixed system of =, >= and > constraints over Q."""
    eqs: list[tuple[list[Fraction], Fraction]] = []
    ineqs: list[tuple[RatVec, Fraction, bool]] = []
    for coeffs, rhs, rel in constraints:
        coeffs = list(as_ratvec(coeffs))
        if len(coeffs) != nvars:
            raise ValueError("constraint width does not match nvars")
        rhs = Fraction(rhs)
        if rel == "eq":
            eqs.append((coeffs, rhs))
        elif rel == "ge":
            ineqs.append((tuple(coeffs), rhs, False))
        elif rel == "gt":
            ineqs.append((tuple(coeffs), rhs, True))
        else:
            raise ValueError(f"unknown relation {rel!r}")

    # substitute equalities away first; cheaper than doubling them into >= pairs
    subst: list[tuple[int, list[Fraction], Fraction]] = []
    for coeffs, rhs in eqs:
        coeffs = list(coeffs)
        for j, expr, val in subst:
            if coeffs[j] != 0:
                f = coeffs[j]
                coeffs = [c + f * e for c, e in zip(coeffs, expr)]
                coeffs[j] = Fraction(0)
                rhs -= f * val
        piv = next((j for j, c in enumerate(coeffs) if c != 0), None)
        if piv is None:
            if rhs != 0:
                return False
            continue
        inv = 1 / coeffs[piv]
        # x_piv = val + expr . x  (expr has zero at piv)
        expr = [-c * inv for c in coeffs]
        expr[piv] = Fraction(0)
        val = rhs * inv
        for i, (j, e, v) in enumerate(subst):
            if e[piv] != 0:
                f = e[piv]
                e = [a + f * b for a, b in zip(e, expr)]
                e[piv] = Fraction(0)
                subst[i] = (j, e, v + f * val)
        subst.append((piv, expr, val))

    reduced: list[tuple[RatVec, Fraction, bool]] = []
    for coeffs, rhs, strict in ineqs:
        coeffs = list(coeffs)
        for j, expr, val in subst:
            if coeffs[j] != 0:
                f = coeffs[j]
                coeffs = [c + f * e for c, e in zip(coeffs, expr)]
                coeffs[j] = Fraction(0)
                rhs -= f * val
        reduced.append((tuple(coeffs), rhs, strict))

    res = fm_project(reduced, nvars, list(range(nvars)))
    return res is not None
