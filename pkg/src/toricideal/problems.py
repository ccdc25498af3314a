"""Problem-file parsing, command dispatch and result documents.

Problem files are JSON with keys ``rank``, ``cone_rays``, optional ``delta``
(rational coefficients per input ray, as "p/q" strings or integers),
optional ``ideal`` (integer exponent vectors) and optional ``t`` ("p/q").
Rationals travel as strings end to end so no float ever touches the data.

Result documents are plain dicts with a fixed key order; rendering them with
:func:`render_document` is byte-deterministic except for the timing field.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cohomology_oracle import TruncationBox, oracle_pair_ideal
from .cones import Cone
from .divisors import NotQCartierError, QDivisor, is_q_cartier
from .exact_linalg import IntVec, as_intvec, pairing, primitive
from .newton import MonomialIdeal
from .resolution import Fan, multiplier_ideal_via_resolution, normal_fan, resolve
from .test_ideals import (
    IdealAnswer,
    bcm_test_ideal_pair,
    bcm_test_ideal_triple,
    charp_test_ideal,
    multiplier_ideal_howald,
)

__all__ = [
    "ProblemFile",
    "ProblemError",
    "MathError",
    "VerificationError",
    "COMMANDS",
    "parse_problem",
    "render_problem",
    "run_command",
    "render_document",
]

COMMANDS = (
    "dual",
    "pair",
    "triple",
    "multiplier",
    "multiplier-res",
    "charp",
    "resolve",
    "verify",
    "plot",
)


class ProblemError(ValueError):
    """Malformed problem file or arguments; maps to exit code 1."""


class MathError(ValueError):
    """Valid input outside the mathematical preconditions; exit code 2."""


class VerificationError(RuntimeError):
    """Route disagreement detected by `verify`; exit code 3."""


def _frac(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ProblemError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ProblemError(f"{where}: cannot parse rational {value!r}: {exc}")
    raise ProblemError(f"{where}: expected a rational string, got {type(value).__name__}")


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ProblemFile:
    """Validated problem data with the cone in canonical form."""

    rank: int
    cone_rays: tuple[IntVec, ...]  # as given (primitivized), input order
    delta: Optional[tuple[Fraction, ...]]  # aligned with cone_rays
    ideal: Optional[tuple[IntVec, ...]]
    t: Optional[Fraction]
    warnings: tuple[str, ...] = ()

    def cone(self) -> Cone:
        return Cone(self.cone_rays, rank=self.rank)

    def q_divisor(self) -> QDivisor:
        """Delta reindexed onto the canonical ray order of the cone."""
        cone = self.cone()
        if self.delta is None:
            return QDivisor(cone, [Fraction(0)] * len(cone.rays()))
        by_ray = dict(zip(self.cone_rays, self.delta))
        return QDivisor(cone, [by_ray[r] for r in cone.rays()])

    def monomial_ideal(self) -> MonomialIdeal:
        if self.ideal is None:
            raise ProblemError("this command needs an `ideal` in the problem file")
        return MonomialIdeal(self.cone().dual(), self.ideal)


def parse_problem(text: str) -> ProblemFile:
    """Parse and validate a problem file, or raise a positioned diagnostic."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(
            f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        )
    if not isinstance(raw, dict):
        raise ProblemError("problem file must be a JSON object")
    known = {"rank", "cone_rays", "delta", "ideal", "t"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ProblemError(f"unknown keys: {', '.join(unknown)}")

    rank = raw.get("rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise ProblemError("`rank` must be a positive integer")

    rays_raw = raw.get("cone_rays")
    if not isinstance(rays_raw, list) or not rays_raw:
        raise ProblemError("`cone_rays` must be a nonempty list of integer vectors")
    warnings: list[str] = []
    rays: list[IntVec] = []
    for i, vec in enumerate(rays_raw):
        if (
            not isinstance(vec, list)
            or len(vec) != rank
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in vec)
        ):
            raise ProblemError(
                f"cone_rays[{i}] = {vec!r} is not an integer vector of length {rank}"
            )
        v = as_intvec(vec)
        if all(x == 0 for x in v):
            raise ProblemError(f"cone_rays[{i}] is the zero vector")
        p = primitive(v)
        if p != v:
            warnings.append(f"cone_rays[{i}] = {list(v)} primitivized to {list(p)}")
        if p in rays:
            raise ProblemError(f"cone_rays[{i}] duplicates ray {list(p)}")
        rays.append(p)

    delta = None
    if raw.get("delta") is not None:
        delta_raw = raw["delta"]
        if not isinstance(delta_raw, list) or len(delta_raw) != len(rays):
            raise ProblemError(
                f"`delta` must list one coefficient per ray ({len(rays)} expected)"
            )
        delta = tuple(_frac(x, f"delta[{i}]") for i, x in enumerate(delta_raw))

    cone = Cone(rays, rank=rank)
    if not cone.is_strongly_convex():
        raise MathError("the cone is not strongly convex (it contains a line)")
    if not cone.is_fulldim():
        raise MathError("the cone is not full-dimensional; its rays must span")
    extremal = set(cone.rays())
    for i, r in enumerate(rays):
        if r not in extremal:
            raise ProblemError(
                f"cone_rays[{i}] = {list(r)} is not extremal (it lies inside "
                "the cone of the other rays); divisor coefficients would be ambiguous"
            )
    dual = cone.dual()

    ideal = None
    if raw.get("ideal") is not None:
        ideal_raw = raw["ideal"]
        if not isinstance(ideal_raw, list) or not ideal_raw:
            raise ProblemError("`ideal` must be a nonempty list of exponent vectors")
        exps = []
        for i, vec in enumerate(ideal_raw):
            if (
                not isinstance(vec, list)
                or len(vec) != rank
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in vec)
            ):
                raise ProblemError(
                    f"ideal[{i}] = {vec!r} is not an integer vector of length {rank}"
                )
            e = as_intvec(vec)
            for n in dual.halfspaces():
                if pairing(e, n) < 0:
                    raise ProblemError(
                        f"ideal[{i}] = {list(e)} lies outside the dual cone: "
                        f"it violates the halfspace with normal {list(n)}"
                    )
            exps.append(e)
        ideal = tuple(exps)

    t = None
    if raw.get("t") is not None:
        t = _frac(raw["t"], "t")
        if t <= 0:
            raise ProblemError("`t` must be positive")

    return ProblemFile(
        rank=rank,
        cone_rays=tuple(rays),
        delta=delta,
        ideal=ideal,
        t=t,
        warnings=tuple(warnings),
    )


def render_problem(problem: ProblemFile) -> str:
    """Serialize a problem back to its JSON file form."""
    doc: dict = {"rank": problem.rank, "cone_rays": [list(r) for r in problem.cone_rays]}
    if problem.delta is not None:
        doc["delta"] = [_frac_str(c) for c in problem.delta]
    if problem.ideal is not None:
        doc["ideal"] = [list(e) for e in problem.ideal]
    if problem.t is not None:
        doc["t"] = _frac_str(problem.t)
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Result documents.
# ---------------------------------------------------------------------------


def _monomial_string(v: IntVec) -> str:
    parts = [f"x{i}^{e}" for i, e in enumerate(v, start=1) if e != 0]
    return "*".join(parts) if parts else "1"


def _region_lines(region) -> list[str]:
    lines = []
    for n, c, strict in region.absolute_facets():
        terms = []
        for i, coef in enumerate(n, start=1):
            if coef == 0:
                continue
            terms.append(f"{coef}*v{i}")
        rel = ">" if strict else ">="
        lines.append(f"{' + '.join(terms)} {rel} {_frac_str(c)}")
    return lines


def _answer_fields(ans: IdealAnswer) -> dict:
    return {
        "w": None if ans.w is None else [_frac_str(x) for x in ans.w],
        "r": ans.r,
        "generators": [list(g) for g in ans.generators],
        "monomials": [_monomial_string(g) for g in ans.generators],
        "region": _region_lines(ans.region),
        "route": ans.route,
    }


def _need_t(problem: ProblemFile, t_override: Optional[Fraction]) -> Fraction:
    t = t_override if t_override is not None else problem.t
    if t is None:
        raise ProblemError("this command needs `t` (in the file or via --t)")
    if t <= 0:
        raise ProblemError("`t` must be positive")
    return t


def run_command(
    cmd: str,
    problem: ProblemFile,
    *,
    t_override: Optional[Fraction] = None,
    box_bound: int = 8,
) -> dict:
    """Dispatch a CLI command against a parsed problem, returning the document."""
    if cmd not in COMMANDS:
        raise ProblemError(f"unknown command {cmd!r}; choose from {', '.join(COMMANDS)}")
    if cmd == "plot":
        raise ProblemError("plot is handled by the CLI layer, not run_command")
    started = time.monotonic()
    doc: dict = {"command": cmd, "problem": json.loads(render_problem(problem))}
    sigma = problem.cone()
    delta = problem.q_divisor()

    try:
        if cmd == "dual":
            dual = sigma.dual()
            doc.update(
                {
                    "sigma_rays": [list(r) for r in sigma.rays()],
                    "dual_rays": [list(r) for r in dual.rays()],
                    "dual_halfspaces": [list(n) for n in dual.halfspaces()],
                    "dual_hilbert_basis": [list(h) for h in dual.hilbert_basis()],
                }
            )
        elif cmd == "pair":
            ans = bcm_test_ideal_pair(sigma, delta)
            doc.update(_answer_fields(ans))
        elif cmd in ("triple", "multiplier", "multiplier-res", "charp"):
            ideal = problem.monomial_ideal()
            t = _need_t(problem, t_override)
            if cmd == "triple":
                ans = bcm_test_ideal_triple(sigma, delta, ideal, t)
            elif cmd == "multiplier":
                ans = multiplier_ideal_howald(sigma, delta, ideal, t)
            elif cmd == "multiplier-res":
                ans = multiplier_ideal_via_resolution(sigma, delta, ideal, t)
            else:
                if problem.delta is not None and any(problem.delta):
                    raise ProblemError(
                        "charp takes no delta; remove it from the file"
                    )
                ans = charp_test_ideal(sigma, ideal, t)
            doc["t"] = _frac_str(t)
            doc.update(_answer_fields(ans))
        elif cmd == "resolve":
            if problem.ideal is not None:
                fan = normal_fan(problem.monomial_ideal(), sigma)
            else:
                fan = Fan([sigma])
            res = resolve(fan)
            doc.update(
                {
                    "input_cones": [[list(r) for r in c.rays()] for c in fan.maximal],
                    "steps_log": res.log().splitlines(),
                    "rays": [list(r) for r in res.rays],
                    "maximal_cones": [
                        [list(r) for r in c.rays()] for c in res.refined.maximal
                    ],
                    "smooth": res.refined.is_smooth(),
                }
            )
        elif cmd == "verify":
            doc.update(_verify(problem, sigma, delta, t_override, box_bound))
    except NotQCartierError as exc:
        raise MathError(str(exc))

    doc["timing_ms"] = round((time.monotonic() - started) * 1000.0, 3)
    return doc


def _verify(
    problem: ProblemFile,
    sigma: Cone,
    delta: QDivisor,
    t_override: Optional[Fraction],
    box_bound: int,
) -> dict:
    out: dict = {}
    agree = True
    notes: list[str] = []

    pair_ans = bcm_test_ideal_pair(sigma, delta)
    out["pair_generators"] = [list(g) for g in pair_ans.generators]

    oracle = oracle_pair_ideal(sigma, delta, TruncationBox(box_bound))
    inner = box_bound // 2
    mismatch = []
    superset_ok = True
    for v in _box_iter(sigma.rank, box_bound):
        in_formula = pair_ans.region.contains(v)
        in_oracle = v in oracle
        if in_formula and not in_oracle:
            superset_ok = False
            mismatch.append(list(v))
        elif max(abs(x) for x in v) <= inner and in_formula != in_oracle:
            mismatch.append(list(v))
    oracle_ok = superset_ok and not mismatch
    out["oracle"] = {
        "box": box_bound,
        "inner_box": inner,
        "agrees": oracle_ok,
        "mismatches": mismatch[:10],
    }
    if not oracle_ok:
        agree = False
        notes.append("oracle disagrees with the pair formula")

    if problem.ideal is not None:
        ideal = problem.monomial_ideal()
        t = _need_t(problem, t_override)
        routes = {
            "bcm": bcm_test_ideal_triple(sigma, delta, ideal, t),
            "howald": multiplier_ideal_howald(sigma, delta, ideal, t),
            "resolution": multiplier_ideal_via_resolution(sigma, delta, ideal, t),
        }
        gens = {name: ans.generators for name, ans in routes.items()}
        out["t"] = _frac_str(t)
        out["routes"] = {name: [list(g) for g in v] for name, v in gens.items()}
        if len(set(gens.values())) != 1:
            agree = False
            notes.append("triple routes disagree")
        w0 = is_q_cartier(
            QDivisor(sigma, [Fraction(1)] * len(sigma.rays()))
        )
        if w0 is not None and (problem.delta is None or not any(problem.delta)):
            charp = charp_test_ideal(sigma, ideal, t)
            out["charp_generators"] = [list(g) for g in charp.generators]
            if charp.generators != gens["bcm"]:
                agree = False
                notes.append("char-p route disagrees on a Q-Gorenstein cone")
        else:
            out["charp_generators"] = None

    out["agreement"] = agree
    out["notes"] = notes
    if agree:
        parts = []
        if "routes" in out:
            parts.append("routes agree: howald=resolution=bcm")
            if out.get("charp_generators") is not None:
                parts.append("charp matches")
        parts.append(f"oracle: pair-level agreement on inner box {inner}")
        out["summary"] = "; ".join(parts)
    else:
        out["summary"] = "DISAGREEMENT: " + "; ".join(notes)
    return out


def _box_iter(rank: int, bound: int):
    if rank == 0:
        yield ()
        return
    for x in range(-bound, bound + 1):
        for rest in _box_iter(rank - 1, bound):
            yield (x,) + rest


def render_document(doc: dict, fmt: str = "json") -> str:
    """Render a result document as JSON or a human-readable delimited report."""
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "text":
        raise ProblemError(f"unknown format {fmt!r}; use json or text")
    lines: list[str] = []
    for key, value in doc.items():
        if key == "problem":
            lines.append(f"{key}:\t{json.dumps(value)}")
        elif key in ("generators", "region", "steps_log") and isinstance(value, list):
            lines.append(f"{key}:")
            for item in value:
                if isinstance(item, list):
                    lines.append("\t" + "\t".join(str(x) for x in item))
                else:
                    lines.append("\t" + str(item))
        elif isinstance(value, (dict, list)):
            lines.append(f"{key}:\t{json.dumps(value)}")
        else:
            lines.append(f"{key}:\t{value}")
    return "\n".join(lines) + "\n"
