"""
Acceptance suite replayed by ``cubic-prf selfcheck``.

Each check runs over the fields it needs that fit under the size ceiling;
fields above the ceiling are reported as skipped, never as failures.
"""

from __future__ import annotations

import logging
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, Optional

from cubic_prf_lib.census import (
    complete_census,
    count_permutations,
    equivalence_classes,
    expected_class_count,
    formula_Nq,
    formula_shape_counts,
    predicted_complete,
    random_mobius,
    sample_pairs,
    sample_prfs,
)
from cubic_prf_lib.config_manager import Guards, get_guards
from cubic_prf_lib.cubicperm import (
    CHAR3_CUBE,
    canonicalize,
    decide_permutation,
    extension_permutation,
    is_permutation,
    pencil_discriminant,
    quadratic_resolvent,
    representative,
)
from cubic_prf_lib.error_handler import CubicPrfError
from cubic_prf_lib.gf import FieldCtx, field_create
from cubic_prf_lib.polyring import Poly, cubic_discriminant
from cubic_prf_lib.projfunc import (
    ProjPoint,
    conjugate,
    eval_point,
    format_ratfunc,
    is_permutation_bruteforce,
    is_separable,
    parse_ratfunc,
    points,
    ratfunc_new,
)
from cubic_prf_lib.validators import validate_prime_power

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

DEFAULT_CEILING = 9
CENSUS_FIELDS = (2, 3, 4, 5, 7, 8, 9)
CLASS_FIELDS = (3, 4, 5, 7, 8, 9)
CANONICAL_FIELDS = (5, 7, 8, 9)
SAMPLES_PER_FIELD = 100
PAIR_SAMPLES_PER_FIELD = 200


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "status": self.status, "detail": self.detail, "seconds": round(self.seconds, 3)}


@dataclass
class SelfcheckReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    @property
    def failed(self) -> list[str]:
        return [r.name for r in self.results if r.status == FAIL]

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "checks": [r.to_dict() for r in self.results]}


class _Failure(Exception):
    """A check found a wrong value."""


def _field(q: int) -> FieldCtx:
    p, k = validate_prime_power(q)
    return field_create(p, k)


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise _Failure(message)


def _split(qs: tuple[int, ...], ceiling: int) -> tuple[list[int], list[int]]:
    return [q for q in qs if q <= ceiling], [q for q in qs if q > ceiling]


# =============================================================================
# Checks
# =============================================================================


def check_counts(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    run, skipped = _split(CENSUS_FIELDS, min(ceiling, guards.max_q_brute))
    for q in run:
        result = count_permutations(_field(q), "brute", guards)
        _expect(result.N_q == formula_Nq(q), f"q={q}: enumerated {result.N_q}, formula {formula_Nq(q)}")
    return run, skipped


def check_shape_counts(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    run, skipped = _split(CENSUS_FIELDS, min(ceiling, guards.max_q_brute))
    for q in run:
        result = count_permutations(_field(q), "brute", guards)
        counts = result.shape_counts()
        expected = formula_shape_counts(q)
        _expect(counts.r31 == 0, f"q={q}: |R31| = {counts.r31}")
        _expect(result.symmetric(), f"q={q}: (s, t) and (t, s) counts differ")
        _expect(counts.total == result.N_q, f"q={q}: R33 + 2 R32 + 2 R30 = {counts.total} != {result.N_q}")
        _expect(counts == expected, f"q={q}: shape counts {counts.to_dict()} != {expected.to_dict()}")
    return run, skipped


def check_criterion(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    run, skipped = _split(CENSUS_FIELDS, min(ceiling, guards.max_q_brute, guards.max_q_criterion))
    for q in run:
        ctx = _field(q)
        # both raise CrosscheckError on a disagreement
        count_permutations(ctx, "crosscheck", guards)
        for phi in sample_pairs(ctx, PAIR_SAMPLES_PER_FIELD, seed=q):
            decide_permutation(phi, "crosscheck", guards)
    return run, skipped


def check_classes(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    run, skipped = _split(CLASS_FIELDS, min(ceiling, guards.max_q_orbits))
    for q in run:
        ctx = _field(q)
        table = equivalence_classes(ctx, guards)
        _expect(table.class_count == expected_class_count(q),
                f"q={q}: {table.class_count} classes, expected {expected_class_count(q)}")
        _expect(table.population == (q - 1) * formula_Nq(q), f"q={q}: orbits cover {table.population} functions")
        tags = set()
        for orbit in table.orbits:
            report = canonicalize(orbit.representative, guards)
            tags.add(report.canon.tag)
        expected_tags = {representative(ctx)[0].tag}
        if ctx.p == 3:
            expected_tags.add(CHAR3_CUBE)
        _expect(tags == expected_tags, f"q={q}: representatives reduce to {sorted(tags)}")
    return run, skipped


def check_canonical(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    run, skipped = _split(CANONICAL_FIELDS, ceiling)
    for q in run:
        ctx = _field(q)
        for phi in sample_prfs(ctx, SAMPLES_PER_FIELD, seed=q):
            report = canonicalize(phi, guards)
            m1, m2 = report.witnesses
            target = report.canon.ratfunc(ctx)
            for point in points(ctx):
                moved = m1.apply(eval_point(phi, m2.apply(point)))
                _expect(moved == eval_point(target, point), f"q={q}: witnesses of {phi} fail at {point}")
    return run, skipped


def check_complete(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    run, skipped = _split(CENSUS_FIELDS, min(ceiling, guards.max_q_complete))
    for q in run:
        ctx = _field(q)
        found = {format_ratfunc(phi) for phi in complete_census(ctx, guards)}
        predicted = {format_ratfunc(phi) for phi in predicted_complete(ctx)}
        _expect(found == predicted, f"q={q}: found {len(found)}, predicted {len(predicted)}")
        if q % 3:
            _expect(not found, f"q={q}: complete functions found although 3 does not divide q")
    return run, skipped


def check_extension(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    if ceiling < 7:
        return [], [7]
    ctx = field_create(7)
    _, rep = representative(ctx)
    _expect(extension_permutation(rep, 3, "verify", guards), "the F_7 representative does not permute P^1(F_343)")
    _expect(not extension_permutation(rep, 2, "verify", guards), "the F_7 representative permutes P^1(F_49)")
    return [7], []


def check_resolvent(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    run: list[int] = []
    skipped: list[int] = []
    for q in (5, 7):
        if q > ceiling:
            skipped.append(q)
            continue
        ctx = field_create(q)
        t = Poly.x(ctx)
        for b in ctx.elements():
            B, C = quadratic_resolvent(Poly(ctx), Poly.const(ctx, b), -t)
            _expect(B == Poly(ctx, [0, 3]), f"q={q}, b={b}: B = {B}")
            _expect(C == Poly(ctx, [b**3, 0, 9]), f"q={q}, b={b}: C = {C}")
        run.append(q)
    if 9 > ceiling:
        skipped.append(9)
        return run, skipped

    ctx = field_create(3, 2)
    for a in ctx.elements():
        for b in ctx.elements():
            phi = ratfunc_new(Poly(ctx, [0, b, a, 1]), Poly.const(ctx, 1))
            delta = pencil_discriminant(phi)
            expected = Poly(ctx, [-(b**3) + a * a * b * b, a**3])
            _expect(delta == expected, f"a={a}, b={b}: discriminant {delta}")
            if a in (0, 1):
                printed = Poly(ctx, [-4 * b**3 + a * a * b * b, 4 * a * a])
                _expect(delta == printed, f"a={a}, b={b}: 4a^2 t form differs")
    run.append(9)
    return run, skipped


def check_properties(guards: Guards, ceiling: int) -> tuple[list[int], list[int]]:
    run, skipped = _split(CENSUS_FIELDS, ceiling)
    rng = random.Random(0)
    for q in run:
        ctx = _field(q)
        elements = list(ctx.elements())
        if ctx.p != 2:
            for a in elements:
                for b in elements:
                    if a and b:
                        _expect((a * b).is_square() == (a.is_square() == b.is_square()),
                                f"q={q}: quadratic character of {a}*{b}")
            for _ in range(50):
                a, b, c = (rng.choice(elements) for _ in range(3))
                B, C = quadratic_resolvent(a, b, c)
                _expect(B * B - 4 * C == cubic_discriminant(ctx.one, a, b, c),
                        f"q={q}: resolvent discriminant for ({a}, {b}, {c})")
        else:
            zero_trace = sum(1 for a in elements if a.abs_trace2() == 0)
            _expect(zero_trace == q // 2, f"q={q}: {zero_trace} elements of trace 0")
        for phi in sample_prfs(ctx, 10, seed=q):
            _expect(parse_ratfunc(format_ratfunc(phi), ctx) == phi, f"q={q}: {phi} does not round-trip")
            _expect(is_permutation(phi, "brute", guards).is_permutation, f"q={q}: {phi} lost the permutation property")
            m1, m2 = random_mobius(ctx, rng), random_mobius(ctx, rng)
            moved = conjugate(phi, m1, m2)
            _expect(is_permutation_bruteforce(moved), f"q={q}: {moved} is not a permutation")
            _expect(is_separable(moved) == is_separable(phi), f"q={q}: separability changed for {phi}")
            _expect(eval_point(moved, ProjPoint.infinity()) == m1.apply(eval_point(phi, m2.apply(ProjPoint.infinity()))),
                    f"q={q}: composition disagrees with pointwise action at infinity")
    return run, skipped


CHECKS: dict[str, Callable[[Guards, int], tuple[list[int], list[int]]]] = {
    "count": check_counts,
    "shapes": check_shape_counts,
    "criterion": check_criterion,
    "classes": check_classes,
    "canonical": check_canonical,
    "complete": check_complete,
    "extension": check_extension,
    "resolvent": check_resolvent,
    "properties": check_properties,
}


def run_selfcheck(
    guards: Optional[Guards] = None,
    max_q: Optional[int] = None,
    only: Optional[list[str]] = None,
) -> SelfcheckReport:
    """Run the named checks (all by default) and collect one result per check."""
    guards = (guards or get_guards()).with_max_q(max_q)
    ceiling = max_q if max_q is not None else DEFAULT_CEILING
    report = SelfcheckReport()
    for name, check in CHECKS.items():
        if only and name not in only:
            continue
        started = time.perf_counter()
        try:
            run, skipped = check(guards, ceiling)
        except _Failure as e:
            result = CheckResult(name, FAIL, str(e))
        except CubicPrfError as e:
            result = CheckResult(name, FAIL, f"{type(e).__name__}: {e}")
        else:
            if not run:
                result = CheckResult(name, SKIPPED, f"q > {ceiling}: {skipped}")
            elif skipped:
                result = CheckResult(name, PASS, f"ran q={run}; skipped q={skipped}")
            else:
                result = CheckResult(name, PASS, f"ran q={run}")
        result.seconds = time.perf_counter() - started
        logger.info("selfcheck %s: %s (%.1fs)", name, result.status, result.seconds)
        report.results.append(result)
    return report
