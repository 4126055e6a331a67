"""
Census of degree-3 permutation rational functions f/g with f, g monic and coprime.

The population is split by shape (deg f, deg g). Brute-force counting is
vectorized: every monic polynomial of a degree is evaluated once on all of
F_q through the field's numpy tables, and a whole block of numerators is
tested against every denominator at once.

Equivalence classes are computed on the larger population of all degree-3
permutations (numerator not necessarily monic), which is closed under
m1 o phi o m2. Orbits are walked on value tables over P^1 of a field with at
least 7 points, where a degree-3 function is determined by its values.

Usage:
    from cubic_prf_lib.census import count_permutations, formula_Nq
    from cubic_prf_lib.gf import field_create

    result = count_permutations(field_create(5))
    assert result.N_q == formula_Nq(5) == 450
"""

from __future__ import annotations

import logging
import random
import re
from collections import deque
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from cubic_prf_lib.batch_processor import PartitionConfig, PartitionProgress, PartitionRunner, chunk
from cubic_prf_lib.config_manager import Guards, get_guards
from cubic_prf_lib.cubicperm import discriminant_verdict, is_complete, representative, resolvent_verdict
from cubic_prf_lib.error_handler import CrosscheckError, GuardExceededError, InternalConsistencyError
from cubic_prf_lib.gf import ExtCtx, FieldCtx, FieldLookup, ext_create
from cubic_prf_lib.polyring import Poly, gcd_monic
from cubic_prf_lib.projfunc import (
    Mobius,
    RatFunc,
    compose_mobius,
    conjugate,
    image_codes,
    lift_ratfunc,
    points,
    ratfunc_new,
)
from cubic_prf_lib.validators import validate_choice, validate_prime_power

logger = logging.getLogger(__name__)

SHAPES: tuple[tuple[int, int], ...] = ((3, 3), (3, 2), (3, 1), (3, 0), (2, 3), (1, 3), (0, 3))
METHODS = ["brute", "criterion", "crosscheck"]

# a degree-3 function is determined by its values on 7 points
_MIN_TABLE_POINTS = 7
_MAX_REPORTED_MISMATCHES = 5


# =============================================================================
# Closed forms
# =============================================================================


def formula_Nq(q: int) -> int:
    """Number of degree-3 permutations f/g of P^1(F_q) with f, g monic and coprime."""
    validate_prime_power(q)
    if q % 3 == 0:
        return (q**4 + q**3 + q**2 + q) // 2
    m = q % 3
    return (q**4 + 2 * (m - 1) * q**3 + (2 * m - 3) * q**2) // 2


@dataclass(frozen=True)
class ShapeCounts:
    """Per-shape permutation counts; r33_distinct_x2 counts pairs whose x^2 coefficients differ."""

    q: int
    r33: int
    r32: int
    r31: int
    r30: int
    r33_distinct_x2: int
    r33_equal_x2: int

    @property
    def total(self) -> int:
        return self.r33 + 2 * self.r32 + 2 * self.r31 + 2 * self.r30

    def to_dict(self) -> dict[str, int]:
        return {
            "q": self.q,
            "R33": self.r33,
            "R32": self.r32,
            "R31": self.r31,
            "R30": self.r30,
            "R33_distinct_x2": self.r33_distinct_x2,
            "R33_equal_x2": self.r33_equal_x2,
            "N_q": self.total,
        }


def formula_shape_counts(q: int) -> ShapeCounts:
    """Closed-form shape counts; they add up to :func:`formula_Nq`."""
    validate_prime_power(q)
    r32 = q * q * (q - 1) // 2
    if q % 3 == 0:
        r30 = (q * q + q) // 2
    else:
        r30 = (q % 3 - 1) * q * q
    distinct = q * q * (q - 1) ** 2 // 2
    equal = (q - 1) * r30
    return ShapeCounts(q, distinct + equal, r32, 0, r30, distinct, equal)


def expected_class_count(q: int) -> int:
    """Equivalence classes of degree-3 permutations: 2 when 3 | q (x^3 is inseparable), else 1."""
    validate_prime_power(q)
    return 2 if q % 3 == 0 else 1


# =============================================================================
# Result types
# =============================================================================


@dataclass
class CensusRow:
    q: int
    shape: tuple[int, int]
    pairs: int
    permutations: int
    method: str
    distinct_x2: Optional[int] = None
    disagreements: int = 0

    def to_dict(self) -> dict[str, Any]:
        row: dict[str, Any] = {
            "q": self.q,
            "shape": list(self.shape),
            "pairs": self.pairs,
            "permutations": self.permutations,
            "method": self.method,
        }
        if self.distinct_x2 is not None:
            row["distinct_x2"] = self.distinct_x2
        if self.method == "crosscheck":
            row["disagreements"] = self.disagreements
        return row


@dataclass
class CensusResult:
    q: int
    field_spec: str
    method: str
    rows: list[CensusRow]
    mismatches: list[str] = field(default_factory=list)

    def row(self, shape: tuple[int, int]) -> CensusRow:
        for r in self.rows:
            if r.shape == tuple(shape):
                return r
        raise KeyError(shape)

    @property
    def N_q(self) -> int:
        return sum(r.permutations for r in self.rows)

    @property
    def pairs(self) -> int:
        return sum(r.pairs for r in self.rows)

    @property
    def formula(self) -> int:
        return formula_Nq(self.q)

    @property
    def matches_formula(self) -> bool:
        return self.N_q == self.formula

    def shape_counts(self) -> ShapeCounts:
        r33 = self.row((3, 3))
        distinct = r33.distinct_x2 or 0
        return ShapeCounts(
            self.q,
            r33.permutations,
            self.row((3, 2)).permutations,
            self.row((3, 1)).permutations,
            self.row((3, 0)).permutations,
            distinct,
            r33.permutations - distinct,
        )

    def symmetric(self) -> bool:
        """Counts of (s, t) and (t, s) agree, so N_q = R33 + 2 R32 + 2 R31 + 2 R30."""
        return all(
            self.row((s, t)).permutations == self.row((t, s)).permutations
            for s, t in SHAPES if s > t
        )

    def summary(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "field": self.field_spec,
            "method": self.method,
            "pairs": self.pairs,
            "N_q": self.N_q,
            "formula": self.formula,
            "matches": self.matches_formula,
        }


@dataclass
class Orbit:
    size: int
    representative: RatFunc

    def to_dict(self) -> dict[str, Any]:
        return {"size": self.size, "representative": str(self.representative)}


@dataclass
class OrbitTable:
    q: int
    field_spec: str
    orbits: list[Orbit]

    @property
    def class_count(self) -> int:
        return len(self.orbits)

    @property
    def population(self) -> int:
        return sum(o.size for o in self.orbits)

    def to_dict(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "field": self.field_spec,
            "classes": self.class_count,
            "population": self.population,
            "orbits": [o.to_dict() for o in self.orbits],
        }


# =============================================================================
# Vectorized tables
# =============================================================================


def _monic_table(q: int, deg: int) -> np.ndarray:
    """Row i holds the ascending coefficient codes of the i-th monic polynomial of degree ``deg``."""
    idx = np.arange(q**deg, dtype=np.int64)
    cols = [(idx // q**j) % q for j in range(deg)]
    cols.append(np.ones_like(idx))
    return np.stack(cols, axis=1)


def _evaluate(lookup: FieldLookup, table: np.ndarray, xs: np.ndarray) -> np.ndarray:
    values = np.repeat(table[:, -1:], len(xs), axis=1)
    for j in range(table.shape[1] - 2, -1, -1):
        values = lookup.add[lookup.mul[values, xs[None, :]], table[:, j : j + 1]]
    return values


def _quadratic_factor_ids(lookup: FieldLookup, table: np.ndarray, values: np.ndarray, q: int) -> np.ndarray:
    """
    Code h0 + q h1 of the irreducible monic quadratic x^2 + h1 x + h0 dividing
    each row, or -1. A polynomial of degree <= 3 has at most one such factor.
    """
    deg = table.shape[1] - 1
    ids = np.full(len(table), -1, dtype=np.int64)
    has_root = (values == 0).any(axis=1)
    if deg == 2:
        irreducible = ~has_root
        ids[irreducible] = table[irreducible, 0] + q * table[irreducible, 1]
    elif deg == 3:
        rows = np.nonzero(has_root)[0]
        if len(rows):
            r = (values[rows] == 0).argmax(axis=1)
            # x^3 + a x^2 + b x + c = (x - r)(x^2 + h1 x + h0)
            h1 = lookup.add[table[rows, 2], r]
            h0 = lookup.add[table[rows, 1], lookup.mul[r, h1]]
            quad = np.stack([h0, h1, np.ones_like(h0)], axis=1)
            irreducible = ~(_evaluate(lookup, quad, np.arange(q, dtype=np.int64)) == 0).any(axis=1)
            ids[rows[irreducible]] = h0[irreducible] + q * h1[irreducible]
    return ids


TPoly = list[np.ndarray]


def _tp_add(lookup: FieldLookup, *polys: TPoly) -> TPoly:
    """Sum of polynomials in t whose coefficients are arrays of codes."""
    out: TPoly = []
    for i in range(max(len(p) for p in polys)):
        terms = [p[i] for p in polys if i < len(p)]
        acc = terms[0]
        for term in terms[1:]:
            acc = lookup.add[acc, term]
        out.append(acc)
    return out


def _tp_mul(lookup: FieldLookup, f: TPoly, g: TPoly) -> TPoly:
    out: list[Optional[np.ndarray]] = [None] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            term = lookup.mul[a, b]
            acc = out[i + j]
            out[i + j] = term if acc is None else lookup.add[acc, term]
    return [c for c in out if c is not None]


def _tp_scale(lookup: FieldLookup, c: int, f: TPoly) -> TPoly:
    return [lookup.mul[c, a] for a in f]


class _CensusTables:
    """Monic polynomials of degree 0..3 with their values and quadratic factors."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.q = ctx.q
        self.lookup = ctx.lookup
        xs = np.arange(self.q, dtype=np.int64)
        self.tables = {d: _monic_table(self.q, d) for d in range(4)}
        self.values = {d: _evaluate(self.lookup, t, xs) for d, t in self.tables.items()}
        self.factors = {
            d: _quadratic_factor_ids(self.lookup, t, self.values[d], self.q) for d, t in self.tables.items()
        }

    def size(self, deg: int) -> int:
        return len(self.tables[deg])

    def block(self, shape: tuple[int, int], start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
        """(coprime, permutes) boolean arrays for numerators start..stop against every denominator."""
        s, t = shape
        lookup = self.lookup
        vf = self.values[s][start:stop][:, None, :]
        vg = self.values[t][None, :, :]
        ff = self.factors[s][start:stop][:, None]
        fg = self.factors[t][None, :]

        coprime = ~((vf == 0) & (vg == 0)).any(axis=2)
        coprime &= ~((ff == fg) & (ff >= 0))
        if s == t:
            coprime &= np.arange(start, stop)[:, None] != np.arange(self.size(t))[None, :]

        finite = np.where(vg != 0, lookup.mul[vf, lookup.inv[vg]], self.q)
        at_infinity = self.q if s > t else (0 if s < t else 1)
        images = np.concatenate(
            [finite, np.full(finite.shape[:2] + (1,), at_infinity, dtype=np.int64)], axis=2,
        )
        images.sort(axis=2)
        permutes = (np.diff(images, axis=2) != 0).all(axis=2) & coprime
        return coprime, permutes

    def pencil(self, shape: tuple[int, int], start: int, stop: int) -> tuple[TPoly, TPoly, np.ndarray]:
        """
        The pencil F - t G of every pair of a block, moved the way build_pencil
        moves it: F monic of degree 3 and deg G <= 2.

        Returns the codes [F0, F1, F2] and [G0, G1, G2] and the mask of pairs
        left with a denominator of degree 1.
        """
        s, t = shape
        lookup = self.lookup
        rows, cols = stop - start, self.size(t)

        def coefficients(table: np.ndarray, deg: int, axis: int) -> TPoly:
            out = []
            for j in range(4):
                col = table[:, j] if j <= deg else np.zeros(len(table), dtype=np.int64)
                col = col[:, None] if axis == 0 else col[None, :]
                out.append(np.broadcast_to(col, (rows, cols)))
            return out

        f = coefficients(self.tables[s][start:stop], s, 0)
        g = coefficients(self.tables[t], t, 1)
        if s == 3 and t == 3:
            # 1/(phi - 1) = g/(f - g)
            F, G = g, [lookup.add[a, lookup.neg[b]] for a, b in zip(f, g)]
        elif s == 3:
            F, G = f, g
        else:
            # 1/phi
            F, G = g, f
        two_poles = (G[2] == 0) & (G[1] != 0)
        return F[:3], G[:3], two_poles

    @property
    def key_length(self) -> int:
        return 8 if self.ctx.p == 2 else 5

    def criterion_keys(self, shape: tuple[int, int], start: int, stop: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        One integer per pair encoding what the criterion decides on.

        Odd q: the coefficients of the pencil discriminant Delta(t). Even q:
        the coefficients of the resolvent (B, C), taken after x -> x + s has
        cleared the constant part of the x^2 coefficient. Coefficient i of the
        concatenated vector contributes code * q^i.

        Returns (keys, two_poles, inseparable).
        """
        ctx, lookup = self.ctx, self.lookup
        F, G, two_poles = self.pencil(shape, start, stop)
        neg, add, mul = lookup.neg, lookup.add, lookup.mul
        # x^3 + a x^2 + b x + c with a, b, c linear in t
        a, b, c = [F[2], neg[G[2]]], [F[1], neg[G[1]]], [F[0], neg[G[0]]]

        def code(n: int) -> int:
            return ctx(n).value

        if ctx.p == 2:
            # x -> x + s with s = a0; in char 2 this leaves a0 = 0, b0 + s^2 and c + b s + a s^2 + s^3
            s = a[0]
            s2 = mul[s, s]
            c = [
                add[add[c[0], mul[b[0], s]], add[mul[a[0], s2], mul[s2, s]]],
                add[add[c[1], mul[b[1], s]], mul[a[1], s2]],
            ]
            b = [add[b[0], s2], b[1]]
            a = [np.zeros_like(s), a[1]]

        ab = _tp_mul(lookup, a, b)
        abc = _tp_mul(lookup, ab, c)
        a3c = _tp_mul(lookup, _tp_mul(lookup, _tp_mul(lookup, a, a), a), c)
        b3 = _tp_mul(lookup, _tp_mul(lookup, b, b), b)
        c2 = _tp_mul(lookup, c, c)
        if ctx.p == 2:
            B = _tp_add(lookup, ab, _tp_scale(lookup, code(-3), c))
            C = _tp_add(lookup, a3c, b3, _tp_scale(lookup, code(9), c2), _tp_scale(lookup, code(-6), abc))
            digits = B + C
            inseparable = np.zeros(two_poles.shape, dtype=bool)
        else:
            digits = _tp_add(
                lookup,
                _tp_scale(lookup, code(18), abc),
                _tp_scale(lookup, code(-4), a3c),
                _tp_mul(lookup, ab, ab),
                _tp_scale(lookup, code(-4), b3),
                _tp_scale(lookup, code(-27), c2),
            )
            # only char 3 has degree-3 pairs inside F_q[x^3]
            inseparable = (F[1] == 0) & (F[2] == 0) & (G[1] == 0) & (G[2] == 0)
            if ctx.p != 3:
                inseparable = np.zeros(two_poles.shape, dtype=bool)

        keys = np.zeros(two_poles.shape, dtype=np.int64)
        for i, d in enumerate(digits):
            keys += d.astype(np.int64) * self.q**i
        return keys, two_poles, inseparable

    def ratfunc(self, shape: tuple[int, int], i: int, j: int) -> RatFunc:
        s, t = shape
        f = Poly.from_codes(self.ctx, self.tables[s][i].tolist())
        g = Poly.from_codes(self.ctx, self.tables[t][j].tolist())
        return RatFunc(f, g)


class _CriterionVerdicts:
    """Criterion verdicts per distinct key, shared by every partition of one census."""

    def __init__(self, tables: _CensusTables):
        self.tables = tables
        self.ctx = tables.ctx
        self.cache: dict[int, bool] = {}

    def block(self, shape: tuple[int, int], start: int, stop: int, coprime: np.ndarray) -> np.ndarray:
        keys, two_poles, inseparable = self.tables.criterion_keys(shape, start, stop)
        verdicts = coprime & inseparable
        live = coprime & ~two_poles & ~inseparable
        if live.any():
            unique, inverse = np.unique(keys[live], return_inverse=True)
            decided = np.array([self.decide(int(key)) for key in unique], dtype=bool)
            verdicts[live] = decided[inverse.reshape(-1)]
            logger.debug("shape %s block %d: %d pairs, %d criterion keys", shape, start, int(live.sum()), len(unique))
        return verdicts

    def decide(self, key: int) -> bool:
        verdict = self.cache.get(key)
        if verdict is None:
            verdict = self._evaluate(key)
            self.cache[key] = verdict
        return verdict

    def _evaluate(self, key: int) -> bool:
        q = self.ctx.q
        codes = []
        for _ in range(self.tables.key_length):
            key, digit = divmod(key, q)
            codes.append(digit)
        if self.ctx.p == 2:
            B, C = Poly.from_codes(self.ctx, codes[:3]), Poly.from_codes(self.ctx, codes[3:])
            return resolvent_verdict(B, C)[0]
        return discriminant_verdict(Poly.from_codes(self.ctx, codes))[0]


# =============================================================================
# Enumeration and counting
# =============================================================================


def enumerate_pairs(ctx: FieldCtx, block_size: int = 32) -> Iterator[tuple[Poly, Poly]]:
    """Every monic coprime (f, g) with max degree 3, shape by shape in :data:`SHAPES` order."""
    tables = _CensusTables(ctx)
    for shape in SHAPES:
        s, t = shape
        for block in chunk(range(tables.size(s)), block_size):
            coprime, _ = tables.block(shape, block.start, block.stop)
            for i, j in np.argwhere(coprime):
                phi = tables.ratfunc(shape, block.start + int(i), int(j))
                yield phi.num, phi.den


def _check_guard(q: int, limit: int, what: str) -> None:
    if q > limit:
        raise GuardExceededError(
            f"{what} is limited to q <= {limit}, got q = {q}",
            operation=what, details={"q": q, "limit": limit},
        )


def _operation_id(ctx: FieldCtx, method: str) -> str:
    return "census-" + re.sub(r"[^0-9A-Za-z]+", "-", ctx.spec).strip("-") + f"-{method}"


def count_permutations(
    ctx: FieldCtx,
    method: str = "brute",
    guards: Optional[Guards] = None,
    threads: Optional[int] = None,
    checkpoint: bool = False,
    progress_callback: Optional[Callable[[PartitionProgress], None]] = None,
) -> CensusResult:
    """
    Count the permutations among all monic coprime pairs, shape by shape.

    ``criterion`` builds every pair's pencil in numpy and reduces it to the
    data the criterion decides on (the discriminant for odd q, the resolvent
    for even q); the criterion then runs once per distinct value.
    ``crosscheck`` compares that with the vectorized brute force pair by pair
    and raises CrosscheckError on any disagreement.

    Raises:
        GuardExceededError: q exceeds the guard for the method
        CrosscheckError: brute force and criterion disagree
        InternalConsistencyError: a (3, 1) or (1, 3) permutation was found
    """
    method = validate_choice(method, METHODS, "method")
    guards = guards or get_guards()
    if method == "criterion":
        _check_guard(ctx.q, guards.max_q_criterion, "count_permutations")
    else:
        _check_guard(ctx.q, guards.max_q_brute, "count_permutations")

    tables = _CensusTables(ctx)
    criterion = _CriterionVerdicts(tables)
    partitions = []
    for shape in SHAPES:
        for block in chunk(range(tables.size(shape[0])), guards.partition_size):
            key = f"{shape[0]}{shape[1]}:{block.start:06d}"
            partitions.append((key, (shape, block.start, block.stop)))

    def work(payload: tuple[tuple[int, int], int, int]) -> dict[str, Any]:
        shape, start, stop = payload
        coprime, permutes = tables.block(shape, start, stop)
        mismatches: list[str] = []
        verdicts = permutes
        if method != "brute":
            verdicts = criterion.block(shape, start, stop, coprime)
            if method == "crosscheck":
                for i, j in np.argwhere(verdicts != permutes):
                    mismatches.append(str(tables.ratfunc(shape, start + int(i), int(j))))
        result: dict[str, Any] = {
            "shape": list(shape),
            "pairs": int(coprime.sum()),
            "permutations": int(verdicts.sum()),
            "mismatches": mismatches,
        }
        if shape == (3, 3):
            f2 = tables.tables[3][start:stop, 2][:, None]
            g2 = tables.tables[3][:, 2][None, :]
            result["distinct_x2"] = int((verdicts & (f2 != g2)).sum())
        return result

    def merge(acc: dict[str, Any], part: dict[str, Any]) -> dict[str, Any]:
        key = "{}{}".format(*part["shape"])
        row = acc.setdefault(key, {"pairs": 0, "permutations": 0, "distinct_x2": None, "mismatches": []})
        row["pairs"] += part["pairs"]
        row["permutations"] += part["permutations"]
        row["mismatches"] = row["mismatches"] + part["mismatches"]
        if "distinct_x2" in part:
            row["distinct_x2"] = (row["distinct_x2"] or 0) + part["distinct_x2"]
        return acc

    config = PartitionConfig(
        partition_size=guards.partition_size,
        threads=threads if threads is not None else guards.threads,
        enable_checkpoints=checkpoint,
        operation_id=_operation_id(ctx, method) if checkpoint else None,
    )
    runner: PartitionRunner = PartitionRunner(config, progress_callback)
    totals = runner.run(partitions, work, merge, {})

    rows = []
    mismatches: list[str] = []
    for shape in SHAPES:
        data = totals.get(f"{shape[0]}{shape[1]}", {"pairs": 0, "permutations": 0, "distinct_x2": None, "mismatches": []})
        mismatches.extend(data["mismatches"])
        rows.append(CensusRow(
            q=ctx.q,
            shape=shape,
            pairs=data["pairs"],
            permutations=data["permutations"],
            method=method,
            distinct_x2=data["distinct_x2"],
            disagreements=len(data["mismatches"]),
        ))
    result = CensusResult(ctx.q, ctx.spec, method, rows, mismatches)

    if mismatches:
        raise CrosscheckError(
            f"{len(mismatches)} pairs over F_{ctx.q} where brute force and criterion disagree",
            operation="count_permutations",
            details={"examples": mismatches[:_MAX_REPORTED_MISMATCHES]},
        )
    for shape in ((3, 1), (1, 3)):
        if result.row(shape).permutations:
            raise InternalConsistencyError(
                f"found {result.row(shape).permutations} permutations of shape {shape}",
                operation="count_permutations",
            )
    logger.info("census over %s (%s): %d pairs, N_q = %d (formula %d)",
                ctx.spec, method, result.pairs, result.N_q, result.formula)
    return result


def census_prfs(ctx: FieldCtx, guards: Optional[Guards] = None) -> list[RatFunc]:
    """The monic-pair permutations themselves, found by the vectorized brute force."""
    guards = guards or get_guards()
    _check_guard(ctx.q, guards.max_q_brute, "census_prfs")
    tables = _CensusTables(ctx)
    found = []
    for shape in SHAPES:
        for block in chunk(range(tables.size(shape[0])), guards.partition_size):
            _, permutes = tables.block(shape, block.start, block.stop)
            found.extend(tables.ratfunc(shape, block.start + int(i), int(j)) for i, j in np.argwhere(permutes))
    return found


# =============================================================================
# Equivalence classes
# =============================================================================


def coefficient_key(phi: RatFunc) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Order on functions: numerator then denominator, coefficient codes from the top degree down."""
    return tuple(reversed(phi.num.padded(4))), tuple(reversed(phi.den.padded(4)))


def mobius_generators(ctx: FieldCtx) -> list[Mobius]:
    """Translations by an F_p-basis, scaling by the primitive element and 1/x; they generate PGL_2(F_q)."""
    gens = [Mobius.translation(ctx, ctx.from_code(ctx.p**j)) for j in range(ctx.k)]
    if ctx.primitive != 1:
        gens.append(Mobius.scaling(ctx, ctx.from_code(ctx.primitive)))
    gens.append(Mobius.inversion(ctx))
    return gens


class _PointAction:
    """The generators acting on P^1 of F_{q^d}, the smallest such field with at least 7 points."""

    def __init__(self, ctx: FieldCtx):
        d = 1
        while ctx.q**d + 1 < _MIN_TABLE_POINTS:
            d += 1
        self.ext: Optional[ExtCtx] = ext_create(ctx, d) if d > 1 else None
        big = self.ext.field if self.ext else ctx
        self.generators = mobius_generators(ctx)
        self.perms = []
        for m in self.generators:
            lifted = self._lift_mobius(m)
            self.perms.append(np.array([lifted.apply(pt).code(big.q) for pt in points(big)], dtype=np.int64))

    def _lift_mobius(self, m: Mobius) -> Mobius:
        if self.ext is None:
            return m
        e = self.ext.embed
        return Mobius.new(e(m.a), e(m.b), e(m.c), e(m.d), self.ext.field)

    def table(self, phi: RatFunc) -> np.ndarray:
        lifted = lift_ratfunc(phi, self.ext) if self.ext else phi
        return np.array(image_codes(lifted), dtype=np.int64)


def _walk_orbit(action: _PointAction, seed: RatFunc, start: np.ndarray, visited: set[bytes]) -> Orbit:
    visited.add(start.tobytes())
    best = seed
    size = 1
    queue = deque([(start, seed)])
    while queue:
        table, phi = queue.popleft()
        for gen, perm in zip(action.generators, action.perms):
            for side, moved in (("left", perm[table]), ("right", table[perm])):
                key = moved.tobytes()
                if key in visited:
                    continue
                visited.add(key)
                psi = compose_mobius(phi, gen, side)
                size += 1
                if coefficient_key(psi) < coefficient_key(best):
                    best = psi
                queue.append((moved, psi))
    return Orbit(size, best)


def equivalence_classes(ctx: FieldCtx, guards: Optional[Guards] = None) -> OrbitTable:
    """
    Orbits of all degree-3 permutations under phi -> m1 o phi o m2.

    Seeds come from the monic-pair census; the walked population is every
    degree-3 permutation, (q - 1) N_q functions in total.
    """
    guards = guards or get_guards()
    _check_guard(ctx.q, guards.max_q_orbits, "equivalence_classes")
    action = _PointAction(ctx)
    population = (ctx.q - 1) * formula_Nq(ctx.q)

    visited: set[bytes] = set()
    orbits: list[Orbit] = []
    for seed in census_prfs(ctx, guards):
        if len(visited) >= population:
            break
        start = action.table(seed)
        if start.tobytes() in visited:
            continue
        orbit = _walk_orbit(action, seed, start, visited)
        logger.debug("orbit of %s: %d functions, representative %s", seed, orbit.size, orbit.representative)
        orbits.append(orbit)

    orbits.sort(key=lambda o: coefficient_key(o.representative))
    table = OrbitTable(ctx.q, ctx.spec, orbits)
    logger.info("%s: %d classes over %d functions", ctx.spec, table.class_count, table.population)
    return table


# =============================================================================
# Complete permutations and sampling
# =============================================================================


def predicted_complete(ctx: FieldCtx) -> list[RatFunc]:
    """
    x^3 + b x + c with b = 0 or -b a non-square, and b + 1 = 0 or -(b + 1) a
    non-square; nothing unless 3 | q.
    """
    if ctx.q % 3:
        return []

    def admissible(v) -> bool:
        return not v or not (-v).is_square()

    found = [
        ratfunc_new(Poly(ctx, [c, b, 0, 1]), Poly.const(ctx, 1))
        for b in ctx.elements() if admissible(b) and admissible(b + 1)
        for c in ctx.elements()
    ]
    return sorted(found, key=coefficient_key)


def complete_census(ctx: FieldCtx, guards: Optional[Guards] = None) -> list[RatFunc]:
    """
    Monic-pair permutations phi with phi + x also a permutation.

    Raises:
        GuardExceededError: q exceeds the completeness guard
        InternalConsistencyError: the search disagrees with :func:`predicted_complete`
    """
    guards = guards or get_guards()
    _check_guard(ctx.q, guards.max_q_complete, "complete_census")
    found = sorted((phi for phi in census_prfs(ctx, guards) if is_complete(phi)), key=coefficient_key)
    predicted = predicted_complete(ctx)
    if [coefficient_key(phi) for phi in found] != [coefficient_key(phi) for phi in predicted]:
        raise InternalConsistencyError(
            f"complete search over {ctx.spec} found {len(found)} functions, expected {len(predicted)}",
            operation="complete_census",
            details={"found": [str(phi) for phi in found[:_MAX_REPORTED_MISMATCHES]]},
        )
    return found


def random_mobius(ctx: FieldCtx, rng: random.Random) -> Mobius:
    while True:
        a, b, c, d = (ctx.from_code(rng.randrange(ctx.q)) for _ in range(4))
        if a * d - b * c:
            return Mobius.new(a, b, c, d, ctx)


def sample_prfs(ctx: FieldCtx, count: int, seed: int = 0) -> list[RatFunc]:
    """``count`` seeded draws m1 o rep o m2, rep a class representative chosen uniformly."""
    rng = random.Random(seed)
    reps = [representative(ctx)[1]]
    if ctx.p == 3:
        reps.append(representative(ctx, separable=False)[1])
    return [conjugate(rng.choice(reps), random_mobius(ctx, rng), random_mobius(ctx, rng)) for _ in range(count)]


def sample_pairs(ctx: FieldCtx, count: int, seed: int = 0) -> list[RatFunc]:
    """``count`` seeded monic coprime pairs f/g of degree 3, shapes drawn uniformly."""
    rng = random.Random(seed)

    def monic(deg: int) -> Poly:
        return Poly.from_codes(ctx, [rng.randrange(ctx.q) for _ in range(deg)] + [1])

    out: list[RatFunc] = []
    while len(out) < count:
        s, t = rng.choice(SHAPES)
        f, g = monic(s), monic(t)
        if gcd_monic(f, g).deg == 0:
            out.append(RatFunc(f, g))
    return out
