"""Tests for census module."""

import time

import numpy as np
import pytest

from cubic_prf_lib.census import (
    SHAPES,
    _CensusTables,
    _CriterionVerdicts,
    census_prfs,
    coefficient_key,
    complete_census,
    count_permutations,
    enumerate_pairs,
    equivalence_classes,
    expected_class_count,
    formula_Nq,
    formula_shape_counts,
    mobius_generators,
    predicted_complete,
    sample_pairs,
    sample_prfs,
)
from cubic_prf_lib.config_manager import Guards
from cubic_prf_lib.cubicperm import decide_permutation, is_complete, pencil_discriminant
from cubic_prf_lib.error_handler import GuardExceededError, ValidationError
from cubic_prf_lib.gf import field_create
from cubic_prf_lib.polyring import Poly, gcd_monic
from cubic_prf_lib.projfunc import is_permutation_bruteforce, parse_ratfunc

pytestmark = pytest.mark.census

N_Q = {2: 18, 3: 60, 4: 120, 5: 450, 7: 1176, 8: 2592, 9: 3690}
FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2)}


def _ctx(q):
    return field_create(*FIELDS[q])


class TestFormulas:
    @pytest.mark.parametrize("q, expected", sorted(N_Q.items()))
    def test_formula_Nq(self, q, expected):
        assert formula_Nq(q) == expected

    @pytest.mark.parametrize("q", sorted(N_Q))
    def test_shape_counts_add_up(self, q):
        counts = formula_shape_counts(q)
        assert counts.total == formula_Nq(q)
        assert counts.r31 == 0
        assert counts.r33 == counts.r33_distinct_x2 + counts.r33_equal_x2

    def test_shape_counts_f5(self):
        counts = formula_shape_counts(5)
        assert (counts.r33, counts.r32, counts.r30) == (300, 50, 25)
        assert (counts.r33_distinct_x2, counts.r33_equal_x2) == (200, 100)

    def test_shape_counts_char3(self):
        counts = formula_shape_counts(3)
        assert (counts.r33, counts.r32, counts.r30) == (30, 9, 6)

    def test_no_polynomial_permutations_when_q_is_1_mod_3(self):
        assert formula_shape_counts(7).r30 == 0
        assert formula_shape_counts(4).r30 == 0

    def test_to_dict(self):
        data = formula_shape_counts(2).to_dict()
        assert data["N_q"] == 18
        assert data["R31"] == 0

    @pytest.mark.parametrize("q, classes", [(2, 1), (3, 2), (4, 1), (9, 2), (25, 1)])
    def test_expected_class_count(self, q, classes):
        assert expected_class_count(q) == classes

    def test_not_a_prime_power(self):
        with pytest.raises(ValidationError):
            formula_Nq(6)


class TestEnumeration:
    def test_pairs_are_monic_and_coprime(self, f3):
        pairs = list(enumerate_pairs(f3))
        for f, g in pairs:
            assert f.is_monic() and g.is_monic()
            assert max(f.deg, g.deg) == 3
            assert gcd_monic(f, g).deg == 0

    def test_pair_count_matches_census(self, f2):
        assert len(list(enumerate_pairs(f2))) == count_permutations(f2).pairs

    def test_census_prfs_permute(self, f3):
        found = census_prfs(f3)
        assert len(found) == 60
        assert all(is_permutation_bruteforce(phi) for phi in found)

    def test_coefficient_key_orders_by_numerator_first(self, f3):
        x3 = parse_ratfunc("x^3", f3)
        x3x = parse_ratfunc("x^3+x", f3)
        assert coefficient_key(x3) < coefficient_key(x3x)

    def test_mobius_generators(self, f9, f7):
        assert len(mobius_generators(f9)) == 4
        assert len(mobius_generators(f7)) == 3


class TestCountPermutations:
    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_brute_matches_formula(self, q):
        result = count_permutations(_ctx(q))
        assert result.N_q == N_Q[q]
        assert result.matches_formula
        assert result.symmetric()
        assert result.shape_counts() == formula_shape_counts(q)

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [7, 8, 9])
    def test_brute_matches_formula_slow(self, q):
        result = count_permutations(_ctx(q))
        assert result.N_q == N_Q[q]
        assert result.shape_counts() == formula_shape_counts(q)

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_crosscheck(self, q):
        result = count_permutations(_ctx(q), "crosscheck")
        assert result.N_q == N_Q[q]
        assert all(row.disagreements == 0 for row in result.rows)

    def test_criterion(self, f5):
        assert count_permutations(f5, "criterion").N_q == 450

    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_criterion_rows_match_brute(self, q):
        brute = count_permutations(_ctx(q))
        criterion = count_permutations(_ctx(q), "criterion")
        assert [(r.shape, r.pairs, r.permutations, r.distinct_x2) for r in criterion.rows] == [
            (r.shape, r.pairs, r.permutations, r.distinct_x2) for r in brute.rows
        ]

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [5, 7, 8, 9])
    def test_crosscheck_slow(self, q):
        result = count_permutations(_ctx(q), "crosscheck")
        assert result.N_q == N_Q[q]
        assert result.mismatches == []

    @pytest.mark.slow
    def test_crosscheck_census_is_fast(self):
        started = time.perf_counter()
        for q in sorted(N_Q):
            assert count_permutations(_ctx(q), "crosscheck").N_q == N_Q[q]
        assert time.perf_counter() - started < 600

    @pytest.mark.slow
    def test_criterion_f11(self):
        f11 = field_create(11)
        result = count_permutations(f11, "criterion")
        assert result.N_q == formula_Nq(11)
        assert result.symmetric()
        for phi in sample_pairs(f11, 50, seed=11):
            assert decide_permutation(phi, "brute").verdict == decide_permutation(phi, "criterion").verdict

    def test_rows_cover_every_shape(self, f2):
        result = count_permutations(f2)
        assert [row.shape for row in result.rows] == list(SHAPES)
        assert result.row((3, 1)).permutations == 0
        assert result.row((3, 3)).distinct_x2 == 2
        with pytest.raises(KeyError):
            result.row((2, 2))

    def test_threads_do_not_change_counts(self, f4):
        sequential = count_permutations(f4, threads=1, guards=Guards(partition_size=2))
        threaded = count_permutations(f4, threads=4, guards=Guards(partition_size=2))
        assert [r.to_dict() for r in threaded.rows] == [r.to_dict() for r in sequential.rows]

    def test_progress_callback(self, f2):
        seen = []
        count_permutations(f2, progress_callback=lambda p: seen.append(p.percent_complete))
        assert seen[-1] == 100.0

    def test_checkpoint_is_cleared(self, f3, tmp_path, monkeypatch):
        monkeypatch.setattr("pathlib.Path.home", lambda: tmp_path)
        count_permutations(f3, checkpoint=True)
        checkpoints = tmp_path / ".cubicprf" / "checkpoints"
        assert checkpoints.is_dir()
        assert list(checkpoints.iterdir()) == []

    def test_summary(self, f3):
        summary = count_permutations(f3).summary()
        assert (summary["N_q"], summary["formula"], summary["matches"]) == (60, 60, True)
        assert summary["field"] == "3^1"

    def test_guard(self):
        with pytest.raises(GuardExceededError):
            count_permutations(field_create(13))
        with pytest.raises(GuardExceededError):
            count_permutations(field_create(5), guards=Guards(max_q_brute=3))
        with pytest.raises(GuardExceededError, match="q <= 11"):
            count_permutations(field_create(13), "criterion")
        with pytest.raises(GuardExceededError):
            count_permutations(field_create(5), "criterion", guards=Guards(max_q_criterion=4))

    def test_unknown_method(self, f2):
        with pytest.raises(ValidationError):
            count_permutations(f2, "fast")


class TestCriterionKeys:
    @staticmethod
    def _digits(key, q, length):
        codes = []
        for _ in range(length):
            key, digit = divmod(int(key), q)
            codes.append(digit)
        return codes

    @pytest.mark.parametrize("q", [3, 5, 7, 9])
    @pytest.mark.parametrize("shape", SHAPES)
    def test_odd_keys_are_pencil_discriminants(self, q, shape):
        ctx = _ctx(q)
        tables = _CensusTables(ctx)
        stop = min(tables.size(shape[0]), 8)
        coprime, _ = tables.block(shape, 0, stop)
        keys, two_poles, inseparable = tables.criterion_keys(shape, 0, stop)
        checked = 0
        for i, j in np.argwhere(coprime & ~two_poles & ~inseparable):
            phi = tables.ratfunc(shape, int(i), int(j))
            codes = self._digits(keys[i, j], q, tables.key_length)
            assert Poly.from_codes(ctx, codes) == pencil_discriminant(phi)
            checked += 1
        if shape not in ((3, 1), (1, 3)):
            assert checked

    @pytest.mark.parametrize("q", [2, 4, 8])
    def test_even_verdicts_match_decide(self, q):
        ctx = _ctx(q)
        tables = _CensusTables(ctx)
        criterion = _CriterionVerdicts(tables)
        for shape in SHAPES:
            stop = min(tables.size(shape[0]), 6)
            coprime, permutes = tables.block(shape, 0, stop)
            verdicts = criterion.block(shape, 0, stop, coprime)
            for i, j in np.argwhere(coprime):
                phi = tables.ratfunc(shape, int(i), int(j))
                assert bool(verdicts[i, j]) == decide_permutation(phi, "criterion").verdict
                assert bool(verdicts[i, j]) == bool(permutes[i, j])

    def test_two_poles_flagged(self, f5):
        tables = _CensusTables(f5)
        _, two_poles, _ = tables.criterion_keys((3, 1), 0, tables.size(3))
        assert two_poles.all()
        _, two_poles, _ = tables.criterion_keys((1, 3), 0, tables.size(1))
        assert two_poles.all()
        _, two_poles, _ = tables.criterion_keys((3, 0), 0, tables.size(3))
        assert not two_poles.any()

    def test_char3_inseparable_pairs(self, f3):
        tables = _CensusTables(f3)
        _, _, inseparable = tables.criterion_keys((3, 0), 0, tables.size(3))
        rows = np.flatnonzero(inseparable[:, 0])
        assert [tables.tables[3][i].tolist() for i in rows] == [[c, 0, 0, 1] for c in range(3)]

    def test_verdicts_are_cached(self, f5):
        tables = _CensusTables(f5)
        criterion = _CriterionVerdicts(tables)
        coprime, permutes = tables.block((3, 2), 0, tables.size(3))
        assert (criterion.block((3, 2), 0, tables.size(3), coprime) == permutes).all()
        assert 0 < len(criterion.cache) < int(coprime.sum())


class TestEquivalenceClasses:
    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_class_count(self, q):
        table = equivalence_classes(_ctx(q))
        assert table.class_count == expected_class_count(q)
        assert table.population == (q - 1) * N_Q[q]

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [7, 8, 9])
    def test_class_count_slow(self, q):
        table = equivalence_classes(_ctx(q))
        assert table.class_count == expected_class_count(q)
        assert table.population == (q - 1) * N_Q[q]

    def test_char3_orbits(self, f3):
        table = equivalence_classes(f3)
        sizes = sorted(o.size for o in table.orbits)
        assert sum(sizes) == 120
        assert all(is_permutation_bruteforce(o.representative) for o in table.orbits)

    def test_to_dict(self, f2):
        data = equivalence_classes(f2).to_dict()
        assert data["classes"] == 1
        assert data["population"] == 18
        assert len(data["orbits"]) == 1

    def test_guard(self, f5):
        with pytest.raises(GuardExceededError):
            equivalence_classes(f5, Guards(max_q_orbits=4))


class TestComplete:
    def test_prediction_empty_without_char3(self, f5, f7):
        assert predicted_complete(f5) == []
        assert predicted_complete(f7) == []

    def test_prediction_f3(self, f3):
        predicted = predicted_complete(f3)
        assert [str(phi) for phi in predicted] == ["x^3", "x^3+1", "x^3+2"]

    def test_prediction_is_complete(self, f9):
        predicted = predicted_complete(f9)
        assert predicted
        assert all(is_complete(phi) for phi in predicted)

    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_census_matches_prediction(self, q):
        ctx = _ctx(q)
        found = complete_census(ctx)
        assert [coefficient_key(phi) for phi in found] == [coefficient_key(phi) for phi in predicted_complete(ctx)]

    @pytest.mark.slow
    def test_census_f9(self, f9):
        assert len(complete_census(f9)) == len(predicted_complete(f9))

    def test_guard(self, f5):
        with pytest.raises(GuardExceededError):
            complete_census(f5, Guards(max_q_complete=4))


class TestSampling:
    def test_seeded(self, f7):
        assert sample_prfs(f7, 5, seed=3) == sample_prfs(f7, 5, seed=3)

    def test_samples_permute(self, f8):
        assert all(is_permutation_bruteforce(phi) for phi in sample_prfs(f8, 15))

    def test_pairs_are_seeded(self, f7):
        assert sample_pairs(f7, 20, seed=5) == sample_pairs(f7, 20, seed=5)
        assert sample_pairs(f7, 20, seed=5) != sample_pairs(f7, 20, seed=6)

    def test_pairs_are_monic_coprime_cubics(self, f9):
        pairs = sample_pairs(f9, 40, seed=1)
        assert len(pairs) == 40
        for phi in pairs:
            assert phi.degree == 3
            assert phi.num.lc() == 1 and phi.den.lc() == 1
            assert gcd_monic(phi.num, phi.den).deg == 0
        assert {(phi.num.deg, phi.den.deg) for phi in pairs} <= set(SHAPES)
