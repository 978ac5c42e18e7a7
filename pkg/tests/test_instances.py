import math
from collections import Counter
from itertools import combinations, product

import numpy as np
import pytest

from conftest import chi2_pvalue
from xorsatlab import formulas as F
from xorsatlab.errors import BudgetExceededError, RejectionBudgetError
from xorsatlab.instances import (
    ChipAllocation,
    Instance,
    collision_count,
    count_C_exact,
    gen_C_model,
    gen_constrained,
    gen_unconstrained,
    sample_truncated_poisson,
)
from xorsatlab.rng import Seed

CHI2_SIGNIFICANCE = 1e-3


class TestUnconstrained:
    def test_k_equals_n_rows_are_full(self):
        inst = gen_unconstrained(4, 6, 4, Seed(1))
        assert all(row == [0, 1, 2, 3] for row in inst.rows)

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            gen_unconstrained(5, 3, 4, Seed(0))

    def test_determinism(self):
        a = gen_unconstrained(3, 500, 400, Seed(7, 3))
        b = gen_unconstrained(3, 500, 400, Seed(7, 3))
        assert a.to_bytes() == b.to_bytes()
        c = gen_unconstrained(3, 500, 400, Seed(7, 4))
        assert c.to_bytes() != a.to_bytes()

    def test_degree_distribution_chi2(self):
        from scipy.stats import binom

        k, m, n = 3, 10_000, 10_000
        inst = gen_unconstrained(k, m, n, Seed(2024))
        degrees = np.zeros(n, dtype=np.int64)
        for row in inst.rows:
            for v in row:
                degrees[v] += 1
        buckets = 20
        observed = np.bincount(np.minimum(degrees, buckets - 1), minlength=buckets)
        pmf = binom.pmf(np.arange(buckets - 1), m, k / n)
        expected = np.append(pmf, 1.0 - pmf.sum()) * n
        assert chi2_pvalue(observed, expected) > CHI2_SIGNIFICANCE

    def test_rhs_unbiased(self):
        inst = gen_unconstrained(3, 20_000, 5_000, Seed(5))
        frac = np.mean(inst.rhs)
        assert abs(frac - 0.5) < 5 * 0.5 / math.sqrt(20_000)


class TestTruncatedPoisson:
    def test_small_lambda_limit(self):
        draws = sample_truncated_poisson(1e-3, Seed(3), size=100_000)
        assert (draws == 2).mean() >= 0.999

    def test_mean_matches_psi(self):
        lam = F.lambda_of(3.0)  # psi(lam) = 3
        draws = sample_truncated_poisson(lam, Seed(4), size=100_000)
        sd = math.sqrt(F.var_Z(lam) / draws.size)
        assert abs(draws.mean() - 3.0) < 3 * sd

    def test_variance_matches_formula(self):
        lam = 3.058
        draws = sample_truncated_poisson(lam, Seed(6), size=300_000).astype(float)
        v = draws.var()
        target = F.var_Z(lam)
        assert lam / 3.0 <= target <= lam
        centered = draws - draws.mean()
        var_of_var = (centered**4).mean() - v * v
        assert abs(v - target) < 3 * math.sqrt(var_of_var / draws.size)

    def test_rejects_bad_lambda(self):
        with pytest.raises(ValueError):
            sample_truncated_poisson(0.0, Seed(0))


class TestChipModel:
    def test_structural_invariants(self):
        alloc = gen_C_model(3, 600, 500, Seed(11))
        alloc.validate()
        deg = alloc.column_degrees()
        assert deg.min() >= 2 and deg.sum() == 1800
        rows = alloc.row_column_lists()
        assert len(rows) == 600 and all(len(r) == 3 for r in rows)

    def test_cell_counts_view(self):
        alloc = ChipAllocation(3, 2, 2, np.array([0, 0, 1, 0, 1, 1]))
        counts = alloc.cell_counts()
        assert counts == {(0, 0): 2, (0, 1): 1, (1, 0): 1, (1, 1): 2}
        assert collision_count(alloc) == 2

    def test_collision_count_trivial(self):
        spread = ChipAllocation(3, 2, 6, np.array([0, 1, 2, 3, 4, 5]))
        assert collision_count(spread) == 0
        # one cell with 3 chips, every other cell holding at most 1 -> C(3,2)
        triple = ChipAllocation(3, 2, 4, np.array([0, 0, 0, 1, 2, 3]))
        assert collision_count(triple) == 3
        mixed = ChipAllocation(3, 2, 2, np.array([0, 0, 0, 0, 1, 1]))
        assert collision_count(mixed) == 3 + 1

    def test_uniform_over_allocations(self):
        # k=3, m=2, n=2: exactly 50 chip->column maps, all equally likely
        assert count_C_exact(3, 2, 2).exact == 50
        samples = 20_000
        counts = Counter()
        for i in range(samples):
            alloc = gen_C_model(3, 2, 2, Seed(77, i))
            counts[tuple(alloc.chip_columns.tolist())] += 1
        assert len(counts) == 50
        p = 1.0 / 50
        sigma = math.sqrt(samples * p * (1 - p))
        for key, cnt in counts.items():
            assert abs(cnt - samples * p) <= 5 * sigma
        assert chi2_pvalue(list(counts.values()), [samples * p] * 50) > CHI2_SIGNIFICANCE

    def test_degree_retry_count_near_local_limit_prediction(self):
        k, m, n = 3, 1000, 1000
        lam = F.lambda_of(k * m / n)
        predicted = math.sqrt(2 * math.pi * n * F.var_Z(lam))
        retries = [gen_C_model(k, m, n, Seed(13, i)).retries for i in range(300)]
        mean = np.mean(retries)
        assert predicted / 2 <= mean <= predicted * 2

    def test_mean_collisions_tracks_gamma(self):
        k, m, n = 3, 600, 500
        lam = F.lambda_of(k * m / n)
        g = F.gamma(k, lam)
        vals = [collision_count(gen_C_model(k, m, n, Seed(21, i))) for i in range(1500)]
        assert abs(np.mean(vals) - g) < 0.05 * g


class TestConstrained:
    def test_requires_enough_chips(self):
        with pytest.raises(ValueError):
            gen_constrained(3, 2, 4, Seed(0))
        with pytest.raises(ValueError):
            gen_constrained(5, 10, 4, Seed(0))

    def test_structure(self):
        inst = gen_constrained(3, 60, 50, Seed(9))
        inst.validate()
        deg = np.zeros(50, dtype=int)
        for row in inst.rows:
            assert len(set(row)) == 3
            for v in row:
                deg[v] += 1
        assert deg.min() >= 2

    def test_acceptance_rate_near_exp_neg_gamma(self):
        # scaled-down version; the full 10^4-attempt 15% gate runs in acceptance
        k, m, n = 3, 600, 500
        lam = F.lambda_of(k * m / n)
        target = math.exp(-F.gamma(k, lam))
        attempts = 3_000
        rng = Seed(31).generator()
        from xorsatlab.instances import _gen_C

        accepted = sum(collision_count(_gen_C(rng, k, m, n)) == 0 for _ in range(attempts))
        assert abs(accepted / attempts - target) < 0.25 * target

    def test_budget_error_has_diagnostics(self):
        with pytest.raises(RejectionBudgetError) as err:
            gen_constrained(3, 600, 500, Seed(1), max_rejections=1)
        assert "acceptance" in str(err.value)

    def test_uniform_over_tiny_spaces(self):
        # A_{3,3} with k=3 has a single matrix (rows forced to {0,1,2});
        # instances then differ only through the 8 equally likely rhs vectors
        samples = 2500
        counts = Counter()
        for i in range(samples):
            inst = gen_constrained(3, 3, 3, Seed(41, i))
            assert inst.rows == [[0, 1, 2]] * 3
            counts[tuple(inst.rhs)] += 1
        assert chi2_pvalue(list(counts.values()), [samples / 8] * 8) > CHI2_SIGNIFICANCE

    def test_uniform_over_A_3rows_4cols(self):
        # enumerate A_{m=3,n=4} for k=3 by brute force, then chi-square
        space = []
        triples = list(combinations(range(4), 3))
        for rows in product(triples, repeat=3):
            deg = [0] * 4
            for row in rows:
                for v in row:
                    deg[v] += 1
            if min(deg) >= 2:
                space.append(rows)
        assert len(space) == 24
        samples = 8_000
        counts = Counter()
        for i in range(samples):
            inst = gen_constrained(3, 3, 4, Seed(43, i))
            counts[tuple(tuple(r) for r in inst.rows)] += 1
        assert set(counts) <= set(space)
        observed = [counts.get(key, 0) for key in space]
        assert chi2_pvalue(observed, [samples / 24] * 24) > CHI2_SIGNIFICANCE


class TestAllocationCounts:
    def test_single_column(self):
        assert count_C_exact(3, 2, 1).exact == 1

    def test_brute_force_agreement(self):
        for k, m, n in [(3, 2, 2), (3, 2, 3), (2, 4, 3), (3, 4, 2)]:
            km = k * m
            expected = 0
            for assign in product(range(n), repeat=km):
                tallies = [0] * n
                for col in assign:
                    tallies[col] += 1
                expected += all(t >= 2 for t in tallies)
            assert count_C_exact(k, m, n).exact == expected

    def test_log_matches_asymptotic_form(self):
        # (km)! f(lam)^n / lam^{km} / sqrt(2 pi n Var Z) within 5%
        k, m, n = 3, 100, 100
        got = count_C_exact(k, m, n)
        assert got.exact is None
        lam = F.lambda_of(k * m / n)
        approx = (
            math.lgamma(k * m + 1)
            + n * math.log(F.f(lam))
            - k * m * math.log(lam)
            - 0.5 * math.log(2 * math.pi * n * F.var_Z(lam))
        )
        assert abs(math.exp(got.log_value - approx) - 1.0) < 0.05

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            count_C_exact(3, 300, 100)


class TestSerialization:
    def test_json_round_trip(self):
        inst = gen_constrained(3, 20, 18, Seed(8, 2))
        again = Instance.loads(inst.dumps())
        assert again == inst

    def test_binary_round_trip(self):
        for model_gen in (
            lambda: gen_unconstrained(4, 30, 40, Seed(1, 5)),
            lambda: gen_constrained(3, 25, 20, Seed(2, 5)),
        ):
            inst = model_gen()
            blob = inst.to_bytes()
            again = Instance.from_bytes(blob)
            assert again == inst
            assert again.to_bytes() == blob

    def test_binary_rejects_garbage(self):
        with pytest.raises(ValueError):
            Instance.from_bytes(b"NOPE" + b"\x00" * 20)

    def test_validation_catches_bad_instances(self):
        inst = Instance(3, 5, 1, [[0, 1, 1]], [0], "unconstrained")
        with pytest.raises(ValueError):
            inst.validate()
        inst = Instance(3, 5, 1, [[0, 1, 2]], [0], "constrained")
        with pytest.raises(ValueError):
            inst.validate()
        relaxed = Instance(3, 5, 1, [[0, 1, 1]], [0], "relaxed_C")
        relaxed.validate()
