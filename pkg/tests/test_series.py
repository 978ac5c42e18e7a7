import math
from itertools import product

import pytest

from xorsatlab.errors import BudgetExceededError
from xorsatlab.series import (
    egf_power_coeff,
    log_egf_power_coeff_ge2,
    power_scaled,
    terms_even_ge2,
    terms_exp,
    terms_ge2,
)


def brute_count_ge2(total: int, n_cols: int) -> int:
    """Enumerate chip->column maps where every column gets >= 2 chips."""
    count = 0
    for assign in product(range(n_cols), repeat=total):
        tallies = [0] * n_cols
        for col in assign:
            tallies[col] += 1
        count += all(t >= 2 for t in tallies)
    return count


def test_known_small_counts():
    # 6!(1/(2!4!) + 1/(3!3!) + 1/(4!2!)) = 15 + 20 + 15
    assert egf_power_coeff(terms_ge2(6), 2, 6) == 50
    # single column absorbs all chips
    assert egf_power_coeff(terms_ge2(6), 1, 6) == 1
    assert egf_power_coeff(terms_ge2(8), 1, 8) == 1
    # infeasible: fewer than 2 chips per column
    assert egf_power_coeff(terms_ge2(5), 3, 5) == 0


@pytest.mark.parametrize("total,n_cols", [(6, 2), (6, 3), (8, 2), (9, 3), (12, 2)])
def test_matches_brute_force_enumeration(total, n_cols):
    assert egf_power_coeff(terms_ge2(total), n_cols, total) == brute_count_ge2(total, n_cols)


def test_even_series_parity():
    # coefficient of z^t in (cosh z - 1): 1/t! for even t >= 2, else 0
    for t in range(2, 12):
        expected = 1 if t % 2 == 0 else 0
        assert egf_power_coeff(terms_even_ge2(t), 1, t) == expected


def test_even_series_two_columns():
    # 6![z^6](cosh z - 1)^2: compositions (2,4),(4,2) -> 15 + 15
    assert egf_power_coeff(terms_even_ge2(6), 2, 6) == 30
    # odd total is impossible
    assert egf_power_coeff(terms_even_ge2(9), 2, 9) == 0


def test_exp_convolution_is_binomial_sum():
    # e^{3z} alone: t![z^t] = 3^t
    terms = terms_exp(5, 3)
    assert power_scaled(terms, 1, 5)[5] == 3**5


def test_log_mode_agrees_with_exact():
    for npow, order in [(3, 20), (5, 40), (7, 60), (10, 100)]:
        exact = egf_power_coeff(terms_ge2(order), npow, order)
        approx = log_egf_power_coeff_ge2(npow, order)
        assert math.isclose(math.log(exact), approx, rel_tol=1e-10)


def test_log_mode_infeasible():
    assert log_egf_power_coeff_ge2(4, 5) == -math.inf


def test_budget_guards():
    with pytest.raises(BudgetExceededError):
        egf_power_coeff(terms_ge2(130), 3, 130)
    with pytest.raises(BudgetExceededError):
        log_egf_power_coeff_ge2(3, 700)
