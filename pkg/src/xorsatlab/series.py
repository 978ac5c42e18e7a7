"""Coefficient extraction from powers of exponential generating functions.

A series g(z) = sum_j g_j z^j / j! is stored by its integer-scaled
coefficients g_j = j! [z^j] g(z).  For such series the product rule becomes
a binomial convolution,

    (g * h)_t = sum_j C(t, j) g_j h_{t-j},

so t! [z^t] g(z)^p is computable in exact integer arithmetic.  This is the
engine behind the chip-allocation counts (truncated-exponential series
e^z - 1 - z extended to column counts >= 2), the all-even column series
cosh z - 1, and the plain e^{nu z} factors.

Two modes: exact big-integer (binary powering of the binomial convolution)
and a log-space float mode for orders too large for comfort, which works on
max-normalized raw coefficients with the log offset carried separately.
"""

from __future__ import annotations

import math

import numpy as np

from xorsatlab.errors import BudgetExceededError

EXACT_ORDER_LIMIT = 120
LOG_ORDER_LIMIT = 600


def terms_ge2(order: int) -> list[int]:
    """j![z^j] of e^z - 1 - z (all integer counts >= 2 allowed per column)."""
    return [0, 0] + [1] * (order - 1) if order >= 2 else [0] * (order + 1)


def terms_even_ge2(order: int) -> list[int]:
    """j![z^j] of cosh z - 1 (positive even column counts)."""
    return [1 if j >= 2 and j % 2 == 0 else 0 for j in range(order + 1)]


def terms_exp(order: int, nu: int) -> list[int]:
    """j![z^j] of e^{nu z}."""
    return [nu**j for j in range(order + 1)]


def convolve_scaled(a: list[int], b: list[int], order: int) -> list[int]:
    out = [0] * (order + 1)
    for t in range(order + 1):
        acc = 0
        for j in range(min(t, len(a) - 1) + 1):
            aj = a[j]
            if aj:
                bj = b[t - j] if t - j < len(b) else 0
                if bj:
                    acc += math.comb(t, j) * aj * bj
        out[t] = acc
    return out


def power_scaled(terms: list[int], p: int, order: int) -> list[int]:
    """t![z^t] g(z)^p for t = 0..order, exact integers (binary powering)."""
    if p == 0:
        return [1] + [0] * order
    result: list[int] | None = None
    base = list(terms[: order + 1])
    while p:
        if p & 1:
            result = base[:] if result is None else convolve_scaled(result, base, order)
        p >>= 1
        if p:
            base = convolve_scaled(base, base, order)
    return result if result is not None else [1] + [0] * order


def egf_power_coeff(terms: list[int], p: int, order: int) -> int:
    """order! [z^order] g(z)^p exactly; guarded at EXACT_ORDER_LIMIT."""
    if order > EXACT_ORDER_LIMIT:
        raise BudgetExceededError(f"order {order} exceeds exact budget {EXACT_ORDER_LIMIT}")
    return power_scaled(terms, p, order)[order]


def log_egf_power_coeff_ge2(p: int, order: int) -> float:
    """log(order! [z^order] (e^z - 1 - z)^p) in float, normalized per step.

    Raw coefficients are convolved with numpy; each step renormalizes by its
    max so intermediate magnitudes stay in float range.  Relative accuracy is
    ~1e-12, far tighter than any consumer's tolerance.  Guarded at
    LOG_ORDER_LIMIT.
    """
    if order > LOG_ORDER_LIMIT:
        raise BudgetExceededError(f"order {order} exceeds log-space budget {LOG_ORDER_LIMIT}")
    if p == 0:
        return 0.0 if order == 0 else -math.inf
    base = np.zeros(order + 1)
    for j in range(2, order + 1):
        base[j] = math.exp(-math.lgamma(j + 1))
    result = None
    offset = 0.0
    base_off = 0.0

    def _norm(vec, off):
        m = vec.max()
        if m <= 0.0:
            return vec, -math.inf
        return vec / m, off + math.log(m)

    base, base_off = _norm(base, 0.0)
    while p:
        if p & 1:
            if result is None:
                result, offset = base.copy(), base_off
            else:
                result = np.convolve(result, base)[: order + 1]
                offset += base_off
                result, offset = _norm(result, offset)
        p >>= 1
        if p:
            base = np.convolve(base, base)[: order + 1]
            base_off *= 2
            base, base_off = _norm(base, base_off)
    val = result[order]
    if val <= 0.0:
        return -math.inf
    return math.lgamma(order + 1) + math.log(val) + offset


__all__ = [
    "EXACT_ORDER_LIMIT",
    "LOG_ORDER_LIMIT",
    "convolve_scaled",
    "egf_power_coeff",
    "log_egf_power_coeff_ge2",
    "power_scaled",
    "terms_even_ge2",
    "terms_exp",
    "terms_ge2",
]
