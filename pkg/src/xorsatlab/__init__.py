"""Random k-XORSAT laboratory.

Subpackages cover the full pipeline: instance samplers (`instances`),
bit-packed GF(2) linear algebra (`gf2`), 2-core peeling (`peel`), scalar
threshold formulas (`formulas`), outward-rounded interval arithmetic and
negativity certificates (`intervals`, `certify`), and Monte Carlo experiment
campaigns (`experiments`).
"""

from xorsatlab.errors import BudgetExceededError, RejectionBudgetError, XorsatLabError

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "RejectionBudgetError",
    "XorsatLabError",
    "__version__",
]
