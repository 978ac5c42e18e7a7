"""GF(2) kernel selection.

The hot loop exists twice: a Cython extension (`_ext`) and a pure-Python
big-integer fallback (`fallback`).  Both implement::

    eliminate_words(a, ncols, full) -> (rank, pivot_cols)

where ``a`` is a C-contiguous (rows, words) uint64 array holding row-major
bit-packed rows (bit j of a row lives in word j >> 6 at position j & 63,
bits at column indices >= ncols must be zero) and is reduced in place.
With ``full=True`` the array is left in reduced row echelon form (which is
unique, so the two backends produce identical arrays); with ``full=False``
only (rank, pivot_cols) are contractual and the rows merely span the same
row space.

The extension is preferred; set XORSATLAB_FORCE_FALLBACK=1 to force the
pure-Python kernels (used by the benchmark and the backend-equivalence
tests).
"""

import os

from xorsatlab._kernel import fallback

eliminate_words = fallback.eliminate_words
KERNEL_BACKEND = "python"

if not os.environ.get("XORSATLAB_FORCE_FALLBACK"):
    try:
        from xorsatlab._kernel import _ext

        eliminate_words = _ext.eliminate_words
        KERNEL_BACKEND = "ext"
    except ImportError:
        pass

__all__ = ["eliminate_words", "KERNEL_BACKEND", "fallback"]
