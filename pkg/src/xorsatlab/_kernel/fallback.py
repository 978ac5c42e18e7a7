"""Pure-Python GF(2) elimination kernel.

Rows are handled as arbitrary-precision integers (bit j = column j), so the
inner XOR runs at C speed inside CPython's bignum code.  Reduction keeps a
pivot map {column -> row int}; insertion reduces each row against existing
pivots at its lowest set bit, which selects the same pivot columns as
classic left-to-right elimination.
"""

from __future__ import annotations

import numpy as np


def _rows_to_ints(a: np.ndarray) -> list[int]:
    return [int.from_bytes(a[i].tobytes(), "little") for i in range(a.shape[0])]


def _write_rows(a: np.ndarray, rows: list[int]) -> None:
    nbytes = a.shape[1] * 8
    for i, r in enumerate(rows):
        a[i] = np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint64)


def eliminate_words(a: np.ndarray, ncols: int, full: bool = True) -> tuple[int, list[int]]:
    """Reduce `a` in place over GF(2); return (rank, pivot columns).

    See xorsatlab._kernel.__doc__ for the contract.
    """
    m = a.shape[0]
    if m == 0 or ncols == 0 or a.shape[1] == 0:
        return 0, []
    rows = _rows_to_ints(a)
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            c = (v & -v).bit_length() - 1
            p = pivots.get(c)
            if p is None:
                pivots[c] = v
                break
            v ^= p
    cols = sorted(pivots)
    if full:
        # Clear pivot columns from the other pivot rows: unique RREF.
        for c in reversed(cols):
            pr = pivots[c]
            mask = 1 << c
            for c2 in cols:
                if c2 != c and pivots[c2] & mask:
                    pivots[c2] ^= pr
    out = [pivots[c] for c in cols]
    out.extend(0 for _ in range(m - len(out)))
    _write_rows(a, out)
    return len(cols), cols

