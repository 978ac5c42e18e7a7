# cython: language_level=3, boundscheck=False, wraparound=False
"""Word-packed GF(2) row reduction (compiled kernel).

Same contract as xorsatlab._kernel.fallback.eliminate_words; classic
column-ordered elimination.  XOR updates start at the pivot word: every row
still eligible has all-zero bits left of the pivot column, and processed
pivot rows are never touched left of their own pivot.
"""


def eliminate_words(unsigned long long[:, ::1] a, Py_ssize_t ncols, bint full=True):
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t w = a.shape[1]
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, r, piv, word, j
    cdef unsigned long long mask, tmp
    pivots = []
    if m == 0 or w == 0 or ncols == 0:
        return 0, pivots
    for col in range(ncols):
        word = col >> 6
        mask = (<unsigned long long> 1) << (col & 63)
        piv = -1
        for r in range(rank, m):
            if a[r, word] & mask:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(word, w):
                tmp = a[rank, j]
                a[rank, j] = a[piv, j]
                a[piv, j] = tmp
        if full:
            for r in range(m):
                if r != rank and (a[r, word] & mask):
                    for j in range(word, w):
                        a[r, j] ^= a[rank, j]
        else:
            for r in range(rank + 1, m):
                if a[r, word] & mask:
                    for j in range(word, w):
                        a[r, j] ^= a[rank, j]
        pivots.append(col)
        rank += 1
        if rank == m:
            break
    return rank, pivots

