"""Uniform samplers for random k-XORSAT instances.

Three models:

* ``unconstrained``: each equation is a uniform k-subset of the variables,
  right-hand-side bits i.i.d. uniform.
* ``relaxed_C`` (chip model): k labeled chips per equation thrown into an
  m x n cell array so that every column receives at least 2 chips; a cell
  may hold several chips, so a variable may repeat inside an equation.
* ``constrained``: 0/1 matrices with row sums k and all column sums >= 2;
  sampled by rejection from the chip model (accept when no cell holds two
  or more chips, then forget chip labels).

The chip sampler draws the n column totals as i.i.d. >=2-truncated
Poissons with tilt lambda = psi^{-1}(km/n), resampling the whole vector
until it sums to km (the tilt maximizes the hit probability; expected
retries grow like sqrt(2 pi n Var Z)), then deals the km chips to columns
by a uniform shuffle.

Everything is keyed by a Seed; a fixed (master, stream) pair reproduces
instances bit-exactly.  JSON and a compact varint binary format both
round-trip exactly (see `to_bytes` for the layout).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from xorsatlab.errors import BudgetExceededError, RejectionBudgetError
from xorsatlab.formulas import gamma as _gamma
from xorsatlab.formulas import lambda_of
from xorsatlab.rng import Seed
from xorsatlab.series import (
    EXACT_ORDER_LIMIT,
    LOG_ORDER_LIMIT,
    egf_power_coeff,
    log_egf_power_coeff_ge2,
    terms_ge2,
)

MODEL_UNCONSTRAINED = "unconstrained"
MODEL_CONSTRAINED = "constrained"
MODEL_RELAXED = "relaxed_C"
_MODELS = (MODEL_UNCONSTRAINED, MODEL_CONSTRAINED, MODEL_RELAXED)

_DEGREE_BATCH = 64  # fixed so streams are consumed identically everywhere


@dataclass
class Instance:
    """A k-XORSAT system: m weight-k equations over n variables plus rhs bits.

    Row index lists are strictly increasing except under ``relaxed_C``,
    where a variable may repeat (sorted, repeats allowed).
    """

    k: int
    n: int
    m: int
    rows: list[list[int]]
    rhs: list[int]
    model_tag: str
    seed: Seed | None = None

    def validate(self) -> None:
        if self.model_tag not in _MODELS:
            raise ValueError(f"unknown model_tag {self.model_tag!r}")
        if len(self.rows) != self.m or len(self.rhs) != self.m:
            raise ValueError("row/rhs count does not match m")
        degree = np.zeros(self.n, dtype=np.int64)
        for row in self.rows:
            if len(row) != self.k:
                raise ValueError("row weight does not match k")
            for a, b in zip(row, row[1:]):
                if self.model_tag == MODEL_RELAXED:
                    if b < a:
                        raise ValueError("relaxed rows must be sorted")
                elif b <= a:
                    raise ValueError("row indices must be strictly increasing")
            for j in row:
                if not 0 <= j < self.n:
                    raise ValueError(f"variable index {j} out of range")
                degree[j] += 1
        if any(b not in (0, 1) for b in self.rhs):
            raise ValueError("rhs must be 0/1")
        if self.model_tag == MODEL_CONSTRAINED and self.n and degree.min() < 2:
            raise ValueError("constrained instance has a variable of degree < 2")

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        d = {
            "k": self.k,
            "n": self.n,
            "m": self.m,
            "rows": self.rows,
            "rhs": self.rhs,
            "model_tag": self.model_tag,
        }
        d["seed"] = self.seed.to_dict() if self.seed is not None else None
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "Instance":
        seed = Seed.from_dict(d["seed"]) if d.get("seed") else None
        inst = cls(
            k=int(d["k"]),
            n=int(d["n"]),
            m=int(d["m"]),
            rows=[[int(j) for j in row] for row in d["rows"]],
            rhs=[int(b) for b in d["rhs"]],
            model_tag=str(d["model_tag"]),
            seed=seed,
        )
        inst.validate()
        return inst

    @classmethod
    def loads(cls, text: str) -> "Instance":
        return cls.from_json_dict(json.loads(text))

    def to_bytes(self) -> bytes:
        """Compact binary: magic "XLI1", varint k/n/m, model byte, optional
        seed (2 x u64 LE), rows as varint first-index + index gaps, rhs bits
        packed LSB-first."""
        out = bytearray(b"XLI1")
        for v in (self.k, self.n, self.m):
            _put_varint(out, v)
        out.append(_MODELS.index(self.model_tag))
        if self.seed is None:
            out.append(0)
        else:
            out.append(1)
            out += (self.seed.master & (1 << 64) - 1).to_bytes(8, "little")
            out += (self.seed.stream & (1 << 64) - 1).to_bytes(8, "little")
        for row in self.rows:
            _put_varint(out, row[0])
            for a, b in zip(row, row[1:]):
                _put_varint(out, b - a)
        packed = np.packbits(np.asarray(self.rhs, dtype=np.uint8), bitorder="little")
        out += packed.tobytes()
        return bytes(out)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "Instance":
        if blob[:4] != b"XLI1":
            raise ValueError("bad magic; not an xorsatlab binary instance")
        pos = 4
        k, pos = _get_varint(blob, pos)
        n, pos = _get_varint(blob, pos)
        m, pos = _get_varint(blob, pos)
        model = _MODELS[blob[pos]]
        pos += 1
        seed = None
        if blob[pos]:
            master = int.from_bytes(blob[pos + 1 : pos + 9], "little")
            stream = int.from_bytes(blob[pos + 9 : pos + 17], "little")
            seed = Seed(master, stream)
            pos += 17
        else:
            pos += 1
        rows = []
        for _ in range(m):
            first, pos = _get_varint(blob, pos)
            row = [first]
            for _ in range(k - 1):
                gap, pos = _get_varint(blob, pos)
                row.append(row[-1] + gap)
            rows.append(row)
        nbytes = (m + 7) // 8
        bits = np.unpackbits(np.frombuffer(blob[pos : pos + nbytes], dtype=np.uint8), bitorder="little")
        inst = cls(k, n, m, rows, [int(b) for b in bits[:m]], model, seed)
        inst.validate()
        return inst


def _put_varint(out: bytearray, v: int) -> None:
    while True:
        b = v & 0x7F
        v >>= 7
        out.append(b | (0x80 if v else 0))
        if not v:
            return


def _get_varint(blob: bytes, pos: int) -> tuple[int, int]:
    shift = 0
    v = 0
    while True:
        b = blob[pos]
        pos += 1
        v |= (b & 0x7F) << shift
        if not b & 0x80:
            return v, pos
        shift += 7


# ---------------------------------------------------------------------------
# Unconstrained model


def gen_unconstrained(k: int, m: int, n: int, seed: Seed) -> Instance:
    """m independent uniform k-subsets of [n], rhs bits i.i.d. uniform."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = seed.generator()
    if 2 * k <= n:
        rows_arr = rng.integers(0, n, size=(m, k))
        rows_arr.sort(axis=1)
        bad = np.nonzero((np.diff(rows_arr, axis=1) == 0).any(axis=1))[0]
        while bad.size:
            redraw = rng.integers(0, n, size=(bad.size, k))
            redraw.sort(axis=1)
            rows_arr[bad] = redraw
            bad = bad[(np.diff(redraw, axis=1) == 0).any(axis=1)]
        rows = rows_arr.tolist()
    else:
        # dense rows: rejection would stall, take sorted permutation prefixes
        rows = [sorted(rng.permutation(n)[:k].tolist()) for _ in range(m)]
    rhs = rng.integers(0, 2, size=m).tolist()
    return Instance(k, n, m, rows, rhs, MODEL_UNCONSTRAINED, seed)


# ---------------------------------------------------------------------------
# Truncated Poisson and the chip model


@lru_cache(maxsize=64)
def _tpois_cum(lam: float) -> tuple[np.ndarray, int]:
    """CDF table of the >=2-truncated Poisson(lam); values start at 2."""
    norm = math.expm1(lam) - lam
    probs = []
    term = lam * lam / 2.0  # lam^j / j! at j = 2
    j = 2
    cum = 0.0
    while True:
        p = term / norm
        cum += p
        probs.append(cum)
        if cum >= 1.0 or (p < 1e-18 and j > lam):
            break
        j += 1
        term *= lam / j
        if j > 4000:
            break
    arr = np.array(probs)
    arr[-1] = max(arr[-1], 1.0)  # clamp tail (mass < 1e-15) onto the last entry
    return arr, j


def sample_truncated_poisson(lam: float, seed: Seed | None = None, size: int | None = None, rng=None):
    """Draw from P(Z = j) = (lam^j / j!) / (e^lam - 1 - lam), j >= 2, by CDF inversion."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if rng is None:
        if seed is None:
            raise ValueError("need a Seed (or an explicit generator)")
        rng = seed.generator()
    cum, _ = _tpois_cum(lam)
    u = rng.random(size if size is not None else 1)
    vals = 2 + np.searchsorted(cum, u, side="right")
    if size is None:
        return int(vals[0])
    return vals.astype(np.int64)


class _DegreeStream:
    """Supplier of sum-conditioned truncated-Poisson degree vectors.

    Each candidate sequence is drawn as the histogram of its values (one
    multinomial over the truncated-Poisson pmf: O(#values) work instead of
    O(n)) and rejected unless the values sum to `total`; an accepted
    multiset is then arranged uniformly at random.  Because the i.i.d.
    sum-conditioned law is uniform over orderings of each multiset, this is
    distributed exactly as resampling whole vectors until the sum hits,
    only cheaper.  Batching is fixed, so consumption of the underlying
    stream (hence every downstream sample) is reproducible.
    """

    def __init__(self, rng, lam: float, n: int, total: int, batch: int = _DEGREE_BATCH):
        self.rng = rng
        self.n = n
        self.total = total
        self.batch = batch
        self.trivial = total == 2 * n
        if not self.trivial:
            cum, _ = _tpois_cum(lam)
            pvals = np.diff(np.concatenate([[0.0], cum]))
            pvals[-1] = max(0.0, 1.0 - pvals[:-1].sum())
            self.pvals = pvals
            self.values = np.arange(2, 2 + len(pvals), dtype=np.int64)
        self.pending: list[np.ndarray] = []
        self.pending_tries: list[int] = []
        self.since_last_hit = 0

    def next(self) -> tuple[np.ndarray, int]:
        """(degree vector, sequences examined since the previous hit)."""
        if self.trivial:
            return np.full(self.n, 2, dtype=np.int64), 0
        while not self.pending:
            hists = self.rng.multinomial(self.n, self.pvals, size=self.batch)
            sums = hists @ self.values
            prev = -1
            for h in np.nonzero(sums == self.total)[0]:
                degrees = np.repeat(self.values, hists[h])[self.rng.permutation(self.n)]
                self.pending.append(degrees)
                self.pending_tries.append(self.since_last_hit + int(h) - prev)
                self.since_last_hit = 0
                prev = int(h)
            self.since_last_hit += self.batch - 1 - prev
        return self.pending.pop(0), self.pending_tries.pop(0)


@dataclass
class ChipAllocation:
    """Assignment of the km labeled chips to columns (chip t sits in row t // k).

    Chip identity is kept (not just cell counts) because the sampler is
    uniform over chip->column maps; `cell_counts` gives the sparse
    (row, col) -> count view.  `retries` records how many degree vectors
    were examined before the column totals summed to km.
    """

    k: int
    m: int
    n: int
    chip_columns: np.ndarray
    retries: int = 0

    def cell_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for t, col in enumerate(self.chip_columns):
            key = (t // self.k, int(col))
            counts[key] = counts.get(key, 0) + 1
        return counts

    def column_degrees(self) -> np.ndarray:
        return np.bincount(self.chip_columns, minlength=self.n)

    def row_column_lists(self) -> list[list[int]]:
        """Per-row sorted column multisets (the relaxed instance rows)."""
        cols = self.chip_columns.reshape(self.m, self.k)
        return np.sort(cols, axis=1).tolist()

    def validate(self) -> None:
        if self.chip_columns.shape != (self.k * self.m,):
            raise ValueError("chip_columns must have length k*m")
        deg = self.column_degrees()
        if self.n and (len(deg) > self.n or (deg < 2).any()):
            raise ValueError("column degrees must all be >= 2")


def _degree_stream(rng, k: int, m: int, n: int, batch: int = _DEGREE_BATCH) -> _DegreeStream:
    km = k * m
    if km < 2 * n:
        raise ValueError(f"chip model needs km >= 2n, got km={km}, 2n={2 * n}")
    lam = 0.0 if km == 2 * n else lambda_of(km / n)
    return _DegreeStream(rng, lam, n, km, batch)


def _gen_C(rng, k: int, m: int, n: int, degrees_from: _DegreeStream | None = None) -> ChipAllocation:
    km = k * m
    if degrees_from is None:
        degrees_from = _degree_stream(rng, k, m, n)
    degrees, tries = degrees_from.next()
    perm = rng.permutation(km)
    cols_by_position = np.repeat(np.arange(n, dtype=np.int64), degrees)
    chip_columns = np.empty(km, dtype=np.int64)
    chip_columns[perm] = cols_by_position
    return ChipAllocation(k, m, n, chip_columns, tries)


def gen_C_model(k: int, m: int, n: int, seed: Seed) -> ChipAllocation:
    """Uniform chip allocation: row sums k (labeled chips), column sums >= 2."""
    alloc = _gen_C(seed.generator(), k, m, n)
    alloc.validate()
    return alloc


def _has_row_duplicate(chip_columns: np.ndarray, k: int, m: int) -> bool:
    """True when some equation holds the same column twice (a cell collision).

    Chips of one row live in consecutive slots, so cell collisions are
    exactly within-row duplicates; sorting k-wide rows is much cheaper than
    a global cell tally.
    """
    cols = np.sort(chip_columns.reshape(m, k), axis=1)
    return bool((np.diff(cols, axis=1) == 0).any())


def collision_count(alloc: ChipAllocation) -> int:
    """Number of chip pairs sharing a cell: sum over cells of C(count, 2)."""
    keys = (np.arange(alloc.k * alloc.m) // alloc.k) * alloc.n + alloc.chip_columns
    _, counts = np.unique(keys, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def allocation_to_instance(alloc: ChipAllocation, rng) -> Instance:
    """Relaxed instance view of a chip allocation (rows may repeat indices)."""
    rhs = rng.integers(0, 2, size=alloc.m).tolist()
    return Instance(alloc.k, alloc.n, alloc.m, alloc.row_column_lists(), rhs, MODEL_RELAXED)


def gen_constrained(
    k: int, m: int, n: int, seed: Seed, max_rejections: int = 10**6
) -> Instance:
    """Uniform over 0/1 matrices with row sums k and column sums >= 2.

    Rejection from the chip model: accept when no cell holds two or more
    chips, then forget chip labels.  The acceptance rate approaches
    e^{-gamma}, bounded away from zero at fixed density, so exhausting
    `max_rejections` signals a caller bug and raises with diagnostics.
    """
    if k > n:
        raise ValueError(f"need k <= n, got k={k}, n={n}")
    if k * m < 2 * n:
        raise ValueError(f"constrained model needs km >= 2n, got km={k * m}, 2n={2 * n}")
    rng = seed.generator()
    degrees = _degree_stream(rng, k, m, n, batch=256)
    for _ in range(max_rejections):
        alloc = _gen_C(rng, k, m, n, degrees_from=degrees)
        if not _has_row_duplicate(alloc.chip_columns, k, m):
            rows = alloc.row_column_lists()
            rhs = rng.integers(0, 2, size=m).tolist()
            inst = Instance(k, n, m, rows, rhs, MODEL_CONSTRAINED, seed)
            inst.validate()
            return inst
    lam = 0.0 if k * m == 2 * n else lambda_of(k * m / n)
    expected = math.exp(-_gamma(k, lam)) if lam > 0 else float("nan")
    raise RejectionBudgetError(
        f"no collision-free allocation in {max_rejections} tries for k={k}, m={m}, n={n} "
        f"(tilt {lam:.4f}, expected acceptance ~{expected:.3g})"
    )


# ---------------------------------------------------------------------------
# Exact chip-allocation counts


@dataclass(frozen=True)
class CModelCount:
    """|allocations| for (k, m, n): log value always, exact int when small."""

    log_value: float
    exact: int | None


def count_C_exact(k: int, m: int, n: int) -> CModelCount:
    """(km)! [z^{km}] (e^z - 1 - z)^n: chip->column maps with all column sums >= 2.

    Exact big-integer mode for km <= 120, log-space mode up to km <= 600.
    """
    order = k * m
    if order > LOG_ORDER_LIMIT:
        raise BudgetExceededError(f"km = {order} exceeds the DP budget {LOG_ORDER_LIMIT}")
    if order <= EXACT_ORDER_LIMIT:
        exact = egf_power_coeff(terms_ge2(order), n, order)
        log_value = math.log(exact) if exact > 0 else -math.inf
        return CModelCount(log_value, exact)
    return CModelCount(log_egf_power_coeff_ge2(n, order), None)


__all__ = [
    "ChipAllocation",
    "CModelCount",
    "Instance",
    "MODEL_CONSTRAINED",
    "MODEL_RELAXED",
    "MODEL_UNCONSTRAINED",
    "allocation_to_instance",
    "collision_count",
    "count_C_exact",
    "gen_C_model",
    "gen_constrained",
    "gen_unconstrained",
    "sample_truncated_poisson",
]
