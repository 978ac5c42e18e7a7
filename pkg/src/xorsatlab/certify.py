"""Machine-checkable negativity certificates for the rate function H_k.

Each certificate is a gap-free cover of a parameter range by cells, every
cell carrying an interval-arithmetic upper bound strictly below the claim's
target.  Covers are found adaptively (greedy marching with width doubling,
or a zeta-lattice search per cell for the k=3 grid) but verification never
depends on how the cover was found: a stored certificate replays by
re-evaluating each cell bound.

Claims:

* ``amed``    - s_k(a) = H(a) + ln(1/2 + 1/2 e^{-2ka}) is below a negative
                target on [left_k, 0.2743] (k >= 4).  Cells use the monotone
                split bound H(a'') + ln(1/2 + 1/2 e^{-2ka'}).
* ``k3grid``  - for k = 3 and c near 1, H_3(a, zeta; c) <= -0.002 on
                a in [0.099, 0.400], with zeta = (z1, z2) chosen per 0.001
                cell from the 0.001 lattice.
* ``alarge``  - the constant inequalities feeding the near-1/2 range
                (bounds on R(lam, x) = f(lam x)/(x^2 f(lam)), psi values,
                the entropy bound H(1/2 - x/2) <= ln(4/(x^2+2))) and the
                chained rate bound H_4 <= -x^2/15 + 1e-12 at c = 1.
* ``monotone``- sign certificates: e^x + e^{-x} - 2 - x^2 >= 0 (psi is
                increasing), (s-2)e^s + s + 2 >= 0 (R is increasing in x),
                cosh x <= e^{x^2/2}.

Equality-at-endpoint claims (all three sign certificates at 0, the entropy
bound and the chained rate bound at x = 0) cannot be certified strictly by
outward-rounded arithmetic; those endpoint cells carry the documented
slack targets 1e-15 / 1e-12 and use series or Taylor forms whose lower
bounds are exact at the degenerate point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from xorsatlab.formulas import _hk_terms, lambda_of
from xorsatlab.intervals import (
    Interval,
    clamp,
    cosh_gap,
    entropy_int,
    f_int,
    fprime_int,
    gauss_cosh_gap,
    iconst,
    idecimal,
    iexp,
    ilog,
    ixlog_ratio,
    lambda_interval,
    psi_int,
    rate_numerator,
)

_ONE = Interval.point(1.0)
_X0 = "0.4514"  # right end of the chained-rate range
_ENDPOINT_SLACK = 1e-15
_CHAIN_SLACK = 1e-12


# ---------------------------------------------------------------------------
# Certificate containers


@dataclass
class CoverCell:
    """One certified cell: sup of the claim expression over [lo, hi] is `bound`,
    which must beat `target` (strictly unless strict=False)."""

    tag: str
    lo: float
    hi: float
    bound: float
    target: float
    strict: bool = True
    zeta: tuple[float, float] | None = None

    def passes(self) -> bool:
        return self.bound < self.target if self.strict else self.bound <= self.target

    def to_json_dict(self) -> dict:
        d = {
            "tag": self.tag,
            "lo": self.lo,
            "hi": self.hi,
            "bound": self.bound,
            "target": self.target,
            "strict": self.strict,
        }
        if self.zeta is not None:
            d["zeta"] = list(self.zeta)
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "CoverCell":
        zeta = tuple(d["zeta"]) if "zeta" in d and d["zeta"] is not None else None
        return cls(d["tag"], d["lo"], d["hi"], d["bound"], d["target"], d.get("strict", True), zeta)


@dataclass
class Certificate:
    claim_id: str
    k: int | None
    c_range: tuple[float, float] | None
    cells: list[CoverCell]
    global_bound: float
    verified: bool
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "k": self.k,
            "c_range": list(self.c_range) if self.c_range else None,
            "cells": [c.to_json_dict() for c in self.cells],
            "global_bound": self.global_bound,
            "verified": self.verified,
            "details": self.details,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "Certificate":
        return cls(
            claim_id=d["claim_id"],
            k=d["k"],
            c_range=tuple(d["c_range"]) if d.get("c_range") else None,
            cells=[CoverCell.from_json_dict(c) for c in d["cells"]],
            global_bound=d["global_bound"],
            verified=d["verified"],
            details=d.get("details", {}),
        )

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json_dict(json.loads(text))


def check_cover(cells: list[CoverCell], lo: float, hi: float) -> bool:
    """Union of cells covers [lo, hi] with no gaps (endpoints chain)."""
    if not cells:
        return False
    ordered = sorted(cells, key=lambda c: c.lo)
    if ordered[0].lo > lo:
        return False
    reach = ordered[0].hi
    for cell in ordered[1:]:
        if cell.lo > reach:
            return False
        reach = max(reach, cell.hi)
    return reach >= hi


def _finish(cert: Certificate) -> Certificate:
    if not cert.cells:
        cert.global_bound = math.inf
        cert.verified = False
        return cert
    targets = {c.target for c in cert.cells}
    if len(targets) == 1:
        cert.global_bound = max(c.bound for c in cert.cells)
        cert.details["bound_kind"] = "max cell bound (uniform target)"
    else:
        cert.global_bound = max(c.bound - c.target for c in cert.cells)
        cert.details["bound_kind"] = "max (bound - target) over cells"
    cert.verified = all(c.passes() for c in cert.cells) and not cert.details.get("cover_gap", False)
    return cert


# ---------------------------------------------------------------------------
# Greedy adaptive marching


def _march(tag, lo, hi, evaluate, target, budget=10**5, strict=True, w0=None):
    """Left-to-right cover of [lo, hi]: grow width on success, halve on failure."""
    cells: list[CoverCell] = []
    a = lo
    w = w0 if w0 is not None else (hi - lo)
    while a < hi:
        if len(cells) >= budget or w < 1e-12:
            return cells, False, a
        b = min(a + w, hi)
        bound = evaluate(Interval(a, b))
        cell = CoverCell(tag, a, b, bound, target, strict)
        if cell.passes():
            cells.append(cell)
            a = b
            w *= 2.0
        else:
            w *= 0.5
    return cells, True, hi


# ---------------------------------------------------------------------------
# Claim: s_k negative on the medium range (k >= 4)


def interval_s_k(k: int, a: Interval) -> Interval:
    """Certified upper bound on sup of s_k over `a` (subset of [0, 1/2]).

    H is increasing there and the log term decreasing, so
    s_k <= H(a.hi) + ln(1/2 + 1/2 e^{-2k a.lo}); the returned interval
    encloses that split bound and its .hi certifies the sup.
    """
    if a.lo < 0.0 or a.hi > 0.5:
        raise ValueError("interval_s_k needs a inside [0, 1/2]")
    h = entropy_int(Interval.point(a.hi))
    e = iexp(Interval.point(-2.0 * k) * Interval.point(a.lo))
    logterm = ilog((_ONE + e) * Interval.point(0.5))
    return h + logterm


_AMED_LEFT = {4: 0.1681, 5: 0.1840, 6: 0.1666}
_AMED_TARGET = {4: -1e-5, 5: -0.005, 6: -0.03}
_AMED_RIGHT = 0.2743


def certify_amed(
    k: int,
    target: float | None = None,
    alpha_range: tuple[float, float] | None = None,
    budget: int = 10**5,
) -> Certificate:
    """Cover [left_k, 0.2743] with cells certifying s_k < target.

    Defaults: left/target (0.1681, -1e-5) for k=4, (0.1840, -0.005) for
    k=5, (0.1666, -0.03) for k=6, (1/k, -0.03) beyond.
    """
    if k < 4:
        raise ValueError("the s_k negativity claim needs k >= 4")
    if target is None:
        target = _AMED_TARGET.get(k, -0.03)
    if alpha_range is None:
        alpha_range = (_AMED_LEFT.get(k, 1.0 / k), _AMED_RIGHT)
    lo, hi = alpha_range
    cells, ok, stopped = _march("s_k", lo, hi, lambda A: interval_s_k(k, A).hi, target, budget)
    cert = Certificate("amed", k, None, cells, math.nan, False, {"alpha_range": [lo, hi], "target": target})
    if not ok:
        cert.details["failed_at"] = stopped
        cert.details["cover_gap"] = True
    elif not check_cover(cells, lo, hi):
        cert.details["cover_gap"] = True
    return _finish(cert)


# ---------------------------------------------------------------------------
# Claim: H_3 <= -0.002 on the 0.001 grid near c = 1


def _hk_box(k: int, A: Interval, z1: float, z2: float, C: Interval, LAM: Interval) -> Interval:
    """Straight interval evaluation of H_k over a (alpha, c, lambda) box."""
    B = _ONE - A
    head = C * (entropy_int(A) + (ixlog_ratio(A, z1) + ixlog_ratio(B, z2)) * k)
    s = Interval.point(z2) + Interval.point(z1)
    d = Interval.point(z2) - Interval.point(z1)
    num = f_int(LAM * s) + f_int(LAM * d)
    den = f_int(LAM) * 2
    return head + ilog(num / den)


def _hk_dalpha(k: int, A: Interval, z1: float, z2: float, C: Interval) -> Interval:
    B = _ONE - A
    inner = ilog(B / A) + (ilog(A / Interval.point(z1)) - ilog(B / Interval.point(z2))) * k
    return C * inner


def _hk_dc(k: int, A: Interval, z1: float, z2: float) -> Interval:
    B = _ONE - A
    return entropy_int(A) + (ixlog_ratio(A, z1) + ixlog_ratio(B, z2)) * k


def _hk_dlam(z1: float, z2: float, LAM: Interval) -> Interval:
    s = Interval.point(z2) + Interval.point(z1)
    d = Interval.point(z2) - Interval.point(z1)
    num = s * fprime_int(LAM * s) + d * fprime_int(LAM * d)
    den = f_int(LAM * s) + f_int(LAM * d)
    return num / den - fprime_int(LAM) / f_int(LAM)


def _hk_centered(k: int, A: Interval, z1: float, z2: float, C: Interval, LAM: Interval) -> Interval:
    """Mean-value form: H(mid) + dH/d(alpha,c,lambda)(box) . (box - mid).

    Much tighter than the straight box evaluation because the lambda and c
    dependencies nearly cancel near the optimal zeta.
    """
    am, cm, lm = A.mid, C.mid, LAM.mid
    f0 = _hk_box(k, Interval.point(am), z1, z2, Interval.point(cm), Interval.point(lm))
    out = f0 + _hk_dalpha(k, A, z1, z2, C) * (A - am)
    out = out + _hk_dc(k, A, z1, z2) * (C - cm)
    return out + _hk_dlam(z1, z2, LAM) * (LAM - lm)


def hk_cell_bound(
    k: int,
    alpha_cell: tuple[float, float],
    zeta: tuple[float, float],
    c_range: tuple[float, float],
    c_div: int = 2,
    a_div: int = 2,
    _lam_subs: list[tuple[Interval, Interval]] | None = None,
) -> float:
    """Certified sup of H_k(alpha, zeta; c) over alpha_cell x c_range.

    Subdivides the box (c_div x a_div), bounds each sub-box by the centered
    form, and returns the max.
    """
    z1, z2 = zeta
    if _lam_subs is None:
        _lam_subs = _lambda_subranges(k, c_range, c_div)
    alo, ahi = alpha_cell
    aedges = [alo + (ahi - alo) * i / a_div for i in range(a_div + 1)]
    worst = -math.inf
    for C, LAM in _lam_subs:
        for j in range(a_div):
            A = Interval(aedges[j], aedges[j + 1])
            worst = max(worst, _hk_centered(k, A, z1, z2, C, LAM).hi)
    return worst


def _lambda_subranges(k: int, c_range: tuple[float, float], c_div: int) -> list[tuple[Interval, Interval]]:
    c0, c1 = c_range
    edges = [c0 + (c1 - c0) * i / c_div for i in range(c_div + 1)]
    out = []
    for i in range(c_div):
        C = Interval(edges[i], edges[i + 1])
        out.append((C, lambda_interval(C * float(k))))
    return out


def _descend_zeta(objective, z: tuple[int, int], lattice: int, max_steps: int = 2000) -> tuple[int, int]:
    """Best-neighbor descent on the zeta lattice (units of 1/lattice)."""
    cur = objective(z)
    for _ in range(max_steps):
        best_v, best_z = cur, None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                cand = (z[0] + dx, z[1] + dy)
                if not (1 <= cand[0] < lattice and 1 <= cand[1] < lattice):
                    continue
                v = objective(cand)
                if v < best_v - 1e-15:
                    best_v, best_z = v, cand
        if best_z is None:
            return z
        cur, z = best_v, best_z
    return z


def certify_k3_grid(
    c_range: tuple[float, float] = (0.999, 1.001),
    target: float = -0.002,
    c_div: int = 2,
    a_div: int = 2,
) -> Certificate:
    """For each alpha cell [j/1000, (j+1)/1000], j = 99..399, find a 0.001-lattice
    zeta minimizing the certified H_3 bound over (cell x c_range) and certify it
    below `target`."""
    if not (0.99 <= c_range[0] < c_range[1] <= 1.01):
        raise ValueError("c_range must lie inside [0.99, 1.01]")
    if c_range[1] - c_range[0] > 0.02:
        raise ValueError("c_range width must be <= 0.02")
    k = 3
    lattice = 1000
    lam_subs = _lambda_subranges(k, c_range, c_div)
    c_mid = 0.5 * (c_range[0] + c_range[1])
    lam_mid = lambda_of(k * c_mid)
    edges = [j / lattice for j in range(99, 401)]
    cells: list[CoverCell] = []
    failures = []
    prev_z: tuple[int, int] | None = None
    for lo, hi in zip(edges, edges[1:]):
        amid = 0.5 * (lo + hi)

        def objective(z: tuple[int, int]) -> float:
            return _hk_terms(amid, z[0] / lattice, z[1] / lattice, c_mid, k, lam_mid)

        start = prev_z or (round(amid * lattice), round((1.0 - amid) * lattice))
        z = _descend_zeta(objective, start, lattice)
        accepted = None
        for radius in (1, 2, 3):
            ring = [
                (z[0] + dx, z[1] + dy)
                for dx in range(-radius, radius + 1)
                for dy in range(-radius, radius + 1)
                if 1 <= z[0] + dx < lattice and 1 <= z[1] + dy < lattice
            ]
            ring.sort(key=objective)
            for cand in ring[: 4 * radius]:
                zeta = (cand[0] / lattice, cand[1] / lattice)
                bound = hk_cell_bound(k, (lo, hi), zeta, c_range, c_div, a_div, lam_subs)
                if bound < target:
                    accepted = CoverCell("hk", lo, hi, bound, target, True, zeta)
                    prev_z = cand
                    break
            if accepted:
                break
        if accepted is None:
            zeta = (z[0] / lattice, z[1] / lattice)
            bound = hk_cell_bound(k, (lo, hi), zeta, c_range, c_div, a_div, lam_subs)
            cells.append(CoverCell("hk", lo, hi, bound, target, True, zeta))
            failures.append([lo, hi])
        else:
            cells.append(accepted)
    details = {
        "alpha_range": [edges[0], edges[-1]],
        "target": target,
        "c_div": c_div,
        "a_div": a_div,
        "zeta_lattice": 1.0 / lattice,
    }
    if failures:
        details["failed_cells"] = failures
    cert = Certificate("k3grid", k, c_range, cells, math.nan, False, details)
    if not check_cover(cells, edges[0], edges[-1]):
        cert.details["cover_gap"] = True
    return _finish(cert)


# ---------------------------------------------------------------------------
# Claim: constants and the chained rate bound near alpha = 1/2


def _iR(lam: Interval, x: Interval) -> Interval:
    return f_int(lam * x) / (x.sq() * f_int(lam))


def _entropy_gap_direct(X: Interval) -> Interval:
    """D(x) = H((1-x)/2) - ln(4/(x^2+2)) evaluated straight over X."""
    A = clamp((_ONE - X) * Interval.point(0.5), 0.0, 1.0)
    return entropy_int(A) - ilog(Interval.point(4.0) / (X.sq() + 2))


def _entropy_gap_taylor_cell(hi: float) -> float:
    """Upper bound of D on [0, hi] via D(0) + x D'(0) + x^2/2 sup D''.

    D and D' vanish at 0 (equality point) and
    D'' = -x^2 (10 - x^2) / ((x^2+2)^2 (1 - x^2)) <= 0, so the bound is a
    few ulps wide; direct evaluation can never certify this cell.
    """
    X = Interval(0.0, hi)
    d0 = _entropy_gap_direct(Interval.point(0.0))
    # D'(x) = 2x/(x^2+2) - (1/2) ln((1+x)/(1-x)), exactly 0 at x = 0
    xz = Interval.point(0.0)
    d1 = xz * 2 / (xz.sq() + 2) - ilog((_ONE + xz) / (_ONE - xz)) * 0.5
    u = X.sq()
    dd_num = -(u * (Interval.point(10.0) - u))
    dd_den = (u + 2).sq() * (_ONE - u)
    dd = dd_num / dd_den
    out = d0 + X * d1 + X.sq() * dd * 0.5
    return out.hi


def _phi_chain(u: Interval) -> Interval:
    """phi(u) = ln((0.8u + 2)/(u + 2)) + u/15; decreasing on [0, x0^2]."""
    num = u * iconst(Fraction(4, 5)) + 2
    return ilog(num / (u + 2)) + u * iconst(Fraction(1, 15))


def _alarge_constant_cells() -> list[CoverCell]:
    """The fixed point inequalities (recorded as degenerate cells)."""
    checks = []
    r1 = _iR(idecimal("2.7694"), idecimal(_X0))
    checks.append(CoverCell("R(2.7694,x0)<0.5", 2.7694, 2.7694, r1.hi, 0.5))
    r2 = _iR(idecimal("3.5"), idecimal(_X0))
    checks.append(CoverCell("R(3.5,x0)<0.4", 3.5, 3.5, r2.hi, 0.4))
    r3 = _iR(idecimal("2.149"), idecimal("0.2"))
    checks.append(CoverCell("R(2.149,0.2)<=0.495", 2.149, 2.149, r3.hi, 0.495, strict=False))
    p = psi_int(idecimal("2.7694"))
    checks.append(CoverCell("psi(2.7694)<=3.3992", 2.7694, 2.7694, p.hi, 3.3992, strict=False))
    checks.append(CoverCell("psi(2.7694)>3.39", 2.7694, 2.7694, -p.lo, -3.39))
    # lambda(4) >= 3.5 via psi(3.5) <= 4 (psi increasing)
    p35 = psi_int(Interval.point(3.5))
    checks.append(CoverCell("psi(3.5)<=4", 3.5, 3.5, p35.hi, 4.0, strict=False))
    # phi decreasing on [0, x0^2]: (u+2)(0.8u+2) < 6 there
    u_range = Interval(0.0, idecimal(_X0).sq().hi)
    mono = (u_range + 2) * (u_range * iconst(Fraction(4, 5)) + 2)
    checks.append(CoverCell("phi-decreasing", 0.0, u_range.hi, mono.hi, 6.0))
    return checks


def certify_alarge_constants() -> Certificate:
    """Constant inequalities plus the entropy bound on [0, 1] and the chained
    rate bound H_4(alpha, (alpha, 1-alpha); 1) <= -x^2/15 + 1e-12 on a 0.002
    grid of x = 1 - 2 alpha in [0, 0.4514]."""
    cells = _alarge_constant_cells()
    # entropy bound: Taylor cell at the x = 0 equality point, marching beyond
    taylor_hi = 0.1
    tb = _entropy_gap_taylor_cell(taylor_hi)
    cells.append(CoverCell("entropy-bound", 0.0, taylor_hi, tb, _CHAIN_SLACK, strict=False))
    march_cells, ok, stopped = _march(
        "entropy-bound", taylor_hi, 1.0, lambda X: _entropy_gap_direct(X).hi, 0.0, w0=0.01
    )
    cells.extend(march_cells)
    details: dict = {
        "x0": _X0,
        "entropy_bound_range": [0.0, 1.0],
        "chain_range": [0.0, float(Fraction(_X0))],
        "depends_on": ["monotone"],
        "notes": "chain: H_4 <= [entropy bound] + ln(1/2 + 0.2 x^2) = phi(x^2) - x^2/15 "
        "using R(lambda(4), x) <= R(3.5, x0) < 0.4 (psi(3.5) <= 4 puts lambda(4) >= 3.5; "
        "R monotonicities are the 'monotone' certificate)",
    }
    if not ok:
        details["cover_gap"] = True
        details["failed_at"] = stopped
    d_slack = Interval(0.0, max(tb, 0.0))
    # chained rate bound cells: phi(a^2) + entropy slack <= 1e-12, phi decreasing
    x0 = float(Fraction(_X0))
    grid = [round(0.002 * i, 6) for i in range(int(x0 / 0.002) + 1)]
    if grid[-1] < x0:
        grid.append(x0)
    for a, b in zip(grid, grid[1:]):
        val = (_phi_chain(Interval.point(a).sq()) + d_slack).hi
        cells.append(CoverCell("rate-chain", a, b, val, _CHAIN_SLACK, strict=False))
    cert = Certificate("alarge", 4, None, cells, math.nan, False, details)
    ent_cells = [c for c in cells if c.tag == "entropy-bound"]
    chain_cells = [c for c in cells if c.tag == "rate-chain"]
    if not check_cover(ent_cells, 0.0, 1.0) or not check_cover(chain_cells, 0.0, x0):
        cert.details["cover_gap"] = True
    return _finish(cert)


# ---------------------------------------------------------------------------
# Claim: monotonicity sign certificates


_SIGN_CLAIMS = {
    "psi-prime-numerator": (cosh_gap, 20.0, 1.0),
    "rate-numerator": (rate_numerator, 20.0, 1.0),
    "cosh-vs-gauss": (gauss_cosh_gap, 10.0, 0.75),
}


def certify_monotonicity() -> Certificate:
    """Nonnegativity of e^x + e^{-x} - 2 - x^2 and (s-2)e^s + s + 2 on [0, 20]
    and of e^{x^2/2} - cosh x on [0, 10].

    All three vanish at 0; the endpoint cell is evaluated by its
    positive-coefficient series (lower bound exact at 0) against the
    documented 1e-15 slack, the rest by direct interval marching.
    """
    cells: list[CoverCell] = []
    details: dict = {"ranges": {}}
    for tag, (fn, upper, series_hi) in _SIGN_CLAIMS.items():
        head = fn(Interval(0.0, series_hi))
        cells.append(CoverCell(tag, 0.0, series_hi, -head.lo, _ENDPOINT_SLACK, strict=False))
        march_cells, ok, stopped = _march(
            tag, series_hi, upper, lambda X, fn=fn: -fn(X).lo, 0.0, strict=False, w0=0.25
        )
        cells.extend(march_cells)
        details["ranges"][tag] = [0.0, upper]
        if not ok:
            details["cover_gap"] = True
            details.setdefault("failed_at", {})[tag] = stopped
        elif not check_cover([c for c in cells if c.tag == tag], 0.0, upper):
            details["cover_gap"] = True
    cert = Certificate("monotone", None, None, cells, math.nan, False, details)
    return _finish(cert)


# ---------------------------------------------------------------------------
# Replay and dispatch


def _replay_cell(cert: Certificate, cell: CoverCell) -> float:
    if cert.claim_id == "amed":
        return interval_s_k(cert.k, Interval(cell.lo, cell.hi)).hi
    if cert.claim_id == "k3grid":
        return hk_cell_bound(
            cert.k,
            (cell.lo, cell.hi),
            cell.zeta,
            cert.c_range,
            cert.details.get("c_div", 2),
            cert.details.get("a_div", 2),
        )
    if cert.claim_id == "monotone":
        fn = _SIGN_CLAIMS[cell.tag][0]
        return -fn(Interval(cell.lo, cell.hi)).lo
    if cert.claim_id == "alarge":
        if cell.tag == "entropy-bound":
            if cell.lo == 0.0:
                return _entropy_gap_taylor_cell(cell.hi)
            return _entropy_gap_direct(Interval(cell.lo, cell.hi)).hi
        if cell.tag == "rate-chain":
            slack = max((c.bound for c in cert.cells if c.tag == "entropy-bound" and c.lo == 0.0), default=0.0)
            return (_phi_chain(Interval.point(cell.lo).sq()) + Interval(0.0, max(slack, 0.0))).hi
        fixed = {c.tag: c for c in _alarge_constant_cells()}
        return fixed[cell.tag].bound
    raise ValueError(f"unknown claim {cert.claim_id!r}")


def replay_certificate(cert: Certificate) -> bool:
    """Re-verify a stored certificate without re-searching.

    Recomputes each cell's bound (using the stored zeta table where
    applicable) and re-checks targets and cover completeness.
    """
    for cell in cert.cells:
        fresh = _replay_cell(cert, cell)
        ok = fresh < cell.target if cell.strict else fresh <= cell.target
        if not ok:
            return False
    if cert.claim_id == "amed":
        lo, hi = cert.details["alpha_range"]
        return check_cover(cert.cells, lo, hi)
    if cert.claim_id == "k3grid":
        lo, hi = cert.details["alpha_range"]
        return check_cover(cert.cells, lo, hi)
    if cert.claim_id == "monotone":
        return all(
            check_cover([c for c in cert.cells if c.tag == tag], lo, hi)
            for tag, (lo, hi) in cert.details["ranges"].items()
        )
    if cert.claim_id == "alarge":
        ent = [c for c in cert.cells if c.tag == "entropy-bound"]
        chain = [c for c in cert.cells if c.tag == "rate-chain"]
        return check_cover(ent, 0.0, 1.0) and check_cover(chain, 0.0, float(Fraction(_X0)))
    return False


def certify_claim(claim: str, k: int | None = None, target: float | None = None,
                  c_range: tuple[float, float] | None = None) -> Certificate:
    """CLI dispatch: claim in {amed, k3grid, alarge, monotone}."""
    if claim == "amed":
        return certify_amed(k if k is not None else 4, target)
    if claim == "k3grid":
        return certify_k3_grid(c_range or (0.999, 1.001), target if target is not None else -0.002)
    if claim == "alarge":
        return certify_alarge_constants()
    if claim == "monotone":
        return certify_monotonicity()
    raise ValueError(f"unknown claim {claim!r}; expected amed, k3grid, alarge or monotone")


__all__ = [
    "Certificate",
    "CoverCell",
    "certify_alarge_constants",
    "certify_amed",
    "certify_claim",
    "certify_k3_grid",
    "certify_monotonicity",
    "check_cover",
    "hk_cell_bound",
    "interval_s_k",
    "replay_certificate",
]
