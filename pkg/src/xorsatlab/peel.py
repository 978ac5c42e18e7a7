"""2-core peeling and solution lift-back.

Repeatedly delete any variable of degree <= 1 together with its equation
(if it has one); what survives is the 2-core of the constraint hypergraph:
the unique maximal sub-system in which every variable appears in at least
two equations.  The result is independent of removal order; we use a FIFO
queue with ties broken by variable index so traces are reproducible.

A solution of the core extends to a solution of the full system by
replaying the trace backwards: each peeled variable had sole responsibility
for its equation at removal time, so it can always be set to satisfy it
(degree-0 removals get value 0).  Hence the original system is solvable iff
its core is.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from xorsatlab.instances import MODEL_CONSTRAINED, MODEL_RELAXED, Instance


@dataclass
class PeelStep:
    """One removal: the variable, its equation (None when degree was 0),
    and that equation's variable list at removal time."""

    var: int
    eq: int | None
    eq_vars: list[int] | None


@dataclass
class PeelTrace:
    """Ordered removals plus the surviving (core) variable ids.

    core_var_ids is sorted; the core instance indexes variables by their
    position in this list.
    """

    n: int
    m: int
    steps: list[PeelStep]
    core_var_ids: list[int]
    core_eq_ids: list[int]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "steps": [[s.var, s.eq, s.eq_vars] for s in self.steps],
            "core_var_ids": self.core_var_ids,
            "core_eq_ids": self.core_eq_ids,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "PeelTrace":
        steps = [PeelStep(v, e, vs) for v, e, vs in d["steps"]]
        return cls(d["n"], d["m"], steps, list(d["core_var_ids"]), list(d["core_eq_ids"]))


@dataclass
class CoreStats:
    """Core order/size; ratio is eqs/vars, None for an empty core."""

    core_vars: int
    core_eqs: int
    ratio: float | None

    def csv_fields(self) -> list:
        return [self.core_vars, self.core_eqs, "" if self.ratio is None else repr(self.ratio)]


def two_core(inst: Instance, order: str = "fifo") -> tuple[Instance, PeelTrace, CoreStats]:
    """Peel to the 2-core; returns (core instance, trace, stats).

    The core keeps the original equation order with variables renumbered by
    rank in core_var_ids.  `order` picks the queue discipline ("fifo" or
    "lifo"); the resulting core is the same either way.
    """
    if inst.model_tag == MODEL_RELAXED:
        raise ValueError("peeling needs distinct indices per row; relaxed_C not supported")
    if order not in ("fifo", "lifo"):
        raise ValueError("order must be 'fifo' or 'lifo'")
    incident: list[list[int]] = [[] for _ in range(inst.n)]
    for e, row in enumerate(inst.rows):
        for v in row:
            incident[v].append(e)
    degree = [len(lst) for lst in incident]
    eq_alive = [True] * inst.m
    var_alive = [True] * inst.n
    queue = deque(v for v in range(inst.n) if degree[v] <= 1)
    steps: list[PeelStep] = []
    while queue:
        v = queue.popleft() if order == "fifo" else queue.pop()
        if not var_alive[v] or degree[v] > 1:
            continue
        var_alive[v] = False
        eq = next((e for e in incident[v] if eq_alive[e]), None)
        if eq is None:
            steps.append(PeelStep(v, None, None))
            continue
        eq_alive[eq] = False
        steps.append(PeelStep(v, eq, list(inst.rows[eq])))
        for u in inst.rows[eq]:
            if u != v and var_alive[u]:
                degree[u] -= 1
                if degree[u] <= 1:
                    queue.append(u)
    core_var_ids = [v for v in range(inst.n) if var_alive[v]]
    core_eq_ids = [e for e in range(inst.m) if eq_alive[e]]
    remap = {v: i for i, v in enumerate(core_var_ids)}
    core_rows = [[remap[v] for v in inst.rows[e]] for e in core_eq_ids]
    core = Instance(
        k=inst.k,
        n=len(core_var_ids),
        m=len(core_eq_ids),
        rows=core_rows,
        rhs=[inst.rhs[e] for e in core_eq_ids],
        model_tag=MODEL_CONSTRAINED,
        seed=inst.seed,
    )
    if core.n:
        core_deg = [0] * core.n
        for row in core.rows:
            for v in row:
                core_deg[v] += 1
        if min(core_deg) < 2:
            raise AssertionError("peeling left a variable of degree < 2 in the core")
    trace = PeelTrace(inst.n, inst.m, steps, core_var_ids, core_eq_ids)
    stats = CoreStats(
        core.n,
        core.m,
        (core.m / core.n) if core.n else None,
    )
    return core, trace, stats


def extend_solution(core_solution, trace: PeelTrace, inst: Instance) -> list[int]:
    """Lift a core solution back to a full assignment satisfying `inst`.

    Raises ValueError if `core_solution` does not satisfy the core
    equations.  Peeled variables of degree 0 get value 0; the rest are set
    in reverse removal order so each satisfies its own equation.
    """
    core_solution = [int(b) for b in core_solution]
    if len(core_solution) != len(trace.core_var_ids):
        raise ValueError("core solution length does not match the core variable count")
    x = [0] * inst.n
    for cid, v in zip(core_solution, trace.core_var_ids):
        x[v] = cid
    for e in trace.core_eq_ids:
        acc = 0
        for v in inst.rows[e]:
            acc ^= x[v]
        if acc != inst.rhs[e]:
            raise ValueError(f"core solution violates core equation {e}")
    for step in reversed(trace.steps):
        if step.eq is None:
            x[step.var] = 0
            continue
        acc = inst.rhs[step.eq]
        for u in step.eq_vars:
            if u != step.var:
                acc ^= x[u]
        x[step.var] = acc
    return x


def core_density(inst: Instance) -> CoreStats:
    """Peel and report core order/size only."""
    return two_core(inst)[2]


__all__ = ["CoreStats", "PeelStep", "PeelTrace", "core_density", "extend_solution", "two_core"]
