"""Exhaustive curing search over single-qubit Clifford assignments.

Conjugation by X factors only relocates matrix entries, so gates differing
by a left X factor have identical curing power; `canonicalize_mod_x` picks
a fixed representative of each {g, Xg} class.  The search enumerates
assignments in lexicographic order with prefix pruning: a partial
assignment dies as soon as some fully-assigned group fails, and group
verdicts are memoised on the gates restricted to the group's support.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded
from .pauli import (
    CLIFFORD_GATES,
    CliffordGate,
    Hamiltonian,
    I_GATE,
    W_GATE,
    X_GATE,
    XW_GATE,
    collect,
    conjugate_clifford,
    to_dense,
)
from .stoq import is_stoquastic_dense

DEFAULT_BUDGET = 1 << 24


@dataclass(frozen=True)
class GateSet:
    name: str
    gates: tuple[CliffordGate, ...]


GATESET_IW = GateSet("IW", (I_GATE, W_GATE))
GATESET_CPRIME1 = GateSet("CPrime1", (I_GATE, X_GATE, W_GATE, XW_GATE))
GATESET_FULL = GateSet("FullC1", CLIFFORD_GATES)

GATESETS = {gs.name: gs for gs in (GATESET_IW, GATESET_CPRIME1, GATESET_FULL)}


def canonicalize_mod_x(g: CliffordGate) -> CliffordGate:
    """Representative of {g, X*g} under the fixed enumeration order."""
    g = g.canonical()
    xg = X_GATE.compose(g).canonical()
    return g if g.index <= xg.index else xg


class _GroupChecker:
    """Memoised per-group stoquasticity of support-restricted conjugations."""

    def __init__(self, h: Hamiltonian, budget: int):
        self.parts = []
        for part in h.group_parts():
            sites = part.support()
            self.parts.append((sites, part.restrict(sites)))
        self.budget = budget
        self.checks = 0
        self._cache: dict[tuple[int, tuple[str, ...]], bool] = {}

    def group_supports(self) -> list[tuple[int, ...]]:
        return [sites for sites, _ in self.parts]

    def passes(self, gi: int, gates: Sequence[CliffordGate]) -> bool:
        sites, sub = self.parts[gi]
        local = tuple(gates[q] for q in sites)
        key = (gi, tuple(g.label for g in local))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.checks += 1
        if self.checks > self.budget:
            raise BudgetExceeded(f"exceeded {self.budget} group checks")
        conj = conjugate_clifford(sub, local)
        ok = is_stoquastic_dense(to_dense(conj), tol=0).stoquastic
        self._cache[key] = ok
        return ok


def _site_gate_lists(
    n: int, gate_set: GateSet, per_site: Sequence[Sequence[CliffordGate]] | None
):
    if per_site is None:
        return [list(gate_set.gates)] * n
    if len(per_site) != n:
        raise ValueError(f"need {n} per-site gate lists")
    return [list(gs) for gs in per_site]


def brute_force_cure(
    h: Hamiltonian,
    gate_set: GateSet = GATESET_IW,
    mode: str = "all",
    budget: int = DEFAULT_BUDGET,
    per_site: Sequence[Sequence[CliffordGate]] | None = None,
    jobs: int = 1,
) -> list[tuple[CliffordGate, ...]]:
    """All (or the first) assignments making every group stoquastic.

    Assignments are returned in lexicographic order of the per-site gate
    lists; the budget counts actual (uncached) group checks.
    """
    if mode not in ("all", "first"):
        raise ValueError(f"mode must be 'all' or 'first', not {mode!r}")
    site_gates = _site_gate_lists(h.n, gate_set, per_site)
    if jobs > 1 and h.n > 1 and mode == "all":
        args = [
            (h, [[g0]] + site_gates[1:], budget) for g0 in site_gates[0]
        ]
        results: list[tuple[CliffordGate, ...]] = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(_search_worker, args):
                results.extend(chunk)
        return results
    return _search(h, site_gates, mode, budget)


def _search_worker(args):
    h, site_gates, budget = args
    return _search(h, site_gates, "all", budget)


def _search(h, site_gates, mode, budget):
    checker = _GroupChecker(h, budget)
    n = h.n
    # groups become checkable once their highest support site is assigned
    ready: list[list[int]] = [[] for _ in range(n + 1)]
    for gi, sites in enumerate(checker.group_supports()):
        ready[max(sites) + 1 if sites else 0].append(gi)
    results: list[tuple[CliffordGate, ...]] = []
    assignment: list[CliffordGate] = [I_GATE] * n

    def descend(depth: int) -> bool:
        for gi in ready[depth]:
            if not checker.passes(gi, assignment):
                return False
        if depth == n:
            results.append(tuple(assignment))
            return mode == "first"
        for gate in site_gates[depth]:
            assignment[depth] = gate
            if descend(depth + 1):
                return True
        return False

    descend(0)
    return results


def driver_filter(h: Hamiltonian, site: int) -> GateSet:
    """Gates whose conjugation keeps the site's single-site terms stoquastic.

    For the penalty driver -(X + Z) this is exactly {I, X, W, XW}.
    """
    single = [(c, s) for c, s in h.terms if s.support() == (site,)]
    if not single:
        return GateSet(f"site{site}", CLIFFORD_GATES)
    sub = collect([(c, s[site]) for c, s in single], n=1)
    keep = []
    for g in CLIFFORD_GATES:
        conj = conjugate_clifford(sub, (g,))
        if is_stoquastic_dense(to_dense(conj), tol=0).stoquastic:
            keep.append(g)
    return GateSet(f"site{site}", tuple(keep))
