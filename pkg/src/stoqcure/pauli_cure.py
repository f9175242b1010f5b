"""Polynomial-time curing via tensor products of Pauli operators.

Conjugating by X factors only shuffles matrix entries, so curing with a
Pauli product reduces to choosing Z or I per qubit.  Within each local
term, the terms sharing an X component are folded into a single
``X_pattern * f(Z)`` block whose off-diagonal entries are the diagonal
values of f; the sign of those values fixes one parity constraint on the
chosen Z string.  All constraints together form a GF(2) linear system.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence

from .coeff import Coeff
from .errors import StoqcureError
from .pauli import (
    Hamiltonian,
    PauliString,
    collect,
    conjugate_clifford,
    diagonal_values,
    z_gates_from_bits,
)
from .stoq import is_stoquastic_grouped


@dataclass(frozen=True)
class XComponentGroup:
    """Terms of one local term sharing the same X component."""

    x_pattern: PauliString
    z_part: Hamiltonian
    support: tuple[int, ...]


class SignClass(enum.Enum):
    ALWAYS_NONNEG = "always_nonneg"
    ALWAYS_NONPOS = "always_nonpos"
    MIXED = "mixed"


def extract_x_groups(h_a: Hamiltonian) -> list[XComponentGroup]:
    """Fold the terms of one local term by shared X component.

    Each Y letter contributes an X to the pattern, a Z to the combined
    part and a factor i to the coefficient.  The all-identity pattern
    (purely diagonal terms) is omitted.
    """
    buckets: dict[PauliString, list[tuple[Coeff, PauliString]]] = {}
    for c, s in h_a.terms:
        x_letters = []
        z_letters = []
        n_y = 0
        for ch in s:
            x_letters.append("X" if ch in "XY" else "I")
            z_letters.append("Z" if ch in "ZY" else "I")
            if ch == "Y":
                n_y += 1
        pattern = PauliString("".join(x_letters))
        if pattern.weight == 0:
            continue
        buckets.setdefault(pattern, []).append(
            (c.times_i_power(n_y), PauliString("".join(z_letters)))
        )
    out = []
    for pattern in sorted(buckets):
        z_part = collect(buckets[pattern], n=h_a.n)
        out.append(XComponentGroup(pattern, z_part, pattern.support()))
    return out


def _classify(values: Sequence[Coeff]) -> SignClass:
    if any(v.im != 0 for v in values):
        return SignClass.MIXED
    has_pos = any(v.re > 0 for v in values)
    has_neg = any(v.re < 0 for v in values)
    if has_pos and has_neg:
        return SignClass.MIXED
    if has_pos:
        return SignClass.ALWAYS_NONNEG
    return SignClass.ALWAYS_NONPOS


def sign_constraint(group: XComponentGroup) -> SignClass:
    """Classify the signs of the combined Z part's diagonal entries.

    Zeros are compatible with either class; an all-zero part classifies
    as ALWAYS_NONPOS but imposes no constraint and is dropped by
    `cure_with_pauli`.  Complex entries can never be non-positive, so any
    imaginary component classifies as MIXED.
    """
    z_sites = group.z_part.support()
    part = group.z_part.restrict(z_sites)
    return _classify(diagonal_values(part))


@dataclass(frozen=True)
class Gf2System:
    """Parity equations sum(x_i for i in subset) = parity (mod 2)."""

    n_vars: int
    equations: tuple[tuple[tuple[int, ...], int], ...]

    def solve(self) -> "Gf2Solution | None":
        rows = [
            (sum(1 << i for i in subset), parity) for subset, parity in self.equations
        ]
        pivots: list[tuple[int, int]] = []  # (column, row index)
        reduced: list[tuple[int, int]] = []
        for mask, rhs in rows:
            for col, ri in pivots:
                if mask >> col & 1:
                    pmask, prhs = reduced[ri]
                    mask ^= pmask
                    rhs ^= prhs
            if mask == 0:
                if rhs:
                    return None
                continue
            # pivot on the smallest variable index for a deterministic answer
            col = min(i for i in range(self.n_vars) if mask >> i & 1)
            for k, (pmask, prhs) in enumerate(reduced):
                if pmask >> col & 1:
                    reduced[k] = (pmask ^ mask, prhs ^ rhs)
            pivots.append((col, len(reduced)))
            reduced.append((mask, rhs))
        pivot_cols = {col for col, _ in pivots}
        free = tuple(i for i in range(self.n_vars) if i not in pivot_cols)
        particular = 0
        for col, ri in pivots:
            mask, rhs = reduced[ri]
            if rhs:
                particular |= 1 << col
        basis = []
        for f in free:
            vec = 1 << f
            for col, ri in pivots:
                mask, _ = reduced[ri]
                if mask >> f & 1:
                    vec |= 1 << col
            basis.append(vec)
        return Gf2Solution(self.n_vars, particular, tuple(free), tuple(basis))


@dataclass(frozen=True)
class Gf2Solution:
    n_vars: int
    particular: int
    free_vars: tuple[int, ...]
    basis: tuple[int, ...]

    def bits(self, mask: int | None = None) -> tuple[int, ...]:
        m = self.particular if mask is None else mask
        return tuple(m >> i & 1 for i in range(self.n_vars))

    def iter_solutions(self) -> Iterator[tuple[int, ...]]:
        for pick in range(1 << len(self.basis)):
            m = self.particular
            for k in range(len(self.basis)):
                if pick >> k & 1:
                    m ^= self.basis[k]
            yield self.bits(m)


@dataclass(frozen=True)
class PauliCureResult:
    status: str  # "cured" | "infeasible"
    x: tuple[int, ...] | None
    reason: str | None
    system: Gf2System | None = None

    @property
    def cured(self) -> bool:
        return self.status == "cured"

    def x_string(self) -> str | None:
        return None if self.x is None else "".join(map(str, self.x))

    def to_json(self) -> dict:
        return {"status": self.status, "x": self.x_string(), "reason": self.reason}


def _build_system(h: Hamiltonian) -> tuple[Gf2System | None, str | None]:
    if h.groups is None:
        raise ValueError("cure_with_pauli needs the local decomposition (groups)")
    equations: list[tuple[tuple[int, ...], int]] = []
    for gi, part in enumerate(h.group_parts()):
        for xg in extract_x_groups(part):
            z_sites = xg.z_part.support()
            values = diagonal_values(xg.z_part.restrict(z_sites))
            if all(v.is_zero() for v in values):
                continue
            cls = _classify(values)
            if cls is SignClass.MIXED:
                reason = (
                    f"group {gi}: X component {xg.x_pattern} has a mixed-sign "
                    "or complex combined Z part"
                )
                return None, reason
            parity = 1 if cls is SignClass.ALWAYS_NONNEG else 0
            equations.append((xg.support, parity))
    return Gf2System(h.n, tuple(equations)), None


def cure_with_pauli(h: Hamiltonian) -> PauliCureResult:
    """Find x with Z^x conjugation making every group stoquastic.

    Free variables are set to 0 (pivots are the smallest variable in each
    reduced equation), which reproduces a deterministic representative;
    `enumerate_pauli_cures` yields the full affine solution set.
    """
    system, reason = _build_system(h)
    if reason is not None:
        return PauliCureResult("infeasible", None, reason, system)
    sol = system.solve()
    if sol is None:
        return PauliCureResult(
            "infeasible", None, "parity constraints are inconsistent", system
        )
    bits = sol.bits()
    check = is_stoquastic_grouped(conjugate_clifford(h, z_gates_from_bits(bits)))
    if not check.stoquastic:  # pragma: no cover - internal consistency guard
        raise StoqcureError("curing solution failed verification")
    return PauliCureResult("cured", bits, None, system)


def enumerate_pauli_cures(h: Hamiltonian) -> Iterator[tuple[int, ...]]:
    """All Z strings curing every group (empty if infeasible).

    Exponential in the number of free variables; intended for desk-scale
    verification against brute force.
    """
    system, reason = _build_system(h)
    if reason is not None:
        return
    sol = system.solve()
    if sol is None:
        return
    yield from sol.iter_solutions()
