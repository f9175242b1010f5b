"""Stoquasticity checks and off-diagonal bookkeeping.

A matrix is stoquastic when every off-diagonal entry is real and
non-positive (up to a tolerance; the tolerance is 0 on the exact-rational
path and a small float on the rotation path).  A grouped Hamiltonian is
stoquastic when every group passes the check on its own support.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coeff import Coeff
from .errors import NotSquare
from .pauli import Hamiltonian, to_dense

FLOAT_TOL = 1e-9

MODE_WHOLE = "whole_matrix"
MODE_GROUPED = "per_term_grouped"


@dataclass(frozen=True)
class Witness:
    row: int
    col: int
    value: Coeff
    group: int | None = None


@dataclass(frozen=True)
class StoqReport:
    stoquastic: bool
    witness: Witness | None
    mode: str

    @property
    def verdict(self) -> str:
        return "stoquastic" if self.stoquastic else "non_stoquastic"

    def to_json(self) -> dict:
        doc: dict = {"verdict": self.verdict, "witness": None, "mode": self.mode}
        if self.witness is not None:
            w = {
                "row": self.witness.row,
                "col": self.witness.col,
                "re": _scalar_str(self.witness.value.re),
                "im": _scalar_str(self.witness.value.im),
            }
            if self.witness.group is not None:
                w["group"] = self.witness.group
            doc["witness"] = w
        return doc


def _scalar_str(x) -> str:
    return str(x) if isinstance(x, Fraction) else repr(x)


def _entry_coeff(entry) -> Coeff:
    if isinstance(entry, Coeff):
        return entry
    entry = complex(entry)
    return Coeff(entry.real, entry.imag)


def _check_square(m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {np.asarray(m).shape}")
    return m.shape[0]


def is_stoquastic_dense(m, tol=0) -> StoqReport:
    """Check all off-diagonal entries for Re <= tol and |Im| <= tol.

    The witness is the first violating entry in row-major order.
    """
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    m = np.asarray(m)
    dim = _check_square(m)
    if m.dtype == object:
        for i in range(dim):
            row = m[i]
            for j in range(dim):
                if i == j:
                    continue
                e = row[j]
                if e.re > tol or e.im > tol or -e.im > tol:
                    return StoqReport(False, Witness(i, j, e), MODE_WHOLE)
        return StoqReport(True, None, MODE_WHOLE)
    mc = m.astype(complex, copy=False)
    bad = (mc.real > tol) | (np.abs(mc.imag) > tol)
    np.fill_diagonal(bad, False)
    if not bad.any():
        return StoqReport(True, None, MODE_WHOLE)
    i, j = np.argwhere(bad)[0]
    return StoqReport(False, Witness(int(i), int(j), _entry_coeff(mc[i, j])), MODE_WHOLE)


def is_stoquastic_grouped(h: Hamiltonian, tol=0, max_qubits: int | None = None) -> StoqReport:
    """Definition-style check: every group stoquastic on its own support.

    Groups default to one term each when the Hamiltonian carries none.
    The witness carries the index of the first failing group.
    """
    for gi, part in enumerate(h.group_parts()):
        sites = part.support()
        sub = part.restrict(sites) if sites else part.restrict(())
        rep = is_stoquastic_dense(to_dense(sub, max_qubits=max_qubits), tol=tol)
        if not rep.stoquastic:
            w = rep.witness
            return StoqReport(
                False, Witness(w.row, w.col, w.value, group=gi), MODE_GROUPED
            )
    return StoqReport(True, None, MODE_GROUPED)


def off_diagonal_multiset(m) -> Counter:
    """Multiset {m[i][j] : i != j}; exact entries hash by value."""
    m = np.asarray(m)
    dim = _check_square(m)
    out: Counter = Counter()
    for i in range(dim):
        for j in range(dim):
            if i != j:
                out[m[i, j]] += 1
    return out


def diagonal_multiset(m) -> Counter:
    m = np.asarray(m)
    dim = _check_square(m)
    return Counter(m[i, i] for i in range(dim))


def conjugate_by_x_mask(m, mask: int) -> np.ndarray:
    """U_X m U_X for U_X the tensor product of X at the bits set in mask.

    Pure index relabelling: entry (i, j) moves to (i^mask, j^mask).
    """
    m = np.asarray(m)
    dim = _check_square(m)
    perm = np.arange(dim) ^ mask
    return m[np.ix_(perm, perm)]


def partial_trace(m, qubit: int, n: int) -> np.ndarray:
    """Trace out one qubit (site `qubit` of `n`, leftmost = 0)."""
    m = np.asarray(m)
    dim = _check_square(m)
    if dim != 1 << n:
        raise NotSquare(f"dimension {dim} does not match n={n}")
    bit = n - 1 - qubit
    high = ~((1 << bit) - 1)
    low = (1 << bit) - 1

    def embed(idx: int, b: int) -> int:
        return ((idx & high) << 1) | (b << bit) | (idx & low)

    half = dim // 2
    if m.dtype == object:
        out = np.empty((half, half), dtype=object)
    else:
        out = np.zeros((half, half), dtype=m.dtype)
    for i in range(half):
        for j in range(half):
            out[i, j] = m[embed(i, 0), embed(j, 0)] + m[embed(i, 1), embed(j, 1)]
    return out
