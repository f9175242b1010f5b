"""3SAT instances and their encodings as curable local Hamiltonians.

A clause on variables (i, j, k) with polarity bits (a, b, c) is False
exactly at assignment (x_i, x_j, x_k) = (a, b, c).  Its clause Hamiltonian
is the all-Z building block

    Z_i Z_j Z_k - 3 (Z_i + Z_j + Z_k) - (Z_i Z_j + Z_i Z_k + Z_j Z_k)

with Z traded for X on every polarity-0 slot (Hadamard conjugation); the
Hadamard-conjugated block is stoquastic at every assignment except the
falsifying one, giving a bijection between the 8 polarity patterns and the
8 clause types.  An instance Hamiltonian is the sum of its clause blocks
plus a penalty driver that pins the admissible single-qubit gates.

Two encodings are provided: a 3-local one decoded from {I, W} gate
choices, and a 6-local one in which each Z, X and W is promoted to a
two-qubit operator so that the same construction constrains continuous
rotation pairs to four discrete angle points.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInput, NotDecodable, TooLarge
from .pauli import (
    CliffordGate,
    Hamiltonian,
    PauliString,
    canonical_angle,
    collect,
    conjugate_clifford,
    conjugate_rotation,
    to_dense,
    w_gates_from_bits,
)
from .stoq import is_stoquastic_dense, is_stoquastic_grouped

QUARTER = math.pi / 4
ANGLE_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class Clause:
    """Variables are 1-based and strictly increasing after canonicalisation."""

    vars: tuple[int, int, int]
    polarity: tuple[int, int, int]

    @classmethod
    def make(cls, vars: Sequence[int], polarity: Sequence[int]) -> "Clause":
        if len(vars) != 3 or len(set(vars)) != 3:
            raise InvalidInput(f"clause needs 3 distinct variables, got {vars}")
        if any(v < 1 for v in vars) or any(p not in (0, 1) for p in polarity):
            raise InvalidInput(f"bad clause ({vars}, {polarity})")
        order = sorted(range(3), key=lambda k: vars[k])
        return cls(
            tuple(vars[k] for k in order), tuple(polarity[k] for k in order)
        )

    def is_satisfied(self, assignment: Sequence[int]) -> bool:
        triple = tuple(assignment[v - 1] for v in self.vars)
        return triple != self.polarity


@dataclass(frozen=True)
class CnfInstance:
    n_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        seen = set()
        for cl in self.clauses:
            if max(cl.vars) > self.n_vars:
                raise InvalidInput(f"clause {cl} exceeds n_vars={self.n_vars}")
            if cl in seen:
                raise InvalidInput(f"duplicate clause {cl}")
            seen.add(cl)

    @classmethod
    def from_clauses(
        cls, n_vars: int, clauses: Iterable[tuple[Sequence[int], Sequence[int]]]
    ) -> "CnfInstance":
        return cls(n_vars, tuple(Clause.make(v, p) for v, p in clauses))

    def is_satisfied(self, assignment: Sequence[int]) -> bool:
        return all(cl.is_satisfied(assignment) for cl in self.clauses)

    def satisfying_assignments(self) -> Iterator[tuple[int, ...]]:
        for bits in itertools.product((0, 1), repeat=self.n_vars):
            if self.is_satisfied(bits):
                yield bits


# --- DIMACS ---------------------------------------------------------------

def parse_dimacs(text: str) -> tuple[CnfInstance, list[str]]:
    """Parse DIMACS CNF; only 3-literal clauses over distinct variables."""
    comments: list[str] = []
    n_vars = None
    clauses: list[Clause] = []
    literals: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line)
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise InvalidInput(f"bad problem line: {line!r}")
            n_vars = int(fields[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if len(literals) != 3:
                    raise InvalidInput(
                        f"only 3-literal clauses are supported, got {literals}"
                    )
                vars_ = [abs(l) for l in literals]
                # a negated literal is falsified by 1, i.e. polarity bit 1
                pol = [1 if l < 0 else 0 for l in literals]
                clauses.append(Clause.make(vars_, pol))
                literals = []
            else:
                literals.append(lit)
    if literals:
        raise InvalidInput("clause not terminated by 0")
    if n_vars is None:
        raise InvalidInput("missing 'p cnf' line")
    return CnfInstance(n_vars, tuple(clauses)), comments


def to_dimacs(cnf: CnfInstance, comments: Sequence[str] = ()) -> str:
    lines = list(comments)
    lines.append(f"p cnf {cnf.n_vars} {len(cnf.clauses)}")
    for cl in cnf.clauses:
        lits = [(-v if p else v) for v, p in zip(cl.vars, cl.polarity)]
        lines.append(" ".join(map(str, lits)) + " 0")
    return "\n".join(lines) + "\n"


# --- encodings -------------------------------------------------------------

class ReductionVariant(enum.Enum):
    THREE_LOCAL_CLIFFORD = "3local"
    SIX_LOCAL_ORTHOGONAL = "6local"

    @property
    def qubits_per_var(self) -> int:
        return 1 if self is ReductionVariant.THREE_LOCAL_CLIFFORD else 2


THREE_LOCAL = ReductionVariant.THREE_LOCAL_CLIFFORD
SIX_LOCAL = ReductionVariant.SIX_LOCAL_ORTHOGONAL


def default_penalty(n_clauses: int, variant: ReductionVariant) -> Fraction:
    """10*M for the Clifford variant (at least 10), 1 for the orthogonal one."""
    if variant is THREE_LOCAL:
        return Fraction(10 * max(n_clauses, 1))
    return Fraction(1)


def _var_sites(var: int, variant: ReductionVariant) -> tuple[int, ...]:
    if variant is THREE_LOCAL:
        return (var - 1,)
    return (2 * (var - 1), 2 * (var - 1) + 1)


def _slot_letter(polarity_bit: int) -> str:
    # polarity 1 keeps Z; polarity 0 is the Hadamard-conjugated slot
    return "Z" if polarity_bit else "X"


def encode_clause(
    clause: Clause, variant: ReductionVariant, n_vars: int | None = None
) -> Hamiltonian:
    """The 7-term clause Hamiltonian on n_vars * (1 or 2) qubits."""
    if n_vars is None:
        n_vars = max(clause.vars)
    n = n_vars * variant.qubits_per_var
    terms = []
    slots = list(zip(clause.vars, clause.polarity))
    for size, coeff in ((3, 1), (1, -3), (2, -1)):
        for combo in itertools.combinations(range(3), size):
            sites: dict[int, str] = {}
            for k in combo:
                var, pol = slots[k]
                for q in _var_sites(var, variant):
                    sites[q] = _slot_letter(pol)
            terms.append((coeff, PauliString.from_sites(n, sites)))
    return collect(terms, n=n)


def driver_part(var: int, variant: ReductionVariant, c: Fraction, n_vars: int) -> Hamiltonian:
    """The manifestly stoquastic penalty attached to one variable."""
    n = n_vars * variant.qubits_per_var
    sites = _var_sites(var, variant)
    if variant is THREE_LOCAL:
        terms = [
            (-c, PauliString.from_sites(n, {sites[0]: "X"})),
            (-c, PauliString.from_sites(n, {sites[0]: "Z"})),
        ]
    else:
        terms = [
            (-2 * c, PauliString.from_sites(n, {q: "Z" for q in sites})),
            (-c, PauliString.from_sites(n, {q: "X" for q in sites})),
        ]
    return collect(terms, n=n)


def encode_instance(
    cnf: CnfInstance, variant: ReductionVariant, c: Fraction | None = None
) -> Hamiltonian:
    """Sum of clause Hamiltonians plus the penalty driver, grouped as one
    group per clause and one per driver site."""
    if c is None:
        c = default_penalty(len(cnf.clauses), variant)
    parts = [encode_clause(cl, variant, cnf.n_vars) for cl in cnf.clauses]
    parts += [driver_part(v, variant, c, cnf.n_vars) for v in range(1, cnf.n_vars + 1)]
    return Hamiltonian.from_groups(parts)


# --- gate assignments per variable -----------------------------------------

def variable_gates(bits: Sequence[int], variant: ReductionVariant):
    """The curing assignment associated with variable bits x.

    Clifford variant: W on every 1-bit.  Orthogonal variant: both qubits
    of every 1-bit pair rotated by pi/4 (the XW rotation).
    """
    if variant is THREE_LOCAL:
        return w_gates_from_bits(bits)
    thetas: list[float] = []
    for b in bits:
        thetas.extend((QUARTER, QUARTER) if b else (0.0, 0.0))
    return tuple(thetas)


def conjugate_by_bits(
    h: Hamiltonian, bits: Sequence[int], variant: ReductionVariant
) -> Hamiltonian:
    gates = variable_gates(bits, variant)
    if variant is THREE_LOCAL:
        return conjugate_clifford(h, gates)
    return conjugate_rotation(h, gates)


def clause_truth_table(
    clause: Clause, variant: ReductionVariant
) -> dict[tuple[int, int, int], bool]:
    """Map each local assignment to the stoquasticity of the conjugated
    clause Hamiltonian (True = stoquastic = clause satisfied)."""
    local = Clause.make((1, 2, 3), clause.polarity)
    h = encode_clause(local, variant, n_vars=3)
    table = {}
    for bits in itertools.product((0, 1), repeat=3):
        conj = conjugate_by_bits(h, bits, variant)
        rep = is_stoquastic_dense(to_dense(conj), tol=0)
        table[bits] = rep.stoquastic
    return table


def clause_logic_table(clause: Clause) -> dict[tuple[int, int, int], bool]:
    """The clause's logical truth table over its own three variables."""
    return {
        bits: bits != clause.polarity for bits in itertools.product((0, 1), repeat=3)
    }


def decode_assignment(assignment, variant: ReductionVariant) -> tuple[int, ...]:
    """Map a curing gate assignment back to variable bits.

    Clifford variant: gates must be I or W up to a left X factor.
    Orthogonal variant: each qubit pair must sit at one of the four
    admissible angle points; equal 0 / pi/2 pairs decode to 0 and equal
    +-pi/4 pairs decode to 1.
    """
    if variant is THREE_LOCAL:
        from .search import canonicalize_mod_x

        bits = []
        for g in assignment:
            rep = canonicalize_mod_x(g)
            if rep.label == "I":
                bits.append(0)
            elif rep.label == "W":
                bits.append(1)
            else:
                raise NotDecodable(f"gate {g.label} is not in the {{I, W}} classes")
        return tuple(bits)
    thetas = [canonical_angle(t) for t in assignment]
    if len(thetas) % 2:
        raise NotDecodable("odd qubit count for a paired-rotation assignment")
    bits = []
    for a, b in zip(thetas[0::2], thetas[1::2]):
        pair = (a, b)
        if _pair_close(pair, (0.0, 0.0)) or _pair_close(pair, (math.pi / 2, math.pi / 2)):
            bits.append(0)
        elif _pair_close(pair, (QUARTER, QUARTER)) or _pair_close(pair, (-QUARTER, -QUARTER)):
            bits.append(1)
        else:
            raise NotDecodable(f"angle pair {pair} is not one of the four lemma points")
    return tuple(bits)


def _pair_close(pair, target) -> bool:
    return all(abs(a - t) <= ANGLE_MATCH_TOL for a, t in zip(pair, target))


# --- verification -----------------------------------------------------------

MAX_VERIFY_VARS = {THREE_LOCAL: 12, SIX_LOCAL: 6}


@dataclass(frozen=True)
class ReductionReport:
    equal: bool
    curing_set: tuple[tuple[int, ...], ...]
    sat_set: tuple[tuple[int, ...], ...]
    complementary_pairs: int

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "curing_set_size": len(self.curing_set),
            "sat_set_size": len(self.sat_set),
            "complementary_pairs": self.complementary_pairs,
        }


def complementary_pairs(cnf: CnfInstance) -> int:
    """Clause pairs on one variable triple with polarities opposite in all
    three slots (flagged: the non-cancellation argument singles them out)."""
    count = 0
    for a, b in itertools.combinations(cnf.clauses, 2):
        if a.vars == b.vars and all(pa != pb for pa, pb in zip(a.polarity, b.polarity)):
            count += 1
    return count


def verify_reduction(
    cnf: CnfInstance,
    variant: ReductionVariant,
    c: Fraction | None = None,
    max_vars: int | None = None,
) -> ReductionReport:
    """Exhaustively compare {x : conjugated instance stoquastic} with
    {x : instance satisfied}; the two sides are computed independently."""
    cap = MAX_VERIFY_VARS[variant] if max_vars is None else max_vars
    if cnf.n_vars > cap:
        raise TooLarge(f"{cnf.n_vars} variables exceed the enumeration cap {cap}")
    h = encode_instance(cnf, variant, c=c)
    curing = []
    for bits in itertools.product((0, 1), repeat=cnf.n_vars):
        conj = conjugate_by_bits(h, bits, variant)
        if is_stoquastic_grouped(conj, tol=0).stoquastic:
            curing.append(bits)
    sat = list(cnf.satisfying_assignments())
    return ReductionReport(
        equal=curing == sat,
        curing_set=tuple(curing),
        sat_set=tuple(sat),
        complementary_pairs=complementary_pairs(cnf),
    )
