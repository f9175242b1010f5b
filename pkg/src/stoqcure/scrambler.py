"""Secretly stoquastic Hamiltonians: planted instances and key scrambling.

A stoquastic Hamiltonian is presented in scrambled non-stoquastic form by
conjugating with the inverse of a secret per-qubit key; whoever holds the
key undoes the conjugation and recovers the stoquastic form.  Only the
mechanics live here; no security property is claimed (the construction
has known loopholes).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InvalidInput, NotStoquasticInput
from .pauli import (
    CliffordGate,
    GATE_BY_LABEL,
    Hamiltonian,
    I_GATE,
    W_GATE,
    CLIFFORD_GATES,
    canonical_angle,
    conjugate_clifford,
    conjugate_rotation,
)
from .sat import Clause, CnfInstance, to_dimacs
from .stoq import StoqReport, is_stoquastic_grouped

KEY_KIND_CLIFFORD = "clifford"
KEY_KIND_ROTATION = "rotation"


@dataclass(frozen=True)
class SecretKey:
    """Per-qubit curing transformation plus the seed that generated it."""

    kind: str
    gates: tuple
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in (KEY_KIND_CLIFFORD, KEY_KIND_ROTATION):
            raise InvalidInput(f"unknown key kind {self.kind!r}")

    @property
    def n(self) -> int:
        return len(self.gates)

    def to_json(self) -> dict:
        if self.kind == KEY_KIND_CLIFFORD:
            gates = [g.label for g in self.gates]
        else:
            gates = [repr(t) for t in self.gates]
        return {"kind": self.kind, "seed": self.seed, "gates": gates}

    @classmethod
    def from_json(cls, doc: dict) -> "SecretKey":
        kind = doc.get("kind", KEY_KIND_CLIFFORD)
        seed = doc.get("seed")
        raw = doc["gates"]
        if kind == KEY_KIND_CLIFFORD:
            try:
                gates = tuple(GATE_BY_LABEL[label] for label in raw)
            except KeyError as exc:
                raise InvalidInput(f"unknown gate label {exc}") from exc
        else:
            gates = tuple(float(t) for t in raw)
        return cls(kind, gates, seed)


def generate_key(n: int, seed: int, kind: str = "iw") -> SecretKey:
    """Deterministic per-seed key; 'iw' draws from {I, W} per qubit."""
    rng = random.Random(seed)
    if kind == "iw":
        gates = tuple(rng.choice((I_GATE, W_GATE)) for _ in range(n))
        return SecretKey(KEY_KIND_CLIFFORD, gates, seed)
    if kind == KEY_KIND_CLIFFORD:
        gates = tuple(rng.choice(CLIFFORD_GATES) for _ in range(n))
        return SecretKey(KEY_KIND_CLIFFORD, gates, seed)
    if kind == KEY_KIND_ROTATION:
        gates = tuple(
            canonical_angle(rng.uniform(-math.pi / 2, math.pi / 2)) for _ in range(n)
        )
        return SecretKey(KEY_KIND_ROTATION, gates, seed)
    raise InvalidInput(f"unknown key kind {kind!r}")


def _conjugate(h: Hamiltonian, key: SecretKey, invert: bool) -> Hamiltonian:
    if key.n != h.n:
        raise InvalidInput(f"key length {key.n} does not match n={h.n}")
    if key.kind == KEY_KIND_CLIFFORD:
        gates = tuple(g.inverse() for g in key.gates) if invert else key.gates
        return conjugate_clifford(h, gates)
    thetas = tuple(-t for t in key.gates) if invert else key.gates
    return conjugate_rotation(h, thetas)


@dataclass(frozen=True)
class ScrambleResult:
    hamiltonian: Hamiltonian
    still_stoquastic: bool  # warning flag: the scramble failed to hide anything


@dataclass(frozen=True)
class DescrambleResult:
    hamiltonian: Hamiltonian
    report: StoqReport


def scramble(h: Hamiltonian, key: SecretKey, tol=0) -> ScrambleResult:
    """Conjugate a stoquastic Hamiltonian by the key's inverse.

    Descrambling with the same key restores the input; the result is
    flagged when it happens to remain stoquastic.
    """
    if not is_stoquastic_grouped(h, tol=tol).stoquastic:
        raise NotStoquasticInput("scramble requires a stoquastic input")
    out = _conjugate(h, key, invert=True)
    return ScrambleResult(out, is_stoquastic_grouped(out, tol=tol).stoquastic)


def descramble(h: Hamiltonian, key: SecretKey, tol=0) -> DescrambleResult:
    """Apply the key (the curing transformation) and report the verdict."""
    out = _conjugate(h, key, invert=False)
    return DescrambleResult(out, is_stoquastic_grouped(out, tol=tol))


# ---------------------------------------------------------------------------
# Planted 3SAT instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlantedCnf:
    cnf: CnfInstance
    planted: tuple[int, ...]

    def to_dimacs(self) -> str:
        comment = "c planted " + "".join(map(str, self.planted))
        return to_dimacs(self.cnf, comments=[comment])

    @classmethod
    def from_dimacs(cls, text: str) -> "PlantedCnf":
        from .sat import parse_dimacs

        cnf, comments = parse_dimacs(text)
        for line in comments:
            fields = line.split()
            if len(fields) == 3 and fields[1] == "planted":
                bits = tuple(int(ch) for ch in fields[2])
                if len(bits) != cnf.n_vars:
                    raise InvalidInput("planted string length mismatch")
                return cls(cnf, bits)
        raise InvalidInput("missing 'c planted <bits>' comment")


def generate_planted(n: int, m: int, seed: int) -> PlantedCnf:
    """Uniform clauses rejected against a hidden satisfying assignment.

    Each variable triple admits 7 satisfied polarity patterns, so m is
    capped at 7 * C(n, 3) distinct clauses.
    """
    if n < 3:
        raise InvalidInput("need at least 3 variables")
    if m < 1:
        raise InvalidInput("need at least one clause")
    max_clauses = 7 * math.comb(n, 3)
    if m > max_clauses:
        raise InvalidInput(f"at most {max_clauses} distinct satisfied clauses exist")
    rng = random.Random(seed)
    planted = tuple(rng.randrange(2) for _ in range(n))
    clauses: list[Clause] = []
    seen = set()
    while len(clauses) < m:
        vars_ = tuple(sorted(rng.sample(range(1, n + 1), 3)))
        pol = tuple(rng.randrange(2) for _ in range(3))
        clause = Clause.make(vars_, pol)
        if not clause.is_satisfied(planted) or clause in seen:
            continue
        seen.add(clause)
        clauses.append(clause)
    return PlantedCnf(CnfInstance(n, tuple(clauses)), planted)
