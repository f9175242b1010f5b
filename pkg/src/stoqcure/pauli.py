"""Pauli-string Hamiltonians and their conjugation by single-qubit gates.

Conventions used throughout the package:

* A Pauli string is a word over ``{I, X, Y, Z}``; site 0 is the leftmost
  letter and maps to the most significant bit of a computational basis
  index, matching the order of iterated Kronecker products.
* Term coefficients never carry hidden string phases: ``Y`` is stored as a
  letter and its intrinsic ``i`` factors are introduced only where the
  operator is actually expanded (dense matrices, X/Z component splits).
* Clifford gates are represented by their conjugation action, a signed
  permutation of ``{X, Y, Z}``; global phases are irrelevant for
  stoquasticity and are not tracked.
* Rotation angles are canonicalised to ``(-pi/2, pi/2]`` (conjugation by
  ``R(theta)`` has period ``pi``); angles within 1e-12 of a multiple of
  ``pi/4`` are evaluated exactly, so conjugation at those angles stays in
  rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .coeff import Coeff, Scalar
from .errors import MixedLength, TooLarge, UnsupportedLetter

LETTERS = "IXYZ"

DEFAULT_DENSE_CAP = 14

ANGLE_SNAP_TOL = 1e-12


class PauliString(str):
    """A length-n word over {I, X, Y, Z}."""

    def __new__(cls, letters: str) -> "PauliString":
        if not set(letters) <= set(LETTERS):
            raise ValueError(f"invalid Pauli letters in {letters!r}")
        return super().__new__(cls, letters)

    @property
    def weight(self) -> int:
        return sum(1 for ch in self if ch != "I")

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, ch in enumerate(self) if ch != "I")

    @classmethod
    def from_sites(cls, n: int, sites: dict[int, str]) -> "PauliString":
        letters = ["I"] * n
        for i, ch in sites.items():
            letters[i] = ch
        return cls("".join(letters))


Term = tuple[Coeff, PauliString]


def _as_coeff(c) -> Coeff:
    if isinstance(c, Coeff):
        return c
    if isinstance(c, complex):
        return Coeff(c.real, c.imag)
    return Coeff(c)


@dataclass(frozen=True)
class Hamiltonian:
    """A sum of weighted Pauli strings with an optional term grouping.

    Without explicit groups the term list is canonical: collected,
    zero-free and sorted lexicographically by string.  With explicit
    groups, uniqueness and ordering hold within each group; the same
    string may appear in several groups (term splitting).
    """

    n: int
    terms: tuple[Term, ...]
    groups: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def zero(cls, n: int) -> "Hamiltonian":
        return cls(n, ())

    @classmethod
    def from_terms(cls, terms, n: int | None = None) -> "Hamiltonian":
        return collect(terms, n=n)

    @classmethod
    def from_groups(cls, parts: Sequence["Hamiltonian"]) -> "Hamiltonian":
        """Concatenate per-group Hamiltonians into one grouped Hamiltonian."""
        if not parts:
            raise ValueError("from_groups needs at least one part")
        n = parts[0].n
        if any(p.n != n for p in parts):
            raise MixedLength("parts act on different qubit counts")
        terms: list[Term] = []
        groups: list[tuple[int, ...]] = []
        for part in parts:
            start = len(terms)
            terms.extend(part.terms)
            groups.append(tuple(range(start, len(terms))))
        return cls(n, tuple(terms), tuple(groups))

    def with_groups(self, groups: Sequence[Sequence[int]]) -> "Hamiltonian":
        seen: list[int] = []
        for g in groups:
            seen.extend(g)
        if sorted(seen) != list(range(len(self.terms))):
            raise ValueError("groups must partition the term indices")
        return Hamiltonian(self.n, self.terms, tuple(tuple(g) for g in groups))

    def group_parts(self) -> list["Hamiltonian"]:
        """The groups as standalone Hamiltonians (one per term if ungrouped)."""
        if self.groups is None:
            return [Hamiltonian(self.n, (t,)) for t in self.terms]
        return [
            Hamiltonian(self.n, tuple(self.terms[i] for i in g)) for g in self.groups
        ]

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for c, _ in self.terms)

    def support(self) -> tuple[int, ...]:
        sites: set[int] = set()
        for _, s in self.terms:
            sites.update(s.support())
        return tuple(sorted(sites))

    def coefficient(self, string: str) -> Coeff:
        for c, s in self.terms:
            if s == string:
                return c
        return Coeff(0)

    def trace(self) -> Coeff:
        """2**n times the coefficient of the all-identity string."""
        return self.coefficient("I" * self.n) * (1 << self.n)

    def restrict(self, sites: Sequence[int]) -> "Hamiltonian":
        """Project onto the given sites; every term must be supported there."""
        sites = tuple(sites)
        index = {q: k for k, q in enumerate(sites)}
        out: list[Term] = []
        for c, s in self.terms:
            letters = ["I"] * len(sites)
            for q in s.support():
                if q not in index:
                    raise ValueError(f"term {s} not supported on sites {sites}")
                letters[index[q]] = s[q]
            out.append((c, PauliString("".join(letters))))
        return collect(out, n=len(sites))

    def map_terms(self, fn) -> "Hamiltonian":
        """Apply a 1:1 term map, preserving groups.

        Only safe for maps that keep distinct strings distinct (signed
        letter permutations, scalar multiples).
        """
        new = tuple(fn(c, s) for c, s in self.terms)
        if self.groups is None:
            return collect(new, n=self.n)
        return Hamiltonian(self.n, new, self.groups)

    def __add__(self, other: "Hamiltonian") -> "Hamiltonian":
        if self.n != other.n:
            raise MixedLength("qubit counts differ")
        return collect(list(self.terms) + list(other.terms), n=self.n)

    def __sub__(self, other: "Hamiltonian") -> "Hamiltonian":
        return self + (-other)

    def __neg__(self) -> "Hamiltonian":
        return self.scale(-1)

    def scale(self, factor: Scalar | Coeff) -> "Hamiltonian":
        factor = _as_coeff(factor)
        if factor.is_zero():
            return Hamiltonian.zero(self.n)
        return self.map_terms(lambda c, s: (c * factor, s))

    def __repr__(self) -> str:
        body = " + ".join(f"({c.re!s}{'' if c.im == 0 else f'+{c.im!s}i'})*{s}" for c, s in self.terms)
        return f"Hamiltonian(n={self.n}, {body or '0'})"


def collect(terms: Iterable[tuple], n: int | None = None) -> Hamiltonian:
    """Merge duplicate strings, drop zeros, sort lexicographically.

    Raises MixedLength if the strings disagree on length (or on ``n``).
    """
    acc: dict[PauliString, Coeff] = {}
    length = n
    for c, s in terms:
        s = PauliString(s)
        if length is None:
            length = len(s)
        elif len(s) != length:
            raise MixedLength(f"string {s} has length {len(s)}, expected {length}")
        c = _as_coeff(c)
        acc[s] = acc[s] + c if s in acc else c
    if length is None:
        raise ValueError("cannot infer qubit count from an empty term list")
    out = tuple(
        (c, s) for s, c in sorted(acc.items(), key=lambda kv: kv[0]) if not c.is_zero()
    )
    return Hamiltonian(length, out)


# ---------------------------------------------------------------------------
# Dense expansion
# ---------------------------------------------------------------------------

def _site_mask(n: int, site: int) -> int:
    return 1 << (n - 1 - site)


def _term_masks(n: int, s: PauliString) -> tuple[int, int, int]:
    """(flip mask for X/Y letters, sign mask for Z/Y letters, Y count)."""
    xy = zy = ny = 0
    for i, ch in enumerate(s):
        if ch in "XY":
            xy |= _site_mask(n, i)
        if ch in "ZY":
            zy |= _site_mask(n, i)
        if ch == "Y":
            ny += 1
    return xy, zy, ny


def to_dense(h: Hamiltonian, max_qubits: int | None = None) -> np.ndarray:
    """Expand to a 2**n x 2**n matrix.

    Entries are `Coeff` objects (object dtype) when every coefficient is
    exact, otherwise complex128.  Each Pauli string touches exactly one
    entry per column, so the cost is O(len(terms) * 2**n).
    """
    cap = DEFAULT_DENSE_CAP if max_qubits is None else max_qubits
    if h.n > cap:
        raise TooLarge(f"dense expansion of {h.n} qubits exceeds cap {cap}")
    dim = 1 << h.n
    if h.is_exact:
        m = np.full((dim, dim), Coeff(0), dtype=object)
        for c, s in h.terms:
            xy, zy, ny = _term_masks(h.n, s)
            base = c.times_i_power(ny)
            neg = -base
            for col in range(dim):
                row = col ^ xy
                val = base if (col & zy).bit_count() % 2 == 0 else neg
                m[row, col] = m[row, col] + val
        return m
    m = np.zeros((dim, dim), dtype=complex)
    for c, s in h.terms:
        xy, zy, ny = _term_masks(h.n, s)
        base = complex(c) * (1j ** ny)
        for col in range(dim):
            row = col ^ xy
            m[row, col] += base if (col & zy).bit_count() % 2 == 0 else -base
    return m


def diagonal_values(h: Hamiltonian) -> list[Coeff]:
    """Diagonal of the dense expansion of an {I, Z}-letter Hamiltonian."""
    masks = []
    for c, s in h.terms:
        xy, zy, _ = _term_masks(h.n, s)
        if xy:
            raise UnsupportedLetter(f"{s} is not diagonal")
        masks.append((c, zy))
    dim = 1 << h.n
    out = []
    for b in range(dim):
        val = Coeff(0)
        for c, zy in masks:
            val = val + (c if (b & zy).bit_count() % 2 == 0 else -c)
        out.append(val)
    return out


# ---------------------------------------------------------------------------
# Single-qubit Clifford gates as signed Pauli permutations
# ---------------------------------------------------------------------------

_SINGLE_PRODUCT = {
    # (A, B) -> (phase exponent k with A*B = i**k * C, C)
    ("X", "X"): (0, "I"),
    ("Y", "Y"): (0, "I"),
    ("Z", "Z"): (0, "I"),
    ("X", "Y"): (1, "Z"),
    ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"),
    ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"),
    ("X", "Z"): (3, "Y"),
}


@dataclass(frozen=True)
class CliffordGate:
    """One of the 24 single-qubit Clifford actions, up to global phase.

    ``x_image`` and ``z_image`` give the conjugated images of X and Z as
    (sign, letter); the image of Y follows from Y = iXZ.
    """

    label: str
    x_image: tuple[int, str]
    z_image: tuple[int, str]

    def image(self, letter: str) -> tuple[int, str]:
        if letter == "I":
            return (1, "I")
        if letter == "X":
            return self.x_image
        if letter == "Z":
            return self.z_image
        if letter == "Y":
            sx, px = self.x_image
            sz, pz = self.z_image
            k, p = _SINGLE_PRODUCT[(px, pz)]
            # i * i**k is plus/minus one for px != pz
            sign = sx * sz * (1 if (k + 1) % 4 == 0 else -1)
            return (sign, p)
        raise UnsupportedLetter(f"unknown letter {letter!r}")

    def compose(self, other: "CliffordGate") -> "CliffordGate":
        """Action of the matrix product self * other (other acts first)."""
        def chain(letter):
            s1, p1 = other.image(letter)
            s2, p2 = self.image(p1)
            return (s1 * s2, p2)

        return CliffordGate("?", chain("X"), chain("Z"))

    def same_action(self, other: "CliffordGate") -> bool:
        return self.x_image == other.x_image and self.z_image == other.z_image

    def canonical(self) -> "CliffordGate":
        return GATE_BY_ACTION[(self.x_image, self.z_image)]

    def inverse(self) -> "CliffordGate":
        inv_images = {}
        for src in "XYZ":
            sign, dst = self.image(src)
            inv_images[dst] = (sign, src)
        gate = CliffordGate("?", inv_images["X"], inv_images["Z"])
        return gate.canonical()

    @property
    def index(self) -> int:
        return GATE_INDEX[(self.x_image, self.z_image)]

    def __repr__(self) -> str:
        return f"CliffordGate({self.label!r})"


def _build_clifford_table():
    generators = [
        CliffordGate("X", (1, "X"), (-1, "Z")),
        CliffordGate("Y", (-1, "X"), (-1, "Z")),
        CliffordGate("Z", (-1, "X"), (1, "Z")),
        CliffordGate("W", (1, "Z"), (1, "X")),
        CliffordGate("P", (1, "Y"), (1, "Z")),
    ]
    identity = CliffordGate("I", (1, "X"), (1, "Z"))
    found = {(identity.x_image, identity.z_image): identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for elem in frontier:
            for gen in generators:
                word = gen.label if elem.label == "I" else elem.label + gen.label
                prod = elem.compose(gen)
                key = (prod.x_image, prod.z_image)
                if key not in found:
                    named = CliffordGate(word, prod.x_image, prod.z_image)
                    found[key] = named
                    nxt.append(named)
        frontier = nxt
    gates = tuple(sorted(found.values(), key=lambda g: (len(g.label), g.label)))
    return gates


CLIFFORD_GATES: tuple[CliffordGate, ...] = _build_clifford_table()
GATE_BY_LABEL = {g.label: g for g in CLIFFORD_GATES}
GATE_BY_ACTION = {(g.x_image, g.z_image): g for g in CLIFFORD_GATES}
GATE_INDEX = {(g.x_image, g.z_image): k for k, g in enumerate(CLIFFORD_GATES)}

I_GATE = GATE_BY_LABEL["I"]
X_GATE = GATE_BY_LABEL["X"]
Y_GATE = GATE_BY_LABEL["Y"]
Z_GATE = GATE_BY_LABEL["Z"]
W_GATE = GATE_BY_LABEL["W"]
P_GATE = GATE_BY_LABEL["P"]
XW_GATE = X_GATE.compose(W_GATE).canonical()
WX_GATE = W_GATE.compose(X_GATE).canonical()


def gates_from_labels(labels: Sequence[str]) -> tuple[CliffordGate, ...]:
    """Resolve gate labels, evaluating unknown words as products of letters."""
    out = []
    for label in labels:
        if label in GATE_BY_LABEL:
            out.append(GATE_BY_LABEL[label])
            continue
        gate = I_GATE
        for ch in label:
            if ch not in "IXYZWP":
                raise ValueError(f"unknown gate label {label!r}")
            gate = gate.compose(GATE_BY_LABEL[ch])
        out.append(gate.canonical())
    return tuple(out)


def z_gates_from_bits(bits: Sequence[int]) -> tuple[CliffordGate, ...]:
    return tuple(Z_GATE if b else I_GATE for b in bits)


def w_gates_from_bits(bits: Sequence[int]) -> tuple[CliffordGate, ...]:
    return tuple(W_GATE if b else I_GATE for b in bits)


GateAssignment = Union[Sequence[CliffordGate], Sequence[float]]


def conjugate_clifford(h: Hamiltonian, gates: Sequence[CliffordGate]) -> Hamiltonian:
    """U h U^dagger for U a tensor product of single-qubit Cliffords.

    Letterwise signed permutation; exact, and group structure (if any) is
    preserved since distinct strings stay distinct.
    """
    if len(gates) != h.n:
        raise ValueError(f"need {h.n} gates, got {len(gates)}")

    def apply(c: Coeff, s: PauliString) -> Term:
        sign = 1
        letters = []
        for i, ch in enumerate(s):
            if ch == "I":
                letters.append("I")
                continue
            sg, out = gates[i].image(ch)
            sign *= sg
            letters.append(out)
        return (c if sign == 1 else -c, PauliString("".join(letters)))

    return h.map_terms(apply)


# ---------------------------------------------------------------------------
# Rotation conjugation
# ---------------------------------------------------------------------------

def canonical_angle(theta: float) -> float:
    """Reduce to the fundamental period (-pi/2, pi/2] of conjugation."""
    t = math.fmod(theta, math.pi)
    if t > math.pi / 2:
        t -= math.pi
    elif t <= -math.pi / 2:
        t += math.pi
    return t


def sin_cos_2theta(theta: float) -> tuple[Fraction | float, Fraction | float]:
    """(sin 2theta, cos 2theta), exact at multiples of pi/4."""
    ratio = theta / (math.pi / 4)
    k = round(ratio)
    if abs(theta - k * math.pi / 4) < ANGLE_SNAP_TOL:
        s = (Fraction(0), Fraction(1), Fraction(0), Fraction(-1))[k % 4]
        c = (Fraction(1), Fraction(0), Fraction(-1), Fraction(0))[k % 4]
        return s, c
    return math.sin(2 * theta), math.cos(2 * theta)


def conjugate_rotation(h: Hamiltonian, thetas: Sequence[float]) -> Hamiltonian:
    """R h R^T for R a tensor product of single-qubit rotations R(theta_i).

    Each X letter maps to cos(2t) X - sin(2t) Z and each Z letter to
    sin(2t) X + cos(2t) Z.  Y letters are rejected (this path serves
    real-valued Hamiltonians over {I, X, Z}).
    """
    if len(thetas) != h.n:
        raise ValueError(f"need {h.n} angles, got {len(thetas)}")
    table = [sin_cos_2theta(t) for t in thetas]

    def expand(c: Coeff, s: PauliString) -> list[Term]:
        partial: list[tuple[Coeff, list[str]]] = [(c, [])]
        for i, ch in enumerate(s):
            if ch == "I":
                for _, letters in partial:
                    letters.append("I")
                continue
            if ch == "Y":
                raise UnsupportedLetter("rotation conjugation supports only {I, X, Z}")
            s2, c2 = table[i]
            if ch == "X":
                branches = [(c2, "X"), (-s2, "Z")]
            else:
                branches = [(s2, "X"), (c2, "Z")]
            branches = [(f, L) for f, L in branches if f != 0]
            nxt = []
            for coeff, letters in partial:
                for factor, letter in branches:
                    nxt.append((coeff * factor, letters + [letter]))
            partial = nxt
        return [(coeff, PauliString("".join(letters))) for coeff, letters in partial]

    if h.groups is None:
        out: list[Term] = []
        for c, s in h.terms:
            out.extend(expand(c, s))
        return collect(out, n=h.n)
    parts = []
    for part in h.group_parts():
        sub: list[Term] = []
        for c, s in part.terms:
            sub.extend(expand(c, s))
        parts.append(collect(sub, n=h.n))
    return Hamiltonian.from_groups(parts)


# ---------------------------------------------------------------------------
# JSON serialisation
# ---------------------------------------------------------------------------

def _scalar_to_str(x: Fraction | float) -> str:
    return str(x) if isinstance(x, Fraction) else repr(x)


def hamiltonian_to_json(h: Hamiltonian) -> dict:
    doc = {
        "n": h.n,
        "terms": [
            {"re": _scalar_to_str(c.re), "im": _scalar_to_str(c.im), "paulis": str(s)}
            for c, s in h.terms
        ],
    }
    if h.groups is not None:
        doc["groups"] = [list(g) for g in h.groups]
    return doc


def hamiltonian_from_json(doc: dict) -> Hamiltonian:
    from .errors import InvalidInput

    try:
        n = int(doc["n"])
        raw = [
            (Coeff.parse(t["re"], t.get("im", "0")), PauliString(t["paulis"]))
            for t in doc["terms"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed Hamiltonian JSON: {exc}") from exc
    for _, s in raw:
        if len(s) != n:
            raise InvalidInput(f"string {s} does not match n={n}")
    groups = doc.get("groups")
    if groups is None:
        return collect(raw, n=n)
    terms = tuple(raw)
    seen: list[int] = []
    for g in groups:
        seen.extend(g)
        if len({terms[i][1] for i in g}) != len(g):
            raise InvalidInput("duplicate Pauli string within a group")
    if sorted(seen) != list(range(len(terms))):
        raise InvalidInput("groups must partition the term indices")
    return Hamiltonian(n, terms, tuple(tuple(int(i) for i in g) for g in groups))
