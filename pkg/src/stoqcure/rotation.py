"""Continuous-rotation curing analysis.

A real orthogonal 2x2 matrix is either a rotation R(theta) or X * R(pi/2 -
theta); since X conjugation only relocates matrix entries, every orthogonal
assignment reduces to a rotation assignment of equal curing power.

For Hamiltonians of the block form

    Z1 Z2 (x) Hz + X1 X2 (x) Hx + c (-2 Z1 Z2 - X1 X2) (x) I + I (x) HI

rotating the first two qubits produces mixed X1 Z2 / Z1 X2 blocks that must
vanish identically, which (under two scalar conditions on c) pins the angle
pair to {(0,0), (pi/2,pi/2), (pi/4,pi/4), (-pi/4,-pi/4)}.  This module
verifies those conditions, scans the angle torus for curing points, runs
the discrete search they license on six-local encodings, and demonstrates
the three-site ring of ZZ + XX couplings that no rotation assignment can
cure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coeff import Coeff
from .errors import ConstraintViolated, InvalidInput, NotOrthogonal
from .pauli import (
    Hamiltonian,
    PauliString,
    canonical_angle,
    collect,
    conjugate_clifford,
    conjugate_rotation,
    gates_from_labels,
    to_dense,
)
from .sat import QUARTER, SIX_LOCAL, variable_gates
from .stoq import FLOAT_TOL, is_stoquastic_dense, is_stoquastic_grouped

LEMMA_POINTS = (
    (0.0, 0.0),
    (math.pi / 2, math.pi / 2),
    (QUARTER, QUARTER),
    (-QUARTER, -QUARTER),
)


def orthogonal_to_rotation(q, tol: float = 1e-9) -> tuple[bool, float]:
    """(is_reflection, theta) with equal curing power to the input.

    Rotations return their own angle; reflections by theta return
    pi/2 - theta, the rotation left over after peeling off the X factor.
    """
    q = np.asarray(q)
    if np.iscomplexobj(q):
        if np.abs(q.imag).max(initial=0) > tol:
            raise NotOrthogonal("matrix has imaginary entries")
        q = q.real
    q = q.astype(float)
    if q.shape != (2, 2) or not np.allclose(q.T @ q, np.eye(2), atol=tol):
        raise NotOrthogonal(f"not a 2x2 orthogonal matrix within tol={tol}")
    det = q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0]
    angle = math.atan2(q[1, 0], q[0, 0])
    if det > 0:
        return False, canonical_angle(angle)
    return True, canonical_angle(math.pi / 2 - angle)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


# ---------------------------------------------------------------------------
# Block-form instances and the four-angle analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaThreeInstance:
    """Block data (h_z, h_x, h_i act on the qubits after the first pair)."""

    h_z: Hamiltonian
    h_x: Hamiltonian
    h_i: Hamiltonian
    c: Fraction

    def __post_init__(self):
        if not (self.h_z.n == self.h_x.n == self.h_i.n):
            raise InvalidInput("h_z, h_x, h_i must share a qubit count")

    @property
    def rest_qubits(self) -> int:
        return self.h_z.n

    @classmethod
    def from_encoded(cls, h: Hamiltonian, c: Fraction) -> "LemmaThreeInstance":
        """Split a six-local instance Hamiltonian by its first-pair action.

        The driver's own first-pair terms (-2c ZZ, -c XX) belong to the
        separate penalty block, so they are removed from h_z / h_x here.
        """
        m = h.n - 2
        gz: list = []
        gx: list = []
        gi: list = []
        for coeff, s in h.terms:
            head, tail = s[:2], PauliString(s[2:])
            if head == "ZZ":
                gz.append((coeff, tail))
            elif head == "XX":
                gx.append((coeff, tail))
            elif head == "II":
                gi.append((coeff, tail))
            else:
                raise InvalidInput(f"term {s} is not in block form on the first pair")
        ident = PauliString("I" * m)
        gz.append((Coeff(2 * c), ident))
        gx.append((Coeff(c), ident))
        return cls(
            collect(gz, n=m) if gz else Hamiltonian.zero(m),
            collect(gx, n=m) if gx else Hamiltonian.zero(m),
            collect(gi, n=m) if gi else Hamiltonian.zero(m),
            c,
        )

    def to_hamiltonian(self) -> Hamiltonian:
        n = self.rest_qubits + 2
        terms: list = []
        for prefix, part in (("ZZ", self.h_z), ("XX", self.h_x), ("II", self.h_i)):
            for coeff, s in part.terms:
                terms.append((coeff, PauliString(prefix + s)))
        rest = "I" * self.rest_qubits
        terms.append((Coeff(-2 * self.c), PauliString("ZZ" + rest)))
        terms.append((Coeff(-self.c), PauliString("XX" + rest)))
        return collect(terms, n=n)

    def shifted_blocks_exact(self):
        """(Hz - 2cI, Hx - cI) as exact dense matrices."""
        dim = 1 << self.rest_qubits
        ident = PauliString("I" * self.rest_qubits)
        mz = to_dense(collect(list(self.h_z.terms) + [(Coeff(-2 * self.c), ident)], n=self.rest_qubits))
        mx = to_dense(collect(list(self.h_x.terms) + [(Coeff(-self.c), ident)], n=self.rest_qubits))
        assert mz.shape == (dim, dim)
        return mz, mx

    def blocks_float(self):
        """(Hz - 2cI, Hx - cI, HI) as float matrices for scanning."""
        def as_real(h):
            m = to_dense(h)
            if m.dtype == object:
                m = np.vectorize(complex)(m) if m.size else m.astype(complex)
            if np.abs(np.imag(m)).max(initial=0) > FLOAT_TOL:
                raise InvalidInput("block matrices must be real")
            return np.real(m).astype(float)

        mz = as_real(self.h_z) - 2 * float(self.c) * np.eye(1 << self.rest_qubits)
        mx = as_real(self.h_x) - float(self.c) * np.eye(1 << self.rest_qubits)
        hi = as_real(self.h_i)
        return mz, mx, hi


@dataclass(frozen=True)
class Lemma3ConstraintReport:
    squares_differ: bool          # |Hz - 2cI| and |Hx - cI| differ somewhere
    both_have_negative: bool      # each shifted block has a negative entry
    trace_z: Fraction | float
    trace_x: Fraction | float
    k: int | None                 # trace_z == -3k for encoded instances
    k_prime: int | None
    trace_shifted_z: Fraction | float
    trace_shifted_x: Fraction | float

    @property
    def ok(self) -> bool:
        return self.squares_differ and self.both_have_negative

    def to_json(self) -> dict:
        return {
            "c1": self.squares_differ,
            "c2": self.both_have_negative,
            "trace_z": str(self.trace_z),
            "trace_x": str(self.trace_x),
            "k": self.k,
            "k_prime": self.k_prime,
            "trace_shifted_z": str(self.trace_shifted_z),
            "trace_shifted_x": str(self.trace_shifted_x),
        }


def _natural_third(value) -> int | None:
    """n with value == -3n, when value is a non-positive multiple of 3."""
    try:
        f = Fraction(value)
    except (TypeError, ValueError):
        return None
    if f > 0 or f.denominator != 1 or f.numerator % 3:
        return None
    return -f.numerator // 3


def check_lemma3_constraints(inst: LemmaThreeInstance) -> Lemma3ConstraintReport:
    """Evaluate the two conditions on the penalty constant.

    For encoded instances the traces of the clause blocks are -3k and
    -3k', so the shifted traces differ for any 2n and the first condition
    holds automatically at c = 1.
    """
    mz, mx = inst.shifted_blocks_exact()
    squares_differ = False
    neg_z = neg_x = False
    dim = mz.shape[0]
    for i in range(dim):
        for j in range(dim):
            a: Coeff = mz[i, j]
            b: Coeff = mx[i, j]
            if not squares_differ and a.abs2() != b.abs2():
                squares_differ = True
            if not neg_z and a.im == 0 and a.re < 0:
                neg_z = True
            if not neg_x and b.im == 0 and b.re < 0:
                neg_x = True
    tz = inst.h_z.trace()
    tx = inst.h_x.trace()
    return Lemma3ConstraintReport(
        squares_differ=squares_differ,
        both_have_negative=neg_z and neg_x,
        trace_z=tz.re,
        trace_x=tx.re,
        k=_natural_third(tz.re) if tz.im == 0 else None,
        k_prime=_natural_third(tx.re) if tx.im == 0 else None,
        trace_shifted_z=tz.re - 2 * inst.c * dim,
        trace_shifted_x=tx.re - inst.c * dim,
    )


def _mixed_first_pair_terms(h: Hamiltonian) -> list[PauliString]:
    return [s for _, s in h.terms if s[:2] in ("XZ", "ZX")]


@dataclass(frozen=True)
class AngleCluster:
    center: tuple[float, ...]
    radius: float
    lemma_point: tuple[float, float] | None
    size: int

    def to_json(self) -> dict:
        return {
            "theta": [round(t, 12) for t in self.center],
            "radius": round(self.radius, 12),
            "lemma_point": None
            if self.lemma_point is None
            else [round(t, 12) for t in self.lemma_point],
            "size": self.size,
        }


def _circ_diff(a: float, b: float) -> float:
    """Distance on the angle circle of period pi."""
    d = math.fmod(a - b, math.pi)
    if d > math.pi / 2:
        d -= math.pi
    elif d < -math.pi / 2:
        d += math.pi
    return abs(d)


def _cluster_points(points: list[tuple[float, ...]], link: float) -> list[list[tuple[float, ...]]]:
    """Single-linkage clusters under the toroidal max-coordinate metric."""
    unused = list(points)
    clusters = []
    while unused:
        seed = unused.pop()
        cluster = [seed]
        grew = True
        while grew:
            grew = False
            rest = []
            for p in unused:
                if any(
                    max(_circ_diff(a, b) for a, b in zip(p, q)) <= link for q in cluster
                ):
                    cluster.append(p)
                    grew = True
                else:
                    rest.append(p)
            unused = rest
        clusters.append(cluster)
    return clusters


def _cluster_summary(cluster, link) -> AngleCluster:
    ref = cluster[0]
    unwrapped = []
    for p in cluster:
        unwrapped.append(
            tuple(
                r + math.remainder(a - r, math.pi) for a, r in zip(p, ref)
            )
        )
    center = tuple(sum(c) / len(c) for c in zip(*unwrapped))
    radius = max(
        max(_circ_diff(a, b) for a, b in zip(p, center)) for p in cluster
    )
    center = tuple(canonical_angle(t) for t in center)
    best = None
    for lp in LEMMA_POINTS:
        d = max(_circ_diff(a, b) for a, b in zip(center, lp))
        if best is None or d < best[0]:
            best = (d, lp)
    lemma_point = best[1] if best is not None and best[0] <= link else None
    return AngleCluster(center, radius, lemma_point, len(cluster))


@dataclass(frozen=True)
class FourPointReport:
    constraints: Lemma3ConstraintReport
    mixed_blocks_vanish: bool     # exact check at the four angle points
    clusters: tuple[AngleCluster, ...]
    curing_points: int
    grid_step: float

    @property
    def exactly_four(self) -> bool:
        hit = {c.lemma_point for c in self.clusters if c.lemma_point is not None}
        return len(self.clusters) == 4 and len(hit) == 4

    def to_json(self) -> dict:
        return {
            "constraints": self.constraints.to_json(),
            "analytic_four_points": self.mixed_blocks_vanish,
            "curing_clusters": [c.to_json() for c in self.clusters],
            "curing_points": self.curing_points,
            "exactly_four": self.exactly_four,
        }


def scan_first_pair(inst: LemmaThreeInstance, grid_step_deg: float, tol: float = FLOAT_TOL):
    """Boolean curing mask over the (theta1, theta2) grid.

    Works on the block structure directly: conjugating the first pair
    turns the instance into XX, XZ, ZX, ZZ blocks whose entries are known
    bilinear combinations of (Hz - 2cI) and (Hx - cI); stoquasticity of
    the assembled matrix is equivalent to

      * every XX-block entry non-positive,
      * the XZ and ZX blocks vanishing,
      * |ZZ-block off-diagonal| + (HI off-diagonal) non-positive.
    """
    mz, mx, hi = inst.blocks_float()
    pairs = np.unique(np.stack([mz.ravel(), mx.ravel()], axis=1), axis=0)
    off = ~np.eye(mz.shape[0], dtype=bool)
    trips = np.unique(
        np.stack([mz[off], mx[off], hi[off]], axis=1), axis=0
    ) if mz.shape[0] > 1 else np.empty((0, 3))

    steps = int(round(180.0 / grid_step_deg))
    degs = -90.0 + grid_step_deg * np.arange(1, steps + 1)
    thetas = np.deg2rad(degs)
    s = np.sin(2 * thetas)
    c = np.cos(2 * thetas)
    ss = np.multiply.outer(s, s)
    cc = np.multiply.outer(c, c)
    sc = np.multiply.outer(s, c)
    cs = np.multiply.outer(c, s)

    uz, ux = pairs[:, 0], pairs[:, 1]
    xx_max = np.max(
        ss[:, :, None] * uz[None, None, :] + cc[:, :, None] * ux[None, None, :],
        axis=2,
        initial=-np.inf,
    )
    xz_max = np.max(
        np.abs(sc[:, :, None] * uz[None, None, :] - cs[:, :, None] * ux[None, None, :]),
        axis=2,
        initial=0.0,
    )
    zx_max = np.max(
        np.abs(cs[:, :, None] * uz[None, None, :] - sc[:, :, None] * ux[None, None, :]),
        axis=2,
        initial=0.0,
    )
    if len(trips):
        tz, tx, thi = trips[:, 0], trips[:, 1], trips[:, 2]
        zz_max = np.max(
            np.abs(cc[:, :, None] * tz[None, None, :] + ss[:, :, None] * tx[None, None, :])
            + thi[None, None, :],
            axis=2,
        )
    else:
        zz_max = np.full_like(xx_max, -np.inf)
    curing = (xx_max <= tol) & (xz_max <= tol) & (zx_max <= tol) & (zz_max <= tol)
    return thetas, curing


def verify_four_points(
    inst: LemmaThreeInstance,
    grid_step_deg: float = 1.0,
    tol: float = FLOAT_TOL,
    strict: bool = True,
) -> FourPointReport:
    """Exact mixed-block vanishing at the four lemma points plus a grid
    scan locating every curing angle pair.

    With `strict`, a violated penalty-constant condition raises
    ConstraintViolated (the four-point conclusion is not licensed there);
    otherwise the report carries the failure and the stray clusters.
    """
    constraints = check_lemma3_constraints(inst)
    if strict and not constraints.ok:
        raise ConstraintViolated(
            f"penalty conditions fail: c1={constraints.squares_differ} "
            f"c2={constraints.both_have_negative}"
        )
    full = inst.to_hamiltonian()
    rest = [0.0] * inst.rest_qubits
    vanish = True
    for t1, t2 in LEMMA_POINTS:
        conj = conjugate_rotation(full, [t1, t2] + rest)
        if not conj.is_exact or _mixed_first_pair_terms(conj):
            vanish = False
    thetas, curing = scan_first_pair(inst, grid_step_deg, tol=tol)
    pts = [
        (float(thetas[i]), float(thetas[j])) for i, j in np.argwhere(curing)
    ]
    step = math.radians(grid_step_deg)
    clusters = tuple(
        _cluster_summary(cl, 1.5 * step) for cl in _cluster_points(pts, 1.5 * step)
    )
    clusters = tuple(sorted(clusters, key=lambda cl: cl.center))
    return FourPointReport(constraints, vanish, clusters, len(pts), grid_step_deg)


# ---------------------------------------------------------------------------
# Discrete search on six-local encodings
# ---------------------------------------------------------------------------

def cure_sixlocal(h: Hamiltonian, tol=0) -> list[tuple[float, ...]]:
    """All curing rotation assignments of a six-local instance.

    The four admissible pair values collapse to two distinct actions on
    paired operators, so assignments are enumerated as bit strings and
    reported with the representative angles (0, 0) / (pi/4, pi/4).
    """
    if h.n % 2:
        raise InvalidInput("six-local instances need an even qubit count")
    n_vars = h.n // 2
    out = []
    for bits in itertools.product((0, 1), repeat=n_vars):
        thetas = variable_gates(bits, SIX_LOCAL)
        conj = conjugate_rotation(h, thetas)
        if is_stoquastic_grouped(conj, tol=tol).stoquastic:
            out.append(tuple(thetas))
    return out


# ---------------------------------------------------------------------------
# The incurable ring
# ---------------------------------------------------------------------------

TRIANGLE_EDGES = ((0, 1), (1, 2), (2, 0))


def ring_edge(i: int, j: int, n: int = 3) -> Hamiltonian:
    return collect(
        [
            (1, PauliString.from_sites(n, {i: "Z", j: "Z"})),
            (1, PauliString.from_sites(n, {i: "X", j: "X"})),
        ],
        n=n,
    )


def triangle_hamiltonian() -> Hamiltonian:
    parts = [ring_edge(i, j) for i, j in TRIANGLE_EDGES]
    return parts[0] + parts[1] + parts[2]


def two_edge_hamiltonian() -> Hamiltonian:
    return ring_edge(0, 1) + ring_edge(1, 2)


@dataclass(frozen=True)
class TriangleReport:
    analytic_contradiction: bool
    grid_points: int
    curing_points: int
    two_edge_cured_by_z2: bool
    grid_step: float

    def to_json(self) -> dict:
        return {
            "analytic_contradiction": self.analytic_contradiction,
            "grid_points": self.grid_points,
            "curing_points": self.curing_points,
            "curing_clusters": [],
            "two_edge_cured_by_z2": self.two_edge_cured_by_z2,
        }


def _triangle_offdiag_max(t1, t2, t3):
    """Largest off-diagonal entry of the rotated ring, from its structure.

    Each rotated edge contributes cos 2(ti - tj) on both-site flips and
    +-sin 2(ti - tj) on single-site flips; single-site flips of the two
    edges at a qubit land on common entries with independent signs.
    """
    d = [2 * (t1 - t2), 2 * (t2 - t3), 2 * (t3 - t1)]
    cos_max = max(np.cos(dd) for dd in d)
    s = [abs(np.sin(dd)) for dd in d]
    sin_max = max(s[0] + s[2], s[0] + s[1], s[1] + s[2])
    return max(cos_max, sin_max)


def triangle_incurability(grid_step_deg: float = 3.0, tol: float = FLOAT_TOL) -> TriangleReport:
    """No rotation assignment cures the three-site ring.

    (a) analytic: making every edge stoquastic forces sin 2(ti - tj) = 0
    and cos 2(ti - tj) = -1 on all three edges, but the angle-sum identity
    then forces cos 2(t1 - t3) = +1, a contradiction;
    (b) a grid scan over (t1, t2, t3) finds no curing point;
    (c) dropping one edge, conjugation by Z on the shared qubit cures.
    """
    # (a): compose the two forced edge constraints and compare with the third
    forced_cos, forced_sin = -1.0, 0.0
    composed_cos = forced_cos * forced_cos - forced_sin * forced_sin
    analytic = composed_cos != forced_cos

    # (b): vectorised scan of the off-diagonal maximum over the angle grid
    steps = int(round(180.0 / grid_step_deg))
    thetas = np.deg2rad(-90.0 + grid_step_deg * np.arange(1, steps + 1))
    t1 = thetas[:, None, None]
    t2 = thetas[None, :, None]
    t3 = thetas[None, None, :]
    d12, d23, d31 = 2 * (t1 - t2), 2 * (t2 - t3), 2 * (t3 - t1)
    cos_max = np.maximum(np.maximum(np.cos(d12), np.cos(d23)), np.cos(d31))
    s12, s23, s31 = np.abs(np.sin(d12)), np.abs(np.sin(d23)), np.abs(np.sin(d31))
    sin_max = np.maximum(np.maximum(s12 + s31, s12 + s23), s23 + s31)
    curing = np.maximum(cos_max, sin_max) <= tol
    n_curing = int(curing.sum())

    # (c): the two-edge chain is cured by Z on the shared qubit
    cured = conjugate_clifford(two_edge_hamiltonian(), gates_from_labels(["I", "Z", "I"]))
    two_edge_ok = is_stoquastic_dense(to_dense(cured), tol=0).stoquastic

    return TriangleReport(
        analytic_contradiction=analytic,
        grid_points=int(curing.size),
        curing_points=n_curing,
        two_edge_cured_by_z2=two_edge_ok,
        grid_step=grid_step_deg,
    )
