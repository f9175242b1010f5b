"""Regrouping a Hamiltonian into stoquastic local parts via LP feasibility.

Every term is split across the candidate qubit subsets that contain its
support, with one unknown weight per (term, subset) pair.  Weights must
sum to 1 per term (the regrouped sum reproduces the input exactly) and
every off-diagonal entry of every subset Hamiltonian must be non-positive;
both constraint families are linear in the weights and are solved with an
exact rational phase-1 simplex, so boundary cases (off-diagonal exactly
zero) are decided correctly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .coeff import Coeff
from .errors import StoqcureError, UncoverableTerm
from .pauli import Hamiltonian, collect, _term_masks
from .simplex import find_feasible_point
from .stoq import is_stoquastic_grouped


@dataclass(frozen=True)
class GroupingProblem:
    h: Hamiltonian  # collected, ungrouped view of the input
    k_prime: int
    subsets: tuple[tuple[int, ...], ...]
    # variable k is the weight of term var_terms[k] inside subset var_subsets[k]
    var_terms: tuple[int, ...]
    var_subsets: tuple[int, ...]

    @property
    def n_vars(self) -> int:
        return len(self.var_terms)

    def var_name(self, k: int) -> str:
        _, s = self.h.terms[self.var_terms[k]]
        return f"w[{s},{{{','.join(map(str, self.subsets[self.var_subsets[k]]))}}}]"


def grouping_problem(
    h: Hamiltonian, k_prime: int, supersets_only: bool = False
) -> GroupingProblem:
    """Set up the (term, subset) weight variables.

    Candidate subsets default to all C(n, k') combinations; with
    `supersets_only` they are restricted to subsets containing at least
    one term's support (an equivalent but smaller formulation).
    """
    if k_prime < 1 or k_prime > h.n:
        raise ValueError(f"k'={k_prime} out of range for n={h.n}")
    flat = collect(h.terms, n=h.n)
    supports = [set(s.support()) for _, s in flat.terms]
    subsets = [tuple(c) for c in itertools.combinations(range(h.n), k_prime)]
    if supersets_only:
        subsets = [
            sub
            for sub in subsets
            if any(supp and supp <= set(sub) for supp in supports)
        ]
    var_terms: list[int] = []
    var_subsets: list[int] = []
    for t, supp in enumerate(supports):
        eligible = [si for si, sub in enumerate(subsets) if supp <= set(sub)]
        if not eligible:
            _, s = flat.terms[t]
            raise UncoverableTerm(f"term {s} fits no candidate {k_prime}-subset")
        for si in eligible:
            var_terms.append(t)
            var_subsets.append(si)
    return GroupingProblem(flat, k_prime, tuple(subsets), tuple(var_terms), tuple(var_subsets))


@dataclass(frozen=True)
class LpSystem:
    """Equalities and <=-inequalities with exact rational coefficients."""

    n_vars: int
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def dump(self, names=None) -> str:
        def fmt(coeffs, rel, rhs):
            lhs = " + ".join(
                f"{a}*{names[k] if names else f'w{k}'}" for k, a in enumerate(coeffs) if a
            )
            return f"{lhs or '0'} {rel} {rhs}"

        lines = [fmt(c, "=", b) for c, b in self.equalities]
        lines += [fmt(c, "<=", b) for c, b in self.inequalities]
        return "\n".join(lines)


def _as_fraction(x) -> Fraction:
    # exact lift; float coefficients enter the LP with their exact binary value
    return x if isinstance(x, Fraction) else Fraction(x)


def build_lp(p: GroupingProblem, bounded_weights: bool = False) -> LpSystem:
    """One equality per term (weights sum to 1), one inequality per
    distinct off-diagonal entry of each subset Hamiltonian.

    Entries with imaginary components contribute an equality forcing the
    imaginary part to vanish.  With `bounded_weights`, 0 <= w <= 1 rows
    are added (the default leaves weights unrestricted in sign).
    """
    nv = p.n_vars
    zero = Fraction(0)
    equalities: list[tuple[tuple[Fraction, ...], Fraction]] = []
    inequalities: list[tuple[tuple[Fraction, ...], Fraction]] = []

    by_term: dict[int, list[int]] = {}
    for k in range(nv):
        by_term.setdefault(p.var_terms[k], []).append(k)
    for t in range(len(p.h.terms)):
        row = [zero] * nv
        for k in by_term[t]:
            row[k] = Fraction(1)
        equalities.append((tuple(row), Fraction(1)))

    seen_rows: set[tuple] = set()
    for si, sub in enumerate(p.subsets):
        members = [k for k in range(nv) if p.var_subsets[k] == si]
        if not members:
            continue
        dim = 1 << p.k_prime
        index = {q: pos for pos, q in enumerate(sub)}
        # entry (row, col) -> {var: Coeff}
        cells: dict[tuple[int, int], dict[int, Coeff]] = {}
        for k in members:
            c, s = p.h.terms[p.var_terms[k]]
            local = ["I"] * p.k_prime
            for q in s.support():
                local[index[q]] = s[q]
            xy, zy, ny = _term_masks(p.k_prime, "".join(local))
            if xy == 0:
                continue  # diagonal contribution, no stoquasticity constraint
            base = c.times_i_power(ny)
            for col in range(dim):
                val = base if (col & zy).bit_count() % 2 == 0 else -base
                cells.setdefault((col ^ xy, col), {})[k] = val
        for (_, _), contrib in sorted(cells.items()):
            re_row = [zero] * nv
            im_row = [zero] * nv
            has_im = False
            for k, v in contrib.items():
                re_row[k] = _as_fraction(v.re)
                if v.im != 0:
                    has_im = True
                im_row[k] = _as_fraction(v.im)
            key = ("le", tuple(re_row))
            if key not in seen_rows:
                seen_rows.add(key)
                inequalities.append((tuple(re_row), zero))
            if has_im:
                key = ("eq", tuple(im_row))
                if key not in seen_rows:
                    seen_rows.add(key)
                    equalities.append((tuple(im_row), zero))

    if bounded_weights:
        for k in range(nv):
            row = [zero] * nv
            row[k] = Fraction(1)
            inequalities.append((tuple(row), Fraction(1)))
            row2 = [zero] * nv
            row2[k] = Fraction(-1)
            inequalities.append((tuple(row2), zero))
    return LpSystem(nv, tuple(equalities), tuple(inequalities))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    weights: tuple[Fraction, ...] | None


def solve_feasibility(system: LpSystem) -> FeasibilityResult:
    """Exact feasible point or certified infeasibility."""
    point = find_feasible_point(system.n_vars, system.equalities, system.inequalities)
    if point is None:
        return FeasibilityResult(False, None)
    return FeasibilityResult(True, tuple(point))


@dataclass(frozen=True)
class RegroupResult:
    feasible: bool
    hamiltonian: Hamiltonian | None
    weights: tuple[Fraction, ...] | None
    problem: GroupingProblem
    system: LpSystem


def regroup(
    h: Hamiltonian,
    k_prime: int,
    supersets_only: bool = False,
    bounded_weights: bool = False,
) -> RegroupResult:
    """Split h into k'-local stoquastic groups summing exactly to h."""
    p = grouping_problem(h, k_prime, supersets_only=supersets_only)
    system = build_lp(p, bounded_weights=bounded_weights)
    res = solve_feasibility(system)
    if not res.feasible:
        return RegroupResult(False, None, None, p, system)
    parts = []
    for si in range(len(p.subsets)):
        terms = []
        for k in range(p.n_vars):
            if p.var_subsets[k] != si or res.weights[k] == 0:
                continue
            c, s = p.h.terms[p.var_terms[k]]
            terms.append((c * res.weights[k], s))
        if terms:
            part = collect(terms, n=h.n)
            if part.terms:
                parts.append(part)
    grouped = Hamiltonian.from_groups(parts) if parts else Hamiltonian.zero(h.n)
    # contract guards: exact reconstruction and per-group stoquasticity
    if collect(grouped.terms, n=h.n).terms != p.h.terms:
        raise StoqcureError("regrouped parts do not sum back to the input")
    if parts and not is_stoquastic_grouped(grouped).stoquastic:
        raise StoqcureError("regrouped parts are not all stoquastic")
    return RegroupResult(True, grouped, res.weights, p, system)


def find_grouping(h: Hamiltonian, k_start: int, k_max: int, **kwargs):
    """Increase k' until a stoquastic regrouping is found (or give up)."""
    for k in range(k_start, k_max + 1):
        try:
            res = regroup(h, k, **kwargs)
        except UncoverableTerm:
            continue
        if res.feasible:
            return k, res
    return None, None
