import itertools
import random
from fractions import Fraction

import pytest

from oracles import random_exact_hamiltonian
from stoqcure.coeff import Coeff
from stoqcure.pauli import (
    CLIFFORD_GATES,
    Hamiltonian,
    PauliString,
    collect,
    conjugate_clifford,
    gates_from_labels,
    z_gates_from_bits,
)
from stoqcure.pauli_cure import (
    Gf2System,
    SignClass,
    cure_with_pauli,
    enumerate_pauli_cures,
    extract_x_groups,
    sign_constraint,
)
from stoqcure.stoq import is_stoquastic_grouped


# --- X-component extraction ----------------------------------------------------

def test_worked_example_folds_to_single_group():
    # Y1Y2 + 3 X1X2 + X1X2Z3 folds into X1X2 (-Z1Z2 + 3 + Z3)
    h = collect([(1, "YYI"), (3, "XXI"), (1, "XXZ")])
    groups = extract_x_groups(h)
    assert len(groups) == 1
    g = groups[0]
    assert str(g.x_pattern) == "XXI"
    assert g.support == (0, 1)
    assert g.z_part == collect([(-1, "ZZI"), (3, "III"), (1, "IIZ")])


def test_diagonal_terms_yield_no_groups():
    assert extract_x_groups(collect([(1, "ZZ")])) == []


def test_distinct_x_components_yield_distinct_groups():
    h = collect([(1, "XI"), (1, "ZX")])
    groups = extract_x_groups(h)
    assert [str(g.x_pattern) for g in groups] == ["IX", "XI"]


def test_single_y_gives_imaginary_z_part():
    (g,) = extract_x_groups(collect([(2, "Y")]))
    assert g.z_part == Hamiltonian(1, ((Coeff(0, 2), PauliString("Z")),))
    assert sign_constraint(g) is SignClass.MIXED


# --- sign classification ---------------------------------------------------------

def test_worked_example_diagonal_values_frozen():
    # oracle: 2^3 diagonal entries of -Z1Z2 + 3 + Z3, computed by enumeration
    expected = sorted(
        -z1 * z2 + 3 + z3
        for z1, z2, z3 in itertools.product((1, -1), repeat=3)
    )
    assert expected == [1, 1, 3, 3, 3, 3, 5, 5]
    (g,) = extract_x_groups(collect([(1, "YYI"), (3, "XXI"), (1, "XXZ")]))
    assert sign_constraint(g) is SignClass.ALWAYS_NONNEG


def test_constant_negative_part_is_nonpos():
    (g,) = extract_x_groups(collect([(-1, "X")]))
    assert sign_constraint(g) is SignClass.ALWAYS_NONPOS


def test_single_z_part_is_mixed():
    (g,) = extract_x_groups(collect([(1, "XZ")]))
    assert sign_constraint(g) is SignClass.MIXED


# --- GF(2) solver -----------------------------------------------------------------

def test_gf2_single_equation_prefers_first_pivot():
    system = Gf2System(3, (((0, 1), 1),))
    sol = system.solve()
    assert sol.bits() == (1, 0, 0)
    assert sorted(sol.iter_solutions()) == [(0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1)]


def test_gf2_inconsistent():
    system = Gf2System(2, (((0,), 0), ((0,), 1)))
    assert system.solve() is None


def test_gf2_solutions_match_enumeration():
    rng = random.Random(0)
    for _ in range(30):
        n = rng.randint(1, 6)
        eqs = []
        for _ in range(rng.randint(0, 5)):
            size = rng.randint(1, n)
            eqs.append((tuple(sorted(rng.sample(range(n), size))), rng.randrange(2)))
        system = Gf2System(n, tuple(eqs))
        brute = {
            bits
            for bits in itertools.product((0, 1), repeat=n)
            if all(sum(bits[i] for i in sub) % 2 == par for sub, par in eqs)
        }
        sol = system.solve()
        got = set(sol.iter_solutions()) if sol is not None else set()
        assert got == brute


# --- cure_with_pauli ---------------------------------------------------------------

def test_worked_example_constraint_and_solution():
    h = Hamiltonian.from_groups([collect([(1, "YYI"), (3, "XXI"), (1, "XXZ")])])
    res = cure_with_pauli(h)
    assert res.cured
    assert res.system.equations == (((0, 1), 1),)
    assert res.x == (1, 0, 0)
    assert res.x_string() == "100"


def test_already_stoquastic_cured_by_zero_string():
    h = Hamiltonian.from_groups(
        [collect([(-1, "XI")], n=2), collect([(-2, "IX"), (1, "ZZ")], n=2)]
    )
    res = cure_with_pauli(h)
    assert res.cured and res.x == (0, 0)


def test_xz_alone_is_infeasible():
    h = Hamiltonian.from_groups([collect([(1, "XZ")])])
    res = cure_with_pauli(h)
    assert not res.cured
    assert "mixed" in res.reason


def test_requires_groups():
    with pytest.raises(ValueError):
        cure_with_pauli(collect([(1, "X")]))


def test_json_shape():
    h = Hamiltonian.from_groups([collect([(1, "XZ")])])
    doc = cure_with_pauli(h).to_json()
    assert doc["status"] == "infeasible" and doc["x"] is None and doc["reason"]


# --- completeness against brute force -------------------------------------------

def _random_grouped(rng, n, n_groups, letters="IXYZ"):
    parts = []
    for _ in range(n_groups):
        sites = rng.sample(range(n), rng.randint(1, min(3, n)))
        terms = []
        for _ in range(rng.randint(1, 4)):
            s = ["I"] * n
            for q in sites:
                s[q] = rng.choice(letters)
            c = rng.choice([-3, -2, -1, 1, 2, 3])
            terms.append((Fraction(c), "".join(s)))
        part = collect(terms, n=n)
        if part.terms:
            parts.append(part)
    if not parts:
        parts = [collect([(1, "X" + "I" * (n - 1))], n=n)]
    return Hamiltonian.from_groups(parts)


def _brute_force_z_cures(h):
    out = set()
    for bits in itertools.product((0, 1), repeat=h.n):
        conj = conjugate_clifford(h, z_gates_from_bits(bits))
        if is_stoquastic_grouped(conj, tol=0).stoquastic:
            out.add(bits)
    return out


@pytest.mark.parametrize("seed", range(25))
def test_solution_set_equals_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    h = _random_grouped(rng, n, rng.randint(1, 4))
    assert set(enumerate_pauli_cures(h)) == _brute_force_z_cures(h)


@pytest.mark.parametrize("seed", range(25))
def test_cured_result_is_sound(seed):
    rng = random.Random(100 + seed)
    n = rng.randint(2, 6)
    h = _random_grouped(rng, n, rng.randint(1, 4))
    res = cure_with_pauli(h)
    if res.cured:
        conj = conjugate_clifford(h, z_gates_from_bits(res.x))
        assert is_stoquastic_grouped(conj, tol=0).stoquastic
    else:
        assert not _brute_force_z_cures(h)


# --- reduction to Z strings is lossless -------------------------------------------

def _pauli_gate_choices():
    return gates_from_labels(["I", "X", "Y", "Z"])


@pytest.mark.parametrize("seed", range(6))
def test_full_pauli_search_equals_z_projection(seed):
    # curing power of any Pauli assignment equals that of its Z projection
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    h = _random_grouped(rng, n, rng.randint(1, 3))
    choices = _pauli_gate_choices()
    projection = {"I": 0, "X": 0, "Y": 1, "Z": 1}
    pauli_curing = set()
    for combo in itertools.product(range(4), repeat=n):
        gates = tuple(choices[k] for k in combo)
        conj = conjugate_clifford(h, gates)
        if is_stoquastic_grouped(conj, tol=0).stoquastic:
            pauli_curing.add(tuple(projection[choices[k].label] for k in combo))
    assert pauli_curing == _brute_force_z_cures(h)
