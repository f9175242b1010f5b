import random
from fractions import Fraction

import numpy as np
import pytest

from oracles import brute_force_stoquastic, exact_to_complex, kron_dense, random_exact_hamiltonian
from stoqcure.coeff import Coeff
from stoqcure.errors import NotSquare
from stoqcure.pauli import Hamiltonian, collect, to_dense
from stoqcure.stoq import (
    conjugate_by_x_mask,
    diagonal_multiset,
    is_stoquastic_dense,
    is_stoquastic_grouped,
    off_diagonal_multiset,
    partial_trace,
)


def test_diagonal_matrix_is_stoquastic():
    rep = is_stoquastic_dense(np.diag([5.0, -3.0]))
    assert rep.stoquastic and rep.witness is None


def test_xz_witness_is_first_row_major_violation():
    rep = is_stoquastic_dense(to_dense(collect([(1, "XZ")])), tol=0)
    assert not rep.stoquastic
    assert (rep.witness.row, rep.witness.col) == (0, 2)
    assert rep.witness.value == Coeff(1)


def test_paper_sum_is_stoquastic_despite_nonstoquastic_part():
    h = collect([(-2, "XI"), (1, "XZ")])
    assert is_stoquastic_dense(to_dense(h), tol=0).stoquastic
    assert not is_stoquastic_dense(to_dense(collect([(1, "XZ")])), tol=0).stoquastic


def test_imaginary_offdiagonal_is_not_stoquastic():
    assert not is_stoquastic_dense(to_dense(collect([(-1, "Y")])), tol=0).stoquastic


def test_not_square_raises():
    with pytest.raises(NotSquare):
        is_stoquastic_dense(np.zeros((2, 3)))


@pytest.mark.parametrize("seed", range(10))
def test_dense_check_matches_independent_oracle(seed):
    rng = random.Random(seed)
    h = random_exact_hamiltonian(rng, rng.randint(1, 3), rng.randint(1, 8))
    m = to_dense(h)
    assert is_stoquastic_dense(m, tol=0).stoquastic == brute_force_stoquastic(kron_dense(h))


# --- grouped ------------------------------------------------------------------

def test_grouped_verdict_depends_on_grouping():
    terms = [(-2, "XI"), (1, "XZ")]
    one_group = Hamiltonian.from_groups([collect(terms)])
    assert is_stoquastic_grouped(one_group).stoquastic
    split = Hamiltonian.from_groups([collect([t], n=2) for t in terms])
    rep = is_stoquastic_grouped(split)
    assert not rep.stoquastic
    assert rep.witness.group == 1  # the X1 Z2 group fails


def test_all_z_clause_block_is_stoquastic_as_one_group():
    # diagonal 7-term building block: trivially stoquastic
    from stoqcure.sat import Clause, THREE_LOCAL, encode_clause

    h = encode_clause(Clause.make((1, 2, 3), (1, 1, 1)), THREE_LOCAL)
    assert is_stoquastic_grouped(Hamiltonian.from_groups([h])).stoquastic


def test_ungrouped_defaults_to_per_term_groups():
    h = collect([(-2, "XI"), (1, "XZ")])
    assert h.groups is None
    assert not is_stoquastic_grouped(h).stoquastic


@pytest.mark.parametrize("seed", range(20))
def test_grouped_stoquastic_implies_whole_matrix_stoquastic(seed):
    # sum of stoquastic parts is stoquastic (converse not asserted)
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    parts = []
    for _ in range(rng.randint(1, 4)):
        part = _random_stoquastic_group(rng, n)
        parts.append(part)
    h = Hamiltonian.from_groups(parts)
    assert is_stoquastic_grouped(h).stoquastic
    assert is_stoquastic_dense(to_dense(h), tol=0).stoquastic


def _random_stoquastic_group(rng, n, max_sites=3):
    """Dominant negative X-pattern plus arbitrary diagonal: stoquastic."""
    sites = rng.sample(range(n), rng.randint(1, min(max_sites, n)))
    terms = []
    for q in range(n):
        if rng.random() < 0.4:
            terms.append((Fraction(rng.randint(-3, 3)), _z_string(n, [q])))
    pattern = _x_string(n, sites)
    small = Fraction(rng.randint(-1, 1))
    outside = [q for q in range(n) if q not in sites]
    dominant = Fraction(-(abs(small) + rng.randint(1, 3)))
    terms.append((dominant, pattern))
    if small and outside:
        zsite = rng.choice(outside)
        terms.append((small, _mix_string(n, sites, zsite)))
    part = collect(terms, n=n)
    assert is_stoquastic_dense(to_dense(part), tol=0).stoquastic
    return part


def _z_string(n, sites):
    return "".join("Z" if i in sites else "I" for i in range(n))


def _x_string(n, sites):
    return "".join("X" if i in sites else "I" for i in range(n))


def _mix_string(n, xsites, zsite):
    out = []
    for i in range(n):
        if i in xsites:
            out.append("X")
        elif i == zsite:
            out.append("Z")
        else:
            out.append("I")
    return "".join(out)


# --- off-diagonal multiset and the X-shuffle lemma ------------------------------

def test_off_diagonal_multiset_of_2x2():
    m = np.array([["a", "b"], ["c", "d"]], dtype=object)
    assert off_diagonal_multiset(m) == {"b": 1, "c": 1}


def test_diagonal_matrix_off_diagonals_all_zero():
    m = to_dense(collect([(2, "ZZ")]))
    counts = off_diagonal_multiset(m)
    assert set(counts) == {Coeff(0)} and sum(counts.values()) == 12


@pytest.mark.parametrize("seed", range(12))
def test_x_conjugation_shuffles_off_diagonals_exactly(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    dim = 1 << n
    m = np.array(
        [[Fraction(rng.randint(-9, 9)) for _ in range(dim)] for _ in range(dim)],
        dtype=object,
    )
    for mask in range(dim):
        conj = conjugate_by_x_mask(m, mask)
        assert off_diagonal_multiset(conj) == off_diagonal_multiset(m)
        assert diagonal_multiset(conj) == diagonal_multiset(m)


def test_x_conjugation_mask_is_true_conjugation():
    # index relabelling equals the dense X (x) X conjugation
    rng = random.Random(4)
    h = random_exact_hamiltonian(rng, 2, 4)
    m = kron_dense(h)
    from oracles import conjugate_dense, PAULI_2x2

    want = conjugate_dense(m, [PAULI_2x2["X"], PAULI_2x2["X"]])
    got = conjugate_by_x_mask(m, 0b11)
    assert np.allclose(got, want)


def test_off_shuffle_on_random_two_qubit_hamiltonians():
    rng = random.Random(13)
    for _ in range(50):
        h = random_exact_hamiltonian(rng, 2, rng.randint(1, 6))
        m = to_dense(h)
        conj = conjugate_by_x_mask(m, rng.randrange(4))
        assert off_diagonal_multiset(conj) == off_diagonal_multiset(m)


# --- partial trace --------------------------------------------------------------

@pytest.mark.parametrize("seed", range(8))
def test_partial_trace_of_stoquastic_is_stoquastic(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    dim = 1 << n
    m = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i + 1, dim):
            v = -abs(rng.uniform(0, 2)) if rng.random() < 0.7 else 0.0
            m[i, j] = m[j, i] = v
        m[i, i] = rng.uniform(-2, 2)
    assert is_stoquastic_dense(m, tol=0).stoquastic
    for q in range(n):
        red = partial_trace(m, q, n)
        assert red.shape == (dim // 2, dim // 2)
        assert is_stoquastic_dense(red, tol=1e-12).stoquastic


def test_partial_trace_matches_reshape_oracle():
    rng = random.Random(3)
    n = 3
    dim = 1 << n
    m = np.array([[rng.uniform(-1, 1) for _ in range(dim)] for _ in range(dim)])
    for q in range(n):
        t = m.reshape([2] * n * 2)
        want = np.trace(t, axis1=q, axis2=n + q).reshape(dim // 2, dim // 2)
        assert np.allclose(partial_trace(m, q, n), want)
