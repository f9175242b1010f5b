import itertools
import math
import random
from fractions import Fraction

import pytest

from oracles import exact_to_complex, kron_dense
from stoqcure.errors import InvalidInput, NotDecodable, TooLarge
from stoqcure.pauli import collect, gates_from_labels, to_dense
from stoqcure.sat import (
    Clause,
    CnfInstance,
    SIX_LOCAL,
    THREE_LOCAL,
    clause_logic_table,
    clause_truth_table,
    complementary_pairs,
    conjugate_by_bits,
    decode_assignment,
    default_penalty,
    driver_part,
    encode_clause,
    encode_instance,
    parse_dimacs,
    to_dimacs,
    verify_reduction,
)
from stoqcure.stoq import is_stoquastic_dense


# --- clause / CNF handling -------------------------------------------------------

def test_clause_canonicalisation_sorts_and_permutes():
    cl = Clause.make((3, 1, 2), (0, 1, 1))
    assert cl.vars == (1, 2, 3)
    assert cl.polarity == (1, 1, 0)


def test_clause_rejects_repeated_variable():
    with pytest.raises(InvalidInput):
        Clause.make((1, 1, 2), (0, 0, 0))


def test_duplicate_clauses_rejected():
    with pytest.raises(InvalidInput):
        CnfInstance.from_clauses(3, [((1, 2, 3), (1, 0, 1)), ((3, 2, 1), (1, 0, 1))])


def test_clause_semantics():
    cl = Clause.make((1, 2, 3), (1, 0, 1))
    assert not cl.is_satisfied((1, 0, 1))
    assert cl.is_satisfied((0, 0, 1))


def test_dimacs_round_trip():
    cnf = CnfInstance.from_clauses(
        4, [((1, 2, 3), (1, 1, 1)), ((2, 3, 4), (0, 1, 0))]
    )
    parsed, _ = parse_dimacs(to_dimacs(cnf))
    assert parsed == cnf


def test_dimacs_literal_signs():
    # negative literal <-> polarity 1 (falsified by assigning 1)
    cnf, _ = parse_dimacs("p cnf 3 1\n-1 -2 -3 0\n")
    assert cnf.clauses[0].polarity == (1, 1, 1)
    assert not cnf.is_satisfied((1, 1, 1))
    assert cnf.is_satisfied((0, 1, 1))


def test_dimacs_rejects_non_three_literal_clauses():
    with pytest.raises(InvalidInput):
        parse_dimacs("p cnf 3 1\n1 2 0\n")
    with pytest.raises(InvalidInput):
        parse_dimacs("p cnf 3 1\n1 -1 2 0\n")


# --- clause encodings --------------------------------------------------------------

def test_all_z_building_block():
    h = encode_clause(Clause.make((1, 2, 3), (1, 1, 1)), THREE_LOCAL)
    assert h == collect(
        [
            (1, "ZZZ"),
            (-3, "ZII"), (-3, "IZI"), (-3, "IIZ"),
            (-1, "ZZI"), (-1, "ZIZ"), (-1, "IZZ"),
        ]
    )


def test_polarity_zero_slot_swaps_to_x():
    h = encode_clause(Clause.make((1, 2, 3), (0, 1, 1)), THREE_LOCAL)
    assert h == collect(
        [
            (1, "XZZ"),
            (-3, "XII"), (-3, "IZI"), (-3, "IIZ"),
            (-1, "XZI"), (-1, "XIZ"), (-1, "IZZ"),
        ]
    )


def test_barred_block_promotes_each_letter_to_a_pair():
    h = encode_clause(Clause.make((1, 2, 3), (1, 1, 1)), SIX_LOCAL)
    assert h.n == 6 and len(h.terms) == 7
    assert h.coefficient("ZZZZZZ") == 1
    assert h.coefficient("ZZIIII") == -3
    assert h.coefficient("ZZZZII") == -1
    # every term acts pairwise
    for _, s in h.terms:
        for a, b in zip(s[0::2], s[1::2]):
            assert a == b


def test_encode_clause_has_seven_terms_both_variants():
    for variant in (THREE_LOCAL, SIX_LOCAL):
        for pol in itertools.product((0, 1), repeat=3):
            h = encode_clause(Clause.make((1, 2, 3), pol), variant)
            assert len(h.terms) == 7


def test_encoding_matches_hadamard_conjugation_oracle():
    # Eq-style check: the (a,b,c) block equals W^(1-a) (x) ... conjugation
    base = kron_dense(encode_clause(Clause.make((1, 2, 3), (1, 1, 1)), THREE_LOCAL))
    from oracles import conjugate_dense, gate_matrix

    for pol in itertools.product((0, 1), repeat=3):
        h = encode_clause(Clause.make((1, 2, 3), pol), THREE_LOCAL)
        mats = [gate_matrix("W" if p == 0 else "I") for p in pol]
        assert (abs(kron_dense(h) - conjugate_dense(base, mats)) < 1e-12).all()


# --- truth tables -------------------------------------------------------------------

@pytest.mark.parametrize("variant", [THREE_LOCAL, SIX_LOCAL])
def test_truth_table_matches_logic_for_all_polarities(variant):
    for pol in itertools.product((0, 1), repeat=3):
        cl = Clause.make((1, 2, 3), pol)
        assert clause_truth_table(cl, variant) == clause_logic_table(cl)


def test_bijection_between_patterns_and_clause_types():
    tables = {
        pol: tuple(sorted(clause_truth_table(Clause.make((1, 2, 3), pol), THREE_LOCAL).items()))
        for pol in itertools.product((0, 1), repeat=3)
    }
    assert len(set(tables.values())) == 8


# --- instances ----------------------------------------------------------------------

def test_empty_cnf_encodes_driver_only():
    cnf = CnfInstance(2, ())
    h = encode_instance(cnf, THREE_LOCAL, c=Fraction(10))
    assert collect(h.terms, n=2) == collect(
        [(-10, "XI"), (-10, "ZI"), (-10, "IX"), (-10, "IZ")]
    )
    assert len(h.groups) == 2  # one group per driver site


def test_default_penalty_rules():
    assert default_penalty(4, THREE_LOCAL) == 40
    assert default_penalty(0, THREE_LOCAL) == 10
    assert default_penalty(7, SIX_LOCAL) == 1


def test_single_clause_instance_groups():
    cnf = CnfInstance.from_clauses(3, [((1, 2, 3), (1, 1, 1))])
    h = encode_instance(cnf, THREE_LOCAL, c=Fraction(10))
    assert len(h.groups) == 4  # one clause + three driver sites
    parts = h.group_parts()
    assert parts[0] == encode_clause(cnf.clauses[0], THREE_LOCAL, 3)
    assert parts[1] == driver_part(1, THREE_LOCAL, Fraction(10), 3)


def test_six_local_driver():
    h = driver_part(1, SIX_LOCAL, Fraction(1), 2)
    assert h == collect([(-2, "ZZII"), (-1, "XXII")], n=4)


# --- decoding -----------------------------------------------------------------------

def test_decode_clifford_gates():
    gates = gates_from_labels(["I", "W", "I"])
    assert decode_assignment(gates, THREE_LOCAL) == (0, 1, 0)
    # X-equivalent labels decode identically
    gates2 = gates_from_labels(["X", "XW", "I"])
    assert decode_assignment(gates2, THREE_LOCAL) == (0, 1, 0)
    with pytest.raises(NotDecodable):
        decode_assignment(gates_from_labels(["P"]), THREE_LOCAL)


def test_decode_angle_pairs():
    q = math.pi / 4
    assert decode_assignment((q, q, 0.0, 0.0), SIX_LOCAL) == (1, 0)
    assert decode_assignment((math.pi / 2, math.pi / 2, -q, -q), SIX_LOCAL) == (0, 1)
    with pytest.raises(NotDecodable):
        decode_assignment((q, -q), SIX_LOCAL)
    with pytest.raises(NotDecodable):
        decode_assignment((0.3, 0.3), SIX_LOCAL)


# --- verify_reduction ----------------------------------------------------------------

def test_unsatisfiable_cnf_has_empty_sets():
    clauses = [((1, 2, 3), pol) for pol in itertools.product((0, 1), repeat=3)]
    cnf = CnfInstance.from_clauses(3, clauses)
    rep = verify_reduction(cnf, THREE_LOCAL)
    assert rep.equal and rep.curing_set == () and rep.sat_set == ()
    assert rep.complementary_pairs == 4


def test_single_clause_sets_are_all_but_falsifying():
    cnf = CnfInstance.from_clauses(3, [((1, 2, 3), (1, 1, 1))])
    rep = verify_reduction(cnf, THREE_LOCAL)
    assert rep.equal
    assert (1, 1, 1) not in rep.sat_set and len(rep.sat_set) == 7


def test_random_planted_instance_contains_plant():
    from stoqcure.scrambler import generate_planted

    planted = generate_planted(6, 12, seed=42)
    rep = verify_reduction(planted.cnf, THREE_LOCAL)
    assert rep.equal
    assert planted.planted in rep.sat_set


def test_verify_reduction_cap():
    cnf = CnfInstance(13, ())
    with pytest.raises(TooLarge):
        verify_reduction(cnf, THREE_LOCAL)


def test_six_local_verify_on_clause_pair():
    cnf = CnfInstance.from_clauses(
        4, [((1, 2, 3), (1, 1, 1)), ((2, 3, 4), (0, 0, 1))]
    )
    rep = verify_reduction(cnf, SIX_LOCAL, c=Fraction(1))
    assert rep.equal


# --- non-cancellation ------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(6))
def test_falsified_clause_contributes_unique_triple_x_string(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 6)
    from stoqcure.scrambler import generate_planted

    cnf = generate_planted(n, rng.randint(2, 8), seed=seed).cnf
    # pick an assignment falsifying some clause, if any exists
    falsified = None
    for bits in itertools.product((0, 1), repeat=n):
        for cl in cnf.clauses:
            if not cl.is_satisfied(bits):
                falsified = (bits, cl)
                break
        if falsified:
            break
    if falsified is None:
        pytest.skip("all assignments satisfy this draw")
    bits, clause = falsified
    h = encode_instance(cnf, THREE_LOCAL, c=Fraction(10 * len(cnf.clauses)))
    conj = conjugate_by_bits(h, bits, THREE_LOCAL)
    triple = "".join(
        "X" if (q + 1) in clause.vars else "I" for q in range(n)
    )
    # collected across all groups, the falsified clause's +X_i X_j X_k term
    # survives with coefficient exactly +1
    total = collect(conj.terms, n=n)
    assert total.coefficient(triple) == 1
    # and no other clause's conjugated block contains that string
    owners = [
        gi
        for gi, part in enumerate(conj.group_parts())
        if any(str(s) == triple for _, s in part.terms)
    ]
    assert len(owners) == 1


def test_complementary_pair_flag():
    cnf = CnfInstance.from_clauses(
        3, [((1, 2, 3), (1, 1, 1)), ((1, 2, 3), (0, 0, 0))]
    )
    assert complementary_pairs(cnf) == 1
    rep = verify_reduction(cnf, THREE_LOCAL)
    assert rep.equal and rep.complementary_pairs == 1
