"""Curing transformations for the sign problem of qubit Hamiltonians.

The package decides stoquasticity of Pauli-string Hamiltonians, cures
local terms with Pauli / Clifford / orthogonal single-qubit
transformations where possible, regroups terms via exact LP feasibility,
encodes 3SAT instances as curable local Hamiltonians (and decodes curing
assignments back to satisfying assignments), and scrambles stoquastic
Hamiltonians behind per-qubit secret keys.  Everything is validated
against brute-force dense oracles at small qubit counts.
"""

from .coeff import Coeff
from .errors import (
    BudgetExceeded,
    ConstraintViolated,
    InvalidInput,
    MixedLength,
    NotDecodable,
    NotOrthogonal,
    NotSquare,
    NotStoquasticInput,
    StoqcureError,
    TooLarge,
    UncoverableTerm,
    UnsupportedLetter,
)
from .pauli import (
    CLIFFORD_GATES,
    CliffordGate,
    Hamiltonian,
    PauliString,
    canonical_angle,
    collect,
    conjugate_clifford,
    conjugate_rotation,
    gates_from_labels,
    hamiltonian_from_json,
    hamiltonian_to_json,
    to_dense,
)
from .stoq import (
    StoqReport,
    conjugate_by_x_mask,
    diagonal_multiset,
    is_stoquastic_dense,
    is_stoquastic_grouped,
    off_diagonal_multiset,
    partial_trace,
)
from .pauli_cure import cure_with_pauli, enumerate_pauli_cures, extract_x_groups, sign_constraint
from .grouping import build_lp, grouping_problem, regroup, solve_feasibility
from .sat import (
    Clause,
    CnfInstance,
    ReductionVariant,
    SIX_LOCAL,
    THREE_LOCAL,
    clause_truth_table,
    decode_assignment,
    encode_clause,
    encode_instance,
    verify_reduction,
)
from .search import GATESET_CPRIME1, GATESET_FULL, GATESET_IW, brute_force_cure, canonicalize_mod_x, driver_filter
from .rotation import (
    LemmaThreeInstance,
    check_lemma3_constraints,
    cure_sixlocal,
    orthogonal_to_rotation,
    triangle_incurability,
    verify_four_points,
)
from .scrambler import PlantedCnf, SecretKey, descramble, generate_key, generate_planted, scramble

__version__ = "0.1.0"
