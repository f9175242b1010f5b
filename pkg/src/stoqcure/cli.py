"""Command-line front end.

Every subcommand prints one JSON document on stdout (byte-identical for
identical inputs and flags) and reserves stderr for diagnostics and the
optional --human summary.  Exit codes: 0 for an affirmative primary
verdict (stoquastic / cured / feasible / verified equal), 1 for a
negative one, 2 for malformed input or an exceeded budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import grouping, pauli_cure, rotation, sat, scrambler, search
from .errors import StoqcureError
from .pauli import (
    Hamiltonian,
    gates_from_labels,
    hamiltonian_from_json,
    hamiltonian_to_json,
    to_dense,
)
from .stoq import FLOAT_TOL, is_stoquastic_dense, is_stoquastic_grouped

OK, NO, BAD = 0, 1, 2


def _load_hamiltonian(path: str) -> Hamiltonian:
    return hamiltonian_from_json(json.loads(Path(path).read_text()))


def _write_hamiltonian(h: Hamiltonian, path: str) -> None:
    Path(path).write_text(json.dumps(hamiltonian_to_json(h), sort_keys=True, indent=2) + "\n")


def _load_key(args) -> scrambler.SecretKey:
    if args.key:
        return scrambler.SecretKey.from_json(json.loads(Path(args.key).read_text()))
    if args.key_seed is None:
        raise StoqcureError("provide --key FILE or --key-seed N")
    return scrambler.generate_key(args.key_n, args.key_seed, kind=args.key_kind)


def _default_tol(h: Hamiltonian, arg: float | None) -> float:
    if arg is not None:
        return arg
    return 0 if h.is_exact else FLOAT_TOL


def _parse_c(text: str | None, cnf: sat.CnfInstance, variant) -> Fraction:
    if text is None or text == "auto":
        return sat.default_penalty(len(cnf.clauses), variant)
    return Fraction(text)


def _variant(name: str) -> sat.ReductionVariant:
    return sat.ReductionVariant(name)


# --- handlers (return (exit_code, payload, human line)) --------------------

def _cmd_check(args):
    h = _load_hamiltonian(args.hamiltonian)
    tol = _default_tol(h, args.tol)
    if args.grouped:
        rep = is_stoquastic_grouped(h, tol=tol, max_qubits=args.max_dense_qubits)
    else:
        rep = is_stoquastic_dense(to_dense(h, max_qubits=args.max_dense_qubits), tol=tol)
    code = OK if rep.stoquastic else NO
    return code, rep.to_json(), f"{rep.verdict} ({rep.mode})"


def _cmd_cure_pauli(args):
    h = _load_hamiltonian(args.hamiltonian)
    if h.groups is None:
        raise StoqcureError("the Hamiltonian file must carry a 'groups' decomposition")
    res = pauli_cure.cure_with_pauli(h)
    code = OK if res.cured else NO
    human = f"cured by Z^x with x={res.x_string()}" if res.cured else f"infeasible: {res.reason}"
    return code, res.to_json(), human


def _cmd_group(args):
    h = _load_hamiltonian(args.hamiltonian)
    res = grouping.regroup(
        h,
        args.k_prime,
        supersets_only=args.supersets_only,
        bounded_weights=args.bounded_weights,
    )
    if args.dump_lp:
        names = [res.problem.var_name(k) for k in range(res.problem.n_vars)]
        Path(args.dump_lp).write_text(res.system.dump(names) + "\n")
    if not res.feasible:
        return NO, {"feasible": False, "hamiltonian": None}, "no stoquastic regrouping"
    doc = hamiltonian_to_json(res.hamiltonian)
    if args.out:
        _write_hamiltonian(res.hamiltonian, args.out)
    payload = {
        "feasible": True,
        "hamiltonian": doc,
        "weights": [str(w) for w in res.weights],
    }
    return OK, payload, f"regrouped into {len(res.hamiltonian.groups)} stoquastic groups"


def _cmd_cure_clifford(args):
    h = _load_hamiltonian(args.hamiltonian)
    gate_set = search.GATESETS[{"iw": "IW", "cprime1": "CPrime1", "full": "FullC1"}[args.gate_set]]
    per_site = None
    if args.driver_filter:
        per_site = [search.driver_filter(h, q).gates for q in range(h.n)]
    found = search.brute_force_cure(
        h,
        gate_set,
        mode="first" if args.first else "all",
        budget=args.max_search,
        per_site=per_site,
        jobs=args.jobs,
    )
    payload = {"assignments": [[g.label for g in a] for a in found]}
    code = OK if found else NO
    return code, payload, f"{len(found)} curing assignment(s)"


def _cmd_encode(args):
    cnf, _ = sat.parse_dimacs(Path(args.cnf).read_text())
    variant = _variant(args.variant)
    c = _parse_c(args.c, cnf, variant)
    h = sat.encode_instance(cnf, variant, c=c)
    if args.out:
        _write_hamiltonian(h, args.out)
        payload = {"out": args.out}
    else:
        payload = {"hamiltonian": hamiltonian_to_json(h)}
    payload.update(
        {"n": h.n, "c": str(c), "n_terms": len(h.terms), "n_groups": len(h.groups)}
    )
    return OK, payload, f"encoded {len(cnf.clauses)} clauses on {h.n} qubits (c={c})"


def _cmd_decode(args):
    doc = json.loads(Path(args.assignment).read_text())
    variant = _variant(args.variant)
    if isinstance(doc, dict):
        doc = doc.get("gates", doc.get("thetas"))
    if variant is sat.THREE_LOCAL:
        assignment = gates_from_labels(doc)
    else:
        assignment = [float(t) for t in doc]
    bits = sat.decode_assignment(assignment, variant)
    x = "".join(map(str, bits))
    return OK, {"x": x}, f"x = {x}"


def _cmd_verify_reduction(args):
    cnf, _ = sat.parse_dimacs(Path(args.cnf).read_text())
    variant = _variant(args.variant)
    c = _parse_c(args.c, cnf, variant)
    rep = sat.verify_reduction(cnf, variant, c=c, max_vars=args.max_vars)
    code = OK if rep.equal else NO
    return code, rep.to_json(), (
        f"curing set {'==' if rep.equal else '!='} satisfying set "
        f"({len(rep.curing_set)} vs {len(rep.sat_set)})"
    )


def _cmd_cure_rotation(args):
    h = _load_hamiltonian(args.hamiltonian)
    found = rotation.cure_sixlocal(h)
    decoded = [
        "".join(map(str, sat.decode_assignment(a, sat.SIX_LOCAL))) for a in found
    ]
    payload = {
        "assignments": [[round(t, 12) for t in a] for a in found],
        "decoded": decoded,
    }
    code = OK if found else NO
    return code, payload, f"{len(found)} curing rotation assignment(s)"


def _cmd_lemma3(args):
    h = _load_hamiltonian(args.hamiltonian)
    inst = rotation.LemmaThreeInstance.from_encoded(h, Fraction(args.c))
    rep = rotation.verify_four_points(
        inst, grid_step_deg=args.grid_step, strict=not args.no_strict
    )
    code = OK if (rep.exactly_four and rep.mixed_blocks_vanish) else NO
    return code, rep.to_json(), (
        f"{len(rep.clusters)} curing cluster(s), analytic four-point check "
        f"{'passed' if rep.mixed_blocks_vanish else 'failed'}"
    )


def _cmd_triangle(args):
    rep = rotation.triangle_incurability(grid_step_deg=args.grid_step)
    curable = rep.curing_points > 0
    code = OK if curable else NO
    return code, rep.to_json(), (
        "curable" if curable else "not curable by single-qubit rotations"
    )


def _cmd_scramble(args):
    h = _load_hamiltonian(args.hamiltonian)
    key = _load_key(args)
    res = scrambler.scramble(h, key)
    if args.out:
        _write_hamiltonian(res.hamiltonian, args.out)
        payload: dict = {"out": args.out}
    else:
        payload = {"hamiltonian": hamiltonian_to_json(res.hamiltonian)}
    payload["still_stoquastic"] = res.still_stoquastic
    human = "scrambled" + (" (warning: still stoquastic)" if res.still_stoquastic else "")
    return OK, payload, human


def _cmd_descramble(args):
    h = _load_hamiltonian(args.hamiltonian)
    key = _load_key(args)
    res = scrambler.descramble(h, key)
    if args.out:
        _write_hamiltonian(res.hamiltonian, args.out)
        payload: dict = {"out": args.out}
    else:
        payload = {"hamiltonian": hamiltonian_to_json(res.hamiltonian)}
    payload["report"] = res.report.to_json()
    code = OK if res.report.stoquastic else NO
    return code, payload, f"descrambled: {res.report.verdict}"


def _cmd_gen_planted(args):
    planted = scrambler.generate_planted(args.n, args.m, args.seed)
    text = planted.to_dimacs()
    if args.out:
        Path(args.out).write_text(text)
        payload = {"out": args.out, "planted": "".join(map(str, planted.planted))}
    else:
        payload = {"dimacs": text, "planted": "".join(map(str, planted.planted))}
    return OK, payload, f"planted assignment {''.join(map(str, planted.planted))}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stoqcure",
        description="Decide and construct curing transformations for the sign problem",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="add a text summary on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, parents=[common], **kwargs)
        p.set_defaults(handler=fn)
        return p

    p = add("check", _cmd_check, help="stoquasticity of a Hamiltonian file")
    p.add_argument("hamiltonian")
    p.add_argument("--grouped", action="store_true", help="check per group instead of the whole matrix")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-dense-qubits", type=int, default=None)

    p = add("cure-pauli", _cmd_cure_pauli, help="cure each group with a Pauli-group element")
    p.add_argument("hamiltonian")

    p = add("group", _cmd_group, help="regroup into k'-local stoquastic parts via exact LP")
    p.add_argument("hamiltonian")
    p.add_argument("--k-prime", type=int, required=True)
    p.add_argument("--supersets-only", action="store_true")
    p.add_argument("--bounded-weights", action="store_true")
    p.add_argument("--out")
    p.add_argument("--dump-lp")

    p = add("cure-clifford", _cmd_cure_clifford, help="exhaustive single-qubit Clifford curing search")
    p.add_argument("hamiltonian")
    p.add_argument("--gate-set", choices=("iw", "cprime1", "full"), default="iw")
    p.add_argument("--first", action="store_true", help="stop at the first curing assignment")
    p.add_argument("--max-search", type=int, default=search.DEFAULT_BUDGET)
    p.add_argument("--driver-filter", action="store_true")
    p.add_argument("--jobs", type=int, default=1)

    p = add("encode", _cmd_encode, help="encode a DIMACS 3SAT file as an instance Hamiltonian")
    p.add_argument("cnf")
    p.add_argument("--variant", choices=("3local", "6local"), required=True)
    p.add_argument("--c", default="auto")
    p.add_argument("--out")

    p = add("decode", _cmd_decode, help="decode a curing assignment to variable bits")
    p.add_argument("assignment")
    p.add_argument("--variant", choices=("3local", "6local"), required=True)

    p = add("verify-reduction", _cmd_verify_reduction, help="compare curing and satisfying sets exhaustively")
    p.add_argument("cnf")
    p.add_argument("--variant", choices=("3local", "6local"), required=True)
    p.add_argument("--c", default="auto")
    p.add_argument("--max-vars", type=int, default=None)

    p = add("cure-rotation", _cmd_cure_rotation, help="discrete rotation curing of a 6-local instance")
    p.add_argument("hamiltonian")

    p = add("lemma3", _cmd_lemma3, help="four-angle analysis of a 6-local instance")
    p.add_argument("hamiltonian")
    p.add_argument("--c", default="1")
    p.add_argument("--grid-step", type=float, default=1.0)
    p.add_argument("--no-strict", action="store_true")

    p = add("triangle", _cmd_triangle, help="incurability of the three-site ZZ+XX ring")
    p.add_argument("--grid-step", type=float, default=3.0)

    for name, fn in (("scramble", _cmd_scramble), ("descramble", _cmd_descramble)):
        p = add(name, fn, help=f"{name} with a per-qubit secret key")
        p.add_argument("hamiltonian")
        p.add_argument("--key")
        p.add_argument("--key-seed", type=int, default=None)
        p.add_argument("--key-kind", choices=("iw", "clifford", "rotation"), default="iw")
        p.add_argument("--key-n", type=int, default=None)
        p.add_argument("--out")

    p = add("gen-planted", _cmd_gen_planted, help="random planted 3SAT instance as DIMACS")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "key_n", None) is None and hasattr(args, "key_n"):
        # default key length from the input Hamiltonian
        try:
            args.key_n = _load_hamiltonian(args.hamiltonian).n
        except Exception:
            args.key_n = 0
    try:
        code, payload, human = args.handler(args)
    except (StoqcureError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        print(f"error: {exc}", file=sys.stderr)
        return BAD
    print(json.dumps(payload, sort_keys=True))
    if args.human:
        print(human, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
