"""Command line front end.

Subcommands: compile, verify, solve, pipeline, emit, catalog, prove.
Targets are either a constraint string (`"z = x + y + 1"`), a catalog
gate (`gate:cnot`), a named operation over template variables
(`op:XOR`), or a previously emitted file (`--coord`, `--doc`).

Every failure mode has its own exit code so scripts can tell a parse
error from a failed verification; see EXIT_CODES.

Environment: QUBOGATES_BACKEND picks the solver kernels (auto, numba,
numpy); QUBOGATES_EXHAUSTIVE_LIMIT caps exhaustive enumeration width.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .boolops import BoolOp, ValidSet, arity
from .errors import (
    DegreeError,
    DuplicateNameError,
    ExclusivityError,
    GapVerificationError,
    InfeasibleBoundError,
    MissingVariableError,
    NonUniqueGroundStateError,
    NormalizationError,
    ParseError,
    QubogatesError,
    SolverLimitError,
    UnsatisfiableRelationError,
)
from .feasibility import prove_no_quadratic
from .formats import dump_coordinate, dump_document, load_coordinate, load_document
from .gates import GATE_NAMES, GateSpec, coefficient_range, gate
from .hamiltonian import QuboMatrix, emit_matrix, penalty_to_qubo, qubo_to_ising
from .parse import compile_constraint
from .penalty import (
    Penalty,
    VAR_I,
    VAR_J,
    VAR_K,
    builtin_penalty,
    op_penalty,
    verify_gap,
    _BUILTIN_OPS,
)
from .pbf import Var
from .pipeline import (
    compile_circuit,
    evaluate_classically,
    parse_circuit,
    run_pipeline,
)
from .solver import AnnealParams, solve_anneal, solve_exhaustive

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_NONUNIQUE = 4
EXIT_LIMIT = 5
EXIT_INFEASIBLE = 6
EXIT_EXCLUSIVE = 7
EXIT_DEGREE = 8
EXIT_MISSING = 9
EXIT_UNSAT = 10
EXIT_NORMALIZATION = 11

# Most specific first; the first matching class decides the exit code.
EXIT_CODES: tuple[tuple[type, int], ...] = (
    (ParseError, EXIT_PARSE),
    (DuplicateNameError, EXIT_PARSE),
    (NonUniqueGroundStateError, EXIT_NONUNIQUE),
    (GapVerificationError, EXIT_VERIFY),
    (SolverLimitError, EXIT_LIMIT),
    (InfeasibleBoundError, EXIT_INFEASIBLE),
    (ExclusivityError, EXIT_EXCLUSIVE),
    (DegreeError, EXIT_DEGREE),
    (MissingVariableError, EXIT_MISSING),
    (UnsatisfiableRelationError, EXIT_UNSAT),
    (NormalizationError, EXIT_NORMALIZATION),
)


def _exit_code(err: QubogatesError) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(err, cls):
            return code
    return 1


def _frac(value: Fraction) -> str:
    return str(value)


class _Target:
    """What a positional target resolved to."""

    def __init__(self, penalty: Penalty, gate_spec: GateSpec | None, label: str):
        self.penalty = penalty
        self.gate = gate_spec
        self.label = label


def _resolve_target(text: str, slack_mode: str) -> _Target:
    if text.startswith("gate:"):
        name = text[len("gate:") :]
        if name == "hadamard":
            raise ParseError(
                "the hadamard stage is a field transform, not a penalty;"
                " see `qubogates catalog`"
            )
        g = gate(name)
        return _Target(g.penalty, g, text)
    if text.startswith("op:"):
        name = text[len("op:") :].upper()
        try:
            op = BoolOp[name]
        except KeyError:
            names = ", ".join(sorted(o.name for o in BoolOp))
            raise ParseError(f"unknown operation {name!r}; one of {names}") from None
        ins = (VAR_I, VAR_J)[: arity(op)]
        return _Target(op_penalty(op, VAR_K, ins), None, text)
    return _Target(compile_constraint(text, slack_mode=slack_mode), None, text)


def _load_matrix(ns: argparse.Namespace) -> QuboMatrix | None:
    if getattr(ns, "coord", None):
        return load_coordinate(Path(ns.coord).read_text())
    if getattr(ns, "doc", None):
        q, _ = load_document(Path(ns.doc).read_text())
        return q
    return None


def _penalty_payload(pen: Penalty, g: GateSpec | None) -> dict:
    payload: dict = {
        "variables": [v.name for v in pen.variables],
        "penalty": pen.poly.canonical_str(),
        "valid_value": _frac(pen.valid_value),
        "dropped_offset": _frac(pen.dropped_offset),
        "satisfiable": pen.satisfiable,
        "ancillas": [
            {
                "name": b.var.name,
                "product": [b.factors[0].name, b.factors[1].name],
                "weight": _frac(b.weight),
            }
            for b in pen.ancillas
        ],
    }
    if pen.provenance:
        payload["source"] = pen.provenance
    if g is not None:
        lo, hi = coefficient_range(pen.poly)
        payload["gate"] = {
            "name": g.name,
            "qubits": g.qubits(),
            "inputs": [v.name for v in g.inputs],
            "outputs": [v.name for v in g.outputs],
            "gate_ancillas": [v.name for v in g.ancillas],
            "carriers": [v.name for v in g.carriers],
            "freed": [v.name for v in g.freed],
            "coefficient_range": [_frac(lo), _frac(hi)],
            "notes": g.notes,
        }
    return payload


def _print_penalty(payload: dict, out) -> None:
    if "source" in payload:
        print(f"source: {payload['source']}", file=out)
    print("variables:", " ".join(payload["variables"]), file=out)
    print("penalty:", payload["penalty"], file=out)
    print("valid value:", payload["valid_value"], file=out)
    if payload["dropped_offset"] != "0":
        print("dropped offset:", payload["dropped_offset"], file=out)
    for b in payload["ancillas"]:
        print(
            f"ancilla: {b['name']} = {b['product'][0]}*{b['product'][1]}"
            f" (binding weight {b['weight']})",
            file=out,
        )
    if not payload["satisfiable"]:
        print("satisfiable: no (relation has no binary solutions)", file=out)
    if "gate" in payload:
        g = payload["gate"]
        print(f"gate: {g['name']} on {g['qubits']} qubits", file=out)
        print("  inputs:", " ".join(g["inputs"]), file=out)
        print("  outputs:", " ".join(g["outputs"]), file=out)
        if g["gate_ancillas"]:
            print("  ancillas:", " ".join(g["gate_ancillas"]), file=out)
        print("  carriers:", " ".join(g["carriers"]), file=out)
        print("  freed:", " ".join(g["freed"]), file=out)
        print(
            "  coefficient range:",
            f"[{g['coefficient_range'][0]}, {g['coefficient_range'][1]}]",
            file=out,
        )


def _write_or_print(text: str, path: str | None, out) -> None:
    if path:
        Path(path).write_text(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n", file=out)


def cmd_compile(ns: argparse.Namespace, out=None) -> int:
    target = _resolve_target(ns.target, ns.slack_mode)
    payload = _penalty_payload(target.penalty, target.gate)
    q = penalty_to_qubo(target.penalty.poly)
    if ns.json:
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    else:
        _print_penalty(payload, out)
    if ns.matrix:
        print(emit_matrix(q, style="symmetric"), file=out)
    if ns.out_coord:
        Path(ns.out_coord).write_text(dump_coordinate(q))
    if ns.out_doc:
        provenance = {"source": target.label}
        Path(ns.out_doc).write_text(dump_document(q, provenance))
    return EXIT_OK


def _named_vars(names: str, pool: tuple[Var, ...]) -> list[Var]:
    by_name = {v.name: v for v in pool}
    chosen = []
    for name in names.split(","):
        name = name.strip()
        if name not in by_name:
            raise MissingVariableError(Var(name))
        chosen.append(by_name[name])
    return chosen


def _run_prove(pen: Penalty, var_names: str | None, as_json: bool, out) -> int:
    allowed = None
    if var_names:
        allowed = _named_vars(var_names, pen.valid_set.vars)
    cert = prove_no_quadratic(pen.valid_set, allowed)
    rechecked = cert.recheck()
    names = [v.name for v in (allowed if allowed is not None else cert.variables)]
    payload: dict = {
        "variables": names,
        "feasible": cert.feasible,
        "recheck": rechecked,
    }
    if cert.feasible:
        payload["witness"] = cert.witness_poly.canonical_str()
        payload["witness_value"] = _frac(cert.witness_value)
    else:
        payload["combination"] = [
            {
                "multiplier": _frac(mult),
                "kind": cert.constraints[idx].kind,
                "bits": list(cert.constraints[idx].bits),
                "rhs": _frac(cert.constraints[idx].rhs),
            }
            for idx, mult in cert.combination
        ]
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    elif cert.feasible:
        print("a quadratic penalty exists over", " ".join(names), file=out)
        print("witness:", payload["witness"], file=out)
        print("valid value:", payload["witness_value"], file=out)
        print("recheck:", "pass" if rechecked else "FAIL", file=out)
    else:
        print("no quadratic penalty exists over", " ".join(names), file=out)
        print(
            "certificate: a nonnegative combination of the requirement rows"
            " sums to 0 >= positive",
            file=out,
        )
        for row in payload["combination"]:
            bits = "".join(str(b) for b in row["bits"])
            print(
                f"  {row['multiplier']} x [{row['kind']} at {bits},"
                f" rhs {row['rhs']}]",
                file=out,
            )
        print("recheck:", "pass" if rechecked else "FAIL", file=out)
    if not rechecked:
        raise GapVerificationError("certificate failed its independent recheck")
    return EXIT_OK if not cert.feasible else EXIT_VERIFY


def _valid_set_on_matrix(q: QuboMatrix, relation: Penalty) -> ValidSet:
    """Rebase a relation's valid set onto a loaded matrix's variables."""
    rel_vars = relation.valid_set.vars
    by_name = {v.name: v for v in q.variables}
    missing = [v.name for v in rel_vars if v.name not in by_name]
    if missing:
        raise MissingVariableError(Var(missing[0]))
    extra = set(by_name) - {v.name for v in rel_vars}
    if extra:
        raise MissingVariableError(Var(sorted(extra)[0]))
    ordered = tuple(sorted(q.variables, key=Var.sort_key))
    index_of = {v.name: t for t, v in enumerate(rel_vars)}
    perm = [index_of[v.name] for v in ordered]
    members = frozenset(tuple(m[p] for p in perm) for m in relation.valid_set.members)
    return ValidSet(ordered, members)


def cmd_verify(ns: argparse.Namespace, out=None) -> int:
    loaded = _load_matrix(ns)
    if loaded is not None:
        if ns.prove_no_quadratic:
            raise ParseError("--prove-no-quadratic applies to relations, not files")
        if not ns.relation:
            raise ParseError("--relation is required when verifying a file")
        relation = compile_constraint(ns.relation, slack_mode=ns.slack_mode)
        valid = _valid_set_on_matrix(loaded, relation)
        poly = loaded.to_poly()
        report = verify_gap(poly, valid, keep_table=True)
        label = ns.relation
    else:
        if not ns.target:
            raise ParseError("verify needs a target or --coord/--doc")
        target = _resolve_target(ns.target, ns.slack_mode)
        if ns.prove_no_quadratic:
            return _run_prove(target.penalty, ns.prove_no_quadratic, ns.json, out)
        report = verify_gap(
            target.penalty.poly, target.penalty.valid_set, keep_table=True
        )
        label = ns.target

    payload = {
        "target": label,
        "passed": report.passed,
        "valid_value": None if report.valid_value is None else _frac(report.valid_value),
        "min_invalid": None if report.min_invalid is None else _frac(report.min_invalid),
        "gap": None if report.gap is None else _frac(report.gap),
        "violations": [
            {"bits": list(r.bits), "value": _frac(r.value)} for r in report.violations
        ],
    }
    if ns.json:
        payload["table"] = report.render(order=ns.order) if report.rows_complete else None
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    else:
        if report.rows_complete:
            print(report.render(order=ns.order), file=out)
        if report.passed:
            print(
                f"pass: valid value {payload['valid_value']},"
                f" every other assignment >= {payload['valid_value']} + 1"
                f" (gap {payload['gap']})",
                file=out,
            )
        else:
            print("FAIL: penalty does not separate the valid assignments", file=out)
            for row in payload["violations"][:4]:
                bits = "".join(str(b) for b in row["bits"])
                print(f"  violating assignment {bits} -> {row['value']}", file=out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _parse_clamps(pairs: list[str], variables: tuple[Var, ...]) -> dict[Var, int]:
    by_name = {v.name: v for v in variables}
    clamps: dict[Var, int] = {}
    for pair in pairs:
        for item in pair.split(","):
            item = item.strip()
            if not item:
                continue
            name, eq, bit = item.partition("=")
            if eq != "=" or bit not in ("0", "1"):
                raise ParseError(f"clamp must look like name=0 or name=1, got {item!r}")
            if name not in by_name:
                raise MissingVariableError(Var(name))
            clamps[by_name[name]] = int(bit)
    return clamps


def cmd_solve(ns: argparse.Namespace, out=None) -> int:
    loaded = _load_matrix(ns)
    if loaded is not None:
        q = loaded
        label = ns.coord or ns.doc
    else:
        if not ns.target:
            raise ParseError("solve needs a target or --coord/--doc")
        target = _resolve_target(ns.target, ns.slack_mode)
        q = penalty_to_qubo(target.penalty.poly)
        label = ns.target
    clamps = _parse_clamps(ns.clamp, q.variables)
    if ns.ising:
        model = qubo_to_ising(q)
        clamps_in = {v: (1 if b else -1) for v, b in clamps.items()}
    else:
        model = q
        clamps_in = dict(clamps)
    if ns.anneal:
        params = AnnealParams(seed=ns.seed, restarts=ns.restarts, sweeps=ns.sweeps)
        result = solve_anneal(model, clamps_in, params)
    else:
        result = solve_exhaustive(model, clamps_in, limit=ns.limit)
    payload = {
        "target": label,
        "method": result.method,
        "value": _frac(result.value),
        "states": [
            {v.name: b for v, b in zip(s.vars, s.values)} for s in result.states
        ],
        "stats": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in result.stats.items()},
    }
    if ns.json:
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    else:
        print(f"method: {result.method}", file=out)
        print(f"ground value: {payload['value']}", file=out)
        view = "spin" if ns.ising else "bit"
        print(f"minimizers ({len(result.states)}), {view} values:", file=out)
        for s in result.states:
            pairs = " ".join(f"{v.name}={b}" for v, b in zip(s.vars, s.values))
            print(f"  {pairs}", file=out)
        for key in sorted(payload["stats"]):
            print(f"stat {key}: {payload['stats'][key]}", file=out)
    return EXIT_OK


def _sweep(
    desc, solver, clamp_style: str, reuse: bool, slack_mode: str, out, as_json: bool
) -> int:
    from .pipeline import run_circuit

    wires = desc.inputs
    rows = []
    failures = 0
    for code in range(2 ** len(wires)):
        bits = {
            w: (code >> (len(wires) - 1 - t)) & 1 for t, w in enumerate(wires)
        }
        trace = run_circuit(
            desc, bits, solver, reuse=reuse, clamp_style=clamp_style, slack_mode=slack_mode
        )
        expected = evaluate_classically(desc, bits)
        got = dict(trace.outputs)
        want = {w: expected[w] for w in got}
        ok = got == want
        failures += 0 if ok else 1
        rows.append(
            {
                "inputs": {w: bits[w] for w in wires},
                "outputs": got,
                "classical": want,
                "match": ok,
            }
        )
    if as_json:
        print(
            json.dumps({"rows": rows, "failures": failures}, indent=2, sort_keys=True),
            file=out,
        )
    else:
        for row in rows:
            ins = " ".join(f"{w}={b}" for w, b in row["inputs"].items())
            outs = " ".join(f"{w}={b}" for w, b in row["outputs"].items())
            mark = "ok" if row["match"] else "MISMATCH"
            print(f"  {ins} -> {outs} [{mark}]", file=out)
        print(f"sweep: {len(rows)} input assignments, {failures} mismatches", file=out)
    if failures:
        raise GapVerificationError(f"{failures} sweep rows disagree with plain logic")
    return EXIT_OK


def _anneal_solver(params: AnnealParams):
    def run(model, clamps=None):
        return solve_anneal(model, clamps, params)

    return run


def cmd_pipeline(ns: argparse.Namespace, out=None) -> int:
    text = Path(ns.circuit).read_text()
    desc = parse_circuit(text)
    solver = None
    if ns.anneal:
        solver = _anneal_solver(
            AnnealParams(seed=ns.seed, restarts=ns.restarts, sweeps=ns.sweeps)
        )
    clamp_style = "bias" if ns.bias_clamp else "hard"
    if ns.sweep:
        return _sweep(
            desc, solver, clamp_style, not ns.no_reuse, ns.slack_mode, out, ns.json
        )

    inputs = {}
    for pair in ns.inputs or []:
        for item in pair.split(","):
            item = item.strip()
            if not item:
                continue
            name, eq, bit = item.partition("=")
            if eq != "=" or bit not in ("0", "1"):
                raise ParseError(f"input must look like wire=0 or wire=1, got {item!r}")
            inputs[name] = int(bit)
    stages = compile_circuit(desc, reuse=not ns.no_reuse, slack_mode=ns.slack_mode)
    missing = [w for w in desc.inputs if w not in inputs]
    if missing:
        raise MissingVariableError(Var(missing[0]))
    trace = run_pipeline(
        stages, inputs, solver, outputs=desc.outputs, clamp_style=clamp_style
    )
    payload = {
        "stages": [
            {
                "index": run.index,
                "clamps": dict(run.clamps),
                "value": _frac(run.value),
                "outputs": dict(run.outputs),
                "freed": list(run.freed),
                "method": run.method,
            }
            for run in trace.runs
        ],
        "outputs": dict(trace.outputs),
        "wire_values": dict(trace.wire_values),
    }
    if ns.json:
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    else:
        for run, stage in zip(trace.runs, stages):
            print(f"stage {run.index}: {'; '.join(stage.labels)}", file=out)
            clamp_txt = " ".join(f"{w}={b}" for w, b in run.clamps)
            print(f"  clamps: {clamp_txt or '(none)'}", file=out)
            print(f"  ground value: {_frac(run.value)}", file=out)
            outs = " ".join(f"{w}={b}" for w, b in run.outputs)
            print(f"  outputs: {outs or '(none)'}", file=out)
            print(f"  freed qubits: {' '.join(run.freed) or '(none)'}", file=out)
        outs = " ".join(f"{w}={b}" for w, b in trace.outputs)
        print(f"outputs: {outs}", file=out)
    return EXIT_OK


def cmd_emit(ns: argparse.Namespace, out=None) -> int:
    loaded = _load_matrix(ns)
    if loaded is not None:
        q = loaded
        label = ns.coord or ns.doc
    else:
        if not ns.target:
            raise ParseError("emit needs a target or --coord/--doc")
        target = _resolve_target(ns.target, ns.slack_mode)
        q = penalty_to_qubo(target.penalty.poly)
        label = ns.target
    if ns.format == "coord":
        text = dump_coordinate(q)
    elif ns.format == "doc":
        text = dump_document(q, {"source": label})
    elif ns.format == "matrix":
        text = emit_matrix(q, style="symmetric", include_offset=ns.offset)
    else:
        text = emit_matrix(q, style="upper", include_offset=ns.offset)
    _write_or_print(text, ns.out_path, out)
    return EXIT_OK


def cmd_catalog(ns: argparse.Namespace, out=None) -> int:
    gates = []
    for name in GATE_NAMES:
        if name == "hadamard":
            gates.append(
                {
                    "name": "hadamard",
                    "kind": "field transform",
                    "qubits": "2 with qubit reuse, 4 without",
                }
            )
            continue
        g = gate(name)
        lo, hi = coefficient_range(g.penalty.poly)
        gates.append(
            {
                "name": name,
                "kind": "penalty",
                "qubits": g.qubits(),
                "inputs": [v.name for v in g.inputs],
                "outputs": [v.name for v in g.outputs],
                "carriers": [v.name for v in g.carriers],
                "freed": [v.name for v in g.freed],
                "coefficient_range": [_frac(lo), _frac(hi)],
            }
        )
    ops = []
    for op in BoolOp:
        entry: dict = {"name": op.name, "arity": arity(op)}
        if op in _BUILTIN_OPS:
            pen = builtin_penalty(op)
            entry["fixed_template"] = True
            entry["valid_value"] = _frac(pen.valid_value)
            entry["variables"] = len(pen.variables)
        else:
            entry["fixed_template"] = False
        ops.append(entry)
    payload = {"gates": gates, "operations": ops}
    if ns.json:
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
        return EXIT_OK
    print("gates:", file=out)
    for g in gates:
        if g["kind"] == "field transform":
            print(f"  {g['name']:<9} {g['qubits']}", file=out)
            continue
        print(
            f"  {g['name']:<9} {g['qubits']} qubits,"
            f" inputs {','.join(g['inputs'])} -> outputs {','.join(g['outputs'])},"
            f" carriers {','.join(g['carriers'])}, freed {','.join(g['freed'])}",
            file=out,
        )
    print("operations:", file=out)
    for o in ops:
        if o["fixed_template"]:
            extra = f"fixed template on {o['variables']} variables, valid value {o['valid_value']}"
        else:
            extra = "compiled from its defining equation"
        print(f"  {o['name']:<8} arity {o['arity']}, {extra}", file=out)
    return EXIT_OK


def cmd_prove(ns: argparse.Namespace, out=None) -> int:
    target = _resolve_target(ns.target, ns.slack_mode)
    return _run_prove(target.penalty, ns.vars, ns.json, out)


def _add_common(p: argparse.ArgumentParser, *, files: bool = True) -> None:
    p.add_argument("--json", action="store_true", help="machine readable output")
    p.add_argument(
        "--slack-mode",
        choices=("full", "minimal"),
        default="full",
        help="slack count rule for inequalities (default: full)",
    )
    if files:
        p.add_argument("--coord", help="load a coordinate format file instead")
        p.add_argument("--doc", help="load a JSON document file instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubogates",
        description="Compile Boolean logic and constraints to verified penalty Hamiltonians.",
        epilog=(
            "environment: QUBOGATES_BACKEND=auto|numba|numpy picks solver kernels;"
            " QUBOGATES_EXHAUSTIVE_LIMIT caps exhaustive solve width."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a constraint or gate to a penalty")
    p.add_argument("target", help='constraint text, gate:NAME, or op:NAME')
    p.add_argument("--matrix", action="store_true", help="print the symmetric matrix")
    p.add_argument("--out-coord", help="write coordinate format here")
    p.add_argument("--out-doc", help="write the JSON document here")
    _add_common(p, files=False)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="exhaustively verify a penalty's ground states")
    p.add_argument("target", nargs="?", help="constraint text, gate:NAME, or op:NAME")
    p.add_argument("--relation", help="relation a loaded file must satisfy")
    p.add_argument(
        "--order",
        choices=("binary-desc", "valid-first"),
        default="binary-desc",
        help="assignment table row order",
    )
    p.add_argument(
        "--prove-no-quadratic",
        metavar="VARS",
        help="comma separated variables; prove no quadratic penalty exists over them",
    )
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="minimize a penalty or a loaded matrix")
    p.add_argument("target", nargs="?", help="constraint text, gate:NAME, or op:NAME")
    p.add_argument("--clamp", action="append", default=[], help="name=bit, repeatable")
    p.add_argument("--ising", action="store_true", help="solve the spin form instead")
    p.add_argument("--anneal", action="store_true", help="simulated annealing")
    p.add_argument("--seed", type=int, help="random seed (required with --anneal)")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--sweeps", type=int, default=200)
    p.add_argument("--limit", type=int, help="exhaustive variable cap override")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("pipeline", help="compile and run a staged circuit")
    p.add_argument("circuit", help="circuit file")
    p.add_argument("--inputs", action="append", help="wire=bit[,wire=bit...]")
    p.add_argument("--sweep", action="store_true", help="run every input assignment")
    p.add_argument("--bias-clamp", action="store_true", help="clamp by field bias")
    p.add_argument("--no-reuse", action="store_true", help="never reuse freed qubits")
    p.add_argument("--anneal", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--sweeps", type=int, default=200)
    _add_common(p, files=False)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("emit", help="write a penalty in a chosen format")
    p.add_argument("target", nargs="?", help="constraint text, gate:NAME, or op:NAME")
    p.add_argument(
        "--format",
        choices=("coord", "doc", "matrix", "matrix-upper"),
        default="coord",
    )
    p.add_argument("--offset", action="store_true", help="append offset to matrices")
    p.add_argument("--out", dest="out_path", help="write here instead of stdout")
    _add_common(p)
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("catalog", help="list gates and operations")
    _add_common(p, files=False)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("prove", help="prove quadratic-penalty (in)feasibility")
    p.add_argument("target", help="constraint text, gate:NAME, or op:NAME")
    p.add_argument("--vars", help="comma separated allowed variables")
    _add_common(p, files=False)
    p.set_defaults(func=cmd_prove)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if getattr(ns, "anneal", False) and ns.seed is None:
        parser.error("--anneal requires --seed")
    try:
        return ns.func(ns)
    except QubogatesError as err:
        print(f"error: {err}", file=sys.stderr)
        return _exit_code(err)


if __name__ == "__main__":
    sys.exit(main())
