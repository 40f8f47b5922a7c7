"""Staged execution of circuits over named wires.

A circuit text names its input wires, applies gates and constraints to
them, and declares output wires:

    input a b
    cnot control=a target=b -> r1
    cnot control=a target=r1 -> r2
    output r2

Each line is one algorithm step.  Clauses joined with `;` share a step.
Compilation assigns physical qubits, renames every clause's penalty
onto them, and enforces that a gate's qubits appear in no other clause
of the same step.  Execution solves the steps in order: known wire
values are clamped in, the unique ground state is read out, and qubits
that no longer carry information return to the allocator.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .boolops import eval_op
from .errors import (
    DuplicateNameError,
    ExclusivityError,
    MissingVariableError,
    NonUniqueGroundStateError,
    ParseError,
    UnsatisfiableRelationError,
)
from .gates import FieldPair, gate, hadamard_apply
from .hamiltonian import QuboMatrix, apply_clamp, penalty_to_qubo, qubo_to_ising
from .parse import (
    OpApplication,
    ParsedInequality,
    compile_constraint,
    parse_constraint,
)
from .pbf import Poly, Var, VarKind, all_assignments
from .penalty import Penalty
from .solver import SolveResult, solve_exhaustive

_WIRE_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")

# Wire roles of each gate, in the order of GateSpec.inputs.
_GATE_ROLES = {
    "cnot": ("target", "control"),
    "toffoli": ("c1", "c2", "t"),
    "fredkin": ("c", "i", "j"),
    "fredkin9": ("c", "i", "j"),
}


@dataclass(frozen=True)
class GateClause:
    gate_name: str
    roles: tuple[tuple[str, str], ...]  # (role, wire) pairs
    outs: tuple[str, ...]


@dataclass(frozen=True)
class ConstraintClause:
    text: str


Clause = GateClause | ConstraintClause


@dataclass(frozen=True)
class CircuitDescription:
    """Parsed circuit: input wires, steps of clauses, output wires."""

    inputs: tuple[str, ...]
    steps: tuple[tuple[Clause, ...], ...]
    outputs: tuple[str, ...]


def _parse_gate_clause(words: list[str], line_no: int) -> GateClause:
    name = words[0]
    roles = _GATE_ROLES[name]
    if "->" not in words:
        raise ParseError(f"gate {name} needs '-> wire'", line=line_no)
    arrow = words.index("->")
    seen: dict[str, str] = {}
    for w in words[1:arrow]:
        if "=" not in w:
            raise ParseError(f"expected role=wire, got {w!r}", line=line_no)
        role, _, wire = w.partition("=")
        if role not in roles:
            raise ParseError(
                f"gate {name} has roles {', '.join(roles)}; got {role!r}", line=line_no
            )
        if role in seen:
            raise ParseError(f"role {role!r} given twice", line=line_no)
        if not _WIRE_RE.match(wire):
            raise ParseError(f"bad wire name {wire!r}", line=line_no)
        seen[role] = wire
    missing = [r for r in roles if r not in seen]
    if missing:
        raise ParseError(f"gate {name} missing roles {', '.join(missing)}", line=line_no)
    outs = words[arrow + 1 :]
    if not outs:
        raise ParseError(f"gate {name} needs output wires after ->", line=line_no)
    for w in outs:
        if not _WIRE_RE.match(w):
            raise ParseError(f"bad wire name {w!r}", line=line_no)
    return GateClause(name, tuple((r, seen[r]) for r in roles), tuple(outs))


def parse_circuit(text: str) -> CircuitDescription:
    """Parse the line-oriented circuit format."""
    inputs: list[str] = []
    outputs: list[str] = []
    steps: list[tuple[Clause, ...]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "input":
            for w in line.split()[1:]:
                if not _WIRE_RE.match(w):
                    raise ParseError(f"bad wire name {w!r}", line=line_no)
                if w in inputs:
                    raise DuplicateNameError(f"input wire {w!r} declared twice")
                inputs.append(w)
            continue
        if head == "output":
            names = line.split()[1:]
            if not names:
                raise ParseError("output line names no wires", line=line_no)
            outputs.extend(names)
            continue
        clauses: list[Clause] = []
        for part in line.split(";"):
            part = part.strip()
            if not part:
                raise ParseError("empty clause", line=line_no)
            words = part.split()
            if words[0] in _GATE_ROLES:
                clauses.append(_parse_gate_clause(words, line_no))
            elif words[0] == "constraint":
                body = part[len("constraint") :].strip()
                if not body:
                    raise ParseError("constraint clause is empty", line=line_no)
                parse_constraint(body, line=line_no)  # fail fast with position
                clauses.append(ConstraintClause(body))
            else:
                raise ParseError(
                    f"unknown clause {words[0]!r} (gates: {', '.join(sorted(_GATE_ROLES))})",
                    line=line_no,
                )
        steps.append(tuple(clauses))
    desc = CircuitDescription(tuple(inputs), tuple(steps), tuple(outputs))
    _check_wiring(desc)
    return desc


def _constraint_wires(clause: ConstraintClause) -> set[str]:
    """Wire names a constraint touches (its slacks and ancillas are not wires)."""
    pen = compile_constraint(clause.text)
    return {
        v.name
        for v in pen.poly.variables()
        if v.kind in (VarKind.INPUT, VarKind.OUTPUT)
    }


def _check_wiring(desc: CircuitDescription) -> None:
    known = set(desc.inputs)
    for step in desc.steps:
        new: set[str] = set()
        for clause in step:
            if isinstance(clause, GateClause):
                g = gate(clause.gate_name)
                if len(clause.outs) != len(g.outputs):
                    raise ParseError(
                        f"gate {clause.gate_name} produces {len(g.outputs)} wires,"
                        f" got {len(clause.outs)}"
                    )
                for _, wire in clause.roles:
                    if wire not in known:
                        raise MissingVariableError(Var(wire))
                for w in clause.outs:
                    if w in known or w in new:
                        raise DuplicateNameError(f"wire {w!r} already defined")
                new.update(clause.outs)
            else:
                new.update(_constraint_wires(clause) - known)
        known |= new
    for w in desc.outputs:
        if w not in known:
            raise MissingVariableError(Var(w))


class Allocator:
    """Hands out physical qubits q0, q1, ...; freed ones may be reused.

    With reuse on, released qubits go back in the pool and the lowest
    index is handed out first, so allocation stays deterministic.
    """

    def __init__(self, *, reuse: bool = True, prefix: str = "q"):
        self.reuse = reuse
        self.prefix = prefix
        self._next = 0
        self._free: list[int] = []
        self._live: set[int] = set()

    def allocate(self) -> Var:
        if self.reuse and self._free:
            idx = heapq.heappop(self._free)
        else:
            idx = self._next
            self._next += 1
        self._live.add(idx)
        return Var(f"{self.prefix}{idx}", VarKind.INPUT)

    def release(self, v: Var) -> None:
        idx = int(v.name[len(self.prefix) :])
        if idx not in self._live:
            raise KeyError(f"{v.name} is not allocated")
        self._live.remove(idx)
        heapq.heappush(self._free, idx)

    @property
    def peak(self) -> int:
        return self._next


@dataclass(frozen=True)
class Stage:
    """One algorithm step, laid out on physical qubits."""

    index: int
    qubo: QuboMatrix
    penalties: tuple[Penalty, ...]
    in_wiring: tuple[tuple[str, Var], ...]  # wire -> clamped qubit
    out_wiring: tuple[tuple[str, Var], ...]  # wire -> qubit read from the ground state
    exclusive: frozenset[Var]
    freed: tuple[Var, ...]
    labels: tuple[str, ...]

    @property
    def variables(self) -> tuple[Var, ...]:
        return self.qubo.variables

    @property
    def expected_value(self) -> Fraction:
        """Ground value when every clause is satisfied."""
        return sum((Fraction(p.valid_value) for p in self.penalties), Fraction(0))


@dataclass
class _ClausePart:
    penalty: Penalty
    in_map: dict[str, Var]
    out_map: dict[str, Var]
    is_gate: bool
    freed: list[Var]
    label: str


def _constraint_penalty(clause: ConstraintClause, slack_mode: str) -> Penalty:
    pen = compile_constraint(clause.text, slack_mode=slack_mode)
    if not pen.satisfiable:
        raise UnsatisfiableRelationError(
            f"constraint {clause.text!r} has no satisfying assignment"
        )
    return pen


def compile_circuit(
    desc: CircuitDescription,
    *,
    reuse: bool = True,
    allocator: Allocator | None = None,
    slack_mode: str = "full",
) -> list[Stage]:
    """Lay the circuit out on physical qubits, one stage per step.

    Gate qubits are exclusive to their gate within a step: any other
    clause touching one is a compile error.  Qubits whose values carry
    no information after a step are released for later stages.
    """
    alloc = allocator if allocator is not None else Allocator(reuse=reuse)
    home: dict[str, Var] = {}
    known: set[str] = set(desc.inputs)

    def home_of(wire: str) -> Var:
        if wire not in home:
            home[wire] = alloc.allocate()
        return home[wire]

    stages: list[Stage] = []
    for index, step in enumerate(desc.steps):
        parts: list[_ClausePart] = []
        step_new: set[str] = set()

        for clause in step:
            if isinstance(clause, GateClause):
                g = gate(clause.gate_name)
                rename: dict[Var, Var] = {}
                in_map: dict[str, Var] = {}
                for (_, wire), template in zip(clause.roles, g.inputs):
                    phys = home_of(wire)
                    if phys in rename.values():
                        raise ExclusivityError(
                            f"wire {wire!r} feeds two roles of gate {clause.gate_name}"
                        )
                    rename[template] = phys
                    in_map[wire] = phys
                out_map: dict[str, Var] = {}
                for wire, template in zip(clause.outs, g.outputs):
                    phys = alloc.allocate()
                    rename[template] = phys
                    home[wire] = phys
                    out_map[wire] = phys
                    step_new.add(wire)
                for template in g.ancillas:
                    rename[template] = alloc.allocate()
                freed = [rename[t] for t in g.freed]
                label = "{} {} -> {}".format(
                    clause.gate_name,
                    " ".join(f"{r}={w}" for r, w in clause.roles),
                    " ".join(clause.outs),
                )
                parts.append(
                    _ClausePart(g.penalty.rename(rename), in_map, out_map, True, freed, label)
                )
            else:
                pen = _constraint_penalty(clause, slack_mode)
                rename = {}
                in_map = {}
                out_map = {}
                freed = []
                for v in sorted(pen.poly.variables(), key=Var.sort_key):
                    if v.kind in (VarKind.ANCILLA, VarKind.SLACK):
                        phys = alloc.allocate()
                        freed.append(phys)
                    elif v.name in known:
                        phys = home_of(v.name)
                        in_map[v.name] = phys
                    else:
                        phys = home_of(v.name)
                        out_map[v.name] = phys
                        step_new.add(v.name)
                    rename[v] = phys
                parts.append(
                    _ClausePart(pen.rename(rename), in_map, out_map, False, freed, clause.text)
                )

        # gates own their qubits for the duration of the step
        var_sets = [set(p.penalty.poly.variables()) for p in parts]
        for t, part in enumerate(parts):
            if not part.is_gate:
                continue
            for u, other in enumerate(var_sets):
                if u == t:
                    continue
                shared = var_sets[t] & other
                if shared:
                    v = min(shared, key=Var.sort_key)
                    wire = next((w for w, h in home.items() if h == v), v.name)
                    raise ExclusivityError(
                        f"stage {index}: qubit {v.name} (wire {wire!r}) of gate"
                        f" '{part.label}' is also used by another clause"
                    )

        poly = sum((p.penalty.poly for p in parts), start=Poly.zero())
        variables = tuple(sorted({v for s in var_sets for v in s}, key=Var.sort_key))
        in_wiring: dict[str, Var] = {}
        out_wiring: dict[str, Var] = {}
        freed_all: list[Var] = []
        for part in parts:
            in_wiring.update(part.in_map)
            out_wiring.update(part.out_map)
            freed_all.extend(part.freed)
        stages.append(
            Stage(
                index=index,
                qubo=penalty_to_qubo(poly, variables=variables),
                penalties=tuple(p.penalty for p in parts),
                in_wiring=tuple(sorted(in_wiring.items())),
                out_wiring=tuple(sorted(out_wiring.items())),
                exclusive=frozenset(
                    v for t, part in enumerate(parts) if part.is_gate for v in var_sets[t]
                ),
                freed=tuple(freed_all),
                labels=tuple(p.label for p in parts),
            )
        )

        known |= step_new
        for v in freed_all:
            alloc.release(v)
            for wire, h in list(home.items()):
                if h == v:
                    del home[wire]

    return stages


@dataclass(frozen=True)
class StageRun:
    """What happened when one stage was solved."""

    index: int
    clamps: tuple[tuple[str, int], ...]  # wire -> clamped bit
    value: Fraction
    outputs: tuple[tuple[str, int], ...]  # wire -> extracted bit
    freed: tuple[str, ...]  # physical qubit names released afterwards
    method: str
    stats: Mapping


@dataclass(frozen=True)
class PipelineTrace:
    """Full execution record: per-stage runs and final wire values."""

    runs: tuple[StageRun, ...]
    wire_values: tuple[tuple[str, int], ...]
    outputs: tuple[tuple[str, int], ...]

    def value_of(self, wire: str) -> int:
        for w, b in self.wire_values:
            if w == wire:
                return b
        raise MissingVariableError(Var(wire))


def run_pipeline(
    stages: Sequence[Stage],
    inputs: Mapping[str, int],
    solver: Callable[..., SolveResult] | None = None,
    *,
    outputs: Sequence[str] = (),
    clamp_style: str = "hard",
) -> PipelineTrace:
    """Execute stages in order, clamping each stage's wired inputs.

    Every stage must end in a unique ground state; its output qubits
    become wire values for later stages.  `clamp_style` is "hard"
    (variables fixed before solving) or "bias" (a dominating local
    field is added and the full model is solved, the spin-level route).
    """
    if clamp_style not in ("hard", "bias"):
        raise ValueError(f"clamp_style must be 'hard' or 'bias', got {clamp_style!r}")
    solve = solver if solver is not None else solve_exhaustive
    values: dict[str, int] = {}
    for wire, bit in inputs.items():
        if bit not in (0, 1):
            raise ValueError(f"input {wire!r} must be 0 or 1, got {bit!r}")
        values[wire] = bit

    runs: list[StageRun] = []
    for stage in stages:
        missing = [wire for wire, _ in stage.in_wiring if wire not in values]
        if missing:
            raise MissingVariableError(Var(missing[0]))
        clamp_bits = {phys: values[wire] for wire, phys in stage.in_wiring}

        if clamp_style == "hard":
            result = solve(stage.qubo, clamp_bits)
        else:
            ising = qubo_to_ising(stage.qubo)
            for phys, bit in clamp_bits.items():
                ising = apply_clamp(ising, phys, 1 if bit else -1)
            result = solve(ising)

        if len(result.states) != 1:
            raise NonUniqueGroundStateError(
                f"stage {stage.index} has {len(result.states)} ground states;"
                " outputs are undefined",
                minimizers=result.states,
            )
        state = result.states[0].to_bool().as_mapping()
        for phys, bit in clamp_bits.items():
            if state[phys] != bit:
                raise NonUniqueGroundStateError(
                    f"stage {stage.index} ground state moved clamped qubit {phys.name}"
                )
        achieved = stage.qubo.value([state[v] for v in stage.qubo.variables])
        if achieved != stage.expected_value:
            raise UnsatisfiableRelationError(
                f"stage {stage.index} ({'; '.join(stage.labels)}) settled at value"
                f" {achieved} instead of {stage.expected_value}: a clause is"
                " unsatisfied at these inputs (or an inexact solver missed the"
                " ground state)"
            )
        extracted = []
        for wire, phys in stage.out_wiring:
            values[wire] = state[phys]
            extracted.append((wire, state[phys]))
        runs.append(
            StageRun(
                index=stage.index,
                clamps=tuple(sorted((w, values[w]) for w, _ in stage.in_wiring)),
                value=result.value,
                outputs=tuple(extracted),
                freed=tuple(v.name for v in stage.freed),
                method=result.method,
                stats=dict(result.stats),
            )
        )

    wire_values = tuple(sorted(values.items()))
    missing = [w for w in outputs if w not in values]
    if missing:
        raise MissingVariableError(Var(missing[0]))
    outs = tuple((w, values[w]) for w in outputs)
    return PipelineTrace(tuple(runs), wire_values, outs)


def run_circuit(
    desc: CircuitDescription,
    inputs: Mapping[str, int],
    solver: Callable[..., SolveResult] | None = None,
    *,
    reuse: bool = True,
    clamp_style: str = "hard",
    slack_mode: str = "full",
) -> PipelineTrace:
    """Compile and execute in one call, exposing the declared outputs."""
    missing = [w for w in desc.inputs if w not in inputs]
    if missing:
        raise MissingVariableError(Var(missing[0]))
    stages = compile_circuit(desc, reuse=reuse, slack_mode=slack_mode)
    return run_pipeline(
        stages, inputs, solver, outputs=desc.outputs, clamp_style=clamp_style
    )


def evaluate_classically(
    desc: CircuitDescription, inputs: Mapping[str, int]
) -> dict[str, int]:
    """Evaluate the circuit with ordinary logic, no Hamiltonians.

    Gates follow their truth tables.  An equation constraint must pin
    its unknown wires to exactly one bit pattern; inequalities must
    hold over already-known wires.
    """
    values: dict[str, int] = {w: int(inputs[w]) for w in desc.inputs}
    for step in desc.steps:
        new: dict[str, int] = {}
        for clause in step:
            if isinstance(clause, GateClause):
                g = gate(clause.gate_name)
                in_bits = tuple(values[w] for _, w in clause.roles)
                out_bits = g.truth[in_bits]
                new.update(zip(clause.outs, out_bits))
                continue
            parsed = parse_constraint(clause.text)
            if isinstance(parsed, OpApplication):
                bits = tuple(values[w] for w in parsed.inputs)
                new[parsed.output] = eval_op(parsed.op, bits)
            elif isinstance(parsed, ParsedInequality):
                total = sum(values[w] for w in parsed.variables)
                ok = total <= parsed.bound if parsed.sense == "<=" else total >= parsed.bound
                if not ok:
                    raise UnsatisfiableRelationError(
                        f"{clause.text!r} fails on the current wire values"
                    )
            else:
                diff = parsed.lhs - parsed.rhs
                unknown = sorted(
                    (v for v in diff.variables() if v.name not in values),
                    key=Var.sort_key,
                )
                fixed = {
                    v: values[v.name] for v in diff.variables() if v.name in values
                }
                hits = []
                for asg in all_assignments(unknown):
                    full = dict(fixed)
                    full.update(asg.as_mapping())
                    if diff.evaluate(full) == 0:
                        hits.append(asg)
                if len(hits) != 1:
                    raise NonUniqueGroundStateError(
                        f"{clause.text!r} admits {len(hits)} solutions on the"
                        " current wire values",
                        minimizers=tuple(hits),
                    )
                new.update({v.name: b for v, b in hits[0].as_mapping().items()})
        values.update(new)
    return values


# -- field-pair stage ---------------------------------------------------------------


@dataclass(frozen=True)
class HadamardStage:
    """Between-stage field rotation and the qubits it occupies."""

    fields_in: FieldPair
    fields_out: FieldPair
    qubits: tuple[Var, ...]


def hadamard_stage(
    f: FieldPair, *, allocator: Allocator | None = None, reuse: bool = True
) -> HadamardStage:
    """Rotate a normalized field pair into the next stage.

    With qubit reuse the output fields land on the input qubits (two
    in total); without it a separate output pair is allocated (four).
    """
    alloc = allocator if allocator is not None else Allocator(reuse=reuse)
    qin = (alloc.allocate(), alloc.allocate())
    out = hadamard_apply(f)
    if reuse:
        return HadamardStage(f, out, qin)
    qout = (alloc.allocate(), alloc.allocate())
    return HadamardStage(f, out, qin + qout)
