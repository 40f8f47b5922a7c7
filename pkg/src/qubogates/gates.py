"""Reversible logic gates as verified penalty Hamiltonians.

Each gate is assembled from the general compiler machinery, never
hand-entered: the controlled-not is the exclusive-or penalty, the
doubly-controlled-not adds a product ancilla for its control pair, and
the controlled-swap squares its two output equations and quadratizes
the cubic terms.  Construction verifies the combined penalty against
the gate's full valid set (truth-table rows extended with consistent
ancillas) and checks that the truth table is reversible.

Clamping a gate's data inputs to any row leaves a unique ground state,
at value zero, that reads off the remaining qubits; `freed` names the
qubits that carry no information afterwards and may be reallocated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .boolops import BoolOp, ValidSet
from .errors import GapVerificationError, NormalizationError
from .hamiltonian import penalty_to_qubo
from .pbf import Poly, Var, VarKind
from .penalty import (
    AncillaBinding,
    Penalty,
    builtin_penalty,
    equation_to_penalty,
    quadratize,
    VAR_A,
    VAR_I,
    VAR_J,
    VAR_K,
)


@dataclass(frozen=True)
class GateSpec:
    """A gate: verified penalty, qubit roles, and reversible truth table.

    `inputs` are clamped when the gate executes; `outputs` hold the
    result; `ancillas` are work qubits.  `carriers` still mean something
    after execution and `freed` lists every other qubit, available for
    reuse by later stages.
    """

    name: str
    penalty: Penalty
    inputs: tuple[Var, ...]
    outputs: tuple[Var, ...]
    ancillas: tuple[Var, ...]
    carriers: tuple[Var, ...]
    freed: tuple[Var, ...]
    truth: Mapping[tuple[int, ...], tuple[int, ...]]
    notes: str = ""

    def __post_init__(self):
        if self.penalty.valid_value != 0:
            raise GapVerificationError(
                f"gate {self.name} penalty floor is {self.penalty.valid_value}, not 0"
            )
        carried_inputs = tuple(v for v in self.inputs if v in self.carriers)
        images = set()
        for in_bits, out_bits in self.truth.items():
            carried = tuple(in_bits[self.inputs.index(v)] for v in carried_inputs)
            images.add(carried + tuple(out_bits))
        if len(images) != len(self.truth):
            raise ValueError(f"gate {self.name} truth table is not reversible")

    @property
    def variables(self) -> tuple[Var, ...]:
        return self.penalty.variables

    def qubits(self) -> int:
        return len(self.variables)


def _gate_valid_set(
    variables: Sequence[Var],
    inputs: Sequence[Var],
    truth: Mapping[tuple[int, ...], tuple[int, ...]],
    outputs: Sequence[Var],
    ancilla_defs: Sequence[tuple[Var, tuple[Var, Var]]],
) -> ValidSet:
    """Valid rows: truth table extended with consistent ancilla products."""
    ordered = tuple(sorted(variables, key=Var.sort_key))
    members = []
    for in_bits, out_bits in truth.items():
        values: dict[Var, int] = dict(zip(inputs, in_bits))
        values.update(zip(outputs, out_bits))
        for anc, (u, w) in ancilla_defs:
            values[anc] = values[u] * values[w]
        members.append(tuple(values[v] for v in ordered))
    return ValidSet(ordered, frozenset(members))


def _verified_gate_penalty(
    poly: Poly,
    valid: ValidSet,
    ancillas: tuple[AncillaBinding, ...],
    provenance: str,
) -> Penalty:
    return Penalty(
        poly=poly,
        valid_set=valid,
        valid_value=Fraction(0),
        ancillas=ancillas,
        provenance=provenance,
    )


# -- controlled not -----------------------------------------------------------------


def cnot_gate() -> GateSpec:
    """Controlled-not on 4 qubits: target i, control j, result k, ancilla a.

    The penalty is exactly the exclusive-or penalty: k = i xor j with
    the ancilla pinned to i*j.  After execution the control and result
    carry the information; target and ancilla are freed.
    """
    base = builtin_penalty(BoolOp.XOR)
    i, j, k, a = VAR_I, VAR_J, VAR_K, VAR_A
    truth = {
        (ti, tj): ((ti + tj) % 2,) for ti in (1, 0) for tj in (1, 0)
    }
    return GateSpec(
        name="cnot",
        penalty=Penalty(
            poly=base.poly,
            valid_set=base.valid_set,
            valid_value=base.valid_value,
            ancillas=base.ancillas,
            provenance="gate:cnot",
        ),
        inputs=(i, j),
        outputs=(k,),
        ancillas=(a,),
        carriers=(j, k),
        freed=(i, a),
        truth=truth,
        notes="result k = target i xor control j; ancilla a = i*j",
    )


# -- doubly controlled not ----------------------------------------------------------


def toffoli_gate() -> GateSpec:
    """Doubly-controlled-not on 6 qubits: c1, c2, t, r and ancillas a, b.

    Built as the sum of an exclusive-or penalty on (b, t) -> r with its
    product ancilla a, and an and-penalty pinning b = c1 * c2.
    """
    c1, c2, t = Var("c1"), Var("c2"), Var("t")
    r = Var("r", VarKind.OUTPUT)
    a, b = Var("a", VarKind.ANCILLA), Var("b", VarKind.ANCILLA)

    xor_part = builtin_penalty(BoolOp.XOR).rename({VAR_I: b, VAR_J: t, VAR_K: r, VAR_A: a})
    and_part = builtin_penalty(BoolOp.AND).rename({VAR_I: c1, VAR_J: c2, VAR_K: b})
    poly = xor_part.poly + and_part.poly

    truth = {
        (x1, x2, xt): ((xt + x1 * x2) % 2,)
        for x1 in (1, 0)
        for x2 in (1, 0)
        for xt in (1, 0)
    }
    ancilla_defs = [(b, (c1, c2)), (a, (b, t))]
    valid = _gate_valid_set((c1, c2, t, r, a, b), (c1, c2, t), truth, (r,), ancilla_defs)
    bindings = (
        AncillaBinding(b, (c1, c2), Fraction(1), 1),
        AncillaBinding(a, (b, t), Fraction(4), 1),
    )
    return GateSpec(
        name="toffoli",
        penalty=_verified_gate_penalty(poly, valid, bindings, "gate:toffoli"),
        inputs=(c1, c2, t),
        outputs=(r,),
        ancillas=(a, b),
        carriers=(c1, c2, r),
        freed=(t, a, b),
        truth=truth,
        notes="result r = t xor (c1 and c2); b = c1*c2, a = b*t",
    )


# -- controlled swap ----------------------------------------------------------------


def _fredkin_equations() -> tuple[Poly, Poly, Poly, Poly, tuple[Var, ...]]:
    c, i, j = Var("c"), Var("i"), Var("j")
    m = Var("m", VarKind.OUTPUT)
    p = Var("p", VarKind.OUTPUT)
    pc, pi, pj = (Poly.variable(v) for v in (c, i, j))
    pm, pp = Poly.variable(m), Poly.variable(p)
    m_rhs = (1 - pc) * pi + pc * pj
    p_rhs = pc * pi + (1 - pc) * pj
    return pm, m_rhs, pp, p_rhs, (c, i, j, m, p)


_FREDKIN_TRUTH = {
    (xc, xi, xj): ((xj, xi) if xc else (xi, xj))
    for xc in (1, 0)
    for xi in (1, 0)
    for xj in (1, 0)
}


def fredkin_penalty_parts(
    binding_weight: Fraction | int | None = None,
) -> tuple[Poly, ValidSet, tuple[AncillaBinding, ...]]:
    """Unverified controlled-swap penalty with a chosen binding weight.

    The default weight (each ancilla replaced two cubic terms, so 2)
    verifies; weight 1 does not, which is exactly why the bindings are
    counted once per replaced term.  Exposed separately so that failure
    can be demonstrated without constructing a Penalty.
    """
    pm, m_rhs, pp, p_rhs, (c, i, j, m, p) = _fredkin_equations()
    a = Var("a", VarKind.ANCILLA)
    b = Var("b", VarKind.ANCILLA)
    m_core, _ = ((pm - m_rhs) * (pm - m_rhs)).drop_offset()
    p_core, _ = ((pp - p_rhs) * (pp - p_rhs)).drop_offset()
    m_quad, m_binds = quadratize(m_core, binding_weight, name_for=lambda pair, t: a)
    p_quad, p_binds = quadratize(p_core, binding_weight, name_for=lambda pair, t: b)
    poly = m_quad + p_quad
    ancilla_defs = [(bd.var, bd.factors) for bd in (*m_binds, *p_binds)]
    valid = _gate_valid_set(
        (c, i, j, m, p, a, b), (c, i, j), _FREDKIN_TRUTH, (m, p), ancilla_defs
    )
    return poly, valid, (*m_binds, *p_binds)


def fredkin_gate() -> GateSpec:
    """Controlled-swap on 7 qubits: c, i, j, outputs m, p, ancillas a, b.

    With control c the outputs are m = (1-c)i + cj and p = ci + (1-c)j.
    Each squared output equation leaves two cubic terms sharing the
    product c*m (resp. c*p); one ancilla replaces both, and its binding
    is counted once per replaced term, hence weight two.
    """
    poly, valid, bindings = fredkin_penalty_parts(None)
    c, i, j, m, p = valid.vars[:5]
    return GateSpec(
        name="fredkin",
        penalty=_verified_gate_penalty(poly, valid, bindings, "gate:fredkin"),
        inputs=(c, i, j),
        outputs=(m, p),
        ancillas=tuple(b.var for b in bindings),
        carriers=(c, m, p),
        freed=(i, j) + tuple(b.var for b in bindings),
        truth=_FREDKIN_TRUTH,
        notes="m,p swap i,j when c = 1; ancillas a = c*m, b = c*p",
    )


def fredkin_gate_9x9() -> GateSpec:
    """Controlled-swap with the alternative four-ancilla quadratization.

    Instead of pairing the control with each output, the ancillas stand
    for the four input*output products d = i*m, e = j*m, f = i*p,
    g = j*p, giving a 9-qubit penalty.  Each ancilla replaces a single
    cubic term, and the default binding weight of one fails
    verification; the construction escalates to the weight that passes.
    """
    pm, m_rhs, pp, p_rhs, (c, i, j, m, p) = _fredkin_equations()
    d, e = Var("d", VarKind.ANCILLA), Var("e", VarKind.ANCILLA)
    f, g = Var("f", VarKind.ANCILLA), Var("g", VarKind.ANCILLA)

    m_pen = equation_to_penalty(
        pm,
        m_rhs,
        prefer_pairs=[(i, m), (j, m)],
        name_for=lambda pair, t: (d, e)[t],
        provenance="gate:fredkin9:m",
    )
    p_pen = equation_to_penalty(
        pp,
        p_rhs,
        prefer_pairs=[(i, p), (j, p)],
        name_for=lambda pair, t: (f, g)[t],
        provenance="gate:fredkin9:p",
    )
    poly = m_pen.poly + p_pen.poly
    bindings = m_pen.ancillas + p_pen.ancillas
    ancilla_defs = [(bd.var, bd.factors) for bd in bindings]
    valid = _gate_valid_set(
        (c, i, j, m, p, d, e, f, g), (c, i, j), _FREDKIN_TRUTH, (m, p), ancilla_defs
    )
    return GateSpec(
        name="fredkin9",
        penalty=_verified_gate_penalty(poly, valid, bindings, "gate:fredkin9"),
        inputs=(c, i, j),
        outputs=(m, p),
        ancillas=(d, e, f, g),
        carriers=(c, m, p),
        freed=(i, j, d, e, f, g),
        truth=_FREDKIN_TRUTH,
        notes="four-ancilla variant: d=i*m, e=j*m, f=i*p, g=j*p",
    )


# -- gate execution helpers ----------------------------------------------------------


def apply_gate(gate: GateSpec, in_bits: Sequence[int], solver=None) -> tuple[int, ...]:
    """Clamp the inputs, minimize, and read the outputs.

    Requires (and checks) a unique ground state at value zero.
    """
    from .solver import solve_exhaustive

    solve = solver or solve_exhaustive
    q = penalty_to_qubo(gate.penalty.poly, variables=gate.variables)
    clamps = dict(zip(gate.inputs, in_bits))
    result = solve(q, clamps)
    if len(result.states) != 1:
        raise GapVerificationError(
            f"gate {gate.name} on {tuple(in_bits)} has {len(result.states)} ground states"
        )
    if result.value != 0:
        raise GapVerificationError(
            f"gate {gate.name} on {tuple(in_bits)} has ground value {result.value}"
        )
    state = result.states[0].as_mapping()
    return tuple(state[v] for v in gate.outputs)


@dataclass(frozen=True)
class ReverseCheck:
    """Forward-then-backward run of a gate over every input row."""

    gate: str
    rows: tuple[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]], ...]
    recovered: bool


def reverse_check(gate: GateSpec, solver=None) -> ReverseCheck:
    """Feed each row's outputs back in and confirm the inputs reappear.

    Carried inputs (controls) keep their values; the other inputs take
    the forward outputs, position by position.
    """
    moving = [v for v in gate.inputs if v not in gate.carriers]
    if len(moving) != len(gate.outputs):
        raise ValueError(f"gate {gate.name} does not pair outputs with moving inputs")
    rows = []
    ok = True
    for in_bits in sorted(gate.truth, reverse=True):
        out_bits = apply_gate(gate, in_bits, solver)
        back: list[int] = []
        for v in gate.inputs:
            if v in gate.carriers:
                back.append(in_bits[gate.inputs.index(v)])
            else:
                back.append(out_bits[moving.index(v)])
        recovered = apply_gate(gate, tuple(back), solver)
        expect = tuple(in_bits[gate.inputs.index(v)] for v in moving)
        rows.append((in_bits, out_bits, recovered))
        if recovered != expect:
            ok = False
    return ReverseCheck(gate.name, tuple(rows), ok)


def coefficient_range(poly: Poly) -> tuple[Fraction, Fraction]:
    """Smallest and largest nonconstant coefficient of a polynomial."""
    coeffs = [c for mono, c in poly.terms() if mono]
    if not coeffs:
        return Fraction(0), Fraction(0)
    return min(coeffs), max(coeffs)


# -- field-pair transform -------------------------------------------------------------

_NORM_TOL = 1e-12
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class FieldPair:
    """A normalized pair of local fields carried between stages."""

    hi: float
    hj: float

    def __post_init__(self):
        norm = self.hi * self.hi + self.hj * self.hj
        if abs(norm - 1.0) > _NORM_TOL:
            raise NormalizationError(
                f"field pair ({self.hi}, {self.hj}) has squared norm {norm}"
            )


def hadamard_apply(f: FieldPair) -> FieldPair:
    """Rotate a field pair: ((hi + hj), (hi - hj)) / sqrt(2).

    Applying it twice returns the original pair (within float accuracy);
    (1, 0) maps to (1/sqrt2, 1/sqrt2) and (0, 1) to (1/sqrt2, -1/sqrt2).
    """
    return FieldPair((f.hi + f.hj) / _SQRT2, (f.hi - f.hj) / _SQRT2)


def state_one_penalty(v: Var) -> Poly:
    """Bias term -x that favors holding qubit v in state one.

    This is the penalty route for pinning the qubit a field pair sits
    on, the alternative to balancing couplers in hardware.
    """
    return -Poly.variable(v)


# -- catalog ---------------------------------------------------------------------------

_GATE_BUILDERS: dict[str, Callable[[], GateSpec]] = {
    "cnot": cnot_gate,
    "toffoli": toffoli_gate,
    "fredkin": fredkin_gate,
    "fredkin9": fredkin_gate_9x9,
}

GATE_NAMES = ("cnot", "toffoli", "fredkin", "fredkin9", "hadamard")


def gate(name: str) -> GateSpec:
    """Look up a penalty gate by catalog name."""
    try:
        return _GATE_BUILDERS[name]()
    except KeyError:
        raise KeyError(
            f"unknown gate {name!r}; penalty gates are {sorted(_GATE_BUILDERS)}"
        ) from None
