"""Compile relations into quadratic penalty functions and verify them.

A penalty function for a relation takes one common value v on every
assignment satisfying the relation and at least v + 1 on every assignment
violating it.  The gap of at least 1 is checked exactly, by enumerating
all 2^n assignments, before a Penalty object can exist.  Joint output and
ancilla falsifications are covered automatically because the enumeration
is over every variable.

Equations compile by moving everything to one side, squaring, reducing
with x*x = x, and discarding the constant term (recorded, never lost).
Inequalities first gain binary slack variables.  Degree three and higher
terms are removed by substituting an ancilla for a variable product
inside those terms only, never inside existing quadratic terms, with a
weighted penalty binding the ancilla to the product it stands for.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .boolops import BoolOp, ValidSet, arity, eval_op, relation_of
from .errors import (
    DegreeError,
    GapVerificationError,
    InfeasibleBoundError,
    SolverLimitError,
)
from .pbf import Poly, Rational, Var, VarKind

DEFAULT_ENUMERATION_LIMIT = 24
_TABLE_KEEP_LIMIT = 16
_WEIGHT_ESCALATION_CAP = 16


def enumeration_limit() -> int:
    """Variable cap for exhaustive scans, overridable by environment."""
    raw = os.environ.get("QUBOGATES_EXHAUSTIVE_LIMIT")
    if raw is None:
        return DEFAULT_ENUMERATION_LIMIT
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_ENUMERATION_LIMIT


# -- gap verification -----------------------------------------------------------


@dataclass(frozen=True)
class GapRow:
    bits: tuple[int, ...]
    value: Fraction
    is_valid: bool


@dataclass(frozen=True)
class GapReport:
    """Outcome of exhaustive penalty verification.

    `rows` lists every assignment (inputs descending) when the variable
    count is small enough to keep; `rows_complete` says whether it does.
    `violations` holds the offending rows when verification fails.
    """

    vars: tuple[Var, ...]
    valid_value: Fraction | None
    min_invalid: Fraction | None
    gap: Fraction | None
    passed: bool
    rows: tuple[GapRow, ...]
    rows_complete: bool
    violations: tuple[GapRow, ...] = ()

    def render(self, order: str = "binary-desc") -> str:
        """Assignment table in the style of the worked truth tables.

        order="binary-desc" lists assignments descending; "valid-first"
        lists satisfying rows first, each group descending.
        """
        if not self.rows_complete:
            raise ValueError("assignment table was not retained for this report")
        rows = list(self.rows)
        if order == "valid-first":
            rows = [r for r in rows if r.is_valid] + [r for r in rows if not r.is_valid]
        elif order != "binary-desc":
            raise ValueError(f"unknown row order {order!r}")
        header = [v.name for v in self.vars] + ["valid", "value"]
        lines = ["\t".join(header)]
        for r in rows:
            lines.append(
                "\t".join([str(b) for b in r.bits] + ["true" if r.is_valid else "false", str(r.value)])
            )
        return "\n".join(lines) + "\n"


def verify_gap(
    poly: Poly,
    valid: ValidSet,
    *,
    limit: int | None = None,
    keep_table: bool | None = None,
) -> GapReport:
    """Exhaustively check the penalty condition for `poly` against `valid`.

    Passes when every valid assignment takes one common value v and every
    other assignment takes at least v + 1.  The scan covers all 2^n
    assignments of the valid set's variables, which must include every
    variable of the polynomial.
    """
    cap = enumeration_limit() if limit is None else limit
    vs = valid.vars
    n = len(vs)
    if n > cap:
        raise SolverLimitError(f"verification over {n} variables exceeds the limit of {cap}")
    missing = set(poly.variables()) - set(vs)
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise ValueError(f"penalty mentions variables outside the valid set: {names}")

    index = {v: t for t, v in enumerate(vs)}
    masked: list[tuple[int, Fraction]] = []
    const = Fraction(0)
    for mono, coeff in poly.terms():
        if not mono:
            const += coeff
            continue
        mask = 0
        for v in mono:
            mask |= 1 << (n - 1 - index[v])
        masked.append((mask, coeff))

    keep = (n <= _TABLE_KEEP_LIMIT) if keep_table is None else keep_table
    rows: list[GapRow] = []
    valid_values: set[Fraction] = set()
    first_valid: Fraction | None = None
    min_invalid: Fraction | None = None
    worst: list[GapRow] = []

    for code in range(2 ** n - 1, -1, -1):
        value = const
        for mask, coeff in masked:
            if code & mask == mask:
                value += coeff
        bits = tuple((code >> (n - 1 - t)) & 1 for t in range(n))
        is_valid = bits in valid.members
        if is_valid:
            valid_values.add(value)
            if first_valid is None:
                first_valid = value
        else:
            if min_invalid is None or value < min_invalid:
                min_invalid = value
        if keep:
            rows.append(GapRow(bits, value, is_valid))

    if not valid.members:
        return GapReport(vs, None, min_invalid, None, False, tuple(rows), keep, ())

    if len(valid_values) > 1:
        v = min(valid_values)
        if keep:
            worst = [r for r in rows if r.is_valid and r.value != v]
        return GapReport(vs, v, min_invalid, None, False, tuple(rows), keep, tuple(worst))

    v = first_valid
    gap = None if min_invalid is None else min_invalid - v
    passed = gap is None or gap >= 1
    if not passed and keep:
        worst = [r for r in rows if not r.is_valid and r.value < v + 1]
    return GapReport(vs, v, min_invalid, gap, passed, tuple(rows), keep, tuple(worst))


# -- penalties --------------------------------------------------------------------


@dataclass(frozen=True)
class AncillaBinding:
    """An ancilla standing for a product of two variables.

    `weight` scales the penalty term that pins the ancilla to its product;
    `replaced` counts the degree >= 3 terms it was substituted into.
    """

    var: Var
    factors: tuple[Var, Var]
    weight: Fraction
    replaced: int


def and_binding(u: Var, w: Var, anc: Var) -> Poly:
    """Penalty pinning anc = u * w: u*w - 2*(u + w)*anc + 3*anc."""
    pu, pw, pa = Poly.variable(u), Poly.variable(w), Poly.variable(anc)
    return pu * pw - 2 * (pu + pw) * pa + 3 * pa


@dataclass(frozen=True)
class Penalty:
    """A verified quadratic penalty for a set of valid assignments.

    Construction runs exhaustive verification and refuses to produce an
    object whose gap condition fails (except when `satisfiable` is False,
    the accepted-but-flagged case for relations with no binary solution,
    where no valid assignment exists to anchor a gap).
    """

    poly: Poly
    valid_set: ValidSet
    valid_value: Fraction
    dropped_offset: Fraction = Fraction(0)
    ancillas: tuple[AncillaBinding, ...] = ()
    satisfiable: bool = True
    provenance: str = ""

    def __post_init__(self):
        if self.poly.degree() > 2:
            raise DegreeError(f"penalty degree {self.poly.degree()} exceeds 2")
        if not self.satisfiable:
            object.__setattr__(self, "report", None)
            return
        report = verify_gap(self.poly, self.valid_set)
        if not report.passed:
            raise GapVerificationError(
                "penalty failed exhaustive gap verification", report=report
            )
        if report.valid_value != self.valid_value:
            raise GapVerificationError(
                f"declared valid value {self.valid_value} but enumeration found "
                f"{report.valid_value}",
                report=report,
            )
        object.__setattr__(self, "report", report)

    @property
    def variables(self) -> tuple[Var, ...]:
        return self.valid_set.vars

    def rename(self, mapping: Mapping[Var, Var]) -> "Penalty":
        """Rebuild the penalty over renamed variables (re-verified)."""
        new_vars = tuple(mapping.get(v, v) for v in self.valid_set.vars)
        if len(set(new_vars)) != len(new_vars):
            raise ValueError("rename collapsed two penalty variables")
        order = sorted(range(len(new_vars)), key=lambda t: new_vars[t].sort_key())
        vs = tuple(new_vars[t] for t in order)
        members = frozenset(tuple(bits[t] for t in order) for bits in self.valid_set.members)
        return Penalty(
            poly=self.poly.rename(mapping),
            valid_set=ValidSet(vs, members),
            valid_value=self.valid_value,
            dropped_offset=self.dropped_offset,
            ancillas=tuple(
                AncillaBinding(
                    mapping.get(b.var, b.var),
                    (mapping.get(b.factors[0], b.factors[0]), mapping.get(b.factors[1], b.factors[1])),
                    b.weight,
                    b.replaced,
                )
                for b in self.ancillas
            ),
            satisfiable=self.satisfiable,
            provenance=self.provenance,
        )


# -- built-in penalties (fixed templates) ----------------------------------------

VAR_I = Var("i", VarKind.INPUT)
VAR_J = Var("j", VarKind.INPUT)
VAR_K = Var("k", VarKind.OUTPUT)
VAR_A = Var("a", VarKind.ANCILLA)

_BUILTIN_OPS = (
    BoolOp.COPY,
    BoolOp.NOT,
    BoolOp.AND,
    BoolOp.OR,
    BoolOp.IMPLIES,
    BoolOp.XOR,
    BoolOp.EQUIV,
)


def _builtin_poly(op: BoolOp) -> tuple[Poly, tuple[AncillaBinding, ...]]:
    i, j, k, a = (Poly.variable(v) for v in (VAR_I, VAR_J, VAR_K, VAR_A))
    bind3 = AncillaBinding(VAR_A, (VAR_I, VAR_J), Fraction(3), 1)
    bind4 = AncillaBinding(VAR_A, (VAR_I, VAR_J), Fraction(4), 1)
    if op is BoolOp.COPY:
        return -2 * i * k + i + k, ()
    if op is BoolOp.NOT:
        return 2 * i * k - i - k, ()
    if op is BoolOp.AND:
        return i * j - 2 * (i + j) * k + 3 * k, ()
    if op is BoolOp.OR:
        return i * j + (i + j) * (1 - 2 * k) + k, ()
    if op is BoolOp.IMPLIES:
        return (
            4 * i * j + 2 * i * k - 6 * (i + j) * a - 2 * k * a - i - k + 9 * a,
            (bind3,),
        )
    if op is BoolOp.XOR:
        return (
            2 * i * j - 2 * (i + j) * k - 4 * (i + j) * a + 4 * k * a + i + j + k + 4 * a,
            (bind4,),
        )
    if op is BoolOp.EQUIV:
        return (
            2 * i * j + 2 * (i + j) * k - 4 * (i + j) * a - 4 * k * a - i - j - k + 8 * a,
            (bind4,),
        )
    raise KeyError(op)


def builtin_penalty(op: BoolOp) -> Penalty:
    """The fixed penalty for one of COPY, NOT, AND, OR, IMPLIES, XOR, EQUIV.

    Template variables are inputs i (and j), output k, and ancilla a
    where the operation needs one.  Other operations have no fixed
    template and compile through the equation route; see op_penalty.
    """
    if op not in _BUILTIN_OPS:
        raise KeyError(f"{op.value} has no fixed penalty; use op_penalty")
    poly, bindings = _builtin_poly(op)
    inputs = (VAR_I, VAR_J)[: arity(op)]
    valid = relation_of(op, VAR_K, inputs, [(b.var, b.factors) for b in bindings])
    report = verify_gap(poly, valid)
    if not report.passed:
        raise GapVerificationError(f"builtin {op.value} penalty failed", report=report)
    return Penalty(
        poly=poly,
        valid_set=valid,
        valid_value=report.valid_value,
        ancillas=bindings,
        provenance=f"builtin:{op.value}",
    )


def _op_equation(op: BoolOp, output: Var, inputs: Sequence[Var]) -> tuple[Poly, Poly]:
    """Algebraic equation output = f(inputs) for column and constant ops."""
    one = Poly.constant(1)
    k = Poly.variable(output)
    if op is BoolOp.CONST0:
        return k, Poly.zero()
    if op is BoolOp.CONST1:
        return k, one
    if op is BoolOp.COPY:
        return k, Poly.variable(inputs[0])
    if op is BoolOp.NOT:
        return k, one - Poly.variable(inputs[0])
    i, j = (Poly.variable(v) for v in inputs)
    if op is BoolOp.AND:
        return k, i * j
    if op is BoolOp.OR:
        return k, i + j - i * j
    if op is BoolOp.XOR:
        return k, i + j - 2 * i * j
    if op is BoolOp.EQUIV:
        return k, one - i - j + 2 * i * j
    if op is BoolOp.IMPLIES:
        return k, one - i + i * j
    if op is BoolOp.A:
        return k, one - i - j + i * j
    if op is BoolOp.B:
        return k, one - i * j
    if op is BoolOp.C:
        return k, one - j + i * j
    if op is BoolOp.D:
        return k, j - i * j
    if op is BoolOp.E:
        return k, i - i * j
    raise KeyError(op)


def _fresh_ancilla_namer(taken: Iterable[str]) -> Callable[[tuple[Var, Var], int], Var]:
    used = set(taken)

    def namer(pair: tuple[Var, Var], n: int) -> Var:
        for letter in "abcdefgh":
            if letter not in used:
                used.add(letter)
                return Var(letter, VarKind.ANCILLA)
        t = 0
        while f"anc{t}" in used:
            t += 1
        used.add(f"anc{t}")
        return Var(f"anc{t}", VarKind.ANCILLA)

    return namer


def op_penalty(op: BoolOp, output: Var, inputs: Sequence[Var]) -> Penalty:
    """Penalty for output = op(inputs) over caller-chosen variables.

    Operations with a fixed template are renamed from it; the unnamed
    columns A through E and the constants compile through their algebraic
    equations, gaining an ancilla where squaring produces cubic terms.
    """
    if len(inputs) != arity(op):
        raise ValueError(f"{op.value} takes {arity(op)} inputs, got {len(inputs)}")
    if op in _BUILTIN_OPS:
        base = builtin_penalty(op)
        mapping: dict[Var, Var] = {VAR_K: output}
        for tpl, actual in zip((VAR_I, VAR_J), inputs):
            mapping[tpl] = actual
        if base.ancillas:
            taken = {v.name for v in inputs} | {output.name}
            mapping[VAR_A] = _fresh_ancilla_namer(taken)((VAR_I, VAR_J), 0)
        renamed = base.rename(mapping)
        return Penalty(
            poly=renamed.poly,
            valid_set=renamed.valid_set,
            valid_value=renamed.valid_value,
            dropped_offset=renamed.dropped_offset,
            ancillas=renamed.ancillas,
            satisfiable=renamed.satisfiable,
            provenance=f"op:{op.value}",
        )
    lhs, rhs = _op_equation(op, output, inputs)
    pen = equation_to_penalty(lhs, rhs)
    return Penalty(
        poly=pen.poly,
        valid_set=pen.valid_set,
        valid_value=pen.valid_value,
        dropped_offset=pen.dropped_offset,
        ancillas=pen.ancillas,
        satisfiable=pen.satisfiable,
        provenance=f"op:{op.value}",
    )


# -- quadratization ---------------------------------------------------------------


def quadratize(
    p: Poly,
    weight: Rational | None = None,
    *,
    prefer_pairs: Sequence[tuple[Var, Var]] = (),
    name_for: Callable[[tuple[Var, Var], int], Var] | None = None,
) -> tuple[Poly, tuple[AncillaBinding, ...]]:
    """Reduce a polynomial to degree two with product ancillas.

    Each round picks a variable pair occurring in degree >= 3 terms
    (preferring any pair listed in `prefer_pairs`, otherwise the pair
    covering the most such terms) and substitutes a fresh ancilla for
    that pair inside those terms only; existing quadratic terms are
    never touched.  A binding penalty weight * (u*w - 2*(u+w)*a + 3*a)
    pins each ancilla.  When `weight` is None each binding gets the
    number of terms it replaced.  The result is returned with its
    binding penalties added, along with the binding records; callers
    must still verify the result against their valid set.
    """
    if name_for is None:
        name_for = _fresh_ancilla_namer(v.name for v in p.variables())
    work = p
    raw_bindings: list[tuple[Var, tuple[Var, Var], int]] = []
    while work.degree() > 2:
        high = [set(m) for m, _ in work.terms() if len(m) >= 3]
        coverage: dict[tuple[Var, Var], int] = {}
        for mono in high:
            ordered = sorted(mono, key=Var.sort_key)
            for x in range(len(ordered)):
                for y in range(x + 1, len(ordered)):
                    pair = (ordered[x], ordered[y])
                    coverage[pair] = coverage.get(pair, 0) + 1
        pick: tuple[Var, Var] | None = None
        for pref in prefer_pairs:
            key = tuple(sorted(pref, key=Var.sort_key))
            if coverage.get(key, 0) > 0:
                pick = key
                break
        if pick is None:
            best = max(coverage.values())
            pick = min(
                (pr for pr, cnt in coverage.items() if cnt == best),
                key=lambda pr: (pr[0].sort_key(), pr[1].sort_key()),
            )
        anc = name_for(pick, len(raw_bindings))
        u, w = pick
        replaced = 0
        out: dict[tuple[Var, ...], Fraction] = {}
        for mono, coeff in work.terms():
            ms = set(mono)
            if len(mono) >= 3 and u in ms and w in ms:
                ms.discard(u)
                ms.discard(w)
                ms.add(anc)
                replaced += 1
            key = tuple(sorted(ms, key=Var.sort_key))
            out[key] = out.get(key, Fraction(0)) + coeff
        work = Poly(out)
        raw_bindings.append((anc, pick, replaced))

    bindings: list[AncillaBinding] = []
    result = work
    for anc, pair, replaced in raw_bindings:
        wgt = Fraction(replaced) if weight is None else Fraction(weight)
        result = result + wgt * and_binding(pair[0], pair[1], anc)
        bindings.append(AncillaBinding(anc, pair, wgt, replaced))
    return result, tuple(bindings)


# -- equations ---------------------------------------------------------------------


def _extend_valid_with_ancillas(
    base: ValidSet, bindings: Sequence[AncillaBinding]
) -> ValidSet:
    if not bindings:
        return base
    anc_vars = [b.var for b in bindings]
    vs = tuple(sorted(set(base.vars) | set(anc_vars), key=Var.sort_key))
    members = []
    for bits in base.members:
        values = dict(zip(base.vars, bits))
        for b in bindings:
            values[b.var] = values[b.factors[0]] * values[b.factors[1]]
        members.append(tuple(values[v] for v in vs))
    return ValidSet(vs, frozenset(members))


def equation_to_penalty(
    lhs: Poly,
    rhs: Poly,
    *,
    weight: Rational | None = None,
    prefer_pairs: Sequence[tuple[Var, Var]] = (),
    name_for: Callable[[tuple[Var, Var], int], Var] | None = None,
    provenance: str = "",
) -> Penalty:
    """Penalty whose minimizers are the binary solutions of lhs = rhs.

    The squared difference is reduced multilinearly; its constant term is
    discarded into dropped_offset, so the valid value is minus that
    constant.  Cubic or higher terms are quadratized.  When the default
    binding weights fail verification they are escalated uniformly until
    it passes (explicit weights are never second-guessed).  An equation
    with no binary solution still compiles but is flagged unsatisfiable.
    """
    diff = lhs - rhs
    eq_vars = diff.variables()
    if len(eq_vars) > enumeration_limit():
        raise SolverLimitError(
            f"equation over {len(eq_vars)} variables exceeds the enumeration limit"
        )
    square = diff * diff
    core, dropped = square.drop_offset()
    solutions = ValidSet.from_predicate(
        eq_vars, lambda values: diff.evaluate(values) == 0
    )
    satisfiable = len(solutions) > 0

    if not satisfiable:
        quad, bindings = (
            quadratize(core, weight, prefer_pairs=prefer_pairs, name_for=name_for)
            if core.degree() > 2
            else (core, ())
        )
        vs = tuple(sorted(set(quad.variables()) | set(eq_vars), key=Var.sort_key))
        best = min(
            quad.evaluate(dict(zip(vs, bits)))
            for bits in _all_bits(len(vs))
        )
        return Penalty(
            poly=quad,
            valid_set=ValidSet(vs, frozenset()),
            valid_value=best,
            dropped_offset=dropped,
            ancillas=bindings,
            satisfiable=False,
            provenance=provenance,
        )

    if core.degree() <= 2:
        return Penalty(
            poly=core,
            valid_set=solutions,
            valid_value=-dropped,
            dropped_offset=dropped,
            ancillas=(),
            provenance=provenance,
        )

    attempts: list[Rational | None]
    if weight is not None:
        attempts = [weight]
    else:
        attempts = [None] + list(range(2, _WEIGHT_ESCALATION_CAP + 1))
    last_error: GapVerificationError | None = None
    for attempt in attempts:
        quad, bindings = quadratize(
            core, attempt, prefer_pairs=prefer_pairs, name_for=name_for
        )
        valid = _extend_valid_with_ancillas(solutions, bindings)
        try:
            return Penalty(
                poly=quad,
                valid_set=valid,
                valid_value=-dropped,
                dropped_offset=dropped,
                ancillas=bindings,
                provenance=provenance,
            )
        except GapVerificationError as err:
            last_error = err
            continue
    raise GapVerificationError(
        "no binding weight up to the escalation cap verified", report=last_error.report
    )


def _all_bits(n: int):
    for code in range(2 ** n - 1, -1, -1):
        yield tuple((code >> (n - 1 - t)) & 1 for t in range(n))


# -- inequalities -------------------------------------------------------------------


_SLACK_LETTERS = "stuvw"


def _slack_names(count: int, taken: set[str]) -> list[Var]:
    out: list[Var] = []
    for letter in _SLACK_LETTERS:
        if len(out) == count:
            break
        if letter not in taken:
            taken.add(letter)
            out.append(Var(letter, VarKind.SLACK))
    t = 2
    while len(out) < count:
        name = f"s{t}"
        if name not in taken:
            taken.add(name)
            out.append(Var(name, VarKind.SLACK))
        t += 1
    return out


def inequality_to_equation(
    variables: Sequence[Var],
    sense: str,
    bound: int,
    *,
    mode: str = "full",
) -> tuple[Poly, int, tuple[Var, ...]]:
    """Turn sum(x) <= b or sum(x) >= b into an equation with binary slacks.

    mode="full" always provisions one slack fewer than the variable
    count, whatever the bound.  mode="minimal" provisions exactly the number of unit
    slacks needed to represent every feasible left-hand side: b slacks
    for <=, n - b for >=.  A bound no binary assignment can meet raises
    InfeasibleBoundError before compilation.
    """
    variables = tuple(variables)
    n = len(variables)
    if n == 0:
        raise ValueError("inequality needs at least one variable")
    if sense not in ("<=", ">="):
        raise ValueError(f"sense must be <= or >=, got {sense!r}")
    if sense == "<=" and bound < 0:
        raise InfeasibleBoundError(f"sum of {n} bits cannot be <= {bound}")
    if sense == ">=" and bound > n:
        raise InfeasibleBoundError(f"sum of {n} bits cannot be >= {bound}")

    if mode == "full":
        count = n - 1
    elif mode == "minimal":
        count = bound if sense == "<=" else n - bound
    else:
        raise ValueError(f"unknown slack mode {mode!r}")

    taken = {v.name for v in variables}
    slacks = tuple(_slack_names(count, taken))
    lhs = Poly.zero()
    for v in variables:
        lhs = lhs + Poly.variable(v)
    for s in slacks:
        lhs = lhs + (Poly.variable(s) if sense == "<=" else -Poly.variable(s))
    return lhs, bound, slacks


def compile_inequality(
    variables: Sequence[Var],
    sense: str,
    bound: int,
    *,
    mode: str = "full",
    provenance: str = "",
) -> Penalty:
    """Full route: insert slacks, then compile the resulting equation.

    A bound every assignment meets (<= n, or >= 0) never reaches the
    slack machinery; forcing an equation there would wrongly exclude
    assignments, so the result is the zero penalty over the variables.
    """
    variables = tuple(variables)
    n = len(variables)
    vacuous = (sense == "<=" and bound >= n) or (sense == ">=" and bound <= 0)
    if vacuous:
        full = ValidSet.from_predicate(variables, lambda _: True)
        return Penalty(
            poly=Poly.zero(),
            valid_set=full,
            valid_value=0,
            dropped_offset=0,
            ancillas=(),
            provenance=provenance,
        )
    lhs, rhs, _slacks = inequality_to_equation(variables, sense, bound, mode=mode)
    return equation_to_penalty(lhs, Poly.constant(rhs), provenance=provenance)
