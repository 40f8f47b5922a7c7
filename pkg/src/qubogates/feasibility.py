"""Decide whether any quadratic penalty exists over a given variable set.

The question "is there a quadratic f and a value v with f = v on every
valid assignment and f >= v + 1 on every other assignment" is a linear
feasibility problem over the coefficients of f (constant, linear, and
pairwise terms) together with v.  It is solved exactly over the
rationals by Fourier-Motzkin elimination.

Both outcomes come with a certificate that can be re-checked by direct
substitution: a feasible system yields a concrete coefficient vector
(hence a working penalty), an infeasible one yields a nonnegative
combination of the constraints that sums to the contradiction 0 >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .boolops import ValidSet
from .errors import SolverLimitError
from .pbf import Poly, Var

_FM_VAR_LIMIT = 8


@dataclass(frozen=True)
class LinearConstraint:
    """One row of the system: coeffs . unknowns >= rhs.

    Equalities over valid assignments appear as two opposing rows, so
    the whole system is uniform and every certificate multiplier is
    nonnegative.
    """

    kind: str  # "valid>=", "valid<=", or "invalid"
    bits: tuple[int, ...]
    coeffs: tuple[Fraction, ...]
    rhs: Fraction


@dataclass(frozen=True)
class FeasibilityCertificate:
    """Answer and proof for the quadratic-penalty existence question.

    feasible=True carries a witness polynomial and its valid value;
    feasible=False carries multipliers over the constraint rows whose
    combination cancels every unknown yet demands a positive right-hand
    side.  recheck() replays the appropriate check from scratch.
    """

    feasible: bool
    variables: tuple[Var, ...]
    valid_set: ValidSet
    constraints: tuple[LinearConstraint, ...]
    witness_poly: Poly | None = None
    witness_value: Fraction | None = None
    combination: tuple[tuple[int, Fraction], ...] | None = None

    def recheck(self) -> bool:
        if self.feasible:
            return self._recheck_witness()
        return self._recheck_combination()

    def _recheck_witness(self) -> bool:
        if self.witness_poly is None or self.witness_value is None:
            return False
        vs = self.valid_set.vars
        n = len(vs)
        for code in range(2 ** n):
            bits = tuple((code >> (n - 1 - t)) & 1 for t in range(n))
            value = self.witness_poly.evaluate(dict(zip(vs, bits)))
            if bits in self.valid_set.members:
                if value != self.witness_value:
                    return False
            elif value < self.witness_value + 1:
                return False
        return True

    def _recheck_combination(self) -> bool:
        if not self.combination:
            return False
        width = len(self.constraints[0].coeffs)
        total = [Fraction(0)] * width
        rhs = Fraction(0)
        for idx, mult in self.combination:
            if mult < 0:
                return False
            row = self.constraints[idx]
            for t in range(width):
                total[t] += mult * row.coeffs[t]
            rhs += mult * row.rhs
        return all(c == 0 for c in total) and rhs > 0


def _basis(allowed: tuple[Var, ...]) -> list[tuple[Var, ...]]:
    """Candidate monomials: constant, linears, then pairs, in var order."""
    monos: list[tuple[Var, ...]] = [()]
    monos.extend((v,) for v in allowed)
    for x in range(len(allowed)):
        for y in range(x + 1, len(allowed)):
            monos.append((allowed[x], allowed[y]))
    return monos


_Row = tuple[tuple[Fraction, ...], Fraction, dict[int, Fraction]]


def _normalized(row: _Row) -> _Row:
    coeffs, rhs, comb = row
    scale = None
    for c in coeffs:
        if c != 0:
            scale = abs(c)
            break
    if scale is None or scale == 1:
        return row
    return (
        tuple(c / scale for c in coeffs),
        rhs / scale,
        {k: m / scale for k, m in comb.items()},
    )


def _prune(rows: list[_Row]) -> list[_Row]:
    best: dict[tuple[Fraction, ...], _Row] = {}
    for row in rows:
        row = _normalized(row)
        coeffs, rhs, _ = row
        kept = best.get(coeffs)
        if kept is None or rhs > kept[1]:
            best[coeffs] = row
    return list(best.values())


def prove_no_quadratic(
    valid: ValidSet, allowed: Sequence[Var] | None = None
) -> FeasibilityCertificate:
    """Settle quadratic-penalty existence over `allowed` variables.

    `allowed` defaults to all variables of the valid set and must be a
    subset of them.  Dropping variables projects the valid set: a
    pattern over the kept variables counts as valid when some valid
    assignment extends it, so the question asked is "can a quadratic
    over these variables alone single out the relation", the same
    question the fixed templates answer with their ancillas.  The
    returned certificate is exact either way.
    """
    if allowed is None:
        allowed_t = tuple(valid.vars)
    else:
        extra = set(allowed) - set(valid.vars)
        if extra:
            names = ", ".join(sorted(v.name for v in extra))
            raise ValueError(f"allowed variables not in the relation: {names}")
        keep = set(allowed)
        allowed_t = tuple(v for v in valid.vars if v in keep)
    if len(allowed_t) < len(valid.vars):
        pick = [valid.vars.index(v) for v in allowed_t]
        members = frozenset(tuple(m[t] for t in pick) for m in valid.members)
        valid = ValidSet(allowed_t, members)
    if len(valid.vars) > _FM_VAR_LIMIT:
        raise SolverLimitError(
            f"existence proof over {len(valid.vars)} variables exceeds the "
            f"limit of {_FM_VAR_LIMIT}"
        )
    if not valid.members:
        raise ValueError("relation has no valid assignments to anchor a value")

    monos = _basis(allowed_t)
    # Unknowns: [v] + one coefficient per basis monomial.
    width = 1 + len(monos)
    vs = valid.vars
    n = len(vs)

    constraints: list[LinearConstraint] = []
    for code in range(2 ** n - 1, -1, -1):
        bits = tuple((code >> (n - 1 - t)) & 1 for t in range(n))
        values = dict(zip(vs, bits))
        row = [Fraction(0)] * width
        row[0] = Fraction(-1)  # -v
        for t, mono in enumerate(monos):
            prod = 1
            for var in mono:
                prod *= values[var]
            row[t + 1] = Fraction(prod)
        if bits in valid.members:
            constraints.append(LinearConstraint("valid>=", bits, tuple(row), Fraction(0)))
            constraints.append(
                LinearConstraint("valid<=", bits, tuple(-c for c in row), Fraction(0))
            )
        else:
            constraints.append(LinearConstraint("invalid", bits, tuple(row), Fraction(1)))

    rows: list[_Row] = [
        (c.coeffs, c.rhs, {idx: Fraction(1)}) for idx, c in enumerate(constraints)
    ]

    eliminated: list[tuple[int, list[_Row]]] = []
    remaining = list(range(width))
    while remaining:
        # Cheapest unknown first: fewest positive*negative combinations.
        def cost(t: int) -> int:
            pos = sum(1 for r in rows if r[0][t] > 0)
            neg = sum(1 for r in rows if r[0][t] < 0)
            return pos * neg

        target = min(remaining, key=cost)
        remaining.remove(target)
        eliminated.append((target, list(rows)))

        pos = [r for r in rows if r[0][target] > 0]
        neg = [r for r in rows if r[0][target] < 0]
        zero = [r for r in rows if r[0][target] == 0]
        combined: list[_Row] = list(zero)
        for p in pos:
            pc = p[0][target]
            for q in neg:
                qc = q[0][target]
                # pc > 0, qc < 0; scale so the target cancels, multipliers stay >= 0.
                a, b = -qc, pc
                coeffs = tuple(a * pe + b * qe for pe, qe in zip(p[0], q[0]))
                rhs = a * p[1] + b * q[1]
                comb: dict[int, Fraction] = {}
                for k, m in p[2].items():
                    comb[k] = comb.get(k, Fraction(0)) + a * m
                for k, m in q[2].items():
                    comb[k] = comb.get(k, Fraction(0)) + b * m
                combined.append((coeffs, rhs, comb))
        rows = _prune(combined)

        for coeffs, rhs, comb in rows:
            if all(c == 0 for c in coeffs) and rhs > 0:
                return FeasibilityCertificate(
                    feasible=False,
                    variables=allowed_t,
                    valid_set=valid,
                    constraints=tuple(constraints),
                    combination=tuple(sorted(comb.items())),
                )

    # Feasible: walk the eliminations backwards, picking a value inside
    # the bounds each unknown had at its elimination step.
    values: dict[int, Fraction] = {}
    for target, system in reversed(eliminated):
        lower: Fraction | None = None
        upper: Fraction | None = None
        for coeffs, rhs, _ in system:
            ct = coeffs[target]
            if ct == 0:
                continue
            rest = rhs
            for t, c in enumerate(coeffs):
                if t != target and c != 0:
                    rest -= c * values[t]
            bound = rest / ct
            if ct > 0:
                lower = bound if lower is None else max(lower, bound)
            else:
                upper = bound if upper is None else min(upper, bound)
        if lower is not None and upper is not None:
            values[target] = (lower + upper) / 2
        elif lower is not None:
            values[target] = lower
        elif upper is not None:
            values[target] = upper
        else:
            values[target] = Fraction(0)

    witness = Poly({mono: values[t + 1] for t, mono in enumerate(monos)})
    cert = FeasibilityCertificate(
        feasible=True,
        variables=allowed_t,
        valid_set=valid,
        constraints=tuple(constraints),
        witness_poly=witness,
        witness_value=values[0],
    )
    if not cert.recheck():
        raise AssertionError("feasible witness failed its own re-check")
    return cert
