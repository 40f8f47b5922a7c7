"""Exact multilinear polynomials over named binary variables.

A pseudo-Boolean function is represented as a mapping from monomials to
rational coefficients.  A monomial is a set of distinct variables, so the
representation is multilinear by construction: multiplying two monomials
takes the union of their variable sets, which is exactly the reduction
x*x = x that holds on {0, 1}.  Coefficients are `fractions.Fraction`
throughout, so every derived quantity (penalty values, gaps, matrix
entries, offsets) is exact.

Variables carry a role (input, output, ancilla, slack) and sort by
(role, name).  That ordering is what fixes canonical term order in
printed polynomials and row/column order in emitted matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import DegreeError, DuplicateNameError, MissingVariableError

Rational = Union[int, Fraction]


class VarKind(Enum):
    INPUT = "input"
    OUTPUT = "output"
    ANCILLA = "ancilla"
    SLACK = "slack"


_KIND_RANK = {
    VarKind.INPUT: 0,
    VarKind.OUTPUT: 1,
    VarKind.ANCILLA: 2,
    VarKind.SLACK: 3,
}


@dataclass(frozen=True)
class Var:
    """A named binary variable with a role.

    Ordering is (role rank, name): inputs first, then outputs, ancillas,
    slacks.  With the customary letters (inputs i, j; output k; ancilla a)
    this reproduces the row order of the printed gate matrices.
    """

    name: str
    kind: VarKind = VarKind.INPUT

    def sort_key(self) -> tuple[int, str]:
        return (_KIND_RANK[self.kind], self.name)

    def __lt__(self, other: "Var") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Var({self.name!r}, {self.kind.value})"


Monomial = tuple[Var, ...]


def _check_names(vars_seen: dict[str, Var], vs: Iterable[Var]) -> None:
    for v in vs:
        prior = vars_seen.get(v.name)
        if prior is None:
            vars_seen[v.name] = v
        elif prior != v:
            raise DuplicateNameError(
                f"variable name {v.name!r} used with two roles: "
                f"{prior.kind.value} and {v.kind.value}"
            )


class Poly:
    """An immutable multilinear polynomial with exact coefficients.

    The constant term is stored as the empty monomial.  Arithmetic is by
    operator overloading; multiplication applies x*x = x because monomial
    variable sets are unioned, so squaring an affine expression directly
    yields its reduced multilinear form.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        canon: dict[Monomial, Fraction] = {}
        names: dict[str, Var] = {}
        if terms:
            for mono, coeff in terms.items():
                key = tuple(sorted(set(mono), key=Var.sort_key))
                if len(key) != len(set(mono)):
                    raise ValueError(f"monomial {mono!r} repeats a variable")
                c = Fraction(coeff)
                if c == 0:
                    continue
                _check_names(names, key)
                canon[key] = canon.get(key, Fraction(0)) + c
                if canon[key] == 0:
                    del canon[key]
        object.__setattr__(self, "_terms", canon)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def constant(cls, c: Rational) -> "Poly":
        return cls({(): c})

    @classmethod
    def variable(cls, v: Var) -> "Poly":
        return cls({(v,): 1})

    # -- views ------------------------------------------------------------

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in canonical order: degree descending, then variable order."""
        for mono in sorted(self._terms, key=lambda m: (-len(m), tuple(v.sort_key() for v in m))):
            yield mono, self._terms[mono]

    def coefficient(self, mono: Sequence[Var]) -> Fraction:
        key = tuple(sorted(set(mono), key=Var.sort_key))
        return self._terms.get(key, Fraction(0))

    @property
    def offset(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def drop_offset(self) -> tuple["Poly", Fraction]:
        """Split off the constant term; returns (polynomial without it, constant)."""
        c = self.offset
        if c == 0:
            return self, Fraction(0)
        rest = dict(self._terms)
        del rest[()]
        return Poly(rest), c

    def variables(self) -> tuple[Var, ...]:
        seen: set[Var] = set()
        for mono in self._terms:
            seen.update(mono)
        return tuple(sorted(seen, key=Var.sort_key))

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other)
        return None

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, c in o._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = tuple(sorted(set(m1) | set(m2), key=Var.sort_key))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are defined")
        out = Poly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, assignment) -> Fraction:
        """Substitute values for every variable and return the exact result.

        Accepts a plain mapping Var -> value or an Assignment.  Raises
        MissingVariableError naming the first unbound variable.
        """
        values = assignment.as_mapping() if isinstance(assignment, Assignment) else assignment
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            prod = coeff
            for v in mono:
                if v not in values:
                    raise MissingVariableError(v)
                prod *= values[v]
                if prod == 0:
                    break
            total += prod
        return total

    def rename(self, mapping: Mapping[Var, Var]) -> "Poly":
        """Replace variables wholesale; unmapped variables pass through."""
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            key = tuple(mapping.get(v, v) for v in mono)
            if len(set(key)) != len(key):
                raise ValueError("rename collapsed two variables of one monomial")
            key = tuple(sorted(key, key=Var.sort_key))
            out[key] = out.get(key, Fraction(0)) + c
        return Poly(out)

    # -- printing -----------------------------------------------------------

    def canonical_str(self) -> str:
        """Canonical text form: degree-descending terms, offset last.

        Example: ``2*i*j - 2*i*k + i + 4*a + (offset 1)``.
        """
        parts: list[str] = []
        off = self.offset
        for mono, coeff in self.terms():
            if not mono:
                continue
            names = "*".join(v.name for v in mono)
            mag = abs(coeff)
            body = names if mag == 1 else f"{mag}*{names}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        if off != 0:
            tail = f"(offset {off})"
            parts.append(tail if not parts else f"+ {tail}")
        if not parts:
            return "0"
        return " ".join(parts)

    def __str__(self) -> str:
        return self.canonical_str()

    def __repr__(self) -> str:
        return f"Poly<{self.canonical_str()}>"


# -- assignments -------------------------------------------------------------


class View(Enum):
    """Value domain of an assignment: {0,1} or {-1,+1}."""

    BOOL = "bool"
    SPIN = "spin"


@dataclass(frozen=True)
class Assignment:
    """Values for an ordered tuple of variables, tagged with their domain."""

    vars: tuple[Var, ...]
    values: tuple[int, ...]
    view: View = View.BOOL

    def __post_init__(self):
        if len(self.vars) != len(self.values):
            raise ValueError("variable and value counts differ")
        allowed = (0, 1) if self.view is View.BOOL else (-1, 1)
        for v in self.values:
            if v not in allowed:
                raise ValueError(f"value {v} outside {allowed} for {self.view.value} view")

    def as_mapping(self) -> dict[Var, int]:
        return dict(zip(self.vars, self.values))

    def __getitem__(self, var: Var) -> int:
        try:
            return self.values[self.vars.index(var)]
        except ValueError:
            raise MissingVariableError(var) from None

    def to_spin(self) -> "Assignment":
        """Map bit x to spin s = 2x - 1.  Identity on spin view."""
        if self.view is View.SPIN:
            return self
        return Assignment(self.vars, tuple(2 * x - 1 for x in self.values), View.SPIN)

    def to_bool(self) -> "Assignment":
        """Map spin s to bit x = (s + 1) / 2.  Identity on bool view."""
        if self.view is View.BOOL:
            return self
        return Assignment(self.vars, tuple((s + 1) // 2 for s in self.values), View.BOOL)


def all_assignments(vs: Sequence[Var], view: View = View.BOOL) -> Iterator[Assignment]:
    """All 2^n assignments, most-significant-first descending.

    The first assignment sets every variable, the last clears every one,
    matching the row order of the printed truth tables.
    """
    vs = tuple(vs)
    lo, hi = (0, 1) if view is View.BOOL else (-1, 1)
    n = len(vs)
    for code in range(2 ** n - 1, -1, -1):
        bits = tuple(hi if (code >> (n - 1 - t)) & 1 else lo for t in range(n))
        yield Assignment(vs, bits, view)


# -- linear combination -------------------------------------------------------


def poly_combine(weighted: Iterable[tuple[Rational, Poly]]) -> Poly:
    """Exact linear combination sum(w * p) of polynomials."""
    total = Poly.zero()
    for w, p in weighted:
        total = total + p * Fraction(w)
    return total


# -- Boolean/spin change of variables ----------------------------------------


def boolean_to_spin(p: Poly) -> Poly:
    """Rewrite a degree <= 2 polynomial over bits as one over spins.

    Substitutes x = (s + 1) / 2 for every variable, where the same Var
    now stands for a spin valued in {-1, +1}.  Values are preserved:
    p(x) equals the result evaluated at s = 2x - 1.
    """
    if p.degree() > 2:
        raise DegreeError(f"spin conversion is defined for degree <= 2, got {p.degree()}")
    out = Poly.zero()
    for mono, coeff in p.terms():
        factor = Poly.constant(coeff)
        for v in mono:
            factor = factor * (Poly.variable(v) + 1) * Fraction(1, 2)
        out = out + factor
    return out


def spin_to_boolean(p: Poly) -> Poly:
    """Inverse of boolean_to_spin: substitutes s = 2x - 1."""
    if p.degree() > 2:
        raise DegreeError(f"spin conversion is defined for degree <= 2, got {p.degree()}")
    out = Poly.zero()
    for mono, coeff in p.terms():
        factor = Poly.constant(coeff)
        for v in mono:
            factor = factor * (Poly.variable(v) * 2 - 1)
        out = out + factor
    return out
