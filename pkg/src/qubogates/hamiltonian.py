"""Quadratic objectives over bits (QUBO) and spins (Ising), exactly.

A QuboMatrix stores a degree <= 2 polynomial over bits as a diagonal
(linear terms), an upper-triangular coefficient map (each unordered pair
counted once), and a constant offset.  An IsingModel is the same
objective after the change of variables s = 2x - 1: local fields h,
couplings J (again single-counted), and an offset.  Conversions preserve
the objective value exactly, offsets included.

Sign convention for biases: a sufficiently negative field on a spin
pins it to +1 in every ground state, a positive one pins it to -1.
apply_clamp uses magnitude sum(|J row|) + |h| + 1, which strictly
dominates the rest of the model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DegreeError
from .pbf import Poly, Var, boolean_to_spin

Entry = dict[tuple[int, int], Fraction]


def _check_entries(n: int, entries: Mapping[tuple[int, int], Fraction]) -> Entry:
    out: Entry = {}
    for (a, b), c in entries.items():
        if not (0 <= a < b < n):
            raise ValueError(f"entry ({a}, {b}) is not upper-triangular for {n} variables")
        c = Fraction(c)
        if c != 0:
            out[(a, b)] = c
    return out


@dataclass(frozen=True)
class QuboMatrix:
    """Upper-triangular QUBO with exact coefficients and a carried offset."""

    variables: tuple[Var, ...]
    diagonal: tuple[Fraction, ...]
    upper: Entry
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if len(self.variables) != len(self.diagonal):
            raise ValueError("diagonal length does not match variable count")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variables must be distinct")
        object.__setattr__(self, "upper", _check_entries(len(self.variables), self.upper))
        object.__setattr__(self, "offset", Fraction(self.offset))
        object.__setattr__(self, "diagonal", tuple(Fraction(d) for d in self.diagonal))

    @property
    def n(self) -> int:
        return len(self.variables)

    def entry(self, a: int, b: int) -> Fraction:
        if a == b:
            return self.diagonal[a]
        if a > b:
            a, b = b, a
        return self.upper.get((a, b), Fraction(0))

    def value(self, bits: Sequence[int]) -> Fraction:
        """Objective value including the offset."""
        if len(bits) != self.n:
            raise ValueError("bit count does not match variable count")
        total = self.offset
        for t, d in enumerate(self.diagonal):
            if bits[t]:
                total += d
        for (a, b), c in self.upper.items():
            if bits[a] and bits[b]:
                total += c
        return total

    def to_poly(self) -> Poly:
        terms: dict[tuple[Var, ...], Fraction] = {(): self.offset}
        for t, d in enumerate(self.diagonal):
            if d != 0:
                terms[(self.variables[t],)] = d
        for (a, b), c in self.upper.items():
            terms[(self.variables[a], self.variables[b])] = c
        return Poly(terms)


def penalty_to_qubo(poly: Poly, *, variables: Sequence[Var] | None = None) -> QuboMatrix:
    """Lay a degree <= 2 polynomial out as a QUBO matrix.

    Variable order defaults to canonical (role, name) order, which is
    also the printed row order of the gate matrices.
    """
    if poly.degree() > 2:
        raise DegreeError(f"QUBO needs degree <= 2, got {poly.degree()}")
    vs = tuple(variables) if variables is not None else poly.variables()
    missing = set(poly.variables()) - set(vs)
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise ValueError(f"polynomial mentions variables outside the layout: {names}")
    index = {v: t for t, v in enumerate(vs)}
    diag = [Fraction(0)] * len(vs)
    upper: Entry = {}
    offset = Fraction(0)
    for mono, coeff in poly.terms():
        if len(mono) == 0:
            offset += coeff
        elif len(mono) == 1:
            diag[index[mono[0]]] += coeff
        else:
            a, b = sorted((index[mono[0]], index[mono[1]]))
            upper[(a, b)] = upper.get((a, b), Fraction(0)) + coeff
    return QuboMatrix(vs, tuple(diag), upper, offset)


@dataclass(frozen=True)
class IsingModel:
    """Fields h, single-counted couplings J, and offset over spin variables."""

    variables: tuple[Var, ...]
    h: tuple[Fraction, ...]
    couplings: Entry
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if len(self.variables) != len(self.h):
            raise ValueError("field count does not match variable count")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variables must be distinct")
        object.__setattr__(self, "couplings", _check_entries(len(self.variables), self.couplings))
        object.__setattr__(self, "offset", Fraction(self.offset))
        object.__setattr__(self, "h", tuple(Fraction(x) for x in self.h))

    @property
    def n(self) -> int:
        return len(self.variables)

    def coupling(self, a: int, b: int) -> Fraction:
        if a == b:
            raise ValueError("no self-coupling")
        if a > b:
            a, b = b, a
        return self.couplings.get((a, b), Fraction(0))

    def value(self, spins: Sequence[int]) -> Fraction:
        """Objective value including the offset; spins are +-1."""
        if len(spins) != self.n:
            raise ValueError("spin count does not match variable count")
        for s in spins:
            if s not in (-1, 1):
                raise ValueError(f"spins must be +-1, got {s!r}")
        total = self.offset
        for t, f in enumerate(self.h):
            total += f * spins[t]
        for (a, b), c in self.couplings.items():
            total += c * spins[a] * spins[b]
        return total


def qubo_to_ising(q: QuboMatrix) -> IsingModel:
    """Change of variables x = (s + 1) / 2, value-preserving and exact."""
    spin_poly = boolean_to_spin(q.to_poly())
    index = {v: t for t, v in enumerate(q.variables)}
    h = [Fraction(0)] * q.n
    couplings: Entry = {}
    offset = Fraction(0)
    for mono, coeff in spin_poly.terms():
        if len(mono) == 0:
            offset += coeff
        elif len(mono) == 1:
            h[index[mono[0]]] += coeff
        else:
            a, b = sorted((index[mono[0]], index[mono[1]]))
            couplings[(a, b)] = couplings.get((a, b), Fraction(0)) + coeff
    return IsingModel(q.variables, tuple(h), couplings, offset)


def ising_to_qubo(m: IsingModel) -> QuboMatrix:
    """Inverse change of variables s = 2x - 1, value-preserving and exact."""
    diag = [Fraction(0)] * m.n
    upper: Entry = {}
    offset = m.offset
    for t, f in enumerate(m.h):
        diag[t] += 2 * f
        offset -= f
    for (a, b), c in m.couplings.items():
        upper[(a, b)] = upper.get((a, b), Fraction(0)) + 4 * c
        diag[a] -= 2 * c
        diag[b] -= 2 * c
        offset += c
    return QuboMatrix(m.variables, tuple(diag), upper, offset)


# -- clamping ------------------------------------------------------------------


@dataclass(frozen=True)
class Clamp:
    """A field bias strong enough to pin one spin in every ground state."""

    var: Var
    spin: int
    magnitude: Fraction

    def __post_init__(self):
        if self.spin not in (-1, 1):
            raise ValueError("clamp spin must be +-1")


def compute_clamp(m: IsingModel, var: Var, spin: int) -> Clamp:
    """Dominating magnitude for pinning `var`: sum(|J row|) + |h| + 1."""
    t = m.variables.index(var)
    mag = abs(m.h[t]) + 1
    for (a, b), c in m.couplings.items():
        if t in (a, b):
            mag += abs(c)
    return Clamp(var, spin, mag)


def apply_clamp(m: IsingModel, var: Var, spin: int) -> IsingModel:
    """Bias one spin so every ground state holds it at `spin`.

    Negative added field pins the spin to +1, positive to -1.  The
    magnitude strictly dominates everything else touching the spin, so
    the restriction of the new ground states to the other variables is
    the same as solving with the spin hard-fixed.
    """
    clamp = compute_clamp(m, var, spin)
    t = m.variables.index(var)
    delta = -clamp.magnitude if spin == 1 else clamp.magnitude
    h = list(m.h)
    h[t] += delta
    return IsingModel(m.variables, tuple(h), dict(m.couplings), m.offset)


# -- matrix emission ------------------------------------------------------------


def _fmt(c: Fraction) -> str:
    return str(c)


def emit_matrix(
    q: QuboMatrix | IsingModel,
    style: str = "symmetric",
    *,
    include_offset: bool = False,
) -> str:
    """Render the coefficient matrix as a tab-separated table.

    style="symmetric" mirrors every off-diagonal entry across the
    diagonal the way the printed gate tables do; style="upper" leaves
    the lower triangle empty.  Zero entries print as blanks.  The offset
    does not appear unless include_offset is set.
    """
    if style not in ("symmetric", "upper"):
        raise ValueError(f"unknown matrix style {style!r}")
    if isinstance(q, IsingModel):
        diag = q.h
        pairs = q.couplings
    else:
        diag = q.diagonal
        pairs = q.upper
    vs = q.variables
    n = len(vs)
    lines = ["\t".join([""] + [v.name for v in vs])]
    for r in range(n):
        cells = [vs[r].name]
        for c in range(n):
            if r == c:
                val = diag[r]
            elif r < c:
                val = pairs.get((r, c), Fraction(0))
            elif style == "symmetric":
                val = pairs.get((c, r), Fraction(0))
            else:
                val = Fraction(0)
            cells.append(_fmt(val) if val != 0 else "")
        lines.append("\t".join(cells))
    text = "\n".join(lines) + "\n"
    if include_offset:
        text += f"# offset: {q.offset}\n"
    return text
