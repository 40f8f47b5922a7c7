"""Ground-state solvers: exact exhaustive enumeration and annealing.

Exhaustive solving is the reference: it scales every coefficient to an
integer (multiplying by the common denominator), scans all assignments
of the unclamped variables in a kernel, and returns the exact minimum
with the complete set of minimizers.  No tie is ever broken.

Annealing is the opt-in heuristic for sizes enumeration cannot reach.
It runs Metropolis single-spin-flip sweeps down a geometric temperature
schedule, restarts from several random starts, and re-scores every
candidate exactly before reporting, so its best value is the exact
value of a real assignment and can never undercut the true minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from ..errors import SolverLimitError
from ..hamiltonian import IsingModel, QuboMatrix, ising_to_qubo, qubo_to_ising
from ..pbf import Assignment, Var, View
from ..penalty import enumeration_limit
from . import backends

_MAX_MINIMIZERS = 1 << 20
_INT_ENERGY_BOUND = 1 << 62


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solve: exact value, complete or sampled minimizers."""

    method: str
    value: Fraction
    states: tuple[Assignment, ...]
    stats: dict = field(default_factory=dict)

    def state_bits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(a.values for a in self.states)


@dataclass(frozen=True)
class AnnealParams:
    """Annealing schedule: geometric cooling, restarts, explicit seed."""

    sweeps: int = 200
    t_start: float = 10.0
    t_end: float = 0.05
    restarts: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("need at least one sweep")
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.t_end <= 0 or self.t_start <= 0:
            raise ValueError("temperatures must be positive")
        if self.sweeps > 1 and not self.t_end < self.t_start:
            raise ValueError("schedule must strictly decrease")
        if self.t_end > self.t_start:
            raise ValueError("end temperature above start temperature")

    def temperatures(self) -> np.ndarray:
        if self.sweeps == 1:
            return np.array([self.t_end], dtype=np.float64)
        ratio = (self.t_end / self.t_start) ** (1.0 / (self.sweeps - 1))
        return self.t_start * ratio ** np.arange(self.sweeps, dtype=np.float64)


def _as_qubo(model: QuboMatrix | IsingModel) -> tuple[QuboMatrix, bool]:
    if isinstance(model, IsingModel):
        return ising_to_qubo(model), True
    return model, False


def _normalize_clamps(
    model: QuboMatrix | IsingModel, clamps: Mapping[Var, int] | None, spin_input: bool
) -> dict[Var, int]:
    """Clamp values arrive in the model's own view; stored as bits."""
    out: dict[Var, int] = {}
    if not clamps:
        return out
    for var, val in clamps.items():
        if var not in model.variables:
            raise ValueError(f"clamped variable {var.name!r} is not in the model")
        if spin_input:
            if val not in (-1, 1):
                raise ValueError(f"spin clamp for {var.name!r} must be +-1, got {val!r}")
            out[var] = (val + 1) // 2
        else:
            if val not in (0, 1):
                raise ValueError(f"bit clamp for {var.name!r} must be 0/1, got {val!r}")
            out[var] = val
    return out


def _scaled_integer_qubo(q: QuboMatrix) -> tuple[np.ndarray, np.ndarray, int]:
    """Common-denominator integer arrays (offset handled by the caller)."""
    scale = 1
    for c in list(q.diagonal) + list(q.upper.values()):
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    n = q.n
    diag = np.zeros(n, dtype=np.int64)
    quad = np.zeros((n, n), dtype=np.int64)
    bound = 0
    for t, d in enumerate(q.diagonal):
        diag[t] = int(d * scale)
        bound += abs(int(d * scale))
    for (a, b), c in q.upper.items():
        quad[a, b] = quad[b, a] = int(c * scale)
        bound += abs(int(c * scale))
    if bound >= _INT_ENERGY_BOUND:
        raise SolverLimitError("scaled coefficients overflow the integer energy range")
    return diag, quad, scale


def solve_exhaustive(
    model: QuboMatrix | IsingModel,
    clamps: Mapping[Var, int] | None = None,
    *,
    limit: int | None = None,
) -> SolveResult:
    """Exact minimum and every minimizer, by complete enumeration.

    Clamps fix variables (bits for a QUBO, spins for an Ising model);
    only the rest are enumerated.  Refuses more free variables than the
    limit (argument, else QUBOGATES_EXHAUSTIVE_LIMIT, else 24).
    """
    q, spin_input = _as_qubo(model)
    bit_clamps = _normalize_clamps(model, clamps, spin_input)
    cap = enumeration_limit() if limit is None else limit
    free = [t for t, v in enumerate(q.variables) if v not in bit_clamps]
    if len(free) > cap:
        raise SolverLimitError(
            f"{len(free)} free variables exceed the exhaustive limit of {cap}; "
            "clamp more variables or use annealing"
        )
    fixed_vals = np.zeros(q.n, dtype=np.int8)
    for var, bit in bit_clamps.items():
        fixed_vals[q.variables.index(var)] = bit
    diag, quad, scale = _scaled_integer_qubo(q)
    backend = backends.active_backend()
    best_int, count, states = backends.kernels().exhaustive_scan(
        diag, quad, fixed_vals, np.array(free, dtype=np.int64), _MAX_MINIMIZERS
    )
    count = int(count)
    if count > _MAX_MINIMIZERS:
        raise SolverLimitError(
            f"{count} minimizers exceed the reporting cap; clamp more variables"
        )
    value = Fraction(int(best_int), scale) + q.offset
    rows = sorted(tuple(int(b) for b in row) for row in states)
    assignments = []
    for bits in rows:
        a = Assignment(q.variables, bits, View.BOOL)
        assignments.append(a.to_spin() if spin_input else a)
    return SolveResult(
        method="exhaustive",
        value=value,
        states=tuple(assignments),
        stats={
            "backend": backend,
            "free_variables": len(free),
            "assignments_scanned": 1 << len(free),
            "minimizers": count,
        },
    )


def solve_anneal(
    model: QuboMatrix | IsingModel,
    clamps: Mapping[Var, int] | None = None,
    params: AnnealParams | None = None,
) -> SolveResult:
    """Simulated annealing; reports the exact value of its best find.

    Every restart's best configuration is re-scored with exact rational
    arithmetic, so the reported value is attained by the reported states
    and is an upper bound on the true minimum.  Deterministic per seed
    for a fixed backend.
    """
    params = params or AnnealParams()
    q, spin_input = _as_qubo(model)
    ising = model if isinstance(model, IsingModel) else qubo_to_ising(model)
    bit_clamps = _normalize_clamps(model, clamps, spin_input)

    n = ising.n
    h = np.array([float(x) for x in ising.h], dtype=np.float64)
    jmat = np.zeros((n, n), dtype=np.float64)
    for (a, b), c in ising.couplings.items():
        jmat[a, b] = jmat[b, a] = float(c)
    fixed_mask = np.zeros(n, dtype=np.bool_)
    init_spins = np.ones(n, dtype=np.int8)
    for var, bit in bit_clamps.items():
        t = ising.variables.index(var)
        fixed_mask[t] = True
        init_spins[t] = 2 * bit - 1

    backend = backends.active_backend()
    states, _energies = backends.kernels().anneal_run(
        h, jmat, fixed_mask, init_spins, params.temperatures(), params.restarts, params.seed
    )

    exact: list[Fraction] = []
    for r in range(params.restarts):
        spins = [int(s) for s in states[r]]
        exact.append(ising.value(spins))
    best = min(exact)
    hits = sum(1 for e in exact if e == best)
    seen: set[tuple[int, ...]] = set()
    winners: list[Assignment] = []
    for r in range(params.restarts):
        if exact[r] != best:
            continue
        spins = tuple(int(s) for s in states[r])
        if spins in seen:
            continue
        seen.add(spins)
        winners.append(Assignment(ising.variables, spins, View.SPIN))
    winners.sort(key=lambda a: a.values)
    if not spin_input:
        winners = [a.to_bool() for a in winners]
    return SolveResult(
        method="anneal",
        value=best,
        states=tuple(winners),
        stats={
            "backend": backend,
            "seed": params.seed,
            "restarts": params.restarts,
            "sweeps": params.sweeps,
            "hits": hits,
            "hit_rate": hits / params.restarts,
        },
    )
