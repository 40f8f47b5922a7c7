"""Exhaustive and annealed minimization, both kernel backends."""

import numpy as np
import pytest

from qubogates import (
    AnnealParams,
    Poly,
    SolverLimitError,
    Var,
    all_assignments,
    gate,
    penalty_to_qubo,
    qubo_to_ising,
    solve_anneal,
    solve_exhaustive,
)
from qubogates.solver.backends import active_backend

HAVE_NUMBA = True
try:
    import numba  # noqa: F401
except ImportError:
    HAVE_NUMBA = False


def random_model(rng, n):
    vs = [Poly.variable(Var(f"x{t}")) for t in range(n)]
    p = Poly.zero()
    for t, v in enumerate(vs):
        p = p + int(rng.integers(-4, 5)) * v
        for u in vs[t + 1 :]:
            p = p + int(rng.integers(-4, 5)) * v * u
    return penalty_to_qubo(p)


def brute_force(q):
    """Independent minimum: evaluate the matrix on every bit vector."""
    best = None
    argmins = []
    for a in all_assignments(q.variables):
        value = q.value(a.values)
        if best is None or value < best:
            best, argmins = value, [a.values]
        elif value == best:
            argmins.append(a.values)
    return best, set(argmins)


class TestExhaustive:
    def test_cnot_ground_set(self):
        spec = gate("cnot")
        result = solve_exhaustive(penalty_to_qubo(spec.penalty.poly))
        assert result.value == 0
        got = {s.values for s in result.states}
        assert got == spec.penalty.valid_set.members

    def test_toffoli_ground_set(self):
        spec = gate("toffoli")
        result = solve_exhaustive(penalty_to_qubo(spec.penalty.poly))
        assert result.value == 0
        assert {s.values for s in result.states} == spec.penalty.valid_set.members

    def test_matches_independent_enumeration(self):
        rng = np.random.default_rng(99)
        for _ in range(25):
            q = random_model(rng, int(rng.integers(1, 7)))
            result = solve_exhaustive(q)
            best, argmins = brute_force(q)
            assert result.value == best
            assert {s.values for s in result.states} == argmins

    def test_clamps_restrict_the_scan(self):
        rng = np.random.default_rng(5)
        q = random_model(rng, 5)
        var = q.variables[2]
        result = solve_exhaustive(q, clamps={var: 1})
        assert all(s.as_mapping()[var] == 1 for s in result.states)
        best = min(
            q.value(a.values)
            for a in all_assignments(q.variables)
            if a.as_mapping()[var] == 1
        )
        assert result.value == best

    def test_stats_report_the_scan_size(self):
        q = penalty_to_qubo(gate("cnot").penalty.poly)
        result = solve_exhaustive(q, clamps={q.variables[0]: 0})
        assert result.stats["free_variables"] == 3
        assert result.stats["assignments_scanned"] == 8
        assert result.method == "exhaustive"

    def test_width_limit(self):
        rng = np.random.default_rng(3)
        q = random_model(rng, 6)
        with pytest.raises(SolverLimitError):
            solve_exhaustive(q, limit=5)

    def test_ising_and_qubo_views_agree(self):
        rng = np.random.default_rng(41)
        q = random_model(rng, 6)
        rq = solve_exhaustive(q)
        rm = solve_exhaustive(qubo_to_ising(q))
        assert rq.value == rm.value
        bits = {s.values for s in rq.states}
        spins = {tuple((v + 1) // 2 for v in s.values) for s in rm.states}
        assert bits == spins


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba backend unavailable")
class TestBackendAgreement:
    def test_env_switch_is_respected(self, monkeypatch):
        monkeypatch.setenv("QUBOGATES_BACKEND", "numpy")
        assert active_backend() == "numpy"
        monkeypatch.setenv("QUBOGATES_BACKEND", "numba")
        assert active_backend() == "numba"
        monkeypatch.setenv("QUBOGATES_BACKEND", "nonsense")
        with pytest.raises(ValueError):
            active_backend()

    def test_exhaustive_results_are_identical(self, monkeypatch):
        rng = np.random.default_rng(17)
        models = [random_model(rng, int(rng.integers(2, 8))) for _ in range(10)]
        models.append(penalty_to_qubo(gate("fredkin").penalty.poly))
        for q in models:
            monkeypatch.setenv("QUBOGATES_BACKEND", "numpy")
            a = solve_exhaustive(q)
            monkeypatch.setenv("QUBOGATES_BACKEND", "numba")
            b = solve_exhaustive(q)
            assert a.value == b.value
            assert {s.values for s in a.states} == {s.values for s in b.states}

    def test_anneal_is_deterministic_within_each_backend(self, monkeypatch):
        q = penalty_to_qubo(gate("toffoli").penalty.poly)
        params = AnnealParams(seed=11, restarts=6, sweeps=80)
        for backend in ("numpy", "numba"):
            monkeypatch.setenv("QUBOGATES_BACKEND", backend)
            first = solve_anneal(q, params=params)
            second = solve_anneal(q, params=params)
            assert first.value == second.value
            assert [s.values for s in first.states] == [s.values for s in second.states]
            assert first.stats == second.stats


class TestAnneal:
    def test_never_beats_the_exact_minimum(self):
        rng = np.random.default_rng(31)
        for trial in range(8):
            q = random_model(rng, int(rng.integers(2, 9)))
            exact = solve_exhaustive(q)
            annealed = solve_anneal(q, params=AnnealParams(seed=trial, restarts=4, sweeps=50))
            assert annealed.value >= exact.value

    def test_finds_gate_ground_states(self):
        q = penalty_to_qubo(gate("cnot").penalty.poly)
        result = solve_anneal(q, params=AnnealParams(seed=2, restarts=16, sweeps=150))
        assert result.value == 0

    def test_reports_hit_statistics(self):
        q = penalty_to_qubo(gate("cnot").penalty.poly)
        result = solve_anneal(q, params=AnnealParams(seed=2, restarts=16, sweeps=150))
        assert result.method == "anneal"
        assert result.stats["restarts"] == 16
        assert result.stats["hits"] >= 1
        assert result.stats["hit_rate"] == result.stats["hits"] / 16
        assert result.stats["seed"] == 2

    def test_different_seeds_are_independent_runs(self):
        q = penalty_to_qubo(gate("toffoli").penalty.poly)
        a = solve_anneal(q, params=AnnealParams(seed=1, restarts=4, sweeps=60))
        b = solve_anneal(q, params=AnnealParams(seed=2, restarts=4, sweeps=60))
        assert a.value >= 0 and b.value >= 0

    def test_respects_clamps(self):
        spec = gate("cnot")
        q = penalty_to_qubo(spec.penalty.poly)
        clamps = {spec.inputs[0]: 1, spec.inputs[1]: 0}
        result = solve_anneal(q, clamps, params=AnnealParams(seed=5, restarts=8, sweeps=100))
        for s in result.states:
            m = s.as_mapping()
            assert m[spec.inputs[0]] == 1
            assert m[spec.inputs[1]] == 0
