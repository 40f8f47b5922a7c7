"""Boolean/spin quadratic forms, clamping, and the matrix emitter."""

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from qubogates import (
    DegreeError,
    Poly,
    Var,
    all_assignments,
    apply_clamp,
    compute_clamp,
    emit_matrix,
    gate,
    ising_to_qubo,
    penalty_to_qubo,
    qubo_to_ising,
    solve_exhaustive,
)

GOLDEN = Path(__file__).parent / "golden"


def random_quadratic(rng, n_vars):
    """Integer-coefficient quadratic over x0..x{n-1}, dense-ish."""
    vs = [Poly.variable(Var(f"x{t}")) for t in range(n_vars)]
    p = Poly.constant(int(rng.integers(-5, 6)))
    for t, v in enumerate(vs):
        p = p + int(rng.integers(-5, 6)) * v
        for u in vs[t + 1 :]:
            if rng.random() < 0.6:
                p = p + int(rng.integers(-5, 6)) * v * u
    return p


class TestSpinBooleanIdentity:
    def test_values_agree_on_every_assignment(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            n = int(rng.integers(1, 9))
            poly = random_quadratic(rng, n)
            q = penalty_to_qubo(poly)
            m = qubo_to_ising(q)
            for a in all_assignments(q.variables):
                bits = a.values
                spins = tuple(2 * b - 1 for b in bits)
                assert q.value(bits) == m.value(spins)
                assert q.value(bits) == poly.evaluate(a.as_mapping())

    def test_round_trip_is_exact(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            q = penalty_to_qubo(random_quadratic(rng, int(rng.integers(1, 9))))
            assert ising_to_qubo(qubo_to_ising(q)) == q

    def test_offsets_carry_through(self):
        x = Poly.variable(Var("x"))
        q = penalty_to_qubo(x + 7)
        assert q.offset == 7
        m = qubo_to_ising(q)
        assert m.value((1,)) == 8
        assert m.value((-1,)) == 7


class TestClamping:
    def test_magnitude_is_row_sum_plus_one(self):
        poly = (
            2 * Poly.variable(Var("x")) * Poly.variable(Var("y"))
            - 3 * Poly.variable(Var("x"))
            + Poly.variable(Var("y")) * Poly.variable(Var("z"))
        )
        m = qubo_to_ising(penalty_to_qubo(poly))
        for idx, v in enumerate(m.variables):
            expected = abs(m.h[idx]) + sum(
                abs(c)
                for pair, c in m.couplings.items()
                if idx in pair
            ) + 1
            assert compute_clamp(m, v, 1).magnitude == expected

    def test_bias_and_hard_clamping_agree(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            n = int(rng.integers(2, 8))
            q = penalty_to_qubo(random_quadratic(rng, n))
            m = qubo_to_ising(q)
            var = m.variables[int(rng.integers(0, n))]
            spin = int(rng.choice((-1, 1)))

            hard = solve_exhaustive(m, clamps={var: spin})
            biased = solve_exhaustive(apply_clamp(m, var, spin))

            idx = m.variables.index(var)
            assert all(s.values[idx] == spin for s in biased.states)
            hard_states = {s.values for s in hard.states}
            biased_states = {s.values for s in biased.states}
            assert hard_states == biased_states

    def test_clamped_bit_always_wins(self):
        # even when the rest of the model prefers the other sign
        x = Poly.variable(Var("x"))
        m = qubo_to_ising(penalty_to_qubo(9 * x))
        biased = solve_exhaustive(apply_clamp(m, m.variables[0], 1))
        (state,) = biased.states
        assert state.values[0] == 1


class TestEmitter:
    def test_cnot_golden(self):
        q = penalty_to_qubo(gate("cnot").penalty.poly)
        assert emit_matrix(q) == (GOLDEN / "cnot_matrix.txt").read_text()

    def test_toffoli_golden(self):
        q = penalty_to_qubo(gate("toffoli").penalty.poly)
        assert emit_matrix(q) == (GOLDEN / "toffoli_matrix.txt").read_text()

    def test_fredkin_golden(self):
        q = penalty_to_qubo(gate("fredkin").penalty.poly)
        assert emit_matrix(q) == (GOLDEN / "fredkin_matrix.txt").read_text()

    def test_four_ancilla_swap_golden(self):
        q = penalty_to_qubo(gate("fredkin9").penalty.poly)
        assert emit_matrix(q) == (GOLDEN / "fredkin9_matrix.txt").read_text()

    def test_upper_style_leaves_lower_triangle_blank(self):
        x, y = Poly.variable(Var("x")), Poly.variable(Var("y"))
        q = penalty_to_qubo(2 * x * y - 3 * x + 1)
        lines = emit_matrix(q, style="upper").splitlines()
        assert lines[1] == "x\t-3\t2"
        assert lines[2] == "y\t\t"

    def test_symmetric_style_mirrors_couplings(self):
        x, y = Poly.variable(Var("x")), Poly.variable(Var("y"))
        q = penalty_to_qubo(2 * x * y)
        lines = emit_matrix(q).splitlines()
        assert lines[1] == "x\t\t2"
        assert lines[2] == "y\t2\t"

    def test_offset_comment(self):
        x = Poly.variable(Var("x"))
        q = penalty_to_qubo(x + 5)
        out = emit_matrix(q, include_offset=True)
        assert out.rstrip().endswith("# offset: 5")

    def test_unknown_style_rejected(self):
        q = penalty_to_qubo(Poly.variable(Var("x")))
        with pytest.raises(ValueError):
            emit_matrix(q, style="lower")


def test_qubo_requires_quadratic_input():
    x, y, z = (Poly.variable(Var(n)) for n in "xyz")
    with pytest.raises(DegreeError):
        penalty_to_qubo(x * y * z)


def test_explicit_variable_order():
    x, y = Poly.variable(Var("x")), Poly.variable(Var("y"))
    q = penalty_to_qubo(x + 2 * y, variables=(Var("y"), Var("x")))
    assert [v.name for v in q.variables] == ["y", "x"]
    assert q.diagonal == (Fraction(2), Fraction(1))


def test_entry_accessor_is_symmetric():
    x, y = Poly.variable(Var("x")), Poly.variable(Var("y"))
    q = penalty_to_qubo(3 * x * y)
    assert q.entry(0, 1) == 3
    assert q.entry(1, 0) == 3
    assert q.entry(0, 0) == 0
