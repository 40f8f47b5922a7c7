"""Penalty construction: operation table, equations, inequalities, quadratization."""

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubogates import (
    BoolOp,
    GapVerificationError,
    InfeasibleBoundError,
    ParseError,
    Penalty,
    Poly,
    ValidSet,
    Var,
    VarKind,
    all_assignments,
    builtin_penalty,
    compile_constraint,
    compile_inequality,
    equation_to_penalty,
    inequality_to_equation,
    op_penalty,
    parse_constraint,
    quadratize,
    verify_gap,
)
from qubogates.parse import OpApplication, ParsedInequality
from qubogates.penalty import VAR_A, VAR_I, VAR_J, VAR_K

GOLDEN = Path(__file__).parent / "golden"

i, j, k, a = (Poly.variable(v) for v in (VAR_I, VAR_J, VAR_K, VAR_A))


# Expected penalty polynomial and shared valid value for every built-in
# operation, written out long-hand.  The valid values come straight from
# enumerating each polynomial over its variables.
OPERATION_TABLE = {
    BoolOp.COPY: (-2 * i * k + i + k, 0),
    BoolOp.NOT: (2 * i * k - i - k, -1),
    BoolOp.AND: (i * j - 2 * (i + j) * k + 3 * k, 0),
    BoolOp.OR: (i * j + (i + j) * (1 - 2 * k) + k, 0),
    BoolOp.IMPLIES: (
        4 * i * j + 2 * i * k - 6 * (i + j) * a - 2 * k * a - i - k + 9 * a,
        -1,
    ),
    BoolOp.XOR: (
        2 * i * j - 2 * (i + j) * k - 4 * (i + j) * a + 4 * k * a + i + j + k + 4 * a,
        0,
    ),
    BoolOp.EQUIV: (
        2 * i * j + 2 * (i + j) * k - 4 * (i + j) * a - 4 * k * a - i - j - k + 8 * a,
        -1,
    ),
}


@pytest.mark.parametrize("op", sorted(OPERATION_TABLE, key=lambda o: o.name))
def test_builtin_penalty_polynomials(op):
    expected_poly, expected_value = OPERATION_TABLE[op]
    pen = builtin_penalty(op)
    assert pen.poly == expected_poly
    assert pen.valid_value == expected_value


@pytest.mark.parametrize("op", sorted(OPERATION_TABLE, key=lambda o: o.name))
def test_builtin_penalties_verify_with_unit_gap(op):
    pen = builtin_penalty(op)
    report = verify_gap(pen.poly, pen.valid_set)
    assert report.passed
    assert report.gap >= 1
    assert report.valid_value == pen.valid_value


def test_corrupted_penalty_fails_verification():
    pen = builtin_penalty(BoolOp.AND)
    bad = pen.poly + i * j  # doubles one coupling
    report = verify_gap(bad, pen.valid_set)
    assert not report.passed
    assert report.violations


def test_verify_gap_catches_joint_output_ancilla_cheating():
    # A polynomial that is correct whenever a = i*j but drops below the
    # valid value on a row where the product binding is broken.
    pen = builtin_penalty(BoolOp.XOR)
    cheat = pen.poly - 2 * a * (1 - i)
    report = verify_gap(cheat, pen.valid_set)
    assert not report.passed


class TestComposedForms:
    """The two operations whose table entries come from other rows."""

    def test_equivalence_is_negated_xor_plus_and_binding(self):
        and_binding = i * j - 2 * (i + j) * a + 3 * a
        expected = -builtin_penalty(BoolOp.XOR).poly + 4 * and_binding
        assert builtin_penalty(BoolOp.EQUIV).poly == expected

    def test_implication_is_squared_equation_with_weight_three(self):
        diff = k - (1 - i + i * j)
        core, dropped = (diff * diff).drop_offset()
        quad, bindings = quadratize(
            core, 3, prefer_pairs=((VAR_I, VAR_J),), name_for=lambda pair, n: VAR_A
        )
        assert dropped == 1
        assert builtin_penalty(BoolOp.IMPLIES).poly == quad
        assert len(bindings) == 1
        assert bindings[0].weight == 3


def test_op_penalty_renames_template_variables():
    x = Var("x")
    y = Var("y")
    out = Var("r", VarKind.OUTPUT)
    pen = op_penalty(BoolOp.AND, out, (x, y))
    assert [v.name for v in pen.variables] == ["x", "y", "r"]
    report = verify_gap(pen.poly, pen.valid_set)
    assert report.passed


class TestWorkedTables:
    def test_negation_table_golden(self):
        pen = builtin_penalty(BoolOp.NOT)
        report = verify_gap(pen.poly, pen.valid_set, keep_table=True)
        rendered = report.render(order="valid-first")
        assert rendered == (GOLDEN / "not_table.txt").read_text()

    def test_sum_equation_table_golden(self):
        pen = compile_constraint("z = x + y + 1")
        assert pen.dropped_offset == 1
        assert pen.valid_value == -1
        report = verify_gap(pen.poly, pen.valid_set, keep_table=True)
        rendered = report.render(order="binary-desc")
        assert rendered == (GOLDEN / "eq_xy1_table.txt").read_text()

    def test_sum_equation_values_column(self):
        pen = compile_constraint("z = x + y + 1")
        vs = tuple(pen.poly.variables())
        values = [pen.poly.evaluate(a.as_mapping()) for a in all_assignments(vs)]
        assert values == [3, 8, 0, 3, 0, 3, -1, 0]


class TestEquations:
    def test_linear_equation_penalty(self):
        pen = compile_constraint("x + y = 1")
        assert pen.valid_set.members == frozenset({(1, 0), (0, 1)})
        assert verify_gap(pen.poly, pen.valid_set).passed

    def test_cubic_product_is_quadratized(self):
        pen = compile_constraint("w = x * y * z")
        assert pen.poly.degree() <= 2
        assert pen.ancillas
        assert verify_gap(pen.poly, pen.valid_set).passed

    def test_unsatisfiable_equation_is_flagged(self):
        pen = compile_constraint("x + y = 5")
        assert not pen.satisfiable
        assert pen.valid_set.members == frozenset()

    def test_contradiction_is_flagged(self):
        pen = compile_constraint("x = x + 1")
        assert not pen.satisfiable

    def test_explicit_weight_is_never_escalated(self):
        x, y, z, w = (Poly.variable(Var(n)) for n in "xyzw")
        lhs = Poly.variable(Var("r", VarKind.OUTPUT))
        with pytest.raises(GapVerificationError):
            equation_to_penalty(lhs, x * y * z * w, weight=Fraction(1, 4))


class TestInequalities:
    def test_rule_of_thumb_slack_count(self):
        _, bound, slacks = inequality_to_equation(
            (Var("x"), Var("y"), Var("z")), "<=", 2
        )
        assert bound == 2
        assert [s.name for s in slacks] == ["s", "t"]
        assert all(s.kind is VarKind.SLACK for s in slacks)

    def test_minimal_mode_uses_fewer_slacks_when_bound_is_small(self):
        vs = tuple(Var(n) for n in "wxyz")
        _, _, full = inequality_to_equation(vs, "<=", 1, mode="full")
        _, _, minimal = inequality_to_equation(vs, "<=", 1, mode="minimal")
        assert len(full) == 3
        assert len(minimal) == 1

    def test_minimal_mode_for_lower_bounds(self):
        vs = tuple(Var(n) for n in "xyz")
        _, _, minimal = inequality_to_equation(vs, ">=", 2, mode="minimal")
        assert len(minimal) == 1

    @pytest.mark.parametrize("mode", ["full", "minimal"])
    @pytest.mark.parametrize(
        "sense,bound", [("<=", 0), ("<=", 1), ("<=", 2), (">=", 1), (">=", 3)]
    )
    def test_both_modes_compile_sound_penalties(self, mode, sense, bound):
        vs = tuple(Var(n) for n in "xyz")
        pen = compile_inequality(vs, sense, bound, mode=mode)
        assert verify_gap(pen.poly, pen.valid_set).passed
        # every projection of a minimizer satisfies the inequality
        for member in pen.valid_set.members:
            total = sum(
                bit
                for var, bit in zip(pen.valid_set.vars, member)
                if var.kind is not VarKind.SLACK
            )
            assert total <= bound if sense == "<=" else total >= bound

    def test_impossible_bounds_are_rejected(self):
        with pytest.raises(InfeasibleBoundError):
            inequality_to_equation((Var("x"), Var("y")), "<=", -1)
        with pytest.raises(InfeasibleBoundError):
            inequality_to_equation((Var("x"), Var("y")), ">=", 3)


class TestQuadratize:
    def test_single_cubic_term(self):
        c = Poly.variable(Var("c"))
        m = Poly.variable(Var("m", VarKind.OUTPUT))
        cubic = 2 * c * i * m
        quad, bindings = quadratize(cubic)
        assert quad.degree() <= 2
        assert len(bindings) == 1
        (binding,) = bindings
        # substituting the product back recovers the original on the
        # subspace where the binding holds
        vs = tuple(sorted(set(cubic.variables()), key=Var.sort_key))
        for assn in all_assignments(vs):
            mapping = dict(assn.as_mapping())
            left, right = binding.factors
            mapping[binding.var] = mapping[left] * mapping[right]
            assert quad.evaluate(mapping) == cubic.evaluate(mapping)

    def test_binding_penalty_guards_the_substitution(self):
        c = Poly.variable(Var("c"))
        m = Poly.variable(Var("m", VarKind.OUTPUT))
        quad, bindings = quadratize(2 * c * i * m)
        (binding,) = bindings
        left, right = binding.factors
        broken = {left: 1, right: 1, binding.var: 0}
        for var in quad.variables():
            broken.setdefault(var, 0)
        honest = dict(broken)
        honest[binding.var] = 1
        assert quad.evaluate(broken) > quad.evaluate(honest)


def test_parse_positions_in_errors():
    with pytest.raises(ParseError) as exc:
        parse_constraint("x + + y = 1")
    assert exc.value.line == 1
    assert exc.value.column == 5


def test_parse_recognizes_op_application():
    parsed = parse_constraint("r = AND(x, y)")
    assert isinstance(parsed, OpApplication)
    assert parsed.op is BoolOp.AND
    assert parsed.output == "r"
    assert parsed.inputs == ("x", "y")


def test_parse_recognizes_infix_word_ops():
    parsed = parse_constraint("k = i XOR j")
    assert isinstance(parsed, OpApplication)
    assert parsed.op is BoolOp.XOR


def test_parse_recognizes_inequalities():
    parsed = parse_constraint("x + y + z <= 2")
    assert isinstance(parsed, ParsedInequality)
    assert parsed.sense == "<="
    assert parsed.bound == 2


def test_compile_constraint_op_route_matches_table():
    pen = compile_constraint("k = NOT(i)")
    template = builtin_penalty(BoolOp.NOT)
    assert pen.valid_value == template.valid_value
    assert verify_gap(pen.poly, pen.valid_set).passed


def test_compile_constraint_rejects_reused_output():
    with pytest.raises(ParseError):
        compile_constraint("x = AND(x, y)")


linear_coeffs = st.integers(min_value=-3, max_value=3)


@st.composite
def linear_equations(draw):
    names = draw(
        st.lists(st.sampled_from(list("uvwxyz")), unique=True, min_size=1, max_size=4)
    )
    lhs = Poly.zero()
    for name in names:
        lhs = lhs + draw(linear_coeffs) * Poly.variable(Var(name))
    rhs = Poly.constant(draw(st.integers(min_value=-2, max_value=4)))
    return lhs, rhs


@given(linear_equations())
@settings(max_examples=50, deadline=None)
def test_equation_penalties_verify_or_flag_unsatisfiable(eq):
    lhs, rhs = eq
    pen = equation_to_penalty(lhs, rhs)
    if pen.satisfiable:
        assert verify_gap(pen.poly, pen.valid_set).passed
        diff = lhs - rhs
        for member in pen.valid_set.members:
            mapping = dict(zip(pen.valid_set.vars, member))
            assert diff.evaluate(mapping) == 0
    else:
        assert pen.valid_set.members == frozenset()
