"""Multilinear polynomial algebra over named binary variables."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubogates import (
    DuplicateNameError,
    MissingVariableError,
    Poly,
    Var,
    VarKind,
    View,
    all_assignments,
    boolean_to_spin,
    spin_to_boolean,
)

X = Var("x")
Y = Var("y")
Z = Var("z", VarKind.OUTPUT)


def v(var: Var) -> Poly:
    return Poly.variable(var)


class TestAlgebra:
    def test_binary_squares_collapse(self):
        x = v(X)
        assert x * x == x
        assert (x * x * x) == x

    def test_squared_difference_expansion(self):
        x, y, z = v(X), v(Y), v(Z)
        sq = (z - x - y - 1) * (z - x - y - 1)
        expected = 2 * x * y - 2 * x * z - 2 * y * z + 3 * x + 3 * y - z + 1
        assert sq == expected

    def test_constant_and_offset(self):
        p = 2 * v(X) + 3
        assert p.offset == 3
        core, dropped = p.drop_offset()
        assert dropped == 3
        assert core.offset == 0
        assert core + 3 == p

    def test_coefficient_lookup(self):
        p = v(X) * v(Y) * 5 - Fraction(1, 2) * v(Y)
        assert p.coefficient((X, Y)) == 5
        assert p.coefficient((Y, X)) == 5
        assert p.coefficient((Y,)) == Fraction(-1, 2)
        assert p.coefficient((X,)) == 0

    def test_degree(self):
        c = Var("c")
        assert Poly.constant(4).degree() == 0
        assert (v(X) + 1).degree() == 1
        assert (v(X) * v(Y)).degree() == 2
        assert (v(c) * v(X) * v(Y)).degree() == 3

    def test_zero_identities(self):
        p = v(X) - v(X)
        assert p.is_zero()
        assert p == Poly.zero()
        assert (Poly.zero() * v(Y)).is_zero()

    def test_duplicate_name_across_kinds_rejected(self):
        with pytest.raises(DuplicateNameError):
            v(Var("x")) + v(Var("x", VarKind.SLACK))


def test_variable_order_is_kind_then_name():
    a = Var("a", VarKind.ANCILLA)
    s = Var("s", VarKind.SLACK)
    p = v(s) + v(a) + v(Z) + v(Y) + v(X)
    assert [u.name for u in p.variables()] == ["x", "y", "z", "a", "s"]


def test_canonical_string_signs():
    p = -2 * v(X) * v(Y) + v(X) - 3 * v(Y) + 1
    assert p.canonical_str() == "-2*x*y + x - 3*y + (offset 1)"
    assert Poly.zero().canonical_str() == "0"


def test_evaluate_requires_every_variable():
    with pytest.raises(MissingVariableError):
        (v(X) + v(Y)).evaluate({X: 1})


def test_all_assignments_binary_descending():
    rows = [a.values for a in all_assignments((X, Y))]
    assert rows == [(1, 1), (1, 0), (0, 1), (0, 0)]


class TestAssignmentViews:
    def test_spin_round_trip(self):
        for a in all_assignments((X, Y, Z)):
            back = a.to_spin().to_bool()
            assert back.values == a.values
            assert back.view is View.BOOL

    def test_spin_values(self):
        (first, *_) = all_assignments((X,))
        assert first.to_spin().values == (1,)
        (*_, last) = all_assignments((X,))
        assert last.to_spin().values == (-1,)

    def test_as_mapping(self):
        a = next(all_assignments((X, Y)))
        assert a.as_mapping() == {X: 1, Y: 1}


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=8)


def _monomials(max_size):
    return st.lists(
        st.sampled_from([X, Y, Z, Var("w")]), unique=True, max_size=max_size
    ).map(tuple)


@st.composite
def polys(draw, max_degree=3):
    terms = draw(st.dictionaries(_monomials(max_degree), coeffs, max_size=6))
    p = Poly.zero()
    for mono, c in terms.items():
        t = Poly.constant(c)
        for var in mono:
            t = t * v(var)
        p = p + t
    return p


def test_spin_form_rejects_cubics():
    from qubogates import DegreeError

    with pytest.raises(DegreeError):
        boolean_to_spin(v(X) * v(Y) * v(Z))


@given(polys(max_degree=2))
def test_spin_form_round_trips_exactly(p):
    assert spin_to_boolean(boolean_to_spin(p)) == p


@given(polys(), polys())
@settings(max_examples=60)
def test_arithmetic_matches_pointwise_evaluation(p, q):
    vs = tuple(sorted(set(p.variables()) | set(q.variables()), key=Var.sort_key))
    for a in all_assignments(vs):
        m = a.as_mapping()
        assert (p + q).evaluate(m) == p.evaluate(m) + q.evaluate(m)
        assert (p * q).evaluate(m) == p.evaluate(m) * q.evaluate(m)
        assert (p - q).evaluate(m) == p.evaluate(m) - q.evaluate(m)


@given(polys(max_degree=2))
@settings(max_examples=40)
def test_spin_view_evaluates_identically(p):
    s = boolean_to_spin(p)
    for a in all_assignments(tuple(p.variables())):
        spun = a.to_spin()
        assert p.evaluate(a.as_mapping()) == s.evaluate(spun.as_mapping())
