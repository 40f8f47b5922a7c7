"""Boolean operation catalog and truth-table relations."""

import pytest

from qubogates import (
    BoolOp,
    ValidSet,
    Var,
    VarKind,
    distinct_binary_columns,
    eval_op,
    relation_of,
    truth_table,
)
from qubogates.boolops import arity

I = Var("i")
J = Var("j")
K = Var("k", VarKind.OUTPUT)
A = Var("a", VarKind.ANCILLA)

# output bit per input row, rows descending (1,1), (1,0), (0,1), (0,0)
BINARY_COLUMNS = {
    BoolOp.AND: (1, 0, 0, 0),
    BoolOp.OR: (1, 1, 1, 0),
    BoolOp.IMPLIES: (1, 0, 1, 1),
    BoolOp.XOR: (0, 1, 1, 0),
    BoolOp.EQUIV: (1, 0, 0, 1),
    BoolOp.A: (0, 0, 0, 1),
    BoolOp.B: (0, 1, 1, 1),
    BoolOp.C: (1, 1, 0, 1),
    BoolOp.D: (0, 0, 1, 0),
    BoolOp.E: (0, 1, 0, 0),
}

UNARY_COLUMNS = {
    BoolOp.COPY: (1, 0),
    BoolOp.NOT: (0, 1),
}


@pytest.mark.parametrize("op,column", sorted(BINARY_COLUMNS.items(), key=lambda t: t[0].name))
def test_binary_truth_columns(op, column):
    tt = truth_table(op)
    assert [ins for ins, _ in tt.rows] == [(1, 1), (1, 0), (0, 1), (0, 0)]
    assert tuple(out for _, out in tt.rows) == column


@pytest.mark.parametrize("op,column", sorted(UNARY_COLUMNS.items(), key=lambda t: t[0].name))
def test_unary_truth_columns(op, column):
    tt = truth_table(op)
    assert [ins for ins, _ in tt.rows] == [(1,), (0,)]
    assert tuple(out for _, out in tt.rows) == column


def test_the_ten_binary_columns_are_distinct():
    assert distinct_binary_columns()
    assert len(set(BINARY_COLUMNS.values())) == len(BINARY_COLUMNS)


def test_constants_are_nullary():
    assert truth_table(BoolOp.CONST0).rows == (((), 0),)
    assert truth_table(BoolOp.CONST1).rows == (((), 1),)


def test_arity():
    assert arity(BoolOp.AND) == 2
    assert arity(BoolOp.NOT) == 1
    assert arity(BoolOp.CONST1) == 0


class TestEvalOp:
    def test_matches_truth_table(self):
        for op in BoolOp:
            for ins, out in truth_table(op).rows:
                assert eval_op(op, ins) == out

    def test_wrong_arity_rejected(self):
        with pytest.raises(ValueError):
            eval_op(BoolOp.AND, (1,))

    def test_nonbinary_input_rejected(self):
        with pytest.raises(ValueError):
            eval_op(BoolOp.NOT, (2,))


class TestRelationOf:
    def test_plain_relation_members(self):
        rel = relation_of(BoolOp.XOR, K, (I, J))
        assert [v.name for v in rel.vars] == ["i", "j", "k"]
        assert rel.members == frozenset({(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)})

    def test_relation_with_ancilla_product(self):
        rel = relation_of(BoolOp.XOR, K, (I, J), ancillas=((A, (I, J)),))
        assert [v.name for v in rel.vars] == ["i", "j", "k", "a"]
        for i, j, k, a in rel.members:
            assert k == i ^ j
            assert a == i * j
        assert len(rel.members) == 4

    def test_implication_relation(self):
        rel = relation_of(BoolOp.IMPLIES, K, (I, J))
        assert (1, 0, 0) in rel.members
        assert (1, 0, 1) not in rel.members


def test_valid_set_from_predicate_matches_relation():
    rel = relation_of(BoolOp.AND, K, (I, J))
    pred = ValidSet.from_predicate(
        (I, J, K), lambda m: m[K] == (m[I] & m[J])
    )
    assert pred == rel
