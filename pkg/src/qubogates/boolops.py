"""Boolean operations and the valid-assignment sets they induce.

The two-input operations are the ten truth-table columns that genuinely
depend on both inputs.  Five of them have customary names (AND, OR,
IMPLIES, XOR, EQUIV); the remaining five are unnamed columns and are
addressed by the letters A through E.  Their docstrings state the rows
only.  Row order everywhere is inputs descending: (1,1), (1,0), (0,1),
(0,0) for two inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Sequence

from .pbf import Var, VarKind


class BoolOp(Enum):
    # two-input columns
    AND = "AND"
    OR = "OR"
    IMPLIES = "IMPLIES"
    XOR = "XOR"
    EQUIV = "EQUIV"
    A = "A"  # rows (1,1),(1,0),(0,1),(0,0) -> 0,0,0,1
    B = "B"  # rows -> 0,1,1,1
    C = "C"  # rows -> 1,1,0,1
    D = "D"  # rows -> 0,0,1,0
    E = "E"  # rows -> 0,1,0,0
    # one-input
    COPY = "COPY"
    NOT = "NOT"
    # constants
    CONST0 = "CONST0"
    CONST1 = "CONST1"


# Output column for input rows (1,1), (1,0), (0,1), (0,0).
_BINARY_COLUMNS: dict[BoolOp, tuple[int, int, int, int]] = {
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

_UNARY_COLUMNS: dict[BoolOp, tuple[int, int]] = {
    # rows (1,), (0,)
    BoolOp.COPY: (1, 0),
    BoolOp.NOT: (0, 1),
}


def arity(op: BoolOp) -> int:
    if op in _BINARY_COLUMNS:
        return 2
    if op in _UNARY_COLUMNS:
        return 1
    return 0


def eval_op(op: BoolOp, inputs: Sequence[int]) -> int:
    """Apply an operation to bits.  Input length must match the arity."""
    if len(inputs) != arity(op):
        raise ValueError(f"{op.value} takes {arity(op)} inputs, got {len(inputs)}")
    for b in inputs:
        if b not in (0, 1):
            raise ValueError(f"inputs must be bits, got {b!r}")
    if op is BoolOp.CONST0:
        return 0
    if op is BoolOp.CONST1:
        return 1
    if op in _UNARY_COLUMNS:
        return _UNARY_COLUMNS[op][1 - inputs[0]]
    col = _BINARY_COLUMNS[op]
    i, j = inputs
    row = {(1, 1): 0, (1, 0): 1, (0, 1): 2, (0, 0): 3}[(i, j)]
    return col[row]


@dataclass(frozen=True)
class TruthTable:
    """Rows of an operation, inputs descending."""

    op: BoolOp
    rows: tuple[tuple[tuple[int, ...], int], ...]

    def output(self, inputs: Sequence[int]) -> int:
        for ins, out in self.rows:
            if tuple(inputs) == ins:
                return out
        raise KeyError(f"no row for inputs {tuple(inputs)}")


def truth_table(op: BoolOp) -> TruthTable:
    n = arity(op)
    rows = []
    for code in range(2 ** n - 1, -1, -1):
        ins = tuple((code >> (n - 1 - t)) & 1 for t in range(n))
        rows.append((ins, eval_op(op, ins)))
    return TruthTable(op, tuple(rows))


# -- valid sets ----------------------------------------------------------------


@dataclass(frozen=True)
class ValidSet:
    """The assignments a penalty must single out.

    `vars` fixes bit order; `members` holds the accepted bit tuples.
    """

    vars: tuple[Var, ...]
    members: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("valid set variables must be distinct")
        n = len(self.vars)
        for bits in self.members:
            if len(bits) != n or any(b not in (0, 1) for b in bits):
                raise ValueError(f"bad member {bits!r} for {n} variables")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, bits: tuple[int, ...]) -> bool:
        return bits in self.members

    @classmethod
    def from_predicate(
        cls, vs: Sequence[Var], accept: Callable[[dict[Var, int]], bool]
    ) -> "ValidSet":
        vs = tuple(vs)
        n = len(vs)
        members = []
        for code in range(2 ** n):
            bits = tuple((code >> (n - 1 - t)) & 1 for t in range(n))
            if accept(dict(zip(vs, bits))):
                members.append(bits)
        return cls(vs, frozenset(members))


AncillaDef = tuple[Var, tuple[Var, Var]]


def relation_of(
    op: BoolOp,
    output: Var,
    inputs: Sequence[Var],
    ancillas: Iterable[AncillaDef] = (),
) -> ValidSet:
    """Valid set of output = op(inputs), with ancillas bound to products.

    Each ancilla definition (a, (u, w)) requires a = u * w on valid rows,
    so joint output+ancilla falsifications count as invalid.
    """
    if len(inputs) != arity(op):
        raise ValueError(f"{op.value} takes {arity(op)} inputs, got {len(inputs)}")
    ancillas = tuple(ancillas)
    ordered = tuple(sorted(set(inputs) | {output} | {a for a, _ in ancillas}, key=Var.sort_key))

    def accept(values: dict[Var, int]) -> bool:
        if values[output] != eval_op(op, [values[v] for v in inputs]):
            return False
        for a, (u, w) in ancillas:
            if values[a] != values[u] * values[w]:
                return False
        return True

    return ValidSet.from_predicate(ordered, accept)


def distinct_binary_columns() -> bool:
    """True when the ten two-input columns are pairwise distinct."""
    cols = list(_BINARY_COLUMNS.values())
    return len(set(cols)) == len(cols)
