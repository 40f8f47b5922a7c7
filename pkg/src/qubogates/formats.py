"""Serialization of QUBO matrices: coordinate text and JSON documents.

Both formats carry exact rational coefficients as strings like "-3/4",
the variable names with their roles, and the constant offset, so a
load followed by a dump reproduces the original bytes.  The JSON
document additionally records provenance: which penalty produced the
matrix.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ParseError
from .hamiltonian import QuboMatrix
from .pbf import Var, VarKind

COORD_HEADER = "# qubogates coordinate v1"
DOC_FORMAT = "qubogates-qubo"
DOC_VERSION = 1


def dump_coordinate(q: QuboMatrix) -> str:
    """Coordinate text: header comments, then `row col coefficient` lines.

    Diagonal entries repeat the index (`t t d`).  Only nonzero entries
    appear, sorted by (row, col).  Output is canonical.
    """
    lines = [COORD_HEADER]
    for t, v in enumerate(q.variables):
        lines.append(f"# var {t} {v.name} {v.kind.value}")
    lines.append(f"# offset {q.offset}")
    entries: list[tuple[int, int, Fraction]] = []
    for t, d in enumerate(q.diagonal):
        if d != 0:
            entries.append((t, t, d))
    for (a, b), c in q.upper.items():
        entries.append((a, b, c))
    for a, b, c in sorted(entries):
        lines.append(f"{a} {b} {c}")
    return "\n".join(lines) + "\n"


def load_coordinate(text: str) -> QuboMatrix:
    variables: dict[int, Var] = {}
    offset = Fraction(0)
    diag: dict[int, Fraction] = {}
    upper: dict[tuple[int, int], Fraction] = {}
    index_lines: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("var "):
                parts = body.split()
                if len(parts) != 4:
                    raise ParseError(f"malformed variable header {line!r}", line=lineno)
                _, idx, name, kind = parts
                try:
                    variables[int(idx)] = Var(name, VarKind(kind))
                except ValueError as err:
                    raise ParseError(str(err), line=lineno) from None
            elif body.startswith("offset "):
                offset = Fraction(body.split(None, 1)[1])
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected `row col coeff`, got {line!r}", line=lineno)
        try:
            a, b, c = int(parts[0]), int(parts[1]), Fraction(parts[2])
        except ValueError:
            raise ParseError(f"bad entry {line!r}", line=lineno) from None
        index_lines.setdefault(a, lineno)
        index_lines.setdefault(b, lineno)
        if a == b:
            diag[a] = diag.get(a, Fraction(0)) + c
        else:
            if a > b:
                a, b = b, a
            upper[(a, b)] = upper.get((a, b), Fraction(0)) + c
    if not variables:
        raise ParseError("no variable headers found")
    n = max(variables) + 1
    if sorted(variables) != list(range(n)):
        raise ParseError("variable indices are not contiguous from 0")
    for idx, where in sorted(index_lines.items()):
        if not 0 <= idx < n:
            raise ParseError(
                f"entry references undeclared variable index {idx}", line=where
            )
    ordered = tuple(variables[t] for t in range(n))
    diagonal = tuple(diag.get(t, Fraction(0)) for t in range(n))
    return QuboMatrix(ordered, diagonal, upper, offset)


def dump_document(q: QuboMatrix, provenance: dict[str, Any] | None = None) -> str:
    """Single JSON document with variables, roles, entries, offset, provenance."""
    entries = [[a, b, str(c)] for (a, b), c in sorted(q.upper.items())]
    doc = {
        "format": DOC_FORMAT,
        "version": DOC_VERSION,
        "variables": [{"name": v.name, "kind": v.kind.value} for v in q.variables],
        "diagonal": [str(d) for d in q.diagonal],
        "entries": entries,
        "offset": str(q.offset),
        "provenance": provenance or {},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_document(text: str) -> tuple[QuboMatrix, dict[str, Any]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"not valid JSON: {err}", line=err.lineno, column=err.colno) from None
    if doc.get("format") != DOC_FORMAT:
        raise ParseError(f"unknown document format {doc.get('format')!r}")
    if doc.get("version") != DOC_VERSION:
        raise ParseError(f"unsupported document version {doc.get('version')!r}")
    try:
        variables = tuple(Var(v["name"], VarKind(v["kind"])) for v in doc["variables"])
        diagonal = tuple(Fraction(d) for d in doc["diagonal"])
        upper = {(int(a), int(b)): Fraction(c) for a, b, c in doc["entries"]}
        offset = Fraction(doc["offset"])
        q = QuboMatrix(variables, diagonal, upper, offset)
    except (KeyError, ValueError, TypeError) as err:
        raise ParseError(f"malformed document: {err}") from None
    return q, dict(doc.get("provenance") or {})
