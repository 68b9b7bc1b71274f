"""Canonical text form of a subspace.

    q=<q> n=<n> k=<k>
    <k lines of n space-separated decimal entries, RREF row order>

Every line ends with ``\\n``. Because the basis is the unique RREF, equal
subspaces always serialise to identical bytes.
"""
from __future__ import annotations

import re
from typing import Iterator

import numpy as np

from .gf import FieldSpec, Matrix, rref
from .lattice import Subspace

_INT = r"(?:0|[1-9][0-9]*)"
_HEADER = re.compile(rf"q=({_INT}) n=({_INT}) k=({_INT})")
_ENTRY = re.compile(_INT)


class FormatError(ValueError):
    """Malformed serialized data."""


def subspace_to_text(x: Subspace) -> str:
    lines = [f"q={x.q} n={x.n} k={x.dim}\n"]
    lines.extend(" ".join(str(int(v)) for v in row) + "\n" for row in x.basis.data)
    return "".join(lines)


def subspace_to_bytes(x: Subspace) -> bytes:
    return subspace_to_text(x).encode("ascii")


def read_subspace(lines: Iterator[str]) -> Subspace:
    """Consume one serialized subspace from an iterator of lines (without newlines)."""
    try:
        header = next(lines)
    except StopIteration:
        raise FormatError("expected a subspace header, got end of input") from None
    m = _HEADER.fullmatch(header)
    if not m:
        raise FormatError(f"bad subspace header {header!r}")
    q, n, k = (int(g) for g in m.groups())
    try:
        field = FieldSpec(q)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if k > n:
        raise FormatError(f"subspace of dimension {k} in ambient dimension {n}")
    rows = []
    for _ in range(k):
        try:
            line = next(lines)
        except StopIteration:
            raise FormatError("truncated subspace basis") from None
        parts = line.split(" ")
        if len(parts) != n or not all(_ENTRY.fullmatch(p) for p in parts):
            raise FormatError(f"bad basis row {line!r}")
        row = [int(p) for p in parts]
        if any(v >= q for v in row):
            raise FormatError(f"entry out of range in {line!r}")
        rows.append(row)
    basis = Matrix(field, np.array(rows, dtype=np.int64).reshape(k, n), _trusted=True)
    red = rref(basis)
    if red.rank != k or red.R != basis:
        raise FormatError("basis is not in canonical reduced row echelon form")
    return Subspace(field, n, basis)


def subspace_from_text(text: str) -> Subspace:
    lines = iter(text.split("\n"))
    x = read_subspace(lines)
    rest = list(lines)
    if rest != [""]:
        raise FormatError("trailing data after subspace")
    return x
