"""JSON shapes for fields, matrices, subspaces, codes and the bundled fixtures.

Matrices and subspaces: ``{"q", "p", "e", "rows"}`` (plus optional
``"modulus"`` for e > 1).  Entries are integer representatives, packing
polynomial coefficients in base p, little-endian.  Codes:
``{"q", "p", "e", "n", "m", "basis": [matrix rows, ...]}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .codes import RankMetricCode, code_from_basis
from .field import FiniteField, field_make
from .linalg import Mat, Subspace, matrix_json


class FormatError(ValueError):
    pass


def field_from_json(d: dict) -> FiniteField:
    try:
        p, e = int(d["p"]), int(d.get("e", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"missing or bad field description: {exc}") from None
    F = field_make(p, e, d.get("modulus"))
    if "q" in d and int(d["q"]) != F.q:
        raise FormatError(f"q = {d['q']} does not match p^e = {F.q}")
    return F


def _rows(d: dict, key: str = "rows"):
    rows = d.get(key)
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FormatError(f"'{key}' must be a list of integer lists")
    return rows


def matrix_from_json(d: dict, ncols: int | None = None) -> Mat:
    F = field_from_json(d)
    rows = _rows(d)
    if not rows and ncols is None:
        ncols = d.get("cols")
        if ncols is None:
            raise FormatError("an empty matrix needs a 'cols' entry")
    try:
        return Mat.of(F, rows, ncols)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def subspace_from_json(d: dict, n: int | None = None) -> Subspace:
    """Rows need not be reduced; they are canonicalised here."""
    F = field_from_json(d)
    rows = _rows(d)
    if n is None:
        n = d.get("n", len(rows[0]) if rows else None)
    if n is None:
        raise FormatError("the zero subspace needs an explicit 'n'")
    try:
        M = Mat.of(F, rows, n)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return Subspace.span(F, M.rows, n)


def subspace_json(V: Subspace) -> dict:
    out = matrix_json(V.field, V.rows)
    out["n"] = V.n
    return out


def code_from_json(d: dict) -> RankMetricCode:
    F = field_from_json(d)
    try:
        n, m = int(d["n"]), int(d["m"])
        basis = d["basis"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad code file: {exc}") from None
    try:
        mats = [Mat.of(F, B, m) for B in basis]
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    for B in mats:
        if B.nrows != n:
            raise FormatError(f"basis matrix with {B.nrows} rows, expected {n}")
    return code_from_basis(mats, field=F, shape=(n, m))


def load_json(path) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None


def load_code(path) -> RankMetricCode:
    return code_from_json(load_json(path))


def load_subspace(path, n: int | None = None) -> Subspace:
    return subspace_from_json(load_json(path), n)


def load_matrix(path, ncols: int | None = None) -> Mat:
    return matrix_from_json(load_json(path), ncols)


def fraction_json(r: Fraction) -> dict:
    return {"num": r.numerator, "den": r.denominator}


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("rankshare") / "fixtures" / name))


def fixture_code(name: str) -> RankMetricCode:
    return load_code(fixture_path(name))


def fixture_subspace(name: str) -> Subspace:
    return load_subspace(fixture_path(name))


def fixture_matrix(name: str) -> Mat:
    return load_matrix(fixture_path(name))
