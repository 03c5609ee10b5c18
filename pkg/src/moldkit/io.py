"""JSON ingestion and emission.

Scalars travel as strings ("3", "-2/7", residues) so no precision is ever
lost; parsing normalizes (fractions reduced, residues into [0, p)).
Serialization is canonical: sorted keys, no whitespace, so equal values
produce byte-identical documents.
"""

from __future__ import annotations

import json

from .borel import GROUP, MONOID, Representation
from .errors import InputError
from .fields import field_from_descriptor
from .linalg import Matrix


def matrix_to_lists(mat: Matrix):
    f = mat.field.format
    return [[f(x) for x in row] for row in mat.rows]


def matrix_from_lists(field, rows, n=None) -> Matrix:
    if not isinstance(rows, list) or not rows:
        raise InputError("matrix must be a non-empty list of rows")
    if n is not None and len(rows) != n:
        raise InputError(f"matrix must have degree {n}")
    try:
        return Matrix(field, [[field.coerce(x) for x in row] for row in rows])
    except TypeError as exc:
        raise InputError(f"malformed matrix entries: {rows!r}") from exc


def parse_representation(doc) -> Representation:
    """Parse the representation input document, re-checking all invariants."""
    if not isinstance(doc, dict):
        raise InputError("representation document must be a JSON object")
    for key in ("field", "n", "kind", "generators"):
        if key not in doc:
            raise InputError(f"representation document missing {key!r}")
    field = field_from_descriptor(doc["field"])
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise InputError(f"degree must be a positive integer, got {n!r}")
    kind = doc["kind"]
    if kind not in (MONOID, GROUP):
        raise InputError(f"kind must be 'monoid' or 'group', got {kind!r}")
    gens = doc["generators"]
    if not isinstance(gens, list):
        raise InputError("generators must be a list of matrices")
    images = [matrix_from_lists(field, g, n) for g in gens]
    return Representation(field, n, kind, images)


def representation_to_doc(rep: Representation) -> dict:
    return {
        "field": rep.field.descriptor(),
        "n": rep.n,
        "kind": rep.kind,
        "generators": [matrix_to_lists(g) for g in rep.images],
    }


def parse_matrices(doc, count=None):
    """Parse {"field": ..., "matrices": [...]} documents (discriminants)."""
    if not isinstance(doc, dict):
        raise InputError("matrices document must be a JSON object")
    for key in ("field", "matrices"):
        if key not in doc:
            raise InputError(f"matrices document missing {key!r}")
    field = field_from_descriptor(doc["field"])
    mats = doc["matrices"]
    if not isinstance(mats, list):
        raise InputError("matrices must be a list")
    if count is not None and len(mats) != count:
        raise InputError(f"expected exactly {count} matrices, got {len(mats)}")
    return field, [matrix_from_lists(field, m) for m in mats]


def dump_json(obj) -> str:
    """Canonical JSON: sorted keys, compact separators, UTF-8-safe."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def load_json_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc
