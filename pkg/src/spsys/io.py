"""JSON documents for systems, ideals, and reports.

Complex scalars are serialized as ``[re, im]`` pairs, matrices as
row-major nested arrays.  A system document stores the commutation matrix
plus fiber bases; degrees (0,0), (1,0), (0,1) may be omitted and default
to the full fibers.  An ideal document stores non-commutative generators
as lists of ``{"word": ..., "coeff": ...}`` terms, words written with
tokens ``z1..zm`` and ``w1..wn``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .commutation import CommutationRelation
from .ncpoly import NCPolynomial, string_to_word, word_to_string
from .subproduct import (
    STANDARD_DEGREES,
    SubproductSystem,
    graded_degrees,
)
from .tensor_linalg import (
    DEFAULT_RANK_TOL,
    Degree,
    block_dim,
    identity,
    projection_onto_span,
)

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    """Structurally invalid document: bad schema, shapes, or degrees."""


def complex_to_pair(c: complex) -> list[float]:
    c = complex(c)
    # the + 0.0 normalizes negative zeros away for byte-stable output
    return [float(c.real) + 0.0, float(c.imag) + 0.0]


def pair_to_complex(obj) -> complex:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise DocumentError(f"expected a [re, im] pair, got {obj!r}")
    re, im = obj
    if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise DocumentError(f"non-numeric entries in pair {obj!r}")
    return complex(re, im)


def vector_to_json(v: np.ndarray) -> list:
    return [complex_to_pair(c) for c in np.asarray(v, dtype=complex).reshape(-1)]


def json_to_vector(obj) -> np.ndarray:
    if not isinstance(obj, list):
        raise DocumentError(f"expected a vector (list), got {type(obj).__name__}")
    return np.array([pair_to_complex(c) for c in obj], dtype=complex)


def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return [[complex_to_pair(c) for c in row] for row in a]


def json_to_matrix(obj, shape: tuple[int, int] | None = None) -> np.ndarray:
    if not isinstance(obj, list):
        raise DocumentError(f"expected a matrix (list of rows), got {type(obj).__name__}")
    rows = [json_to_vector(row) for row in obj]
    if not rows:
        out = np.zeros((0, 0), dtype=complex)
    else:
        widths = {r.shape[0] for r in rows}
        if len(widths) != 1:
            raise DocumentError("matrix rows of differing lengths")
        out = np.array(rows, dtype=complex)
    if shape is not None and out.shape != shape:
        raise DocumentError(f"matrix of shape {out.shape}, expected {shape}")
    return out


def _require(doc: Mapping, key: str):
    if key not in doc:
        raise DocumentError(f"document is missing the {key!r} field")
    return doc[key]


def _check_header(doc: Mapping) -> tuple[int, int, int]:
    version = _require(doc, "schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {version!r}")
    m, n, D = _require(doc, "m"), _require(doc, "n"), _require(doc, "D")
    for name, value in (("m", m), ("n", n), ("D", D)):
        if not isinstance(value, int) or value < 0:
            raise DocumentError(f"field {name!r} must be a non-negative integer")
    return m, n, D


def doc_to_commutation(doc: Mapping) -> CommutationRelation:
    m, n, _ = _check_header(doc)
    u = json_to_matrix(_require(doc, "u"), shape=(m * n, m * n))
    return CommutationRelation(m, n, u)


# -- system documents --------------------------------------------------------


def system_to_doc(sps: SubproductSystem, tol: float = DEFAULT_RANK_TOL,
                  name: str | None = None, notes: str | None = None) -> dict:
    fibers = []
    for deg in graded_degrees(sps.D):
        basis = sps.fiber_basis(deg, tol)
        fibers.append({
            "i": deg[0], "j": deg[1],
            "basis": [vector_to_json(col) for col in basis.T],
        })
    metadata = {}
    if name:
        metadata["name"] = name
    if notes:
        metadata["notes"] = notes
    return {
        "schema_version": SCHEMA_VERSION,
        "m": sps.m, "n": sps.n, "D": sps.D,
        "u": matrix_to_json(sps.cr.u),
        "fibers": fibers,
        "metadata": metadata,
    }


def _read_fibers(doc: Mapping, m: int, n: int, D: int) -> dict[Degree, list[np.ndarray]]:
    raw = _require(doc, "fibers")
    if not isinstance(raw, list):
        raise DocumentError("'fibers' must be a list")
    out: dict[Degree, list[np.ndarray]] = {}
    for entry in raw:
        if not isinstance(entry, Mapping):
            raise DocumentError("each fiber entry must be an object")
        deg = (_require(entry, "i"), _require(entry, "j"))
        if not all(isinstance(x, int) and x >= 0 for x in deg):
            raise DocumentError(f"bad fiber degree {deg!r}")
        if deg[0] + deg[1] > D:
            raise DocumentError(f"fiber degree {deg} beyond truncation {D}")
        if deg in out:
            raise DocumentError(f"duplicate fiber entry at degree {deg}")
        dim = block_dim(m, n, deg)
        vectors = []
        for vec in _require(entry, "basis"):
            v = json_to_vector(vec)
            if v.shape[0] != dim:
                raise DocumentError(
                    f"fiber vector at {deg} has length {v.shape[0]}, ambient is {dim}")
            vectors.append(v)
        out[deg] = vectors
    return out


def doc_to_system(doc: Mapping, tol: float = DEFAULT_RANK_TOL) -> SubproductSystem:
    """Full system from a document; only the standard degrees may be omitted."""
    m, n, D = _check_header(doc)
    cr = doc_to_commutation(doc)
    fibers = _read_fibers(doc, m, n, D)
    proj: dict[Degree, np.ndarray] = {}
    for deg in graded_degrees(D):
        if deg in fibers:
            proj[deg] = projection_onto_span(
                fibers[deg], tol=tol, dim=block_dim(m, n, deg))
        elif deg in STANDARD_DEGREES:
            proj[deg] = identity(block_dim(m, n, deg))
        else:
            raise DocumentError(f"missing fiber inside the truncation at degree {deg}")
    return SubproductSystem(cr, D, proj)


def doc_to_partial(doc: Mapping, tol: float = DEFAULT_RANK_TOL,
                   staircase: Iterable[Degree] | None = None,
                   ) -> tuple[CommutationRelation, dict[Degree, np.ndarray], int]:
    """Partial data on the staircase implied by the present fibers.

    When ``staircase`` is given it selects which stored degrees form the
    partial data; the standard degrees are always included.
    """
    m, n, D = _check_header(doc)
    cr = doc_to_commutation(doc)
    fibers = _read_fibers(doc, m, n, D)
    if staircase is not None:
        wanted = {(int(i), int(j)) for i, j in staircase}
        for deg in wanted:
            if deg not in fibers and deg not in STANDARD_DEGREES:
                raise DocumentError(f"staircase degree {deg} has no stored fiber")
        fibers = {deg: vecs for deg, vecs in fibers.items() if deg in wanted}
    partial = {
        deg: projection_onto_span(vecs, tol=tol, dim=block_dim(m, n, deg))
        for deg, vecs in fibers.items()}
    return cr, partial, D


def parse_staircase(text: str) -> list[Degree]:
    """Parse a staircase flag like ``"0,0;1,0;0,1;2,0"``."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise DocumentError(f"bad staircase entry {chunk!r}")
        try:
            out.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise DocumentError(f"bad staircase entry {chunk!r}") from exc
    return out


# -- ideal documents ----------------------------------------------------------


def poly_to_json(p: NCPolynomial) -> list:
    return [{"word": word_to_string(p.m, word), "coeff": complex_to_pair(c)}
            for word, c in sorted(p.terms.items())]


def json_to_poly(obj, m: int, n: int) -> NCPolynomial:
    if not isinstance(obj, list):
        raise DocumentError("a polynomial must be a list of terms")
    terms: dict[tuple[int, ...], complex] = {}
    for term in obj:
        if not isinstance(term, Mapping):
            raise DocumentError("each polynomial term must be an object")
        word_text = _require(term, "word")
        if not isinstance(word_text, str):
            raise DocumentError("term word must be a string")
        try:
            word = string_to_word(m, n, word_text)
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
        coeff = pair_to_complex(_require(term, "coeff"))
        terms[word] = terms.get(word, 0) + coeff
    return NCPolynomial(m, n, terms)


def ideal_to_doc(cr: CommutationRelation, generators: Sequence[NCPolynomial],
                 D: int, name: str | None = None, notes: str | None = None) -> dict:
    metadata = {}
    if name:
        metadata["name"] = name
    if notes:
        metadata["notes"] = notes
    return {
        "schema_version": SCHEMA_VERSION,
        "m": cr.m, "n": cr.n, "D": D,
        "u": matrix_to_json(cr.u),
        "generators": [poly_to_json(g) for g in generators],
        "metadata": metadata,
    }


def doc_to_ideal(doc: Mapping) -> tuple[CommutationRelation, list[NCPolynomial], int]:
    m, n, D = _check_header(doc)
    cr = doc_to_commutation(doc)
    raw = _require(doc, "generators")
    if not isinstance(raw, list):
        raise DocumentError("'generators' must be a list")
    return cr, [json_to_poly(g, m, n) for g in raw], D


def parse_point(text: str, m: int, n: int):
    """Parse a point flag like ``"0.5,0.2;0.1+0.3j"`` into (z, w) arrays."""
    parts = text.split(";")
    if len(parts) != 2:
        raise DocumentError("point must be 'z1,..,zm;w1,..,wn'")

    def _side(chunk: str, count: int, label: str) -> np.ndarray:
        items = [s.strip() for s in chunk.split(",") if s.strip()]
        if len(items) != count:
            raise DocumentError(f"{label}-part has {len(items)} entries, expected {count}")
        try:
            return np.array([complex(s) for s in items], dtype=complex)
        except ValueError as exc:
            raise DocumentError(f"bad complex literal in {label}-part") from exc

    return _side(parts[0], m, "z"), _side(parts[1], n, "w")
