"""Dense complex linear algebra and tensor-index bookkeeping.

Every other module works with complex matrices realized as numpy
``complex128`` arrays and with graded tensor blocks ``E^(x)i (x) F^(x)j``,
where ``dim E = m`` and ``dim F = n``.  This module fixes the one global
flattening convention: basis words are enumerated row-major with the
leftmost tensor factor most significant and all E-factors preceding all
F-factors.  ``numpy.kron`` is consistent with this convention, which is
why it can serve as the tensor product throughout.

Rank decisions are tolerance-based: singular values below
``tol * sigma_max`` count as zero (default ``tol = 1e-9``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.linalg

Degree = tuple[int, int]

DEFAULT_RANK_TOL = 1e-9

# A matrix whose largest singular value sits below this floor counts as zero.
# The relative rule alone is ill-posed there: sigma_max of a numerically-zero
# matrix is roundoff noise, and every noise value exceeds tol * sigma_max.
ZERO_FLOOR = 1e-12


def as_complex_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex128 array."""
    out = np.asarray(a, dtype=complex)
    if out.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {out.ndim}")
    return out


def as_complex_vector(x) -> np.ndarray:
    out = np.asarray(x, dtype=complex).reshape(-1)
    return out


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def block_dim(m: int, n: int, degree: Degree) -> int:
    """Dimension of the ambient block at the given bidegree: m^i * n^j."""
    i, j = degree
    if i < 0 or j < 0:
        raise ValueError(f"negative degree {degree}")
    return (m ** i) * (n ** j)


def all_words(m: int, n: int, degree: Degree) -> Iterator[tuple[int, ...]]:
    """Iterate basis words at a bidegree in flat-index order.

    A word is ``(s_1, ..., s_i, t_1, ..., t_j)`` with ``s`` entries in
    ``range(m)`` and ``t`` entries in ``range(n)``, enumerated with the
    leftmost letter most significant.
    """
    i, j = degree
    for s_part in product(range(m), repeat=i):
        for t_part in product(range(n), repeat=j):
            yield s_part + t_part


@dataclass(frozen=True)
class TensorIndex:
    """A basis word of a graded tensor block together with its bidegree."""

    degree: Degree
    word: tuple[int, ...]

    def __post_init__(self):
        i, j = self.degree
        if len(self.word) != i + j:
            raise ValueError(f"word length {len(self.word)} != degree total {i + j}")

    def flat(self, m: int, n: int) -> int:
        """Row-major flat index, leftmost letter most significant."""
        i, j = self.degree
        idx = 0
        for s in self.word[:i]:
            if not 0 <= s < m:
                raise ValueError(f"E-letter {s} out of range(0, {m})")
            idx = idx * m + s
        for t in self.word[i:]:
            if not 0 <= t < n:
                raise ValueError(f"F-letter {t} out of range(0, {n})")
            idx = idx * n + t
        return idx

    @classmethod
    def from_flat(cls, m: int, n: int, degree: Degree, index: int) -> "TensorIndex":
        i, j = degree
        if not 0 <= index < block_dim(m, n, degree):
            raise ValueError(f"flat index {index} out of range for degree {degree}")
        letters = []
        for _ in range(j):
            letters.append(index % n)
            index //= n
        for _ in range(i):
            letters.append(index % m)
            index //= m
        return cls(degree, tuple(reversed(letters)))


def word_to_flat(m: int, n: int, degree: Degree, word: Sequence[int]) -> int:
    return TensorIndex(degree, tuple(word)).flat(m, n)


def flat_to_word(m: int, n: int, degree: Degree, index: int) -> tuple[int, ...]:
    return TensorIndex.from_flat(m, n, degree, index).word


def kron(a, b) -> np.ndarray:
    """Tensor product of matrices, first factor most significant."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    out = identity(1)
    for mat in mats:
        out = np.kron(out, as_complex_matrix(mat))
    return out


def kron_power(a, k: int) -> np.ndarray:
    if k < 0:
        raise ValueError("negative tensor power")
    return kron_all([a] * k)


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_unitary(a, tol: float = 1e-9) -> bool:
    """True iff ``a a* = a* a = I`` entrywise within tol."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    d = a.shape[0]
    eye = identity(d)
    return _max_abs(a @ a.conj().T - eye) <= tol and _max_abs(a.conj().T @ a - eye) <= tol


def is_projection(p, tol: float = 1e-9) -> bool:
    """True iff ``p`` is self-adjoint and idempotent within tol."""
    p = as_complex_matrix(p)
    if p.shape[0] != p.shape[1]:
        return False
    return _max_abs(p - p.conj().T) <= tol and _max_abs(p @ p - p) <= tol


def operator_norm(a) -> float:
    """Largest singular value."""
    a = as_complex_matrix(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def _span_projection_from_columns(cols: np.ndarray, tol: float) -> np.ndarray:
    d = cols.shape[0]
    if cols.size == 0:
        return np.zeros((d, d), dtype=complex)
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    if s.size == 0 or s[0] <= ZERO_FLOOR:
        return np.zeros((d, d), dtype=complex)
    r = int(np.sum(s > tol * s[0]))
    basis = u[:, :r]
    return basis @ basis.conj().T


def projection_onto_span(vectors: Sequence, tol: float = DEFAULT_RANK_TOL,
                         dim: int | None = None) -> np.ndarray:
    """Orthogonal projection onto the span of the given vectors.

    The rank is decided by singular values above ``tol * sigma_max``.  An
    empty list is only accepted when ``dim`` fixes the ambient dimension.
    """
    vecs = [as_complex_vector(v) for v in vectors]
    if not vecs:
        if dim is None:
            raise ValueError("empty vector list with unspecified ambient dimension")
        return np.zeros((dim, dim), dtype=complex)
    d = vecs[0].shape[0]
    for v in vecs:
        if v.shape[0] != d:
            raise ValueError("vectors of mixed lengths")
    if dim is not None and dim != d:
        raise ValueError(f"vectors of length {d} do not live in dimension {dim}")
    return _span_projection_from_columns(np.column_stack(vecs), tol)


def rank_of_projection(p, tol: float = DEFAULT_RANK_TOL) -> int:
    """Rank of a projection via the singular-value tolerance rule."""
    p = as_complex_matrix(p)
    if p.size == 0:
        return 0
    s = np.linalg.svd(p, compute_uv=False)
    if s.size == 0 or s[0] <= ZERO_FLOOR:
        return 0
    return int(np.sum(s > tol * s[0]))


def orthonormal_range_basis(p, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Columns form an orthonormal basis of the range of a projection.

    Uses column-pivoted QR so that 0/1-diagonal projections yield standard
    basis vectors in their natural order.
    """
    p = as_complex_matrix(p)
    d = p.shape[0]
    r = rank_of_projection(p, tol)
    if r == 0:
        return np.zeros((d, 0), dtype=complex)
    q, _, _ = scipy.linalg.qr(p, pivoting=True)
    return np.ascontiguousarray(q[:, :r])


def meet_projections(ps: Sequence, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthogonal projection onto the intersection of projection ranges.

    Computed exactly (up to the rank tolerance) as the complement of the
    span of the union of the kernels: no iterative alternating step.
    """
    mats = [as_complex_matrix(p) for p in ps]
    if not mats:
        raise ValueError("meet of an empty projection list")
    d = mats[0].shape[0]
    for p in mats:
        if p.shape != (d, d):
            raise ValueError(f"projection size mismatch: {p.shape} vs ({d}, {d})")
    eye = identity(d)
    kernels = np.hstack([eye - p for p in mats])
    return eye - _span_projection_from_columns(kernels, tol)


def vec_norm(x) -> float:
    return float(np.linalg.norm(as_complex_vector(x)))
