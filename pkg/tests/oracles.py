"""Independent oracles used to freeze expected values.

Each oracle deliberately takes a different computational route than the
library: explicit index loops instead of numpy.kron, Gram-Schmidt instead
of SVD, eigendecomposition instead of kernel stacking, tensordot-based
slot moves instead of matrix-factor products.
"""

from __future__ import annotations

import numpy as np


def kron_oracle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Four-index definition of the tensor product."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def gram_schmidt(vectors, tol: float = 1e-10) -> list[np.ndarray]:
    """Classical Gram-Schmidt, dropping dependent vectors."""
    basis: list[np.ndarray] = []
    for v in vectors:
        v = np.asarray(v, dtype=complex).copy()
        for q in basis:
            v -= np.vdot(q, v) * q
        norm = np.linalg.norm(v)
        if norm > tol:
            basis.append(v / norm)
    return basis


def projection_oracle(vectors, tol: float = 1e-10) -> np.ndarray:
    basis = gram_schmidt(vectors, tol)
    d = np.asarray(vectors[0]).shape[0]
    out = np.zeros((d, d), dtype=complex)
    for q in basis:
        out += np.outer(q, q.conj())
    return out


def meet_oracle(p1: np.ndarray, p2: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Intersection projection via eigenvectors of p1 + p2 at eigenvalue 2."""
    w, v = np.linalg.eigh(p1 + p2)
    cols = v[:, w > 2 - tol]
    return cols @ cols.conj().T


def operator_norm_oracle(a: np.ndarray) -> float:
    """Square root of the top eigenvalue of a* a."""
    if a.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(a.conj().T @ a)
    return float(np.sqrt(max(w.max(), 0.0)))


def _apply_adjacent_exchange(u: np.ndarray, m: int, n: int, tensor: np.ndarray,
                             axis: int) -> np.ndarray:
    """Apply u to the (F, E) slot pair at (axis, axis + 1) of a tensor."""
    # u rows are indexed by (e_out, f_out), columns by (f_in, e_in)
    u_t = u.reshape(m, n, n, m)
    moved = np.tensordot(u_t, tensor, axes=([2, 3], [axis, axis + 1]))
    return np.moveaxis(moved, [0, 1], [axis, axis + 1])


def exchange_oracle(u: np.ndarray, m: int, n: int, f_pow: int, e_pow: int) -> np.ndarray:
    """Slot-by-slot adjacent-transposition realization of the block exchange.

    Starting from F^f_pow (x) E^e_pow, the rightmost F-slot is bubbled past
    every E-slot, then the next F-slot, until all E-slots lead.  Returns the
    matrix of the resulting map.
    """
    dims_in = [n] * f_pow + [m] * e_pow
    dim = int(np.prod(dims_in)) if dims_in else 1
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        vec = np.zeros(dim, dtype=complex)
        vec[col] = 1.0
        tensor = vec.reshape(dims_in)
        labels = ["F"] * f_pow + ["E"] * e_pow
        for f_slot in range(f_pow - 1, -1, -1):
            pos = f_slot
            while pos + 1 < len(labels) and labels[pos + 1] == "E":
                tensor = _apply_adjacent_exchange(u, m, n, tensor, pos)
                labels[pos], labels[pos + 1] = labels[pos + 1], labels[pos]
                pos += 1
        out[:, col] = tensor.reshape(-1)
    return out


def qx_coefficients_oracle(x: np.ndarray, degree, m: int, n: int) -> dict:
    """Monomial coefficients by grouping words over letter multisets."""
    from itertools import product

    i, j = degree
    coeffs: dict = {}
    for word in product(*([range(m)] * i + [range(n)] * j)):
        flat = 0
        for s in word[:i]:
            flat = flat * m + s
        for t in word[i:]:
            flat = flat * n + t
        z_counts = tuple(sorted(word[:i]))
        w_counts = tuple(sorted(word[i:]))
        key = (z_counts, w_counts)
        coeffs[key] = coeffs.get(key, 0) + complex(x[flat])
    return {k: v for k, v in coeffs.items() if abs(v) > 0}
