"""Lifted exchange unitaries built from a base commutation relation.

A commutation relation is a unitary ``u: F (x) E -> E (x) F``.  It extends
to unitaries that move any block of F-factors past any block of E-factors,
and from there to the block exchange maps

    big_w((i, j), (k, l)): E^i F^j E^k F^l -> E^(i+k) F^(j+l)

which multiply graded tensors.  All matrices are materialized densely; a
configurable cell-size bound keeps the ambient dimensions at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_linalg import (
    Degree,
    as_complex_matrix,
    as_complex_vector,
    block_dim,
    identity,
    is_unitary,
    kron,
)

DEFAULT_MAX_CELL_DIM = 4096


class CellBoundError(ValueError):
    """A requested tensor block exceeds the configured dimension bound."""


class RelationUnitarityError(ValueError):
    """The commutation matrix fails the unitarity check."""


@dataclass(frozen=True)
class CommutationRelation:
    """A unitary ``u: F (x) E -> E (x) F`` with ``dim E = m``, ``dim F = n``.

    The matrix acts on flat coordinates: the input basis ``f_l (x) e_k`` is
    flattened with the F-letter most significant, the output basis
    ``e_i (x) f_j`` with the E-letter most significant.  The entry at row
    ``(k, l)`` (output word ``e_k (x) f_l``) and column ``(i, j)`` (input
    word ``f_j (x) e_i``) is the structure coefficient ``u_{(k,l),(i,j)}``
    appearing in the relations ``L_{f_j} L_{e_i} = sum u_{(k,l),(i,j)}
    L_{e_k} L_{f_l}``.
    """

    m: int
    n: int
    u: np.ndarray

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("dimensions must be non-negative")
        u = as_complex_matrix(self.u)
        d = self.m * self.n
        if u.shape != (d, d):
            raise ValueError(f"commutation matrix must be {d}x{d}, got {u.shape}")
        object.__setattr__(self, "u", u)
        if not is_unitary(u, tol=1e-9):
            raise RelationUnitarityError("commutation matrix is not unitary")

    def coefficient(self, k: int, l: int, i: int, j: int) -> complex:
        """Structure coefficient u_{(k,l),(i,j)}, all indices 0-based."""
        return complex(self.u[k * self.n + l, j * self.m + i])


def flip_relation(m: int, n: int) -> CommutationRelation:
    """The tensor flip ``u(f (x) e) = e (x) f``."""
    u = np.zeros((m * n, m * n), dtype=complex)
    for k in range(m):
        for l in range(n):
            u[k * n + l, l * m + k] = 1.0
    return CommutationRelation(m, n, u)


def scalar_relation(lam: complex) -> CommutationRelation:
    """One-dimensional relation ``u(f (x) e) = lam * e (x) f``, |lam| = 1."""
    return CommutationRelation(1, 1, np.array([[lam]], dtype=complex))


def _check_cell(m: int, n: int, e_pow: int, f_pow: int, max_cell_dim: int):
    dim = (m ** e_pow) * (n ** f_pow)
    if dim > max_cell_dim:
        raise CellBoundError(
            f"cell E^{e_pow} F^{f_pow} has dimension {dim} > bound {max_cell_dim}")


def lift_one_n(cr: CommutationRelation, n_pow: int,
               max_cell_dim: int = DEFAULT_MAX_CELL_DIM) -> np.ndarray:
    """Unitary ``F (x) E^n_pow -> E^n_pow (x) F``.

    Realized as the product of ``n_pow`` adjacent-exchange factors
    ``(I_{E^(n-1)} (x) u) ... (I_E (x) u (x) I_{E^(n-2)}) (u (x) I_{E^(n-1)})``.
    """
    if n_pow < 1:
        raise ValueError("n_pow must be >= 1")
    m = cr.m
    _check_cell(m, cr.n, n_pow, 1, max_cell_dim)
    out = None
    for k in range(n_pow):
        factor = kron(identity(m ** k), kron(cr.u, identity(m ** (n_pow - 1 - k))))
        out = factor if out is None else factor @ out
    return out


def lift_m_n(cr: CommutationRelation, m_pow: int, n_pow: int,
             max_cell_dim: int = DEFAULT_MAX_CELL_DIM) -> np.ndarray:
    """Unitary ``F^m_pow (x) E^n_pow -> E^n_pow (x) F^m_pow``.

    Product of ``m_pow`` copies of ``lift_one_n`` slid across the F-block,
    rightmost factor ``I_{F^(m-1)} (x) u^(1,n)`` first.
    """
    if m_pow < 1 or n_pow < 1:
        raise ValueError("powers must be >= 1")
    n = cr.n
    _check_cell(cr.m, n, n_pow, m_pow, max_cell_dim)
    u1 = lift_one_n(cr, n_pow, max_cell_dim=max_cell_dim)
    out = None
    for k in range(m_pow):
        factor = kron(identity(n ** (m_pow - 1 - k)), kron(u1, identity(n ** k)))
        out = factor if out is None else factor @ out
    return out


def exchange(cr: CommutationRelation, f_pow: int, e_pow: int,
             max_cell_dim: int = DEFAULT_MAX_CELL_DIM) -> np.ndarray:
    """``lift_m_n`` extended to zero powers, where it degenerates to I."""
    if f_pow < 0 or e_pow < 0:
        raise ValueError("powers must be >= 0")
    if f_pow == 0:
        return identity(block_dim(cr.m, cr.n, (e_pow, 0)))
    if e_pow == 0:
        return identity(block_dim(cr.m, cr.n, (0, f_pow)))
    return lift_m_n(cr, f_pow, e_pow, max_cell_dim=max_cell_dim)


def big_w(cr: CommutationRelation, left: Degree, right: Degree,
          max_cell_dim: int = DEFAULT_MAX_CELL_DIM) -> np.ndarray:
    """Block exchange unitary ``E^i F^j E^k F^l -> E^(i+k) F^(j+l)``.

    ``left = (i, j)`` and ``right = (k, l)``; the middle F^j block is moved
    past the E^k block, all outer factors untouched.
    """
    (i, j), (k, l) = left, right
    if min(i, j, k, l) < 0:
        raise ValueError("degrees must be non-negative")
    _check_cell(cr.m, cr.n, i + k, j + l, max_cell_dim)
    middle = exchange(cr, j, k, max_cell_dim=max_cell_dim)
    return kron(identity(cr.m ** i), kron(middle, identity(cr.n ** l)))


def fock_product(cr: CommutationRelation, deg_x: Degree, x, deg_y: Degree, y,
                 max_cell_dim: int = DEFAULT_MAX_CELL_DIM) -> tuple[Degree, np.ndarray]:
    """Multiply homogeneous tensors: ``x . y = big_w(x (x) y)``.

    Returns the bidegree of the product along with its coordinate vector.
    """
    x = as_complex_vector(x)
    y = as_complex_vector(y)
    w = big_w(cr, deg_x, deg_y, max_cell_dim=max_cell_dim)
    deg = (deg_x[0] + deg_y[0], deg_x[1] + deg_y[1])
    return deg, w @ np.kron(x, y)
