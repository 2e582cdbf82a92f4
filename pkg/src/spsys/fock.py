"""Creation operators on the truncated Fock space of a system.

The Fock space is the orthogonal sum of the fibers up to the truncation
degree, each carried by an orthonormal basis of its projection range;
blocks are ordered by total degree, E-heavy degrees first, so the vacuum
sits at index 0 followed by the degree-(1,0) and degree-(0,1) fibers.

A creation operator multiplies on the left by a fiber vector: block
``(k, l)`` maps into block ``(i+k, j+l)`` through the exchange unitary and
the target fiber projection.  Blocks that would exceed the truncation map
to zero, so operator identities are exact on the sub-Fock of total degree
``<= D - deg(argument)`` rather than approximate.

Fourier coefficients are block compressions: the degree-``(i, j)``
coefficient of an operator keeps exactly the blocks shifting sources by
``(i, j)``.  No integrals are discretized; at finite truncation the block
formula is the definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .commutation import big_w
from .subproduct import SubproductSystem, graded_degrees
from .tensor_linalg import (
    DEFAULT_RANK_TOL,
    Degree,
    as_complex_vector,
    operator_norm,
    vec_norm,
)


class TruncatedFock:
    """Block-indexed coordinate model of the Fock space of a system."""

    def __init__(self, sps: SubproductSystem, tol: float = DEFAULT_RANK_TOL):
        self.sps = sps
        self.blocks: list[Degree] = graded_degrees(sps.D)
        self.block_bases: dict[Degree, np.ndarray] = {
            deg: sps.fiber_basis(deg, tol) for deg in self.blocks}
        self.offsets: dict[Degree, int] = {}
        pos = 0
        for deg in self.blocks:
            self.offsets[deg] = pos
            pos += self.block_bases[deg].shape[1]
        self.total_dim = pos

    @property
    def D(self) -> int:
        return self.sps.D

    def block_rank(self, degree: Degree) -> int:
        return self.block_bases[degree].shape[1]

    def block_slice(self, degree: Degree) -> slice:
        start = self.offsets[degree]
        return slice(start, start + self.block_rank(degree))

    def contains_degree(self, degree: Degree) -> bool:
        return degree[0] >= 0 and degree[1] >= 0 and degree[0] + degree[1] <= self.D


@dataclass(frozen=True)
class FockOperator:
    """A matrix acting on the coordinates of a TruncatedFock."""

    fock: TruncatedFock
    matrix: np.ndarray

    def __post_init__(self):
        d = self.fock.total_dim
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (d, d):
            raise ValueError(f"operator matrix must be {d}x{d}, got {mat.shape}")
        object.__setattr__(self, "matrix", mat)

    def _check(self, other: "FockOperator"):
        if other.fock is not self.fock:
            raise ValueError("operators live on different Fock spaces")

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._check(other)
        return FockOperator(self.fock, self.matrix + other.matrix)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        self._check(other)
        return FockOperator(self.fock, self.matrix - other.matrix)

    def __mul__(self, other):
        if isinstance(other, FockOperator):
            self._check(other)
            return FockOperator(self.fock, self.matrix @ other.matrix)
        return FockOperator(self.fock, complex(other) * self.matrix)

    __rmul__ = __mul__
    __matmul__ = __mul__

    def __neg__(self) -> "FockOperator":
        return FockOperator(self.fock, -self.matrix)

    def norm(self) -> float:
        return operator_norm(self.matrix)

    def close_to(self, other: "FockOperator", tol: float = 1e-9) -> bool:
        self._check(other)
        diff = np.abs(self.matrix - other.matrix)
        return float(diff.max()) <= tol if diff.size else True


def identity_operator(fock: TruncatedFock) -> FockOperator:
    return FockOperator(fock, np.eye(fock.total_dim, dtype=complex))


def zero_operator(fock: TruncatedFock) -> FockOperator:
    return FockOperator(fock, np.zeros((fock.total_dim, fock.total_dim), dtype=complex))


def creation_operator(fock: TruncatedFock, degree: Degree, x,
                      tol: float = 1e-9) -> FockOperator:
    """Left multiplication by a vector of the degree-``(i, j)`` fiber.

    ``x`` must lie in the fiber up to tol.  Source block ``(k, l)`` maps to
    ``(i+k, j+l)``; overflow past the truncation maps to zero.
    """
    sps = fock.sps
    x = as_complex_vector(x)
    if x.shape[0] != sps.ambient_dim(degree):
        raise ValueError(f"vector length {x.shape[0]} does not match degree {degree}")
    p = sps.projection(degree)
    defect = vec_norm(p @ x - x)
    if defect > tol * max(1.0, vec_norm(x)):
        raise ValueError(
            f"vector is not in the fiber at {degree} (defect {defect:.3e})")

    i, j = degree
    mat = np.zeros((fock.total_dim, fock.total_dim), dtype=complex)
    for src in fock.blocks:
        tgt = (i + src[0], j + src[1])
        if not fock.contains_degree(tgt):
            continue
        src_basis = fock.block_bases[src]
        tgt_basis = fock.block_bases[tgt]
        if src_basis.shape[1] == 0 or tgt_basis.shape[1] == 0:
            continue
        w = big_w(sps.cr, degree, src)
        images = w @ np.kron(x.reshape(-1, 1), src_basis)
        mat[fock.block_slice(tgt), fock.block_slice(src)] = tgt_basis.conj().T @ images
    return FockOperator(fock, mat)


def generator_operators(fock: TruncatedFock) -> tuple[list[FockOperator], list[FockOperator]]:
    """Creation operators of the standard bases of E and F."""
    m, n = fock.sps.m, fock.sps.n
    es = [creation_operator(fock, (1, 0), _unit(m, a)) for a in range(m)]
    fs = [creation_operator(fock, (0, 1), _unit(n, b)) for b in range(n)]
    return es, fs


def _unit(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def op_norm_check(fock: TruncatedFock, degree: Degree, x,
                  tol: float = 1e-9) -> tuple[float, float]:
    """Operator norm of the creation operator and the vector norm.

    The two agree for every truncation admitting the degree: the vacuum
    column attains the vector norm and every block is contractive.
    """
    op = creation_operator(fock, degree, x, tol=tol)
    return op.norm(), vec_norm(x)


def fourier_coefficient(T: FockOperator, degree: Degree) -> FockOperator:
    """The degree-``(i, j)`` graded component of an operator.

    Keeps exactly the blocks mapping source ``(k, l)`` to
    ``(k+i, l+j)``; equivalently the finite block sum of target-projected,
    source-projected copies of T.
    """
    fock = T.fock
    i, j = degree
    out = np.zeros_like(T.matrix)
    for src in fock.blocks:
        tgt = (src[0] + i, src[1] + j)
        if not fock.contains_degree(tgt):
            continue
        out[fock.block_slice(tgt), fock.block_slice(src)] = \
            T.matrix[fock.block_slice(tgt), fock.block_slice(src)]
    return FockOperator(fock, out)


def fourier_total(T: FockOperator, total: int) -> FockOperator:
    """Sum of the graded components with total degree shift ``total``."""
    fock = T.fock
    out = zero_operator(fock)
    for i in range(total + 1):
        out = out + fourier_coefficient(T, (i, total - i))
    return out


def cesaro_reconstruct(T: FockOperator, P: int) -> FockOperator:
    """Triangular-weight sum ``sum_{k<=P} (1 - k/P) * (total-degree-k part)``.

    For a graded operator of total degree ``k0 < P`` this is exactly
    ``(1 - k0/P) T``; the deficit against T is the triangular weight, not a
    discretization error.
    """
    if P < 1:
        raise ValueError("P must be >= 1")
    fock = T.fock
    out = zero_operator(fock)
    for k in range(min(P, fock.D) + 1):
        out = out + (1.0 - k / P) * fourier_total(T, k)
    return out


def vacuum_character(T: FockOperator) -> complex:
    """The coefficient of the identity in the degree-(0,0) component.

    Read off as the vacuum-vacuum matrix entry.
    """
    fock = T.fock
    sl = fock.block_slice((0, 0))
    if sl.stop - sl.start != 1:
        raise ValueError("vacuum block is not one-dimensional")
    return complex(T.matrix[sl.start, sl.start])
