import numpy as np

from spsys import CommutationRelation, flip_relation
from spsys.subproduct import SubproductSystem, graded_degrees, split_meet
from spsys.tensor_linalg import (
    block_dim,
    identity,
    kron_power,
    orthonormal_range_basis,
)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    if d == 0:
        return np.zeros((0, 0), dtype=complex)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    diag[diag == 0] = 1.0
    return q * (diag / np.abs(diag))


def random_relation(rng: np.random.Generator, m: int, n: int) -> CommutationRelation:
    return CommutationRelation(m, n, random_unitary(rng, m * n))


def random_subprojection(rng: np.random.Generator, q: np.ndarray) -> np.ndarray:
    """A projection onto a uniformly ranked random subspace of range(q)."""
    basis = orthonormal_range_basis(q)
    r = basis.shape[1]
    if r == 0:
        return np.zeros_like(q)
    k = int(rng.integers(0, r + 1))
    if k == 0:
        return np.zeros_like(q)
    z = rng.standard_normal((r, k)) + 1j * rng.standard_normal((r, k))
    frame, _ = np.linalg.qr(z)
    cols = basis @ frame
    return cols @ cols.conj().T


def random_system(rng: np.random.Generator, m: int, n: int, D: int,
                  shrink_prob: float = 0.5) -> SubproductSystem:
    """Random valid standard system: complete degreewise, shrinking at random.

    Every fiber is chosen inside the meet of its split compressions, so the
    result satisfies all inequalities by construction.
    """
    cr = random_relation(rng, m, n)
    proj = {
        (0, 0): identity(1),
        (1, 0): identity(m),
        (0, 1): identity(n),
    }
    for deg in graded_degrees(D):
        if deg in proj:
            continue
        q = split_meet(proj, cr, deg)
        proj[deg] = random_subprojection(rng, q) if rng.random() < shrink_prob else q
    return SubproductSystem(cr, D, proj)


def random_fiber_vector(rng: np.random.Generator, sps: SubproductSystem,
                        degree) -> np.ndarray | None:
    basis = sps.fiber_basis(degree)
    r = basis.shape[1]
    if r == 0:
        return None
    coeffs = rng.standard_normal(r) + 1j * rng.standard_normal(r)
    return basis @ coeffs


def nonzero_degrees(sps: SubproductSystem, min_total: int = 0) -> list:
    return [deg for deg in graded_degrees(sps.D)
            if deg[0] + deg[1] >= min_total and sps.fiber_rank(deg) > 0]


def xmn_system(m: int, n: int, D: int = 2) -> SubproductSystem:
    """Fibers vanish above total degree one; any relation works, flip chosen."""
    cr = flip_relation(m, n)
    proj = {}
    for deg in graded_degrees(D):
        d = block_dim(m, n, deg)
        proj[deg] = identity(d) if deg[0] + deg[1] <= 1 else np.zeros((d, d), complex)
    return SubproductSystem(cr, D, proj)


def conjugate_system(sps: SubproductSystem, B: np.ndarray, C: np.ndarray) -> SubproductSystem:
    """Transport a system through fiber unitaries B on E and C on F."""
    cr = sps.cr
    u_new = np.kron(B, C) @ cr.u @ np.kron(C, B).conj().T
    cr_new = CommutationRelation(cr.m, cr.n, u_new)
    proj = {}
    for deg in graded_degrees(sps.D):
        v = np.kron(kron_power(B, deg[0]), kron_power(C, deg[1]))
        proj[deg] = v @ sps.projection(deg) @ v.conj().T
    return SubproductSystem(cr_new, sps.D, proj)


def staircase_system(D: int = 4) -> SubproductSystem:
    """One-dimensional fibers with full axes and a staircase of zeros.

    Zero fibers: (1,2) and up, (2,2) and up, (3,1) and up; everything else
    one-dimensional.
    """
    cr = CommutationRelation(1, 1, np.array([[1.0]], dtype=complex))
    zeros = {(1, 2), (1, 3), (2, 2), (3, 1), (1, 4), (2, 3), (3, 2), (4, 1), (2, 4),
             (3, 3), (4, 2)}
    proj = {}
    for deg in graded_degrees(D):
        proj[deg] = (np.zeros((1, 1), dtype=complex) if deg in zeros
                     else identity(1))
    return SubproductSystem(cr, D, proj)
