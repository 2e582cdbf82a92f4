"""Character varieties: polynomials read off fibers, membership, goodness.

Every vector ``x`` in an ambient block determines a commutative polynomial
``q^x`` by forgetting word order; together with the abelianized commutation
relation polynomials, the ``q^x`` of complement-fiber vectors generate the
variety ideal of a system.  Its zero set inside the product of unit balls
(the polyball variety) is the character space of the associated operator
algebra, with the origin as the vacuum character.

Points with ``|z| = 1`` or ``|w| = 1`` are evaluated formally like any
other point; generators are normalized to unit maximum coefficient before
membership comparisons so the tolerance is scale-free.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cpoly import CommutativePolynomial
from .ncpoly import abelianize, commutation_generators
from .subproduct import SubproductSystem, graded_degrees
from .tensor_linalg import Degree, as_complex_vector, block_dim, flat_to_word

DEFAULT_MEMBER_TOL = 1e-8
_DROP_TOL = 1e-12


@dataclass(frozen=True)
class PolyballPoint:
    """A point ``(z, w)`` of C^m x C^n."""

    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", as_complex_vector(self.z))
        object.__setattr__(self, "w", as_complex_vector(self.w))

    @property
    def m(self) -> int:
        return self.z.shape[0]

    @property
    def n(self) -> int:
        return self.w.shape[0]

    def vals(self) -> list[complex]:
        return list(self.z) + list(self.w)

    def scaled(self, lam1: complex, lam2: complex) -> "PolyballPoint":
        return PolyballPoint(lam1 * self.z, lam2 * self.w)


def polyball_norm(pt: PolyballPoint) -> float:
    """max of the Euclidean norms of the z- and w-parts."""
    return max(float(np.linalg.norm(pt.z)), float(np.linalg.norm(pt.w)))


def qx_polynomial(x, degree: Degree, m: int, n: int) -> CommutativePolynomial:
    """The commutative polynomial with the coordinates of ``x`` as coefficients.

    Word order is forgotten, so coefficients of coinciding monomials add
    up; the result is homogeneous of bidegree ``degree`` or zero.
    """
    x = as_complex_vector(x)
    if x.shape[0] != block_dim(m, n, degree):
        raise ValueError(f"vector length {x.shape[0]} does not match degree {degree}")
    i, _ = degree
    terms: dict[tuple[int, ...], complex] = {}
    for flat, coeff in enumerate(x):
        if coeff == 0:
            continue
        word = flat_to_word(m, n, degree, flat)
        exps = [0] * (m + n)
        for s in word[:i]:
            exps[s] += 1
        for t in word[i:]:
            exps[m + t] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + complex(coeff)
    return CommutativePolynomial(m, n, terms)


def variety_generators(sps: SubproductSystem, D: int | None = None,
                       tol: float = 1e-9) -> list[CommutativePolynomial]:
    """Generating set of the variety ideal up to degree D.

    Abelianized commutation relation polynomials first, then ``q^x`` over
    orthonormal bases of the complement fibers; zero polynomials dropped.
    """
    if D is None:
        D = sps.D
    if D > sps.D:
        raise ValueError(f"requested degree {D} beyond stored truncation {sps.D}")
    out: list[CommutativePolynomial] = []
    for p in commutation_generators(sps.cr):
        q = abelianize(p).chop(_DROP_TOL)
        if not q.is_zero():
            out.append(q)
    for deg in graded_degrees(D):
        basis = sps.complement_basis(deg, tol)
        for col in basis.T:
            q = qx_polynomial(col, deg, sps.m, sps.n).chop(_DROP_TOL)
            if not q.is_zero():
                out.append(q)
    return out


def polyball_membership(pt: PolyballPoint, gens: Iterable[CommutativePolynomial],
                        tol: float = DEFAULT_MEMBER_TOL) -> bool:
    """True iff pt lies in both unit balls and kills every generator.

    Generators are normalized to unit maximum coefficient; the comparison
    ``|g(pt)| <= tol`` is absolute after that normalization.
    """
    if float(np.linalg.norm(pt.z)) > 1 + tol or float(np.linalg.norm(pt.w)) > 1 + tol:
        return False
    for g in gens:
        val = g.normalized_unit_max().evaluate_vals(pt.vals())
        if abs(val) > tol:
            return False
    return True


def character_eval(pt: PolyballPoint, x, degree: Degree,
                   gens: Sequence[CommutativePolynomial] | None = None,
                   tol: float = DEFAULT_MEMBER_TOL) -> complex:
    """Value of the character at pt on the creation operator of ``x``.

    Equals ``q^x(pt)``.  When a generator list is supplied and pt fails
    membership, the value is still returned but a warning is emitted: off
    the variety the evaluation is formal and need not be multiplicative.
    """
    if gens is not None and not polyball_membership(pt, gens, tol):
        warnings.warn("point is outside the variety; evaluation is formal",
                      stacklevel=2)
    q = qx_polynomial(x, degree, pt.m, pt.n)
    return q.evaluate_vals(pt.vals())


def in_c_set(pt: PolyballPoint, tol: float = DEFAULT_MEMBER_TOL) -> bool:
    """True iff pt lies on the coordinate cross: one part zero, other in its ball."""
    nz = float(np.linalg.norm(pt.z))
    nw = float(np.linalg.norm(pt.w))
    return (nw <= tol and nz <= 1 + tol) or (nz <= tol and nw <= 1 + tol)


def is_good(sps: SubproductSystem, D: int | None = None, tol: float = 1e-9) -> bool:
    """True iff every nonzero variety generator has both partial degrees positive.

    Equivalently, the whole coordinate cross survives inside the variety.
    """
    for g in variety_generators(sps, D, tol):
        deg = g.bidegree()
        if deg is None:
            # generators are homogeneous by construction; treat a mix as bad
            return False
        if deg[0] == 0 or deg[1] == 0:
            return False
    return True


def sample_polyball(rng: np.random.Generator, m: int, n: int) -> PolyballPoint:
    """Uniform sample from the product of unit balls of C^m and C^n."""
    return PolyballPoint(_ball_sample(rng, m), _ball_sample(rng, n))


def sample_cross(rng: np.random.Generator, m: int, n: int) -> PolyballPoint:
    """Uniform-ish sample from the coordinate cross."""
    if rng.random() < 0.5 and m > 0:
        return PolyballPoint(_ball_sample(rng, m), np.zeros(n, dtype=complex))
    return PolyballPoint(np.zeros(m, dtype=complex), _ball_sample(rng, n))


def _ball_sample(rng: np.random.Generator, d: int) -> np.ndarray:
    if d == 0:
        return np.zeros(0, dtype=complex)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    norm = np.linalg.norm(v)
    if norm == 0:
        return np.zeros(d, dtype=complex)
    radius = rng.random() ** (1.0 / (2 * d))
    return radius * v / norm
