"""Non-commutative polynomials and the graded-ideal picture of systems.

Free complex polynomials in ``z_1..z_m, w_1..w_n`` map onto the algebraic
Fock space of a commutation relation by evaluating letters as basis
vectors and words as graded tensor products (``phi_map``); the reverse
linear map reads basis words back as normal-ordered monomials
(``psi_map``).  Proper ideals generated by homogeneous polynomials
correspond one-to-one, inclusion-reversing, with standard subproduct
systems sharing the commutation relation: ``ideal_to_subproduct`` and
``subproduct_to_ideal`` realize both directions up to the truncation
degree.

Letters are encoded as integers: ``0..m-1`` are the z's, ``m..m+n-1`` the
w's; a word is a tuple of letters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .commutation import CommutationRelation, big_w, fock_product
from .cpoly import CommutativePolynomial
from .subproduct import SubproductSystem, graded_degrees
from .tensor_linalg import (
    DEFAULT_RANK_TOL,
    Degree,
    as_complex_vector,
    block_dim,
    flat_to_word,
    identity,
    projection_onto_span,
    rank_of_projection,
    word_to_flat,
)

Word = tuple[int, ...]
GradedVector = dict[Degree, np.ndarray]


class NonHomogeneousGeneratorError(ValueError):
    """An ideal generator mixes letter-count degrees."""


class ImproperIdealError(ValueError):
    """The generated ideal contains the constants."""


class UnsupportedGeneratorError(ValueError):
    """A generator of total degree one would shrink a generating fiber."""


class NCPolynomial:
    """Finitely supported complex combination of words over z's and w's."""

    def __init__(self, m: int, n: int, terms: Mapping[Word, complex] | None = None):
        self.m = int(m)
        self.n = int(n)
        self.terms: dict[Word, complex] = {}
        if terms:
            for word, coeff in terms.items():
                word = tuple(int(x) for x in word)
                for letter in word:
                    if not 0 <= letter < self.m + self.n:
                        raise ValueError(f"letter {letter} out of range in word {word}")
                c = complex(coeff)
                if c != 0:
                    self.terms[word] = self.terms.get(word, 0) + c
            self.terms = {w: c for w, c in self.terms.items() if c != 0}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, m: int, n: int) -> "NCPolynomial":
        return cls(m, n)

    @classmethod
    def one(cls, m: int, n: int) -> "NCPolynomial":
        return cls(m, n, {(): 1.0})

    @classmethod
    def z(cls, m: int, n: int, i: int) -> "NCPolynomial":
        """The letter z_i, 1-based."""
        if not 1 <= i <= m:
            raise ValueError(f"z index {i} out of range 1..{m}")
        return cls(m, n, {(i - 1,): 1.0})

    @classmethod
    def w(cls, m: int, n: int, j: int) -> "NCPolynomial":
        """The letter w_j, 1-based."""
        if not 1 <= j <= n:
            raise ValueError(f"w index {j} out of range 1..{n}")
        return cls(m, n, {(m + j - 1,): 1.0})

    @classmethod
    def from_word_string(cls, m: int, n: int, word: str, coeff: complex = 1.0) -> "NCPolynomial":
        return cls(m, n, {string_to_word(m, n, word): coeff})

    # -- algebra -------------------------------------------------------------

    def _check_ring(self, other: "NCPolynomial"):
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("polynomials over different letter sets")

    def __add__(self, other: "NCPolynomial") -> "NCPolynomial":
        self._check_ring(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return NCPolynomial(self.m, self.n, terms)

    def __sub__(self, other: "NCPolynomial") -> "NCPolynomial":
        return self + (-other)

    def __neg__(self) -> "NCPolynomial":
        return NCPolynomial(self.m, self.n, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPolynomial):
            self._check_ring(other)
            terms: dict[Word, complex] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    terms[w] = terms.get(w, 0) + c1 * c2
            return NCPolynomial(self.m, self.n, terms)
        return NCPolynomial(self.m, self.n,
                            {w: complex(other) * c for w, c in self.terms.items()})

    __rmul__ = __mul__

    # -- queries -------------------------------------------------------------

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def chop(self, tol: float) -> "NCPolynomial":
        return NCPolynomial(self.m, self.n,
                            {w: c for w, c in self.terms.items() if abs(c) > tol})

    def word_degree(self, word: Word) -> Degree:
        dz = sum(1 for letter in word if letter < self.m)
        return (dz, len(word) - dz)

    def close_to(self, other: "NCPolynomial", tol: float = 1e-9) -> bool:
        return (self - other).max_abs_coeff() <= tol

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"({c:.6g})*{word_to_string(self.m, w) or '1'}"
                 for w, c in sorted(self.terms.items())]
        return " + ".join(parts)


def word_to_string(m: int, word: Word) -> str:
    return " ".join(f"z{x + 1}" if x < m else f"w{x - m + 1}" for x in word)


_TOKEN = re.compile(r"[zw]\d+")


def string_to_word(m: int, n: int, text: str) -> Word:
    """Parse a word like ``"w1 z2 w1"``; separators are optional."""
    stripped = re.sub(r"[\s*]+", "", text)
    tokens = _TOKEN.findall(stripped)
    if "".join(tokens) != stripped:
        raise ValueError(f"cannot parse word {text!r}")
    word = []
    for tok in tokens:
        idx = int(tok[1:])
        if tok[0] == "z":
            if not 1 <= idx <= m:
                raise ValueError(f"token {tok} out of range for m={m}")
            word.append(idx - 1)
        else:
            if not 1 <= idx <= n:
                raise ValueError(f"token {tok} out of range for n={n}")
            word.append(m + idx - 1)
    return tuple(word)


@dataclass(frozen=True)
class HomogeneousComponent:
    degree: Degree
    polynomial: NCPolynomial


def homogeneous_components(p: NCPolynomial) -> list[HomogeneousComponent]:
    """Split a polynomial by letter-count bidegree."""
    buckets: dict[Degree, dict[Word, complex]] = {}
    for word, coeff in p.terms.items():
        buckets.setdefault(p.word_degree(word), {})[word] = coeff
    return [HomogeneousComponent(deg, NCPolynomial(p.m, p.n, terms))
            for deg, terms in sorted(buckets.items())]


def is_homogeneous(p: NCPolynomial) -> Degree | None:
    """The common letter-count bidegree, or None if degrees mix.

    Constants (and the zero polynomial) report (0, 0).
    """
    comps = homogeneous_components(p)
    if not comps:
        return (0, 0)
    if len(comps) == 1:
        return comps[0].degree
    return None


def _basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def phi_map(p: NCPolynomial, cr: CommutationRelation) -> GradedVector:
    """Evaluate words as graded tensor products of basis vectors.

    Each letter maps to the corresponding basis vector of E or F and the
    word to the left-to-right algebraic Fock product; the result is the
    map from bidegrees to accumulated coordinate vectors.
    """
    if (p.m, p.n) != (cr.m, cr.n):
        raise ValueError("polynomial letters do not match the relation dimensions")
    out: GradedVector = {}
    for word, coeff in p.terms.items():
        deg: Degree = (0, 0)
        vec = np.ones(1, dtype=complex)
        for letter in word:
            if letter < cr.m:
                step = ((1, 0), _basis_vector(cr.m, letter))
            else:
                step = ((0, 1), _basis_vector(cr.n, letter - cr.m))
            deg, vec = fock_product(cr, deg, vec, *step)
        if deg in out:
            out[deg] = out[deg] + coeff * vec
        else:
            out[deg] = coeff * vec
    return out


def psi_map(x: Mapping[Degree, np.ndarray] | GradedVector, m: int, n: int) -> NCPolynomial:
    """Read a graded vector back as normal-ordered words.

    The basis word ``e_{s_1} .. e_{s_i} (x) f_{t_1} .. f_{t_j}`` maps to
    the monomial ``z_{s_1} .. z_{s_i} w_{t_1} .. w_{t_j}``; phi_map is a
    left inverse of this on every graded vector.
    """
    terms: dict[Word, complex] = {}
    for deg, vec in x.items():
        i, j = deg
        vec = as_complex_vector(vec)
        if vec.shape[0] != block_dim(m, n, deg):
            raise ValueError(f"vector at degree {deg} has wrong length {vec.shape[0]}")
        for flat, coeff in enumerate(vec):
            if coeff == 0:
                continue
            word = flat_to_word(m, n, deg, flat)
            nc_word = word[:i] + tuple(m + t for t in word[i:])
            terms[nc_word] = terms.get(nc_word, 0) + complex(coeff)
    return NCPolynomial(m, n, terms)


def commutation_generators(cr: CommutationRelation) -> list[NCPolynomial]:
    """The mn relation polynomials ``w_j z_i - sum u_{(k,l),(i,j)} z_k w_l``.

    These span the kernel of phi_map together with their ideal multiples;
    in particular phi_map sends each of them to zero.
    """
    m, n = cr.m, cr.n
    out = []
    for i in range(m):
        for j in range(n):
            terms: dict[Word, complex] = {(m + j, i): 1.0}
            for k in range(m):
                for l in range(n):
                    coeff = cr.coefficient(k, l, i, j)
                    if coeff != 0:
                        key = (k, m + l)
                        terms[key] = terms.get(key, 0) - coeff
            out.append(NCPolynomial(m, n, terms))
    return out


def abelianize(p: NCPolynomial) -> CommutativePolynomial:
    """Letter-sorted commutative image, coefficients combined."""
    terms: dict[tuple[int, ...], complex] = {}
    nvars = p.m + p.n
    for word, coeff in p.terms.items():
        exps = [0] * nvars
        for letter in word:
            exps[letter] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return CommutativePolynomial(p.m, p.n, terms)


def _expansion_columns(cr: CommutationRelation, gdeg: Degree, gvec: np.ndarray,
                       target: Degree) -> list[np.ndarray]:
    """Columns spanning { x . g . y } at the target bidegree.

    ``x`` and ``y`` run over ambient basis words of all complementary
    bidegree pairs; monomial cofactors span every cofactor degree, so the
    column span is the full two-sided ideal component.
    """
    m, n = cr.m, cr.n
    cols: list[np.ndarray] = []
    for a in range(target[0] - gdeg[0] + 1):
        for b in range(target[1] - gdeg[1] + 1):
            c = target[0] - gdeg[0] - a
            d = target[1] - gdeg[1] - b
            dim_left = block_dim(m, n, (a, b))
            dim_right = block_dim(m, n, (c, d))
            if dim_left == 0 or dim_right == 0:
                continue
            w_left = big_w(cr, (a, b), gdeg)
            lefts = w_left @ np.kron(identity(dim_left), gvec.reshape(-1, 1))
            w_right = big_w(cr, (a + gdeg[0], b + gdeg[1]), (c, d))
            for col in lefts.T:
                block = w_right @ np.kron(col.reshape(-1, 1), identity(dim_right))
                cols.extend(block.T)
    return cols


def ideal_to_subproduct(generators: Iterable[NCPolynomial], cr: CommutationRelation,
                        D: int, tol: float = DEFAULT_RANK_TOL) -> SubproductSystem:
    """Fibers orthogonal to the homogeneous ideal spanned by the generators.

    The generated ideal is expanded degree by degree inside the algebraic
    Fock space, where the commutation relation polynomials vanish
    identically, so they are implicitly part of every input ideal.  Each
    fiber is the orthogonal complement of the ideal component.

    Raises for non-homogeneous generators, for improper ideals (a nonzero
    constant generator), and for generators of total degree one, which
    would shrink the generating fibers below the standard normalization.
    """
    gen_vectors: list[tuple[Degree, np.ndarray]] = []
    for g in generators:
        if g.is_zero():
            continue
        deg = is_homogeneous(g)
        if deg is None:
            raise NonHomogeneousGeneratorError(f"generator is not homogeneous: {g!r}")
        if deg == (0, 0):
            raise ImproperIdealError("a nonzero constant generator makes the ideal improper")
        if deg[0] + deg[1] == 1:
            raise UnsupportedGeneratorError(
                "generators of total degree one are not supported: the fibers at "
                "(1,0) and (0,1) must stay full")
        if deg[0] + deg[1] > D:
            continue
        image = phi_map(g, cr)
        vec = image.get(deg)
        if vec is None or not np.any(np.abs(vec) > 0):
            continue
        gen_vectors.append((deg, vec))

    proj: dict[Degree, np.ndarray] = {}
    for target in graded_degrees(D):
        dim = block_dim(cr.m, cr.n, target)
        cols: list[np.ndarray] = []
        for gdeg, gvec in gen_vectors:
            if gdeg[0] <= target[0] and gdeg[1] <= target[1]:
                cols.extend(_expansion_columns(cr, gdeg, gvec, target))
        proj[target] = identity(dim) - projection_onto_span(cols, tol=tol, dim=dim)

    if rank_of_projection(proj[(0, 0)], tol) == 0:
        raise ImproperIdealError("ideal collapses the degree-(0,0) fiber")
    return SubproductSystem(cr, D, proj)


def subproduct_to_ideal(sps: SubproductSystem, D: int | None = None,
                        tol: float = DEFAULT_RANK_TOL) -> list[NCPolynomial]:
    """Generators of the homogeneous ideal annihilating the system.

    Normal-ordered reads of orthonormal bases of every complement fiber up
    to degree D, followed by the commutation relation polynomials.  Feeding
    the output to ``ideal_to_subproduct`` reproduces the fibers.
    """
    if D is None:
        D = sps.D
    if D > sps.D:
        raise ValueError(f"requested degree {D} beyond stored truncation {sps.D}")
    out: list[NCPolynomial] = []
    for deg in graded_degrees(D):
        basis = sps.complement_basis(deg, tol)
        for col in basis.T:
            out.append(psi_map({deg: col}, sps.m, sps.n))
    out.extend(commutation_generators(sps.cr))
    return out
