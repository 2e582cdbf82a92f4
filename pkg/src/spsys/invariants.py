"""Numerical invariants and a desk-scale isomorphism search.

Two quantities are invariant under bounded isomorphism of the operator
algebras: the generating dimension sum ``m + n`` and the minimal positive
total degree ``k_x`` of nonzero polynomials in the variety ideal.  For a
homogeneous ideal the minimal-degree nonzero element has the degree of a
minimal nonzero generator (every degree-d component is spanned by
cofactor multiples of generators of degree <= d), so ``k_x`` is computed
from the generating set.  When no generator below the truncation is
nonzero, ``k_x`` is only known to exceed the truncation and is reported as
a lower bound; comparisons across different truncations are refused in
that case.

Substitution of scalar multiples of a nilpotent ``t`` for the generators
gives homomorphisms into polynomials mod ``t^k``; these are well defined
on the quotient exactly for ``k <= k_x``, and requests beyond that are
refused rather than silently returning representative-dependent values.

The isomorphism search looks for fiber unitaries implemented by a pair
``(B, C)`` on the generating fibers, with the degree map either the
identity or the coordinate switch.  A branch whose dimension profiles
disagree is refuted outright; otherwise the pair is optimized by
alternating Riemannian gradient steps with polar retraction and random
restarts.  Absence of a witness is never a proof, so the result is
tri-state: witness, refuted, or inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
import scipy.linalg

from .commutation import CommutationRelation, big_w, exchange
from .cpoly import CommutativePolynomial
from .ncpoly import NCPolynomial
from .subproduct import SubproductSystem, dimension_profile, graded_degrees
from .tensor_linalg import (
    DEFAULT_RANK_TOL,
    Degree,
    as_complex_vector,
    identity,
)
from .variety import PolyballPoint, variety_generators

DEFAULT_RESTARTS = 50
DEFAULT_ITERS = 200


class TruncationOrderError(ValueError):
    """Requested order exceeds what the variety ideal guarantees well defined."""


@dataclass(frozen=True)
class TruncatedPolynomial:
    """An element of C[t] mod t^order, stored as its coefficient vector."""

    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        c = as_complex_vector(self.coeffs)
        if c.shape[0] > self.order:
            c = c[:self.order]
        elif c.shape[0] < self.order:
            c = np.concatenate([c, np.zeros(self.order - c.shape[0], dtype=complex)])
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, order: int) -> "TruncatedPolynomial":
        return cls(order, np.zeros(order, dtype=complex))

    @classmethod
    def one(cls, order: int) -> "TruncatedPolynomial":
        c = np.zeros(order, dtype=complex)
        c[0] = 1.0
        return cls(order, c)

    @classmethod
    def variable(cls, order: int) -> "TruncatedPolynomial":
        c = np.zeros(order, dtype=complex)
        if order > 1:
            c[1] = 1.0
        return cls(order, c)

    def _check(self, other: "TruncatedPolynomial"):
        if self.order != other.order:
            raise ValueError("mixed truncation orders")

    def __add__(self, other: "TruncatedPolynomial") -> "TruncatedPolynomial":
        self._check(other)
        return TruncatedPolynomial(self.order, self.coeffs + other.coeffs)

    def __sub__(self, other: "TruncatedPolynomial") -> "TruncatedPolynomial":
        self._check(other)
        return TruncatedPolynomial(self.order, self.coeffs - other.coeffs)

    def __neg__(self) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self.order, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncatedPolynomial):
            self._check(other)
            full = np.convolve(self.coeffs, other.coeffs)
            return TruncatedPolynomial(self.order, full[:self.order])
        return TruncatedPolynomial(self.order, complex(other) * self.coeffs)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def close_to(self, other: "TruncatedPolynomial", tol: float = 1e-9) -> bool:
        return (self - other).max_abs() <= tol

    def __repr__(self):
        parts = [f"({c:.6g})*t^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class InvariantPair:
    """Dimension sum and minimal generator degree, at a truncation."""

    dim_sum: int
    k_x: int | None
    D: int

    @property
    def k_x_lower_bound(self) -> int:
        """Smallest value k_x can still take when unresolved."""
        return self.k_x if self.k_x is not None else self.D + 1

    def k_x_label(self) -> str:
        return str(self.k_x) if self.k_x is not None else f">={self.D + 1}"

    def same_as(self, other: "InvariantPair") -> bool:
        """Definite comparison; refuses undecidable cross-truncation cases."""
        if self.dim_sum != other.dim_sum:
            return False
        if self.k_x is not None and other.k_x is not None:
            return self.k_x == other.k_x
        if self.k_x is None and other.k_x is None:
            if self.D != other.D:
                raise ValueError(
                    "both k_x values unresolved at different truncations; "
                    "comparison refused")
            return True
        resolved, unresolved = (self, other) if self.k_x is not None else (other, self)
        if resolved.k_x <= unresolved.D:
            return False
        raise ValueError(
            "one k_x unresolved and the other beyond its truncation; "
            "comparison refused")


def compute_invariants(sps: SubproductSystem, D: int | None = None,
                       tol: float = 1e-9) -> InvariantPair:
    """Dimension sum and minimal positive generator degree up to D."""
    if D is None:
        D = sps.D
    dim_sum = sps.fiber_rank((1, 0), tol) + sps.fiber_rank((0, 1), tol)
    degrees = [g.bidegree() for g in variety_generators(sps, D, tol)]
    totals = [d[0] + d[1] for d in degrees if d is not None]
    k_x = min(totals) if totals else None
    return InvariantPair(dim_sum, k_x, D)


def beta_homomorphism(sps: SubproductSystem, zeta, k: int, T: NCPolynomial,
                      tol: float = 1e-9) -> TruncatedPolynomial:
    """Substitute ``zeta_i * t`` for the i-th generator letter, mod t^k.

    ``zeta`` lists the m z-weights followed by the n w-weights.  The result
    depends only on the class of T modulo the system ideal provided
    ``k <= k_x``; larger k is refused because ideal elements of degree
    below k would then survive the substitution.
    """
    zeta = as_complex_vector(zeta)
    if zeta.shape[0] != sps.m + sps.n:
        raise ValueError(f"zeta must have length {sps.m + sps.n}")
    if (T.m, T.n) != (sps.m, sps.n):
        raise ValueError("polynomial letters do not match the system dimensions")
    if k < 1:
        raise ValueError("k must be >= 1")
    inv = compute_invariants(sps, tol=tol)
    allowed = inv.k_x_lower_bound
    if k > allowed:
        raise TruncationOrderError(
            f"order {k} exceeds the admissible order {inv.k_x_label()}; "
            "the substitution would not be well defined on the quotient")
    coeffs = np.zeros(k, dtype=complex)
    for word, coeff in T.terms.items():
        d = len(word)
        if d >= k:
            continue
        weight = coeff
        for letter in word:
            weight *= zeta[letter]
        coeffs[d] += weight
    return TruncatedPolynomial(k, coeffs)


def root_multiplicity_at_least(p: CommutativePolynomial, pt: PolyballPoint,
                               k: int, tol: float = 1e-8) -> bool:
    """True iff all partial derivatives of total order < k vanish at pt.

    The polynomial is normalized to unit maximum coefficient first, so the
    tolerance is scale-free.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q = p.normalized_unit_max()
    nvars = q.m + q.n
    vals = pt.vals()
    if len(vals) != nvars:
        raise ValueError("point dimension does not match the polynomial")
    for order in range(k):
        for combo in combinations_with_replacement(range(nvars), order):
            orders = [0] * nvars
            for v in combo:
                orders[v] += 1
            if abs(q.derivative(orders).evaluate_vals(vals)) > tol:
                return False
    return True


def multi_equivalence_check(p: CommutativePolynomial, pt: PolyballPoint, k: int,
                            trials: int = 20, rng: np.random.Generator | None = None,
                            tol: float = 1e-8) -> bool:
    """Cross-check the derivative criterion against the nilpotent-curve one.

    The curve criterion substitutes ``pt + t*zeta + t^2*c_2 + ... +
    t^(k-1)*c_(k-1)`` into p and asks for vanishing mod t^k, sampled over
    random directions and perturbations.  Returns True iff the two
    criteria agree on this instance.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    q = p.normalized_unit_max()
    nvars = q.m + q.n
    vals = pt.vals()
    derivative_says = root_multiplicity_at_least(p, pt, k, tol)

    curve_says = True
    one = TruncatedPolynomial.one(k)
    for _ in range(max(1, trials)):
        coeff_rows = rng.standard_normal((k, nvars)) + 1j * rng.standard_normal((k, nvars))
        gammas = []
        for v in range(nvars):
            coeffs = np.zeros(k, dtype=complex)
            coeffs[0] = vals[v]
            coeffs[1:] = coeff_rows[1:, v] / math.sqrt(2.0)
            gammas.append(TruncatedPolynomial(k, coeffs))
        value = q.eval_generic(gammas, one)
        if value.max_abs() > tol:
            curve_says = False
            break
    return derivative_says == curve_says


def annihilates_to_order(gens, pt: PolyballPoint, k: int,
                         tol: float = 1e-8) -> bool:
    """True iff pt is a root of multiplicity >= k of every polynomial given."""
    return all(root_multiplicity_at_least(g, pt, k, tol) for g in gens)


def vacuum_image_constraint(sps: SubproductSystem, pt: PolyballPoint, k_other: int,
                            tol: float = 1e-8, gen_tol: float = 1e-9) -> bool:
    """Feasibility of pt as the image of the other algebra's vacuum character.

    Under any bounded isomorphism the vacuum of the other algebra lands on
    a point annihilating every variety generator to order ``k_other``.
    """
    return annihilates_to_order(variety_generators(sps, tol=gen_tol), pt, k_other, tol)


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsoWitness:
    switch: bool
    B: np.ndarray
    C: np.ndarray
    residual: float


@dataclass(frozen=True)
class BranchReport:
    switch: bool
    profile_match: bool
    best_residual: float | None
    restarts_run: int


@dataclass(frozen=True)
class IsoSearchResult:
    """Tri-state outcome: witness found, refuted by profiles, or inconclusive."""

    status: str
    witness: IsoWitness | None
    branches: tuple[BranchReport, ...]


def _haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    if d == 0:
        return np.zeros((0, 0), dtype=complex)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    diag[diag == 0] = 1.0
    return q * (diag / np.abs(diag))


def _polar_project(a: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return a
    u, _ = scipy.linalg.polar(a)
    return u


class _BranchProblem:
    """Residual and gradient of the intertwining system for one degree map.

    The candidate fiber maps are ``V(i,j) = B^(x)i (x) C^(x)j``, composed
    with the exchange block of the target relation when the degree map is
    the switch.  The residual sums squared Frobenius norms of

    * fiber intertwining: ``pY[pi(d)] V(d) - V(d) pX[d]`` over all degrees,
    * multiplication intertwining for generator left factors ``s``:
      ``pY W_Y (V(s) pX (x) V(t) pX) - pY V(s+t) W_X (pX (x) pX)``.

    Fiber terms alone are independent of the commutation relations and
    would accept inequivalent relations over equal fiber lattices; the
    multiplication terms pin the relations down, and generator left
    factors suffice since longer factors peel off generators associatively.
    """

    def __init__(self, spsX: SubproductSystem, spsY: SubproductSystem,
                 switch: bool, D: int, rank_tol: float = DEFAULT_RANK_TOL):
        self.switch = switch
        self.D = D
        self.mB = spsX.m
        self.nC = spsX.n
        self.degrees = [d for d in graded_degrees(D) if d != (0, 0)]
        pi = self._pi
        self.pX = {d: spsX.projection(d) for d in graded_degrees(D)}
        self.pY = {d: spsY.projection(pi(d)) for d in graded_degrees(D)}
        self.pre = {}
        for d in graded_degrees(D):
            if switch:
                self.pre[d] = exchange(spsY.cr, d[0], d[1])
            else:
                self.pre[d] = None

        self.mult: list[tuple[Degree, Degree, np.ndarray, np.ndarray]] = []
        gens = [g for g in ((1, 0), (0, 1))]
        for s in gens:
            for t in self.degrees:
                st = (s[0] + t[0], s[1] + t[1])
                if st[0] + st[1] > D:
                    continue
                a_left = self.pY[st] @ big_w(spsY.cr, pi(s), pi(t))
                right = big_w(spsX.cr, s, t) @ np.kron(self.pX[s], self.pX[t])
                self.mult.append((s, t, a_left, right))

    def _pi(self, d: Degree) -> Degree:
        return (d[1], d[0]) if self.switch else d

    def _bases(self, B: np.ndarray, C: np.ndarray) -> dict[Degree, np.ndarray]:
        base = {(0, 0): identity(1)}
        for d in graded_degrees(self.D):
            if d == (0, 0):
                continue
            if d[1] == 0:
                base[d] = np.kron(base[(d[0] - 1, 0)], B)
            else:
                base[d] = np.kron(base[(d[0], d[1] - 1)], C)
        return base

    def _dbases(self, bases, B, C, which, unit) -> dict[Degree, np.ndarray]:
        dB = unit if which == "B" else np.zeros_like(B)
        dC = unit if which == "C" else np.zeros_like(C)
        dbase = {(0, 0): np.zeros((1, 1), dtype=complex)}
        for d in graded_degrees(self.D):
            if d == (0, 0):
                continue
            if d[1] == 0:
                prev = (d[0] - 1, 0)
                dbase[d] = np.kron(dbase[prev], B) + np.kron(bases[prev], dB)
            else:
                prev = (d[0], d[1] - 1)
                dbase[d] = np.kron(dbase[prev], C) + np.kron(bases[prev], dC)
        return dbase

    def _vmaps(self, bases) -> dict[Degree, np.ndarray]:
        out = {}
        for d, base in bases.items():
            pre = self.pre[d]
            out[d] = base if pre is None else pre @ base
        return out

    def _terms(self, vmaps) -> list[np.ndarray]:
        terms = []
        for d in self.degrees:
            v = vmaps[d]
            terms.append(self.pY[d] @ v - v @ self.pX[d])
        for s, t, a_left, right in self.mult:
            st = (s[0] + t[0], s[1] + t[1])
            lhs = a_left @ np.kron(vmaps[s] @ self.pX[s], vmaps[t] @ self.pX[t])
            rhs = self.pY[st] @ vmaps[st] @ right
            terms.append(lhs - rhs)
        return terms

    def _dterms(self, vmaps, dvmaps) -> list[np.ndarray]:
        terms = []
        for d in self.degrees:
            dv = dvmaps[d]
            terms.append(self.pY[d] @ dv - dv @ self.pX[d])
        for s, t, a_left, right in self.mult:
            st = (s[0] + t[0], s[1] + t[1])
            dlhs = a_left @ (
                np.kron(dvmaps[s] @ self.pX[s], vmaps[t] @ self.pX[t])
                + np.kron(vmaps[s] @ self.pX[s], dvmaps[t] @ self.pX[t]))
            drhs = self.pY[st] @ dvmaps[st] @ right
            terms.append(dlhs - drhs)
        return terms

    def residual(self, B: np.ndarray, C: np.ndarray):
        bases = self._bases(B, C)
        vmaps = self._vmaps(bases)
        terms = self._terms(vmaps)
        f = sum(float(np.vdot(r, r).real) for r in terms)
        return f, bases, vmaps, terms

    def gradient(self, bases, vmaps, terms, B, C, which) -> np.ndarray:
        dim = self.mB if which == "B" else self.nC
        grad = np.zeros((dim, dim), dtype=complex)
        for p in range(dim):
            for q in range(dim):
                unit = np.zeros((dim, dim), dtype=complex)
                unit[p, q] = 1.0
                dbases = self._dbases(bases, B, C, which, unit)
                dvmaps = self._vmaps(dbases)
                dterms = self._dterms(vmaps, dvmaps)
                grad[p, q] = sum(np.vdot(dr, r) for r, dr in zip(terms, dterms))
        return grad

    def minimize(self, B0: np.ndarray, C0: np.ndarray, iters: int, tol: float):
        B, C = B0, C0
        f, bases, vmaps, terms = self.residual(B, C)
        steps = {"B": 0.5, "C": 0.5}
        for _ in range(iters):
            if math.sqrt(f) < 0.25 * tol:
                break
            moved = False
            for which in ("B", "C"):
                current = B if which == "B" else C
                if current.size == 0:
                    continue
                grad = self.gradient(bases, vmaps, terms, B, C, which)
                gnorm = float(np.linalg.norm(grad))
                if gnorm < 1e-14:
                    continue
                step = steps[which]
                for _ in range(30):
                    cand = _polar_project(current - step * grad)
                    if which == "B":
                        f2, b2, v2, t2 = self.residual(cand, C)
                    else:
                        f2, b2, v2, t2 = self.residual(B, cand)
                    if f2 < f - 1e-18:
                        if which == "B":
                            B = cand
                        else:
                            C = cand
                        f, bases, vmaps, terms = f2, b2, v2, t2
                        steps[which] = min(step * 1.5, 10.0)
                        moved = True
                        break
                    step *= 0.4
                else:
                    steps[which] = max(steps[which] * 0.4, 1e-8)
            if not moved:
                break
        return B, C, math.sqrt(f)


def _profiles_match(profX, profY, switch: bool, D: int) -> bool:
    for d in graded_degrees(D):
        target = (d[1], d[0]) if switch else d
        if profX[d] != profY[target]:
            return False
    return True


def iso_search(spsX: SubproductSystem, spsY: SubproductSystem,
               D: int | None = None, tol: float = 1e-6,
               restarts: int = DEFAULT_RESTARTS, iters: int = DEFAULT_ITERS,
               seed: int | None = None, rng: np.random.Generator | None = None,
               rank_tol: float = DEFAULT_RANK_TOL) -> IsoSearchResult:
    """Search for a system isomorphism implemented on the generating fibers.

    For each degree map (identity, coordinate switch): reject the branch
    outright when the dimension profiles disagree under it; otherwise
    minimize the intertwining residual over unitary pairs ``(B, C)`` with
    random restarts.  A residual below tol is reported as a witness.  When
    both branches are profile-rejected the pair is refuted; otherwise a
    failed search is inconclusive, never a proof.
    """
    if D is None:
        if spsX.D != spsY.D:
            raise ValueError("systems stored at different truncation degrees")
        D = spsX.D
    if D > min(spsX.D, spsY.D):
        raise ValueError("requested degree beyond a stored truncation")
    if rng is None:
        rng = np.random.default_rng(seed)

    profX = {d: spsX.fiber_rank(d, rank_tol) for d in graded_degrees(D)}
    profY = {d: spsY.fiber_rank(d, rank_tol) for d in graded_degrees(D)}

    reports: list[BranchReport] = []
    witness: IsoWitness | None = None
    for switch in (False, True):
        if not _profiles_match(profX, profY, switch, D):
            reports.append(BranchReport(switch, False, None, 0))
            continue
        problem = _BranchProblem(spsX, spsY, switch, D, rank_tol)
        best = math.inf
        best_pair = None
        runs = 0
        for restart in range(max(1, restarts)):
            runs += 1
            if restart == 0:
                B0 = identity(spsX.m)
                C0 = identity(spsX.n)
            else:
                B0 = _haar_unitary(rng, spsX.m)
                C0 = _haar_unitary(rng, spsX.n)
            B, C, res = problem.minimize(B0, C0, iters, tol)
            if res < best:
                best, best_pair = res, (B, C)
            if best < tol:
                break
        reports.append(BranchReport(switch, True, best, runs))
        if best < tol and witness is None:
            witness = IsoWitness(switch, best_pair[0], best_pair[1], best)
            break

    if witness is not None:
        return IsoSearchResult("witness", witness, tuple(reports))
    if all(not r.profile_match for r in reports):
        return IsoSearchResult("refuted", None, tuple(reports))
    return IsoSearchResult("inconclusive", None, tuple(reports))
