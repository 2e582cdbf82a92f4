"""Standard subproduct systems over N x N, truncated at a total degree.

A system is a commutation relation together with orthogonal projections
``p[(i, j)]`` on the ambient blocks ``E^i (x) F^j`` for all bidegrees with
``i + j <= D``.  Validity means the standard normalization at degrees
(0,0), (1,0), (0,1) plus, for every split ``(i,j) = (a,b) + (c,d)``, the
two compressions

    p[(i,j)] <= W (p[(a,b)] (x) I) W*      p[(i,j)] <= W (I (x) p[(c,d)]) W*

with ``W`` the block exchange unitary of the split.  All statements are
"up to total degree D": the truncation degree is a hard data boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .commutation import CommutationRelation, big_w
from .tensor_linalg import (
    DEFAULT_RANK_TOL,
    Degree,
    as_complex_matrix,
    block_dim,
    identity,
    meet_projections,
    orthonormal_range_basis,
    projection_onto_span,
    rank_of_projection,
)

STANDARD_DEGREES = ((0, 0), (1, 0), (0, 1))


class StaircaseError(ValueError):
    """The degree set is not downward closed or exceeds the truncation."""


class PartialDataError(ValueError):
    """Given projections violate the split inequalities or normalization."""


def graded_degrees(D: int) -> list[Degree]:
    """All bidegrees with total <= D, by total degree, E-heavy first."""
    out = []
    for total in range(D + 1):
        for j in range(total + 1):
            out.append((total - j, j))
    return out


def proper_splits(degree: Degree) -> list[tuple[Degree, Degree]]:
    """All splits ``degree = left + right`` with both parts nonzero."""
    i, j = degree
    out = []
    for a in range(i + 1):
        for b in range(j + 1):
            if (a, b) == (0, 0) or (a, b) == (i, j):
                continue
            out.append(((a, b), (i - a, j - b)))
    return out


@dataclass(frozen=True)
class StaircaseSet:
    """A downward-closed set of bidegrees."""

    degrees: frozenset[Degree]

    @classmethod
    def from_degrees(cls, degrees: Iterable[Degree]) -> "StaircaseSet":
        degs = frozenset((int(i), int(j)) for i, j in degrees)
        missing = _closure_defects(degs)
        if missing:
            raise StaircaseError(
                f"degree set is not downward closed; missing {sorted(missing)}")
        return cls(degs)

    def __contains__(self, degree: Degree) -> bool:
        return degree in self.degrees

    def __iter__(self) -> Iterator[Degree]:
        return iter(sorted(self.degrees, key=lambda d: (d[0] + d[1], d[1])))


def _closure_defects(degrees: frozenset[Degree]) -> set[Degree]:
    missing = set()
    for (i, j) in degrees:
        if i < 0 or j < 0:
            raise StaircaseError(f"negative degree {(i, j)}")
        for k in range(i + 1):
            for l in range(j + 1):
                if (k, l) not in degrees:
                    missing.add((k, l))
    return missing


@dataclass(frozen=True)
class SubproductSystem:
    """Projections ``p[(i,j)]`` on ``E^i (x) F^j`` up to total degree D."""

    cr: CommutationRelation
    D: int
    proj: Mapping[Degree, np.ndarray]

    def __post_init__(self):
        object.__setattr__(
            self, "proj",
            {tuple(k): as_complex_matrix(v) for k, v in self.proj.items()})

    @property
    def m(self) -> int:
        return self.cr.m

    @property
    def n(self) -> int:
        return self.cr.n

    def degrees(self) -> list[Degree]:
        return graded_degrees(self.D)

    def ambient_dim(self, degree: Degree) -> int:
        return block_dim(self.m, self.n, degree)

    def projection(self, degree: Degree) -> np.ndarray:
        return self.proj[degree]

    def fiber_rank(self, degree: Degree, tol: float = DEFAULT_RANK_TOL) -> int:
        return rank_of_projection(self.proj[degree], tol)

    def fiber_basis(self, degree: Degree, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
        """Orthonormal basis of the fiber, as matrix columns."""
        return orthonormal_range_basis(self.proj[degree], tol)

    def complement_basis(self, degree: Degree, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
        """Orthonormal basis of the ambient complement of the fiber."""
        d = self.ambient_dim(degree)
        return orthonormal_range_basis(identity(d) - self.proj[degree], tol)


def product_system(cr: CommutationRelation, D: int) -> SubproductSystem:
    """The full system: every fiber is the whole ambient block."""
    proj = {deg: identity(block_dim(cr.m, cr.n, deg)) for deg in graded_degrees(D)}
    return SubproductSystem(cr, D, proj)


def from_fiber_bases(cr: CommutationRelation, D: int,
                     bases: Mapping[Degree, Sequence],
                     tol: float = DEFAULT_RANK_TOL) -> SubproductSystem:
    """Build a system from spanning vectors per fiber.

    Degrees absent from ``bases`` get the full ambient block; an empty
    vector list means the zero fiber.
    """
    proj = {}
    for deg in graded_degrees(D):
        d = block_dim(cr.m, cr.n, deg)
        if deg in bases:
            proj[deg] = projection_onto_span(list(bases[deg]), tol=tol, dim=d)
        else:
            proj[deg] = identity(d)
    return SubproductSystem(cr, D, proj)


@dataclass(frozen=True)
class Violation:
    kind: str
    degree: Degree
    split: tuple[Degree, Degree] | None
    error: float
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """All invariant violations found, up to the truncation degree."""

    D: int
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        head = f"checked up to total degree {self.D}: "
        if self.ok:
            return head + "valid"
        return head + f"{len(self.violations)} violation(s); first: " + \
            self.violations[0].message


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def _split_compressions(proj: Mapping[Degree, np.ndarray], cr: CommutationRelation,
                        degree: Degree) -> Iterator[tuple[tuple[Degree, Degree], np.ndarray, np.ndarray]]:
    """Per proper split, the two dominating projections W(p (x) I)W*, W(I (x) p)W*."""
    m, n = cr.m, cr.n
    for (a, b), (c, d) in proper_splits(degree):
        w = big_w(cr, (a, b), (c, d))
        left = w @ np.kron(proj[(a, b)], identity(block_dim(m, n, (c, d)))) @ w.conj().T
        right = w @ np.kron(identity(block_dim(m, n, (a, b))), proj[(c, d)]) @ w.conj().T
        yield ((a, b), (c, d)), left, right


def validate(sps: SubproductSystem, tol: float = 1e-9) -> ValidationReport:
    """Check every system invariant; report violations, never abort."""
    violations: list[Violation] = []
    m, n = sps.m, sps.n

    usable = {}
    for deg in graded_degrees(sps.D):
        d = block_dim(m, n, deg)
        p = sps.proj.get(deg)
        if p is None:
            violations.append(Violation(
                "missing-fiber", deg, None, float("nan"),
                f"no projection stored at degree {deg}"))
            continue
        if p.shape != (d, d):
            violations.append(Violation(
                "shape", deg, None, float("nan"),
                f"projection at {deg} has shape {p.shape}, ambient dimension is {d}"))
            continue
        usable[deg] = p

    for deg in STANDARD_DEGREES:
        p = usable.get(deg)
        if p is None:
            continue
        err = _max_abs(p - identity(p.shape[0]))
        if err > tol:
            violations.append(Violation(
                "standardness", deg, None, err,
                f"projection at {deg} must be the identity (max deviation {err:.3e})"))

    for deg, p in usable.items():
        err_h = _max_abs(p - p.conj().T)
        err_i = _max_abs(p @ p - p)
        err = max(err_h, err_i)
        if err > tol:
            violations.append(Violation(
                "not-projection", deg, None, err,
                f"matrix at {deg} is not an orthogonal projection (error {err:.3e})"))

    for deg in graded_degrees(sps.D):
        if deg not in usable or deg[0] + deg[1] < 2:
            continue
        p = usable[deg]
        ready = all(part in usable for split in proper_splits(deg) for part in split)
        if not ready:
            continue
        for split, q_left, q_right in _split_compressions(usable, sps.cr, deg):
            err = _max_abs(p @ q_left @ p - p)
            if err > tol:
                violations.append(Violation(
                    "split-left", deg, split, err,
                    f"fiber at {deg} not dominated by left factor of split {split}"
                    f" (error {err:.3e})"))
            err = _max_abs(p @ q_right @ p - p)
            if err > tol:
                violations.append(Violation(
                    "split-right", deg, split, err,
                    f"fiber at {deg} not dominated by right factor of split {split}"
                    f" (error {err:.3e})"))

    return ValidationReport(sps.D, tuple(violations))


def split_meet(proj: Mapping[Degree, np.ndarray], cr: CommutationRelation,
               degree: Degree, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Meet over proper splits of ``W (p_left (x) p_right) W*``.

    This is the largest projection compatible with the split inequalities
    given the lower-degree data, and the degreewise completion step.
    """
    candidates = []
    for (a, b), (c, d) in proper_splits(degree):
        w = big_w(cr, (a, b), (c, d))
        candidates.append(w @ np.kron(proj[(a, b)], proj[(c, d)]) @ w.conj().T)
    if not candidates:
        raise ValueError(f"degree {degree} has no proper splits")
    return meet_projections(candidates, tol)


def maximal_completion(cr: CommutationRelation, partial: Mapping[Degree, np.ndarray],
                       D: int, tol: float = DEFAULT_RANK_TOL) -> SubproductSystem:
    """Extend projections given on a staircase to the largest valid system.

    ``partial`` maps a downward-closed degree set L to projections; degrees
    (0,0), (1,0), (0,1) are always part of L and default to identities.
    Missing degrees are filled in graded order with the meet over proper
    splits of ``W (p (x) p) W*``; any valid system agreeing on L is
    fiberwise contained in the result.
    """
    proj: dict[Degree, np.ndarray] = {}
    for deg, p in partial.items():
        deg = (int(deg[0]), int(deg[1]))
        if deg[0] + deg[1] > D:
            raise StaircaseError(f"partial degree {deg} beyond truncation {D}")
        d = block_dim(cr.m, cr.n, deg)
        p = as_complex_matrix(p)
        if p.shape != (d, d):
            raise PartialDataError(
                f"projection at {deg} has shape {p.shape}, ambient dimension is {d}")
        proj[deg] = p

    for deg in STANDARD_DEGREES:
        d = block_dim(cr.m, cr.n, deg)
        if deg in proj:
            if _max_abs(proj[deg] - identity(d)) > tol:
                raise PartialDataError(f"projection at {deg} must be the identity")
        proj[deg] = identity(d)

    L = StaircaseSet.from_degrees(proj.keys())

    for deg in L:
        p = proj[deg]
        err = max(_max_abs(p - p.conj().T), _max_abs(p @ p - p))
        if err > max(tol, 1e-9):
            raise PartialDataError(
                f"matrix at {deg} is not an orthogonal projection (error {err:.3e})")
        if deg[0] + deg[1] < 2:
            continue
        for split, q_left, q_right in _split_compressions(proj, cr, deg):
            for q, side in ((q_left, "left"), (q_right, "right")):
                err = _max_abs(p @ q @ p - p)
                if err > max(tol, 1e-9):
                    raise PartialDataError(
                        f"partial data violates the {side} inequality at {deg}, "
                        f"split {split} (error {err:.3e})")

    for deg in graded_degrees(D):
        if deg in proj:
            continue
        proj[deg] = split_meet(proj, cr, deg, tol)

    return SubproductSystem(cr, D, proj)


def fiber_formula_check(sps: SubproductSystem, degree: Degree,
                        L: Iterable[Degree] | None = None,
                        tol: float = 1e-9) -> bool:
    """True iff the fiber equals the intersection over proper splits.

    For completion output this holds at every degree outside the given
    staircase; a strictly smaller fiber at ``degree`` fails the check.
    """
    if L is not None and degree in set(L):
        raise ValueError(f"degree {degree} lies inside the staircase")
    meet = split_meet(sps.proj, sps.cr, degree, tol=min(tol, DEFAULT_RANK_TOL))
    return _max_abs(meet - sps.proj[degree]) <= tol


def adjoin_over_n(row_projs: Sequence[np.ndarray], col_projs: Sequence[np.ndarray],
                  cr: CommutationRelation, D: int,
                  tol: float = DEFAULT_RANK_TOL) -> SubproductSystem:
    """Adjoin two one-parameter systems along the axes and complete.

    ``row_projs[k]`` is the projection at degree ``(k + 1, 0)`` (so the
    first entry must be the identity on E), ``col_projs[k]`` the one at
    ``(0, k + 1)``.  The axis data must satisfy the one-variable
    inequalities ``p_i <= p_a (x) p_(i-a)``; it is preserved exactly and
    everything off the axes is filled maximally.
    """
    partial: dict[Degree, np.ndarray] = {}
    for axis, projs, dim1 in (("row", row_projs, cr.m), ("col", col_projs, cr.n)):
        mats = [as_complex_matrix(p) for p in projs]
        if len(mats) > D:
            raise ValueError(f"{axis} axis data extends beyond truncation {D}")
        for idx, p in enumerate(mats):
            deg_total = idx + 1
            d = dim1 ** deg_total
            if p.shape != (d, d):
                raise PartialDataError(
                    f"{axis} axis projection for degree {deg_total} has shape "
                    f"{p.shape}, expected {(d, d)}")
            for a in range(1, deg_total):
                q = np.kron(mats[a - 1], mats[deg_total - a - 1])
                err = _max_abs(p @ q @ p - p)
                if err > max(tol, 1e-9):
                    raise PartialDataError(
                        f"{axis} axis data invalid at degree {deg_total}, "
                        f"split {a}+{deg_total - a} (error {err:.3e})")
            deg = (deg_total, 0) if axis == "row" else (0, deg_total)
            partial[deg] = p
    return maximal_completion(cr, partial, D, tol)


def dimension_profile(sps: SubproductSystem,
                      tol: float = DEFAULT_RANK_TOL) -> dict[Degree, int]:
    """Fiber ranks per bidegree, via the singular-value tolerance rule."""
    return {deg: sps.fiber_rank(deg, tol) for deg in graded_degrees(sps.D)}
