"""Commutative polynomials in ``z_1..z_m, w_1..w_n`` with complex coefficients.

Internal carrier shared by the non-commutative algebra (as abelianization
target) and the character-variety machinery.  Terms map exponent tuples of
length ``m + n`` (z-exponents first) to coefficients; zero coefficients are
dropped on normalization.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

Degree = tuple[int, int]

_COEFF_EPS = 0.0  # exact-zero pruning only; numeric chopping is explicit


class CommutativePolynomial:

    def __init__(self, m: int, n: int, terms: Mapping[tuple[int, ...], complex] | None = None):
        self.m = int(m)
        self.n = int(n)
        self.terms: dict[tuple[int, ...], complex] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.m + self.n:
                    raise ValueError(
                        f"exponent tuple of length {len(exps)}, expected {self.m + self.n}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = complex(coeff)
                if c != 0:
                    self.terms[exps] = self.terms.get(exps, 0) + c
            self._prune()

    def _prune(self):
        self.terms = {e: c for e, c in self.terms.items() if abs(c) > _COEFF_EPS}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, m: int, n: int) -> "CommutativePolynomial":
        return cls(m, n)

    @classmethod
    def one(cls, m: int, n: int) -> "CommutativePolynomial":
        return cls(m, n, {(0,) * (m + n): 1.0})

    @classmethod
    def variable(cls, m: int, n: int, index: int) -> "CommutativePolynomial":
        """The coordinate with the given 0-based index; z's first, then w's."""
        if not 0 <= index < m + n:
            raise ValueError(f"variable index {index} out of range")
        exps = [0] * (m + n)
        exps[index] = 1
        return cls(m, n, {tuple(exps): 1.0})

    # -- ring structure ----------------------------------------------------

    def _check_ring(self, other: "CommutativePolynomial"):
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("polynomials over different variable sets")

    def __add__(self, other: "CommutativePolynomial") -> "CommutativePolynomial":
        self._check_ring(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return CommutativePolynomial(self.m, self.n, terms)

    def __sub__(self, other: "CommutativePolynomial") -> "CommutativePolynomial":
        return self + (-other)

    def __neg__(self) -> "CommutativePolynomial":
        return CommutativePolynomial(self.m, self.n, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CommutativePolynomial):
            self._check_ring(other)
            terms: dict[tuple[int, ...], complex] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    terms[e] = terms.get(e, 0) + c1 * c2
            return CommutativePolynomial(self.m, self.n, terms)
        return CommutativePolynomial(
            self.m, self.n, {e: complex(other) * c for e, c in self.terms.items()})

    __rmul__ = __mul__

    # -- queries -----------------------------------------------------------

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def chop(self, tol: float) -> "CommutativePolynomial":
        """Drop coefficients of magnitude at most tol."""
        return CommutativePolynomial(
            self.m, self.n, {e: c for e, c in self.terms.items() if abs(c) > tol})

    def normalized_unit_max(self) -> "CommutativePolynomial":
        scale = self.max_abs_coeff()
        if scale == 0.0:
            return self
        return (1.0 / scale) * self

    def total_degree(self) -> int:
        """Max total degree over terms; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def bidegree(self) -> Degree | None:
        """Common (z-degree, w-degree) of all terms, if homogeneous.

        The zero polynomial reports (0, 0); mixed degrees report None.
        """
        degs = {(sum(e[:self.m]), sum(e[self.m:])) for e in self.terms}
        if not degs:
            return (0, 0)
        if len(degs) == 1:
            return next(iter(degs))
        return None

    # -- calculus and evaluation --------------------------------------------

    def partial_derivative(self, index: int) -> "CommutativePolynomial":
        if not 0 <= index < self.m + self.n:
            raise ValueError(f"variable index {index} out of range")
        terms = {}
        for e, c in self.terms.items():
            if e[index] == 0:
                continue
            new = list(e)
            new[index] -= 1
            key = tuple(new)
            terms[key] = terms.get(key, 0) + c * e[index]
        return CommutativePolynomial(self.m, self.n, terms)

    def derivative(self, orders: Sequence[int]) -> "CommutativePolynomial":
        """Iterated partial derivative with the given per-variable orders."""
        out = self
        for index, k in enumerate(orders):
            for _ in range(int(k)):
                out = out.partial_derivative(index)
        return out

    def evaluate(self, zs, ws) -> complex:
        vals = list(np.asarray(zs, dtype=complex).reshape(-1)) + \
            list(np.asarray(ws, dtype=complex).reshape(-1))
        return self.evaluate_vals(vals)

    def evaluate_vals(self, vals: Sequence[complex]) -> complex:
        if len(vals) != self.m + self.n:
            raise ValueError(f"expected {self.m + self.n} values, got {len(vals)}")
        total = 0j
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= complex(v) ** k
            total += term
        return total

    def eval_generic(self, vals: Sequence, one):
        """Evaluate with values in any commutative ring.

        ``one`` is the ring unit; ring elements must support ``+``, ``*``
        between themselves and ``scalar * element``.
        """
        if len(vals) != self.m + self.n:
            raise ValueError(f"expected {self.m + self.n} values, got {len(vals)}")
        total = 0.0 * one
        for e, c in self.terms.items():
            acc = one
            for v, k in zip(vals, e):
                for _ in range(k):
                    acc = acc * v
            total = total + c * acc
        return total

    # -- misc ----------------------------------------------------------------

    def close_to(self, other: "CommutativePolynomial", tol: float = 1e-9) -> bool:
        diff = self - other
        return diff.max_abs_coeff() <= tol

    def __repr__(self):
        if not self.terms:
            return "0"
        names = [f"z{i + 1}" for i in range(self.m)] + [f"w{j + 1}" for j in range(self.n)]
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{names[k]}^{p}" if p > 1 else names[k]
                for k, p in enumerate(e) if p) or "1"
            parts.append(f"({c:.6g})*{mono}")
        return " + ".join(parts)
