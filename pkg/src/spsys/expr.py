"""Tiny prefix expression language for operators on a truncated Fock space.

Grammar (s-expressions, whitespace-separated):

    expr  := atom | "(" head expr* ")"
    head  := "+" | "*" | "scale" RE IM
    atom  := "I" | e<k> | f<k> | v:<i>,<j>:<k>

``e<k>`` and ``f<k>`` are the creation operators of the k-th standard
basis vectors of E and F (1-based); ``v:i,j:k`` is the creation operator
of the k-th orthonormal basis vector of the fiber at degree (i, j);
``(scale RE IM x)`` multiplies by the complex scalar RE + IM*i.

Example: ``(+ (* e1 f2) (scale 3 0 I))``.
"""

from __future__ import annotations

import re

import numpy as np

from .fock import FockOperator, TruncatedFock, creation_operator, identity_operator

_ATOM_E = re.compile(r"^e(\d+)$")
_ATOM_F = re.compile(r"^f(\d+)$")
_ATOM_V = re.compile(r"^v:(\d+),(\d+):(\d+)$")


class ExpressionError(ValueError):
    """Malformed operator expression."""


def _tokenize(text: str) -> list[str]:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise ExpressionError("empty expression")
    return tokens


def _parse(tokens: list[str], pos: int):
    tok = tokens[pos]
    if tok == "(":
        out = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            node, pos = _parse(tokens, pos)
            out.append(node)
        if pos >= len(tokens):
            raise ExpressionError("unbalanced parentheses")
        return out, pos + 1
    if tok == ")":
        raise ExpressionError("unexpected ')'")
    return tok, pos + 1


def _unit(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def _atom(fock: TruncatedFock, tok: str, tol: float) -> FockOperator:
    sps = fock.sps
    if tok == "I":
        return identity_operator(fock)
    match = _ATOM_E.match(tok)
    if match:
        k = int(match.group(1))
        if not 1 <= k <= sps.m:
            raise ExpressionError(f"{tok}: index out of range 1..{sps.m}")
        return creation_operator(fock, (1, 0), _unit(sps.m, k - 1), tol=tol)
    match = _ATOM_F.match(tok)
    if match:
        k = int(match.group(1))
        if not 1 <= k <= sps.n:
            raise ExpressionError(f"{tok}: index out of range 1..{sps.n}")
        return creation_operator(fock, (0, 1), _unit(sps.n, k - 1), tol=tol)
    match = _ATOM_V.match(tok)
    if match:
        i, j, k = (int(match.group(g)) for g in (1, 2, 3))
        if i + j > fock.D:
            raise ExpressionError(f"{tok}: degree beyond truncation {fock.D}")
        basis = fock.block_bases[(i, j)]
        if not 1 <= k <= basis.shape[1]:
            raise ExpressionError(
                f"{tok}: fiber at ({i},{j}) has {basis.shape[1]} basis vectors")
        return creation_operator(fock, (i, j), basis[:, k - 1], tol=tol)
    raise ExpressionError(f"unknown atom {tok!r}")


def _eval(fock: TruncatedFock, node, tol: float) -> FockOperator:
    if isinstance(node, str):
        return _atom(fock, node, tol)
    if not node:
        raise ExpressionError("empty list")
    head = node[0]
    if head == "+":
        if len(node) < 2:
            raise ExpressionError("'+' needs at least one argument")
        out = _eval(fock, node[1], tol)
        for sub in node[2:]:
            out = out + _eval(fock, sub, tol)
        return out
    if head == "*":
        if len(node) < 2:
            raise ExpressionError("'*' needs at least one argument")
        out = _eval(fock, node[1], tol)
        for sub in node[2:]:
            out = out * _eval(fock, sub, tol)
        return out
    if head == "scale":
        if len(node) != 4:
            raise ExpressionError("'scale' takes RE IM expr")
        try:
            scalar = complex(float(node[1]), float(node[2]))
        except (TypeError, ValueError) as exc:
            raise ExpressionError("'scale' takes numeric RE IM") from exc
        return scalar * _eval(fock, node[3], tol)
    raise ExpressionError(f"unknown operator {head!r}")


def build_operator(fock: TruncatedFock, text: str, tol: float = 1e-9) -> FockOperator:
    """Parse and evaluate an operator expression on the given Fock space."""
    tokens = _tokenize(text)
    node, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise ExpressionError("trailing tokens after expression")
    return _eval(fock, node, tol)
