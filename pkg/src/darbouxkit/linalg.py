"""Small exact matrices over scalars or base-ring elements."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .algebra import Element, Signature


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def det_elements(sig: Signature, m: list) -> Element:
    """Leibniz determinant; entries must be even (they commute)."""
    n = len(m)
    if n == 0:
        return sig.one()
    if n <= 3:
        total = sig.zero()
        for p in permutations(range(n)):
            term = sig.const(_perm_sign(p))
            for r in range(n):
                term = term * m[r][p[r]]
                if term.is_zero():
                    break
            total = total + term
        return total
    total = sig.zero()
    for c in range(n):
        if m[0][c].is_zero():
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        t = m[0][c] * det_elements(sig, minor)
        total = total + t if c % 2 == 0 else total - t
    return total


def adjugate_elements(sig: Signature, m: list) -> list:
    n = len(m)
    if n == 1:
        return [[sig.one()]]
    adj = [[sig.zero()] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            minor = [row[:c] + row[c + 1:] for i, row in enumerate(m) if i != r]
            v = det_elements(sig, minor)
            adj[c][r] = v if (r + c) % 2 == 0 else -v
    return adj


def det_scalars(m: list):
    """Determinant by exact Gaussian elimination."""
    n = len(m)
    a = [list(row) for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f != 0:
                for j in range(c, n):
                    a[r][j] = a[r][j] - f * a[c][j]
    return det
