"""Downward recursions for the power-basis coefficients of polynomial solutions.

Both functions return r_m = a_{n-m}/a_n given r_0..r_{m-1}.  They only use ring
operations, so ``n`` may be an integer (numeric tables) or a field element in
``n`` (generic coefficient ratios).
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial


def _frac(x):
    return Fraction(x) if isinstance(x, int) else x


def binom_top(top, i: int):
    """C(top, i) as a polynomial in ``top`` (valid for symbolic top)."""
    out = _frac(1)
    for t in range(i):
        out = out * (top - t)
    return out / factorial(i)


def continuous_ratio_step(m: int, n, coeffs, prev: list):
    """Coefficient recursion of sigma y'' + tau y' + lambda_n y = 0 with k = n - m.

    (n-k)(a(n+k-1)+d) a_k = (k+1)((kb+e) a_{k+1} + (k+2) c a_{k+2})
    """
    a, b, c, d, e = coeffs
    k = n - m
    r1 = prev[m - 1]
    r2 = prev[m - 2] if m >= 2 else 0
    lhs = m * (a * (2 * n - m - 1) + d)
    rhs = (k + 1) * ((k * b + e) * r1 + (k + 2) * c * r2)
    if not lhs:
        raise ZeroDivisionError((m, lhs))
    return _frac(rhs) / lhs if isinstance(lhs, int) else rhs / lhs


def discrete_ratio_step(m: int, n, coeffs, prev: list):
    """Coefficient recursion of sigma Delta nabla y + tau Delta y + lambda_n y = 0, k = n - m.

    The right-hand side uses every higher coefficient a_{k+j}, j = 1..m.
    """
    a, b, c, d, e = coeffs
    k = n - m
    rhs = _frac(k + 1) / 2 * ((2 * b + d) * k + 2 * e) * prev[m - 1]
    for j in range(2, m + 1):
        even = 1 + (-1) ** j
        odd = 1 - (-1) ** j
        w = a * even * binom_top(k + j, j + 2) + (b * odd + d) * binom_top(k + j, j + 1) + (c * even + e) * binom_top(k + j, j)
        rhs = rhs + w * prev[m - j]
    lhs = m * (a * (2 * n - m - 1) + d)
    if not lhs:
        raise ZeroDivisionError((m, lhs))
    return _frac(rhs) / lhs if isinstance(lhs, int) else rhs / lhs
