"""q-analogue arithmetic over exact rationals or floats.

Every function here is generic in the scalar type of ``q``: pass a
`fractions.Fraction` for exact arithmetic (all verification code does) or a
`float` for fast approximate evaluation at sizes where exact values are not
needed. Nothing in this module ever rounds a rational input.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Union

Scalar = Union[int, Fraction, float]

__all__ = [
    "Scalar",
    "parse_scalar",
    "q_int",
    "q_pochhammer",
    "euler_phi",
    "euler_phi_truncation",
    "q_stirling",
    "gould_stirling",
    "partition_z",
]


def parse_scalar(text: str, exact: bool = True) -> Scalar:
    """Parse ``"p/r"`` or a decimal string; Fraction when exact, else float."""
    value = Fraction(text)
    return value if exact else float(value)


def q_int(k: int, q: Scalar) -> Scalar:
    """The q-integer [k]: 1 + q + ... + q^(k-1).

    Uses the sum form rather than (1-q^k)/(1-q), so q = 1 cleanly gives k.
    """
    if k < 0:
        raise ValueError(f"q_int needs k >= 0, got k={k}")
    if q < 0:
        raise ValueError(f"q_int needs q >= 0, got q={q}")
    total = 0 * q
    power = 1 + 0 * q
    for _ in range(k):
        total += power
        power = power * q
    return total


def q_pochhammer(n: int, q: Scalar) -> Scalar:
    """(q;q)_n, the product of (1 - q^k) for k = 1..n; empty product is 1."""
    if n < 0:
        raise ValueError(f"q_pochhammer needs n >= 0, got n={n}")
    result = 1 + 0 * q
    power = 1 + 0 * q
    for _ in range(n):
        power = power * q
        result = result * (1 - power)
    return result


def euler_phi_truncation(q: Scalar, eps: float) -> tuple[int, Scalar]:
    """Truncation index and certified tail bound for the Euler product.

    The N-term partial product overshoots the infinite one by at most
    sum_{k>N} q^k = q^(N+1)/(1-q): every dropped factor (1-q^k) lies in
    (0,1), and 1 - prod(1-x_k) <= sum x_k for x_k in [0,1]. Returns the
    smallest N whose bound is <= eps, together with that bound.
    """
    if not 0 < q < 1:
        raise ValueError(f"need 0 < q < 1, got q={q}")
    if eps <= 0:
        raise ValueError(f"need eps > 0, got eps={eps}")
    n = 0
    tail = q / (1 - q)
    while tail > eps:
        n += 1
        tail = tail * q
    return n, tail


def euler_phi(q: Scalar, eps: float = 1e-12) -> Scalar:
    """prod_{k>=1} (1 - q^k), truncated once the certified tail drops below eps.

    The returned value overestimates the limit by at most eps (see
    `euler_phi_truncation` for the bound).
    """
    n, _ = euler_phi_truncation(q, eps)
    return q_pochhammer(n, q)


def _stirling_triangle(a: int, b: int, q: Scalar, shifted: bool) -> Scalar:
    if a < 0:
        raise ValueError(f"stirling triangle needs a >= 0, got a={a}")
    if b < 0 or b > a:
        return 0 * q
    qints = [q_int(j, q) for j in range(a + 1)]
    qpow = [1 + 0 * q]
    for _ in range(a):
        qpow.append(qpow[-1] * q)
    row = [1 + 0 * q]
    for r in range(a):
        new = []
        for j in range(r + 2):
            val = 0 * q
            if j >= 1:
                left = row[j - 1]
                val += qpow[j - 1] * left if shifted else left
            if j <= r:
                val += qints[j] * row[j]
            new.append(val)
        row = new
    return row[b]


def q_stirling(a: int, b: int, q: Scalar) -> Scalar:
    """q-Stirling number of the second kind S[a, b] at base q.

    Bottom-up evaluation of the triangle S[a+1, b] = q^(b-1) S[a, b-1]
    + [b] S[a, b] with S[0, 0] = 1 and zero outside 0 <= b <= a. Accepts
    any q > 0, including q > 1 (the partition normalizer needs base 1/q).
    Out-of-range b returns 0 rather than raising.
    """
    return _stirling_triangle(a, b, q, shifted=True)


def gould_stirling(a: int, b: int, q: Scalar) -> Scalar:
    """Gould's modified q-Stirling number G[a, b] at base q.

    Same triangle as `q_stirling` without the power prefactor:
    G[a+1, b] = G[a, b-1] + [b] G[a, b]. At q = 1 both triangles reduce
    to the classical Stirling numbers of the second kind; in general
    S[a, b] = q^binom(b,2) * G[a, b].
    """
    return _stirling_triangle(a, b, q, shifted=False)


def partition_z(m: int, n: int, q: Scalar) -> Scalar:
    """Normalizing constant of the bounded geometric stationary law.

    Equals q^(binom(m+1,2) - n) * S[m+1, m-n+1] with the q-Stirling factor
    evaluated at base 1/q. (The exponent carries -n; the sign is pinned by
    the normalization tests at (m,n) = (2,1) and (3,2).) Computed through
    the rescaled triangle T[a, b] = q^binom(a,2) * S_{1/q}[a, b], whose
    recursion

        T[a+1, b] = q^(a-b+1) * (T[a, b-1] + [b]_q T[a, b])

    only ever multiplies by nonnegative powers of q, so float evaluation
    stays in range at sizes where the raw q-Stirling factor would overflow.
    Exact inputs give the exact value. q = 1 is allowed as the classical
    limit; there the result counts rook extensions, which is the normalizer
    of the uniform-throw model.
    """
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got m={m} n={n}")
    if not 0 < q <= 1:
        raise ValueError(f"need 0 < q <= 1, got q={q}")
    qints = [q_int(j, q) for j in range(m + 2)]
    qpow = [1 + 0 * q]
    for _ in range(m + 1):
        qpow.append(qpow[-1] * q)
    row = [1 + 0 * q]
    for r in range(m + 1):
        new = []
        for j in range(r + 2):
            val = 0 * q
            if j >= 1:
                val += row[j - 1]
            if j <= r:
                val += qints[j] * row[j]
            new.append(qpow[r - j + 1] * val)
        row = new
    return row[m - n + 1] * q ** (-n)


def binom2(k: int) -> int:
    """binom(k, 2), the exponent showing up throughout the closed forms."""
    return comb(k, 2)
