"""Physicists' Hermite polynomials and the Mehler kernel.

The Fock amplitudes of a squeezed-coherent state and the overlap series between
two such states both involve terms of the form ``t**(n/2) * H_n(x) / sqrt(n!)``.
Evaluated naively, ``H_n`` and ``n!`` overflow long before the product does, so
everything here goes through the scaled three-term recurrence in
:func:`hermite_scaled_seq`.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "hermite",
    "hermite_scaled_seq",
    "mehler_closed",
    "mehler_series",
]

MEHLER_DEFAULT_TERMS = 400
_EARLY_EXIT_RUN = 10
_EARLY_EXIT_REL = 1e-16


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x).

    Uses H_0 = 1, H_1 = 2x and H_{n+1} = 2x H_n - 2n H_{n-1}.

    Raises
    ------
    OverflowError
        If an intermediate value leaves the double range.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"Hermite degree must be non-negative, got {n}")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"Hermite argument must be finite, got {x}")
    h_prev, h = 1.0, 2.0 * x
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
        if not math.isfinite(h):
            raise OverflowError(f"H_{n}({x}) overflows double precision (at degree {k + 1})")
    return h


def hermite_scaled_seq(n_max: int, x: float, t: float) -> np.ndarray:
    """Return ``t**(n/2) * H_n(x) / sqrt(n!)`` for ``n = 0..n_max``.

    The recurrence

        h[n+1] = 2x sqrt(t/(n+1)) h[n] - 2t sqrt(n/(n+1)) h[n-1]

    keeps every entry at the magnitude of the final product, so nothing
    overflows unless the true value does.

    Parameters
    ----------
    n_max : int
        Highest degree, ``n_max >= 0``.
    x : float
        Hermite argument.
    t : float
        Scale, ``0 <= t < 1``.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    if not (0.0 <= t < 1.0):
        raise ValueError(f"scale t must lie in [0, 1), got {t}")
    if not math.isfinite(x):
        raise ValueError(f"Hermite argument must be finite, got {x}")

    out = np.zeros(n_max + 1)
    out[0] = 1.0
    if n_max == 0 or t == 0.0:
        return out
    out[1] = 2.0 * x * math.sqrt(t)
    for n in range(1, n_max):
        out[n + 1] = (2.0 * x * math.sqrt(t / (n + 1)) * out[n]
                      - 2.0 * t * math.sqrt(n / (n + 1)) * out[n - 1])
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"scaled Hermite sequence overflows for x={x}, t={t}")
    return out


def _check_kernel_arg(s: float) -> None:
    if not abs(s) < 1.0:
        raise ValueError(f"Mehler kernel requires |s| < 1, got s={s}")


def mehler_closed(x: float, y: float, s: float) -> float:
    """Closed form of sum_n H_n(x) H_n(y) s^n / (2^n n!)."""
    _check_kernel_arg(s)
    one_minus = 1.0 - s * s
    expo = (2.0 * x * y * s - (x * x + y * y) * s * s) / one_minus
    return math.exp(expo) / math.sqrt(one_minus)


def mehler_series(x: float, y: float, s: float, n_terms: int = MEHLER_DEFAULT_TERMS) -> float:
    """Partial sum of the Mehler series over the first ``n_terms`` degrees.

    Each summand is formed as a product of two scaled Hermite values with
    ``t = |s|/2``, so large degrees never overflow. Summation stops early once
    ten consecutive summands fall below ``1e-16 * |partial sum|``.
    """
    _check_kernel_arg(s)
    n_terms = int(n_terms)
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")

    t = abs(s) / 2.0
    hx = hermite_scaled_seq(n_terms - 1, x, t)
    hy = hermite_scaled_seq(n_terms - 1, y, t)
    terms = hx * hy
    if s < 0:
        terms[1::2] *= -1.0

    total = 0.0
    run = 0
    for term in terms:
        total += term
        if abs(term) < _EARLY_EXIT_REL * abs(total):
            run += 1
            if run >= _EARLY_EXIT_RUN:
                break
        else:
            run = 0
    return float(total)
