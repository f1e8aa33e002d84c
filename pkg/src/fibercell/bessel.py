"""Bessel functions J0, J1 and the positive zeros of J0.

Self-contained double-precision evaluation, no scipy.special:

* ``x <= 12``: ascending power series.  The largest partial term at x = 12
  is ~4.2e3, so roundoff stays near 5e-13 absolute.
* ``x > 12``: Hankel asymptotic expansion with the modulus/phase series
  P, Q truncated at the smallest term (already ~1e-13 at x = 12, machine
  precision by x = 15).

Zeros of J0 start from the McMahon expansion and are polished by Newton
using J0' = -J1; a bisection fallback guards against a Newton step leaving
the bracket ``((n-1)*pi, n*pi)``.  Computed zeros are cached.
"""

from __future__ import annotations

import math
import threading

SERIES_ASYMPTOTIC_CROSSOVER = 12.0
_MAX_SERIES_TERMS = 80


def bessel_j0(x: float) -> float:
    """J0(x) for x >= 0."""
    if x < 0:
        raise ValueError("bessel_j0 requires x >= 0")
    if x <= SERIES_ASYMPTOTIC_CROSSOVER:
        return _j0_series(x)
    return _j_asymptotic(0, x)


def bessel_j1(x: float) -> float:
    """J1(x) for x >= 0."""
    if x < 0:
        raise ValueError("bessel_j1 requires x >= 0")
    if x <= SERIES_ASYMPTOTIC_CROSSOVER:
        return _j1_series(x)
    return _j_asymptotic(1, x)


def _j0_series(x: float) -> float:
    # J0(x) = sum_m (-1)^m (x^2/4)^m / (m!)^2
    q = 0.25 * x * x
    term = 1.0
    s = 1.0
    for m in range(1, _MAX_SERIES_TERMS + 1):
        term *= -q / (m * m)
        s += term
        if abs(term) < 1e-18 * max(1.0, abs(s)):
            break
    return s


def _j1_series(x: float) -> float:
    # J1(x) = (x/2) sum_m (-1)^m (x^2/4)^m / (m! (m+1)!)
    q = 0.25 * x * x
    term = 0.5 * x
    s = term
    for m in range(1, _MAX_SERIES_TERMS + 1):
        term *= -q / (m * (m + 1))
        s += term
        if abs(term) < 1e-18 * max(1.0, abs(s)):
            break
    return s


def _j_asymptotic(nu: int, x: float) -> float:
    # J_nu(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (2 nu + 1) pi/4,
    # with a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k) feeding
    # P = sum (-1)^k a_{2k} x^{-2k}, Q = sum (-1)^k a_{2k+1} x^{-2k-1}.
    mu = 4.0 * nu * nu
    a = 1.0
    xk = 1.0
    p = 0.0
    q = 0.0
    sgn_p = 1.0
    sgn_q = 1.0
    k = 0
    prev = math.inf
    while k < 60:
        term = a / xk
        if abs(term) > prev:
            break  # past the smallest term: stop before the series diverges
        prev = abs(term)
        if k % 2 == 0:
            p += sgn_p * term
            sgn_p = -sgn_p
        else:
            q += sgn_q * term
            sgn_q = -sgn_q
        k += 1
        a *= (mu - (2 * k - 1) ** 2) / (8.0 * k)
        xk *= x
    chi = x - (2 * nu + 1) * math.pi / 4.0
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


_zero_cache: list[float] = []
_zero_lock = threading.Lock()


def bessel_j0_zero(n: int) -> float:
    """n-th positive zero of J0 (n >= 1), |J0(zero)| <= 1e-11."""
    if n < 1:
        raise ValueError("zero index must be >= 1")
    with _zero_lock:
        while len(_zero_cache) < n:
            _zero_cache.append(_compute_j0_zero(len(_zero_cache) + 1))
        return _zero_cache[n - 1]


def bessel_j0_zeros(n: int):
    """First n positive zeros of J0 as a list."""
    bessel_j0_zero(n)
    with _zero_lock:
        return list(_zero_cache[:n])


def _compute_j0_zero(n: int) -> float:
    # McMahon: j_{0,n} ~ b + 1/(8b) - 31/(384 b^3) + 3779/(15360 b^5), b = (n - 1/4) pi
    b = (n - 0.25) * math.pi
    x = b + 1.0 / (8.0 * b) - 31.0 / (384.0 * b ** 3) + 3779.0 / (15360.0 * b ** 5)
    lo = (n - 1) * math.pi
    hi = n * math.pi + 0.5
    for _ in range(60):
        f = bessel_j0(x)
        fp = -bessel_j1(x)
        if fp == 0.0:
            break
        step = f / fp
        x_new = x - step
        if not (lo < x_new < hi):
            return _bisect_j0_zero(lo, hi)
        x = x_new
        if abs(step) <= 1e-15 * x:
            break
    if abs(bessel_j0(x)) > 1e-11:
        return _bisect_j0_zero(lo, hi)
    return x


def _bisect_j0_zero(lo: float, hi: float) -> float:
    # bracket so that J0 changes sign; zeros of J0 are simple
    a, b = lo + 1e-9, hi
    fa = bessel_j0(a)
    while bessel_j0(b) * fa > 0:
        b -= 0.1 * (b - a)
        if b <= a:
            raise RuntimeError("failed to bracket J0 zero")
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = bessel_j0(m)
        if fa * fm <= 0:
            b = m
        else:
            a, fa = m, fm
        if b - a < 1e-15 * b:
            break
    return 0.5 * (a + b)
