"""Scalar numerical kernels used throughout the package.

Everything here is pure Python on top of math.exp/math.sqrt so results are
bit-stable across platforms: the complementary error function erfc and its
scaled variant erfcx, the leading asymptotic branch of erfc, an adaptive
Simpson integrator, the Bose occupation integrand x/(e^x - 1) with its
removable singularity filled in, and integer extraction for strict
inequalities of the form n > bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "erfc_exact",
    "erfcx",
    "log_erfc",
    "erfc_asymptotic",
    "integrate",
    "bose_integrand",
    "min_integer_above",
]

_SQRT_PI = math.sqrt(math.pi)

# Below this point the asymptotic branch errs by more than ~10% and is not a
# meaningful approximation of erfc.
ASYMPTOTIC_X_SWITCH = 2.0

# Crossover between the Maclaurin series of erf and the continued fraction for
# erfcx. The series route computes erfc as 1 - erf and loses about
# log10(erf/erfc) digits to cancellation, which passes 1e-13 only below ~2;
# the continued fraction holds near machine precision down to ~0.8.
_SERIES_CF_SPLIT = 1.5


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and budget for adaptive integration.

    abs_tol is an absolute error target for the whole interval;
    max_subdivisions caps how many interval splits the refinement may perform.
    """

    abs_tol: float = 1e-10
    max_subdivisions: int = 4096

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


class QuadratureError(RuntimeError):
    """Raised when the subdivision budget is exhausted before convergence."""


def _erf_series(x: float) -> float:
    # erf(x) = (2/sqrt(pi)) x e^{-x^2} sum_n (2x^2)^n / (2n+1)!!
    # All terms positive: no cancellation for 0 <= x < 3.
    t = 2.0 * x * x
    term = 1.0
    total = 1.0
    denom = 1.0
    for n in range(1, 200):
        denom += 2.0
        term *= t / denom
        total += term
        if term < 1e-18 * total:
            break
    return (2.0 / _SQRT_PI) * x * math.exp(-x * x) * total


def _erfcx_cf(x: float) -> float:
    # Scaled complementary error function via the Laplace continued fraction
    #   erfcx(x) = (1/sqrt(pi)) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    # evaluated with the modified Lentz algorithm. Accurate for x >= ~0.8.
    tiny = 1e-300
    f = x if x != 0 else tiny
    c = f
    d = 0.0
    for n in range(1, 300):
        a = 0.5 * n
        d = x + a * d
        if d == 0.0:
            d = tiny
        c = x + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return 1.0 / (_SQRT_PI * f)


def erfcx(x: float) -> float:
    """exp(x^2) * erfc(x), stable for large positive x."""
    if x < _SERIES_CF_SPLIT:
        return math.exp(x * x) * erfc_exact(x)
    return _erfcx_cf(x)


def erfc_exact(x: float) -> float:
    """Complementary error function (2/sqrt(pi)) integral_x^inf e^{-s^2} ds."""
    if math.isnan(x):
        return math.nan
    if x < 0.0:
        return 2.0 - erfc_exact(-x)
    if x < _SERIES_CF_SPLIT:
        return 1.0 - _erf_series(x)
    # erfc underflows past ~27; exp(-x*x) handles that naturally.
    return math.exp(-x * x) * _erfcx_cf(x)


def log_erfc(x: float) -> float:
    """ln erfc(x) without underflow for large positive x."""
    if x >= _SERIES_CF_SPLIT:
        return -x * x + math.log(_erfcx_cf(x))
    return math.log(erfc_exact(x))


def erfc_asymptotic(x: float) -> float:
    """Leading asymptotic branch of erfc for |x| >= ASYMPTOTIC_X_SWITCH.

    Returns e^{-x^2}/(sqrt(pi) x) as x -> +inf and 2 + e^{-x^2}/(sqrt(pi) x)
    (the same expression, x negative) as x -> -inf.
    """
    if abs(x) < ASYMPTOTIC_X_SWITCH:
        raise ValueError(
            f"asymptotic branch needs |x| >= {ASYMPTOTIC_X_SWITCH}, got {x!r}"
        )
    tail = math.exp(-x * x) / (_SQRT_PI * x)
    return tail if x > 0 else 2.0 + tail


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return (fa + 4.0 * fm + fb) * h / 6.0


def integrate(f, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Adaptive Simpson quadrature of f over [a, b].

    Accepts a panel when the Richardson estimate |S2 - S1| <= 15 * local_tol
    holds, accumulating S2 + (S2 - S1)/15. Raises QuadratureError when the
    split budget runs out first.
    """
    if a > b:
        raise ValueError("integration bounds must satisfy a <= b")
    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    stack = [(a, b, fa, fm, fb, _simpson(fa, fm, fb, b - a), spec.abs_tol)]
    total = 0.0
    splits = 0
    while stack:
        x0, x1, f0, f1, f2, whole, tol = stack.pop()
        xm = 0.5 * (x0 + x1)
        xl, xr = 0.5 * (x0 + xm), 0.5 * (xm + x1)
        fl, fr = f(xl), f(xr)
        left = _simpson(f0, fl, f1, xm - x0)
        right = _simpson(f1, fr, f2, x1 - xm)
        err = left + right - whole
        if abs(err) <= 15.0 * tol:
            total += left + right + err / 15.0
            continue
        splits += 1
        if splits > spec.max_subdivisions:
            raise QuadratureError(
                f"no convergence within {spec.max_subdivisions} subdivisions "
                f"on [{a!r}, {b!r}]"
            )
        half = 0.5 * tol
        stack.append((x0, xm, f0, fl, f1, left, half))
        stack.append((xm, x1, f1, fr, f2, right, half))
    return total


def bose_integrand(x: float) -> float:
    """x / (e^x - 1) with bose_integrand(0) = 1 (the x -> 0 limit)."""
    if x < 0:
        raise ValueError("bose_integrand defined for x >= 0")
    if x < 1e-4:
        # 1 - x/2 + x^2/12: keeps full precision where e^x - 1 cancels.
        return 1.0 - 0.5 * x + x * x / 12.0
    if x <= 700.0:
        return x / math.expm1(x)
    # e^x overflows a double past ~709; the value itself is ~x e^{-x}.
    return x * math.exp(-x)


def min_integer_above(bound: float) -> int:
    """Smallest integer n >= 1 with n > bound (strict)."""
    if math.isnan(bound):
        raise ValueError("bound is nan")
    if math.isinf(bound):
        raise OverflowError("bound is not finite; no integer exceeds it")
    if bound < 1.0:
        return 1
    return math.floor(bound) + 1
