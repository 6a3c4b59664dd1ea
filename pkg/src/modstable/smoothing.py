"""The smoothing kernel rho, the mollified Heaviside family f_{a,eps}, and the
conversion from test-function estimates to Kolmogorov-distance bounds."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .stable_laws import NonConvergence

RHO_PEAK = 3.0 / (8.0 * math.pi)
CBRT3 = 3.0 ** (1.0 / 3.0)
CBRT_PI = math.pi ** (1.0 / 3.0)


def rho(x):
    """Kernel (3/8pi) sinc^4(x/4); nonnegative, integrates to 1, rho_hat supported on [-1,1]."""
    return RHO_PEAK * np.sinc(np.asarray(x, dtype=float) / (4.0 * math.pi)) ** 4


def rho_tail_bound(k: float) -> float:
    """min(3/8pi, 96/(pi k^4)), a pointwise envelope of rho."""
    if k == 0.0:
        return RHO_PEAK
    return min(RHO_PEAK, 96.0 / (math.pi * k ** 4))


def f1(y: float, tol: float = 1e-10) -> float:
    """f1(y) = int_y^inf rho(u) du.

    For y >= 0 this is 1/2 minus the mass of [0, y]; the symmetry
    f1(-y) = 1 - f1(y) handles the negative axis, and the quartic envelope
    closes the far tail.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if y < 0.0:
        return 1.0 - f1(-y, tol)
    tail = 32.0 / (math.pi * y ** 3) if y > 0.0 else math.inf
    if tail <= tol:
        return 0.5 * tail  # midpoint of [0, tail]
    val, err = integrate.quad(rho, 0.0, y, epsabs=tol / 2.0, epsrel=1e-13,
                              limit=max(60, int(8 * y)))
    if err > tol:
        raise NonConvergence(f"f1 quadrature error {err:.3g} exceeds tol")
    return 0.5 - val


def f_smooth(a: float, eps: float, x: float, tol: float = 1e-10) -> float:
    """Mollified Heaviside f_{a,eps}(x) = f1((x - a) / eps), decreasing from 1 to 0."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    return f1((x - a) / eps, tol)


def tao_bound(B: float, eps: float, m: float, lam: float) -> float:
    """Kolmogorov bound (1+lam)(B + m/pi^(1/3) (4(1+1/lam)^(1/3) + 3*3^(1/3))) eps.

    B is the uniform test-function estimate divided by eps, m a bound on the
    reference density.  At lam=1/2 this is below the handy (3/2)(B + 7m) eps.
    """
    if min(B, eps, m, lam) < 0.0 or eps <= 0.0 or lam <= 0.0 or m <= 0.0:
        raise ValueError("eps, m, lam must be positive and B nonnegative")
    kernel = 4.0 * (1.0 + 1.0 / lam) ** (1.0 / 3.0) + 3.0 * CBRT3
    return (1.0 + lam) * (B + m / CBRT_PI * kernel) * eps


def rho_hat(xi: float, tol: float = 1e-9, radius: float | None = None) -> float:
    """Fourier transform of rho at xi, numerically; exactly supported on [-1, 1].

    rho is even, so rho_hat(xi) = 2 int_0^inf rho(x) cos(xi x) dx.  The
    quartic envelope controls the truncated tail: its mass beyond Y is at
    most 32/(pi Y^3), and sin^4 averages 3/8 over a period, so at xi = 0 the
    tail is near 12/(pi Y^3) with uncertainty 20/(pi Y^3).
    """
    if xi == 0.0:
        radius = radius or 8000.0
        # panel-per-hump integration certifies far tighter than one long quad
        val, err = 0.0, 0.0
        edges = np.arange(0.0, radius + 4.0 * math.pi, 4.0 * math.pi)
        for a, b in zip(edges[:-1], edges[1:]):
            v, e = integrate.quad(rho, a, min(b, radius), epsabs=1e-14, epsrel=1e-13)
            val += v
            err += e
        tail_unc = 40.0 / (math.pi * radius ** 3)
        if 2.0 * err + tail_unc > tol:
            raise NonConvergence(f"rho_hat quadrature error {2 * err + tail_unc:.3g} exceeds tol")
        return 2.0 * val + 24.0 / (math.pi * radius ** 3)
    radius = radius or 4500.0
    tail = 64.0 / (math.pi * radius ** 3)
    val, err = integrate.quad(rho, 0.0, radius, weight="cos", wvar=abs(xi),
                              epsabs=tol / 4.0, epsrel=1e-13, limit=4000)
    if 2.0 * err + tail > tol:
        raise NonConvergence(f"rho_hat quadrature error {2 * err + tail:.3g} exceeds tol")
    return 2.0 * val


def f1_halfline_integral(k: float, tol: float = 1e-4) -> float:
    """int_0^inf f1(u - k) du; bounded by k + 3 (3/pi)^(1/3)."""
    hi = k + 1000.0
    val, err = integrate.quad(lambda u: f1(u - k, tol / 100.0), 0.0, hi,
                              epsabs=tol / 4.0, epsrel=1e-10, limit=400)
    tail = 16.0 / (math.pi * (hi - k) ** 2)  # quartic envelope of rho, integrated twice
    if err + tail / 2.0 > tol:
        raise NonConvergence("f1 integral did not converge")
    return val + tail / 2.0
