"""Zone-of-control certificates and the explicit Kolmogorov-distance constants
they induce for a renormalized sequence converging to a stable law."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy import optimize, special

from .stable_laws import StableLaw

CBRT3 = 3.0 ** (1.0 / 3.0)
CBRT_PI = math.pi ** (1.0 / 3.0)
_REL_SLACK = 1e-12  # tolerance for inequalities meant to hold with equality


class InvalidZone(ValueError):
    """A zone certificate violates the compatibility inequalities."""


@dataclass(frozen=True)
class ZoneOfControl:
    """Certificate that |theta_n(xi) - 1| <= K1 |xi|^v exp(K2 |xi|^w) on
    [-K t_n^gamma, K t_n^gamma], for a given reference stable law."""

    law: StableLaw
    gamma: float
    K: float
    v: float
    w: float
    K1: float
    K2: float


def validate(zone: ZoneOfControl) -> list[str]:
    """List of violated compatibility inequalities; empty means the zone is valid."""
    law = zone.law
    out = []
    if not zone.v > 0.0:
        out.append(f"v must be positive, got {zone.v}")
    if not zone.w > 0.0:
        out.append(f"w must be positive, got {zone.w}")
    if not zone.K1 > 0.0:
        out.append(f"K1 must be positive, got {zone.K1}")
    if zone.K2 < 0.0:
        out.append(f"K2 must be nonnegative, got {zone.K2}")
    if not zone.K > 0.0:
        out.append(f"K must be positive, got {zone.K}")
    if law.alpha > zone.w * (1.0 + _REL_SLACK):
        out.append(f"need alpha <= w, got alpha={law.alpha} > w={zone.w}")
    if zone.gamma < -1.0 / law.alpha - _REL_SLACK:
        out.append(f"need gamma >= -1/alpha = {-1.0 / law.alpha}, got {zone.gamma}")
    if zone.w > law.alpha:
        gamma_max = 1.0 / (zone.w - law.alpha)
        if zone.gamma > gamma_max * (1.0 + _REL_SLACK):
            out.append(f"need gamma <= 1/(w-alpha) = {gamma_max}, got {zone.gamma}")
        if zone.K2 > 0.0:
            k_max = (law.c ** law.alpha / (2.0 * zone.K2)) ** (1.0 / (zone.w - law.alpha))
            if zone.K > k_max * (1.0 + _REL_SLACK):
                out.append(f"need K <= (c^alpha/2K2)^(1/(w-alpha)) = {k_max}, got {zone.K}")
    return out


def test_fn_constants(law: StableLaw, v: float) -> tuple[float, float]:
    """(C0, C1): the constants multiplying K1 ||f||_L1 / t_n^(v/alpha) in the
    test-function estimates, for smooth functions resp. smooth distributions."""
    if v <= 0.0:
        raise ValueError("v must be positive")
    a, c = law.alpha, law.c
    c0 = 2.0 ** ((v + 1.0) / a) * special.gamma((v + 1.0) / a) / (math.pi * a * c ** (v + 1.0))
    c1 = 2.0 ** (v / a) * special.gamma(v / a) / (math.pi * a * c ** v)
    return c0, c1


def kolmogorov_constant_at(law: StableLaw, v: float, K: float, K1: float, lam: float) -> float:
    """The Kolmogorov constant C(alpha, c, v, K, K1) evaluated at a fixed lambda."""
    if min(v, K, K1, lam) <= 0.0:
        raise ValueError("v, K, K1, lam must be positive")
    a, c = law.alpha, law.c
    residue = 2.0 ** (v / a) * special.gamma(v / a) * K1 / c ** (v - 1.0)
    kernel = special.gamma(1.0 / a) / (CBRT_PI * K) * (
        4.0 * (1.0 + 1.0 / lam) ** (1.0 / 3.0) + 3.0 * CBRT3
    )
    return (1.0 + lam) / (a * math.pi * c) * (residue + kernel)


class KolmogorovConstant(NamedTuple):
    C: float
    lambda_star: float


def kolmogorov_constant(law: StableLaw, v: float, K: float, K1: float) -> KolmogorovConstant:
    """Minimize the Kolmogorov constant over lambda > 0.

    The objective is smooth and unimodal in log lambda; a bounded scalar search
    on log lambda in [-8, 4] pins the minimum to ~1e-10 relative accuracy.
    """
    res = optimize.minimize_scalar(
        lambda u: kolmogorov_constant_at(law, v, K, K1, math.exp(u)),
        bounds=(-8.0, 4.0),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return KolmogorovConstant(float(res.fun), math.exp(float(res.x)))


def simplified_constant(law: StableLaw, v: float, K: float, K1: float) -> float:
    """C3 = 3/(2 pi alpha c) (2^(v/alpha) Gamma(v/alpha) K1 / c^(v-1) + 7 Gamma(1/alpha)/K).

    The lambda = 1/2 shortcut; always at least the optimized constant.
    """
    if min(v, K, K1) <= 0.0:
        raise ValueError("v, K, K1 must be positive")
    a, c = law.alpha, law.c
    residue = 2.0 ** (v / a) * special.gamma(v / a) * K1 / c ** (v - 1.0)
    return 3.0 / (2.0 * math.pi * a * c) * (residue + 7.0 * special.gamma(1.0 / a) / K)


def mod_gaussian_constant_at(K: float, K1: float, lam: float) -> float:
    """Specialized constant for the standard Gaussian target with v = w = 3:
    (1+lam)/sqrt(2 pi) (2^(3/2) K1 + (4(1+1/lam)^(1/3) + 3*3^(1/3))/(pi^(1/3) K))."""
    kernel = (4.0 * (1.0 + 1.0 / lam) ** (1.0 / 3.0) + 3.0 * CBRT3) / (CBRT_PI * K)
    return (1.0 + lam) / math.sqrt(2.0 * math.pi) * (2.0 ** 1.5 * K1 + kernel)


class KolmogorovBound(NamedTuple):
    value: float
    gamma: float
    clamped: bool


def kolmogorov_bound(zone: ZoneOfControl, t_n: float) -> KolmogorovBound:
    """Bound C(alpha,c,v,K,K1) / t_n^(1/alpha + gamma) from a zone certificate.

    gamma is clamped to (v-1)/alpha when necessary (always legitimate, since a
    zone stays valid when gamma decreases); the clamp is reported, not silent.
    """
    if t_n <= 0.0:
        raise ValueError("t_n must be positive")
    gamma_cap = (zone.v - 1.0) / zone.law.alpha
    gamma = min(zone.gamma, gamma_cap)
    clamped = gamma < zone.gamma
    checked = ZoneOfControl(zone.law, gamma, zone.K, zone.v, zone.w, zone.K1, zone.K2)
    problems = validate(checked)
    if problems:
        raise InvalidZone("; ".join(problems))
    c_opt, _ = kolmogorov_constant(zone.law, zone.v, zone.K, zone.K1)
    return KolmogorovBound(c_opt / t_n ** (1.0 / zone.law.alpha + gamma), gamma, clamped)
