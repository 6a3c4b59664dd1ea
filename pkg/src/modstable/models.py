"""Catalog of worked models: each bundles a target stable law, the growth
parameter t_n, a sampler and/or an exact characteristic function of the
renormalized variable Y_n, a declared zone of control where one exists, and
the quoted Kolmogorov-distance bound to verify against."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from .cumulants import E, CumulantBoundParams, zone_from_cumulants
from .stable_laws import CAUCHY, GAUSSIAN, StableLaw, levy_exponent, sample_with_rng
from .zone_control import ZoneOfControl, validate

ZETA3 = float(special.zeta(3.0))


class BadParams(ValueError):
    """Model parameters outside their documented domain."""


class Unsupported(RuntimeError):
    """The model does not provide the requested access (sampler or CF)."""


@dataclass
class Model:
    """A named experiment the verification harness can consume."""

    name: str
    law: StableLaw
    t_of: Callable[[float], float]
    bound_of: Callable[[float], float]
    zone: Optional[ZoneOfControl] = None
    sampler: Optional[Callable[[float, int, np.random.Generator], np.ndarray]] = None
    cf_of: Optional[Callable[[float, float], complex]] = None
    notes: str = ""
    threshold: float = 1.0  # smallest size at which bound_of is meaningful
    exact_stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sampler is None and self.cf_of is None:
            raise BadParams("a model needs a sampler or an exact CF")
        if self.zone is not None:
            problems = validate(self.zone)
            if problems:
                raise BadParams("invalid declared zone: " + "; ".join(problems))


def model_cf(m: Model, size, xi: float) -> complex:
    if m.cf_of is None:
        raise Unsupported(f"model {m.name} has no exact characteristic function")
    return m.cf_of(size, xi)


def model_sample(m: Model, size, count: int, seed) -> np.ndarray:
    if m.sampler is None:
        raise Unsupported(f"model {m.name} has no sampler")
    if count < 1:
        raise BadParams("count must be at least 1")
    return m.sampler(size, count, np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# i.i.d. sums (Gaussian target, the classical Berry-Esseen setting)

IID_CONSTANT = 4.815


def _iid_zone(sigma: float, b3: float) -> ZoneOfControl:
    ratio = b3 / sigma ** 3
    return ZoneOfControl(
        law=GAUSSIAN,
        gamma=1.0,
        K=1.5 / math.sqrt(E) / ratio,
        v=3.0,
        w=3.0,
        K1=7.0 * math.sqrt(E) * ratio / 24.0,
        K2=math.sqrt(E) * ratio / 6.0,
    )


def _make_iid_sum(step: str = "rademacher") -> Model:
    if step != "rademacher":
        raise BadParams(f"unsupported step distribution {step!r}")
    sigma, b3 = 1.0, 1.0

    def sampler(n, count, rng):
        n = int(n)
        steps = rng.integers(0, 2, size=(count, n), dtype=np.int8) * 2 - 1
        return steps.sum(axis=1, dtype=np.int64) / (sigma * math.sqrt(n))

    return Model(
        name="iid_sum",
        law=GAUSSIAN,
        t_of=lambda n: float(n) ** (1.0 / 3.0),
        bound_of=lambda n: IID_CONSTANT * (b3 / sigma ** 3) / math.sqrt(n),
        zone=_iid_zone(sigma, b3),
        sampler=sampler,
        notes="Rademacher steps; quoted constant 4.815 at lambda = 0.183",
        threshold=1.0,
        exact_stats={"mean": 0.0, "var": 1.0},
    )


# ---------------------------------------------------------------------------
# Zeros of a Gaussian analytic series: Z = sum_k Bernoulli(r^(2k))

ZEROS_CONSTANT = 166.0


def _zeros_params(h: float):
    r2 = h / (h + 4.0 * math.pi)
    mean = h / (4.0 * math.pi)
    var = h * (h + 4.0 * math.pi) / (8.0 * math.pi * (h + 2.0 * math.pi))
    return r2, mean, var


def _make_analytic_zeros() -> Model:
    k1 = 1.0 / (4.0 * math.pi)
    zone = ZoneOfControl(GAUSSIAN, gamma=1.0, K=math.pi, v=3.0, w=3.0, K1=k1, K2=k1)

    def t_of(h):
        return h ** (1.0 / 3.0) * (h + 4.0 * math.pi) / (4.0 * math.pi * (2.0 * h + 4.0 * math.pi))

    def sampler(h, count, rng):
        r2, mean, var = _zeros_params(float(h))
        k_max = max(4, int(math.ceil(math.log(1e-16) / math.log(r2))))
        probs = r2 ** np.arange(1, k_max + 1)
        z = (rng.random((count, k_max)) < probs).sum(axis=1)
        return (z - mean) / math.sqrt(var)

    def cf_of(h, xi):
        r2, mean, var = _zeros_params(float(h))
        u = xi / math.sqrt(var)
        k_max = max(4, int(math.ceil(math.log(1e-16) / math.log(r2))))
        probs = r2 ** np.arange(1, k_max + 1)
        factors = 1.0 + probs * (cmath.exp(1j * u) - 1.0)
        return complex(np.prod(factors) * cmath.exp(-1j * u * mean))

    return Model(
        name="analytic_zeros",
        law=GAUSSIAN,
        t_of=t_of,
        bound_of=lambda h: ZEROS_CONSTANT / math.sqrt(h),
        zone=zone,
        sampler=sampler,
        cf_of=cf_of,
        notes="Bernoulli(r^(2k)) series, r^2 = h/(h+4pi); quoted constant 166",
        threshold=4.0 * math.pi,
    )


def zeros_exact_stats(h: float) -> tuple[float, float]:
    """Exact mean h/(4 pi) and variance h(h+4pi)/(8pi(h+2pi)) of the series."""
    _, mean, var = _zeros_params(h)
    return mean, var


# ---------------------------------------------------------------------------
# Winding number of a planar Brownian motion (Cauchy target, CF only)


def _bessel_i_series(nu: float, z: float) -> float:
    """I_nu(z) by its power series; certified for the tiny z used here.

    Terms are (z/2)^(nu+2k) / (k! Gamma(nu+k+1)), summed until a term falls
    below 1e-18 of the partial sum.
    """
    if z <= 0.0:
        raise ValueError("z must be positive")
    log_half_z = math.log(z / 2.0)
    total = 0.0
    for k in range(200):
        log_term = (nu + 2.0 * k) * log_half_z - math.lgamma(k + 1.0) - math.lgamma(nu + k + 1.0)
        term = math.exp(log_term)
        total += term
        if term < 1e-18 * abs(total):
            break
    return total


def winding_raw_cf(t: float, xi: float) -> float:
    """Spitzer's formula: E[exp(i xi phi_t)] for the winding angle phi_t.

    Real and even in xi (phi_t is symmetric).
    """
    if xi == 0.0:
        return 1.0
    z = 1.0 / (4.0 * t)
    nu = (abs(xi) - 1.0) / 2.0
    pref = math.sqrt(math.pi / (8.0 * t)) * math.exp(-z)
    return pref * (_bessel_i_series(nu, z) + _bessel_i_series(nu + 1.0, z))


def _make_winding() -> Model:
    # index (1, 1) forces gamma <= 0; the zone radius can be taken as large as
    # wanted since K2 = 0, here a fixed finite stand-in.
    zone = ZoneOfControl(CAUCHY, gamma=0.0, K=64.0, v=1.0, w=1.0, K1=1.0, K2=0.0)

    def cf_of(t, xi):
        return complex(winding_raw_cf(float(t), 2.0 * xi / math.log(8.0 * t)))

    return Model(
        name="winding",
        law=CAUCHY,
        t_of=lambda t: math.log(8.0 * t) / 2.0,
        bound_of=lambda t: 4.0 / math.log(8.0 * t),
        zone=zone,
        cf_of=cf_of,
        notes="Y_t = 2 phi_t / log 8t; bound 4/log 8t for t large enough",
        threshold=10.0,
    )


# ---------------------------------------------------------------------------
# Compound Poisson approximations of a stable law


def _make_compound_poisson(alpha: float, beta: float = 0.0, c: float = 1.0) -> Model:
    try:
        law = StableLaw(c=c, alpha=alpha, beta=beta)
    except ValueError as exc:
        raise BadParams(str(exc)) from exc

    def cf_of(n, xi):
        return cmath.exp(n * (cmath.exp(levy_exponent(law, xi) / n) - 1.0))

    def sampler(n, count, rng):
        n = int(n)
        atom_law = StableLaw(c=c / n ** (1.0 / alpha), alpha=alpha, beta=beta)
        counts = rng.poisson(n, size=count)
        total = int(counts.sum())
        if total == 0:
            return np.zeros(count)
        atoms = sample_with_rng(atom_law, rng, total)
        idx = np.repeat(np.arange(count), counts)
        return np.bincount(idx, weights=atoms, minlength=count)

    if alpha > 1.0:
        rate = lambda n: n ** (-1.0 / alpha)
        note = "rate n^(-1/alpha)"
    elif alpha < 1.0 or beta == 0.0:
        rate = lambda n: 1.0 / n
        note = "rate n^(-1)"
    else:
        rate = lambda n: math.log(n) ** 2 / n
        note = "rate (log n)^2 / n"

    def t_of(n):
        if alpha != 1.0:
            return math.sqrt(n)
        if beta == 0.0:
            return math.sqrt(n)
        return _solve_t_log_t(math.sqrt(n))

    return Model(
        name="compound_poisson",
        law=law,
        t_of=t_of,
        bound_of=rate,
        sampler=sampler,
        cf_of=cf_of,
        notes=f"rate-only verification; {note}; the quoted constants are not explicit",
        threshold=8.0,
    )


def _solve_t_log_t(target: float) -> float:
    """t with t log t = target, by fixed-point iteration."""
    t = max(target, 2.0)
    for _ in range(200):
        nxt = target / math.log(t)
        if abs(nxt - t) <= 1e-14 * t:
            return nxt
        t = 0.5 * (t + nxt)
    return t


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck marginals converging to a stable law (CF only, rate-only)


def _make_ou_process(alpha: float, beta: float = 0.0, c: float = 1.0,
                     x0: float = 1.0, speed: float = 1.0) -> Model:
    if alpha == 1.0:
        raise BadParams("the exact OU characteristic function is implemented for alpha != 1")
    if speed <= 0.0:
        raise BadParams("speed must be positive")
    try:
        law = StableLaw(c=c, alpha=alpha, beta=beta)
    except ValueError as exc:
        raise BadParams(str(exc)) from exc

    def cf_of(t, xi):
        damp = math.exp(-speed * t)
        eta_small = levy_exponent(law, xi * damp)
        return cmath.exp(math.exp(alpha * speed * t) * eta_small + 1j * xi * damp * x0 - eta_small)

    if alpha > 1.0 and x0 != 0.0:
        rate = lambda t: math.exp(-speed * t)
        note = "rate exp(-vt)"
    else:
        rate = lambda t: math.exp(-alpha * speed * t)
        note = "rate exp(-alpha vt)"

    return Model(
        name="ou_process",
        law=law,
        t_of=lambda t: math.exp(alpha * speed * t),
        bound_of=rate,
        cf_of=cf_of,
        notes=f"rate-only verification ({note}); residue constants are not explicit",
        threshold=1.0,
    )


# ---------------------------------------------------------------------------
# Real part of the log characteristic polynomial of a Haar unitary matrix

CUE_CONSTANT = 18.0


def cue_variance(n: int) -> float:
    """Var of the real log-determinant: half the sum of trigamma(1..n)."""
    ks = np.arange(1, int(n) + 1, dtype=float)
    return 0.5 * float(special.polygamma(1, ks).sum())


def cue_raw_log_cf(n: int, u: float) -> complex:
    """log E[exp(i u X_n)] = sum_k log Gamma(k) + log Gamma(k+iu) - 2 log Gamma(k+iu/2)."""
    ks = np.arange(1, int(n) + 1, dtype=float)
    with np.errstate(all="ignore"):
        terms = (
            special.loggamma(ks)
            + special.loggamma(ks + 1j * u)
            - 2.0 * special.loggamma(ks + 0.5j * u)
        )
    return complex(terms.sum())


def _make_cue_logdet() -> Model:
    k1 = 3.0 * ZETA3 / math.pi ** 2
    zone = ZoneOfControl(GAUSSIAN, gamma=1.0, K=1.0 / (4.0 * k1), v=3.0, w=3.0, K1=k1, K2=k1)

    def cf_of(n, xi):
        u = xi / math.sqrt(cue_variance(int(n)))
        return cmath.exp(cue_raw_log_cf(int(n), u))

    return Model(
        name="cue_logdet",
        law=GAUSSIAN,
        t_of=lambda n: cue_variance(int(n)),
        bound_of=lambda n: CUE_CONSTANT / math.log(n) ** 1.5,
        zone=zone,
        cf_of=cf_of,
        notes="Gamma-product CF, trigamma variance; quoted constant 18",
        threshold=2.0,
    )


# ---------------------------------------------------------------------------
# Correlated random walk: A_i = 2 prod_{k=i+1}^{i+D} U_k - 1 on Z/NZ


def walk_exact_stats(N: int, D: int, p: float) -> tuple[float, float]:
    """Exact mean N(2p-1) and variance 4Np((1+q-2p)/(1-q) - (2D-1)p), q = p^(1/D)."""
    if not 0.0 < p < 1.0:
        raise BadParams("p must lie in (0, 1)")
    if D < 1 or N < 2 * D + 1:
        raise BadParams("need D >= 1 and N >= 2D + 1")
    mean = N * (2.0 * p - 1.0)
    q = p ** (1.0 / D)
    var = 4.0 * N * p * ((1.0 + q - 2.0 * p) / (1.0 - q) - (2.0 * D - 1.0) * p)
    return mean, var


def _make_correlated_walk(D: int, p: float) -> Model:
    D = int(D)

    def sampler(N, count, rng, chunk: int = 20000):
        N = int(N)
        mean, var = walk_exact_stats(N, D, p)
        q = p ** (1.0 / D)
        out = np.empty(count)
        done = 0
        while done < count:
            b = min(chunk, count - done)
            u = rng.random((b, N)) < q
            prod = np.roll(u, -1, axis=1).copy()
            for d in range(2, D + 1):
                prod &= np.roll(u, -d, axis=1)
            out[done:done + b] = (2.0 * prod.sum(axis=1) - N - mean) / math.sqrt(var)
            done += b
        return out

    def bound_of(N):
        body = p * ((1.0 - p) / (-math.log(p)) - p)
        return 6.0 / body ** 1.5 * math.sqrt(D / N)

    def zone_for(N):
        N = int(N)
        _, var = walk_exact_stats(N, D, p)
        return zone_from_cumulants(CumulantBoundParams(D=2.0 * D, N=float(N), A=1.0, var_s=var))

    model = Model(
        name="correlated_walk",
        law=GAUSSIAN,
        t_of=lambda N: zone_for(N).t_n,
        bound_of=bound_of,
        zone=zone_from_cumulants(
            CumulantBoundParams(D=2.0 * D, N=float(8 * D + 1),
                                A=1.0, var_s=walk_exact_stats(8 * D + 1, D, p)[1])
        ).zone,
        sampler=sampler,
        notes="window products over a cyclic Bernoulli field; dependency-graph route",
        threshold=float(2 * D + 1),
    )
    model.exact_stats = {"stats_of": lambda N: walk_exact_stats(int(N), D, p)}
    return model


# ---------------------------------------------------------------------------
# Triangle counts (as injections) in an Erdos-Renyi graph


def falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def er_exact_stats(n: int, p: float) -> tuple[float, float]:
    """Exact mean n(n-1)(n-2) p^3 and variance
    18 n^(fall 4) p^5 (1-p) + 6 n^(fall 3) p^3 (1 - p^3) of the injection count."""
    if not 0.0 < p < 1.0:
        raise BadParams("p must lie in (0, 1)")
    if n < 4:
        raise BadParams("need n >= 4")
    mean = falling(n, 3) * p ** 3
    var = 18.0 * falling(n, 4) * p ** 5 * (1.0 - p) + 6.0 * falling(n, 3) * p ** 3 * (1.0 - p ** 3)
    return mean, var


def _make_er_subgraph(p: float) -> Model:
    def sampler(n, count, rng, chunk: int = 2000):
        n = int(n)
        mean, var = er_exact_stats(n, p)
        iu = np.triu_indices(n, k=1)
        out = np.empty(count)
        done = 0
        while done < count:
            b = min(chunk, count - done)
            a = np.zeros((b, n, n))
            a[:, iu[0], iu[1]] = rng.random((b, iu[0].size)) < p
            a += a.transpose(0, 2, 1)
            walks = ((a @ a) * a).sum(axis=(1, 2))  # closed 3-walks = injections
            out[done:done + b] = (walks - mean) / math.sqrt(var)
            done += b
        return out

    def bound_of(n):
        return 234.0 / (p ** 9 * (1.0 / p - 1.0) ** 1.5) / n

    model = Model(
        name="er_subgraph",
        law=GAUSSIAN,
        t_of=lambda n: zone_from_cumulants(_er_params(int(n), p)).t_n,
        bound_of=bound_of,
        zone=zone_from_cumulants(_er_params(30, p)).zone,
        sampler=sampler,
        notes="triangle statistics only; counts are 6x the number of triangles",
        threshold=8.0,
    )
    model.exact_stats = {"stats_of": lambda n: er_exact_stats(int(n), p)}
    return model


def _er_params(n: int, p: float) -> CumulantBoundParams:
    _, var = er_exact_stats(n, p)
    return CumulantBoundParams(D=18.0 * (n - 2.0), N=float(falling(n, 3)), A=1.0, var_s=var)


# ---------------------------------------------------------------------------
# Ising magnetization under Glauber dynamics (property-based only)


def _make_ising(beta: float, h: float, d: int = 2, burn_in: int = 200, thin: int = 10) -> Model:
    if d != 2:
        raise BadParams("only the two-dimensional sampler is implemented")
    if beta <= 0.0:
        raise BadParams("beta must be positive")

    def sampler(L, count, rng):
        draws = ising_magnetizations(int(L), beta, h, count, rng, burn_in=burn_in, thin=thin)
        return (draws - draws.mean()) / draws.std()

    return Model(
        name="ising",
        law=GAUSSIAN,
        t_of=lambda L: float(L) ** d,
        bound_of=lambda L: 1.0 / float(L) ** (d / 2.0),
        sampler=sampler,
        notes="bound constant non-explicit; verification is the d_Kol sqrt(|box|) trend",
        threshold=4.0,
    )


def ising_magnetizations(L: int, beta: float, h: float, draws: int,
                         rng: np.random.Generator, burn_in: int = 200,
                         thin: int = 10) -> np.ndarray:
    """Thinned magnetization draws from heat-bath dynamics on {1..L}^2.

    Free boundary; sites are updated in a two-colour schedule (each half-sweep
    is a block of conditionally independent single-site heat-bath updates, so
    the Boltzmann measure is stationary for the sweep).
    """
    spins = np.where(rng.random((L, L)) < 0.5, -1, 1).astype(np.int8)
    colour = (np.add.outer(np.arange(L), np.arange(L)) % 2).astype(bool)
    masks = (colour, ~colour)
    out = np.empty(draws)

    def sweep():
        for mask in masks:
            fld = np.zeros((L, L))
            fld[1:, :] += spins[:-1, :]
            fld[:-1, :] += spins[1:, :]
            fld[:, 1:] += spins[:, :-1]
            fld[:, :-1] += spins[:, 1:]
            p_up = 1.0 / (1.0 + np.exp(-2.0 * (beta * fld + h)))
            flips = np.where(rng.random((L, L)) < p_up, 1, -1).astype(np.int8)
            spins[mask] = flips[mask]

    for _ in range(burn_in):
        sweep()
    for i in range(draws):
        for _ in range(thin):
            sweep()
        out[i] = spins.sum()
    return out


# ---------------------------------------------------------------------------

_BUILDERS = {
    "iid_sum": _make_iid_sum,
    "analytic_zeros": _make_analytic_zeros,
    "winding": _make_winding,
    "compound_poisson": _make_compound_poisson,
    "ou_process": _make_ou_process,
    "cue_logdet": _make_cue_logdet,
    "correlated_walk": _make_correlated_walk,
    "er_subgraph": _make_er_subgraph,
    "ising": _make_ising,
}

MODEL_KINDS = tuple(sorted(_BUILDERS))


def make_model(kind: str, params: dict | None = None) -> Model:
    """Build a model by kind name; unknown kinds and bad parameters raise BadParams."""
    if kind not in _BUILDERS:
        raise BadParams(f"unknown model kind {kind!r}; know {', '.join(MODEL_KINDS)}")
    try:
        return _BUILDERS[kind](**(params or {}))
    except TypeError as exc:
        raise BadParams(str(exc)) from exc
