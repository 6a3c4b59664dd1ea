"""Classical and Boolean joint cumulants on exact moment oracles, the bridge
between the two (with its N(pi) coefficient), uniform cumulant-bound
certificates, and the Gaussian Kolmogorov constants they induce."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, NamedTuple

from .stable_laws import GAUSSIAN
from .zone_control import ZoneOfControl, validate

E = math.e
MAX_CLASSICAL_ARITY = 9   # Bell(9) = 21147 partitions
MAX_BOOLEAN_ARITY = 12    # 2^11 interval splits

# Kolmogorov-distance constants on the cumulant route.  These come from a
# bespoke optimization (see refined_gaussian_constant), not from re-running
# the generic lambda search.
STANDARD_CONSTANT = 76.36       # using sigma_tilde^2 <= 2 A^2
SMALL_SIGMA_CONSTANT = 52.52    # valid when sigma_tilde^2 <= A^2
TRADEOFF_CONSTANT = 27.55       # multiplies (A/sigma)^3 + A/sigma
TRUNCATION_CONSTANT = 78.0
TRUNCATION_CONSTANT_DELTA5 = 39.0


class ArityTooLarge(ValueError):
    """Requested cumulant order exceeds the exact-enumeration cap."""


class VariantPreconditionViolated(ValueError):
    """A bound variant was requested whose hypothesis does not hold."""


class DeltaTooSmall(ValueError):
    """The truncation bound needs delta > 4."""


class MomentOracle:
    """Joint moments E[prod_{i in idx} A_i]; symmetric in idx, E[empty] = 1.

    Wraps a function of a sorted index tuple.  Values may be Fractions (exact
    path) or floats; cumulant routines preserve exactness.
    """

    def __init__(self, fn: Callable[[tuple], object]):
        self._fn = fn
        self._cache: dict = {}

    def moment(self, indices: Iterable) -> object:
        key = tuple(sorted(indices))
        if not key:
            return 1
        if key not in self._cache:
            self._cache[key] = self._fn(key)
        return self._cache[key]

    @classmethod
    def from_atoms(cls, atoms: list[tuple]) -> "MomentOracle":
        """Oracle for a finite probability space: atoms are (prob, values) pairs."""
        total = sum(p for p, _ in atoms)
        if total != 1 and abs(float(total) - 1.0) > 1e-12:
            raise ValueError("atom probabilities must sum to 1")

        def fn(idx):
            acc = 0
            for p, vals in atoms:
                term = p
                for i in idx:
                    term *= vals[i]
                acc += term
            return acc

        return cls(fn)


def product_oracle(left: MomentOracle, n_left: int, right: MomentOracle) -> MomentOracle:
    """Oracle of two independent groups; indices below n_left address the left one."""

    def fn(idx):
        a = [i for i in idx if i < n_left]
        b = [i - n_left for i in idx if i >= n_left]
        return left.moment(a) * right.moment(b)

    return MomentOracle(fn)


def set_partitions(r: int):
    """All set partitions of range(r), enumerated by restricted-growth strings."""
    if r == 0:
        yield []
        return
    codes = [0] * r

    def rec(i, maxi):
        if i == r:
            blocks = [[] for _ in range(maxi + 1)]
            for pos, b in enumerate(codes):
                blocks[b].append(pos)
            yield blocks
            return
        for b in range(maxi + 2):
            codes[i] = b
            yield from rec(i + 1, max(maxi, b))

    yield from rec(1, 0)


def joint_cumulant(oracle: MomentOracle, variables: list) -> object:
    """kappa(A_{v_1}, ..., A_{v_r}) by Moebius inversion over set partitions."""
    r = len(variables)
    if r > MAX_CLASSICAL_ARITY:
        raise ArityTooLarge(f"classical cumulants capped at arity {MAX_CLASSICAL_ARITY}")
    total = 0
    for blocks in set_partitions(r):
        term = math.factorial(len(blocks) - 1)
        if (len(blocks) - 1) % 2:
            term = -term
        for block in blocks:
            term = term * oracle.moment([variables[i] for i in block])
        total += term
    return total


def boolean_cumulant(oracle: MomentOracle, ordered_variables: list) -> object:
    """Boolean joint cumulant: alternating sum over interval decompositions.

    Not symmetric in its arguments; the order of the list matters.
    """
    r = len(ordered_variables)
    if r > MAX_BOOLEAN_ARITY:
        raise ArityTooLarge(f"Boolean cumulants capped at arity {MAX_BOOLEAN_ARITY}")
    total = 0
    for l in range(r):
        for cuts in combinations(range(1, r), l):
            bounds = [0, *cuts, r]
            term = 1 if l % 2 == 0 else -1
            for a, b in zip(bounds[:-1], bounds[1:]):
                term = term * oracle.moment(ordered_variables[a:b])
            total += term
    return total


def npi(partition: Iterable[Iterable[int]]) -> int:
    """Combinatorial coefficient N(pi) of the Boolean-to-classical bridge.

    For each block C not containing the global minimum, count the other blocks
    C' whose span [min C', max C'] contains min C; N(pi) is the product.  Zero
    exactly for disconnected partitions.
    """
    blocks = [sorted(b) for b in partition]
    if not blocks:
        return 1
    root = min(b[0] for b in blocks)
    out = 1
    for b in blocks:
        if b[0] == root:
            continue
        n_c = sum(1 for other in blocks if other is not b and other[0] <= b[0] <= other[-1])
        out *= n_c
        if out == 0:
            return 0
    return out


def boolean_to_classical(r: int, boolean_eval: Callable[[tuple], object]) -> object:
    """kappa^(r) from Boolean cumulants of increasing-order sub-sequences:
    sum over partitions of (-1)^(|pi|-1) N(pi) prod_C B^(|C|)(positions in C)."""
    if r > MAX_CLASSICAL_ARITY:
        raise ArityTooLarge(f"bridge capped at arity {MAX_CLASSICAL_ARITY}")
    total = 0
    for blocks in set_partitions(r):
        coeff = npi(blocks)
        if coeff == 0:
            continue
        if (len(blocks) - 1) % 2:
            coeff = -coeff
        term = coeff
        for block in blocks:
            term = term * boolean_eval(tuple(sorted(block)))
        total += term
    return total


@dataclass(frozen=True)
class CumulantBoundParams:
    """Parameters (D, N, A) of a uniform cumulant bound, plus Var(S_n)."""

    D: float
    N: float
    A: float
    var_s: float

    def __post_init__(self):
        if min(self.D, self.N, self.A, self.var_s) <= 0.0:
            raise ValueError("D, N, A, var_s must all be positive")
        if self.sigma_tilde_sq > 2.0 * self.A ** 2 * (1.0 + 1e-12):
            raise ValueError(
                f"sigma_tilde^2 = {self.sigma_tilde_sq} exceeds 2 A^2; "
                "inconsistent with the order-2 cumulant bound"
            )

    @property
    def sigma_tilde_sq(self) -> float:
        return self.var_s / (self.N * self.D)


def uniform_bound_value(p: CumulantBoundParams, r: int) -> float:
    """N r^(r-2) (2D)^(r-1) A^r."""
    rr = r ** (r - 2) if r >= 2 else 1.0
    return p.N * rr * (2.0 * p.D) ** (r - 1) * p.A ** r


class BoundCheckRow(NamedTuple):
    r: int
    kappa: float
    bound: float
    ok: bool


def check_uniform_bounds(kappas: dict, p: CumulantBoundParams, r_max: int,
                         rel_slack: float = 1e-9) -> list[BoundCheckRow]:
    """Per-order check |kappa^(r)| <= N r^(r-2) (2D)^(r-1) A^r for r = 2..r_max."""
    if r_max < 2:
        raise ValueError("r_max must be at least 2")
    rows = []
    for r in range(2, r_max + 1):
        kappa = float(kappas.get(r, 0.0))
        bound = uniform_bound_value(p, r)
        rows.append(BoundCheckRow(r, kappa, bound, abs(kappa) <= bound * (1.0 + rel_slack)))
    return rows


class CumulantZone(NamedTuple):
    scale: float      # divide S_n by this to get X_n
    t_n: float
    zone: ZoneOfControl


def zone_from_cumulants(p: CumulantBoundParams) -> CumulantZone:
    """Zone of control of index (3, 3) for X_n = S_n / (N^(1/3) D^(2/3)),
    with t_n = sigma_tilde^2 (N/D)^(1/3) and the standard Gaussian target."""
    k2 = (2.0 + E) * p.A ** 3
    zone = ZoneOfControl(
        law=GAUSSIAN,
        gamma=1.0,
        K=1.0 / (4.0 * k2),
        v=3.0,
        w=3.0,
        K1=k2,
        K2=k2,
    )
    problems = validate(zone)
    if problems:  # pragma: no cover - the construction always satisfies (Z2)
        raise AssertionError("; ".join(problems))
    scale = p.N ** (1.0 / 3.0) * p.D ** (2.0 / 3.0)
    t_n = p.sigma_tilde_sq * (p.N / p.D) ** (1.0 / 3.0)
    return CumulantZone(scale, t_n, zone)


def cumulant_kol_bound(p: CumulantBoundParams, variant: str = "standard") -> float:
    """Kolmogorov bound for S_n / sqrt(Var S_n) against the standard Gaussian.

    variant: "standard" (76.36 A^3/sigma^3), "sigma_le_A" (52.52, needs
    sigma_tilde <= A) or "tradeoff" (27.55 ((A/sigma)^3 + A/sigma)).
    """
    sigma = math.sqrt(p.sigma_tilde_sq)
    ratio = math.sqrt(p.D / p.N)
    if variant == "standard":
        return STANDARD_CONSTANT * (p.A / sigma) ** 3 * ratio
    if variant == "sigma_le_A":
        if p.sigma_tilde_sq > p.A ** 2 * (1.0 + 1e-12):
            raise VariantPreconditionViolated(
                f"sigma_tilde^2 = {p.sigma_tilde_sq} exceeds A^2 = {p.A ** 2}"
            )
        return SMALL_SIGMA_CONSTANT * (p.A / sigma) ** 3 * ratio
    if variant == "tradeoff":
        return TRADEOFF_CONSTANT * ((p.A / sigma) ** 3 + p.A / sigma) * ratio
    raise ValueError(f"unknown variant {variant!r}")


def truncation_exponent(delta: float) -> float:
    """Exponent 3(delta+2)/(2(delta+5)) of the unbounded-variable bound."""
    return 3.0 * (delta + 2.0) / (2.0 * (delta + 5.0))


def truncation_bound(delta: float, A: float, N: float, D: float, var_s: float) -> float:
    """Kolmogorov bound for sums of unbounded variables with moments of order
    2 + delta: constant * (A^2 / V_n)^(3(delta+2)/(2(delta+5))), delta > 4."""
    if delta <= 4.0:
        raise DeltaTooSmall("the certified branch needs delta > 4")
    v_n = (var_s / (N * D)) * (N / D) ** (1.0 / 3.0) * N ** (-2.0 / (2.0 + delta))
    if v_n <= 0.0:
        raise ValueError("V_n must be positive")
    const = TRUNCATION_CONSTANT_DELTA5 if delta == 5.0 else TRUNCATION_CONSTANT
    return const * (A ** 2 / v_n) ** truncation_exponent(delta)


def janson_diagnostic(p: CumulantBoundParams, epsilon: float) -> float:
    """sigma_tilde^2 (N/D)^epsilon; divergence along a sequence certifies the CLT."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    return p.sigma_tilde_sq * (p.N / p.D) ** epsilon


def refined_gaussian_constant(rho: float = 6.79, lam: float = 0.185,
                              sigma_le_A: bool = False) -> float:
    """Cross-check of the hard-coded cumulant-route constants.

    With K = 1/((4e+rho) A^3) the residue term of the Kolmogorov estimate
    collapses to 2/(rho (1-4/rho)^(3/2)), and the distance is bounded by this
    constant times A^3/sigma^3 sqrt(D/N).  (rho, lam) = (6.79, 0.185) gives
    76.36; under sigma_tilde <= A the prefactor 4e+rho improves to 2e+rho.
    """
    if rho <= 4.0 or lam <= 0.0:
        raise ValueError("need rho > 4 and lam > 0")
    residue = 2.0 / (rho * (1.0 - 4.0 / rho) ** 1.5)
    kernel = (4.0 * (1.0 + 1.0 / lam) ** (1.0 / 3.0) + 3.0 * 3.0 ** (1.0 / 3.0)) \
        / math.pi ** (1.0 / 3.0)
    prefactor = (2.0 * E if sigma_le_A else 4.0 * E) + rho
    return (1.0 + lam) / math.sqrt(2.0 * math.pi) * (residue + kernel) * prefactor
