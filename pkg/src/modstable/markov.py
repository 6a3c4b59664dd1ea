"""Finite ergodic Markov chains: stationary law, time reversal, multiplicative
reversiblization and its mixing coefficient theta, Fill-type total-variation
bounds, exact stationary joint moments and Boolean cumulants through matrix
products, cumulant/Kolmogorov bounds for additive functionals, asymptotic
variance and its positivity criteria."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cumulants import STANDARD_CONSTANT

LINEAR_FUNCTIONAL_CONSTANT = 77.0


class NotErgodic(ValueError):
    """The transition matrix is not irreducible and aperiodic."""


class TimesNotSorted(ValueError):
    """Boolean cumulants need nondecreasing time arguments."""


class ThetaOutOfRange(ValueError):
    """theta must lie in [0, 1)."""


@dataclass
class MarkovChainSpec:
    """Validated finite ergodic chain, with exact (rational) companions when
    the transition matrix was given exactly."""

    P: np.ndarray
    pi: np.ndarray
    theta: float
    P_exact: list | None = None
    pi_exact: list | None = None

    @property
    def n_states(self) -> int:
        return self.P.shape[0]


def _is_primitive(P: np.ndarray) -> bool:
    """P^k > 0 for some k <= (M-1)^2 + 1 (Wielandt)."""
    m = P.shape[0]
    reach = P > 0
    if reach.all():
        return True
    for _ in range((m - 1) ** 2 + 1):
        reach = (reach.astype(np.int64) @ (P > 0)) > 0
        if reach.all():
            return True
    return False


def make_chain(P) -> MarkovChainSpec:
    """Build and validate a chain spec from a row-stochastic matrix.

    Accepts nested lists of ints/Fractions (kept exactly, enabling exact
    stationary laws and moments) or anything ndarray-like.
    """
    exact = (
        isinstance(P, (list, tuple))
        and all(isinstance(x, (int, Fraction)) for row in P for x in row)
    )
    arr = np.array([[float(x) for x in row] for row in P], dtype=float)
    m = arr.shape[0]
    if arr.shape != (m, m):
        raise ValueError("P must be square")
    if (arr < 0).any():
        raise ValueError("P must be nonnegative")
    if np.abs(arr.sum(axis=1) - 1.0).max() > 1e-12:
        raise ValueError("rows of P must sum to 1")
    if not _is_primitive(arr):
        raise NotErgodic("P is not irreducible and aperiodic")

    p_exact = pi_exact = None
    if exact:
        p_exact = [[Fraction(x) for x in row] for row in P]
        if any(sum(row) != 1 for row in p_exact):
            raise ValueError("rows of an exact P must sum to 1 exactly")
        pi_exact = _stationary_exact(p_exact)
        pi = np.array([float(x) for x in pi_exact])
    else:
        pi = stationary(arr)
    return MarkovChainSpec(arr, pi, _theta_value(arr, pi), p_exact, pi_exact)


def stationary(P: np.ndarray) -> np.ndarray:
    """Stationary row vector: solve pi (P - I) = 0 with sum(pi) = 1."""
    P = np.asarray(P, dtype=float)
    m = P.shape[0]
    if not _is_primitive(P):
        raise NotErgodic("P is not irreducible and aperiodic")
    a = (P.T - np.eye(m)).copy()
    a[-1, :] = 1.0
    b = np.zeros(m)
    b[-1] = 1.0
    pi = np.linalg.solve(a, b)
    if pi.min() <= 0.0:
        raise NotErgodic("stationary vector is not strictly positive")
    return pi


def _stationary_exact(P: list[list[Fraction]]) -> list[Fraction]:
    m = len(P)
    a = [[P[j][i] - (1 if i == j else 0) for j in range(m)] for i in range(m)]
    a[-1] = [Fraction(1)] * m
    b = [Fraction(0)] * (m - 1) + [Fraction(1)]
    return _solve_exact(a, b)


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    m = len(a)
    a = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(m):
        pivot = next(r for r in range(col, m) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][m] for r in range(m)]


def time_reversal(P: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """P~(x, y) = pi(y) P(y, x) / pi(x); row-stochastic with the same stationary law."""
    P = np.asarray(P, dtype=float)
    pi = np.asarray(pi, dtype=float)
    if pi.min() <= 0.0:
        raise ValueError("pi must be strictly positive")
    return (P.T * pi[np.newaxis, :]) / pi[:, np.newaxis]


def reversiblization(P: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Multiplicative reversiblization M(P) = P P~."""
    return np.asarray(P, dtype=float) @ time_reversal(P, pi)


def _theta_value(P: np.ndarray, pi: np.ndarray) -> float:
    # M(P) is similar to S S^T with S = D^(1/2) P D^(-1/2), so a symmetric
    # eigensolver on S S^T is both robust and guaranteed real.
    root = np.sqrt(pi)
    s = (root[:, np.newaxis] * P) / root[np.newaxis, :]
    eig = np.linalg.eigvalsh(s @ s.T)
    if len(eig) == 1:
        return 0.0
    second = max(0.0, float(eig[-2]))
    return math.sqrt(min(second, 1.0))


def theta(P) -> float:
    """theta_P: square root of the second-largest eigenvalue of M(P); in [0, 1)."""
    P = np.asarray(P, dtype=float)
    pi = stationary(P)
    return _theta_value(P, pi)


def fill_check(spec: MarkovChainSpec, x: int, t: int):
    """Total-variation style inequalities sum_y |P^t(x,y) - pi(y)| <= theta^t/sqrt(pi(x))
    and the sqrt(M)-weighted variant.  Returns ((lhs1, rhs1), (lhs2, rhs2), ok)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    m = spec.n_states
    row = np.linalg.matrix_power(spec.P, t)[x]
    diff = np.abs(row - spec.pi)
    lhs1 = float(diff.sum())
    rhs1 = spec.theta ** t / math.sqrt(spec.pi[x])
    lhs2 = float((diff / np.sqrt(spec.pi)).sum())
    rhs2 = math.sqrt(m) * spec.theta ** t / math.sqrt(spec.pi[x])
    slack = 1e-10
    ok = lhs1 <= rhs1 + slack and lhs2 <= rhs2 + slack
    return (lhs1, rhs1), (lhs2, rhs2), ok


def _as_vectors(spec: MarkovChainSpec, f_list, count: int, exact: bool):
    """Normalize f_list to one vector per time; a single vector is broadcast."""
    first = f_list[0] if isinstance(f_list, (list, tuple)) and f_list else None
    if first is not None and not isinstance(first, (list, tuple, np.ndarray)):
        f_list = [f_list] * count
    if len(f_list) != count:
        raise ValueError("need one function per time")
    if exact:
        return [[Fraction(v) for v in f] for f in f_list]
    return [np.asarray(f, dtype=float) for f in f_list]


def _exact_ok(spec: MarkovChainSpec, f_list) -> bool:
    if spec.P_exact is None:
        return False
    flat = f_list if isinstance(f_list[0], (list, tuple)) else [f_list]
    return all(isinstance(v, (int, Fraction)) for f in flat for v in f)


def joint_moment(spec: MarkovChainSpec, f_list, times):
    """E[prod_i f_i(X_{t_i})] for the stationary chain; exact when P and f are."""
    times = list(times)
    exact = _exact_ok(spec, f_list)
    fs = _as_vectors(spec, f_list, len(times), exact)
    order = sorted(range(len(times)), key=lambda i: times[i])
    times = [times[i] for i in order]
    fs = [fs[i] for i in order]
    # merge coincident times by pointwise products
    merged_t, merged_f = [times[0]], [fs[0]]
    for t, f in zip(times[1:], fs[1:]):
        if t == merged_t[-1]:
            if exact:
                merged_f[-1] = [a * b for a, b in zip(merged_f[-1], f)]
            else:
                merged_f[-1] = merged_f[-1] * f
        else:
            merged_t.append(t)
            merged_f.append(f)
    if exact:
        row = [p * v for p, v in zip(spec.pi_exact, merged_f[0])]
        for prev_t, t, f in zip(merged_t[:-1], merged_t[1:], merged_f[1:]):
            row = _row_times_power_exact(spec.P_exact, row, t - prev_t)
            row = [a * b for a, b in zip(row, f)]
        return sum(row)
    row = spec.pi * merged_f[0]
    for prev_t, t, f in zip(merged_t[:-1], merged_t[1:], merged_f[1:]):
        row = row @ np.linalg.matrix_power(spec.P, t - prev_t)
        row = row * f
    return float(row.sum())


def _row_times_power_exact(P, row, power: int):
    for _ in range(power):
        row = [sum(row[i] * P[i][j] for i in range(len(row))) for j in range(len(row))]
    return row


def boolean_cumulant_matrix(spec: MarkovChainSpec, f_list, times):
    """Boolean cumulant B^(r)(f_1(X_{t_1}), ..., f_r(X_{t_r})) via the matrix
    expression pi D_{f_1} (P^{d_1} - 1 pi) ... (P^{d_{r-1}} - 1 pi) D_{f_r} 1."""
    times = list(times)
    if any(b < a for a, b in zip(times, times[1:])):
        raise TimesNotSorted("times must be nondecreasing")
    exact = _exact_ok(spec, f_list)
    fs = _as_vectors(spec, f_list, len(times), exact)
    if exact:
        m = spec.n_states
        row = [p * v for p, v in zip(spec.pi_exact, fs[0])]
        for prev_t, t, f in zip(times[:-1], times[1:], fs[1:]):
            pushed = _row_times_power_exact(spec.P_exact, row, t - prev_t)
            mass = sum(row)
            row = [(pushed[j] - mass * spec.pi_exact[j]) * f[j] for j in range(m)]
        return sum(row)
    row = spec.pi * fs[0]
    for prev_t, t, f in zip(times[:-1], times[1:], fs[1:]):
        q = np.linalg.matrix_power(spec.P, t - prev_t) - np.outer(np.ones(spec.n_states), spec.pi)
        row = (row @ q) * f
    return float(row.sum())


def markov_cumulant_bound(n: int, r: int, theta_p: float, K: float, M: int) -> float:
    """n r^(r-2) (2 (1+theta)/(1-theta))^(r-1) (K sqrt(M))^r."""
    if not 0.0 <= theta_p < 1.0:
        raise ThetaOutOfRange(f"theta must lie in [0, 1), got {theta_p}")
    rr = float(r) ** (r - 2) if r >= 2 else 1.0
    ratio = (1.0 + theta_p) / (1.0 - theta_p)
    return n * rr * (2.0 * ratio) ** (r - 1) * (K * math.sqrt(M)) ** r


def markov_kol_bound(n: int, var_s: float, K: float, M: int, theta_p: float,
                     indicator_functions: bool = False) -> float:
    """76.36 (K sqrt(M) / sqrt(Var(S_n)/n))^3 ((1+theta)/(1-theta))^2 / sqrt(n).

    With indicator_functions=True the state-space factor M^(3/2) is dropped
    (valid when every f_t is an indicator of a single state).
    """
    if var_s <= 0.0:
        raise ValueError("var_s must be positive")
    if not 0.0 <= theta_p < 1.0:
        raise ThetaOutOfRange(f"theta must lie in [0, 1), got {theta_p}")
    size = 1.0 if indicator_functions else math.sqrt(M)
    ratio = (1.0 + theta_p) / (1.0 - theta_p)
    return STANDARD_CONSTANT * (K * size / math.sqrt(var_s / n)) ** 3 * ratio ** 2 / math.sqrt(n)


def markov_kol_bound_linear(n: int, sigma_sq: float, K: float, M: int, theta_p: float) -> float:
    """77 (K sqrt(M) / Sigma(f))^3 ((1+theta)/(1-theta))^2 / sqrt(n), the
    asymptotic-variance form for a time-independent f."""
    if sigma_sq <= 0.0:
        raise ValueError("sigma_sq must be positive")
    ratio = (1.0 + theta_p) / (1.0 - theta_p)
    return LINEAR_FUNCTIONAL_CONSTANT * (K * math.sqrt(M) / math.sqrt(sigma_sq)) ** 3 \
        * ratio ** 2 / math.sqrt(n)


def markov_kol_bound_reversible(n: int, pi_g_sq: float, g_inf: float, M: int,
                                theta_p: float) -> float:
    """Reversible-chain form 77 (||g||_inf sqrt(M)/sqrt(pi(g^2)))^3
    ((1+theta)/(1-theta))^(7/2) / sqrt(n)."""
    if pi_g_sq <= 0.0:
        raise ValueError("pi(g^2) must be positive")
    ratio = (1.0 + theta_p) / (1.0 - theta_p)
    return LINEAR_FUNCTIONAL_CONSTANT * (g_inf * math.sqrt(M) / math.sqrt(pi_g_sq)) ** 3 \
        * ratio ** 3.5 / math.sqrt(n)


def asymptotic_variance(spec: MarkovChainSpec, f):
    """Sigma^2(f) = pi(g^2) + 2 pi(g . h) with (I - P) h = P g on the mean-zero
    subspace, g = f - pi(f); exact on the rational path."""
    if spec.P_exact is not None and all(isinstance(v, (int, Fraction)) for v in f):
        m = spec.n_states
        fx = [Fraction(v) for v in f]
        mean = sum(p * v for p, v in zip(spec.pi_exact, fx))
        g = [v - mean for v in fx]
        pg = [sum(spec.P_exact[i][j] * g[j] for j in range(m)) for i in range(m)]
        a = [[(1 if i == j else 0) - spec.P_exact[i][j] for j in range(m)] for i in range(m)]
        # pin the additive constant with the normalization pi(h) = 0; any
        # particular solution gives the same Sigma^2 since pi(g) = 0
        a[-1] = list(spec.pi_exact)
        b = pg[:-1] + [Fraction(0)]
        h = _solve_exact(a, b)
        return sum(p * gv * gv for p, gv in zip(spec.pi_exact, g)) + \
            2 * sum(p * gv * hv for p, gv, hv in zip(spec.pi_exact, g, h))
    f = np.asarray(f, dtype=float)
    g = f - float(spec.pi @ f)
    pg = spec.P @ g
    a = (np.eye(spec.n_states) - spec.P).copy()
    a[-1, :] = spec.pi
    b = pg.copy()
    b[-1] = 0.0
    h = np.linalg.solve(a, b)
    return float(spec.pi @ (g * g) + 2.0 * spec.pi @ (g * h))


def asymptotic_variance_series(spec: MarkovChainSpec, f, tol: float = 1e-12) -> float:
    """Series cross-check: pi(g^2) + 2 sum_t pi(g . P^t g), truncated when the
    theta^t / (1 - theta) tail falls below tol."""
    f = np.asarray(f, dtype=float)
    g = f - float(spec.pi @ f)
    scale = float(np.abs(g).max()) ** 2 or 1.0
    total = float(spec.pi @ (g * g))
    v = g.copy()
    t = 0
    while spec.theta ** t / max(1.0 - spec.theta, 1e-12) * scale > tol / 4.0 and t < 100000:
        v = spec.P @ v
        t += 1
        total += 2.0 * float(spec.pi @ (g * v))
    return total


def cycle_criterion(spec: MarkovChainSpec, f) -> bool:
    """True iff Sigma^2(f) > 0: some directed cycle of the transition graph has
    a nonzero sum of g = f - pi(f) over its vertices.

    All cycle sums vanish iff g(y) = u(y) - u(x) for a potential u on every
    edge x -> y; that is checked by propagating u along a spanning traversal
    and testing consistency on every edge.
    """
    exact = spec.P_exact is not None and all(isinstance(v, (int, Fraction)) for v in f)
    m = spec.n_states
    if exact:
        fx = [Fraction(v) for v in f]
        mean = sum(p * v for p, v in zip(spec.pi_exact, fx))
        g = [v - mean for v in fx]
        edges = [(i, j) for i in range(m) for j in range(m) if spec.P_exact[i][j] != 0]
        zero = Fraction(0)
        close = lambda a, b: a == b
    else:
        f = np.asarray(f, dtype=float)
        g = list(f - float(spec.pi @ f))
        edges = [(i, j) for i in range(m) for j in range(m) if spec.P[i][j] > 0.0]
        zero = 0.0
        scale = max(1.0, max(abs(v) for v in g))
        close = lambda a, b: abs(a - b) <= 1e-9 * scale
    adj = [[] for _ in range(m)]
    for i, j in edges:
        adj[i].append(j)
    u = [None] * m
    u[0] = zero
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if u[y] is None:
                u[y] = u[x] + g[y]
                stack.append(y)
    for x, y in edges:
        if not close(u[y], u[x] + g[y]):
            return True
    return False


def chain_sum_cumulants(spec: MarkovChainSpec, f, n: int, r_max: int) -> dict:
    """Cumulants kappa^(r)(S_n), r <= r_max, for S_n = sum_{t=1}^n f(X_t).

    Power moments come from the recursion on E[S_t^k 1_{X_t = x}]; exact in
    rational arithmetic whenever the chain and f are exact.
    """
    if r_max < 1 or n < 1:
        raise ValueError("need n >= 1 and r_max >= 1")
    exact = spec.P_exact is not None and all(isinstance(v, (int, Fraction)) for v in f)
    m = spec.n_states
    if exact:
        fx = [Fraction(v) for v in f]
        P = spec.P_exact
        state = [[spec.pi_exact[x] * fx[x] ** k for x in range(m)] for k in range(r_max + 1)]
        binom = [[math.comb(k, i) for i in range(k + 1)] for k in range(r_max + 1)]
        for _ in range(n - 1):
            pushed = [[sum(state[i][x] * P[x][y] for x in range(m)) for y in range(m)]
                      for i in range(r_max + 1)]
            state = [
                [sum(binom[k][i] * fx[y] ** (k - i) * pushed[i][y] for i in range(k + 1))
                 for y in range(m)]
                for k in range(r_max + 1)
            ]
        moments = [sum(state[k]) for k in range(r_max + 1)]
    else:
        fx = np.asarray(f, dtype=float)
        powers = np.array([fx ** k for k in range(r_max + 1)])
        state = spec.pi[np.newaxis, :] * powers
        for _ in range(n - 1):
            pushed = state @ spec.P
            state = np.array([
                sum(math.comb(k, i) * powers[k - i] * pushed[i] for i in range(k + 1))
                for k in range(r_max + 1)
            ])
        moments = [state[k].sum() for k in range(r_max + 1)]
    kappas: dict = {}
    for r in range(1, r_max + 1):
        acc = moments[r]
        for j in range(1, r):
            acc = acc - math.comb(r - 1, j - 1) * kappas[j] * moments[r - j]
        kappas[r] = acc
    return kappas


def sample_path(spec: MarkovChainSpec, f_list, n: int, seed) -> float:
    """One realized S_n = sum_t f_t(X_t) for the stationary chain."""
    return float(sample_sums(spec, f_list, n, 1, seed)[0])


def sample_sums(spec: MarkovChainSpec, f_list, n: int, replicas: int, seed) -> np.ndarray:
    """Vectorized stationary simulation of S_n over independent replicas."""
    rng = np.random.default_rng(seed)
    fs = _as_vectors(spec, f_list, n, exact=False)
    cum_pi = np.cumsum(spec.pi)
    cum_p = np.cumsum(spec.P, axis=1)
    state = np.searchsorted(cum_pi, rng.random(replicas))
    sums = fs[0][state].astype(float)
    for t in range(1, n):
        state = (cum_p[state] < rng.random(replicas)[:, np.newaxis]).sum(axis=1)
        sums += fs[t][state]
    return sums
