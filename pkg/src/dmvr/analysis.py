"""Closed-form timing for the complete graph: binary phases and multi-choice bounds.

All times are in time units (one unit is ``n`` interactions on average).
Fractions are turned into integral counts by rounding ``n * rho`` to the
nearest integer, and every formula works on those counts so that a bound
and a simulation built from the same counts describe the same system.
Logarithms are natural.
"""
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError


def _count(n, rho):
    return int(math.floor(n * rho + 0.5))


def _binary_counts(n, rho):
    if not 0 < rho < 0.5:
        raise DomainError(f"minority fraction must lie in (0, 1/2), got {rho}")
    r = _count(n, rho)
    s = n - r
    if r < 1 or s <= r:
        raise DomainError(f"n={n}, rho={rho} rounds to r={r}, s={s}; need 1 <= r < s")
    return r, s


def _pair_counts(n, rho_k, rho_l):
    lo, hi = sorted((float(rho_k), float(rho_l)))
    if lo <= 0:
        raise DomainError(f"pair fractions must be positive, got {rho_k}, {rho_l}")
    r, s = _count(n, lo), _count(n, hi)
    if r < 1 or s <= r:
        raise DomainError(f"pair ({rho_k}, {rho_l}) rounds to r={r}, s={s} at n={n}; "
                          "need 1 <= r < s")
    return r, s


def _tau1_terms(n, r, s):
    i = np.arange(r, dtype=float)
    return n / (2.0 * (r - i) * (s - i))


def _mean_rs(n, r, s):
    return float(math.fsum(_tau1_terms(n, r, s)))


def _var_rs(n, r, s):
    return float(math.fsum(_tau1_terms(n, r, s) ** 2))


def expected_tau1(n, rho):
    """Exact mean of the first phase (extinction of the minority singleton).

    ``rho`` is the minority fraction; the sum runs over the ``r`` sojourns
    of the birth-death chain counting minority singletons.
    """
    r, s = _binary_counts(n, rho)
    return _mean_rs(n, r, s)


def expected_tau1_log(n, rho):
    """Logarithmic approximation ``n/(2(s-r)) * log(r(s-r)/s)`` of the exact mean."""
    r, s = _binary_counts(n, rho)
    return n / (2.0 * (s - r)) * math.log(r * (s - r) / s)


def var_tau1(n, rho):
    r, s = _binary_counts(n, rho)
    return _var_rs(n, r, s)


def expected_tau2_bound(n, rho):
    """Upper bound on the mean second phase: ``H_r / (2(1 - 2 rho))``.

    ``1 - 2 rho`` is taken as ``(s - r) / n`` of the rounded counts.
    """
    r, s = _binary_counts(n, rho)
    gap = (s - r) / n
    return math.fsum(1.0 / k for k in range(1, r + 1)) / (2.0 * gap)


def expected_tau2_bound_log(n, rho):
    r, s = _binary_counts(n, rho)
    return math.log(2 * r) / (2.0 * (s - r) / n)


def total_bound_binary(n, rho):
    """Log-form bound on the mean of both phases together."""
    if not 0 < rho < 0.5:
        raise DomainError(f"minority fraction must lie in (0, 1/2), got {rho}")
    a = n * rho * (1 - 2 * rho) / (1 - rho)
    b = 2 * n * rho
    if a <= 0 or b <= 0:
        raise DomainError(f"log argument not positive for n={n}, rho={rho}")
    return (math.log(a) + math.log(b)) / (2.0 * (1 - 2 * rho))


def pairwise_moments(n, rho_k, rho_l):
    """Mean and variance of the hitting time of the two-choice projection.

    The smaller fraction plays the minority (``r``) and the larger the
    majority (``s``), whatever the argument order.
    """
    r, s = _pair_counts(n, rho_k, rho_l)
    return _mean_rs(n, r, s), _var_rs(n, r, s)


def order_stat_bound(means, variances):
    """Upper bound on ``E[max Z_r]`` from means and variances alone."""
    mu = np.asarray(means, dtype=float)
    var = np.asarray(variances, dtype=float)
    R = mu.shape[0]
    if R < 2 or var.shape[0] != R:
        raise DomainError(f"need at least two matched means and variances, got {R}")
    if np.any(var < 0):
        raise DomainError("variances must be non-negative")
    mbar = float(mu.mean())
    spread = float(np.sum(var + (mu - mbar) ** 2))
    return mbar + math.sqrt((R - 1) / R * spread)


def _descending(n, rho):
    rho = [float(x) for x in rho]
    if len(rho) < 2:
        raise DomainError(f"need at least two choices, got {len(rho)}")
    counts = [_count(n, x) for x in rho]
    if any(c < 1 for c in counts) or any(a <= b for a, b in zip(counts, counts[1:])):
        raise DomainError(f"n*rho must round to strictly descending positive counts, "
                          f"got {counts}")
    return rho


def pairwise_table(n, rho):
    """``{(k, l): (mean, variance)}`` over all pairs ``k < l``."""
    rho = _descending(n, rho)
    return {(k, l): pairwise_moments(n, rho[k], rho[l])
            for k, l in combinations(range(len(rho)), 2)}


def tau_x_bound(n, rho):
    """Bound on the mean time to reach the inclusion-chain set."""
    moments = list(pairwise_table(n, rho).values())
    if len(moments) == 1:
        return moments[0][0]
    return order_stat_bound([m for m, _ in moments], [v for _, v in moments])


def level_moments(n, rho):
    """Per-level ``(mean, variance)`` of the memory dissemination times."""
    rho = _descending(n, rho)
    counts = [_count(n, x) for x in rho]
    out = []
    for a, b in zip(counts, counts[1:]):
        gap = (a - b) / n
        out.append((math.log(n) / (2.0 * gap), 1.0 / (4.0 * gap * gap)))
    return out


def tau_prime_bound(n, rho):
    """Bound on the mean dissemination time that follows the chain phase."""
    moments = level_moments(n, rho)
    if len(moments) == 1:
        return moments[0][0]
    return order_stat_bound([m for m, _ in moments], [v for _, v in moments])


@dataclass(frozen=True)
class BinaryTiming:
    n: int
    rho: float
    mean_tau1: float
    var_tau1: float
    tau2_bound: float
    total_bound: float


def binary_timing(n, rho):
    """All binary quantities for minority fraction ``rho``."""
    return BinaryTiming(n, rho, expected_tau1(n, rho), var_tau1(n, rho),
                        expected_tau2_bound(n, rho), total_bound_binary(n, rho))


@dataclass(frozen=True)
class MultiTiming:
    n: int
    rho: tuple
    pairs: dict
    levels: tuple
    tau_x_bound: float
    tau_prime_bound: float


def multi_timing(n, rho):
    return MultiTiming(n, tuple(rho), pairwise_table(n, rho), tuple(level_moments(n, rho)),
                       tau_x_bound(n, rho), tau_prime_bound(n, rho))


def bounds_table(n, rho):
    """Every formula that applies to ``(n, rho)`` as ``(name, value)`` rows.

    ``rho`` is the full fraction vector in descending order.
    """
    rho = _descending(n, rho)
    rows = []
    if len(rho) == 2:
        minority = rho[1]
        rows += [
            ("expected_tau1", expected_tau1(n, minority)),
            ("expected_tau1_log", expected_tau1_log(n, minority)),
            ("var_tau1", var_tau1(n, minority)),
            ("expected_tau2_bound", expected_tau2_bound(n, minority)),
            ("expected_tau2_bound_log", expected_tau2_bound_log(n, minority)),
        ]
        try:
            rows.append(("total_bound_binary", total_bound_binary(n, minority)))
        except DomainError:
            pass
    for (k, l), (m, v) in pairwise_table(n, rho).items():
        rows.append((f"pair_{k}_{l}_mean", m))
        rows.append((f"pair_{k}_{l}_var", v))
    rows.append(("tau_x_bound", tau_x_bound(n, rho)))
    rows.append(("tau_prime_bound", tau_prime_bound(n, rho)))
    return rows
