import math
from fractions import Fraction
from itertools import combinations

import pytest

from dmvr import analysis as A
from dmvr.errors import DomainError

EULER_GAMMA = 0.5772156649015329


def H(k):
    return sum(Fraction(1, i) for i in range(1, k + 1))


def harmonic_oracle(n, r, s):
    return float(Fraction(n, 2 * (s - r)) * (H(r) - H(s) + H(s - r)))


@pytest.mark.parametrize("n,rho", [(100, 0.3), (100, 0.05), (100, 0.45), (37, 0.2), (1000, 0.1)])
def test_expected_tau1_matches_harmonic_form(n, rho):
    r = round(n * rho)
    got = A.expected_tau1(n, rho)
    assert got == pytest.approx(harmonic_oracle(n, r, n - r), rel=1e-12)


def test_expected_tau1_examples():
    assert A.expected_tau1(100, 0.3) == pytest.approx(4.3009, abs=5e-4)
    assert A.expected_tau1(100, 0.01) == pytest.approx(100 / (2 * 99), rel=1e-14)


def test_log_form_differs_by_euler_gamma_term():
    for rho in (0.1, 0.2, 0.3, 0.4):
        r = round(100 * rho)
        s = 100 - r
        exact = A.expected_tau1(100, rho)
        approx = A.expected_tau1_log(100, rho)
        assert approx == pytest.approx(100 / (2 * (s - r)) * math.log(r * (s - r) / s))
        assert approx < exact
        assert approx + EULER_GAMMA * 100 / (2 * (s - r)) == pytest.approx(exact, rel=0.03)


def test_var_tau1():
    assert A.var_tau1(100, 0.01) == pytest.approx(100 ** 2 / (4 * 99 ** 2))
    r, s = 30, 70
    direct = sum(100 ** 2 / (4 * (r - i) ** 2 * (s - i) ** 2) for i in range(r))
    assert A.var_tau1(100, 0.3) == pytest.approx(direct, rel=1e-13)
    last = 100 ** 2 / (4 * (s - r + 1) ** 2)
    assert last / A.var_tau1(100, 0.3) > 0.2
    vals = [A.var_tau1(100, x / 100) for x in range(5, 46, 5)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_tau2_bound():
    assert A.expected_tau2_bound(100, 0.01) == pytest.approx(1 / (2 * 0.98))
    assert A.expected_tau2_bound(100, 0.3) == pytest.approx(float(H(30)) / 0.8, rel=1e-13)
    assert A.expected_tau2_bound(100, 0.3) == pytest.approx(4.99, abs=5e-3)
    assert A.expected_tau2_bound_log(100, 0.3) == pytest.approx(math.log(60) / 0.8)
    assert A.expected_tau2_bound(1000, 0.499) > 100 * A.expected_tau2_bound(1000, 0.3) / 10


def test_total_bound_binary():
    assert A.total_bound_binary(100, 0.3) == pytest.approx(
        (math.log(30 * 0.4 / 0.7) + math.log(60)) / 0.8, rel=1e-14)
    assert A.total_bound_binary(100, 0.3) == pytest.approx(8.67, abs=5e-3)
    a, b = A.total_bound_binary(100, 0.2), A.total_bound_binary(1000, 0.2)
    assert b - a == pytest.approx(2 * math.log(10) / (2 * 0.6))
    with pytest.raises(DomainError):
        A.total_bound_binary(100, 0.5)


@pytest.mark.parametrize("rho", [0.0, 0.5, 0.7, -0.1])
def test_domain_errors(rho):
    with pytest.raises(DomainError):
        A.expected_tau1(100, rho)
    with pytest.raises(DomainError):
        A.expected_tau2_bound(100, rho)


def test_pairwise_moments():
    assert A.pairwise_moments(100, 0.7, 0.3) == (A.expected_tau1(100, 0.3), A.var_tau1(100, 0.3))
    assert A.pairwise_moments(100, 0.3, 0.2) == A.pairwise_moments(100, 0.2, 0.3)
    mean, var = A.pairwise_moments(100, 0.5, 0.3)
    assert mean == pytest.approx(harmonic_oracle(100, 30, 50), rel=1e-12)
    with pytest.raises(DomainError):
        A.pairwise_moments(100, 0.3, 0.3)


def test_order_stat_bound_examples():
    assert A.order_stat_bound([1, 1], [0, 0]) == 1
    assert A.order_stat_bound([1, 1], [1, 1]) == pytest.approx(2)
    assert A.order_stat_bound([0, 2], [0, 0]) == pytest.approx(2)
    with pytest.raises(DomainError):
        A.order_stat_bound([1], [0])
    with pytest.raises(DomainError):
        A.order_stat_bound([1, 2], [0, -1])


def test_order_stat_bound_holds_on_samples():
    import numpy as np
    rng = np.random.default_rng(0)
    z = rng.normal(size=(200_000, 4)) * [1, 2, 0.5, 1] + [0, 1, 2, 0.5]
    z[:, 3] = z[:, 0] * 0.9 + 0.5
    bound = A.order_stat_bound(z.mean(0), z.var(0))
    assert z.max(1).mean() <= bound


def test_tau_x_bound():
    assert A.tau_x_bound(100, [0.7, 0.3]) == A.expected_tau1(100, 0.3)
    table = A.pairwise_table(100, [0.5, 0.3, 0.2])
    means = [table[p][0] for p in combinations(range(3), 2)]
    assert max(table, key=lambda p: table[p][0]) == (1, 2)
    b = A.tau_x_bound(100, [0.5, 0.3, 0.2])
    assert max(means) <= b < float("inf")
    with pytest.raises(DomainError):
        A.tau_x_bound(100, [0.3, 0.5, 0.2])


def test_tau_prime_bound():
    assert A.tau_prime_bound(100, [0.7, 0.3]) == pytest.approx(math.log(100) / 0.8)
    assert A.tau_prime_bound(100, [0.7, 0.3]) == pytest.approx(5.756, abs=1e-3)
    levels = A.level_moments(100, [0.5, 0.3, 0.2])
    assert levels[1][0] > levels[0][0]
    assert A.tau_prime_bound(100, [0.5, 0.3, 0.2]) >= levels[1][0]
    wide = A.tau_prime_bound(100, [0.55, 0.35, 0.25])
    narrow = A.tau_prime_bound(100, [0.45, 0.35, 0.3])
    assert wide == pytest.approx(narrow / 2)
    with pytest.raises(DomainError):
        A.tau_prime_bound(100, [0.4, 0.4, 0.2])


def test_bounds_scale_with_log_n():
    rho = [0.5, 0.3, 0.2]
    for f in (A.tau_x_bound, A.tau_prime_bound):
        vals = [f(n, rho) for n in (100, 1000, 10_000)]
        assert vals[0] < vals[1] < vals[2]
    for f in (A.expected_tau1, A.expected_tau2_bound, A.total_bound_binary):
        assert f(100, 0.3) < f(1000, 0.3) < f(10_000, 0.3)
    # order log(n) / min gap over a small grid
    ratios = []
    for n in (100, 1000, 10_000):
        for gap in (0.05, 0.1, 0.2):
            r = [1 / 3 + gap, 1 / 3, 1 / 3 - gap]
            ratios.append(A.tau_x_bound(n, r) / (math.log(n) / gap))
    assert max(ratios) / min(ratios) < 4


def test_bounds_table():
    names = dict(A.bounds_table(100, [0.7, 0.3]))
    assert names["expected_tau1"] == A.expected_tau1(100, 0.3)
    assert "total_bound_binary" in names and "tau_prime_bound" in names
    names = dict(A.bounds_table(100, [0.5, 0.3, 0.2]))
    assert "expected_tau1" not in names and "pair_1_2_mean" in names
