import warnings

import numpy as np
import pytest

from dmvr import engine
from dmvr.engine import (VARIANTS, Scenario, counts_from_fractions, is_in_convergence_set,
                         lyapunov, phase_observers, run)
from dmvr.errors import ConfigurationError
from dmvr.graph import build_complete, build_ring, build_torus
from dmvr.protocol import init_profile, mask_of
from dmvr.verify import compare_with_kernel

C1, C2, C3 = 1, 2, 4


def test_convergence_set_examples():
    assert not is_in_convergence_set([C1, 0, C1 | C2 | C3, 0, 0, C1 | C2, C1 | C3, 0])
    assert is_in_convergence_set([7, 0, 7, 0, 0, C1, C1, 0])
    assert is_in_convergence_set([C2] * 5)
    assert not is_in_convergence_set([C1, C2])


def test_lyapunov_examples():
    assert lyapunov([7, 0, 7, 0, 0, C1, C1, 0], 3) == 52
    assert lyapunov([3] * 4, 2) == 0
    # a merge of two size-2 sets sharing one choice
    before = [mask_of([0, 1]), mask_of([1, 2])]
    after = [mask_of([0, 1, 2]), mask_of([1])]
    assert lyapunov(after, 3) - lyapunov(before, 3) == -2


def test_counts_from_fractions():
    assert counts_from_fractions(100, [0.7, 0.3]) == [70, 30]
    assert counts_from_fractions(198, [1 / 3 + 0.005, 1 / 3, 1 / 3 - 0.005]) == [67, 66, 65]
    assert sum(counts_from_fractions(10, [1 / 3] * 3)) == 10
    with pytest.raises(ConfigurationError):
        counts_from_fractions(10, [0.5, 0.6])


def test_scenario_validation():
    g = build_complete(4)
    with pytest.raises(ConfigurationError):
        run(Scenario.from_counts(g, [3, 1], "pushpull", 0))
    with pytest.raises(ConfigurationError):
        run(Scenario(g, init_profile([0, 1, 0], 2), "compact-voting", 0))
    with pytest.warns(UserWarning):
        Scenario.from_counts(g, [2, 2], "compact-voting", 0).validate()
    with pytest.raises(ConfigurationError):
        phase_observers("compact-ranking", init_profile([0, 1, 2], 3), binary=True)


def test_tied_pair():
    g = build_complete(2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        tr = run(Scenario(g, init_profile([0, 1], 2), "compact-voting", 0, max_time=50.0))
    assert not tr.strict
    # both nodes hold {c1, c2} after one event but keep their own leaders, so
    # readouts never agree and the run ends at the cutoff
    assert tr.tau_x is not None and tr.tau_x == tr.event_log.times[0]
    assert not tr.converged
    assert sorted(tr.readouts) == [0, 1]


@pytest.mark.parametrize("variant", VARIANTS)
def test_three_nodes_converge_to_majority(variant):
    g = build_complete(3)
    for seed in range(20):
        tr = run(Scenario(g, init_profile([0, 0, 1], 2), variant, seed))
        assert tr.converged
        want = 0 if variant in engine.VOTING_VARIANTS else (0, 1)
        assert all(r == want for r in tr.readouts)


@pytest.mark.parametrize("variant", VARIANTS)
def test_determinism(variant):
    g = build_torus(3, 4)
    a = run(Scenario.from_counts(g, [5, 4, 3], variant, 9))
    b = run(Scenario.from_counts(g, [5, 4, 3], variant, 9))
    assert a.summary_row() == b.summary_row()
    assert np.array_equal(a.event_log.sets, b.event_log.sets)
    assert np.array_equal(a.lyapunov_values, b.lyapunov_values)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("graph", [build_complete(12), build_ring(12), build_torus(3, 4)],
                         ids=["complete", "ring", "torus"])
def test_kernel_matches_reference(variant, graph):
    for K, counts in ((2, [7, 5]), (3, [6, 4, 2]), (4, [5, 4, 2, 1])):
        for seed in range(3):
            sc = Scenario.from_counts(graph, counts, variant, seed)
            tr = run(sc)
            assert compare_with_kernel(sc, tr) is None


@pytest.mark.parametrize("variant", VARIANTS)
def test_phase_times_and_invariants(variant):
    g = build_complete(30)
    for K, counts in ((2, [18, 12]), (3, [14, 10, 6])):
        for seed in range(10):
            tr = run(Scenario.from_counts(g, counts, variant, seed))
            assert tr.converged
            assert tr.tau_x <= tr.tau_prime
            assert tr.tau_x == max(tr.tau_x_pairs.values())
            assert all(v == 0 for v in tr.violations.values())
            assert np.all(np.diff(tr.lyapunov_values) < 0)
            if K == 2:
                assert tr.tau_1 == tr.tau_x
                assert tr.tau_2 >= 0
            else:
                assert tr.tau_1 is None and tr.tau_2 is None


def test_cutoff():
    tr = run(Scenario.from_counts(build_ring(40), [21, 19], "compact-voting", 0, max_time=0.5))
    assert not tr.converged
    assert tr.final_time == 0.5
    assert tr.tau_prime is None


def test_log_chunks_and_truncation(monkeypatch):
    g = build_ring(20)
    sc = Scenario.from_counts(g, [8, 7, 5], "compact-ranking", 4)
    whole = run(sc)
    monkeypatch.setattr(engine, "_LOG_CHUNK", 64)
    chunked = run(sc)
    assert np.array_equal(whole.event_log.sets, chunked.event_log.sets)
    assert np.array_equal(whole.event_log.times, chunked.event_log.times)
    short = run(Scenario.from_counts(g, [8, 7, 5], "compact-ranking", 4, max_log_events=128))
    assert short.event_log.truncated and len(short.event_log) == 128
    assert short.summary_row() == whole.summary_row()


def test_logging_default_threshold():
    assert Scenario.from_counts(build_ring(50), [30, 20], "compact-voting", 0).logging
    assert not Scenario.from_counts(build_ring(51), [30, 21], "compact-voting", 0).logging


def test_multi_vote_profile():
    g = build_complete(6)
    prof = init_profile([[0, 1], [0], [0], [1, 2], [1], [2, 0]], 3)
    tr = run(Scenario(g, prof, "compact-ranking", 3))
    assert tr.converged and all(r == prof.ranking for r in tr.readouts)


def test_summary_row_columns():
    tr = run(Scenario.from_counts(build_complete(10), [6, 4], "compact-voting", 0))
    row = tr.summary_row()
    assert tuple(row) == engine.TRAJECTORY_COLUMNS
    assert row["rho"] == "0.6;0.4"
