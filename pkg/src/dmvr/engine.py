"""Asynchronous event-driven execution under Poisson node clocks.

Global events arrive at rate ``n`` (one rate-1 clock per node), the ticking
node is uniform and it contacts a uniform neighbour. Times are reported in
time units, so ``n`` interactions take about one unit.
"""
import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from . import _kernels as kern
from .errors import ConfigurationError
from .graph import Graph
from .protocol import (VoteProfile, full_set, initial_ranking_state, init_profile,
                       members, popcount, readout_ranking)
from .rng import RandomStream

VARIANTS = ("explicit-ranking", "compact-voting", "compact-ranking", "enhanced-voting")
VOTING_VARIANTS = ("compact-voting", "enhanced-voting")
RANKING_VARIANTS = ("explicit-ranking", "compact-ranking")

_VARIANT_CODE = {
    "explicit-ranking": kern.EXPLICIT_RANKING,
    "compact-voting": kern.COMPACT_VOTING,
    "compact-ranking": kern.COMPACT_RANKING,
    "enhanced-voting": kern.ENHANCED_VOTING,
}

DEFAULT_MAX_TIME = 1e4
LOG_AUTO_LIMIT = 50
_LOG_CHUNK = 1 << 16


def counts_from_fractions(n, rho):
    """Integral vote counts closest to ``n * rho`` that add up to ``n``.

    Each count is rounded to nearest; any leftover from rounding is settled
    by largest remainder.
    """
    rho = [float(r) for r in rho]
    if any(r < 0 for r in rho) or not math.isclose(sum(rho), 1.0, abs_tol=1e-9):
        raise ConfigurationError(f"fractions must be non-negative and sum to 1, got {rho}")
    raw = [n * r for r in rho]
    counts = [int(math.floor(x + 0.5)) for x in raw]
    diff = n - sum(counts)
    order = sorted(range(len(rho)), key=lambda k: -(raw[k] - counts[k]) if diff > 0
                   else (raw[k] - counts[k]))
    for k in order[:abs(diff)]:
        counts[k] += 1 if diff > 0 else -1
    return counts


def votes_from_counts(counts, seed):
    """Single-vote list with ``counts[k]`` votes for choice ``k``, shuffled by ``seed``."""
    votes = np.repeat(np.arange(len(counts)), counts)
    np.random.default_rng([int(seed), 0x5EED]).shuffle(votes)
    return [int(v) for v in votes]


@dataclass
class Scenario:
    graph: Graph
    profile: VoteProfile
    variant: str
    seed: int
    max_time: float = DEFAULT_MAX_TIME
    log_events: Optional[bool] = None
    max_log_events: int = 5_000_000

    @classmethod
    def from_counts(cls, graph, counts, variant, seed, **kw):
        votes = votes_from_counts(counts, seed)
        return cls(graph, init_profile(votes, len(counts)), variant, seed, **kw)

    @classmethod
    def from_fractions(cls, graph, rho, variant, seed, **kw):
        return cls.from_counts(graph, counts_from_fractions(graph.n, rho), variant, seed, **kw)

    @property
    def n(self):
        return self.graph.n

    @property
    def K(self):
        return self.profile.K

    @property
    def logging(self):
        if self.log_events is None:
            return self.n <= LOG_AUTO_LIMIT
        return bool(self.log_events)

    def validate(self):
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.profile.n != self.graph.n:
            raise ConfigurationError(
                f"profile has {self.profile.n} nodes but the graph has {self.graph.n}")
        if not self.max_time > 0:
            raise ConfigurationError("max_time must be positive")
        if not phase_observers(self.variant, self.profile).strict:
            warnings.warn(f"vote counts {self.profile.counts} are tied; readouts are not "
                          "checked for correctness, only for agreement", stacklevel=2)


@dataclass(frozen=True)
class ObserverSet:
    """Which phase times a run tracks and what counts as a correct readout."""
    binary: bool
    strict: bool
    majority: int
    minority: int
    ranking: tuple
    targets: tuple


def phase_observers(variant, profile, binary=None):
    """Observers for a run; ``binary=True`` demands the two-choice phase times."""
    K = profile.K
    if binary and K != 2:
        raise ConfigurationError(f"binary phase observers need K=2, got K={K}")
    if variant not in VARIANTS:
        raise ConfigurationError(f"unknown variant {variant!r}")
    strict = profile.majority_unique if variant in VOTING_VARIANTS else profile.strict
    ranking = profile.ranking
    minority = 1 << ranking[1] if K == 2 else 0
    return ObserverSet(K == 2, strict, ranking[0], minority, ranking, profile.target_prefixes())


@dataclass
class EventLog:
    """Per-interaction record of the explicit value sets.

    ``sets[e]`` holds ``(v_i before, v_j before, v_i after, v_j after)``.
    """
    times: np.ndarray
    pairs: np.ndarray
    sets: np.ndarray
    truncated: bool = False

    def __len__(self):
        return self.times.shape[0]


@dataclass
class Trajectory:
    seed: int
    n: int
    K: int
    topology: str
    variant: str
    counts: tuple
    strict: bool
    initial_sets: tuple
    converged: bool
    interactions: int
    final_time: float
    tau_1: Optional[float]
    tau_2: Optional[float]
    tau_x: Optional[float]
    tau_prime: Optional[float]
    tau_x_pairs: dict
    readouts: list
    final_sets: np.ndarray
    lyapunov_times: np.ndarray
    lyapunov_values: np.ndarray
    violations: dict = field(default_factory=dict)
    event_log: Optional[EventLog] = None

    @property
    def tau_dissemination(self):
        """Time from entering the convergence set until every readout is final."""
        if self.tau_x is None or self.tau_prime is None:
            return None
        return self.tau_prime - self.tau_x

    @property
    def rho(self):
        return tuple(c / self.n for c in self.counts)

    def summary_row(self):
        return {
            "seed": self.seed, "n": self.n, "K": self.K, "topology": self.topology,
            "variant": self.variant, "rho": ";".join(repr(r) for r in self.rho),
            "tau_1": self.tau_1, "tau_2": self.tau_2, "tau_x": self.tau_x,
            "tau_prime": self.tau_prime, "interactions": self.interactions,
            "converged": int(self.converged),
        }


TRAJECTORY_COLUMNS = ("seed", "n", "K", "topology", "variant", "rho", "tau_1", "tau_2",
                      "tau_x", "tau_prime", "interactions", "converged")


def is_in_convergence_set(states):
    """True iff the value sets form an inclusion chain ordered by size."""
    by_size = {}
    for v in set(states):
        if v == 0:
            continue
        s = popcount(v)
        if s in by_size:
            return False
        by_size[s] = v
    prev = 0
    for s in sorted(by_size):
        if prev & ~by_size[s]:
            return False
        prev = by_size[s]
    return True


def lyapunov(states, K):
    return len(states) * K * K - sum(popcount(v) ** 2 for v in states)


def _initial_arrays(sc):
    n, K = sc.n, sc.K
    sets = sc.profile.sets
    vals = np.array(sets, dtype=np.int64)
    voting = sc.variant in VOTING_VARIANTS
    leader = np.array([members(v)[0] for v in sets] if voting else [0], dtype=np.int64)
    cvals = vals.copy() if voting else np.zeros(1, dtype=np.int64)
    if sc.variant == "compact-ranking":
        states = [initial_ranking_state(v, K) for v in sets]
        order = np.array([s.order for s in states], dtype=np.int64)
        pointer = np.array([s.pointer for s in states], dtype=np.int64)
    else:
        order = np.zeros((1, K), dtype=np.int64)
        pointer = np.zeros(1, dtype=np.int64)
    if sc.variant == "explicit-ranking":
        bank = np.zeros((n, K), dtype=np.int64)
    else:
        bank = np.zeros((1, K), dtype=np.int64)
    return vals, cvals, leader, order, pointer, bank


def run(sc):
    """Simulate one scenario until every observer reports convergence or the cutoff."""
    sc.validate()
    n, K = sc.n, sc.K
    obs = phase_observers(sc.variant, sc.profile)
    variant = _VARIANT_CODE[sc.variant]
    vals, cvals, leader, order, pointer, bank = _initial_arrays(sc)
    ranking = np.array(obs.ranking, dtype=np.int64)
    targets = np.array(obs.targets, dtype=np.int64)

    mask_count = np.zeros(1 << K, dtype=np.int64)
    size_distinct = np.zeros(K + 1, dtype=np.int64)
    size_total = np.zeros(K + 1, dtype=np.int64)
    size_sum = np.zeros(K + 1, dtype=np.int64)
    D = np.zeros((K, K), dtype=np.int64)
    tau_pair = np.full((K, K), -1.0)
    correct = np.zeros(n, dtype=np.uint8)
    mem1 = np.zeros(n, dtype=np.uint8)
    lyap_cap = n * K * K + 2
    lyap_t = np.zeros(lyap_cap)
    lyap_v = np.zeros(lyap_cap, dtype=np.int64)

    fs = np.full(kern.N_F, -1.0)
    fs[kern.F_TIME] = 0.0
    fs[kern.F_MAXTIME] = float(sc.max_time)
    ist = np.zeros(kern.N_I, dtype=np.int64)
    ist[kern.I_STRICT] = int(obs.strict)
    ist[kern.I_TOP] = obs.majority
    ist[kern.I_MINORITY] = obs.minority
    logging = sc.logging
    ist[kern.I_LOG] = int(logging)
    chunk = min(_LOG_CHUNK, max(1, sc.max_log_events)) if logging else 1
    log_t = np.zeros(chunk)
    log_ij = np.zeros((chunk, 2), dtype=np.int64)
    log_sets = np.zeros((chunk, 4), dtype=np.int64)
    chunks = []
    truncated = False
    scratch = np.zeros(K, dtype=np.int64)
    indptr, indices = sc.graph.csr

    init_observers, run_events = kern.kernels(variant)
    done = init_observers(n, K, vals, leader, order, bank, ranking, targets,
                               mask_count, size_distinct, size_total, size_sum, D, tau_pair,
                               correct, mem1, lyap_t, lyap_v, fs, ist)
    status = kern.DONE if done else kern.NEED_DRAWS
    stream = RandomStream(sc.seed)
    while status not in (kern.DONE, kern.CUTOFF):
        buf, pos = stream.view(kern.DRAWS_PER_EVENT)
        status, pos = run_events(
            n, K, indptr, indices, buf, pos,
            vals, cvals, leader, order, pointer, bank, ranking, targets,
            mask_count, size_distinct, size_total, size_sum, D, tau_pair,
            correct, mem1, lyap_t, lyap_v, log_t, log_ij, log_sets, fs, ist, scratch)
        stream.seek(pos)
        if status == kern.LOG_FULL:
            chunks.append((log_t.copy(), log_ij.copy(), log_sets.copy()))
            ist[kern.I_LOGCOUNT] = 0
            if len(chunks) * chunk >= sc.max_log_events:
                ist[kern.I_LOG] = 0
                truncated = True

    event_log = None
    if logging:
        m = int(ist[kern.I_LOGCOUNT])
        chunks.append((log_t[:m], log_ij[:m], log_sets[:m]))
        event_log = EventLog(np.concatenate([c[0] for c in chunks]),
                             np.concatenate([c[1] for c in chunks]),
                             np.concatenate([c[2] for c in chunks]), truncated)

    def t_or_none(x):
        return None if x < 0 else float(x)

    tau_1 = t_or_none(fs[kern.F_TAU1]) if K == 2 else None
    t_mem1 = t_or_none(fs[kern.F_TMEM1]) if K == 2 else None
    tau_2 = t_mem1 - tau_1 if (tau_1 is not None and t_mem1 is not None) else None
    pairs = {(k, l): t_or_none(tau_pair[k, l]) for k, l in combinations(range(K), 2)}
    ns = int(ist[kern.I_NSAMPLES])
    return Trajectory(
        seed=sc.seed, n=n, K=K, topology=sc.graph.label, variant=sc.variant,
        counts=sc.profile.counts, strict=obs.strict, initial_sets=sc.profile.sets,
        converged=status == kern.DONE, interactions=int(ist[kern.I_EVENTS]),
        final_time=float(fs[kern.F_TIME]), tau_1=tau_1, tau_2=tau_2,
        tau_x=t_or_none(fs[kern.F_TAUX]), tau_prime=t_or_none(fs[kern.F_TAUP]),
        tau_x_pairs=pairs,
        readouts=_readouts(sc.variant, n, leader, order, bank),
        final_sets=vals, lyapunov_times=lyap_t[:ns].copy(), lyapunov_values=lyap_v[:ns].copy(),
        violations={"x0_permanence": int(ist[kern.I_X0VIOL]),
                    "lyapunov": int(ist[kern.I_LYAPVIOL]),
                    "encoding": int(ist[kern.I_ENCVIOL])},
        event_log=event_log,
    )


def _readouts(variant, n, leader, order, bank):
    if variant in VOTING_VARIANTS:
        return [int(x) for x in leader]
    if variant == "compact-ranking":
        return [tuple(int(c) for c in row) for row in order]
    return [readout_ranking(tuple(int(m) for m in row)) for row in bank]


def final_value_sets(traj):
    """Explicit value sets at the end of a run, as Python ints."""
    return [int(v) for v in traj.final_sets]


def compact_value_set(v, K):
    """Value set as stored by the compact encodings (empty becomes the full set)."""
    return v or full_set(K)
