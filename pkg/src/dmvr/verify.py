"""Independent oracles for the protocol and the simulator.

* :func:`model_check` explores every reachable configuration of a small
  complete graph and judges convergence from the bottom strongly connected
  components of the configuration graph.
* :func:`enumerate_states` counts node states syntactically and by closure.
* :func:`audit_trace` replays a logged trajectory and re-checks the
  invariants event by event.
* :func:`reference_run` is a slow pure-Python simulator built only on
  :mod:`dmvr.protocol`; it consumes the random stream exactly like the
  compiled kernel, so both can be compared event by event.
* :func:`equivalence_check` drives an explicit and a compact representation
  with the same interactions and draws.
"""
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations
from typing import Optional

import networkx as nx

from . import protocol as P
from .engine import RANKING_VARIANTS, VOTING_VARIANTS, Scenario, phase_observers
from .errors import ConfigurationError, StateSpaceTooLarge
from .graph import sample_neighbor
from .rng import RandomStream

PASS = "PASS"
FAIL = "FAIL"
TIE_UNDEFINED = "TIE-UNDEFINED"

MODEL_CHECK_MAX_N = 6
MODEL_CHECK_MAX_K = 3
MODEL_CHECK_VARIANTS = ("compact-voting", "compact-ranking", "enhanced-voting")
DEFAULT_MAX_CONFIGS = 500_000


# --- branching step semantics -------------------------------------------------

class _Fixed:
    """Stream stand-in that replays a prepared list of draws."""

    def __init__(self, draws):
        self._draws = list(draws)

    def random(self):
        return self._draws.pop(0)


def _member_draws(mask):
    # one representative draw per member of ``mask`` for the repair picker
    c = P.popcount(mask)
    return [(k + 0.5) / c for k in range(c)]


def _voting_outcomes(a, b, K, enhanced):
    """Every possible result of a voting interaction, one per random branch."""
    vi, vj = P.consolidate(a.value_set, b.value_set)
    full = P.full_set(K)
    vi, vj = vi or full, vj or full
    ri = _member_draws(vi) if not vi >> a.leader & 1 else [None]
    rj = _member_draws(vj) if not vj >> b.leader & 1 else [None]
    bern = [0.25, 0.75] if enhanced and P.popcount(vi) > 1 and P.popcount(vj) > 1 else [None]
    step = P.enhanced_step if enhanced else P.voting_step
    out = set()
    for x in ri:
        for y in rj:
            for u in bern:
                draws = [d for d in (x, y, u) if d is not None]
                out.add(step(a, b, K, _Fixed(draws)))
    return out


def _successors(variant, K):
    cache = {}
    enhanced = variant == "enhanced-voting"

    def succ(a, b):
        key = (a, b)
        if key not in cache:
            if variant in VOTING_VARIANTS:
                cache[key] = _voting_outcomes(a, b, K, enhanced)
            else:
                cache[key] = {P.ranking_step(a, b)}
        return cache[key]
    return succ


def _initial_state(variant, v0, K):
    if variant in VOTING_VARIANTS:
        return P.initial_voting_state(v0)
    return P.initial_ranking_state(v0, K)


def _state_correct(variant, s, obs):
    if variant in VOTING_VARIANTS:
        return s.leader == obs.majority
    return tuple(s.order) == obs.ranking


# --- model checking ----------------------------------------------------------

@dataclass
class Verdict:
    status: str
    n: int
    K: int
    variant: str
    counts: tuple
    configurations: int = 0
    bottom_components: int = 0
    counterexample: Optional[list] = None
    message: str = ""

    @property
    def ok(self):
        return self.status != FAIL

    def describe(self):
        line = (f"{self.status} n={self.n} K={self.K} variant={self.variant} "
                f"counts={list(self.counts)} configs={self.configurations} "
                f"bottom_sccs={self.bottom_components}")
        if self.message:
            line += f" ({self.message})"
        return line


def _canon(states):
    # multiset as a sorted tuple of (state, count)
    return tuple(sorted(Counter(states).items()))


def _apply(config, a, b, na, nb):
    c = Counter(dict(config))
    c[a] -= 1
    c[b] -= 1
    c[na] += 1
    c[nb] += 1
    return tuple(sorted((s, m) for s, m in c.items() if m > 0))


def model_check(n, K, votes, variant, max_configs=DEFAULT_MAX_CONFIGS):
    """Exhaustive convergence verdict on the complete graph with ``n`` nodes.

    ``votes`` lists each node's initial choice (or collection of choices).
    All interaction orders and every random branch are explored; the verdict
    is PASS when every bottom strongly connected component of the
    configuration graph holds only configurations in which every node reads
    out the correct answer.
    """
    if variant not in MODEL_CHECK_VARIANTS:
        raise ConfigurationError(f"model checking supports {MODEL_CHECK_VARIANTS}, got {variant!r}")
    if n > MODEL_CHECK_MAX_N or K > MODEL_CHECK_MAX_K:
        raise StateSpaceTooLarge(
            f"model checking is limited to n <= {MODEL_CHECK_MAX_N}, K <= {MODEL_CHECK_MAX_K}")
    profile = P.init_profile(votes, K)
    if profile.n != n:
        raise ConfigurationError(f"{profile.n} votes given for n={n}")
    if n < 2:
        raise ConfigurationError("model checking needs at least two nodes")
    obs = phase_observers(variant, profile)
    verdict = Verdict(PASS, n, K, variant, profile.counts)
    if not obs.strict:
        verdict.status = TIE_UNDEFINED
        verdict.message = "vote counts are not strictly ordered"
        return verdict

    succ = _successors(variant, K)
    start = _canon(_initial_state(variant, v, K) for v in profile.sets)
    graph = nx.DiGraph()
    graph.add_node(start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        config = queue.popleft()
        kinds = [s for s, _ in config]
        mult = dict(config)
        for a in kinds:
            for b in kinds:
                if a == b and mult[a] < 2:
                    continue
                for na, nb in succ(a, b):
                    nxt = _apply(config, a, b, na, nb)
                    graph.add_edge(config, nxt)
                    if nxt not in parent:
                        parent[nxt] = config
                        if len(parent) > max_configs:
                            raise StateSpaceTooLarge(
                                f"more than {max_configs} configurations reachable")
                        queue.append(nxt)
    verdict.configurations = graph.number_of_nodes()

    cond = nx.condensation(graph)
    bottoms = [c for c in cond.nodes if cond.out_degree(c) == 0]
    verdict.bottom_components = len(bottoms)
    for c in bottoms:
        for config in cond.nodes[c]["members"]:
            if not all(_state_correct(variant, s, obs) for s, _ in config):
                path = []
                node = config
                while node is not None:
                    path.append(node)
                    node = parent[node]
                verdict.status = FAIL
                verdict.counterexample = path[::-1]
                verdict.message = "bottom component with an incorrect readout"
                return verdict
    return verdict


def strict_profiles(n, K):
    """Every multiset of nonempty initial value sets with strictly ordered counts.

    Choice ``0`` carries the most votes; relabelled copies are skipped.
    """
    subsets = list(range(1, 1 << K))
    out = []
    for combo in combinations_with_replacement(subsets, n):
        prof = P.VoteProfile(combo, K)
        counts = prof.counts
        if prof.strict and all(a > b for a, b in zip(counts, counts[1:])):
            out.append([P.members(v) for v in combo])
    return out


def model_check_all(max_n=5, max_k=3, variants=MODEL_CHECK_VARIANTS):
    """Model check every strict profile for ``2 <= n <= max_n``, ``2 <= K <= max_k``."""
    verdicts = []
    for variant in variants:
        for K in range(2, max_k + 1):
            for n in range(2, max_n + 1):
                for votes in strict_profiles(n, K):
                    verdicts.append(model_check(n, K, votes, variant))
    return verdicts


# --- state enumeration -------------------------------------------------------

@dataclass
class StateCensus:
    K: int
    variant: str
    syntactic: int
    states: list
    reachable: Optional[int] = None
    reachable_states: Optional[list] = None


ENUM_MAX_K_RANKING = 8
ENUM_MAX_K_VOTING = 16
CLOSURE_MAX_STATES = 1000


def _syntactic_states(K, variant):
    if variant in VOTING_VARIANTS:
        full = P.full_set(K)
        return [P.VotingState(l, r) for l in range(K)
                for r in range(1 << K) if r & full == r and not r >> l & 1]
    return [P.RankingState(p, q) for p in permutations(range(K)) for q in range(1, K + 1)]


def enumerate_states(K, variant, reachable=True, closure_limit=CLOSURE_MAX_STATES):
    """Syntactic state count for a compact encoding, plus the reachable closure.

    The closure starts from the single-vote initial states and repeatedly
    applies the pairwise step (all random branches) to every ordered pair of
    known states. It is skipped when the syntactic count exceeds
    ``closure_limit``.
    """
    if variant not in ("compact-voting", "enhanced-voting", "compact-ranking"):
        raise ConfigurationError(f"no compact encoding for {variant!r}")
    cap = ENUM_MAX_K_VOTING if variant in VOTING_VARIANTS else ENUM_MAX_K_RANKING
    if not 1 <= K <= cap:
        raise StateSpaceTooLarge(f"{variant} enumeration supports 1 <= K <= {cap}, got {K}")
    if variant in VOTING_VARIANTS:
        syntactic = K * 2 ** (K - 1)
        states = _syntactic_states(K, variant) if syntactic <= 1 << 20 else []
    else:
        syntactic = K * math.factorial(K)
        states = _syntactic_states(K, variant)
    census = StateCensus(K, variant, syntactic, states)
    if not reachable or syntactic > closure_limit:
        return census

    succ = _successors(variant, K)
    seen = {_initial_state(variant, 1 << k, K) for k in range(K)}
    known = list(seen)
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in known:
                for pair in (succ(a, b), succ(b, a)):
                    for na, nb in pair:
                        for s in (na, nb):
                            if s not in seen:
                                seen.add(s)
                                new.append(s)
        known.extend(new)
        frontier = new
    census.reachable = len(seen)
    census.reachable_states = sorted(seen)
    return census


# --- reference simulator -----------------------------------------------------

@dataclass
class ReferenceEvent:
    t: float
    i: int
    j: int
    sets: tuple


@dataclass
class ReferenceRun:
    events: list
    value_sets: list
    states: list
    readouts: list


def _ref_initial(variant, sets, K):
    if variant == "explicit-ranking":
        return [P.empty_bank(K) for _ in sets]
    return [_initial_state(variant, v, K) for v in sets]


def _ref_readouts(variant, states):
    if variant == "explicit-ranking":
        return [P.readout_ranking(b) for b in states]
    if variant in VOTING_VARIANTS:
        return [P.readout_majority(s) for s in states]
    return [P.readout_ranking_compact(s) for s in states]


def _ref_step(variant, K, vals, states, i, j, rng, ranking_step):
    oi, oj = vals[i], vals[j]
    ni, nj = P.consolidate(oi, oj)
    vals[i], vals[j] = ni, nj
    if variant == "explicit-ranking":
        states[i], states[j] = P.disseminate(states[i], states[j], ni, nj)
    elif variant == "compact-voting":
        states[i], states[j] = P.voting_step(states[i], states[j], K, rng)
    elif variant == "enhanced-voting":
        states[i], states[j] = P.enhanced_step(states[i], states[j], K, rng)
    else:
        states[i], states[j] = ranking_step(states[i], states[j])
    return oi, oj, ni, nj


def reference_run(sc, max_events, stop=None, ranking_step=P.ranking_step):
    """Pure-Python run of ``sc`` for at most ``max_events`` interactions.

    Draw order per event matches the compiled kernel: inter-event time,
    ticking node, neighbour, then any repair and Bernoulli draws.
    ``stop(vals, states)`` may end the run early; it is checked after
    every event. ``max_time`` is honoured like the kernel's cutoff.
    """
    n, K, variant = sc.n, sc.K, sc.variant
    vals = list(sc.profile.sets)
    states = _ref_initial(variant, vals, K)
    rng = RandomStream(sc.seed)
    t = 0.0
    events = []
    while len(events) < max_events:
        t = t - math.log(1.0 - rng.random()) / n
        if t > sc.max_time:
            break
        i = rng.index(n)
        j = sample_neighbor(sc.graph, i, rng)
        sets = _ref_step(variant, K, vals, states, i, j, rng, ranking_step)
        events.append(ReferenceEvent(t, i, j, sets))
        if stop is not None and stop(vals, states):
            break
    return ReferenceRun(events, vals, states, _ref_readouts(variant, states))


# --- trace audit -------------------------------------------------------------

INVARIANTS = ("size-preservation", "log-consistency", "lyapunov", "x0-permanence",
              "projection-identity", "final-state", "encoding")


@dataclass
class AuditFailure:
    event: int
    invariant: str
    detail: str


@dataclass
class AuditReport:
    events: int
    failures: list = field(default_factory=list)
    tau_x: Optional[float] = None
    pair_times: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.failures

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def describe(self):
        if self.ok:
            return f"audit PASS over {self.events} events"
        f = self.first_failure
        return (f"audit FAIL at event {f.event}: {f.invariant} ({f.detail}); "
                f"{len(self.failures)} failure(s)")


class _ChainTracker:
    # counts of each mask and of "k without l" per ordered choice pair
    def __init__(self, K, sets):
        self.K = K
        self.masks = Counter()
        self.D = [[0] * K for _ in range(K)]
        for v in sets:
            self.add(v)

    def add(self, v, sign=1):
        self.masks[v] += sign
        if self.masks[v] == 0:
            del self.masks[v]
        for k in range(self.K):
            if v >> k & 1:
                for l in range(self.K):
                    if not v >> l & 1:
                        self.D[k][l] += sign

    def in_chain(self):
        return _is_chain(self.masks)

    def pair_converged(self, k, l):
        return self.D[k][l] == 0 or self.D[l][k] == 0


def _is_chain(masks):
    by_size = {}
    for v in masks:
        if v == 0:
            continue
        s = P.popcount(v)
        if s in by_size:
            return False
        by_size[s] = v
    prev = 0
    for s in sorted(by_size):
        if prev & ~by_size[s]:
            return False
        prev = by_size[s]
    return True


def audit_trace(traj, max_failures=100):
    """Replay a trajectory's event log and re-check every invariant per event."""
    log = traj.event_log
    if log is None:
        raise ConfigurationError("trajectory has no event log; run with log_events=True")
    K = traj.K
    vals = [int(v) for v in traj.initial_sets]
    tracker = _ChainTracker(K, vals)
    report = AuditReport(len(log))
    pairs = list(combinations(range(K), 2))
    pair_t = {p: (0.0 if tracker.pair_converged(*p) else None) for p in pairs}
    tau_x = 0.0 if tracker.in_chain() else None

    def fail(e, inv, detail):
        if len(report.failures) < max_failures:
            report.failures.append(AuditFailure(e, inv, detail))

    prev_t = 0.0
    for e in range(len(log)):
        t = float(log.times[e])
        i, j = (int(x) for x in log.pairs[e])
        oi, oj, ni, nj = (int(x) for x in log.sets[e])
        if (oi & oj) != (ni & nj) or (oi | oj) != (ni | nj):
            fail(e, "size-preservation", f"({oi:#x},{oj:#x}) -> ({ni:#x},{nj:#x})")
        if vals[i] != oi or vals[j] != oj or i == j or t < prev_t:
            fail(e, "log-consistency", f"nodes {i},{j} hold ({vals[i]:#x},{vals[j]:#x}), "
                 f"log says ({oi:#x},{oj:#x})")
        prev_t = t
        gain = (P.popcount(ni) ** 2 + P.popcount(nj) ** 2
                - P.popcount(oi) ** 2 - P.popcount(oj) ** 2)
        nested = P.is_subset(oi, oj) or P.is_subset(oj, oi)
        if (nested and gain != 0) or (not nested and gain <= 0):
            fail(e, "lyapunov", f"change {-gain} with nested={nested}")
        for v in (vals[i], vals[j]):
            tracker.add(v, -1)
        vals[i], vals[j] = ni, nj
        for v in (ni, nj):
            tracker.add(v)
        in_chain = tracker.in_chain()
        if tau_x is not None and not in_chain:
            fail(e, "x0-permanence", "left the convergence set")
        if tau_x is None and in_chain:
            tau_x = t
        for p in pairs:
            if pair_t[p] is None and tracker.pair_converged(*p):
                pair_t[p] = t
            elif pair_t[p] is not None and not tracker.pair_converged(*p):
                fail(e, "x0-permanence", f"projection {p} left its convergence set")

    report.tau_x = tau_x
    report.pair_times = pair_t
    end = len(log)
    if tau_x is not None:
        worst = max((x for x in pair_t.values() if x is not None), default=0.0)
        if any(x is None for x in pair_t.values()) or worst != tau_x:
            fail(end, "projection-identity", f"tau_x={tau_x}, pair times {pair_t}")
    elif all(x is not None for x in pair_t.values()) and pairs:
        fail(end, "projection-identity", "all projections converged but the chain did not")
    if not log.truncated:
        if traj.tau_x is not None and tau_x != traj.tau_x:
            fail(end, "projection-identity", f"replayed tau_x {tau_x} vs recorded {traj.tau_x}")
        recorded = {p: traj.tau_x_pairs.get(p) for p in pairs}
        if recorded != pair_t:
            fail(end, "projection-identity", f"replayed pair times {pair_t} vs {recorded}")
        if [int(v) for v in traj.final_sets] != vals:
            fail(end, "final-state", "replayed value sets differ from the trajectory's")
    if traj.violations.get("encoding", 0):
        fail(end, "encoding", f"{traj.violations['encoding']} compact/explicit mismatches")
    return report


# --- representation equivalence ----------------------------------------------

EQUIVALENCE_PAIRS = {
    "compact-ranking": "explicit-ranking",
    "explicit-ranking": "compact-ranking",
    "compact-voting": "explicit-voting",
}


@dataclass
class EquivalenceResult:
    status: str
    trials: int
    pair: tuple
    first_divergence: Optional[tuple] = None
    undecided_disagreements: int = 0
    message: str = ""

    @property
    def ok(self):
        return self.status == PASS

    def describe(self):
        line = f"{self.status} {self.pair[0]} vs {self.pair[1]} over {self.trials} trial(s)"
        if self.first_divergence:
            line += f"; first divergence seed={self.first_divergence[0]} " \
                    f"event={self.first_divergence[1]}: {self.first_divergence[2]}"
        return line


def _interactions(sc, rng):
    # time, ticking node and neighbour, drawn exactly as in reference_run
    n = sc.n
    t = 0.0
    while True:
        t = t - math.log(1.0 - rng.random()) / n
        if t > sc.max_time:
            return
        i = rng.index(n)
        yield t, i, sample_neighbor(sc.graph, i, rng)


def _voting_pair_trial(sc, max_events):
    # explicit (memory set, value set) against compact (leader, rest)
    K = sc.K
    full = P.full_set(K)
    obs = phase_observers("compact-voting", sc.profile)
    ex = [(1 << P.initial_voting_state(v).leader, v) for v in sc.profile.sets]
    cp = [P.initial_voting_state(v) for v in sc.profile.sets]
    r_ex, r_cp = RandomStream(sc.seed), RandomStream(sc.seed)
    driver = zip(range(max_events), _interactions(sc, r_ex), _interactions(sc, r_cp))
    for e, (_, i, j), (_, i2, j2) in driver:
        if (i, j) != (i2, j2):
            return e, f"interaction ({i},{j}) vs ({i2},{j2})"
        mi, vi, mj, vj = P.explicit_voting_step(*ex[i], *ex[j], K, r_ex)
        ex[i], ex[j] = (mi, vi), (mj, vj)
        cp[i], cp[j] = P.voting_step(cp[i], cp[j], K, r_cp)
        for node in (i, j):
            m, v = ex[node]
            s = cp[node]
            if (1 << s.leader) != m or s.value_set != v:
                return e, f"node {node}: explicit ({m:#x},{v:#x}) vs compact {tuple(s)}"
        if r_ex.consumed != r_cp.consumed:
            return e, "draw consumption differs"
        if _settled([s.leader for s in cp], obs.strict, obs.majority) \
                and _is_chain(Counter(v for _, v in ex)):
            break
    return None


def _settled(readouts, strict, target):
    if strict:
        return all(r == target for r in readouts)
    return readouts[0] is not None and all(r == readouts[0] for r in readouts)


def _ranking_pair_trial(sc, max_events, ranking_step):
    # ranking consumes no draws beyond the interaction itself, so one stream
    # drives both representations
    K = sc.K
    full = P.full_set(K)
    obs = phase_observers("compact-ranking", sc.profile)
    vals = list(sc.profile.sets)
    banks = [P.empty_bank(K) for _ in vals]
    cp = [P.initial_ranking_state(v, K) for v in vals]
    disagreements = 0
    driver = zip(range(max_events), _interactions(sc, RandomStream(sc.seed)))
    for e, (_, i, j) in driver:
        ni, nj = P.consolidate(vals[i], vals[j])
        vals[i], vals[j] = ni, nj
        banks[i], banks[j] = P.disseminate(banks[i], banks[j], ni, nj)
        cp[i], cp[j] = ranking_step(cp[i], cp[j])
        for node, v in ((i, ni), (j, nj)):
            if cp[node].prefix != (v or full):
                return (e, f"node {node}: explicit value set {v:#x} vs compact prefix "
                           f"{cp[node].prefix:#x}"), disagreements
            r = P.readout_ranking(banks[node])
            if r is not None and r != cp[node].order:
                disagreements += 1
        ex_read = [P.readout_ranking(b) for b in banks]
        cp_read = [s.order for s in cp]
        if _settled(ex_read, obs.strict, obs.ranking) and _settled(cp_read, obs.strict, obs.ranking):
            break
    ex_read = [P.readout_ranking(b) for b in banks]
    if ex_read != [s.order for s in cp]:
        return (e, "final readouts differ"), disagreements
    return None, disagreements


def equivalence_check(sc, trials=1, max_events=None, ranking_step=P.ranking_step):
    """Run an explicit and a compact representation on identical interactions and draws.

    Pairs: explicit-ranking with compact-ranking, and explicit voting (memory
    set plus value set under the compact rules) with compact-voting. The
    verdict is PASS when every node's value set agrees at every event (the
    compact empty-intersection token read as the full set) and the final
    readouts match. Seeds run from ``sc.seed`` to ``sc.seed + trials - 1``.

    Explicit ranking memories are allowed to disagree with the compact
    tuple before convergence; such events are counted in
    ``undecided_disagreements`` but do not fail the check.
    """
    if sc.variant not in EQUIVALENCE_PAIRS:
        raise ConfigurationError(f"no equivalence pair for {sc.variant!r}")
    if sc.variant in RANKING_VARIANTS:
        pair = ("explicit-ranking", "compact-ranking")
    else:
        pair = ("explicit-voting", "compact-voting")
    if max_events is None:
        max_events = 200_000 * max(1, sc.n // 10)
    result = EquivalenceResult(PASS, trials, pair)
    for k in range(trials):
        tsc = Scenario(sc.graph, sc.profile, sc.variant, sc.seed + k, sc.max_time)
        if pair[1] == "compact-voting":
            div = _voting_pair_trial(tsc, max_events)
        else:
            div, dis = _ranking_pair_trial(tsc, max_events, ranking_step)
            result.undecided_disagreements += dis
        if div is not None:
            result.status = FAIL
            result.first_divergence = (tsc.seed, div[0], div[1])
            return result
    return result


def compare_with_kernel(sc, traj):
    """Check a logged kernel trajectory against :func:`reference_run`.

    Returns ``None`` on agreement or a description of the first mismatch.
    """
    log = traj.event_log
    if log is None or log.truncated:
        raise ConfigurationError("need a complete event log")
    ref = reference_run(sc, len(log))
    if len(ref.events) != len(log):
        return f"reference stopped after {len(ref.events)} events, kernel logged {len(log)}"
    for e, ev in enumerate(ref.events):
        if ((ev.i, ev.j) != tuple(int(x) for x in log.pairs[e])
                or ev.sets != tuple(int(x) for x in log.sets[e])
                or ev.t != float(log.times[e])):
            return f"event {e}: reference {ev} vs kernel {log.pairs[e]} {log.sets[e]}"
    if ref.readouts != traj.readouts:
        return "final readouts differ"
    return None


def bad_pointer_ranking_step(s_i, s_j):
    """Ranking step that stores an empty intersection as pointer 1 (fault injection)."""
    K = len(s_i.order)
    pi, pj = s_i.prefix, s_j.prefix
    a1, a2 = pi & pj, pi | pj
    big = P.popcount(a2)
    small = P.popcount(a1) or 1
    oi = P._blocks(s_i.order, a1, a2)
    oj = P._blocks(s_j.order, a1, a2)
    if s_i.pointer <= s_j.pointer:
        return P.RankingState(oi, big), P.RankingState(oj, small)
    return P.RankingState(oi, small), P.RankingState(oj, big)


__all__ = [
    "PASS", "FAIL", "TIE_UNDEFINED", "Verdict", "model_check", "model_check_all",
    "strict_profiles", "StateCensus", "enumerate_states", "ReferenceRun",
    "reference_run", "AuditReport", "AuditFailure", "audit_trace",
    "EquivalenceResult", "equivalence_check", "compare_with_kernel",
    "bad_pointer_ranking_step",
]
