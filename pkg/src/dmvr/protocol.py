"""DMVR state machine: consolidation, memory dissemination, compact encodings.

Choices are the integers ``0 .. K-1``. A value set is an ``int`` bit mask with
bit ``k`` set when choice ``k`` is a member, so ``0`` is the empty set and
``(1 << K) - 1`` is the full choice set.

Everything here is a pure function of its arguments plus an explicit random
stream (any object with a ``random()`` method returning a uniform double).
Draws are consumed only at the documented points, which lets two
representations driven by the same stream stay in lock-step.
"""
import numbers
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidVoteError, UnsupportedKError

MAX_K = 16


def popcount(mask):
    return bin(mask).count("1")


def full_set(K):
    return (1 << K) - 1


def mask_of(choices):
    m = 0
    for c in choices:
        m |= 1 << c
    return m


def members(mask):
    """Choices in ``mask`` in increasing order."""
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def is_subset(a, b):
    return a & ~b == 0


# --- explicit representation -------------------------------------------------

def consolidate(v_i, v_j):
    """Union/intersection update of an interacting pair.

    The initiator ``i`` takes the union when ``|v_i| <= |v_j|``, otherwise the
    roles swap.
    """
    union, inter = v_i | v_j, v_i & v_j
    if popcount(v_i) <= popcount(v_j):
        return union, inter
    return inter, union


def empty_bank(K):
    return (0,) * K


def disseminate(bank_i, bank_j, v_i, v_j):
    """Write each new value set into the memory level matching its size."""
    return _write(bank_i, v_i), _write(bank_j, v_j)


def _write(bank, v):
    if v == 0:
        return bank
    level = popcount(v) - 1
    return bank[:level] + (v,) + bank[level + 1:]


def readout_ranking(bank):
    """Ranking ``(pi_1, ..., pi_K)`` from a memory bank, or ``None`` if undecided."""
    ranking = []
    prev = 0
    for k, level in enumerate(bank, 1):
        if popcount(level) != k or not is_subset(prev, level):
            return None
        ranking.append(members(level & ~prev)[0])
        prev = level
    return tuple(ranking)


def explicit_step(v_i, v_j, bank_i, bank_j):
    """One interaction of the explicit ranking representation."""
    vi, vj = consolidate(v_i, v_j)
    bi, bj = disseminate(bank_i, bank_j, vi, vj)
    return vi, vj, bi, bj


# --- compact voting ----------------------------------------------------------

class VotingState(NamedTuple):
    """Compact voting state: a leader choice and the rest of the value set."""
    leader: int
    rest: int

    @property
    def value_set(self):
        return self.rest | (1 << self.leader)

    @classmethod
    def from_sets(cls, leader, value_set):
        return cls(leader, value_set & ~(1 << leader))


def _repair(leader, v, rng):
    # leader stays while it is a member, otherwise one draw picks a member
    if v >> leader & 1:
        return leader
    opts = members(v)
    return opts[min(int(rng.random() * len(opts)), len(opts) - 1)]


def voting_step(s_i, s_j, K, rng):
    """Compact majority-voting interaction.

    Consolidates the implied value sets, replaces an empty intersection by
    the full choice set and repairs a leader that fell out of its value set.
    A draw is consumed only when a repair fires (``i`` first, then ``j``).
    """
    vi, vj = consolidate(s_i.value_set, s_j.value_set)
    full = full_set(K)
    vi = vi or full
    vj = vj or full
    li = _repair(s_i.leader, vi, rng)
    lj = _repair(s_j.leader, vj, rng)
    return VotingState.from_sets(li, vi), VotingState.from_sets(lj, vj)


def enhanced_step(s_i, s_j, K, rng):
    """Voting step followed by the Bernoulli leader copy.

    When both new value sets hold more than one choice, one draw decides the
    direction: below 0.5 node ``i`` adopts ``j``'s pre-interaction leader,
    otherwise ``j`` adopts ``i``'s. A copy that is not a member of the
    receiver's new value set is skipped so the compact encoding stays valid.
    """
    ni, nj = voting_step(s_i, s_j, K, rng)
    vi, vj = ni.value_set, nj.value_set
    if popcount(vi) > 1 and popcount(vj) > 1:
        if rng.random() < 0.5:
            if vi >> s_j.leader & 1:
                ni = VotingState.from_sets(s_j.leader, vi)
        elif vj >> s_i.leader & 1:
            nj = VotingState.from_sets(s_i.leader, vj)
    return ni, nj


def readout_majority(s):
    return s.leader


# --- explicit voting with the compact rules ----------------------------------

def explicit_voting_step(m_i, v_i, m_j, v_j, K, rng):
    """Voting rules on an explicit ``(memory set, value set)`` pair per node.

    Same rules as :func:`voting_step`, stated on sets instead of the
    ``(leader, rest)`` encoding; memories are singleton masks.
    """
    vi, vj = consolidate(v_i, v_j)
    full = full_set(K)
    if vi == 0:
        vi = full
    if vj == 0:
        vj = full
    if not is_subset(m_i, vi):
        opts = members(vi)
        m_i = 1 << opts[min(int(rng.random() * len(opts)), len(opts) - 1)]
    if not is_subset(m_j, vj):
        opts = members(vj)
        m_j = 1 << opts[min(int(rng.random() * len(opts)), len(opts) - 1)]
    return m_i, vi, m_j, vj


# --- compact ranking ---------------------------------------------------------

class RankingState(NamedTuple):
    """Compact ranking state: an ordering of all choices and a 1-based pointer."""
    order: tuple
    pointer: int

    @property
    def prefix(self):
        return mask_of(self.order[:self.pointer])


def _blocks(order, a1, a2):
    first = [c for c in order if a1 >> c & 1]
    mid = [c for c in order if a2 >> c & 1 and not a1 >> c & 1]
    last = [c for c in order if not a2 >> c & 1]
    return tuple(first + mid + last)


def ranking_step(s_i, s_j):
    """Compact ranking interaction.

    Both nodes reorder their tuples into the intersection block, the rest of
    the union, then everything else, each keeping its own relative order. The
    node with the smaller-or-equal pointer receives ``|union|``; the other
    receives ``|intersection|``, with an empty intersection stored as ``K``.
    """
    K = len(s_i.order)
    pi, pj = s_i.prefix, s_j.prefix
    a1, a2 = pi & pj, pi | pj
    big = popcount(a2)
    small = popcount(a1) or K
    oi = _blocks(s_i.order, a1, a2)
    oj = _blocks(s_j.order, a1, a2)
    if s_i.pointer <= s_j.pointer:
        return RankingState(oi, big), RankingState(oj, small)
    return RankingState(oi, small), RankingState(oj, big)


def readout_ranking_compact(s):
    return tuple(s.order)


# --- initial states and vote profiles ----------------------------------------

def initial_voting_state(v0):
    """Leader is the smallest member of the initial vote set; the rest follows."""
    leader = members(v0)[0]
    return VotingState.from_sets(leader, v0)


def initial_ranking_state(v0, K):
    """Own votes first (ascending), other choices after them (ascending)."""
    own = members(v0)
    others = [c for c in range(K) if not v0 >> c & 1]
    return RankingState(tuple(own + others), len(own))


@dataclass(frozen=True)
class VoteProfile:
    """Initial value set of every node plus the derived vote counts."""
    sets: tuple
    K: int

    @property
    def n(self):
        return len(self.sets)

    @property
    def counts(self):
        return tuple(sum(1 for v in self.sets if v >> k & 1) for k in range(self.K))

    @property
    def fractions(self):
        return tuple(c / self.n for c in self.counts)

    @property
    def ranking(self):
        """Choices by decreasing count; equal counts fall back to index order."""
        counts = self.counts
        return tuple(sorted(range(self.K), key=lambda k: (-counts[k], k)))

    @property
    def majority(self):
        return self.ranking[0]

    @property
    def strict(self):
        """All counts positive and pairwise distinct."""
        counts = self.counts
        return min(counts) > 0 and len(set(counts)) == self.K

    @property
    def majority_unique(self):
        counts = sorted(self.counts, reverse=True)
        return self.K == 1 or counts[0] > counts[1]

    def target_prefixes(self):
        """Level-``k`` masks of the correct ranking, ``k = 1 .. K``."""
        out = []
        m = 0
        for c in self.ranking:
            m |= 1 << c
            out.append(m)
        return tuple(out)


def init_profile(votes, K):
    """Build a profile; each entry is one choice index or a collection of them."""
    if K < 1 or K > MAX_K:
        raise UnsupportedKError(f"K must be in 1..{MAX_K}, got {K}")
    sets = []
    for i, vote in enumerate(votes):
        choices = [int(vote)] if isinstance(vote, numbers.Integral) else [int(c) for c in vote]
        if not choices:
            raise InvalidVoteError(f"node {i} has an empty vote")
        for c in choices:
            if not 0 <= c < K:
                raise InvalidVoteError(f"node {i} votes for {c}, outside 0..{K - 1}")
        sets.append(mask_of(choices))
    if not sets:
        raise InvalidVoteError("profile has no nodes")
    return VoteProfile(tuple(sets), K)
