"""Compiled event loop for the simulator.

The rules here mirror :mod:`dmvr.protocol` on flat arrays; the test-suite
replays kernel runs through the reference functions and compares states.

Array conventions
-----------------
``vals``      explicit value sets (empty set allowed), maintained for every
              variant; observers only look at these.
``cvals``     compact voting value sets (empty replaced by the full set).
``leader``    compact voting leaders.
``order``     ``(n, K)`` compact ranking tuples; ``pointer`` their pointers.
``bank``      ``(n, K)`` explicit memory levels.

Scalar slots live in ``fs`` (floats) and ``ist`` (ints); see the ``F_*`` and
``I_*`` constants.
"""
import numpy as np
from numba import njit

EXPLICIT_RANKING = 0
COMPACT_VOTING = 1
COMPACT_RANKING = 2
ENHANCED_VOTING = 3

NEED_DRAWS = 0
DONE = 1
CUTOFF = 2
LOG_FULL = 3

DRAWS_PER_EVENT = 6

F_TIME, F_TAU1, F_TAUX, F_TAUP, F_TMEM1, F_MAXTIME = range(6)
N_F = 6

(I_EVENTS, I_NBAD, I_NCORRECT, I_NMEM1, I_NMINORITY, I_LYAP, I_X0VIOL,
 I_LYAPVIOL, I_ENCVIOL, I_NSAMPLES, I_LOGCOUNT, I_INX0, I_STRICT, I_LOG,
 I_TOP, I_MINORITY) = range(16)
N_I = 16


@njit(cache=True)
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def nth_member(mask, idx):
    k = 0
    while True:
        if mask >> k & 1:
            if idx == 0:
                return k
            idx -= 1
        k += 1


@njit(cache=True)
def consolidate(a, b):
    if popcount(a) <= popcount(b):
        return a | b, a & b
    return a & b, a | b


@njit(cache=True, inline='always')
def _pick(mask, u):
    c = popcount(mask)
    idx = int(u * c)
    if idx >= c:
        idx = c - 1
    return nth_member(mask, idx)


# --- observer bookkeeping ------------------------------------------------------

@njit(cache=True, inline='always')
def _remove(m, K, mask_count, size_distinct, size_total, size_sum, D, ist):
    mask_count[m] -= 1
    if m == 0:
        return
    s = popcount(m)
    if mask_count[m] == 0:
        size_distinct[s] -= 1
        if size_distinct[s] == 1:
            ist[I_NBAD] -= 1
    size_total[s] -= 1
    size_sum[s] -= m
    for k in range(K):
        if m >> k & 1:
            for l in range(K):
                if not m >> l & 1:
                    D[k, l] -= 1


@njit(cache=True, inline='always')
def _add(m, K, mask_count, size_distinct, size_total, size_sum, D, ist):
    mask_count[m] += 1
    if m == 0:
        return
    s = popcount(m)
    if mask_count[m] == 1:
        size_distinct[s] += 1
        if size_distinct[s] == 2:
            ist[I_NBAD] += 1
    size_total[s] += 1
    size_sum[s] += m
    for k in range(K):
        if m >> k & 1:
            for l in range(K):
                if not m >> l & 1:
                    D[k, l] += 1


@njit(cache=True, inline='always')
def _chain(K, size_total, size_sum, ist):
    # one distinct mask per size is guaranteed when NBAD == 0
    if ist[I_NBAD] != 0:
        return False
    prev = 0
    for s in range(1, K + 1):
        if size_total[s] > 0:
            rep = size_sum[s] // size_total[s]
            if prev & ~rep:
                return False
            prev = rep
    return True


@njit(cache=True, inline='always')
def _node_correct(variant, i, K, leader, order, bank, ranking, targets, top):
    if variant == COMPACT_VOTING or variant == ENHANCED_VOTING:
        return leader[i] == top
    if variant == COMPACT_RANKING:
        for k in range(K):
            if order[i, k] != ranking[k]:
                return False
        return True
    for k in range(K):
        if bank[i, k] != targets[k]:
            return False
    return True


@njit(cache=True, inline='always')
def _node_mem1(variant, i, leader, order, bank, top):
    if variant == COMPACT_VOTING or variant == ENHANCED_VOTING:
        return leader[i] == top
    if variant == COMPACT_RANKING:
        return order[i, 0] == top
    return bank[i, 0] == (1 << top)


@njit(cache=True, inline='always')
def _agreement(variant, n, K, leader, order, bank):
    for i in range(1, n):
        if variant == COMPACT_VOTING or variant == ENHANCED_VOTING:
            if leader[i] != leader[0]:
                return False
        elif variant == COMPACT_RANKING:
            for k in range(K):
                if order[i, k] != order[0, k]:
                    return False
        else:
            for k in range(K):
                if bank[i, k] != bank[0, k]:
                    return False
    if variant == EXPLICIT_RANKING:
        prev = 0
        for k in range(K):
            m = bank[0, k]
            if popcount(m) != k + 1 or prev & ~m:
                return False
            prev = m
    return True


@njit(cache=True, inline='always')
def _refresh(variant, i, K, leader, order, bank, ranking, targets, correct, mem1, ist):
    top = ist[I_TOP]
    c = _node_correct(variant, i, K, leader, order, bank, ranking, targets, top)
    if c != correct[i]:
        ist[I_NCORRECT] += 1 if c else -1
        correct[i] = c
    m1 = _node_mem1(variant, i, leader, order, bank, top)
    if m1 != mem1[i]:
        ist[I_NMEM1] += 1 if m1 else -1
        mem1[i] = m1


@njit(cache=True, inline='always')
def _phase_checks(variant, n, K, t, leader, order, bank, size_total, size_sum,
                  D, tau_pair, fs, ist):
    in_x0 = _chain(K, size_total, size_sum, ist)
    if ist[I_INX0] and not in_x0:
        ist[I_X0VIOL] += 1
    ist[I_INX0] = 1 if in_x0 else 0
    for k in range(K):
        for l in range(k + 1, K):
            if tau_pair[k, l] < 0.0 and (D[k, l] == 0 or D[l, k] == 0):
                tau_pair[k, l] = t
                tau_pair[l, k] = t
    if fs[F_TAUX] < 0.0 and in_x0:
        fs[F_TAUX] = t
    if K == 2:
        if fs[F_TAU1] < 0.0 and ist[I_NMINORITY] == 0:
            fs[F_TAU1] = t
        if fs[F_TAU1] >= 0.0 and fs[F_TMEM1] < 0.0 and ist[I_NMEM1] == n:
            fs[F_TMEM1] = t
    if fs[F_TAUX] >= 0.0 and fs[F_TAUP] < 0.0:
        if ist[I_STRICT]:
            if ist[I_NCORRECT] == n:
                fs[F_TAUP] = t
        elif _agreement(variant, n, K, leader, order, bank):
            fs[F_TAUP] = t
    done = fs[F_TAUX] >= 0.0 and fs[F_TAUP] >= 0.0
    if K == 2 and ist[I_STRICT]:
        done = done and fs[F_TMEM1] >= 0.0
    return done


def _build(variant):
    # ``variant`` is frozen into each closure so untaken branches compile away

    @njit(cache=True)
    def init_observers(n, K, vals, leader, order, bank, ranking, targets,
                       mask_count, size_distinct, size_total, size_sum, D, tau_pair,
                       correct, mem1, lyap_t, lyap_v, fs, ist):
        sumsq = 0
        minority = ist[I_MINORITY]
        for i in range(n):
            _add(vals[i], K, mask_count, size_distinct, size_total, size_sum, D, ist)
            s = popcount(vals[i])
            sumsq += s * s
            if K == 2 and vals[i] == minority:
                ist[I_NMINORITY] += 1
            _refresh(variant, i, K, leader, order, bank, ranking, targets, correct, mem1, ist)
        ist[I_LYAP] = n * K * K - sumsq
        lyap_t[0] = 0.0
        lyap_v[0] = ist[I_LYAP]
        ist[I_NSAMPLES] = 1
        return _phase_checks(variant, n, K, 0.0, leader, order, bank, size_total,
                             size_sum, D, tau_pair, fs, ist)

    @njit(cache=True)
    def run_events(n, K, indptr, indices, buf, pos,
                   vals, cvals, leader, order, pointer, bank, ranking, targets,
                   mask_count, size_distinct, size_total, size_sum, D, tau_pair,
                   correct, mem1, lyap_t, lyap_v,
                   log_t, log_ij, log_sets, fs, ist, scratch):
        """Advance the simulation; returns ``(status, new_pos)``."""
        full = (1 << K) - 1
        nbuf = buf.shape[0]
        minority = ist[I_MINORITY]
        logging = ist[I_LOG] != 0
        cap = log_t.shape[0]
        while True:
            if pos + DRAWS_PER_EVENT > nbuf:
                return NEED_DRAWS, pos
            if logging and ist[I_LOGCOUNT] >= cap:
                return LOG_FULL, pos

            t = fs[F_TIME] - np.log(1.0 - buf[pos]) / n
            pos += 1
            if t > fs[F_MAXTIME]:
                fs[F_TIME] = fs[F_MAXTIME]
                return CUTOFF, pos
            fs[F_TIME] = t
            i = int(buf[pos] * n)
            pos += 1
            if i >= n:
                i = n - 1
            deg = indptr[i + 1] - indptr[i]
            k = int(buf[pos] * deg)
            pos += 1
            if k >= deg:
                k = deg - 1
            j = indices[indptr[i] + k]

            oi = vals[i]
            oj = vals[j]
            ni, nj = consolidate(oi, oj)
            vals[i] = ni
            vals[j] = nj

            if variant == EXPLICIT_RANKING:
                if ni:
                    bank[i, popcount(ni) - 1] = ni
                if nj:
                    bank[j, popcount(nj) - 1] = nj
            elif variant == COMPACT_VOTING or variant == ENHANCED_VOTING:
                li = leader[i]
                lj = leader[j]
                a, b = consolidate(cvals[i], cvals[j])
                if a == 0:
                    a = full
                if b == 0:
                    b = full
                nli = li
                nlj = lj
                if not a >> li & 1:
                    nli = _pick(a, buf[pos])
                    pos += 1
                if not b >> lj & 1:
                    nlj = _pick(b, buf[pos])
                    pos += 1
                if variant == ENHANCED_VOTING and popcount(a) > 1 and popcount(b) > 1:
                    u = buf[pos]
                    pos += 1
                    if u < 0.5:
                        if a >> lj & 1:
                            nli = lj
                    elif b >> li & 1:
                        nlj = li
                cvals[i] = a
                cvals[j] = b
                leader[i] = nli
                leader[j] = nlj
                if a != (ni if ni else full) or b != (nj if nj else full):
                    ist[I_ENCVIOL] += 1
            else:
                pi_ = 0
                for q in range(pointer[i]):
                    pi_ |= 1 << order[i, q]
                pj_ = 0
                for q in range(pointer[j]):
                    pj_ |= 1 << order[j, q]
                a1 = pi_ & pj_
                a2 = pi_ | pj_
                big = popcount(a2)
                small = popcount(a1)
                if small == 0:
                    small = K
                for node in (i, j):
                    w = 0
                    for q in range(K):
                        c = order[node, q]
                        if a1 >> c & 1:
                            scratch[w] = c
                            w += 1
                    for q in range(K):
                        c = order[node, q]
                        if a2 >> c & 1 and not a1 >> c & 1:
                            scratch[w] = c
                            w += 1
                    for q in range(K):
                        c = order[node, q]
                        if not a2 >> c & 1:
                            scratch[w] = c
                            w += 1
                    for q in range(K):
                        order[node, q] = scratch[q]
                if pointer[i] <= pointer[j]:
                    pointer[i] = big
                    pointer[j] = small
                else:
                    pointer[i] = small
                    pointer[j] = big
                for node, shadow in ((i, ni), (j, nj)):
                    if shadow:
                        pm = 0
                        for q in range(pointer[node]):
                            pm |= 1 << order[node, q]
                        if pm != shadow:
                            ist[I_ENCVIOL] += 1
                    elif pointer[node] != K:
                        ist[I_ENCVIOL] += 1

            ist[I_EVENTS] += 1
            if logging:
                c = ist[I_LOGCOUNT]
                log_t[c] = t
                log_ij[c, 0] = i
                log_ij[c, 1] = j
                log_sets[c, 0] = oi
                log_sets[c, 1] = oj
                log_sets[c, 2] = ni
                log_sets[c, 3] = nj
                ist[I_LOGCOUNT] = c + 1

            changed = not ((ni == oi and nj == oj) or (ni == oj and nj == oi))
            if changed:
                for m in (oi, oj):
                    _remove(m, K, mask_count, size_distinct, size_total, size_sum, D, ist)
                for m in (ni, nj):
                    _add(m, K, mask_count, size_distinct, size_total, size_sum, D, ist)
                if K == 2:
                    ist[I_NMINORITY] += ((ni == minority) + (nj == minority)
                                         - (oi == minority) - (oj == minority))
            si, sj, ti, tj = popcount(oi), popcount(oj), popcount(ni), popcount(nj)
            dv = si * si + sj * sj - ti * ti - tj * tj
            nested = (oi & ~oj) == 0 or (oj & ~oi) == 0
            if (nested and dv != 0) or (not nested and dv >= 0):
                ist[I_LYAPVIOL] += 1
            if dv != 0:
                ist[I_LYAP] += dv
                c = ist[I_NSAMPLES]
                if c < lyap_t.shape[0]:
                    lyap_t[c] = t
                    lyap_v[c] = ist[I_LYAP]
                    ist[I_NSAMPLES] = c + 1

            _refresh(variant, i, K, leader, order, bank, ranking, targets, correct, mem1, ist)
            _refresh(variant, j, K, leader, order, bank, ranking, targets, correct, mem1, ist)
            if _phase_checks(variant, n, K, t, leader, order, bank, size_total,
                             size_sum, D, tau_pair, fs, ist):
                return DONE, pos

    return init_observers, run_events


_CACHE = {}


def kernels(variant):
    """``(init_observers, run_events)`` specialised for one variant code."""
    if variant not in _CACHE:
        _CACHE[variant] = _build(variant)
    return _CACHE[variant]
