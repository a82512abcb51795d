"""Conflict-driven clause-learning SAT core.

Everything lives in flat numpy arrays so the search loop can be compiled
with numba; with RADOSAT_NO_NUMBA=1 the identical code runs interpreted.

Literal encoding: variable v in [0, nv) has positive literal 2v and negative
literal 2v+1; lit ^ 1 negates. Watch lists are intrusive linked lists over
watch slots (clause id, slot in {0, 1}) encoded as 2*clause + slot.
"""

from __future__ import annotations

import numpy as np

from .._jit import maybe_njit, monotonic_seconds

STATUS_UNSAT = 0
STATUS_SAT = 1
STATUS_UNKNOWN = 2

VAR_DECAY = 0.95
RESTART_BASE = 128
LBD_KEEP = 3


@maybe_njit
def _luby(x):
    size = 1
    seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x = x % size
    return 1 << seq


@maybe_njit
def _heap_up(heap, pos, act, i):
    v = heap[i]
    a = act[v]
    while i > 0:
        parent = (i - 1) >> 1
        pv = heap[parent]
        if act[pv] >= a:
            break
        heap[i] = pv
        pos[pv] = i
        i = parent
    heap[i] = v
    pos[v] = i


@maybe_njit
def _heap_down(heap, pos, act, i, size):
    v = heap[i]
    a = act[v]
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        right = left + 1
        child = left
        if right < size and act[heap[right]] > act[heap[left]]:
            child = right
        cv = heap[child]
        if act[cv] <= a:
            break
        heap[i] = cv
        pos[cv] = i
        i = child
    heap[i] = v
    pos[v] = i


@maybe_njit
def _heap_insert(heap, pos, act, size, v):
    if pos[v] >= 0:
        return size
    heap[size] = v
    pos[v] = size
    _heap_up(heap, pos, act, size)
    return size + 1


@maybe_njit
def _heap_pop(heap, pos, act, size):
    v = heap[0]
    pos[v] = -1
    size -= 1
    if size > 0:
        heap[0] = heap[size]
        pos[heap[0]] = 0
        _heap_down(heap, pos, act, 0, size)
    return v, size


@maybe_njit
def _grow_i32(arr, need):
    cap = arr.size
    while cap < need:
        cap *= 2
    out = np.empty(cap, np.int32)
    out[: arr.size] = arr
    return out


@maybe_njit
def _grow_i64(arr, need):
    cap = arr.size
    while cap < need:
        cap *= 2
    out = np.empty(cap, np.int64)
    out[: arr.size] = arr
    return out


@maybe_njit
def cdcl_solve(nv, in_lits, in_starts, deadline, max_conflicts):
    """Decide satisfiability of the clause set over nv variables.

    in_lits: internally encoded literals of all clauses, concatenated.
    in_starts: clause boundaries (len = #clauses + 1).
    deadline: wall-clock limit from monotonic_seconds(), or inf.
    max_conflicts: conflict budget, or -1 for unlimited.

    Returns (status, model, stats) with stats =
    [conflicts, decisions, propagations, restarts, learned].
    """
    n_in = in_starts.size - 1

    # clause arena
    ca = np.empty(max(1024, in_lits.size * 2), np.int32)
    arena_top = 0
    ccap = max(1024, n_in * 2)
    c_start = np.empty(ccap, np.int64)
    c_len = np.empty(ccap, np.int32)
    c_lbd = np.empty(ccap, np.int32)
    n_cl = 0

    head = np.full(2 * nv, -1, np.int64)
    nxt = np.empty(2 * ccap, np.int64)

    assigns = np.full(nv, -1, np.int8)
    var_level = np.zeros(nv, np.int32)
    reason = np.full(nv, -1, np.int64)
    trail = np.empty(nv, np.int32)
    trail_len = 0
    qhead = 0
    dl = 0

    activity = np.zeros(nv, np.float64)
    heap = np.empty(nv, np.int32)
    heap_pos = np.full(nv, -1, np.int32)
    heap_size = 0
    polarity = np.zeros(nv, np.int8)
    var_inc = 1.0

    seen = np.zeros(nv, np.uint8)
    lvl_stamp = np.full(nv + 1, -1, np.int64)
    learnt_buf = np.empty(nv + 1, np.int32)

    model = np.zeros(nv, np.uint8)
    stats = np.zeros(5, np.int64)

    for v in range(nv):
        heap[v] = v
        heap_pos[v] = v
    heap_size = nv

    # load input clauses; units go straight onto the level-0 trail
    for c in range(n_in):
        s = in_starts[c]
        ln = in_starts[c + 1] - s
        if ln == 0:
            return STATUS_UNSAT, model, stats
        if ln == 1:
            lit = in_lits[s]
            v = lit >> 1
            want = np.int8(1 - (lit & 1))
            if assigns[v] == -1:
                assigns[v] = want
                var_level[v] = 0
                trail[trail_len] = lit
                trail_len += 1
            elif assigns[v] != want:
                return STATUS_UNSAT, model, stats
            continue
        if arena_top + ln > ca.size:
            ca = _grow_i32(ca, arena_top + ln)
        if n_cl + 1 > c_start.size:
            c_start = _grow_i64(c_start, n_cl + 1)
            c_len = _grow_i32(c_len, n_cl + 1)
            c_lbd = _grow_i32(c_lbd, n_cl + 1)
            nxt = _grow_i64(nxt, 2 * (n_cl + 1))
        for j in range(ln):
            ca[arena_top + j] = in_lits[s + j]
        c_start[n_cl] = arena_top
        c_len[n_cl] = ln
        c_lbd[n_cl] = 0
        e0 = 2 * n_cl
        nxt[e0] = head[ca[arena_top]]
        head[ca[arena_top]] = e0
        nxt[e0 + 1] = head[ca[arena_top + 1]]
        head[ca[arena_top + 1]] = e0 + 1
        arena_top += ln
        n_cl += 1

    n_orig = n_cl
    max_learnts = max(5000, n_orig // 3)
    restart_idx = 1
    restart_limit = RESTART_BASE * _luby(restart_idx)
    conflicts_since_restart = 0
    stamp = 0

    while True:
        # ---------------- propagation ----------------
        confl = np.int64(-1)
        while qhead < trail_len:
            p = trail[qhead]
            qhead += 1
            stats[2] += 1
            fl = p ^ 1
            e = head[fl]
            prev = np.int64(-1)
            while e != -1:
                c = e >> 1
                slot = e & 1
                st = c_start[c]
                ne = nxt[e]
                other = ca[st + (1 - slot)]
                ov = other >> 1
                oa = assigns[ov]
                if oa != -1 and (oa ^ (other & 1)) == 1:
                    prev = e
                    e = ne
                    continue
                moved = False
                ln = c_len[c]
                for j in range(2, ln):
                    q2 = ca[st + j]
                    v2 = q2 >> 1
                    a2 = assigns[v2]
                    if a2 == -1 or (a2 ^ (q2 & 1)) == 1:
                        ca[st + slot] = q2
                        ca[st + j] = fl
                        if prev == -1:
                            head[fl] = ne
                        else:
                            nxt[prev] = ne
                        nxt[e] = head[q2]
                        head[q2] = e
                        moved = True
                        break
                if moved:
                    e = ne
                    continue
                if oa != -1:
                    # other is false: conflict
                    confl = c
                    break
                assigns[ov] = np.int8(1 - (other & 1))
                var_level[ov] = dl
                reason[ov] = c
                trail[trail_len] = other
                trail_len += 1
                prev = e
                e = ne
            if confl != -1:
                break

        if confl != -1:
            # ---------------- conflict ----------------
            stats[0] += 1
            conflicts_since_restart += 1
            if dl == 0:
                return STATUS_UNSAT, model, stats
            # first-UIP learning
            path_c = 0
            p = np.int32(-1)
            nlearnt = 1
            idx = trail_len - 1
            cl = confl
            while True:
                st = c_start[cl]
                for j in range(c_len[cl]):
                    q = ca[st + j]
                    if p != -1 and q == p:
                        continue
                    v = q >> 1
                    if seen[v] == 0 and var_level[v] > 0:
                        seen[v] = 1
                        activity[v] += var_inc
                        if activity[v] > 1e100:
                            for w in range(nv):
                                activity[w] *= 1e-100
                            var_inc *= 1e-100
                        if heap_pos[v] >= 0:
                            _heap_up(heap, heap_pos, activity, heap_pos[v])
                        if var_level[v] >= dl:
                            path_c += 1
                        else:
                            learnt_buf[nlearnt] = q
                            nlearnt += 1
                while seen[trail[idx] >> 1] == 0:
                    idx -= 1
                p = trail[idx]
                idx -= 1
                v = p >> 1
                cl = reason[v]
                seen[v] = 0
                path_c -= 1
                if path_c <= 0:
                    break
            learnt_buf[0] = p ^ 1
            # cheap self-subsumption: drop tail literals whose reason is
            # fully covered by the rest of the learnt clause
            kept = 1
            for i in range(1, nlearnt):
                q = learnt_buf[i]
                v = q >> 1
                r = reason[v]
                redundant = False
                if r != -1:
                    redundant = True
                    rs = c_start[r]
                    for j in range(c_len[r]):
                        u = ca[rs + j]
                        uv = u >> 1
                        if uv == v:
                            continue
                        if seen[uv] == 0 and var_level[uv] > 0:
                            redundant = False
                            break
                if redundant:
                    seen[v] = 0
                else:
                    learnt_buf[kept] = q
                    kept += 1
            nlearnt = kept
            # backtrack level and LBD
            bt = 0
            if nlearnt > 1:
                mi = 1
                for i in range(2, nlearnt):
                    if var_level[learnt_buf[i] >> 1] > var_level[learnt_buf[mi] >> 1]:
                        mi = i
                tmp = learnt_buf[1]
                learnt_buf[1] = learnt_buf[mi]
                learnt_buf[mi] = tmp
                bt = var_level[learnt_buf[1] >> 1]
            stamp += 1
            lbd = 0
            for i in range(nlearnt):
                lv = var_level[learnt_buf[i] >> 1]
                if lvl_stamp[lv] != stamp:
                    lvl_stamp[lv] = stamp
                    lbd += 1
            for i in range(1, nlearnt):
                seen[learnt_buf[i] >> 1] = 0
            # backtrack: pop strictly-deeper literals
            while trail_len > 0 and var_level[trail[trail_len - 1] >> 1] > bt:
                lv2 = trail[trail_len - 1] >> 1
                polarity[lv2] = assigns[lv2]
                assigns[lv2] = -1
                reason[lv2] = -1
                heap_size = _heap_insert(heap, heap_pos, activity, heap_size, lv2)
                trail_len -= 1
            qhead = trail_len
            dl = bt
            # install learnt clause and assert its first literal
            alit = learnt_buf[0]
            av = alit >> 1
            if nlearnt == 1:
                assigns[av] = np.int8(1 - (alit & 1))
                var_level[av] = 0
                reason[av] = -1
                trail[trail_len] = alit
                trail_len += 1
            else:
                if arena_top + nlearnt > ca.size:
                    ca = _grow_i32(ca, arena_top + nlearnt)
                if n_cl + 1 > c_start.size:
                    c_start = _grow_i64(c_start, n_cl + 1)
                    c_len = _grow_i32(c_len, n_cl + 1)
                    c_lbd = _grow_i32(c_lbd, n_cl + 1)
                    nxt = _grow_i64(nxt, 2 * (n_cl + 1))
                for j in range(nlearnt):
                    ca[arena_top + j] = learnt_buf[j]
                c_start[n_cl] = arena_top
                c_len[n_cl] = nlearnt
                c_lbd[n_cl] = lbd
                e0 = 2 * n_cl
                nxt[e0] = head[ca[arena_top]]
                head[ca[arena_top]] = e0
                nxt[e0 + 1] = head[ca[arena_top + 1]]
                head[ca[arena_top + 1]] = e0 + 1
                arena_top += nlearnt
                n_cl += 1
                stats[4] += 1
                assigns[av] = np.int8(1 - (alit & 1))
                var_level[av] = dl
                reason[av] = n_cl - 1
                trail[trail_len] = alit
                trail_len += 1
            var_inc *= 1.0 / VAR_DECAY
            if max_conflicts >= 0 and stats[0] >= max_conflicts:
                return STATUS_UNKNOWN, model, stats
            if stats[0] % 1024 == 0:
                if deadline < 1e300 and monotonic_seconds() > deadline:
                    return STATUS_UNKNOWN, model, stats
            continue

        # ---------------- no conflict ----------------
        if trail_len == nv:
            for v in range(nv):
                model[v] = assigns[v]
            return STATUS_SAT, model, stats

        if conflicts_since_restart >= restart_limit:
            # restart (and possibly shrink the learnt database)
            while trail_len > 0 and var_level[trail[trail_len - 1] >> 1] > 0:
                lv2 = trail[trail_len - 1] >> 1
                polarity[lv2] = assigns[lv2]
                assigns[lv2] = -1
                reason[lv2] = -1
                heap_size = _heap_insert(heap, heap_pos, activity, heap_size, lv2)
                trail_len -= 1
            qhead = 0
            dl = 0
            stats[3] += 1
            restart_idx += 1
            restart_limit = RESTART_BASE * _luby(restart_idx)
            conflicts_since_restart = 0

            n_learnt = n_cl - n_orig
            if n_learnt >= max_learnts:
                # level-0 simplification + LBD-based reduction, then a full
                # rebuild of the arena and watch lists
                for t in range(trail_len):
                    reason[trail[t] >> 1] = -1
                lbds = np.empty(n_learnt, np.int32)
                for i in range(n_learnt):
                    lbds[i] = c_lbd[n_orig + i]
                order = np.argsort(lbds, kind="mergesort")
                keep_learnt = np.zeros(n_learnt, np.uint8)
                budget = n_learnt // 2
                taken = 0
                for oi in range(n_learnt):
                    i = order[oi]
                    if lbds[i] <= LBD_KEEP or taken < budget:
                        keep_learnt[i] = 1
                        taken += 1
                new_ca = np.empty(ca.size, np.int32)
                new_top = 0
                new_start = np.empty(c_start.size, np.int64)
                new_len = np.empty(c_len.size, np.int32)
                new_lbd = np.empty(c_lbd.size, np.int32)
                new_n = 0
                new_orig = 0
                failed = False
                for c in range(n_cl):
                    if c >= n_orig and keep_learnt[c - n_orig] == 0:
                        continue
                    st = c_start[c]
                    ln = c_len[c]
                    sat0 = False
                    wl = 0
                    for j in range(ln):
                        q = ca[st + j]
                        a = assigns[q >> 1]
                        if a == -1:
                            new_ca[new_top + wl] = q
                            wl += 1
                        elif (a ^ (q & 1)) == 1:
                            sat0 = True
                            break
                    if sat0:
                        continue
                    if wl == 0:
                        failed = True
                        break
                    if wl == 1:
                        lit = new_ca[new_top]
                        v = lit >> 1
                        want = np.int8(1 - (lit & 1))
                        if assigns[v] == -1:
                            assigns[v] = want
                            var_level[v] = 0
                            reason[v] = -1
                            trail[trail_len] = lit
                            trail_len += 1
                        elif assigns[v] != want:
                            failed = True
                            break
                        continue
                    new_start[new_n] = new_top
                    new_len[new_n] = wl
                    new_lbd[new_n] = c_lbd[c] if c >= n_orig else 0
                    new_top += wl
                    if c < n_orig:
                        new_orig += 1
                    new_n += 1
                if failed:
                    return STATUS_UNSAT, model, stats
                # learnt clauses that survived but came before a removed one
                # keep their relative order; original clauses stay in front
                ca = new_ca
                arena_top = new_top
                c_start = new_start
                c_len = new_len
                c_lbd = new_lbd
                n_cl = new_n
                n_orig = new_orig
                for lidx in range(2 * nv):
                    head[lidx] = -1
                for c in range(n_cl):
                    st = c_start[c]
                    e0 = 2 * c
                    nxt[e0] = head[ca[st]]
                    head[ca[st]] = e0
                    nxt[e0 + 1] = head[ca[st + 1]]
                    head[ca[st + 1]] = e0 + 1
                max_learnts = (max_learnts * 11) // 10
                qhead = 0
            continue

        # decision
        picked = np.int32(-1)
        while heap_size > 0:
            v, heap_size = _heap_pop(heap, heap_pos, activity, heap_size)
            if assigns[v] == -1:
                picked = v
                break
        if picked == -1:
            for v in range(nv):
                model[v] = assigns[v]
            return STATUS_SAT, model, stats
        stats[1] += 1
        dl += 1
        lit = 2 * picked + (0 if polarity[picked] == 1 else 1)
        assigns[picked] = np.int8(1 - (lit & 1))
        var_level[picked] = dl
        reason[picked] = -1
        trail[trail_len] = lit
        trail_len += 1
