"""Compiled HLT coset enumeration kernel.

Columns: generator ``i`` is column ``2*i``, its inverse column ``2*i + 1``,
so ``col ^ 1`` is the inverse column.  Rows are recycled through a free list;
the live cosets form a doubly linked list in definition order, which is the
HLT processing order.  Coincidences keep the earlier-defined coset.
"""

import numpy as np
from numba import njit

# scalar state slots
LIVE, HW, NFREE, TAIL, SEQ, QLEN = 0, 1, 2, 3, 4, 5
# two tracked cosets (the HLT pointer and the lookahead pointer): id, next-if-dead, alive
TRACK = 6
NSTATE = 12

OK, LIMIT = 0, 1


@njit(cache=True)
def _rep(p, c):
    r = c
    while p[r] != r:
        r = p[r]
    while p[c] != r:
        n = p[c]
        p[c] = r
        c = n
    return r


@njit(cache=True)
def _merge(k, l, p, seq, nxt, prv, queue, st):
    a = _rep(p, k)
    b = _rep(p, l)
    if a == b:
        return
    if seq[a] < seq[b]:
        keep, kill = a, b
    else:
        keep, kill = b, a
    p[kill] = keep
    queue[st[QLEN]] = kill
    st[QLEN] += 1
    before = prv[kill]
    after = nxt[kill]
    nxt[before] = after
    if after != -1:
        prv[after] = before
    else:
        st[TAIL] = before
    st[LIVE] -= 1
    for t in range(2):
        base = TRACK + 3 * t
        if kill == st[base] and st[base + 2] == 1:
            st[base + 2] = 0
            st[base + 1] = after
        elif st[base + 2] == 0 and kill == st[base + 1]:
            st[base + 1] = after


@njit(cache=True)
def _coincidence(a, b, table, p, seq, nxt, prv, queue, freelist, st):
    ncols = table.shape[1]
    st[QLEN] = 0
    _merge(a, b, p, seq, nxt, prv, queue, st)
    qi = 0
    while qi < st[QLEN]:
        g = queue[qi]
        qi += 1
        for x in range(ncols):
            d = table[g, x]
            if d >= 0:
                xi = x ^ 1
                table[d, xi] = -1
                mu = _rep(p, g)
                nu = _rep(p, d)
                if table[mu, x] >= 0:
                    _merge(nu, table[mu, x], p, seq, nxt, prv, queue, st)
                elif table[nu, xi] >= 0:
                    _merge(mu, table[nu, xi], p, seq, nxt, prv, queue, st)
                else:
                    table[mu, x] = nu
                    table[nu, xi] = mu
    # every reference to a dead coset is gone now; recycle the rows
    for i in range(st[QLEN]):
        r = queue[i]
        for x in range(ncols):
            table[r, x] = -1
        p[r] = r
        freelist[st[NFREE]] = r
        st[NFREE] += 1
    st[QLEN] = 0


@njit(cache=True)
def _define(f, x, table, p, seq, nxt, prv, freelist, st):
    if st[NFREE] > 0:
        st[NFREE] -= 1
        r = freelist[st[NFREE]]
    else:
        r = st[HW]
        st[HW] += 1
    p[r] = r
    seq[r] = st[SEQ]
    st[SEQ] += 1
    tail = st[TAIL]
    nxt[tail] = r
    prv[r] = tail
    nxt[r] = -1
    st[TAIL] = r
    st[LIVE] += 1
    for t in range(2):
        base = TRACK + 3 * t
        if st[base + 2] == 0 and st[base + 1] == -1:
            st[base + 1] = r
    table[f, x] = r
    table[r, x ^ 1] = f
    return r


@njit(cache=True)
def _scan(alpha, rel, s, e, fill, table, p, seq, nxt, prv, queue, freelist, st):
    """Scan relator rel[s:e] from alpha; with ``fill`` define cosets to close it."""
    f = alpha
    i = s
    b = alpha
    j = e - 1
    while True:
        while i <= j and table[f, rel[i]] >= 0:
            f = table[f, rel[i]]
            i += 1
        if i > j:
            if f != b:
                _coincidence(f, b, table, p, seq, nxt, prv, queue, freelist, st)
            return
        while j >= i and table[b, rel[j] ^ 1] >= 0:
            b = table[b, rel[j] ^ 1]
            j -= 1
        if j < i:
            _coincidence(f, b, table, p, seq, nxt, prv, queue, freelist, st)
            return
        elif i == j:
            table[f, rel[i]] = b
            table[b, rel[i] ^ 1] = f
            return
        elif fill:
            _define(f, rel[i], table, p, seq, nxt, prv, freelist, st)
        else:
            return


@njit(cache=True)
def _lookahead(rel, roff, table, p, seq, nxt, prv, queue, freelist, st):
    base = TRACK + 3
    beta = 0
    while beta != -1:
        st[base] = beta
        st[base + 2] = 1
        for r in range(roff.shape[0] - 1):
            _scan(beta, rel, roff[r], roff[r + 1], False,
                  table, p, seq, nxt, prv, queue, freelist, st)
            if st[base + 2] == 0:
                break
        if st[base + 2] == 1:
            beta = nxt[beta]
        else:
            beta = st[base + 1]
    st[base + 2] = 0
    st[base + 1] = -1


@njit(cache=True)
def enumerate_cosets(rel, roff, sub, soff, ncols, cap, start_rows):
    """Run HLT+lookahead.  Returns (status, table, peak_live).

    On success ``table`` is the complete table renumbered in definition
    order (row 0 = subgroup coset).
    """
    C = min(cap, max(start_rows, 1))
    table = np.full((C, ncols), -1, dtype=np.int32)
    p = np.zeros(C, dtype=np.int32)
    seq = np.zeros(C, dtype=np.int64)
    nxt = np.full(C, -1, dtype=np.int32)
    prv = np.full(C, -1, dtype=np.int32)
    queue = np.zeros(C, dtype=np.int32)
    freelist = np.zeros(C, dtype=np.int32)
    st = np.zeros(NSTATE, dtype=np.int64)
    st[LIVE] = 1
    st[HW] = 1
    st[SEQ] = 1
    st[TRACK + 1] = -1
    st[TRACK + 4] = -1
    peak = 1

    maxlen = 1
    for r in range(roff.shape[0] - 1):
        maxlen = max(maxlen, roff[r + 1] - roff[r])
    for r in range(soff.shape[0] - 1):
        maxlen = max(maxlen, soff[r + 1] - soff[r])

    A = TRACK
    st[A] = 0
    st[A + 2] = 1
    nsub = soff.shape[0] - 1
    nrel = roff.shape[0] - 1
    # phase -1 scans subgroup generators at coset 0, then HLT over cosets
    alpha = 0
    phase = -1
    k = 0
    while alpha != -1:
        st[A] = alpha
        st[A + 2] = 1
        done_alpha = False
        while not done_alpha:
            if phase == -1:
                if k >= nsub:
                    phase = 0
                    k = 0
                    continue
                s, e = soff[k], soff[k + 1]
            elif phase == 0:
                if k >= nrel:
                    phase = 1
                    k = 0
                    continue
                s, e = roff[k], roff[k + 1]
            else:
                if k >= ncols:
                    done_alpha = True
                    break
                s, e = 0, 0
            # room for up to maxlen new cosets
            avail = st[NFREE] + (C - st[HW])
            if avail < maxlen:
                _lookahead(rel, roff, table, p, seq, nxt, prv, queue, freelist, st)
                avail = st[NFREE] + (C - st[HW])
                if avail < max(maxlen, C // 8) and C < cap:
                    C2 = min(cap, 2 * C)
                    t2 = np.full((C2, ncols), -1, dtype=np.int32)
                    t2[:C] = table
                    table = t2
                    p2 = np.zeros(C2, dtype=np.int32)
                    p2[:C] = p
                    p = p2
                    s2 = np.zeros(C2, dtype=np.int64)
                    s2[:C] = seq
                    seq = s2
                    n2 = np.full(C2, -1, dtype=np.int32)
                    n2[:C] = nxt
                    nxt = n2
                    v2 = np.full(C2, -1, dtype=np.int32)
                    v2[:C] = prv
                    prv = v2
                    queue = np.zeros(C2, dtype=np.int32)
                    f2 = np.zeros(C2, dtype=np.int32)
                    f2[:C] = freelist
                    freelist = f2
                    C = C2
                    avail = st[NFREE] + (C - st[HW])
                if avail < maxlen:
                    return LIMIT, np.empty((0, ncols), dtype=np.int32), peak
                if st[A + 2] == 0:
                    break
            if phase == 1:
                if table[alpha, k] < 0:
                    _define(alpha, k, table, p, seq, nxt, prv, freelist, st)
            else:
                src = sub if phase == -1 else rel
                _scan(alpha, src, s, e, True, table, p, seq, nxt, prv, queue, freelist, st)
            if st[LIVE] > peak:
                peak = st[LIVE]
            k += 1
            if st[A + 2] == 0:
                break
        if st[A + 2] == 1:
            alpha = nxt[alpha]
        else:
            alpha = st[A + 1]
        phase = 0
        k = 0

    n = st[LIVE]
    order = np.empty(n, dtype=np.int32)
    newid = np.full(C, -1, dtype=np.int32)
    c = 0
    i = 0
    while c != -1:
        order[i] = c
        newid[c] = i
        i += 1
        c = nxt[c]
    out = np.empty((n, ncols), dtype=np.int32)
    for a in range(n):
        row = order[a]
        for x in range(ncols):
            t = table[row, x]
            out[a, x] = newid[t] if t >= 0 else -1
    return OK, out, peak
