"""Compiled CSR kernels for the shortest-path and accumulation passes.

Everything here operates on flat int64/float64 arrays so numba can compile
it; the public modules own array construction and result wrapping.  All
kernels are deterministic: the heap orders ties by (distance, node id),
adjacency is pre-sorted, and callers merge per-block partial results in a
fixed order, so outputs are bitwise identical for any thread count.

Path-length ties are detected with the library-wide relative tolerance
REL_TOL; with integer weights every comparison is exact.  Edge weights are
assumed to be many orders of magnitude larger than REL_TOL times the graph
diameter, which holds for any sane weight scale.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .graph import REL_TOL


# -- binary heap keyed by (dist, node), lazy deletion --------------------

@njit(cache=True, nogil=True)
def _hpush(hd, hn, size, d, v):
    hd[size] = d
    hn[size] = v
    i = size
    while i > 0:
        p = (i - 1) >> 1
        pd = hd[p]
        pv = hn[p]
        if pd > d or (pd == d and pv > v):
            hd[i] = pd
            hn[i] = pv
            hd[p] = d
            hn[p] = v
            i = p
        else:
            break
    return size + 1


@njit(cache=True, nogil=True)
def _hpop(hd, hn, size):
    d0 = hd[0]
    v0 = hn[0]
    size -= 1
    if size > 0:
        d = hd[size]
        v = hn[size]
        i = 0
        while True:
            c = 2 * i + 1
            if c >= size:
                break
            r = c + 1
            if r < size and (hd[r] < hd[c] or (hd[r] == hd[c] and hn[r] < hn[c])):
                c = r
            if hd[c] < d or (hd[c] == d and hn[c] < v):
                hd[i] = hd[c]
                hn[i] = hn[c]
                i = c
            else:
                break
        hd[i] = d
        hn[i] = v
    return d0, v0, size


# -- single-source Dijkstra with path counting ----------------------------

@njit(cache=True, nogil=True)
def _sssp(indptr, indices, weights, s, dist, sigma, order, hd, hn, settled):
    """Fill dist/sigma, record the settlement order, return settled count."""
    n = indptr.shape[0] - 1
    for i in range(n):
        dist[i] = np.inf
        sigma[i] = 0.0
        settled[i] = 0
    dist[s] = 0.0
    sigma[s] = 1.0
    hsize = _hpush(hd, hn, 0, 0.0, s)
    cnt = 0
    while hsize > 0:
        d, u, hsize = _hpop(hd, hn, hsize)
        if settled[u] == 1:
            continue
        settled[u] = 1
        order[cnt] = u
        cnt += 1
        du = dist[u]
        for ei in range(indptr[u], indptr[u + 1]):
            v = indices[ei]
            if settled[v] == 1:
                continue
            nd = du + weights[ei]
            dv = dist[v]
            if dv == np.inf:
                dist[v] = nd
                sigma[v] = sigma[u]
                hsize = _hpush(hd, hn, hsize, nd, v)
            else:
                diff = nd - dv if nd > dv else dv - nd
                m = nd if nd > dv else dv
                if diff <= REL_TOL * m:
                    sigma[v] += sigma[u]
                elif nd < dv:
                    dist[v] = nd
                    sigma[v] = sigma[u]
                    hsize = _hpush(hd, hn, hsize, nd, v)
    return cnt


@njit(cache=True, nogil=True)
def _sssp_single(indptr, indices, weights, s):
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.float64)
    sigma = np.empty(n, np.float64)
    order = np.empty(n, np.int64)
    settled = np.empty(n, np.uint8)
    cap = indices.shape[0] + n + 2
    hd = np.empty(cap, np.float64)
    hn = np.empty(cap, np.int64)
    cnt = _sssp(indptr, indices, weights, s, dist, sigma, order, hd, hn, settled)
    return dist, sigma, order[:cnt].copy()


# -- Brandes dependency accumulation --------------------------------------
#
# pair_mode selects which ordered pairs (s, t) are counted:
#   0  every pair, 1  module(t) != module(s), 2  module(t) == module(s)

@njit(cache=True, nogil=True)
def _brandes_block(indptr, indices, weights, mod_of, sources, pair_mode, bc):
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.float64)
    sigma = np.empty(n, np.float64)
    delta = np.zeros(n, np.float64)
    order = np.empty(n, np.int64)
    settled = np.empty(n, np.uint8)
    cap = indices.shape[0] + n + 2
    hd = np.empty(cap, np.float64)
    hn = np.empty(cap, np.int64)
    for si in range(sources.shape[0]):
        s = sources[si]
        cnt = _sssp(indptr, indices, weights, s, dist, sigma, order, hd, hn, settled)
        for i in range(cnt):
            delta[order[i]] = 0.0
        ms = mod_of[s]
        for i in range(cnt - 1, -1, -1):
            w = order[i]
            if pair_mode == 0:
                alpha = 1.0
            elif pair_mode == 1:
                alpha = 1.0 if mod_of[w] != ms else 0.0
            else:
                alpha = 1.0 if mod_of[w] == ms else 0.0
            if w == s:
                alpha = 0.0
            dw = dist[w]
            coef = (alpha + delta[w]) / sigma[w]
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                dv = dist[v]
                if dv < dw:
                    t = dv + weights[ei]
                    diff = t - dw if t > dw else dw - t
                    m = t if t > dw else dw
                    if diff <= REL_TOL * m:
                        delta[v] += sigma[v] * coef
            if w != s:
                bc[w] += delta[w]


@njit(cache=True, nogil=True)
def _brandes_masked_source(indptr, indices, weights, s, tmask, bc):
    """One source with an arbitrary per-target 0/1 mask."""
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.float64)
    sigma = np.empty(n, np.float64)
    delta = np.zeros(n, np.float64)
    order = np.empty(n, np.int64)
    settled = np.empty(n, np.uint8)
    cap = indices.shape[0] + n + 2
    hd = np.empty(cap, np.float64)
    hn = np.empty(cap, np.int64)
    cnt = _sssp(indptr, indices, weights, s, dist, sigma, order, hd, hn, settled)
    for i in range(cnt - 1, -1, -1):
        w = order[i]
        alpha = 1.0 if (tmask[w] == 1 and w != s) else 0.0
        dw = dist[w]
        coef = (alpha + delta[w]) / sigma[w]
        for ei in range(indptr[w], indptr[w + 1]):
            v = indices[ei]
            dv = dist[v]
            if dv < dw:
                t = dv + weights[ei]
                diff = t - dw if t > dw else dw - t
                m = t if t > dw else dw
                if diff <= REL_TOL * m:
                    delta[v] += sigma[v] * coef
        if w != s:
            bc[w] += delta[w]


# -- per-module pass: local centrality + boundary-root captures -----------
#
# Runs Brandes over the internal-edge CSR (disconnected across modules, so
# each source only ever reaches its own module).  Whenever the source is an
# external vertex, its dist/sigma/settlement arrays are copied into the
# packed per-root rows so the cross-module pass never redoes a Dijkstra.

@njit(cache=True, nogil=True)
def _lc_block(indptr, indices, weights, sources, bc,
              ext_pos_of, root_off, local_of, rdist, rsig, rord, rcnt):
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.float64)
    sigma = np.empty(n, np.float64)
    delta = np.zeros(n, np.float64)
    order = np.empty(n, np.int64)
    settled = np.empty(n, np.uint8)
    cap = indices.shape[0] + n + 2
    hd = np.empty(cap, np.float64)
    hn = np.empty(cap, np.int64)
    for si in range(sources.shape[0]):
        s = sources[si]
        cnt = _sssp(indptr, indices, weights, s, dist, sigma, order, hd, hn, settled)
        p = ext_pos_of[s]
        if p >= 0:
            base = root_off[p]
            for i in range(cnt):
                v = order[i]
                rord[base + i] = v
                rdist[base + local_of[v]] = dist[v]
                rsig[base + local_of[v]] = sigma[v]
            rcnt[p] = cnt
        for i in range(cnt):
            delta[order[i]] = 0.0
        for i in range(cnt - 1, -1, -1):
            w = order[i]
            alpha = 0.0 if w == s else 1.0
            dw = dist[w]
            coef = (alpha + delta[w]) / sigma[w]
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                dv = dist[v]
                if dv < dw:
                    t = dv + weights[ei]
                    diff = t - dw if t > dw else dw - t
                    m = t if t > dw else dw
                    if diff <= REL_TOL * m:
                        delta[v] += sigma[v] * coef
            if w != s:
                bc[w] += delta[w]


# -- reduced segment counts ------------------------------------------------
#
# rred[root x][v] counts the shortest intra-module x..v paths whose interior
# avoids every external vertex.  A cross-module path decomposes uniquely at
# the external vertices it visits, so these counts multiply along skeleton
# arcs without double counting (the full sigma would count a path x..z..y
# with z external twice: once as one arc, once as two).

@njit(cache=True, nogil=True)
def _reduced_counts(indptr, indices, weights, roots_g, is_ext,
                    root_off, local_of, rdist, rord, rcnt, rred):
    for p in range(roots_g.shape[0]):
        base = root_off[p]
        cnt = rcnt[p]
        x = roots_g[p]
        rred[base + local_of[x]] = 1.0
        for j in range(1, cnt):
            v = rord[base + j]
            lv = local_of[v]
            dv = rdist[base + lv]
            acc = 0.0
            for ei in range(indptr[v], indptr[v + 1]):
                u = indices[ei]
                if u != x and is_ext[u] == 1:
                    continue
                du = rdist[base + local_of[u]]
                if du < dv:
                    t = du + weights[ei]
                    diff = t - dv if t > dv else dv - t
                    m = t if t > dv else dv
                    if diff <= REL_TOL * m:
                        acc += rred[base + local_of[u]]
            rred[base + lv] = acc


# -- cross-module dependency pass (skeleton construction) -----------------

@njit(cache=True, nogil=True)
def _aux_relax(adist, asig, asettled, hd, hn, hsize, b, nd, cnt_sig):
    if asettled[b] == 1:
        return hsize
    dv = adist[b]
    if dv == np.inf:
        adist[b] = nd
        asig[b] = cnt_sig
        return _hpush(hd, hn, hsize, nd, b)
    diff = nd - dv if nd > dv else dv - nd
    m = nd if nd > dv else dv
    if diff <= REL_TOL * m:
        asig[b] += cnt_sig
    elif nd < dv:
        adist[b] = nd
        asig[b] = cnt_sig
        hsize = _hpush(hd, hn, hsize, nd, b)
    return hsize


@njit(cache=True, nogil=True)
def _skeleton_block(i_indptr, i_indices, i_weights,
                    mod_of, local_of, is_ext,
                    roots_g, ext_mod, ext_off, ext_pos_of,
                    root_off, rdist, rred, rord, rcnt,
                    x_indptr, x_indices, x_weights,
                    sources, max_ext, aux_cap, ec):
    """Accumulate external centrality for a block of source nodes.

    For each source s the skeleton is an auxiliary digraph over s plus all
    external vertices: arcs are reduced intra-module segments and external
    edges, each carrying (length, path count).  Dijkstra over it yields the
    full-graph distance and path count to every external vertex; a target
    post-pass extends them into module interiors.  Dependencies flow back
    over the skeleton exactly as in Brandes, and the mass carried by each
    intra-module segment is pushed down onto the segment's interior nodes
    through the reduced predecessor DAG of its root.
    """
    n = mod_of.shape[0]
    np_ext = roots_g.shape[0]
    na = np_ext + 1                       # aux node 0 is the source itself
    adist = np.empty(na, np.float64)
    asig = np.empty(na, np.float64)
    adelta = np.empty(na, np.float64)
    aload = np.empty(np_ext, np.float64)
    asettled = np.empty(na, np.uint8)
    aorder = np.empty(na, np.int64)
    hd = np.empty(aux_cap, np.float64)
    hn = np.empty(aux_cap, np.int64)
    tq = np.empty(max_ext, np.int64)      # tying egress candidates per target
    tc = np.empty(max_ext, np.float64)
    # Segment mass is accumulated per (root, node) over the whole block and
    # pushed down once at the end: the push-down DP is linear in the
    # injected mass, so batching moves the O(module edges) sweep per root
    # out of the per-source loop.
    blk_inj = np.zeros(root_off[np_ext], np.float64)
    blk_has = np.zeros(np_ext, np.uint8)
    max_w = 0
    for p in range(np_ext):
        w = root_off[p + 1] - root_off[p]
        if w > max_w:
            max_w = w
    h = np.empty(max_w, np.float64)       # per-root DP scratch, local index

    for si in range(sources.shape[0]):
        s = sources[si]
        am = mod_of[s]
        if ext_off[am + 1] == ext_off[am]:
            continue                      # module has no exits: no EC from s
        spos = ext_pos_of[s]

        # ---- forward aux Dijkstra ----
        for i in range(na):
            adist[i] = np.inf
            asig[i] = 0.0
            adelta[i] = 0.0
            asettled[i] = 0
        for i in range(np_ext):
            aload[i] = 0.0
        adist[0] = 0.0
        asig[0] = 1.0
        hsize = _hpush(hd, hn, 0, 0.0, 0)
        acnt = 0
        while hsize > 0:
            d, a, hsize = _hpop(hd, hn, hsize)
            if asettled[a] == 1:
                continue
            asettled[a] = 1
            aorder[acnt] = a
            acnt += 1
            da = adist[a]
            if a == 0:
                if spos >= 0:
                    # the source is itself external: one zero-length arc
                    hsize = _aux_relax(adist, asig, asettled, hd, hn, hsize,
                                       1 + spos, da, asig[0])
                else:
                    for q in range(ext_off[am], ext_off[am + 1]):
                        c = rred[root_off[q] + local_of[s]]
                        if c > 0.0:
                            dseg = rdist[root_off[q] + local_of[s]]
                            hsize = _aux_relax(adist, asig, asettled, hd, hn,
                                               hsize, 1 + q, da + dseg,
                                               asig[0] * c)
            else:
                p = a - 1
                m = ext_mod[p]
                bp = root_off[p]
                for q in range(ext_off[m], ext_off[m + 1]):
                    if q == p:
                        continue
                    g = roots_g[q]
                    c = rred[bp + local_of[g]]
                    if c > 0.0:
                        hsize = _aux_relax(adist, asig, asettled, hd, hn,
                                           hsize, 1 + q,
                                           da + rdist[bp + local_of[g]],
                                           asig[a] * c)
                for ei in range(x_indptr[p], x_indptr[p + 1]):
                    hsize = _aux_relax(adist, asig, asettled, hd, hn, hsize,
                                       1 + x_indices[ei],
                                       da + x_weights[ei], asig[a])

        # ---- target pass: interior targets of other modules ----
        for t in range(n):
            bm = mod_of[t]
            if bm == am or ext_pos_of[t] >= 0:
                continue
            lt = local_of[t]
            best = np.inf
            for q in range(ext_off[bm], ext_off[bm + 1]):
                if asettled[1 + q] == 0:
                    continue
                if rred[root_off[q] + lt] <= 0.0:
                    continue
                dd = adist[1 + q] + rdist[root_off[q] + lt]
                if dd < best:
                    best = dd
            if best == np.inf:
                continue
            nt = 0
            st = 0.0
            for q in range(ext_off[bm], ext_off[bm + 1]):
                if asettled[1 + q] == 0:
                    continue
                c = rred[root_off[q] + lt]
                if c <= 0.0:
                    continue
                dd = adist[1 + q] + rdist[root_off[q] + lt]
                diff = dd - best
                m2 = dd if dd > best else best
                if diff <= REL_TOL * m2:
                    tq[nt] = q
                    tc[nt] = c
                    nt += 1
                    st += asig[1 + q] * c
            for ii in range(nt):
                q = tq[ii]
                f = asig[1 + q] * tc[ii] / st
                aload[q] += f
                blk_inj[root_off[q] + lt] += f
                blk_has[q] = 1

        # ---- reverse pass over the skeleton ----
        for i in range(acnt - 1, -1, -1):
            a = aorder[i]
            if a == 0:
                continue
            p = a - 1
            g = roots_g[p]
            alpha = 1.0 if ext_mod[p] != am else 0.0
            total = alpha + aload[p] + adelta[a]
            if g != s:
                ec[g] += aload[p] + adelta[a]
            if total == 0.0:
                continue
            da = adist[a]
            inv = total / asig[a]
            m = ext_mod[p]
            if m == am:
                if spos >= 0:
                    if p == spos:
                        adelta[0] += asig[0] * inv
                else:
                    c = rred[root_off[p] + local_of[s]]
                    if c > 0.0:
                        t2 = rdist[root_off[p] + local_of[s]]
                        diff = t2 - da if t2 > da else da - t2
                        m2 = t2 if t2 > da else da
                        if diff <= REL_TOL * m2:
                            share = asig[0] * c * inv
                            adelta[0] += share
                            blk_inj[root_off[p] + local_of[s]] += share
                            blk_has[p] = 1
            for q in range(ext_off[m], ext_off[m + 1]):
                if q == p or asettled[1 + q] == 0:
                    continue
                c = rred[root_off[q] + local_of[g]]
                if c <= 0.0:
                    continue
                dq = adist[1 + q] + rdist[root_off[q] + local_of[g]]
                diff = dq - da if dq > da else da - dq
                m2 = dq if dq > da else da
                if diff <= REL_TOL * m2:
                    share = asig[1 + q] * c * inv
                    adelta[1 + q] += share
                    blk_inj[root_off[q] + local_of[g]] += share
                    blk_has[q] = 1
            for ei in range(x_indptr[p], x_indptr[p + 1]):
                q = x_indices[ei]
                if asettled[1 + q] == 0:
                    continue
                dq = adist[1 + q] + x_weights[ei]
                diff = dq - da if dq > da else da - dq
                m2 = dq if dq > da else da
                if diff <= REL_TOL * m2:
                    adelta[1 + q] += asig[1 + q] * inv

    # ---- push accumulated segment mass down onto interior nodes ----
    for p in range(np_ext):
        if blk_has[p] == 0:
            continue
        base = root_off[p]
        cnt = rcnt[p]
        x = roots_g[p]
        for j in range(cnt):
            h[local_of[rord[base + j]]] = 0.0
        for j in range(cnt - 1, 0, -1):
            v = rord[base + j]
            lv = local_of[v]
            fv = blk_inj[base + lv]
            hv = h[lv]
            if fv != 0.0:
                hv += fv / rred[base + lv]
            if hv == 0.0:
                continue
            dv = rdist[base + lv]
            for ei in range(i_indptr[v], i_indptr[v + 1]):
                u = i_indices[ei]
                if u != x and is_ext[u] == 1:
                    continue
                bu = base + local_of[u]
                if rred[bu] <= 0.0:
                    continue
                du = rdist[bu]
                if du < dv:
                    t2 = du + i_weights[ei]
                    diff = t2 - dv if t2 > dv else dv - t2
                    m2 = t2 if t2 > dv else dv
                    if diff <= REL_TOL * m2:
                        h[local_of[u]] += hv
            credit = rred[base + lv] * hv - fv
            if credit > 0.0:
                ec[v] += credit
