"""numba-compiled inner loops; signatures mirror ``_numpy``."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def root_left_mul(indptr, cols, exps, g, l):
    d = indptr.shape[0] - 1
    ncol = g.shape[1]
    out = np.zeros((d, ncol, l), dtype=np.int64)
    for r in range(d):
        for p in range(indptr[r], indptr[r + 1]):
            c = cols[p]
            k = exps[p]
            for j in range(ncol):
                for t in range(l):
                    out[r, j, (t + k) % l] += g[c, j, t]
    return out


@njit(cache=True, nogil=True)
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    x = x + (x >> 8)
    x = x + (x >> 16)
    x = x + (x >> 32)
    return x & 0x7F


@njit(cache=True, nogil=True)
def colex_unrank(rank, k, binom):
    mask = np.int64(0)
    r = rank
    c = binom.shape[0] - 1
    for i in range(k, 0, -1):
        while binom[c, i] > r:
            c -= 1
        mask |= np.int64(1) << c
        r -= binom[c, i]
        c -= 1
    return mask


@njit(cache=True, nogil=True)
def exhaustive_range(out_masks, in_masks, k, start, count, binom, threshold):
    n_vert = out_masks.shape[0]
    mask = colex_unrank(start, k, binom)
    best = n_vert + 1
    cx_rank = -1
    cx_mask = np.int64(0)
    for i in range(count):
        worst = 0
        for v in range(n_vert):
            if (mask >> v) & 1:
                a = _popcount(out_masks[v] & mask)
                b = _popcount(in_masks[v] & mask)
                if b > a:
                    a = b
                if a > worst:
                    worst = a
                    if worst >= best:
                        break
        if worst < best:
            best = worst
        if worst < threshold and cx_rank < 0:
            cx_rank = start + i
            cx_mask = mask
        if i + 1 < count:
            low = mask & -mask
            ripple = mask + low
            mask = (((ripple ^ mask) >> 2) // low) | ripple
    return best, cx_rank, cx_mask


@njit(cache=True, nogil=True)
def batch_max_degree(members, out_indptr, out_idx, in_indptr, in_idx):
    b, n_vert = members.shape
    res = np.zeros(b, dtype=np.int64)
    for s in range(b):
        worst = 0
        for v in range(n_vert):
            if members[s, v]:
                a = 0
                for p in range(out_indptr[v], out_indptr[v + 1]):
                    a += members[s, out_idx[p]]
                c = 0
                for p in range(in_indptr[v], in_indptr[v + 1]):
                    c += members[s, in_idx[p]]
                if c > a:
                    a = c
                if a > worst:
                    worst = a
        res[s] = worst
    return res


@njit(cache=True, nogil=True)
def _objective(member, out_s, in_s):
    worst = 0
    arcs = 0
    for v in range(member.shape[0]):
        if member[v]:
            a = out_s[v]
            arcs += a
            if in_s[v] > a:
                a = in_s[v]
            if a > worst:
                worst = a
    return worst, arcs


@njit(cache=True, nogil=True)
def _toggle(v, delta, out_indptr, out_idx, in_indptr, in_idx, out_s, in_s):
    # v entering/leaving S changes the in-S out-degree of its predecessors
    # and the in-S in-degree of its successors
    for p in range(in_indptr[v], in_indptr[v + 1]):
        out_s[in_idx[p]] += delta
    for p in range(out_indptr[v], out_indptr[v + 1]):
        in_s[out_idx[p]] += delta


@njit(cache=True, nogil=True)
def local_search(member, out_indptr, out_idx, in_indptr, in_idx, pick_out, pick_in, by_arcs):
    n_vert = member.shape[0]
    member = member.copy()
    inside = np.flatnonzero(member)
    outside = np.flatnonzero(member == 0)
    out_s = np.zeros(n_vert, dtype=np.int64)
    in_s = np.zeros(n_vert, dtype=np.int64)
    for v in inside:
        _toggle(v, 1, out_indptr, out_idx, in_indptr, in_idx, out_s, in_s)
    obj, arcs = _objective(member, out_s, in_s)
    best = obj
    best_member = member.copy()
    done = 0
    if inside.shape[0] == 0 or outside.shape[0] == 0:
        return best_member, best, done
    for it in range(pick_out.shape[0]):
        if best == 0:
            break
        done += 1
        i = pick_out[it]
        j = pick_in[it]
        u = inside[i]
        w = outside[j]
        member[u] = 0
        _toggle(u, -1, out_indptr, out_idx, in_indptr, in_idx, out_s, in_s)
        member[w] = 1
        _toggle(w, 1, out_indptr, out_idx, in_indptr, in_idx, out_s, in_s)
        new, new_arcs = _objective(member, out_s, in_s)
        if (new_arcs <= arcs) if by_arcs else (new <= obj):
            inside[i] = w
            outside[j] = u
            obj = new
            arcs = new_arcs
            if obj < best:
                best = obj
                best_member[:] = member
        else:
            member[w] = 0
            _toggle(w, -1, out_indptr, out_idx, in_indptr, in_idx, out_s, in_s)
            member[u] = 1
            _toggle(u, 1, out_indptr, out_idx, in_indptr, in_idx, out_s, in_s)
    return best_member, best, done
