"""Pure-numpy implementations of the hot kernels (reference and fallback)."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

_CHUNK = 1 << 15


def root_left_mul(indptr, cols, exps, g, l):
    d = indptr.shape[0] - 1
    counts = np.diff(indptr)
    width = int(counts.max()) if d else 0
    # pad ragged rows with a pointer to an all-zero sentinel row
    g_ext = np.concatenate([g, np.zeros((1,) + g.shape[1:], dtype=g.dtype)])
    pad_cols = np.full((d, width), g.shape[0], dtype=np.int64)
    pad_exps = np.zeros((d, width), dtype=np.int64)
    slot = np.arange(width)
    filled = slot[None, :] < counts[:, None]
    pad_cols[filled] = cols
    pad_exps[filled] = exps
    out = np.zeros((d, g.shape[1], l), dtype=g.dtype)
    t = np.arange(l)
    for s in range(width):
        src = (t[None, :] - pad_exps[:, s][:, None]) % l
        out += np.take_along_axis(g_ext[pad_cols[:, s]], src[:, None, :], axis=2)
    return out


@lru_cache(maxsize=4)
def colex_masks(n_vert: int, k: int) -> np.ndarray:
    """All k-subsets of range(n_vert) as bitmasks, in increasing (colex) order."""
    memo: dict[tuple[int, int], np.ndarray] = {}

    def build(n: int, j: int) -> np.ndarray:
        if (n, j) not in memo:
            if j == 0:
                memo[n, j] = np.zeros(1, dtype=np.int64)
            elif j > n:
                memo[n, j] = np.zeros(0, dtype=np.int64)
            else:
                # subsets whose largest element is t, for t = j-1 .. n-1
                memo[n, j] = np.concatenate([build(t, j - 1) | np.int64(1 << t) for t in range(j - 1, n)])
        return memo[n, j]

    out = build(n_vert, k)
    out.setflags(write=False)
    return out


def _dense(indptr, idx, n_vert):
    a = np.zeros((n_vert, n_vert), dtype=np.float32)
    rows = np.repeat(np.arange(n_vert), np.diff(indptr))
    a[rows, idx] = 1.0
    return a


def _masks_to_bits(masks, n_vert):
    return ((masks[:, None] >> np.arange(n_vert, dtype=np.int64)) & 1).astype(np.float32)


def _max_degree_dense(bits, adj):
    out_deg = bits @ adj.T
    in_deg = bits @ adj
    return (np.maximum(out_deg, in_deg) * bits).max(axis=1).astype(np.int64)


def exhaustive_range(out_masks, in_masks, k, start, count, binom, threshold):
    n_vert = out_masks.shape[0]
    adj = np.zeros((n_vert, n_vert), dtype=np.float32)
    for v in range(n_vert):
        adj[v] = (int(out_masks[v]) >> np.arange(n_vert)) & 1
    masks = colex_masks(n_vert, k)[start : start + count]
    best = n_vert + 1
    cx_rank, cx_mask = -1, 0
    for lo in range(0, masks.shape[0], _CHUNK):
        chunk = masks[lo : lo + _CHUNK]
        worst = _max_degree_dense(_masks_to_bits(chunk, n_vert), adj)
        best = min(best, int(worst.min()))
        if cx_rank < 0:
            hits = np.flatnonzero(worst < threshold)
            if hits.size:
                cx_rank = start + lo + int(hits[0])
                cx_mask = int(chunk[hits[0]])
    return best, cx_rank, cx_mask


def batch_max_degree(members, out_indptr, out_idx, in_indptr, in_idx):
    n_vert = members.shape[1]
    adj = _dense(out_indptr, out_idx, n_vert)
    return _max_degree_dense(members.astype(np.float32), adj)


def local_search(member, out_indptr, out_idx, in_indptr, in_idx, pick_out, pick_in, by_arcs):
    n_vert = member.shape[0]
    member = member.copy()
    preds = np.split(in_idx, in_indptr[1:-1])
    succs = np.split(out_idx, out_indptr[1:-1])
    adj = _dense(out_indptr, out_idx, n_vert).astype(np.int64)
    out_s = adj @ member.astype(np.int64)
    in_s = adj.T @ member.astype(np.int64)
    inside = np.flatnonzero(member)
    outside = np.flatnonzero(member == 0)

    def objective():
        sel = member.astype(bool)
        worst = int(np.maximum(out_s, in_s)[sel].max()) if sel.any() else 0
        return worst, int(out_s[sel].sum())

    def toggle(v, delta):
        np.add.at(out_s, preds[v], delta)
        np.add.at(in_s, succs[v], delta)

    obj, arcs = objective()
    best, best_member, done = obj, member.copy(), 0
    if inside.size == 0 or outside.size == 0:
        return best_member, best, done
    for it in range(pick_out.shape[0]):
        if best == 0:
            break
        done += 1
        i, j = pick_out[it], pick_in[it]
        u, w = inside[i], outside[j]
        member[u] = 0
        toggle(u, -1)
        member[w] = 1
        toggle(w, 1)
        new, new_arcs = objective()
        if (new_arcs <= arcs) if by_arcs else (new <= obj):
            inside[i], outside[j] = w, u
            obj, arcs = new, new_arcs
            if obj < best:
                best = obj
                best_member[:] = member
        else:
            member[w] = 0
            toggle(w, -1)
            member[u] = 1
            toggle(u, 1)
    return best_member, best, done
