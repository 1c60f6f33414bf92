"""Jitted message-passing loops shared by every schedule.

Edges are numbered check-major: the edges of check ``c`` are
``chk_ptr[c]:chk_ptr[c+1]`` with ascending variable index, so a smaller edge
index always means a lexicographically smaller ``(check, variable)`` pair.
``var_edges[var_ptr[v]:var_ptr[v+1]]`` lists the edges of variable ``v`` in
ascending check order.

Counter rows are ``[c2v, v2c, precomputations, comparisons]``.
"""

import math

import numpy as np
from numba import njit

LLR_CLIP = 38.0
TANH_CLIP = 1.0 - 1e-12

FLOODING = 0
LAYERED = 1
SRBP = 2
NW_SRBP = 3
LMD_SRBP = 4
PROPOSED = 5

C2V, V2C, PRE, CMP = 0, 1, 2, 3


@njit(cache=True)
def clip_llr(x):
    if x > LLR_CLIP:
        return LLR_CLIP
    if x < -LLR_CLIP:
        return -LLR_CLIP
    return x


@njit(cache=True)
def exact_rule(inbound, sign):
    """Tanh rule over ``inbound`` (the other V2C messages), times ``sign``."""
    if inbound.shape[0] == 0:
        return sign * LLR_CLIP
    prod = 1.0
    for x in inbound:
        prod *= math.tanh(0.5 * x)
    if prod > TANH_CLIP:
        prod = TANH_CLIP
    elif prod < -TANH_CLIP:
        prod = -TANH_CLIP
    return clip_llr(sign * 2.0 * math.atanh(prod))


@njit(cache=True)
def min_sum_rule(inbound, sign):
    if inbound.shape[0] == 0:
        return sign * LLR_CLIP
    mag = np.inf
    for x in inbound:
        if x < 0.0:
            sign = -sign
        ax = abs(x)
        if ax < mag:
            mag = ax
    return clip_llr(sign * mag)


@njit(cache=True)
def exact_edge(e, c, chk_ptr, v2c, sgn):
    lo, hi = chk_ptr[c], chk_ptr[c + 1]
    if hi - lo == 1:
        return sgn * LLR_CLIP
    prod = 1.0
    for f in range(lo, hi):
        if f != e:
            prod *= math.tanh(0.5 * v2c[f])
    if prod > TANH_CLIP:
        prod = TANH_CLIP
    elif prod < -TANH_CLIP:
        prod = -TANH_CLIP
    return clip_llr(sgn * 2.0 * math.atanh(prod))


@njit(cache=True)
def min_sum_edge(e, c, chk_ptr, v2c, sgn):
    lo, hi = chk_ptr[c], chk_ptr[c + 1]
    mag = np.inf
    for f in range(lo, hi):
        if f != e:
            x = v2c[f]
            if x < 0.0:
                sgn = -sgn
            ax = abs(x)
            if ax < mag:
                mag = ax
    if hi - lo == 1:
        return sgn * LLR_CLIP
    return clip_llr(sgn * mag)


@njit(cache=True)
def v2c_edge(e, v, var_ptr, var_edges, c2v, l0):
    acc = l0
    for t in range(var_ptr[v], var_ptr[v + 1]):
        f = var_edges[t]
        if f != e:
            acc += c2v[f]
    return clip_llr(acc)


@njit(cache=True)
def _set_residual(e, r, residual, live):
    live[0] += (r != 0.0) - (residual[e] != 0.0)
    residual[e] = r


@njit(cache=True)
def refresh_check(c, skip_var, chk_ptr, edge_var, v2c, ref, sgn, precomp, residual, live):
    """Min-sum pre-computation and residual for edges of ``c`` except to ``skip_var``.

    The residual is measured against ``ref`` (see :func:`run_residual`).
    ``live[0]`` tracks how many residuals are non-zero.
    Returns the number of edges refreshed.
    """
    lo, hi = chk_ptr[c], chk_ptr[c + 1]
    if hi - lo == 1:
        if edge_var[lo] == skip_var:
            return 0
        precomp[lo] = sgn * LLR_CLIP
        _set_residual(lo, abs(precomp[lo] - ref[lo]), residual, live)
        return 1
    min1 = np.inf
    min2 = np.inf
    arg = -1
    total = sgn
    for f in range(lo, hi):
        x = v2c[f]
        if x < 0.0:
            total = -total
        ax = abs(x)
        if ax < min1:
            min2 = min1
            min1 = ax
            arg = f
        elif ax < min2:
            min2 = ax
    n = 0
    for f in range(lo, hi):
        if edge_var[f] == skip_var:
            continue
        s = total
        if v2c[f] < 0.0:
            s = -s
        mag = min2 if f == arg else min1
        precomp[f] = clip_llr(s * mag)
        _set_residual(f, abs(precomp[f] - ref[f]), residual, live)
        n += 1
    return n


@njit(cache=True)
def decide(var_ptr, var_edges, c2v, l0, marginal, e_hat):
    n = var_ptr.shape[0] - 1
    for v in range(n):
        acc = l0
        for t in range(var_ptr[v], var_ptr[v + 1]):
            acc += c2v[var_edges[t]]
        marginal[v] = acc
        e_hat[v] = 1 if acc <= 0.0 else 0


@njit(cache=True)
def syndrome_matches(e_hat, s, chk_ptr, edge_var):
    m = chk_ptr.shape[0] - 1
    for c in range(m):
        par = 0
        for f in range(chk_ptr[c], chk_ptr[c + 1]):
            par ^= e_hat[edge_var[f]]
        if par != s[c]:
            return False
    return True


@njit(cache=True)
def _signs(s):
    out = np.empty(s.shape[0], dtype=np.float64)
    for i in range(s.shape[0]):
        out[i] = -1.0 if s[i] else 1.0
    return out


@njit(cache=True)
def _check_pass_exact(c, chk_ptr, v2c, c2v, sgn, tanhs):
    lo, hi = chk_ptr[c], chk_ptr[c + 1]
    for f in range(lo, hi):
        tanhs[f - lo] = math.tanh(0.5 * v2c[f])
    for f in range(lo, hi):
        if hi - lo == 1:
            c2v[f] = sgn * LLR_CLIP
            continue
        prod = 1.0
        for g in range(lo, hi):
            if g != f:
                prod *= tanhs[g - lo]
        if prod > TANH_CLIP:
            prod = TANH_CLIP
        elif prod < -TANH_CLIP:
            prod = -TANH_CLIP
        c2v[f] = clip_llr(sgn * 2.0 * math.atanh(prod))


@njit(cache=True)
def run_fixed(chk_ptr, edge_var, edge_chk, var_ptr, var_edges, s, l0, i_max, layered,
              v2c, c2v, marginal, e_hat, counters):
    """Flooding or layered schedule. Returns ``(converged, iterations)``."""
    m = chk_ptr.shape[0] - 1
    n = var_ptr.shape[0] - 1
    sg = _signs(s)
    max_deg = 1
    for c in range(m):
        if chk_ptr[c + 1] - chk_ptr[c] > max_deg:
            max_deg = chk_ptr[c + 1] - chk_ptr[c]
    tanhs = np.empty(max_deg, dtype=np.float64)
    total = np.empty(n, dtype=np.float64)

    decide(var_ptr, var_edges, c2v, l0, marginal, e_hat)
    if syndrome_matches(e_hat, s, chk_ptr, edge_var):
        return True, 0
    for it in range(i_max):
        if layered:
            for c in range(m):
                lo, hi = chk_ptr[c], chk_ptr[c + 1]
                for f in range(lo, hi):
                    v2c[f] = v2c_edge(f, edge_var[f], var_ptr, var_edges, c2v, l0)
                _check_pass_exact(c, chk_ptr, v2c, c2v, sg[c], tanhs)
                counters[it, V2C] += hi - lo
                counters[it, C2V] += hi - lo
        else:
            for c in range(m):
                _check_pass_exact(c, chk_ptr, v2c, c2v, sg[c], tanhs)
                counters[it, C2V] += chk_ptr[c + 1] - chk_ptr[c]
            for v in range(n):
                acc = 0.0
                for t in range(var_ptr[v], var_ptr[v + 1]):
                    acc += c2v[var_edges[t]]
                total[v] = acc
            for f in range(edge_var.shape[0]):
                v2c[f] = clip_llr(l0 + total[edge_var[f]] - c2v[f])
            counters[it, V2C] += edge_var.shape[0]
        decide(var_ptr, var_edges, c2v, l0, marginal, e_hat)
        if syndrome_matches(e_hat, s, chk_ptr, edge_var):
            return True, it + 1
    return False, i_max


@njit(cache=True)
def init_residuals(chk_ptr, edge_var, v2c, ref, sg, precomp, residual, live):
    m = chk_ptr.shape[0] - 1
    n = 0
    for c in range(m):
        n += refresh_check(c, -1, chk_ptr, edge_var, v2c, ref, sg[c], precomp, residual, live)
    return n


@njit(cache=True)
def propagate(v, c, chk_ptr, edge_var, edge_chk, var_ptr, var_edges, v2c, c2v, ref, sg, l0,
              precomp, residual, live):
    """Spread a new C2V ``c -> v``: refresh V2C out of ``v`` and the residuals it feeds.

    Returns ``(n_v2c, n_precomp)``.
    """
    n_v2c = 0
    n_pre = 0
    for t in range(var_ptr[v], var_ptr[v + 1]):
        f = var_edges[t]
        ca = edge_chk[f]
        if ca == c:
            continue
        v2c[f] = v2c_edge(f, v, var_ptr, var_edges, c2v, l0)
        n_v2c += 1
        n_pre += refresh_check(ca, v, chk_ptr, edge_var, v2c, ref, sg[ca], precomp, residual, live)
    return n_v2c, n_pre


@njit(cache=True)
def better(e, best, residual, key):
    r, rb = residual[e], residual[best]
    return r > rb or (r == rb and key[e] < key[best])


@njit(cache=True)
def argmax_all(residual, key):
    best = 0
    for e in range(1, residual.shape[0]):
        if better(e, best, residual, key):
            best = e
    return best


@njit(cache=True)
def _lmd_select(v_max, c_max, chk_ptr, edge_var, edge_chk, var_ptr, var_edges, residual, key):
    # returns (edge, comparisons); edge -1 when the intermediate pool is empty
    best = -1
    cnt = 0
    for t in range(var_ptr[v_max], var_ptr[v_max + 1]):
        ci = edge_chk[var_edges[t]]
        if ci == c_max:
            continue
        for g in range(chk_ptr[ci], chk_ptr[ci + 1]):
            if edge_var[g] == v_max:
                continue
            cnt += 1
            if best < 0 or better(g, best, residual, key):
                best = g
    if best < 0:
        return -1, 0
    vs = edge_var[best]
    best2 = -1
    for t in range(var_ptr[vs], var_ptr[vs + 1]):
        g = var_edges[t]
        if best2 < 0 or better(g, best2, residual, key):
            best2 = g
    return best2, (cnt - 1) + (var_ptr[vs + 1] - var_ptr[vs] - 1)


@njit(cache=True)
def proposed_pool_select(vt, flags, chk_ptr, edge_var, edge_chk, var_ptr, var_edges,
                         residual, key):
    """Best edge of the flag-filtered pool induced by ``vt``.

    Returns ``(edge, flag_edge, pool_size)``; ``edge`` is -1 for an empty pool.
    ``flag_edge`` is the edge ``(c_max, vt)`` whose flag gets set.
    """
    best = -1
    best_flag = -1
    cnt = 0
    for t in range(var_ptr[vt], var_ptr[vt + 1]):
        f = var_edges[t]
        if flags[f]:
            continue
        ci = edge_chk[f]
        for g in range(chk_ptr[ci], chk_ptr[ci + 1]):
            if edge_var[g] == vt:
                continue
            cnt += 1
            if best < 0 or better(g, best, residual, key):
                best = g
                best_flag = f
    return best, best_flag, cnt


@njit(cache=True)
def mark_flag(vt, flag_edge, flags, flag_count, var_ptr, var_edges):
    flags[flag_edge] = 1
    flag_count[vt] += 1
    if flag_count[vt] >= var_ptr[vt + 1] - var_ptr[vt] - 1:
        for t in range(var_ptr[vt], var_ptr[vt + 1]):
            flags[var_edges[t]] = 0
        flag_count[vt] = 0


@njit(cache=True)
def run_residual(chk_ptr, edge_var, edge_chk, var_ptr, var_edges, s, l0, i_max, policy, key,
                 v2c, c2v, ref, track_ref, marginal, e_hat, precomp, residual, flags, flag_count,
                 counters):
    """Edge-wise residual schedules (sRBP, NW-sRBP, LMD-sRBP, proposed pool).

    Residuals are ``|precomp - ref|``. With ``track_ref`` set, ``ref[e]``
    records the min-sum value of edge ``e`` when it was last sent, so the
    residual measures how far the message has moved since. Otherwise the
    caller passes ``ref = c2v`` and the residual compares the min-sum value
    with the stored exact message.

    Min-sum ignores every input but the two smallest, so with ``track_ref``
    all residuals can reach zero while exact messages are still stale. When
    that happens the reference is rebased onto the current exact messages
    and the schedule carries on.

    Messages must be freshly initialised by the caller. Returns
    ``(converged, iterations, init_precomputations, init_comparisons, rebases)``.
    """
    E = edge_var.shape[0]
    n = var_ptr.shape[0] - 1
    sg = _signs(s)
    live = np.zeros(1, dtype=np.int64)
    n_init = init_residuals(chk_ptr, edge_var, v2c, ref, sg, precomp, residual, live)
    n_init_cmp = 0
    rebases = 0

    decide(var_ptr, var_edges, c2v, l0, marginal, e_hat)
    if syndrome_matches(e_hat, s, chk_ptr, edge_var):
        return True, 0, n_init, n_init_cmp, rebases
    if E == 0:
        return False, i_max, n_init, n_init_cmp, rebases

    max_deg = 1
    for c in range(chk_ptr.shape[0] - 1):
        if chk_ptr[c + 1] - chk_ptr[c] > max_deg:
            max_deg = chk_ptr[c + 1] - chk_ptr[c]
    scratch = np.empty(max_deg, dtype=np.float64)

    it = 0
    total_c2v = 0
    last = -1  # last updated edge, drives the LMD pool
    pending = -1  # LMD edge chosen at the end of the previous update
    vt = 0
    while it < i_max:
        if track_ref and live[0] == 0:
            rebases += 1
            for f in range(E):
                ref[f] = c2v[f]
                _set_residual(f, abs(precomp[f] - ref[f]), residual, live)
            if policy == LMD_SRBP and last >= 0:
                pending, ncmp = _lmd_select(edge_var[last], edge_chk[last], chk_ptr, edge_var,
                                            edge_chk, var_ptr, var_edges, residual, key)
                if pending < 0:
                    pending = argmax_all(residual, key)
                    ncmp = E - 1
                counters[it, CMP] += ncmp
        if policy == NW_SRBP:
            e = argmax_all(residual, key)
            counters[it, CMP] += E - 1
            c = edge_chk[e]
            lo, hi = chk_ptr[c], chk_ptr[c + 1]
            for f in range(lo, hi):
                scratch[f - lo] = exact_edge(f, c, chk_ptr, v2c, sg[c])
            for f in range(lo, hi):
                c2v[f] = scratch[f - lo]
                if track_ref:
                    ref[f] = precomp[f]
                _set_residual(f, 0.0, residual, live)
            counters[it, C2V] += hi - lo
            total_c2v += hi - lo
            for f in range(lo, hi):
                a, b = propagate(edge_var[f], c, chk_ptr, edge_var, edge_chk, var_ptr, var_edges,
                                 v2c, c2v, ref, sg, l0, precomp, residual, live)
                counters[it, V2C] += a
                counters[it, PRE] += b
        else:
            if policy == SRBP:
                e = argmax_all(residual, key)
                counters[it, CMP] += E - 1
            elif policy == LMD_SRBP:
                if last < 0:
                    # bootstrap pick: no latest message yet, booked apart like the init pass
                    e = argmax_all(residual, key)
                    n_init_cmp += E - 1
                else:
                    e = pending
            else:
                e = -1
                for _ in range(n):
                    e, fe, cnt = proposed_pool_select(vt, flags, chk_ptr, edge_var, edge_chk,
                                                      var_ptr, var_edges, residual, key)
                    if e >= 0:
                        counters[it, CMP] += cnt - 1
                        mark_flag(vt, fe, flags, flag_count, var_ptr, var_edges)
                        vt = (vt + 1) % n
                        break
                    vt = (vt + 1) % n
                if e < 0:
                    # every pool empty: only degree-1 checks remain reachable
                    e = argmax_all(residual, key)
                    counters[it, CMP] += E - 1
            c = edge_chk[e]
            c2v[e] = exact_edge(e, c, chk_ptr, v2c, sg[c])
            if track_ref:
                ref[e] = precomp[e]
            _set_residual(e, 0.0, residual, live)
            counters[it, C2V] += 1
            total_c2v += 1
            a, b = propagate(edge_var[e], c, chk_ptr, edge_var, edge_chk, var_ptr, var_edges,
                             v2c, c2v, ref, sg, l0, precomp, residual, live)
            counters[it, V2C] += a
            counters[it, PRE] += b
            last = e
            if policy == LMD_SRBP:
                # the pool built from this update already fixes the next edge
                pending, ncmp = _lmd_select(edge_var[e], c, chk_ptr, edge_var, edge_chk, var_ptr,
                                            var_edges, residual, key)
                if pending < 0:
                    pending = argmax_all(residual, key)
                    ncmp = E - 1
                counters[it, CMP] += ncmp
        if total_c2v >= (it + 1) * E:
            it += 1
            decide(var_ptr, var_edges, c2v, l0, marginal, e_hat)
            if syndrome_matches(e_hat, s, chk_ptr, edge_var):
                return True, it, n_init, n_init_cmp, rebases
    return False, i_max, n_init, n_init_cmp, rebases
