# cython: boundscheck=False, wraparound=False, initializedcheck=False, language_level=3
"""Compiled sweep of Louvain local moves.

Keep in lockstep with ``_louvain_py.py``: the pure-Python fallback is the
reference; both must produce bit-identical assignments from the same inputs.
"""

import numpy as np


def local_move_pass(long long[::1] indptr, long long[::1] indices,
                    double[::1] weights, double[::1] degrees,
                    long long[::1] node_comm, double[::1] comm_deg,
                    long long[::1] order, double inv_two_m, double resolution):
    """One sweep over ``order``: greedily move each node to the neighboring
    community with the largest modularity gain, keeping the current community
    on ties.  Mutates ``node_comm`` and ``comm_deg``; returns the move count.
    """
    cdef Py_ssize_t n = node_comm.shape[0]
    neigh_comm_arr = np.empty(n, dtype=np.int64)
    neigh_w_arr = np.empty(n, dtype=np.float64)
    comm_pos_arr = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] neigh_comm = neigh_comm_arr
    cdef double[::1] neigh_w = neigh_w_arr
    cdef long long[::1] comm_pos = comm_pos_arr
    cdef Py_ssize_t oi
    cdef long long u, v, a, c, best, pos, pos_a, nn, idx, j
    cdef double deg_u, k_scaled, w_a, best_gain, gain
    cdef long long moves = 0
    with nogil:
        for oi in range(n):
            u = order[oi]
            deg_u = degrees[u]
            a = node_comm[u]
            nn = 0
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if v == u:
                    continue
                c = node_comm[v]
                pos = comm_pos[c]
                if pos < 0:
                    comm_pos[c] = nn
                    neigh_comm[nn] = c
                    neigh_w[nn] = weights[j]
                    nn += 1
                else:
                    neigh_w[pos] = neigh_w[pos] + weights[j]
            comm_deg[a] = comm_deg[a] - deg_u
            k_scaled = resolution * deg_u * inv_two_m
            pos_a = comm_pos[a]
            if pos_a >= 0:
                w_a = neigh_w[pos_a]
            else:
                w_a = 0.0
            best_gain = w_a - k_scaled * comm_deg[a]
            best = a
            for idx in range(nn):
                c = neigh_comm[idx]
                if c == a:
                    continue
                gain = neigh_w[idx] - k_scaled * comm_deg[c]
                if gain > best_gain:
                    best_gain = gain
                    best = c
            comm_deg[best] = comm_deg[best] + deg_u
            node_comm[u] = best
            if best != a:
                moves += 1
            for idx in range(nn):
                comm_pos[neigh_comm[idx]] = -1
    return int(moves)
