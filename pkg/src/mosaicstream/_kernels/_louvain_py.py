"""Pure-Python sweep of Louvain local moves.

Mirrors ``_louvain_cy.pyx`` operation for operation (same traversal order,
same floating-point expression shapes) so both backends produce bit-identical
community assignments from the same inputs.
"""

import numpy as np


def local_move_pass(indptr, indices, weights, degrees, node_comm, comm_deg,
                    order, inv_two_m, resolution):
    """One sweep over ``order``: greedily move each node to the neighboring
    community with the largest modularity gain, keeping the current community
    on ties.  Mutates ``node_comm`` and ``comm_deg``; returns the move count.
    """
    n = node_comm.shape[0]
    neigh_comm = np.empty(n, dtype=np.int64)
    neigh_w = np.empty(n, dtype=np.float64)
    comm_pos = np.full(n, -1, dtype=np.int64)
    moves = 0
    for oi in range(n):
        u = int(order[oi])
        deg_u = float(degrees[u])
        a = int(node_comm[u])
        # Accumulate edge weight from u to each neighboring community,
        # skipping self-loops (their contribution cancels in gain deltas).
        nn = 0
        for j in range(int(indptr[u]), int(indptr[u + 1])):
            v = int(indices[j])
            if v == u:
                continue
            c = int(node_comm[v])
            pos = int(comm_pos[c])
            if pos < 0:
                comm_pos[c] = nn
                neigh_comm[nn] = c
                neigh_w[nn] = float(weights[j])
                nn += 1
            else:
                neigh_w[pos] = float(neigh_w[pos]) + float(weights[j])
        comm_deg[a] = float(comm_deg[a]) - deg_u
        k_scaled = resolution * deg_u * inv_two_m
        pos_a = int(comm_pos[a])
        w_a = float(neigh_w[pos_a]) if pos_a >= 0 else 0.0
        best_gain = w_a - k_scaled * float(comm_deg[a])
        best = a
        for idx in range(nn):
            c = int(neigh_comm[idx])
            if c == a:
                continue
            gain = float(neigh_w[idx]) - k_scaled * float(comm_deg[c])
            if gain > best_gain:
                best_gain = gain
                best = c
        comm_deg[best] = float(comm_deg[best]) + deg_u
        node_comm[u] = best
        if best != a:
            moves += 1
        for idx in range(nn):
            comm_pos[neigh_comm[idx]] = -1
    return moves
