"""Pure-Python implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference the compiled versions are tested against.
"""
from collections import deque

import numpy as np

CONST0, CONST1, NOT, AND, OR = 0, 1, 2, 3, 4


def eval_batch(op, a, b, n_inputs, outs, inputs):
    """Evaluate a compiled circuit on every row of ``inputs``.

    Nodes ``0 .. n_inputs-1`` are the inputs, node ``n_inputs + j`` is gate ``j``.
    Returns a ``(rows, len(outs))`` uint8 array.
    """
    inputs = np.asarray(inputs, dtype=np.uint8)
    rows = inputs.shape[0]
    values = [inputs[:, i].astype(bool) for i in range(n_inputs)]
    for g in range(len(op)):
        code = op[g]
        if code == CONST0:
            values.append(np.zeros(rows, dtype=bool))
        elif code == CONST1:
            values.append(np.ones(rows, dtype=bool))
        elif code == NOT:
            values.append(~values[a[g]])
        elif code == AND:
            values.append(values[a[g]] & values[b[g]])
        else:
            values.append(values[a[g]] | values[b[g]])
    result = np.empty((rows, len(outs)), dtype=np.uint8)
    for k, node in enumerate(outs):
        result[:, k] = values[node]
    return result


def attractor_ranks(owner, succ_ptr, pred_ptr, pred_idx, goal):
    """Layered attractor of ``goal`` for the reaching player (owner 0).

    Returns an int32 array: the layer at which each node joins the attractor,
    or -1 for nodes outside it.
    """
    n = len(owner)
    rank = np.full(n, -1, dtype=np.int32)
    pending = [succ_ptr[v + 1] - succ_ptr[v] for v in range(n)]
    queue = deque()
    for v in range(n):
        if goal[v]:
            rank[v] = 0
            queue.append(v)
    while queue:
        v = queue.popleft()
        r = rank[v] + 1
        for k in range(pred_ptr[v], pred_ptr[v + 1]):
            p = pred_idx[k]
            if rank[p] >= 0:
                continue
            if owner[p] == 0:
                rank[p] = r
                queue.append(p)
            else:
                pending[p] -= 1
                if pending[p] == 0:
                    rank[p] = r
                    queue.append(p)
    return rank
