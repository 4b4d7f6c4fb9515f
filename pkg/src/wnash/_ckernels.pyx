# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_pykernels``; same signatures and results."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


from libc.stdint cimport uint64_t

cdef enum:
    CHUNK = 64  # words per block: 4096 rows evaluated together


def eval_batch(op, a, b, int n_inputs, outs, inputs):
    """Bit-parallel evaluation: each node holds 64 rows per machine word."""
    cdef const int[:] cop = np.ascontiguousarray(op, dtype=np.intc)
    cdef const int[:] ca = np.ascontiguousarray(a, dtype=np.intc)
    cdef const int[:] cb = np.ascontiguousarray(b, dtype=np.intc)
    cdef const int[:] couts = np.ascontiguousarray(outs, dtype=np.intc)
    cdef const unsigned char[:, :] cin = np.ascontiguousarray(inputs, dtype=np.uint8).reshape(-1, n_inputs) \
        if n_inputs > 0 else np.zeros((len(inputs), 0), dtype=np.uint8)
    cdef Py_ssize_t rows = cin.shape[0]
    cdef Py_ssize_t gates = cop.shape[0]
    cdef Py_ssize_t nouts = couts.shape[0]
    cdef Py_ssize_t width = n_inputs + gates
    result = np.zeros((rows, nouts), dtype=np.uint8)
    cdef unsigned char[:, :] res = result
    scratch = np.zeros((width if width > 0 else 1, CHUNK), dtype=np.uint64)
    cdef uint64_t[:, :] val = scratch
    cdef Py_ssize_t base, r, i, g, k, w, words, lo, hi, node
    cdef int code
    cdef uint64_t one = 1
    for base in range(0, rows, CHUNK * 64):
        lo = base
        hi = min(rows, base + CHUNK * 64)
        words = (hi - lo + 63) // 64
        for i in range(n_inputs):
            for w in range(words):
                val[i, w] = 0
        for r in range(lo, hi):
            for i in range(n_inputs):
                if cin[r, i]:
                    val[i, (r - lo) >> 6] |= one << ((r - lo) & 63)
        for g in range(gates):
            code = cop[g]
            node = n_inputs + g
            for w in range(words):
                if code == 0:
                    val[node, w] = 0
                elif code == 1:
                    val[node, w] = ~(<uint64_t>0)
                elif code == 2:
                    val[node, w] = ~val[ca[g], w]
                elif code == 3:
                    val[node, w] = val[ca[g], w] & val[cb[g], w]
                else:
                    val[node, w] = val[ca[g], w] | val[cb[g], w]
        for k in range(nouts):
            node = couts[k]
            for r in range(lo, hi):
                res[r, k] = (val[node, (r - lo) >> 6] >> ((r - lo) & 63)) & 1
    return result


def attractor_ranks(owner, succ_ptr, pred_ptr, pred_idx, goal):
    cdef const signed char[:] cown = np.ascontiguousarray(owner, dtype=np.int8)
    cdef const int[:] csucc = np.ascontiguousarray(succ_ptr, dtype=np.intc)
    cdef const int[:] cpptr = np.ascontiguousarray(pred_ptr, dtype=np.intc)
    cdef const int[:] cpidx = np.ascontiguousarray(pred_idx, dtype=np.intc)
    cdef const unsigned char[:] cgoal = np.ascontiguousarray(goal, dtype=np.uint8)
    cdef Py_ssize_t n = cown.shape[0]
    rank_arr = np.full(n, -1, dtype=np.int32)
    cdef int[:] rank = rank_arr
    pending_arr = np.empty(n if n > 0 else 1, dtype=np.intc)
    cdef int[:] pending = pending_arr
    queue_arr = np.empty(n if n > 0 else 1, dtype=np.intc)
    cdef int[:] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, v, k, p
    cdef int r
    for v in range(n):
        pending[v] = csucc[v + 1] - csucc[v]
        if cgoal[v]:
            rank[v] = 0
            queue[tail] = v
            tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        r = rank[v] + 1
        for k in range(cpptr[v], cpptr[v + 1]):
            p = cpidx[k]
            if rank[p] >= 0:
                continue
            if cown[p] == 0:
                rank[p] = r
                queue[tail] = p
                tail += 1
            else:
                pending[p] -= 1
                if pending[p] == 0:
                    rank[p] = r
                    queue[tail] = p
                    tail += 1
    return rank_arr
