# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled kernels: reachable-state closure and Monte Carlo propagation.

Mirrors pzf._pykernels exactly; see that module for the interface contract.
States are uint64 bitmasks, so graphs are limited to 63 vertices.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.stdint cimport int64_t, uint64_t
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector
from numpy.random cimport bitgen_t

import numpy as np

from pzf.errors import StateCapExceeded

cdef extern from *:
    """
    static inline int pzf_popcnt64(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int pzf_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int pzf_popcnt64(unsigned long long x) nogil
    int pzf_ctz64(unsigned long long x) nogil


def make_kernel_graph(adj_masks):
    """Package adjacency bitmasks for the kernel calls below."""
    n = len(adj_masks)
    if n > 63:
        raise ValueError("kernels support at most 63 vertices (word-sized states)")
    adj = np.array([int(m) for m in adj_masks], dtype=np.uint64)
    deg = np.array([int(m).bit_count() for m in adj_masks], dtype=np.float64)
    return adj, deg, (1 << n) - 1


def reachable_closure(kernel_graph, start, cap):
    """All blue sets reachable from ``start`` with positive probability."""
    cdef uint64_t[::1] adj = kernel_graph[0]
    cdef uint64_t full = kernel_graph[2]
    cdef Py_ssize_t limit = cap
    cdef unordered_set[uint64_t] seen
    cdef vector[uint64_t] stack, out
    cdef uint64_t blue, whites, wm, um, w_bit, det, free_m, base, t, succ
    cdef int w, u
    cdef bint forced, over = False
    seen.insert(<uint64_t> start)
    stack.push_back(<uint64_t> start)
    with nogil:
        while stack.size() > 0:
            blue = stack.back()
            stack.pop_back()
            out.push_back(blue)
            if blue == full:
                continue
            whites = full & ~blue
            det = 0
            free_m = 0
            wm = whites
            while wm:
                w = pzf_ctz64(wm)
                w_bit = wm & (~wm + 1)
                wm &= wm - 1
                um = adj[w] & blue
                if um == 0:
                    continue
                forced = False
                while um:
                    u = pzf_ctz64(um)
                    um &= um - 1
                    if (adj[u] & whites) == w_bit:
                        forced = True
                        break
                if forced:
                    det |= w_bit
                else:
                    free_m |= w_bit
            base = blue | det
            t = free_m
            while True:
                succ = base | t
                if succ != blue and seen.find(succ) == seen.end():
                    seen.insert(succ)
                    if <Py_ssize_t> seen.size() > limit:
                        over = True
                        break
                    stack.push_back(succ)
                if t == 0:
                    break
                t = (t - 1) & free_m
            if over:
                break
    if over:
        raise StateCapExceeded(cap)
    return [int(out[i]) for i in range(out.size())]


def propagate(kernel_graph, blue, bit_generator):
    """Run the probabilistic color-change rule from ``blue`` until all blue."""
    cdef uint64_t[::1] adj = kernel_graph[0]
    cdef double[::1] deg = kernel_graph[1]
    cdef uint64_t full = kernel_graph[2]
    cdef uint64_t state = blue
    cdef bitgen_t *rng
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("propagate needs a numpy BitGenerator")
    rng = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")
    cdef int64_t rounds = 0
    cdef uint64_t new, wm, um
    cdef int w, u
    with nogil:
        while state != full:
            new = state
            wm = full & ~state
            while wm:
                w = pzf_ctz64(wm)
                wm &= wm - 1
                um = adj[w] & state
                while um:
                    u = pzf_ctz64(um)
                    um &= um - 1
                    if rng.next_double(rng.state) < (pzf_popcnt64(adj[u] & state) + 1) / deg[u]:
                        new |= (<uint64_t> 1) << w
                        break
            state = new
            rounds += 1
    return rounds
