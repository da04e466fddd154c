# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops over finite multiplication tables.

Every function mirrors one in ``_pykernels`` with the same signature and
results; ``kernels`` picks whichever is importable.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def unit_inverse(const int[:, ::1] mul, int one):
    """Two-sided inverse of every element, or -1 where none exists."""
    cdef Py_ssize_t n = mul.shape[0]
    cdef Py_ssize_t x, y
    out = np.full(n, -1, dtype=np.int32)
    cdef int[::1] inv = out
    for x in range(n):
        for y in range(n):
            if mul[x, y] == one and mul[y, x] == one:
                inv[x] = <int>y
                break
    return out


def radical_mask(const int[:, ::1] mul, const int[::1] one_minus, const unsigned char[::1] is_unit):
    """Elements y with 1 - x*y*z a unit for every x and z."""
    cdef Py_ssize_t n = mul.shape[0]
    cdef Py_ssize_t x, y, z
    cdef int w
    cdef bint ok
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] res = out
    seen_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] seen = seen_arr
    cdef int stamp = 0
    for y in range(n):
        stamp += 1
        ok = True
        for x in range(n):
            w = mul[x, y]
            if seen[w] == stamp:
                continue
            seen[w] = stamp
            for z in range(n):
                if not is_unit[one_minus[mul[w, z]]]:
                    ok = False
                    break
            if not ok:
                break
        res[y] = ok
    return out


def closure(const int[:, ::1] mul, gens, int identity):
    """Membership mask of the submonoid generated by ``gens`` (a subgroup when finite)."""
    cdef Py_ssize_t n = mul.shape[0]
    g_arr = np.ascontiguousarray(np.asarray(gens, dtype=np.int32))
    cdef int[::1] g = g_arr
    cdef Py_ssize_t ng = g.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] member = out
    stack_arr = np.empty(n, dtype=np.int32)
    cdef int[::1] stack = stack_arr
    cdef Py_ssize_t top = 0, k
    cdef int x, y
    member[identity] = 1
    stack[0] = identity
    top = 1
    while top > 0:
        top -= 1
        x = stack[top]
        for k in range(ng):
            y = mul[x, g[k]]
            if not member[y]:
                member[y] = 1
                stack[top] = y
                top += 1
    return out


def quotient_exponent(const int[:, ::1] mul, const unsigned char[::1] member, elements):
    """Least common multiple over ``elements`` of the order modulo ``member``."""
    e_arr = np.ascontiguousarray(np.asarray(elements, dtype=np.int32))
    cdef int[::1] e = e_arr
    cdef Py_ssize_t i
    cdef int p, u
    cdef long k
    result = 1
    from math import gcd
    for i in range(e.shape[0]):
        u = e[i]
        p = u
        k = 1
        while not member[p]:
            p = mul[p, u]
            k += 1
        result = result * k // gcd(result, k)
    return result
