"""Reference implementations of the table kernels, in numpy and plain Python."""

from math import gcd

import numpy as np


def unit_inverse(mul, one):
    hits = mul == one
    both = hits & hits.T
    inv = both.argmax(axis=1).astype(np.int32)
    inv[~both.any(axis=1)] = -1
    return inv


def radical_mask(mul, one_minus, is_unit):
    n = mul.shape[0]
    is_unit = np.asarray(is_unit, dtype=bool)
    out = np.zeros(n, dtype=np.uint8)
    for y in range(n):
        left = np.unique(mul[:, y])
        out[y] = is_unit[one_minus[mul[left, :]]].all()
    return out


def closure(mul, gens, identity):
    member = np.zeros(mul.shape[0], dtype=np.uint8)
    member[identity] = 1
    gens = [int(g) for g in gens]
    stack = [identity]
    while stack:
        x = stack.pop()
        row = mul[x]
        for g in gens:
            y = int(row[g])
            if not member[y]:
                member[y] = 1
                stack.append(y)
    return member


def quotient_exponent(mul, member, elements):
    result = 1
    for u in elements:
        u = int(u)
        p, k = u, 1
        while not member[p]:
            p = int(mul[p, u])
            k += 1
        result = result * k // gcd(result, k)
    return result
