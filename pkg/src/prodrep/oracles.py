"""Brute-force reference computations.

These deliberately avoid the bit-vector and dlog machinery: they enumerate
tuples and subsets and multiply actual field elements.  Only usable at tiny
sizes.
"""
from __future__ import annotations

import cmath
from itertools import combinations, product

from .ff import Field
from .poly import Poly


def sumset(B, k: int, n: int) -> set[int]:
    return {sum(t) % n for t in product(sorted(B), repeat=k)}


def m_value(k: int, n: int, s: int) -> int:
    best = 0
    for mask in range(1 << n):
        B = [i for i in range(n) if mask >> i & 1]
        if len(B) > best and s % n not in sumset(B, k, n):
            best = len(B)
    return best


def values(field: Field, h: Poly) -> set[int]:
    return {h(x) for x in range(field.q)}


def has_star(field: Field, h: Poly, k: int, A) -> bool:
    vals = values(field, h)
    for combo in combinations(sorted(A), k):
        prod = 1
        for a in combo:
            prod = field.mul(prod, a)
        if prod in vals:
            return False
    return True


def Fk(field: Field, h: Poly, k: int) -> int:
    """Largest star subset of F_q*, scanning subsets from the largest size down."""
    units = list(range(1, field.q))
    vals = values(field, h)
    # forbidden k-sets, as bitmasks over positions in `units`
    bad = []
    for combo in combinations(range(len(units)), k):
        prod = 1
        for i in combo:
            prod = field.mul(prod, units[i])
        if prod in vals:
            bad.append(sum(1 << i for i in combo))
    for size in range(len(units), -1, -1):
        for combo in combinations(range(len(units)), size):
            mask = sum(1 << i for i in combo)
            if all(b & mask != b for b in bad):
                return size
    return 0


def char_value(field: Field, j: int, y: int) -> complex:
    if y == 0:
        return 0j
    # dlog by repeated multiplication, independent of the tables
    t, cur = 0, 1
    while cur != y:
        cur = field.mul(cur, field.generator)
        t += 1
    return cmath.exp(2j * cmath.pi * j * t / (field.q - 1))


def char_sum(field: Field, j: int, f: Poly, a: int) -> complex:
    return sum(char_value(field, j, field.mul(a, f(x))) for x in range(field.q))


def count_representations(field: Field, A, B, f: Poly) -> int:
    total = 0
    for x in range(field.q):
        v = f(x)
        total += sum(1 for a in A for b in B if field.mul(a, b) == v)
    return total
