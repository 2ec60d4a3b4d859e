"""Cyclic bit-vector helpers.  A subset of Z_n is an int whose bit i marks i."""
from __future__ import annotations


def full_mask(n: int) -> int:
    return (1 << n) - 1


def rotate(mask: int, shift: int, n: int) -> int:
    """Translate the subset by ``shift`` in Z_n."""
    shift %= n
    if shift == 0:
        return mask
    full = (1 << n) - 1
    return ((mask << shift) | (mask >> (n - shift))) & full


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elems, n: int) -> int:
    out = 0
    for e in elems:
        out |= 1 << (int(e) % n)
    return out


def sumset(a: int, b: int, n: int) -> int:
    """a + b in Z_n, by OR-ing translates of the larger set."""
    if a.bit_count() < b.bit_count():
        a, b = b, a
    out = 0
    for x in iter_bits(b):
        out |= rotate(a, x, n)
    return out


def negate(mask: int, n: int) -> int:
    out = 0
    for x in iter_bits(mask):
        out |= 1 << (-x % n)
    return out
