"""Bitmask arithmetic over Z/pZ.

A subset of Z/pZ is a plain int: bit ``i`` set means residue ``i`` is a
member.  Python ints are word arrays under the hood, so the cyclic-shift
accumulation below is genuinely bit-parallel: one rotation costs
O(ceil(p/w)) word operations.  The object layer in :mod:`zpsumsets.core`
wraps these functions with validation; the enumeration kernels call them
directly.
"""

from __future__ import annotations


def full_mask(p: int) -> int:
    return (1 << p) - 1


def iter_bits(m: int):
    """Yield the set bit indices of ``m``, ascending."""
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def from_members(p: int, members) -> int:
    m = 0
    for a in members:
        m |= 1 << (a % p)
    return m


def to_members(m: int) -> tuple[int, ...]:
    return tuple(iter_bits(m))


def rotate(m: int, k: int, p: int) -> int:
    """Image of the set under x -> x + k (mod p): a cyclic shift in p bits."""
    k %= p
    if k == 0:
        return m
    return ((m << k) | (m >> (p - k))) & ((1 << p) - 1)


def negate(m: int, p: int) -> int:
    """Image of the set under x -> -x (mod p)."""
    r = m & 1
    m >>= 1
    i = p - 1
    while m:
        if m & 1:
            r |= 1 << i
        m >>= 1
        i -= 1
    return r


def add_sets(ma: int, mb: int, p: int) -> int:
    """Minkowski sum {a+b mod p}: accumulate ``ma`` rotated by each member of ``mb``."""
    f = (1 << p) - 1
    acc = 0
    m = mb
    while m:
        low = m & -m
        b = low.bit_length() - 1
        if b:
            acc |= ((ma << b) | (ma >> (p - b))) & f
        else:
            acc |= ma
        m ^= low
    return acc


def double_set(m: int, p: int) -> int:
    return add_sets(m, m, p)


def restricted_sums(m: int, p: int) -> int:
    """Sums a+a' over distinct members only.

    Rotating by a member a gives all sums a + x; dropping the bit at 2a
    removes the diagonal entry a + a for that rotation.
    """
    acc = 0
    for a in iter_bits(m):
        acc |= rotate(m, a, p) & ~(1 << ((2 * a) % p))
    return acc


def affine(m: int, x: int, y: int, p: int) -> int:
    """Image of the set under a -> x*a + y (mod p)."""
    r = 0
    for a in iter_bits(m):
        r |= 1 << ((x * a + y) % p)
    return r


def dilate(m: int, x: int, p: int) -> int:
    return affine(m, x, 0, p)


def companion_bits(s: int, p: int) -> int:
    """-(complement of s): empty exactly when s covers everything."""
    return negate(full_mask(p) ^ s, p)


def difference_classes(p: int):
    """The common-difference classes of Z/pZ: d and -d are identified.

    For p = 2 the only class is d = 1.
    """
    if p == 2:
        return (1,)
    return tuple(range(1, (p - 1) // 2 + 1))


def cover_for_difference(m: int, d: int, p: int) -> tuple[int, int]:
    """Shortest progression with difference d covering the set.

    Dilates by d^-1, sorts the members as integers and finds the largest
    cyclic gap g; the shortest covering interval has length p - g + 1.
    Returns (length, start) with start in original coordinates, the least
    start (as an integer) among shortest covers.
    """
    inv = pow(d, -1, p)
    mem = sorted((inv * a) % p for a in iter_bits(m))
    n = len(mem)
    if n == 1:
        return 1, (d * mem[0]) % p
    best_gap = -1
    starts: list[int] = []
    for i in range(n):
        cur = mem[i]
        nxt = mem[(i + 1) % n]
        gap = (nxt - cur) % p
        if gap == 0:
            gap = p  # only when n == 1, excluded above; kept for safety
        if gap > best_gap:
            best_gap = gap
            starts = [nxt]
        elif gap == best_gap:
            starts.append(nxt)
    length = p - best_gap + 1
    start = min((d * s) % p for s in starts)
    return length, start


def diameter_bits(m: int, p: int) -> int:
    """Length of the shortest progression (any difference) covering the set."""
    if m & (m - 1) == 0:
        return 1
    if m == full_mask(p):
        return p
    best = p
    for d in difference_classes(p):
        length, _ = cover_for_difference(m, d, p)
        if length < best:
            best = length
    return best


def min_cover_bits(m: int, p: int) -> tuple[int, int, int]:
    """A shortest covering progression as (start, diff, length).

    Ties are broken by smallest difference class, then smallest start.
    Conventions: a singleton is covered by (member, 1, 1); the full set
    by (0, 1, p).
    """
    if m & (m - 1) == 0:
        return (m.bit_length() - 1, 1, 1)
    if m == full_mask(p):
        return (0, 1, p)
    best: tuple[int, int, int] | None = None
    for d in difference_classes(p):
        length, start = cover_for_difference(m, d, p)
        cand = (length, d, start)
        if best is None or cand < best:
            best = cand
    length, d, start = best  # type: ignore[misc]
    return (start, d, length)


def ap_mask(start: int, d: int, k: int, p: int) -> int:
    """Bitmask of the progression {start + j*d : 0 <= j < k}."""
    m = 0
    a = start % p
    for _ in range(k):
        m |= 1 << a
        a = (a + d) % p
    return m
