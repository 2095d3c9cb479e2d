"""Value types and set arithmetic over Z/pZ.

Residue sets, affine maps and arithmetic-progression descriptors are
immutable values; every operation is pure, so everything here is safe to
share between workers without synchronization.

The set literal text format used by the CLI and reports is
``p=13:{0,1,5}``: modulus prefix, sorted ascending members, no spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from . import bitops


class EmptySetError(ValueError):
    """An arithmetic operation was applied to an empty set."""


class ModulusMismatchError(ValueError):
    """Two sets with different moduli were combined."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A validated prime modulus p >= 2 (trial division; intended range p <= ~10^6)."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise ValueError(f"modulus must be an int, got {self.p!r}")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inverse(self, x: int) -> int:
        if x % self.p == 0:
            raise ValueError(f"{x} has no inverse mod {self.p}")
        return pow(x, -1, self.p)


@lru_cache(maxsize=None)
def prime_modulus(p: int) -> PrimeModulus:
    return PrimeModulus(p)


@dataclass(frozen=True)
class ResidueSet:
    """A subset of Z/pZ with bit-indexed membership (bit i <=> residue i)."""

    modulus: PrimeModulus
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.modulus.p):
            raise ValueError(
                f"mask {self.mask:#x} has bits at or beyond index {self.modulus.p}"
            )

    @classmethod
    def of(cls, p: int | PrimeModulus, members: Iterable[int]) -> "ResidueSet":
        mod = p if isinstance(p, PrimeModulus) else prime_modulus(p)
        mask = 0
        for a in members:
            if not 0 <= a < mod.p:
                raise ValueError(f"member {a} out of range [0, {mod.p - 1}]")
            mask |= 1 << a
        return cls(mod, mask)

    @classmethod
    def from_mask(cls, p: int | PrimeModulus, mask: int) -> "ResidueSet":
        mod = p if isinstance(p, PrimeModulus) else prime_modulus(p)
        return cls(mod, mask)

    @classmethod
    def full(cls, p: int | PrimeModulus) -> "ResidueSet":
        mod = p if isinstance(p, PrimeModulus) else prime_modulus(p)
        return cls(mod, bitops.full_mask(mod.p))

    @classmethod
    def empty(cls, p: int | PrimeModulus) -> "ResidueSet":
        mod = p if isinstance(p, PrimeModulus) else prime_modulus(p)
        return cls(mod, 0)

    @property
    def p(self) -> int:
        return self.modulus.p

    def members(self) -> tuple[int, ...]:
        return bitops.to_members(self.mask)

    def cardinality(self) -> int:
        return self.mask.bit_count()

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self):
        return bitops.iter_bits(self.mask)

    def __contains__(self, a: int) -> bool:
        return 0 <= a < self.p and (self.mask >> a) & 1 == 1

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_full(self) -> bool:
        return self.mask == bitops.full_mask(self.p)

    def literal(self) -> str:
        return f"p={self.p}:{{{','.join(str(a) for a in self.members())}}}"

    def __repr__(self) -> str:
        return f"ResidueSet({self.literal()!r})"


_LITERAL_RE = re.compile(r"p=(\d+):\{([0-9,]*)\}\Z")


def parse_set_literal(text: str) -> ResidueSet:
    """Parse ``p=13:{0,1,5}``; rejects out-of-range and duplicate members."""
    m = _LITERAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed set literal: {text!r}")
    mod = prime_modulus(int(m.group(1)))
    body = m.group(2)
    if body == "":
        return ResidueSet(mod, 0)
    return residues_from_csv(mod, body)


def residues_from_csv(p: int | PrimeModulus, csv: str) -> ResidueSet:
    """Build a set from a comma-separated member list, rejecting duplicates."""
    mod = p if isinstance(p, PrimeModulus) else prime_modulus(p)
    mask = 0
    for part in csv.split(","):
        if not part or not part.isdigit():
            raise ValueError(f"malformed member {part!r} in {csv!r}")
        a = int(part)
        if not 0 <= a < mod.p:
            raise ValueError(f"member {a} out of range [0, {mod.p - 1}]")
        bit = 1 << a
        if mask & bit:
            raise ValueError(f"duplicate member {a}")
        mask |= bit
    return ResidueSet(mod, mask)


@dataclass(frozen=True)
class AffineMap:
    """The map a -> scale*a + shift (mod p), with scale invertible (scale != 0)."""

    modulus: PrimeModulus
    scale: int
    shift: int

    def __post_init__(self):
        p = self.modulus.p
        if not 1 <= self.scale <= p - 1:
            raise ValueError(f"scale must be a nonzero residue mod {p}")
        if not 0 <= self.shift <= p - 1:
            raise ValueError(f"shift must be a residue mod {p}")

    def apply(self, a: int) -> int:
        return (self.scale * a + self.shift) % self.modulus.p

    def inverse(self) -> "AffineMap":
        p = self.modulus.p
        inv = pow(self.scale, -1, p)
        return AffineMap(self.modulus, inv, (-inv * self.shift) % p)


@dataclass(frozen=True)
class ApDescriptor:
    """An arithmetic progression {start + j*diff : 0 <= j < length} mod p.

    Canonical form: diff lies in [1, (p-1)/2] (diff and p-diff describe the
    same progression family, traversed in opposite directions); length 1
    fixes diff = 1; length p fixes start = 0, diff = 1.
    """

    modulus: PrimeModulus
    start: int
    diff: int
    length: int

    def __post_init__(self):
        p = self.modulus.p
        if not 0 <= self.start <= p - 1:
            raise ValueError(f"start must be a residue mod {p}")
        if not 1 <= self.diff <= p - 1:
            raise ValueError(f"diff must be a nonzero residue mod {p}")
        if not 1 <= self.length <= p:
            raise ValueError(f"length must be in [1, {p}]")

    def expand(self) -> ResidueSet:
        p = self.modulus.p
        return ResidueSet(self.modulus, bitops.ap_mask(self.start, self.diff, self.length, p))

    def canonical(self) -> "ApDescriptor":
        p = self.modulus.p
        if self.length == 1:
            return ApDescriptor(self.modulus, self.start, 1, 1)
        if self.length == p:
            return ApDescriptor(self.modulus, 0, 1, p)
        if p > 2 and self.diff > (p - 1) // 2:
            last = (self.start + (self.length - 1) * self.diff) % p
            return ApDescriptor(self.modulus, last, p - self.diff, self.length)
        return self

    def covers(self, a: ResidueSet) -> bool:
        return a.mask & ~self.expand().mask == 0


def _require_nonempty(*sets: ResidueSet) -> None:
    for s in sets:
        if s.is_empty:
            raise EmptySetError("operation requires a non-empty set")


def _require_same_modulus(a: ResidueSet, b: ResidueSet) -> None:
    if a.modulus.p != b.modulus.p:
        raise ModulusMismatchError(f"moduli differ: {a.modulus.p} vs {b.modulus.p}")


def sumset(a: ResidueSet, b: ResidueSet) -> ResidueSet:
    """Minkowski sum {x+y : x in a, y in b}."""
    _require_same_modulus(a, b)
    _require_nonempty(a, b)
    return ResidueSet(a.modulus, bitops.add_sets(a.mask, b.mask, a.p))


def double(a: ResidueSet) -> ResidueSet:
    """The sumset a + a."""
    _require_nonempty(a)
    return ResidueSet(a.modulus, bitops.double_set(a.mask, a.p))


def restricted_sumset(a: ResidueSet) -> ResidueSet:
    """Sums x + y over distinct members x != y of a."""
    if len(a) < 2:
        raise ValueError("restricted sumset needs at least 2 members")
    return ResidueSet(a.modulus, bitops.restricted_sums(a.mask, a.p))


def complement(a: ResidueSet) -> ResidueSet:
    return ResidueSet(a.modulus, bitops.full_mask(a.p) ^ a.mask)


def affine_image(a: ResidueSet, m: AffineMap) -> ResidueSet:
    _require_nonempty(a)
    if m.modulus.p != a.modulus.p:
        raise ModulusMismatchError(f"moduli differ: {a.modulus.p} vs {m.modulus.p}")
    return ResidueSet(a.modulus, bitops.affine(a.mask, m.scale, m.shift, a.p))


def companion_set(a: ResidueSet, b: ResidueSet) -> ResidueSet:
    """-(complement of a+b); empty exactly when a+b covers Z/pZ."""
    s = sumset(a, b)
    return ResidueSet(a.modulus, bitops.companion_bits(s.mask, a.p))


def deficiency(a: ResidueSet, b: ResidueSet) -> int:
    """|a+b| - |a| - |b| + 1; nonnegative whenever the companion set is nonempty."""
    return len(sumset(a, b)) - len(a) - len(b) + 1


def diameter(a: ResidueSet) -> int:
    """Length of the shortest arithmetic progression covering a.

    Scans every difference class d: dilating by d^-1 and taking the largest
    cyclic gap g gives a shortest covering interval of length p - g + 1 for
    that class; the diameter is the minimum over classes.
    """
    _require_nonempty(a)
    return bitops.diameter_bits(a.mask, a.p)


def min_cover_ap(a: ResidueSet) -> ApDescriptor:
    """A canonical shortest covering progression (smallest class, then start)."""
    _require_nonempty(a)
    start, d, length = bitops.min_cover_bits(a.mask, a.p)
    return ApDescriptor(a.modulus, start, d, length).canonical()


def is_ap(a: ResidueSet) -> Optional[ApDescriptor]:
    """The canonical descriptor if a is itself an arithmetic progression."""
    _require_nonempty(a)
    cover = min_cover_ap(a)
    if cover.length == len(a):
        return cover
    return None


def is_short_covered(a: ResidueSet) -> bool:
    """True iff diam(a) <= |2a| - |a| + 1."""
    _require_nonempty(a)
    return diameter(a) <= len(double(a)) - len(a) + 1
