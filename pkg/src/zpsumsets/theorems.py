"""One checker per structure theorem over Z/pZ.

Each checker takes a concrete instance and reports whether the statement's
hypotheses apply and, if so, whether its conclusion holds, together with a
witness that can be revalidated independently (covering descriptors really
cover, lengths match claims).  Checkers never raise on a false conclusion:
falsity is data for the harness to collect.

Checker ids (CLI ``--theorem`` values and report keys):
cauchy_davenport, lemma2, vosper, hsz_standard, hsz_conjecture,
theorem_con, freiman_3k3, freiman_24, erdos_heilbronn, symmetry.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from . import bitops
from .core import (
    AffineMap,
    ApDescriptor,
    ResidueSet,
    _require_nonempty,
    _require_same_modulus,
    affine_image,
    companion_set,
    deficiency,
    diameter,
    double,
    is_ap,
    is_short_covered,
    min_cover_ap,
    restricted_sumset,
    sumset,
)
from .verdict import TheoremVerdict, serialize_instance

THEOREM_IDS = (
    "cauchy_davenport",
    "lemma2",
    "vosper",
    "hsz_standard",
    "hsz_conjecture",
    "theorem_con",
    "freiman_3k3",
    "freiman_24",
    "erdos_heilbronn",
    "symmetry",
)

DEFAULT_FREIMAN_CONSTANT = Fraction(12, 5)  # 2.4
DEFAULT_FREIMAN_DIVISOR = Fraction(35)


def cauchy_davenport(a: ResidueSet, b: ResidueSet) -> TheoremVerdict:
    """|A+B| >= |A| + |B| - 1 whenever A+B is not all of Z/pZ.

    The witness also records the unconditional form
    |A+B| >= min(p, |A| + |B| - 1), which needs no hypothesis.
    """
    s = sumset(a, b)
    p = a.p
    witness = {
        "sumset_size": len(s),
        "bound": len(a) + len(b) - 1,
        "unconditional_holds": len(s) >= min(p, len(a) + len(b) - 1),
    }
    met = not s.is_full
    return TheoremVerdict(
        theorem_id="cauchy_davenport",
        instance=serialize_instance(a, b),
        hypotheses_met=met,
        conclusion_holds=(len(s) >= len(a) + len(b) - 1) if met else None,
        witness=witness,
    )


def lemma2_two_point(a: ResidueSet, d: int) -> TheoremVerdict:
    """If |{0,d}+A| <= 1+|A| then A is a progression with difference d (up to sign)."""
    p = a.p
    if d % p == 0:
        raise ValueError("d must be nonzero")
    if len(a) < 2:
        raise ValueError("needs |A| >= 2")
    d %= p
    two = ResidueSet.of(a.modulus, (0, d))
    s = sumset(two, a)
    met = len(s) <= 1 + len(a)
    instance = serialize_instance(a, d=d)
    if not met:
        return TheoremVerdict("lemma2", instance, False, None)
    dc = min(d, p - d) if p > 2 else 1
    length, start = bitops.cover_for_difference(a.mask, dc, p)
    holds = length == len(a)
    witness = None
    if holds:
        witness = {"descriptor": ApDescriptor(a.modulus, start, dc, length).canonical()}
    return TheoremVerdict("lemma2", instance, True, holds, witness)


def vosper(a: ResidueSet, b: ResidueSet) -> TheoremVerdict:
    """At Cauchy-Davenport equality with |B| >= 2 and |C| >= 2, A is a progression."""
    _require_same_modulus(a, b)
    _require_nonempty(a, b)
    r = deficiency(a, b)
    c = companion_set(a, b)
    met = len(b) >= 2 and len(c) >= 2 and r == 0
    instance = serialize_instance(a, b)
    if not met:
        return TheoremVerdict("vosper", instance, False, None)
    desc = is_ap(a)
    return TheoremVerdict(
        "vosper",
        instance,
        True,
        desc is not None,
        {"descriptor": desc} if desc is not None else None,
    )


def _validated_pair_cover(a: ResidueSet, b: ResidueSet, d: int, r: int) -> Optional[dict]:
    """Common-difference covers of A and B extended to lengths |A|+r, |B|+r.

    Returns the witness only if it revalidates: both expansions cover, the
    lengths are exact, and the canonical difference class is shared.
    """
    p = a.p
    len_a, start_a = bitops.cover_for_difference(a.mask, d, p)
    len_b, start_b = bitops.cover_for_difference(b.mask, d, p)
    if len_a > len(a) + r or len_b > len(b) + r:
        return None
    # Extension on the right end keeps the start; |A|+r <= p - 4 under the
    # gates, so the extended progression stays injective.
    cover_a = ApDescriptor(a.modulus, start_a, d, len(a) + r).canonical()
    cover_b = ApDescriptor(b.modulus, start_b, d, len(b) + r).canonical()
    if not cover_a.covers(a) or not cover_b.covers(b):
        return None
    if cover_a.length != len(a) + r or cover_b.length != len(b) + r:
        return None
    if cover_a.diff != cover_b.diff:
        return None
    return {"difference": d, "cover_a": cover_a, "cover_b": cover_b}


def hsz(a: ResidueSet, b: ResidueSet, variant: str = "standard") -> TheoremVerdict:
    """Simultaneous short covers of A and B with one common difference.

    Gates with r = deficiency and C the companion set:
      standard:   |A| >= r+3, |B| >= r+3, |C| >= r+2
      conjecture: |A| >= r+2, |B| >= r+3, |C| >= r+3
    Conclusion: some difference class d admits covering progressions of A
    and B of lengths at most |A|+r and |B|+r; the witness carries both
    covers extended to those exact lengths.
    """
    if variant not in ("standard", "conjecture"):
        raise ValueError(f"unknown variant {variant!r}")
    _require_same_modulus(a, b)
    _require_nonempty(a, b)
    p = a.p
    r = deficiency(a, b)
    c = companion_set(a, b)
    if variant == "standard":
        met = r >= 0 and len(a) >= r + 3 and len(b) >= r + 3 and len(c) >= r + 2
    else:
        met = r >= 0 and len(a) >= r + 2 and len(b) >= r + 3 and len(c) >= r + 3
    theorem_id = f"hsz_{variant}"
    instance = serialize_instance(a, b)
    if not met:
        return TheoremVerdict(theorem_id, instance, False, None)
    for d in bitops.difference_classes(p):
        witness = _validated_pair_cover(a, b, d, r)
        if witness is not None:
            return TheoremVerdict(theorem_id, instance, True, True, witness)
    return TheoremVerdict(theorem_id, instance, True, False)


def theorem_con(a: ResidueSet, b: ResidueSet) -> TheoremVerdict:
    """diam(A) <= |A| + r under r >= 0, |B| >= r+3, |C| >= r+2."""
    _require_same_modulus(a, b)
    _require_nonempty(a, b)
    r = deficiency(a, b)
    c = companion_set(a, b)
    met = r >= 0 and len(b) >= r + 3 and len(c) >= r + 2
    instance = serialize_instance(a, b)
    if not met:
        return TheoremVerdict("theorem_con", instance, False, None)
    diam = diameter(a)
    holds = diam <= len(a) + r
    witness = {"diameter": diam, "bound": len(a) + r}
    if holds:
        witness["cover"] = min_cover_ap(a)
    return TheoremVerdict("theorem_con", instance, True, holds, witness)


def freiman_3k3(a: ResidueSet) -> TheoremVerdict:
    """If |2A| < 3k-3 and k < p/4 + 3/2 then A has a short progression cover."""
    _require_nonempty(a)
    k = len(a)
    p = a.p
    t = len(double(a))
    met = t < 3 * k - 3 and 4 * k < p + 6
    instance = serialize_instance(a)
    if not met:
        return TheoremVerdict("freiman_3k3", instance, False, None)
    holds = is_short_covered(a)
    witness = {"doubling": t, "cover": min_cover_ap(a)} if holds else {"doubling": t}
    return TheoremVerdict("freiman_3k3", instance, True, holds, witness)


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def freiman_24(
    a: ResidueSet,
    constant=DEFAULT_FREIMAN_CONSTANT,
    bound_divisor=DEFAULT_FREIMAN_DIVISOR,
) -> TheoremVerdict:
    """If |2A| <= constant*k - 3 and k < p/bound_divisor, A has a short cover.

    Defaults are constant 2.4 with divisor 35; the relaxed divisors 10.7
    and ~2.8 are selectable configurations, not code.
    """
    constant = _as_fraction(constant)
    bound_divisor = _as_fraction(bound_divisor)
    if constant <= 2:
        raise ValueError("constant must exceed 2")
    if bound_divisor <= 0:
        raise ValueError("bound divisor must be positive")
    _require_nonempty(a)
    k = len(a)
    p = a.p
    t = len(double(a))
    met = Fraction(t) <= constant * k - 3 and Fraction(k) < Fraction(p) / bound_divisor
    instance = serialize_instance(a)
    if not met:
        return TheoremVerdict("freiman_24", instance, False, None)
    holds = is_short_covered(a)
    witness = {"doubling": t, "cover": min_cover_ap(a)} if holds else {"doubling": t}
    return TheoremVerdict("freiman_24", instance, True, holds, witness)


def erdos_heilbronn(a: ResidueSet) -> TheoremVerdict:
    """Restricted sumset size s >= min(p, 2k-3); no hypothesis beyond k >= 2."""
    if len(a) < 2:
        raise ValueError("needs |A| >= 2")
    p = a.p
    k = len(a)
    s = len(restricted_sumset(a))
    bound = min(p, 2 * k - 3)
    return TheoremVerdict(
        "erdos_heilbronn",
        serialize_instance(a),
        True,
        s >= bound,
        {"restricted_size": s, "bound": bound},
    )


def distinct_sum_chain(a: ResidueSet) -> list[int]:
    """The explicit chain of 2k-3 pairwise sums from the min-cover dilation.

    Normalizes A by the affine map sending its minimal cover onto the
    interval {0, ..., diam-1}, takes the integer representatives
    0 = r_0 < ... < r_{k-1}, and returns
    r_0+r_1, ..., r_0+r_{k-1}, r_1+r_{k-1}, ..., r_{k-2}+r_{k-1} mod p.
    The entries are guaranteed distinct when diam(A) <= 2k-3 and
    p >= 4k-5; each lies in the restricted sumset of the normalized set.
    """
    k = len(a)
    if k < 2:
        raise ValueError("needs |A| >= 2")
    p = a.p
    cover = min_cover_ap(a)
    x = pow(cover.diff, -1, p)
    norm = affine_image(a, AffineMap(a.modulus, x, (-x * cover.start) % p))
    reps = list(norm.members())
    chain = [(reps[0] + reps[i]) % p for i in range(1, k)]
    chain.extend((reps[i] + reps[k - 1]) % p for i in range(1, k - 1))
    return chain


def symmetry_identity(a: ResidueSet, b: ResidueSet) -> TheoremVerdict:
    """p + 1 - r = |A| + |B| + |C|, with r symmetric in the triple sum.

    Asserts the cardinality identity, that r(A,B) = r(B,A) via an
    independent computation of B+A, and that the triple actually satisfies
    A + B + C = nonzero residues, which makes the identity's right side a
    symmetric function of the triple.
    """
    _require_same_modulus(a, b)
    _require_nonempty(a, b)
    p = a.p
    s = sumset(a, b)
    instance = serialize_instance(a, b)
    if s.is_full:
        return TheoremVerdict("symmetry", instance, False, None)
    c = companion_set(a, b)
    r = len(s) - len(a) - len(b) + 1
    identity = p + 1 - r == len(a) + len(b) + len(c)
    commuted = deficiency(b, a) == r
    triple = sumset(s, c).mask == bitops.full_mask(p) ^ 1
    return TheoremVerdict(
        "symmetry",
        instance,
        True,
        identity and commuted and triple,
        {"companion": c.literal(), "deficiency": r},
    )
