"""The Davenport transform and its descent inequalities as executable checks.

Standing hypotheses for a transform site: 0 in B, |B| >= 2, and A+B not
all of Z/pZ.  Given the excess set E = (A+2B) \\ (A+B) and e in E, B
splits into a lower part B cap (e + C) and an upper part B cap (e + C-bar),
where C is the companion set of (A, B).  Each inequality the transform
supports is checked on concrete instances; a failed inequality is a
counterexample verdict, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from . import bitops
from .core import (
    ModulusMismatchError,
    ResidueSet,
    companion_set,
    complement,
    deficiency,
    sumset,
)
from .verdict import TheoremVerdict, serialize_instance


class HypothesisError(ValueError):
    """A transform precondition failed; ``hypothesis`` names which one."""

    def __init__(self, hypothesis: str, message: str):
        super().__init__(message)
        self.hypothesis = hypothesis


@dataclass(frozen=True)
class TransformContext:
    """A pair (A, B) meeting the standing hypotheses, with derived sets.

    ``excess`` is E = (A+2B) cap complement(A+B).  E is provably nonempty
    under the standing hypotheses; the suite surfaces an empty E as a
    counterexample instead of assuming the proof.
    """

    a: ResidueSet
    b: ResidueSet
    sum: ResidueSet  # A + B
    companion: ResidueSet  # C = -(complement of A+B)
    excess: ResidueSet  # E

    @property
    def p(self) -> int:
        return self.a.p


@dataclass(frozen=True)
class DavenportSplit:
    """The partition of B at a transform site e: lower = B_e, upper = B^e."""

    e: int
    lower: ResidueSet
    upper: ResidueSet


def build_context(a: ResidueSet, b: ResidueSet) -> TransformContext:
    """Validate the standing hypotheses and precompute A+B, C and E."""
    if a.modulus.p != b.modulus.p:
        raise ModulusMismatchError(f"moduli differ: {a.modulus.p} vs {b.modulus.p}")
    if a.is_empty or b.is_empty:
        raise HypothesisError("nonempty", "A and B must be non-empty")
    if 0 not in b:
        raise HypothesisError("zero_in_b", "B must contain 0")
    if len(b) < 2:
        raise HypothesisError("b_size", "B must have at least 2 members")
    s = sumset(a, b)
    if s.is_full:
        raise HypothesisError("sumset_full", "A+B must not cover Z/pZ")
    c = companion_set(a, b)
    a2b = sumset(s, b)  # A + 2B
    excess = ResidueSet(a.modulus, a2b.mask & ~s.mask)
    return TransformContext(a=a, b=b, sum=s, companion=c, excess=excess)


def anchored_at_zero(b: ResidueSet, anchor: Optional[int] = None) -> ResidueSet:
    """Translate B by -anchor so that 0 becomes a member.

    Every check here is invariant under this translation; it is kept as an
    explicit step so the provenance of instances stays clear.  Defaults to
    the smallest member.
    """
    if b.is_empty:
        raise HypothesisError("nonempty", "cannot anchor an empty set")
    if anchor is None:
        anchor = min(b.members())
    elif anchor not in b:
        raise ValueError(f"anchor {anchor} is not a member of {b.literal()}")
    return ResidueSet(b.modulus, bitops.rotate(b.mask, -anchor, b.p))


def split(ctx: TransformContext, e: int) -> DavenportSplit:
    """The partition of B at excess element e."""
    if e not in ctx.excess:
        raise ValueError(f"e={e} is not in E={ctx.excess.literal()}")
    p = ctx.p
    shifted_c = bitops.rotate(ctx.companion.mask, e, p)
    lower = ResidueSet(ctx.a.modulus, ctx.b.mask & shifted_c)
    upper = ResidueSet(ctx.a.modulus, ctx.b.mask & bitops.rotate(complement(ctx.companion).mask, e, p))
    return DavenportSplit(e=e, lower=lower, upper=upper)


def splits(ctx: TransformContext) -> Iterator[DavenportSplit]:
    for e in ctx.excess:
        yield split(ctx, e)


def _site_instance(ctx: TransformContext, e: int) -> str:
    return serialize_instance(ctx.a, ctx.b, e=e)


def check_containment(ctx: TransformContext, s: DavenportSplit) -> TheoremVerdict:
    """A+B contains (A + lower) and (e - upper), disjointly."""
    p = ctx.p
    a_lower = bitops.add_sets(ctx.a.mask, s.lower.mask, p) if s.lower.mask else 0
    e_minus_upper = bitops.rotate(bitops.negate(s.upper.mask, p), s.e, p)
    inside_a = a_lower & ~ctx.sum.mask == 0
    inside_e = e_minus_upper & ~ctx.sum.mask == 0
    disjoint = a_lower & e_minus_upper == 0
    ok = inside_a and inside_e and disjoint
    return TheoremVerdict(
        theorem_id="davenport_containment",
        instance=_site_instance(ctx, s.e),
        hypotheses_met=True,
        conclusion_holds=ok,
        witness={
            "a_plus_lower": ResidueSet(ctx.a.modulus, a_lower).literal(),
            "e_minus_upper": ResidueSet(ctx.a.modulus, e_minus_upper).literal(),
        },
    )


def check_descent(ctx: TransformContext, s: DavenportSplit) -> TheoremVerdict:
    """|A+B| - |B| >= |A + lower| - |lower|."""
    if s.lower.is_empty:
        raise ValueError("descent needs a non-empty lower part")
    a_lower = bitops.add_sets(ctx.a.mask, s.lower.mask, ctx.p)
    lhs = len(ctx.sum) - len(ctx.b)
    rhs = a_lower.bit_count() - len(s.lower)
    return TheoremVerdict(
        theorem_id="davenport_descent",
        instance=_site_instance(ctx, s.e),
        hypotheses_met=True,
        conclusion_holds=lhs >= rhs,
        witness={"lhs": lhs, "rhs": rhs},
    )


def lemma1_check(ctx: TransformContext) -> TheoremVerdict:
    """When every site has lower = {0}: |B| <= r+2, or |C| <= r+1 if A+2B is full."""
    instance = serialize_instance(ctx.a, ctx.b)
    all_single = all(s.lower.mask == 1 for s in splits(ctx))
    if not ctx.excess.is_empty and not all_single:
        return TheoremVerdict(
            theorem_id="davenport_lemma1",
            instance=instance,
            hypotheses_met=False,
            conclusion_holds=None,
        )
    r = deficiency(ctx.a, ctx.b)
    a2b_full = (ctx.sum.mask | ctx.excess.mask) == bitops.full_mask(ctx.p)
    if a2b_full:
        ok = len(ctx.companion) <= r + 1
        bound = {"companion_size": len(ctx.companion), "bound": r + 1}
    else:
        ok = len(ctx.b) <= r + 2
        bound = {"b_size": len(ctx.b), "bound": r + 2}
    return TheoremVerdict(
        theorem_id="davenport_lemma1",
        instance=instance,
        hypotheses_met=True,
        conclusion_holds=ok,
        witness=bound,
    )
