"""Checker outcomes.

A verdict separates "the hypotheses of the statement apply to this
instance" from "the asserted conclusion holds".  A false conclusion is a
counterexample, which is data to collect, never an exception; exceptions
are reserved for malformed input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True)
class TheoremVerdict:
    theorem_id: str
    instance: str
    hypotheses_met: bool
    conclusion_holds: Optional[bool]
    witness: Optional[dict[str, Any]] = None

    def __post_init__(self):
        if self.hypotheses_met and self.conclusion_holds is None:
            raise ValueError("conclusion must be decided when hypotheses are met")
        if not self.hypotheses_met and self.conclusion_holds is not None:
            raise ValueError("conclusion is undefined when hypotheses are not met")

    @property
    def holds(self) -> bool:
        """True iff hypotheses apply and the conclusion checks out."""
        return bool(self.hypotheses_met and self.conclusion_holds)

    @property
    def is_counterexample(self) -> bool:
        return self.hypotheses_met and self.conclusion_holds is False


def serialize_instance(a, b=None, **extra) -> str:
    """Stable text encoding of an instance out of set literals."""
    parts = [f"A={a.literal()}"]
    if b is not None:
        parts.append(f"B={b.literal()}")
    for key, value in extra.items():
        parts.append(f"{key}={value}")
    return ";".join(parts)
