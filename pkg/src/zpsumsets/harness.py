"""Enumeration engine, sampler, extremal search and report assembly.

Determinism contract: for a fixed configuration the produced report is
byte-identical across runs and across worker counts.  The instance space
is partitioned into a fixed number of logical chunks (independent of the
worker count); workers process whole chunks and the merge is associative
concatenation followed by a canonical sort of counterexamples.  Execution
parameters that legitimately vary between equivalent runs (worker count,
wall-clock timing) are therefore kept out of the canonical JSON document;
timing is reported on the console instead.
"""

from __future__ import annotations

import math
import multiprocessing
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import bitops, kernels
from .core import ResidueSet, prime_modulus
from .sampling import SplitMix64, mix64
from .theorems import DEFAULT_FREIMAN_CONSTANT, DEFAULT_FREIMAN_DIVISOR

SCHEMA = "zp-sumsets/1"

# Guard against accidental huge exhaustive runs (e.g. p = 31 pairs).
MAX_EXHAUSTIVE_INSTANCES = 1 << 28

# Fixed logical partition count; never derived from the worker count.
CHUNK_COUNT = 64

# Sampling gives up after this many rejected draws per requested instance.
SAMPLE_REJECTION_FACTOR = 1000


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class CardinalityFilters:
    """Optional bounds on |A| and |B|; None means unbounded."""

    min_a: Optional[int] = None
    max_a: Optional[int] = None
    min_b: Optional[int] = None
    max_b: Optional[int] = None

    @property
    def is_default(self) -> bool:
        return self == CardinalityFilters()

    def to_doc(self):
        if self.is_default:
            return None
        return {"min_a": self.min_a, "max_a": self.max_a, "min_b": self.min_b, "max_b": self.max_b}


@dataclass(frozen=True)
class SpaceSpec:
    kind: str  # single | pair | lemma2 | davenport
    min_a: int = 1
    min_b: int = 1


SPACES: dict[str, SpaceSpec] = {
    "cauchy_davenport": SpaceSpec("pair"),
    "lemma2": SpaceSpec("lemma2", min_a=2),
    "vosper": SpaceSpec("pair"),
    "hsz_standard": SpaceSpec("pair"),
    "hsz_conjecture": SpaceSpec("pair"),
    "theorem_con": SpaceSpec("pair"),
    "freiman_3k3": SpaceSpec("single"),
    "freiman_24": SpaceSpec("single"),
    "erdos_heilbronn": SpaceSpec("single", min_a=2),
    "symmetry": SpaceSpec("pair"),
    "davenport": SpaceSpec("davenport", min_b=2),
}

SEARCH_CRITERIA = ("cd_equality", "near_3k3", "hsz_tight")


@dataclass(frozen=True)
class RunConfig:
    theorem_id: str
    p: int
    mode: str = "exhaustive"  # exhaustive | sample
    sample_count: Optional[int] = None
    seed: Optional[int] = None
    workers: int = 1
    filters: CardinalityFilters = field(default_factory=CardinalityFilters)
    max_counterexamples: int = 100
    freiman_constant: Fraction = DEFAULT_FREIMAN_CONSTANT
    freiman_divisor: Fraction = DEFAULT_FREIMAN_DIVISOR

    def space(self) -> SpaceSpec:
        return SPACES[self.theorem_id]

    def bounds(self) -> tuple[int, int, int, int]:
        """Effective cardinality bounds after intersecting intrinsic constraints."""
        spec = self.space()
        f = self.filters
        amin = max(spec.min_a, f.min_a if f.min_a is not None else 1)
        amax = min(self.p, f.max_a if f.max_a is not None else self.p)
        bmin = max(spec.min_b, f.min_b if f.min_b is not None else 1)
        bmax = min(self.p, f.max_b if f.max_b is not None else self.p)
        return amin, amax, bmin, bmax

    def space_size(self) -> int:
        return _space_size(self.space().kind, self.p, self.bounds())

    def validate(self) -> None:
        if self.theorem_id not in SPACES:
            raise ConfigError(f"unknown theorem id {self.theorem_id!r}")
        try:
            prime_modulus(self.p)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.mode not in ("exhaustive", "sample"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "sample":
            if not self.sample_count or self.sample_count < 1:
                raise ConfigError("sample mode needs a positive sample count")
            if self.seed is None:
                raise ConfigError("sample mode needs a seed")
        else:
            size = self.space_size()
            if size > MAX_EXHAUSTIVE_INSTANCES:
                raise ConfigError(
                    f"exhaustive space has {size} instances, over the "
                    f"{MAX_EXHAUSTIVE_INSTANCES} guard; use sampling"
                )
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.max_counterexamples < 0:
            raise ConfigError("max counterexamples must be >= 0")
        if self.theorem_id == "freiman_24":
            if self.freiman_constant <= 2:
                raise ConfigError("freiman constant must exceed 2")
            if self.freiman_divisor <= 0:
                raise ConfigError("freiman bound divisor must be positive")
        for name in ("min_a", "max_a", "min_b", "max_b"):
            v = getattr(self.filters, name)
            if v is not None and not 0 <= v <= self.p:
                raise ConfigError(f"filter {name}={v} out of range [0, {self.p}]")

    def config_doc(self) -> dict:
        doc = {
            "theorem": self.theorem_id,
            "p": self.p,
            "mode": self.mode,
            "samples": self.sample_count,
            "seed": self.seed,
            "filters": self.filters.to_doc(),
            "max_counterexamples": self.max_counterexamples,
            "params": None,
        }
        if self.theorem_id == "freiman_24":
            doc["params"] = {
                "constant": str(self.freiman_constant),
                "divisor": str(self.freiman_divisor),
            }
        return doc


def _space_size(kind: str, p: int, bounds: tuple[int, int, int, int]) -> int:
    amin, amax, bmin, bmax = bounds
    ca = sum(math.comb(p, k) for k in range(amin, amax + 1)) if amax >= amin else 0
    if kind == "single":
        return ca
    if kind == "lemma2":
        return ca * (p - 1)
    if kind == "pair":
        cb = sum(math.comb(p, k) for k in range(bmin, bmax + 1)) if bmax >= bmin else 0
        return ca * cb
    if kind == "davenport":
        cb = sum(math.comb(p - 1, k - 1) for k in range(bmin, bmax + 1)) if bmax >= bmin else 0
        return ca * cb
    raise ValueError(f"unknown space kind {kind!r}")


@dataclass
class VerificationReport:
    config: RunConfig
    expected_space: int
    instances_tested: int
    hypothesis_met_count: int
    failure_total: int
    failures: list[str]
    by_cardinality: list[dict]
    partitions: list[dict]
    elapsed_ms: float

    def to_json_doc(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config.config_doc(),
            "expected_space": self.expected_space,
            "instances_tested": self.instances_tested,
            "hypothesis_met_count": self.hypothesis_met_count,
            "conclusion_failures": {
                "total": self.failure_total,
                "instances": list(self.failures),
            },
            "by_cardinality": self.by_cardinality,
            "partitions": self.partitions,
            # wall-clock timing varies between equivalent runs; the canonical
            # document stays byte-identical, timing goes to the console
            "elapsed_ms": None,
        }

    def summary(self) -> str:
        return (
            f"theorem={self.config.theorem_id} p={self.config.p} "
            f"mode={self.config.mode} tested={self.instances_tested} "
            f"hypothesis_met={self.hypothesis_met_count} "
            f"failures={self.failure_total} elapsed_ms={self.elapsed_ms:.1f}"
        )


def _chunk_ranges(length: int) -> list[tuple[int, int, int]]:
    """Fixed logical chunks over the outer mask range [1, 1+length)."""
    n = min(CHUNK_COUNT, length)
    out = []
    for i in range(n):
        lo = 1 + (length * i) // n
        hi = 1 + (length * (i + 1)) // n
        out.append((i, lo, hi))
    return out


def _chunk_checksum(index: int, lo: int, hi: int, tested: int, hyp: int, fails: int) -> str:
    h = mix64(0xC0FFEE ^ index)
    for v in (lo, hi, tested, hyp, fails):
        h = mix64(h ^ v)
    return f"{h:016x}"


def _build_job(config: RunConfig) -> dict:
    params = None
    if config.theorem_id == "freiman_3k3":
        params = kernels.FREIMAN_3K3_PARAMS
    elif config.theorem_id == "freiman_24":
        c, d = config.freiman_constant, config.freiman_divisor
        params = {
            "constant": (c.numerator, c.denominator),
            "divisor": (d.numerator, d.denominator),
        }
    return {
        "theorem": config.theorem_id,
        "kind": config.space().kind,
        "p": config.p,
        "bounds": config.bounds(),
        "cap": config.max_counterexamples,
        "params": params,
    }


def _chunk_worker(args) -> kernels.ChunkResult:
    job, index, lo, hi = args
    return kernels.evaluate_chunk(job, index, lo, hi)


def _b_universe_masks(kind: str, p: int, bounds) -> list[int]:
    _, _, bmin, bmax = bounds
    out = []
    for m in range(1, 1 << p):
        k = m.bit_count()
        if not bmin <= k <= bmax:
            continue
        if kind == "davenport" and not m & 1:
            continue
        out.append(m)
    return out


def _generic_chunk(job: dict, index: int, lo: int, hi: int, checker: Callable) -> kernels.ChunkResult:
    """Instance-at-a-time sweep; same order and counting as the fast kernels."""
    kind = job["kind"]
    p = job["p"]
    cap = job["cap"]
    amin, amax, _, _ = job["bounds"]
    out = kernels.ChunkResult(index, lo, hi)
    if kind == "single":
        for m in range(max(lo, 1), hi):
            k = m.bit_count()
            if not amin <= k <= amax:
                continue
            hyp, concl = checker(p, (m,))
            out.tested += 1
            key = (k, -1)
            out.add_card(key, tested=1)
            if hyp:
                out.hyp_met += 1
                out.add_card(key, met=1)
                if not concl:
                    out.record_failure((m,), cap)
                    out.add_card(key, fails=1)
        return out
    if kind == "lemma2":
        for m in range(max(lo, 1), hi):
            k = m.bit_count()
            if not amin <= k <= amax:
                continue
            key = (k, -1)
            for d in range(1, p):
                hyp, concl = checker(p, (m, d))
                out.tested += 1
                out.add_card(key, tested=1)
                if hyp:
                    out.hyp_met += 1
                    out.add_card(key, met=1)
                    if not concl:
                        out.record_failure((m, d), cap)
                        out.add_card(key, fails=1)
        return out
    b_univ = _b_universe_masks(kind, p, job["bounds"])
    for a in range(max(lo, 1), hi):
        ka = a.bit_count()
        if not amin <= ka <= amax:
            continue
        for b in b_univ:
            hyp, concl = checker(p, (a, b))
            out.tested += 1
            key = (ka, b.bit_count())
            out.add_card(key, tested=1)
            if hyp:
                out.hyp_met += 1
                out.add_card(key, met=1)
                if not concl:
                    out.record_failure((a, b), cap)
                    out.add_card(key, fails=1)
    return out


def _serialize_encoding(kind: str, p: int, enc: tuple) -> str:
    a = ResidueSet.from_mask(p, enc[0]).literal()
    if kind == "single":
        return f"A={a}"
    if kind == "lemma2":
        return f"A={a};d={enc[1]}"
    b = ResidueSet.from_mask(p, enc[1]).literal()
    if kind == "davenport" and len(enc) > 2:
        return f"A={a};B={b};check={enc[2]}"
    return f"A={a};B={b}"


def _merge(config: RunConfig, results: list[kernels.ChunkResult]) -> VerificationReport:
    kind = config.space().kind
    p = config.p
    tested = sum(r.tested for r in results)
    hyp = sum(r.hyp_met for r in results)
    fail_total = sum(r.fail_total for r in results)
    expected = config.space_size() if config.mode == "exhaustive" else (config.sample_count or 0)
    if tested != expected:
        raise RuntimeError(
            f"instance count {tested} does not match the closed form {expected}"
        )
    all_failures: list[tuple] = []
    for r in results:
        all_failures.extend(r.failures)
    all_failures.sort()
    capped = all_failures[: config.max_counterexamples]
    by_card: dict[tuple[int, int], list[int]] = {}
    for r in results:
        for key, row in r.by_card.items():
            tgt = by_card.get(key)
            if tgt is None:
                by_card[key] = list(row)
            else:
                tgt[0] += row[0]
                tgt[1] += row[1]
                tgt[2] += row[2]
    card_rows = [
        {
            "a": key[0],
            "b": None if key[1] < 0 else key[1],
            "tested": row[0],
            "hypothesis_met": row[1],
            "failures": row[2],
        }
        for key, row in sorted(by_card.items())
    ]
    partitions = [
        {
            "chunk": r.index,
            "lo": r.lo,
            "hi": r.hi,
            "checksum": _chunk_checksum(r.index, r.lo, r.hi, r.tested, r.hyp_met, r.fail_total),
        }
        for r in results
    ]
    return VerificationReport(
        config=config,
        expected_space=expected,
        instances_tested=tested,
        hypothesis_met_count=hyp,
        failure_total=fail_total,
        failures=[_serialize_encoding(kind, p, enc) for enc in capped],
        by_cardinality=card_rows,
        partitions=partitions,
        elapsed_ms=0.0,
    )


def _draw_instance(kind: str, p: int, bounds, rng: SplitMix64, budget: list[int]) -> tuple:
    amin, amax, bmin, bmax = bounds

    def subset(lo: int, hi: int, davenport_b: bool = False) -> int:
        while True:
            if budget[0] <= 0:
                raise ConfigError(
                    "sampling rejection budget exhausted; the filters are too "
                    "restrictive for random subsets of this size"
                )
            budget[0] -= 1
            m = rng.next_subset(p)
            if davenport_b and not m & 1:
                continue
            if lo <= m.bit_count() <= hi:
                return m

    if kind == "single":
        return (subset(amin, amax),)
    if kind == "lemma2":
        a = subset(amin, amax)
        return (a, 1 + rng.next_below(p - 1))
    if kind == "pair":
        return (subset(amin, amax), subset(bmin, bmax))
    if kind == "davenport":
        return (subset(amin, amax), subset(bmin, bmax, davenport_b=True))
    raise ValueError(f"unknown space kind {kind!r}")


def _run_sample(config: RunConfig, checker: Optional[Callable]) -> VerificationReport:
    job = _build_job(config)
    kind = job["kind"]
    p = config.p
    t = kernels.tables(p)
    rng = SplitMix64(config.seed or 0)
    budget = [config.sample_count * SAMPLE_REJECTION_FACTOR]
    out = kernels.ChunkResult(0, 0, config.sample_count)
    for _ in range(config.sample_count):
        inst = _draw_instance(kind, p, job["bounds"], rng, budget)
        if checker is not None:
            hyp, concl = checker(p, inst)
        else:
            hyp, concl = kernels.eval_instance(job["theorem"], p, inst, job["params"], t)
        out.tested += 1
        key = (inst[0].bit_count(), inst[1].bit_count() if kind in ("pair", "davenport") else -1)
        out.add_card(key, tested=1)
        if hyp:
            out.hyp_met += 1
            out.add_card(key, met=1)
            if not concl:
                out.record_failure(inst, config.max_counterexamples)
                out.add_card(key, fails=1)
    out.failures.sort()
    return _merge(config, [out])


def run_verification(config: RunConfig, checker: Optional[Callable] = None) -> VerificationReport:
    """Apply a theorem checker to every instance (exhaustive) or to a
    deterministic pseudorandom sample, and aggregate a report.

    ``checker`` overrides the registry evaluator; it must be a callable
    ``(p, instance_masks) -> (hypotheses_met, conclusion_or_None)``.  With
    an override the sweep runs in this process regardless of ``workers``.
    """
    config.validate()
    start = time.monotonic()
    if config.mode == "sample":
        report = _run_sample(config, checker)
        report.elapsed_ms = (time.monotonic() - start) * 1000.0
        return report

    job = _build_job(config)
    chunks = _chunk_ranges((1 << config.p) - 1)
    if checker is not None:
        results = [_generic_chunk(job, i, lo, hi, checker) for i, lo, hi in chunks]
    elif config.workers == 1 or len(chunks) == 1:
        results = [kernels.evaluate_chunk(job, i, lo, hi) for i, lo, hi in chunks]
    else:
        kernels.tables(config.p)  # build before forking so children share
        args = [(job, i, lo, hi) for i, lo, hi in chunks]
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=config.workers) as pool:
            results = pool.map(_chunk_worker, args)
    report = _merge(config, results)
    report.elapsed_ms = (time.monotonic() - start) * 1000.0
    return report


# ---------------------------------------------------------------------------
# extremal search
# ---------------------------------------------------------------------------


def _min_translate(p: int, members: tuple[int, ...]) -> tuple[int, ...]:
    best = None
    for anchor in members:
        cand = tuple(sorted((v - anchor) % p for v in members))
        if best is None or cand < best:
            best = cand
    return best  # type: ignore[return-value]


def _canon_single(p: int, m: int) -> tuple[int, ...]:
    best = None
    for x in range(1, p):
        mem = bitops.to_members(bitops.dilate(m, x, p))
        cand = _min_translate(p, mem)
        if best is None or cand < best:
            best = cand
    return best  # type: ignore[return-value]


def _canon_pair(p: int, a: int, b: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    best = None
    for x in range(1, p):
        ta = _min_translate(p, bitops.to_members(bitops.dilate(a, x, p)))
        tb = _min_translate(p, bitops.to_members(bitops.dilate(b, x, p)))
        cand = (ta, tb)
        if best is None or cand < best:
            best = cand
    return best  # type: ignore[return-value]


def extremal_search(
    p: int,
    criterion: str,
    filters: CardinalityFilters = CardinalityFilters(),
) -> list[str]:
    """Canonical witnesses of an extremal criterion, deduplicated.

    Witnesses are normalized under the affine symmetry group (common
    dilation, independent translations) to the lexicographically least
    representative containing 0, then sorted.
    """
    if criterion not in SEARCH_CRITERIA:
        raise ConfigError(f"unknown search criterion {criterion!r}")
    try:
        prime_modulus(p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    pairlike = criterion in ("cd_equality", "hsz_tight")
    kind = "pair" if pairlike else "single"
    amin = max(1, filters.min_a if filters.min_a is not None else 1)
    amax = min(p, filters.max_a if filters.max_a is not None else p)
    bmin = max(1, filters.min_b if filters.min_b is not None else 1)
    bmax = min(p, filters.max_b if filters.max_b is not None else p)
    bounds = (amin, amax, bmin, bmax)
    size = _space_size(kind, p, bounds)
    if size > MAX_EXHAUSTIVE_INSTANCES:
        raise ConfigError(f"search space has {size} instances, over the guard")
    if pairlike and p > kernels.MAX_TABLE_P:
        raise ConfigError(f"pair searches support p <= {kernels.MAX_TABLE_P}")

    seen = set()
    for _, lo, hi in _chunk_ranges((1 << p) - 1):
        if pairlike:
            for a, b in kernels.scan_pairs_extremal(criterion, p, lo, hi, bounds):
                seen.add(_canon_pair(p, a, b))
        else:
            for m in kernels.scan_singles_extremal(criterion, p, lo, hi, bounds):
                seen.add(_canon_single(p, m))
    out = []
    for key in sorted(seen):
        if pairlike:
            a = ResidueSet.of(p, key[0]).literal()
            b = ResidueSet.of(p, key[1]).literal()
            out.append(f"A={a};B={b}")
        else:
            out.append(ResidueSet.of(p, key).literal())
    return out
