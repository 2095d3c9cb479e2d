"""Mask-level evaluation kernels for the verification harness.

The object layer in :mod:`zpsumsets.theorems` favors clarity; exhaustive
enumeration over 10^7+ instances needs flat int/NumPy code instead.  Two
layers live here:

* per-instance evaluators (`eval_instance`) on raw bitmasks, used by the
  sampler and by agreement tests against the object checkers;
* chunk evaluators (`evaluate_chunk`) that sweep a contiguous range of
  the instance space, vectorizing the per-pair sumset cardinalities with
  a subset-OR (zeta) transform and finishing the rare gated instances in
  Python.

Both layers must agree with the object checkers exactly; the test suite
enforces that on sampled instances and on full small spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bitops

# Lookup tables are built for p up to this bound (2^13 masks); pair-space
# enumeration is only ever allowed in that range by the space-size guard.
MAX_TABLE_P = 13

_POP16 = None


def _pop16() -> np.ndarray:
    global _POP16
    if _POP16 is None:
        t = np.zeros(1 << 16, dtype=np.int64)
        for i in range(16):
            t[(1 << i):(2 << i)] = t[: 1 << i] + 1
        _POP16 = t
    return _POP16


def popcount_vec(arr: np.ndarray) -> np.ndarray:
    """Per-element popcount for masks below 2^32."""
    t = _pop16()
    return t[arr & 0xFFFF] + t[(arr >> 16) & 0xFFFF]


def rotate_vec(arr: np.ndarray, k: int, p: int) -> np.ndarray:
    """Cyclic left shift within p bits, elementwise."""
    k %= p
    if k == 0:
        return arr
    full = (1 << p) - 1
    return ((arr << k) | (arr >> (p - k))) & full


class SmallTables:
    """Per-prime lookup tables over all 2^p masks (p <= MAX_TABLE_P)."""

    def __init__(self, p: int):
        self.p = p
        self.full = bitops.full_mask(p)
        size = 1 << p
        self.size = size

        pop = [0] * size
        for m in range(1, size):
            pop[m] = pop[m >> 1] + (m & 1)
        self.pop = pop
        self.pop_np = np.array(pop, dtype=np.int64)

        neg = [0] * size
        for m in range(1, size):
            low = m & -m
            i = low.bit_length() - 1
            neg[m] = neg[m ^ low] | (1 << (0 if i == 0 else p - i))
        self.neg = neg

        self.classes = bitops.difference_classes(p)
        dil: dict[int, list[int]] = {}
        for d in self.classes:
            inv = pow(d, -1, p)
            perm = [(inv * i) % p for i in range(p)]
            t = [0] * size
            for m in range(1, size):
                low = m & -m
                t[m] = t[m ^ low] | (1 << perm[low.bit_length() - 1])
            dil[d] = t
        self.dil = dil
        self.dil_np = {d: np.array(t, dtype=np.int64) for d, t in dil.items()}

        cover = [0] * size
        for m in range(1, size):
            members = list(bitops.iter_bits(m))
            gap = members[0] + p - members[-1]
            for j in range(1, len(members)):
                gap = max(gap, members[j] - members[j - 1])
            cover[m] = p - gap + 1
        self.cover = cover
        self.cover_np = np.array(cover, dtype=np.int64)

        diam = [0] * size
        for m in range(1, size):
            diam[m] = min(cover[dil[d][m]] for d in self.classes)
        self.diam = diam

        # triple-sum property of a sumset mask s != full:
        # s + (-(complement of s)) covers exactly the nonzero residues
        nonzero = self.full ^ 1
        triple = [False] * size
        for s in range(1, size):
            if s == self.full:
                triple[s] = True  # hypothesis excludes the full sumset
            else:
                triple[s] = bitops.add_sets(s, self.neg[self.full ^ s], p) == nonzero
        self.triple_ok = triple


_TABLES: dict[int, SmallTables] = {}


def tables(p: int):
    if p > MAX_TABLE_P:
        return None
    t = _TABLES.get(p)
    if t is None:
        t = SmallTables(p)
        _TABLES[p] = t
    return t


# ---------------------------------------------------------------------------
# per-instance evaluators
# ---------------------------------------------------------------------------


def _freiman_gate(t2: int, k: int, p: int, params: dict) -> bool:
    cnum, cden = params["constant"]
    dnum, dden = params["divisor"]
    if params.get("strict_3k3"):
        return t2 < 3 * k - 3 and 4 * k < p + 6
    return cden * t2 <= cnum * k - 3 * cden and dnum * k < dden * p


def _hsz_gate(r: int, ka: int, kb: int, kc: int, variant: str) -> bool:
    if variant == "standard":
        return r >= 0 and ka >= r + 3 and kb >= r + 3 and kc >= r + 2
    return r >= 0 and ka >= r + 2 and kb >= r + 3 and kc >= r + 3


def _hsz_concl(p: int, a: int, b: int, r: int, t=None) -> bool:
    """Scan difference classes for a validated simultaneous short cover."""
    ka = a.bit_count()
    kb = b.bit_count()
    for d in bitops.difference_classes(p):
        if t is not None:
            if t.cover[t.dil[d][a]] > ka + r or t.cover[t.dil[d][b]] > kb + r:
                continue
        la, sa = bitops.cover_for_difference(a, d, p)
        if la > ka + r:
            continue
        lb, sb = bitops.cover_for_difference(b, d, p)
        if lb > kb + r:
            continue
        # revalidate the extended witness: covers, exact lengths, shared d
        ma = bitops.ap_mask(sa, d, ka + r, p)
        mb = bitops.ap_mask(sb, d, kb + r, p)
        if a & ~ma or b & ~mb:
            continue
        if ma.bit_count() != ka + r or mb.bit_count() != kb + r:
            continue
        return True
    return False


def _davenport_suite(p: int, a: int, b: int, t=None):
    """All transform-site checks for one admissible (A, B).

    Returns (hypotheses_met, conclusion, failing_check).  The hypothesis is
    A+B != Z/pZ; 0 in B and |B| >= 2 are intrinsic to the instance space.
    """
    full = bitops.full_mask(p)
    s = bitops.add_sets(a, b, p)
    if s == full:
        return False, None, None
    c = t.neg[full ^ s] if t is not None else bitops.companion_bits(s, p)
    a2b = bitops.add_sets(s, b, p)
    e_mask = a2b & ~s
    if e_mask == 0:
        return True, False, "empty_excess"
    if (s | e_mask) != a2b or (s & e_mask):
        return True, False, "excess_decomposition"
    kb = b.bit_count()
    sp = s.bit_count()
    r = sp - a.bit_count() - kb + 1
    cbar = full ^ c
    all_single = True
    for e in bitops.iter_bits(e_mask):
        lower = b & bitops.rotate(c, e, p)
        upper = b & bitops.rotate(cbar, e, p)
        if (lower | upper) != b or (lower & upper):
            return True, False, f"partition:e={e}"
        if not lower & 1:
            return True, False, f"zero_in_lower:e={e}"
        pl = lower.bit_count()
        if not 1 <= pl <= kb - 1:
            return True, False, f"rek1:e={e}"
        if lower != 1:
            all_single = False
        a_lower = bitops.add_sets(a, lower, p)
        e_minus_upper = bitops.rotate(bitops.negate(upper, p), e, p)
        if a_lower & ~s:
            return True, False, f"containment_lower:e={e}"
        if e_minus_upper & ~s:
            return True, False, f"containment_upper:e={e}"
        if a_lower & e_minus_upper:
            return True, False, f"overlap:e={e}"
        if sp - kb < a_lower.bit_count() - pl:
            return True, False, f"rek2:e={e}"
    if all_single:
        if a2b != full:
            if kb > r + 2:
                return True, False, "lemma1_b"
        elif p - sp > r + 1:
            return True, False, "lemma1_c"
    return True, True, None


def eval_instance(theorem: str, p: int, inst: tuple, params: dict | None = None, t=None):
    """Evaluate one instance on raw masks; returns (hypotheses_met, conclusion)."""
    full = bitops.full_mask(p)
    if theorem == "cauchy_davenport":
        a, b = inst
        s = bitops.add_sets(a, b, p)
        if s == full:
            return False, None
        return True, s.bit_count() >= a.bit_count() + b.bit_count() - 1
    if theorem == "vosper":
        a, b = inst
        s = bitops.add_sets(a, b, p)
        ka, kb, sp = a.bit_count(), b.bit_count(), s.bit_count()
        if not (kb >= 2 and p - sp >= 2 and sp - ka - kb + 1 == 0):
            return False, None
        diam = t.diam[a] if t is not None else bitops.diameter_bits(a, p)
        return True, diam == ka
    if theorem in ("hsz_standard", "hsz_conjecture"):
        a, b = inst
        s = bitops.add_sets(a, b, p)
        ka, kb, sp = a.bit_count(), b.bit_count(), s.bit_count()
        r = sp - ka - kb + 1
        if not _hsz_gate(r, ka, kb, p - sp, theorem.removeprefix("hsz_")):
            return False, None
        return True, _hsz_concl(p, a, b, r, t)
    if theorem == "theorem_con":
        a, b = inst
        s = bitops.add_sets(a, b, p)
        ka, kb, sp = a.bit_count(), b.bit_count(), s.bit_count()
        r = sp - ka - kb + 1
        if not (r >= 0 and kb >= r + 3 and p - sp >= r + 2):
            return False, None
        diam = t.diam[a] if t is not None else bitops.diameter_bits(a, p)
        return True, diam <= ka + r
    if theorem == "symmetry":
        a, b = inst
        s = bitops.add_sets(a, b, p)
        if s == full:
            return False, None
        sp = s.bit_count()
        c = t.neg[full ^ s] if t is not None else bitops.companion_bits(s, p)
        ka, kb = a.bit_count(), b.bit_count()
        r = sp - ka - kb + 1
        ok = p + 1 - r == ka + kb + c.bit_count()
        ok = ok and bitops.add_sets(b, a, p).bit_count() - ka - kb + 1 == r
        if t is not None:
            ok = ok and t.triple_ok[s]
        else:
            ok = ok and bitops.add_sets(s, c, p) == full ^ 1
        return True, ok
    if theorem == "davenport":
        a, b = inst
        hyp, concl, _ = _davenport_suite(p, a, b, t)
        return hyp, concl
    if theorem == "lemma2":
        a, d = inst
        k = a.bit_count()
        s = a | bitops.rotate(a, d, p)
        if s.bit_count() > 1 + k:
            return False, None
        dc = min(d, p - d) if p > 2 else 1
        if t is not None:
            return True, t.cover[t.dil[dc][a]] == k
        return True, bitops.cover_for_difference(a, dc, p)[0] == k
    if theorem == "erdos_heilbronn":
        (a,) = inst
        k = a.bit_count()
        s = bitops.restricted_sums(a, p).bit_count()
        return True, s >= min(p, 2 * k - 3)
    if theorem in ("freiman_3k3", "freiman_24"):
        (a,) = inst
        k = a.bit_count()
        t2 = bitops.double_set(a, p).bit_count()
        if not _freiman_gate(t2, k, p, params or FREIMAN_3K3_PARAMS):
            return False, None
        diam = t.diam[a] if t is not None else bitops.diameter_bits(a, p)
        return True, diam <= t2 - k + 1
    raise ValueError(f"unknown theorem id {theorem!r}")


FREIMAN_3K3_PARAMS = {"strict_3k3": True, "constant": (3, 1), "divisor": (1, 4)}


# ---------------------------------------------------------------------------
# chunk evaluation
# ---------------------------------------------------------------------------


@dataclass
class ChunkResult:
    index: int
    lo: int
    hi: int
    tested: int = 0
    hyp_met: int = 0
    fail_total: int = 0
    failures: list = field(default_factory=list)  # encodings, ascending
    by_card: dict = field(default_factory=dict)  # (ka, kb) -> [tested, met, fails]

    def add_card(self, key, tested=0, met=0, fails=0):
        row = self.by_card.get(key)
        if row is None:
            row = [0, 0, 0]
            self.by_card[key] = row
        row[0] += tested
        row[1] += met
        row[2] += fails

    def record_failure(self, encoding, cap):
        self.fail_total += 1
        if len(self.failures) < cap:
            self.failures.append(encoding)


def _sos_sumsets(buf: np.ndarray, amask: int, p: int) -> None:
    """Fill buf[B] with the mask of A+B for every B, via a subset-OR transform."""
    buf.fill(0)
    for i in range(p):
        buf[1 << i] = bitops.rotate(amask, i, p)
    step = 1
    n = buf.shape[0]
    while step < n:
        v = buf.reshape(-1, 2 * step)
        v[:, step:] |= v[:, :step]
        step <<= 1


def _b_universe(job: dict, t) -> tuple[np.ndarray, np.ndarray]:
    size = t.size
    idx = np.arange(size, dtype=np.int64)
    _, _, bmin, bmax = job["bounds"]
    sel = (t.pop_np >= bmin) & (t.pop_np <= bmax) & (idx > 0)
    if job["kind"] == "davenport":
        sel &= (idx & 1) == 1
    b_idx = idx[sel]
    return b_idx, t.pop_np[b_idx]


def evaluate_chunk(job: dict, index: int, lo: int, hi: int) -> ChunkResult:
    kind = job["kind"]
    if kind == "single":
        return _single_chunk(job, index, lo, hi)
    if kind == "lemma2":
        return _lemma2_chunk(job, index, lo, hi)
    return _pair_chunk(job, index, lo, hi)


def _single_chunk(job: dict, index: int, lo: int, hi: int) -> ChunkResult:
    theorem = job["theorem"]
    p = job["p"]
    cap = job["cap"]
    amin, amax, _, _ = job["bounds"]
    t = tables(p)
    out = ChunkResult(index, lo, hi)

    arr = np.arange(max(lo, 1), hi, dtype=np.int64)
    k = popcount_vec(arr)
    sel = (k >= amin) & (k <= amax)
    arr = arr[sel]
    k = k[sel]
    out.tested = int(arr.shape[0])
    if out.tested == 0:
        return out
    tested_by_k = np.bincount(k, minlength=p + 2)

    if theorem == "erdos_heilbronn":
        res = np.zeros_like(arr)
        for a in range(p):
            has = (arr >> a) & 1
            contrib = rotate_vec(arr, a, p) & ~(1 << ((2 * a) % p))
            res |= contrib & -has
        s = popcount_vec(res)
        concl = s >= np.minimum(p, 2 * k - 3)
        out.hyp_met = out.tested
        met_by_k = tested_by_k.copy()
        fail_idx = np.nonzero(~concl)[0]
        fails_by_k = np.zeros(p + 2, dtype=np.int64)
        for j in fail_idx:
            out.record_failure((int(arr[j]),), cap)
            fails_by_k[int(k[j])] += 1
    elif theorem in ("freiman_3k3", "freiman_24"):
        params = job["params"]
        cnum, cden = params["constant"]
        dnum, dden = params["divisor"]
        if params.get("strict_3k3"):
            k_gate = 4 * k < p + 6
        else:
            k_gate = dnum * k < dden * p
        sub = arr[k_gate]
        ksub = k[k_gate]
        met_by_k = np.zeros(p + 2, dtype=np.int64)
        fails_by_k = np.zeros(p + 2, dtype=np.int64)
        if sub.shape[0]:
            t2 = np.zeros_like(sub)
            for a in range(p):
                has = (sub >> a) & 1
                t2 |= rotate_vec(sub, a, p) & -has
            t2c = popcount_vec(t2)
            if params.get("strict_3k3"):
                hyp = t2c < 3 * ksub - 3
            else:
                hyp = cden * t2c <= cnum * ksub - 3 * cden
            out.hyp_met = int(np.count_nonzero(hyp))
            met_by_k += np.bincount(ksub[hyp], minlength=p + 2)
            for j in np.nonzero(hyp)[0]:
                m = int(sub[j])
                diam = t.diam[m] if t is not None else bitops.diameter_bits(m, p)
                if diam > int(t2c[j]) - int(ksub[j]) + 1:
                    out.record_failure((m,), cap)
                    fails_by_k[int(ksub[j])] += 1
    else:
        raise ValueError(f"{theorem!r} is not a single-set theorem")

    for kk in range(p + 1):
        if tested_by_k[kk]:
            out.add_card((kk, -1), int(tested_by_k[kk]), int(met_by_k[kk]), int(fails_by_k[kk]))
    return out


def _lemma2_chunk(job: dict, index: int, lo: int, hi: int) -> ChunkResult:
    p = job["p"]
    cap = job["cap"]
    amin, amax, _, _ = job["bounds"]
    t = tables(p)
    out = ChunkResult(index, lo, hi)

    arr = np.arange(max(lo, 1), hi, dtype=np.int64)
    k = popcount_vec(arr)
    sel = (k >= amin) & (k <= amax)
    arr = arr[sel]
    k = k[sel]
    if arr.shape[0] == 0:
        return out
    tested_by_k = np.bincount(k, minlength=p + 2)
    met_by_k = np.zeros(p + 2, dtype=np.int64)
    fails_by_k = np.zeros(p + 2, dtype=np.int64)

    for d in range(1, p):
        g = arr | rotate_vec(arr, d, p)
        s = popcount_vec(g)
        hyp = s <= 1 + k
        out.tested += int(arr.shape[0])
        out.hyp_met += int(np.count_nonzero(hyp))
        met_by_k += np.bincount(k[hyp], minlength=p + 2)
        dc = min(d, p - d) if p > 2 else 1
        for j in np.nonzero(hyp)[0]:
            m = int(arr[j])
            km = int(k[j])
            if t is not None:
                ok = t.cover[t.dil[dc][m]] == km
            else:
                ok = bitops.cover_for_difference(m, dc, p)[0] == km
            if not ok:
                out.record_failure((m, d), cap)
                fails_by_k[km] += 1
    for kk in range(p + 1):
        if tested_by_k[kk]:
            out.add_card(
                (kk, -1),
                int(tested_by_k[kk]) * (p - 1),
                int(met_by_k[kk]),
                int(fails_by_k[kk]),
            )
    return out


def _pair_chunk(job: dict, index: int, lo: int, hi: int) -> ChunkResult:
    theorem = job["theorem"]
    p = job["p"]
    cap = job["cap"]
    amin, amax, _, _ = job["bounds"]
    t = tables(p)
    if t is None:
        raise ValueError(f"pair enumeration needs p <= {MAX_TABLE_P}")
    out = ChunkResult(index, lo, hi)

    b_idx, kb = _b_universe(job, t)
    nb = int(b_idx.shape[0])
    if nb == 0:
        return out
    tested_by_kb = np.bincount(kb, minlength=p + 2)
    buf = np.zeros(t.size, dtype=np.int64)
    per_ka: dict[int, list[np.ndarray]] = {}

    for amask in range(max(lo, 1), hi):
        ka = t.pop[amask]
        if not amin <= ka <= amax:
            continue
        _sos_sumsets(buf, amask, p)
        sub = buf[b_idx]
        s = t.pop_np[sub]
        out.tested += nb

        if theorem == "cauchy_davenport":
            hyp = s < p
            bad = np.nonzero(hyp & (s < ka + kb - 1))[0]
        elif theorem == "vosper":
            r = s - ka - kb + 1
            hyp = (kb >= 2) & (p - s >= 2) & (r == 0)
            bad = np.nonzero(hyp)[0] if t.diam[amask] != ka else np.empty(0, dtype=np.int64)
        elif theorem == "theorem_con":
            r = s - ka - kb + 1
            hyp = (r >= 0) & (kb >= r + 3) & (p - s >= r + 2)
            bad = np.nonzero(hyp & (s < t.diam[amask] + kb - 1))[0]
        elif theorem in ("hsz_standard", "hsz_conjecture"):
            r = s - ka - kb + 1
            c = p - s
            if theorem == "hsz_standard":
                hyp = (r >= 0) & (ka >= r + 3) & (kb >= r + 3) & (c >= r + 2)
            else:
                hyp = (r >= 0) & (ka >= r + 2) & (kb >= r + 3) & (c >= r + 3)
            bad_list = []
            for j in np.nonzero(hyp)[0]:
                if not _hsz_concl(p, amask, int(b_idx[j]), int(r[j]), t):
                    bad_list.append(j)
            bad = np.array(bad_list, dtype=np.int64)
        elif theorem == "symmetry":
            hyp = s < p
            bad_list = []
            full = t.full
            for j in np.nonzero(hyp)[0]:
                smask = int(sub[j])
                bmask = int(b_idx[j])
                c = t.neg[full ^ smask]
                r = int(s[j]) - ka - int(kb[j]) + 1
                ok = p + 1 - r == ka + int(kb[j]) + c.bit_count()
                ok = ok and bitops.add_sets(bmask, amask, p).bit_count() - ka - int(kb[j]) + 1 == r
                ok = ok and t.triple_ok[smask]
                if not ok:
                    bad_list.append(j)
            bad = np.array(bad_list, dtype=np.int64)
        elif theorem == "davenport":
            hyp = sub != t.full
            bad_list = []
            details = {}
            for j in np.nonzero(hyp)[0]:
                _, ok, detail = _davenport_suite(p, amask, int(b_idx[j]), t)
                if not ok:
                    bad_list.append(j)
                    details[j] = detail
            bad = np.array(bad_list, dtype=np.int64)
        else:
            raise ValueError(f"{theorem!r} is not a pair theorem")

        nhyp = int(np.count_nonzero(hyp))
        out.hyp_met += nhyp
        rows = per_ka.get(ka)
        if rows is None:
            rows = [
                np.zeros(p + 2, dtype=np.int64),
                np.zeros(p + 2, dtype=np.int64),
                np.zeros(p + 2, dtype=np.int64),
            ]
            per_ka[ka] = rows
        rows[0] += tested_by_kb
        if nhyp:
            rows[1] += np.bincount(kb[hyp], minlength=p + 2)
        for j in bad:
            bmask = int(b_idx[j])
            if theorem == "davenport":
                out.record_failure((amask, bmask, details[int(j)]), cap)
            else:
                out.record_failure((amask, bmask), cap)
            rows[2][int(kb[j])] += 1

    for ka, rows in sorted(per_ka.items()):
        for kk in range(p + 1):
            if rows[0][kk]:
                out.add_card((ka, kk), int(rows[0][kk]), int(rows[1][kk]), int(rows[2][kk]))
    return out


# ---------------------------------------------------------------------------
# extremal scans
# ---------------------------------------------------------------------------


def scan_pairs_extremal(criterion: str, p: int, lo: int, hi: int, bounds) -> list[tuple[int, int]]:
    """Pair masks in the A-range [lo, hi) matching an extremal criterion."""
    t = tables(p)
    if t is None:
        raise ValueError(f"pair scans need p <= {MAX_TABLE_P}")
    amin, amax, bmin, bmax = bounds
    idx = np.arange(t.size, dtype=np.int64)
    sel = (t.pop_np >= bmin) & (t.pop_np <= bmax) & (idx > 0)
    b_idx = idx[sel]
    kb = t.pop_np[b_idx]
    buf = np.zeros(t.size, dtype=np.int64)
    hits: list[tuple[int, int]] = []
    for amask in range(max(lo, 1), hi):
        ka = t.pop[amask]
        if not amin <= ka <= amax:
            continue
        _sos_sumsets(buf, amask, p)
        s = t.pop_np[buf[b_idx]]
        if criterion == "cd_equality":
            match = s == ka + kb - 1
        elif criterion == "hsz_tight":
            # |C| = r + 2 exactly
            match = 2 * s == p + ka + kb - 3
        else:
            raise ValueError(f"unknown pair criterion {criterion!r}")
        for j in np.nonzero(match)[0]:
            hits.append((amask, int(b_idx[j])))
    return hits


def scan_singles_extremal(criterion: str, p: int, lo: int, hi: int, bounds) -> list[int]:
    """Single-set masks in [lo, hi) matching an extremal criterion."""
    if criterion != "near_3k3":
        raise ValueError(f"unknown single criterion {criterion!r}")
    amin, amax, _, _ = bounds
    arr = np.arange(max(lo, 1), hi, dtype=np.int64)
    k = popcount_vec(arr)
    sel = (k >= amin) & (k <= amax)
    arr = arr[sel]
    k = k[sel]
    if arr.shape[0] == 0:
        return []
    t2 = np.zeros_like(arr)
    for a in range(p):
        has = (arr >> a) & 1
        t2 |= rotate_vec(arr, a, p) & -has
    match = popcount_vec(t2) == 3 * k - 4
    return [int(m) for m in arr[match]]
