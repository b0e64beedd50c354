"""Lacunary frequency sequences: representation, certification, constructions.

A sequence here is always a finite, strictly increasing truncation.  The
certification routines count difference collisions exhaustively over the
truncation, so every reported constant can be reproduced bit-for-bit by
re-running them on the same values.  Integer sequences are kept as Python
integers throughout, which makes the collision counts exact even for terms
far beyond the 64-bit range (e.g. 4**64).
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import NumericalError

__all__ = [
    "Sequence",
    "LacunarityReport",
    "TailSchedule",
    "check_hadamard",
    "zygmund_constant",
    "strong_zygmund_profile",
    "build_greedy",
    "build_counterexample",
    "greedy_growth_table",
    "growth_bound",
    "difference_set",
]

# Resource guard for build_counterexample: 4**K at this K is ~10 kB per term,
# far past any truncation this toolkit certifies.
_COUNTEREXAMPLE_MAX_K = 10_000


@dataclass(frozen=True)
class Sequence:
    """Strictly increasing finite list of real frequencies.

    ``integer_valued`` is detected from the values; integer sequences keep
    exact arithmetic through every certification routine.
    """

    values: tuple
    integer_valued: bool = field(init=False, default=False)

    def __post_init__(self):
        vals = tuple(self.values)
        for i, v in enumerate(vals):
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError(f"non-finite value at index {i}")
        for i in range(len(vals) - 1):
            if not vals[i] < vals[i + 1]:
                raise ValueError(
                    f"values must be strictly increasing, violated at index {i}"
                )
        object.__setattr__(self, "values", vals)
        object.__setattr__(
            self, "integer_valued", all(isinstance(v, int) for v in vals)
        )

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator:
        return iter(self.values)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Sequence(self.values[idx])
        return self.values[idx]

    @property
    def positive(self) -> bool:
        return all(v > 0 for v in self.values)

    def tail(self, start: int) -> "Sequence":
        """Subsequence from one-based index ``start`` onward."""
        if start < 1:
            raise ValueError("tail start is one-based and must be >= 1")
        return Sequence(self.values[start - 1:])

    def to_text(self) -> str:
        """One decimal value per line."""
        return "".join(
            (f"{v}\n" if isinstance(v, int) else f"{float(v)!r}\n")
            for v in self.values
        )

    @classmethod
    def from_text(cls, text: str) -> "Sequence":
        vals = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                vals.append(int(line))
            except ValueError:
                vals.append(float(line))
        return cls(tuple(vals))


@dataclass(frozen=True)
class LacunarityReport:
    """Outcome of one exhaustive lacunarity certification.

    ``constant`` is the minimum consecutive ratio for the ratio test and the
    maximum collision count N for the difference tests.  ``witness`` lists the
    zero-based ordered index pairs attaining the constant.
    """

    kind: str  # "hadamard" | "zygmund" | "strong_zygmund"
    parameter: float
    constant: float
    witness: tuple = ()
    passes: bool | None = None

    def to_dict(self) -> dict:
        c = self.constant
        return {
            "kind": self.kind,
            "parameter": self.parameter,
            "constant": c if (isinstance(c, int) or math.isfinite(c)) else "inf",
            "witness": [list(w) for w in self.witness],
            "passes": self.passes,
        }


@dataclass(frozen=True)
class TailSchedule:
    """Non-decreasing step map L -> M(L) given by breakpoints.

    ``breakpoints`` is a tuple of (L, M) pairs with the L values strictly
    increasing from 1 and the M values non-decreasing.  The map is the step
    function equal to the last breakpoint at or below L; beyond the largest
    breakpoint it stays constant.  ``threshold_for(n)`` inverts the map for
    the greedy construction: the largest tabulated L whose tail start M(L)
    has already been passed.
    """

    breakpoints: tuple = ((1, 1),)

    def __post_init__(self):
        bps = tuple((int(L), int(M)) for L, M in self.breakpoints)
        if not bps:
            raise ValueError("schedule needs at least one breakpoint")
        if bps[0][0] != 1:
            raise ValueError("schedule must start at L = 1")
        for (l0, m0), (l1, m1) in zip(bps, bps[1:]):
            if l1 <= l0:
                raise ValueError("breakpoint L values must be strictly increasing")
            if m1 < m0:
                raise ValueError("schedule must be non-decreasing in L")
        if any(m < 1 for _, m in bps):
            raise ValueError("tail starts M(L) must be >= 1")
        object.__setattr__(self, "breakpoints", bps)

    @classmethod
    def constant(cls, M: int = 1) -> "TailSchedule":
        return cls(((1, M),))

    @property
    def max_threshold(self) -> int:
        return self.breakpoints[-1][0]

    def value(self, L: int) -> int:
        """M(L) for integer L >= 1."""
        if L < 1:
            raise ValueError("threshold L must be >= 1")
        m = self.breakpoints[0][1]
        for bl, bm in self.breakpoints:
            if bl > L:
                break
            m = bm
        return m

    def threshold_for(self, n: int) -> int:
        """Largest tabulated L with M(L) <= n."""
        best = None
        for bl, bm in self.breakpoints:
            if bm <= n:
                best = bl
        if best is None:
            raise ValueError(
                f"schedule has no threshold for a {n}-term prefix (M(1) > {n})"
            )
        return best

    def to_dict(self) -> dict:
        return {"breakpoints": [list(bp) for bp in self.breakpoints]}


def check_hadamard(seq: Sequence, q: float) -> LacunarityReport:
    """Ratio test: min of consecutive ratios against the threshold q > 1.

    Fewer than two elements is degenerate: the constant is +inf and the test
    passes vacuously.
    """
    if q <= 1:
        raise ValueError("ratio threshold q must exceed 1")
    if any(v <= 0 for v in seq.values):
        raise ValueError("ratio test requires positive entries")
    if len(seq) < 2:
        return LacunarityReport("hadamard", q, math.inf, (), True)
    ratios = [seq.values[i + 1] / seq.values[i] for i in range(len(seq) - 1)]
    best = min(ratios)
    witness = tuple(
        (i, i + 1) for i, r in enumerate(ratios) if r == best
    )
    return LacunarityReport("hadamard", q, best, witness, best >= q)


def _collision_threshold(seq: Sequence, L):
    # Keep big-integer arithmetic exact: an integral threshold on an integer
    # sequence must not force float conversion of the differences.
    if seq.integer_valued and float(L) == int(L):
        return int(L)
    return L


def zygmund_constant(
    seq: Sequence, L=1, *, kind: str = "zygmund", index_offset: int = 0
) -> LacunarityReport:
    """Max collision count of ordered difference pairs at threshold L.

    For each ordered pair (k, l) with k != l, counts the ordered pairs
    (k', l'), k' != l', whose difference lies within L of the (k, l)
    difference.  The pair itself is included, so the constant is >= 1 on any
    sequence with two or more terms.  Enumeration is exhaustive over the
    truncation; the count per pair uses a sorted difference table, which is
    exact for integer values and thresholds.
    """
    if L < 1:
        raise ValueError("collision threshold L must be >= 1")
    n = len(seq)
    if n < 2:
        return LacunarityReport(kind, L, 0, ())
    L = _collision_threshold(seq, L)
    vals = seq.values
    pairs = [
        (vals[k] - vals[l], k, l)
        for k in range(n)
        for l in range(n)
        if k != l
    ]
    table = sorted(d for d, _, _ in pairs)
    best = 0
    witness = []
    for d, k, l in pairs:
        c = bisect_right(table, d + L) - bisect_left(table, d - L)
        if c > best:
            best = c
            witness = [(k + index_offset, l + index_offset)]
        elif c == best:
            witness.append((k + index_offset, l + index_offset))
    return LacunarityReport(kind, float(L), best, tuple(witness))


def strong_zygmund_profile(
    seq: Sequence, schedule: TailSchedule, L_values: Iterable[int]
) -> list[LacunarityReport]:
    """Collision counts of the scheduled tails at each threshold L.

    For each L the tail (one-based indices >= M(L)) is certified at threshold
    L.  The truncation is (M, N)-strong on the tested thresholds iff all
    reported constants stay at or below N.  Witness indices refer to the full
    sequence.
    """
    reports = []
    for L in L_values:
        M = schedule.value(L)
        if M > len(seq) - 1:
            raise ValueError(
                f"tail start M({L}) = {M} leaves fewer than two of the "
                f"{len(seq)} truncated terms"
            )
        rep = zygmund_constant(
            seq.tail(M), L, kind="strong_zygmund", index_offset=M - 1
        )
        reports.append(rep)
    return reports


def growth_bound(n: int, L: int) -> int:
    """Pigeonhole bound on the next greedy term after n terms at threshold L."""
    return (2 * L + 1) * n**3 + 1


def _mark(bitmap: np.ndarray, centers: np.ndarray, offsets: Iterable[int]) -> None:
    size = bitmap.shape[0]
    for p in offsets:
        idx = centers + p
        idx = idx[(idx >= 0) & (idx < size)]
        bitmap[idx] = True


def _greedy_steps(count: int, schedule: TailSchedule):
    """Yield (n, value, threshold, bound) rows of the greedy construction.

    Each new term is the smallest positive integer x avoiding every value
    a + b - c + p over previously chosen a, b, c and |p| <= L, where L is the
    schedule threshold for the current length.  Avoidance is tracked in a
    boolean table over [0, bound]; thresholds never decrease along the run,
    so previously marked centers only ever need widening.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    yield (1, 1, None, 1)
    if count == 1:
        return
    final_L = schedule.threshold_for(count - 1)
    size = growth_bound(count - 1, final_L) + final_L + 2
    if size > 2_000_000_000:
        raise ValueError("greedy run too large for the dense avoidance table")
    forbidden = np.zeros(size, dtype=bool)
    lam = [1]
    chunks: list[np.ndarray] = []
    pending = np.array([1], dtype=np.int64)  # from the seed term: 1 + 1 - 1
    marked_L = None
    for n in range(1, count):
        L = schedule.threshold_for(n)
        if marked_L is None:
            marked_L = L
        elif L > marked_L:
            widen = list(range(-L, -marked_L)) + list(range(marked_L + 1, L + 1))
            for chunk in chunks:
                _mark(forbidden, chunk, widen)
            marked_L = L
        _mark(forbidden, pending, range(-L, L + 1))
        chunks.append(pending)

        x = int(np.argmin(forbidden[1:])) + 1
        bound = growth_bound(n, L)
        if forbidden[x]:
            raise NumericalError("avoidance table has no free slot")
        if x > bound:
            raise NumericalError(
                f"greedy term {x} exceeds its certified bound {bound} at step {n}"
            )
        yield (n + 1, x, L, bound)

        old = np.array(lam, dtype=np.int64)
        lam.append(x)
        full = np.array(lam, dtype=np.int64)
        with_x = ((x + full)[:, None] - full[None, :]).ravel()
        minus_x = ((old[:, None] + old[None, :]) - x).ravel()
        pending = np.concatenate([with_x, minus_x])


def build_greedy(count: int, schedule: TailSchedule | None = None) -> Sequence:
    """Greedy avoidance construction of a polynomially growing sequence.

    Starts at 1; every subsequent term is the smallest positive integer
    avoiding all sums a + b - c + p of earlier terms with |p| <= L, L taken
    from the schedule.  Each term is checked against the pigeonhole bound
    (2L + 1) n^3 + 1 as it is produced (see ``greedy_growth_table`` for the
    per-step certificates).
    """
    if schedule is None:
        schedule = TailSchedule.constant(1)
    return Sequence(tuple(row[1] for row in _greedy_steps(count, schedule)))


def greedy_growth_table(
    count: int, schedule: TailSchedule | None = None
) -> list[tuple]:
    """Per-step (n, value, threshold, bound) certificates of the greedy run."""
    if schedule is None:
        schedule = TailSchedule.constant(1)
    return list(_greedy_steps(count, schedule))


def build_counterexample(K: int) -> Sequence:
    """The paired power sequence {4**k + j*k : 1 <= k <= K, j in {0, 1}}.

    Kept in exact integer arithmetic; terms reach 4**K, so K is capped well
    past certification scale rather than silently overflowing a fixed width.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if K > _COUNTEREXAMPLE_MAX_K:
        raise OverflowError(f"K = {K} exceeds the supported range")
    vals = []
    for k in range(1, K + 1):
        base = 4**k
        vals.append(base)
        vals.append(base + k)
    return Sequence(tuple(sorted(vals)))


def difference_set(seq: Sequence) -> list:
    """Sorted list of the distinct nonzero pairwise differences."""
    vals = seq.values
    out = {
        vals[k] - vals[l]
        for k in range(len(vals))
        for l in range(len(vals))
        if k != l
    }
    return sorted(out)
