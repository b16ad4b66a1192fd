"""Exact lattice-point counting and box geometry on Z^d.

The central quantity is the closed cross-polytope count

    N(d, k) = #{p in Z^d : |p_1| + ... + |p_d| <= k},

computed by peeling off the last coordinate:

    N(d, k) = N(d-1, k) + 2 * sum_{j=0}^{k-1} N(d-1, j),

with arbitrary-precision integers and memoised rows, so building a table up
to radius K costs O(d*K) big-integer additions.  For every fixed d the
sequence k -> N(d, k) is strictly increasing and strictly log-concave;
`check_log_concavity` and `check_gap_monotonicity` verify both facts exactly
on demand.

The module also enumerates the axis-aligned lattice boxes that arise as
traces of real cubes: a cube of side 2r meets each coordinate axis in an
interval of one common real length, so its per-axis lattice point counts
differ by at most one.  `admissible_boxes_through` enumerates exactly those
boxes and `box_realization` produces an explicit rational cube witnessing
realizability.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

LatticePoint = tuple[int, ...]
Box = tuple[LatticePoint, LatticePoint]

#: Hard ceiling on the number of points/boxes any enumeration may produce.
DEFAULT_ENUM_CAP = 10**7


class EnumerationCapExceeded(RuntimeError):
    """An enumeration would produce more items than the configured cap."""


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

# _counts[d] = [N(d,0), N(d,1), ...]; _cums[d] = prefix sums of _counts[d].
# Rows grow on demand under a lock; once written, entries are never mutated,
# so concurrent readers of already-built prefixes are safe.
_counts: dict[int, list[int]] = {0: [1]}
_cums: dict[int, list[int]] = {0: [1]}
_grow_lock = threading.Lock()


def _ensure(d: int, k: int) -> None:
    with _grow_lock:
        for dim in range(0, d + 1):
            row = _counts.setdefault(dim, [1])
            cum = _cums.setdefault(dim, [1])
            if dim == 0:
                while len(row) <= k:
                    row.append(1)
                    cum.append(cum[-1] + 1)
                continue
            prev = _counts[dim - 1]
            prev_cum = _cums[dim - 1]
            while len(row) <= k:
                j = len(row)
                # N(dim, j) = N(dim-1, j) + 2 * sum_{i<j} N(dim-1, i)
                row.append(prev[j] + 2 * prev_cum[j - 1])
                cum.append(cum[-1] + row[-1])


def l1_ball_count(d: int, k: int) -> int:
    """Number of lattice points p in Z^d with |p|_1 <= k."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if k < 0:
        raise ValueError(f"radius must be >= 0, got {k}")
    row = _counts.get(d)
    if row is None or len(row) <= k:
        _ensure(d, k)
        row = _counts[d]
    return row[k]


def l1_shell_count(d: int, k: int) -> int:
    """Number of lattice points at l1-distance exactly k from the origin."""
    if k == 0:
        return 1
    return l1_ball_count(d, k) - l1_ball_count(d, k - 1)


@dataclass(frozen=True)
class ShellTable:
    """Immutable table of cross-polytope counts N(d, 0..k_max).

    Construction is single-writer (it may grow the shared memo); the frozen
    table itself is safe to share across threads.
    """

    dim: int
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not self.counts or self.counts[0] != 1:
            raise ValueError("counts must start with N(d,0) = 1")
        if any(b <= a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be strictly increasing")

    @classmethod
    def build(cls, d: int, k_max: int) -> "ShellTable":
        l1_ball_count(d, k_max)
        return cls(d, tuple(_counts[d][: k_max + 1]))

    @property
    def k_max(self) -> int:
        return len(self.counts) - 1

    def count(self, k: int) -> int:
        return self.counts[k]

    def shell(self, k: int) -> int:
        return self.counts[k] if k == 0 else self.counts[k] - self.counts[k - 1]

    def gap(self, k: int) -> Fraction:
        """1/N(k) - 1/N(k+1), the largest possible jump of a ball average."""
        return Fraction(1, self.counts[k]) - Fraction(1, self.counts[k + 1])


def l1_ball_points(d: int, k: int, cap: int | None = None) -> list[LatticePoint]:
    """All p with |p|_1 <= k in lexicographic order.

    Raises EnumerationCapExceeded before generating anything if the known
    count N(d, k) exceeds the cap; the caller should fall back to
    counting-only code paths.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if k < 0:
        raise ValueError(f"radius must be >= 0, got {k}")
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    total = l1_ball_count(d, k)
    if total > cap:
        raise EnumerationCapExceeded(
            f"l1 ball d={d} k={k} holds {total} points, cap is {cap}"
        )
    out: list[LatticePoint] = []
    point = [0] * d

    def rec(axis: int, budget: int) -> None:
        if axis == d - 1:
            for x in range(-budget, budget + 1):
                point[axis] = x
                out.append(tuple(point))
            return
        for x in range(-budget, budget + 1):
            point[axis] = x
            rec(axis + 1, budget - abs(x))

    rec(0, k)
    assert len(out) == total
    return out


# ---------------------------------------------------------------------------
# Exact inequality batteries
# ---------------------------------------------------------------------------

def check_log_concavity(d: int, k_max: int) -> list[tuple[int, int, int]]:
    """Verify N(d,k)^2 > N(d,k+1)*N(d,k-1) for 1 <= k <= k_max.

    Returns a list of violating triples (k, lhs, rhs); empty means every
    inequality holds.  All arithmetic is exact.
    """
    if d < 1 or k_max < 1:
        raise ValueError("need d >= 1 and k_max >= 1")
    table = ShellTable.build(d, k_max + 1)
    bad = []
    c = table.counts
    for k in range(1, k_max + 1):
        lhs = c[k] * c[k]
        rhs = c[k + 1] * c[k - 1]
        if not lhs > rhs:
            bad.append((k, lhs, rhs))
    return bad


def check_gap_monotonicity(d: int, k_max: int) -> list[tuple[int, Fraction, Fraction]]:
    """Verify 1/N(k) - 1/N(k+1) > 1/N(k+1) - 1/N(k+2) for 0 <= k <= k_max."""
    if d < 1 or k_max < 0:
        raise ValueError("need d >= 1 and k_max >= 0")
    table = ShellTable.build(d, k_max + 2)
    bad = []
    for k in range(0, k_max + 1):
        g0 = table.gap(k)
        g1 = table.gap(k + 1)
        if not g0 > g1:
            bad.append((k, g0, g1))
    return bad


# ---------------------------------------------------------------------------
# Admissible boxes (lattice traces of real cubes)
# ---------------------------------------------------------------------------

def _validate_box(box: Box, dim: int) -> None:
    lower, upper = box
    if len(lower) != dim or len(upper) != dim:
        raise ValueError("box dimension mismatch")
    if any(l > u for l, u in zip(lower, upper)):
        raise ValueError(f"invalid box {box}: lower must be <= upper componentwise")


def admissible_boxes_through(
    point: LatticePoint,
    support_box: Box,
    max_side: int | None = None,
    cap: int | None = None,
) -> Iterator[Box]:
    """Yield the lattice boxes through `point` that a real cube can trace.

    A yielded box B satisfies: point in B, B intersects support_box, every
    per-axis point count L_i >= 1 and max_i L_i - min_i L_i <= 1.  Each such
    box equals Z^d intersected with some real cube (see `box_realization`).
    Cubes with no lattice point are never generated.

    `max_side` bounds the largest per-axis count; by default it is the
    per-axis span of the hull of `point` and `support_box`, which is enough
    to contain every average-maximising box.  Boxes come out in a fixed
    deterministic order (side, per-axis counts, lower corner).
    """
    d = len(point)
    _validate_box(support_box, d)
    lower, upper = support_box
    if max_side is None:
        max_side = max(
            max(u, p) - min(l, p) + 1 for l, u, p in zip(lower, upper, point)
        )
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    yielded = 0
    for side in range(1, max_side + 1):
        for profile in _count_profiles(d, side):
            # offsets per axis: box [a, a+L-1] must contain point and meet
            # the support box
            ranges = []
            feasible = True
            for i in range(d):
                li = profile[i]
                a_min = max(point[i] - li + 1, lower[i] - li + 1)
                a_max = min(point[i], upper[i])
                if a_min > a_max:
                    feasible = False
                    break
                ranges.append(range(a_min, a_max + 1))
            if not feasible:
                continue
            for corner in _product(ranges):
                yielded += 1
                if yielded > cap:
                    raise EnumerationCapExceeded(
                        f"box enumeration exceeded cap {cap}"
                    )
                yield corner, tuple(c + l - 1 for c, l in zip(corner, profile))


def _count_profiles(d: int, side: int) -> Iterator[tuple[int, ...]]:
    """Per-axis count tuples with max = side and min >= side - 1."""
    if side == 1:
        yield (1,) * d
        return
    for mask in range(1 << d):
        profile = tuple(side if (mask >> i) & 1 else side - 1 for i in range(d))
        if side in profile:
            yield profile


def _product(ranges: Sequence[range]) -> Iterator[LatticePoint]:
    if not ranges:
        yield ()
        return
    head, tail = ranges[0], ranges[1:]
    for x in head:
        for rest in _product(tail):
            yield (x,) + rest


def box_realization(lower: LatticePoint, upper: LatticePoint) -> tuple[tuple[Fraction, ...], Fraction]:
    """Rational cube (center, radius) whose lattice trace is exactly [lower, upper].

    Uses side 2r = maxL - 1/2 with each axis interval centered on its lattice
    midpoint, which contains the L_i requested points and excludes the
    neighbours whenever max L - min L <= 1.
    """
    counts = [u - l + 1 for l, u in zip(lower, upper)]
    if max(counts) - min(counts) > 1:
        raise ValueError("box is not the trace of any cube: counts differ by > 1")
    radius = Fraction(2 * max(counts) - 1, 4)
    center = tuple(Fraction(l + u, 2) for l, u in zip(lower, upper))
    assert box_lattice_trace(center, radius) == (tuple(lower), tuple(upper))
    return center, radius


def box_lattice_trace(center: Sequence[Fraction], radius: Fraction) -> Box | None:
    """Lattice box Z^d cut out by the real cube, or None if it is empty."""
    lo, hi = [], []
    for c in center:
        a = c - radius
        b = c + radius
        # ceil(a), floor(b) with exact rationals
        ai = -((-a.numerator) // a.denominator)
        bi = b.numerator // b.denominator
        if ai > bi:
            return None
        lo.append(ai)
        hi.append(bi)
    return tuple(lo), tuple(hi)
