"""Discrete maximal operators with pruned exact-supremum search.

Four geometries are provided:

  centered1d    -- averages over symmetric integer intervals [n-r, n+r]
  uncentered1d  -- averages over arbitrary intervals [n-r, n+s] containing n
  l1            -- averages over dilated cross-polytopes |m|_1 <= r around n
  cube          -- averages over admissible lattice boxes containing n
                   (per-axis point counts differing by at most one, i.e.
                   the lattice traces of real cubes)

All suprema of finitely supported inputs are attained, and the search spaces
below are pruned to provably sufficient finite sets:

* centered sweeps stop at r* = max distance from n to the support, beyond
  which the average is ||f||_1 / N(r), strictly decreasing;
* uncentered interval endpoints stay inside the hull of {n} and the support,
  since any extension adds length but no mass;
* candidate cube boxes are the minimal-count admissible boxes around the
  hull of {n} and a support subset.  For any box B the average is at most
  mass(B) / Q where Q is that minimal count for B's own captured subset, so
  the subset candidates dominate every box, and each candidate is realised
  by an actual box.  The literal box enumeration lives in `oracle` as the
  independent cross-check.

Ties are broken deterministically: smallest radius for centered operators;
smallest point count, then lexicographic lower corner, then lexicographic
upper corner for uncentered ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import lattice
from .exact import tree_sum
from .gridfn import GridFunction
from .lattice import Box, LatticePoint

GEOMETRIES = ("centered1d", "uncentered1d", "l1", "cube")

#: supports larger than this fall back from subset candidates to literal
#: box enumeration in the cube operator
SUBSET_LIMIT = 12


@dataclass(frozen=True)
class BallSpec:
    """Averaging geometry plus dimension."""

    geometry: str
    dim: int

    def __post_init__(self) -> None:
        if self.geometry not in GEOMETRIES:
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.geometry in ("centered1d", "uncentered1d") and self.dim != 1:
            raise ValueError(f"{self.geometry} requires dim = 1, got {self.dim}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    @property
    def centered(self) -> bool:
        return self.geometry in ("centered1d", "l1")


@dataclass(frozen=True)
class L1Ball:
    """Closed cross-polytope {m : |m - center|_1 <= radius}; radius 0 is the point."""

    center: LatticePoint
    radius: int

    def count(self) -> int:
        return lattice.l1_ball_count(len(self.center), self.radius) if self.radius else 1

    def contains(self, p: LatticePoint) -> bool:
        return sum(abs(a - b) for a, b in zip(p, self.center)) <= self.radius


@dataclass(frozen=True)
class LatticeBox:
    """Axis-aligned lattice box [lower, upper] (componentwise)."""

    lower: LatticePoint
    upper: LatticePoint

    def count(self) -> int:
        n = 1
        for l, u in zip(self.lower, self.upper):
            n *= u - l + 1
        return n

    def contains(self, p: LatticePoint) -> bool:
        return all(l <= c <= u for l, u, c in zip(self.lower, self.upper, p))


Region = L1Ball | LatticeBox


@dataclass(frozen=True)
class ArgmaxWitness:
    """Optimal averaging set realising a maximal-function value.

    `value` equals the average of |f| over `region` exactly, and `region`
    contains the query point.
    """

    value: Fraction
    count: int
    region: Region

    @property
    def radius(self) -> int:
        if not isinstance(self.region, L1Ball):
            raise AttributeError("witness region is not a centered ball")
        return self.region.radius

    @property
    def interval(self) -> tuple[int, int]:
        if not isinstance(self.region, LatticeBox) or len(self.region.lower) != 1:
            raise AttributeError("witness region is not a 1-D interval")
        return self.region.lower[0], self.region.upper[0]

    @property
    def box(self) -> Box:
        if not isinstance(self.region, LatticeBox):
            raise AttributeError("witness region is not a box")
        return self.region.lower, self.region.upper


def average(f: GridFunction, region: Region) -> Fraction:
    """Exact mean of |f| over the lattice points of `region`."""
    count = region.count()
    if count < 1:
        raise ValueError("averaging set must contain at least one lattice point")
    mass = tree_sum(abs(v) for p, v in f.items() if region.contains(p))
    return mass / count


# ---------------------------------------------------------------------------
# Centered operators
# ---------------------------------------------------------------------------

def _centered_witness(
    f: GridFunction, n: LatticePoint, dist, count_of
) -> tuple[Fraction, int]:
    """Shared sweep: max over candidate radii = distances from n to support.

    Between consecutive support distances the mass is constant and the count
    strictly increases, so those radii are dominated; beyond the largest
    distance the average is ||f||_1 / count, strictly decreasing.  Scanning
    candidates in increasing order with strict improvement yields the
    smallest maximising radius.
    """
    by_dist: dict[int, Fraction] = {}
    for p, v in f.items():
        k = dist(p, n)
        by_dist[k] = by_dist.get(k, Fraction(0)) + abs(v)
    best_val = Fraction(0)
    best_r = 0
    mass = Fraction(0)
    for k in sorted(by_dist):
        mass += by_dist[k]
        val = mass / count_of(k)
        if val > best_val:
            best_val, best_r = val, k
    return best_val, best_r


def centered_max_1d(f: GridFunction, n: int) -> ArgmaxWitness:
    """Mf(n) = max_r average of |f| over [n-r, n+r], smallest-radius tie-break."""
    if f.dim != 1:
        raise ValueError("centered_max_1d requires a 1-D function")
    if not f:
        return ArgmaxWitness(Fraction(0), 1, L1Ball((n,), 0))
    val, r = _centered_witness(
        f, (n,), lambda p, q: abs(p[0] - q[0]), lambda k: 2 * k + 1
    )
    return ArgmaxWitness(val, 2 * r + 1, L1Ball((n,), r))


def centered_max_l1(f: GridFunction, n: LatticePoint) -> ArgmaxWitness:
    """Cross-polytope maximal function at n, smallest-radius tie-break."""
    n = tuple(n)
    if len(n) != f.dim:
        raise ValueError("point dimension does not match function dimension")
    if not f:
        return ArgmaxWitness(Fraction(0), 1, L1Ball(n, 0))
    d = f.dim
    val, r = _centered_witness(
        f,
        n,
        lambda p, q: sum(abs(a - b) for a, b in zip(p, q)),
        lambda k: lattice.l1_ball_count(d, k) if k else 1,
    )
    count = lattice.l1_ball_count(d, r) if r else 1
    return ArgmaxWitness(val, count, L1Ball(n, r))


# ---------------------------------------------------------------------------
# Uncentered operators
# ---------------------------------------------------------------------------

def uncentered_max_1d(f: GridFunction, n: int) -> ArgmaxWitness:
    """Max average over intervals [a, b] containing n.

    Endpoints are pruned to the hull of {n} and the support: stretching an
    interval past the hull adds points but no mass.  Tie-break: smallest
    point count, then smallest left endpoint.
    """
    if f.dim != 1:
        raise ValueError("uncentered_max_1d requires a 1-D function")
    if not f:
        return ArgmaxWitness(Fraction(0), 1, LatticeBox((n,), (n,)))
    supp_lo = f.support[0][0]
    supp_hi = f.support[-1][0]
    lo = min(supp_lo, n)
    hi = max(supp_hi, n)
    width = hi - lo + 1
    prefix = [Fraction(0)] * (width + 1)
    for i in range(width):
        prefix[i + 1] = prefix[i] + abs(f[(lo + i,)])

    a_hi = min(n, supp_hi)
    b_lo = max(n, supp_lo)
    best: tuple[Fraction, int, int] | None = None  # (value, count, a)
    for a in range(lo, a_hi + 1):
        for b in range(b_lo, hi + 1):
            count = b - a + 1
            val = (prefix[b - lo + 1] - prefix[a - lo]) / count
            if (
                best is None
                or val > best[0]
                or (val == best[0] and (count, a) < (best[1], best[2]))
            ):
                best = (val, count, a)
    assert best is not None
    val, count, a = best
    return ArgmaxWitness(val, count, LatticeBox((a,), (a + count - 1,)))


def _subset_box_candidates(
    f: GridFunction, n: LatticePoint
) -> Iterator[tuple[Fraction, int, LatticeBox]]:
    """Minimal-count admissible box around hull(n, S) per support subset S."""
    d = f.dim
    points = list(f.support)
    masses = [abs(v) for _, v in f.items()]
    for mask in range(1, 1 << len(points)):
        los = list(n)
        his = list(n)
        mass = Fraction(0)
        m = mask
        idx = 0
        while m:
            if m & 1:
                p = points[idx]
                mass += masses[idx]
                for i in range(d):
                    if p[i] < los[i]:
                        los[i] = p[i]
                    elif p[i] > his[i]:
                        his[i] = p[i]
            m >>= 1
            idx += 1
        extents = [h - l + 1 for l, h in zip(los, his)]
        side = max(extents)
        counts = [max(e, side - 1) for e in extents]
        q = 1
        for c in counts:
            q *= c
        # lexicographically smallest placement keeping hull(n, S) inside
        lower = tuple(h - c + 1 for h, c in zip(his, counts))
        upper = tuple(l + c - 1 for l, c in zip(lower, counts))
        yield mass / q, q, LatticeBox(lower, upper)


def uncentered_max_cube(f: GridFunction, n: LatticePoint) -> ArgmaxWitness:
    """Max average of |f| over admissible boxes containing n.

    Equals the supremum over all lattice boxes with per-axis counts
    differing by at most one that contain n and meet the support.
    Tie-break: smallest count, then lexicographic lower corner, then
    lexicographic upper corner.
    """
    n = tuple(n)
    if len(n) != f.dim:
        raise ValueError("point dimension does not match function dimension")
    if not f:
        return ArgmaxWitness(Fraction(0), 1, LatticeBox(n, n))
    if len(f.support) > SUBSET_LIMIT:
        return _uncentered_max_cube_enumerate(f, n)
    best: tuple[Fraction, int, LatticeBox] | None = None
    for val, count, box in _subset_box_candidates(f, n):
        if (
            best is None
            or val > best[0]
            or (
                val == best[0]
                and (count, box.lower, box.upper)
                < (best[1], best[2].lower, best[2].upper)
            )
        ):
            best = (val, count, box)
    assert best is not None
    return ArgmaxWitness(best[0], best[1], best[2])


def _uncentered_max_cube_enumerate(f: GridFunction, n: LatticePoint) -> ArgmaxWitness:
    """Literal admissible-box sweep; used when the support is large."""
    support_box = f.support_box()
    assert support_box is not None
    best: tuple[Fraction, int, LatticeBox] | None = None
    for lower, upper in lattice.admissible_boxes_through(n, support_box):
        box = LatticeBox(lower, upper)
        count = box.count()
        mass = tree_sum(abs(v) for p, v in f.items() if box.contains(p))
        val = mass / count
        if (
            best is None
            or val > best[0]
            or (
                val == best[0]
                and (count, box.lower, box.upper)
                < (best[1], best[2].lower, best[2].upper)
            )
        ):
            best = (val, count, box)
    assert best is not None
    return ArgmaxWitness(best[0], best[1], best[2])


# ---------------------------------------------------------------------------
# Closed forms for unit deltas
# ---------------------------------------------------------------------------

def delta_centered_l1_closed_form(p: LatticePoint, n: LatticePoint) -> Fraction:
    """Value at n of the cross-polytope maximal function of a unit delta at p.

    The optimal radius is exactly the distance |n - p|_1, giving
    1 / N(d, |n - p|_1).
    """
    k = sum(abs(a - b) for a, b in zip(p, n))
    return Fraction(1, lattice.l1_ball_count(len(p), k) if k else 1)


def delta_uncentered_cube_closed_form(p: LatticePoint, n: LatticePoint) -> Fraction:
    """Value at n of the cube maximal function of a unit delta at p.

    With M = |n - p|_inf and j = #{i : |n_i - p_i| = M}, the cheapest
    admissible box containing both points has (M+1) points along the j
    extremal axes and max(1, M) along the rest.
    """
    d = len(p)
    diffs = [abs(a - b) for a, b in zip(p, n)]
    m = max(diffs)
    if m == 0:
        return Fraction(1)
    j = sum(1 for x in diffs if x == m)
    return Fraction(1, (m + 1) ** j * m ** (d - j))


# ---------------------------------------------------------------------------
# Box evaluation
# ---------------------------------------------------------------------------

def maximal_value(f: GridFunction, spec: BallSpec, n: LatticePoint) -> Fraction:
    return maximal_witness(f, spec, n).value


def maximal_witness(f: GridFunction, spec: BallSpec, n: LatticePoint | int) -> ArgmaxWitness:
    if spec.dim != f.dim:
        raise ValueError(f"spec dim {spec.dim} does not match function dim {f.dim}")
    if isinstance(n, int):
        n = (n,)
    if spec.geometry == "centered1d":
        return centered_max_1d(f, n[0])
    if spec.geometry == "uncentered1d":
        return uncentered_max_1d(f, n[0])
    if spec.geometry == "l1":
        return centered_max_l1(f, n)
    return uncentered_max_cube(f, n)


def _box_points(box: Box) -> Iterator[LatticePoint]:
    lower, upper = box
    if not lower:
        yield ()
        return
    for x in range(lower[0], upper[0] + 1):
        for rest in _box_points((lower[1:], upper[1:])):
            yield (x,) + rest


def evaluate_on_box(
    f: GridFunction, spec: BallSpec, box: Box, threads: int = 1
) -> dict[LatticePoint, Fraction]:
    """Maximal function values at every lattice point of `box`.

    Identical to pointwise calls; points are independent, so with
    threads > 1 the box is partitioned into chunks evaluated by a worker
    pool and merged in lexicographic order.
    """
    lower, upper = box
    if len(lower) != f.dim:
        raise ValueError("box dimension does not match function dimension")
    if any(l > u for l, u in zip(lower, upper)):
        raise ValueError("invalid box")
    points = list(_box_points(box))
    if threads > 1 and len(points) > 64:
        from concurrent.futures import ThreadPoolExecutor

        def work(chunk: list[LatticePoint]) -> list[Fraction]:
            return [maximal_witness(f, spec, p).value for p in chunk]

        size = (len(points) + threads - 1) // threads
        chunks = [points[i : i + size] for i in range(0, len(points), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, chunks))
        values = [v for part in results for v in part]
    else:
        values = [maximal_witness(f, spec, p).value for p in points]
    return dict(zip(points, values))
