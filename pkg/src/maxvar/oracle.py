"""Brute-force reference implementations.

Everything here is a literal transcription of the operator definitions:
no pruning lemmas, no prefix sums, no minimal-box shortcuts.  These
functions exist to certify the fast paths in `maxop` and `varanalysis`,
so they deliberately share nothing with them beyond GridFunction and
Fraction arithmetic (ball membership is re-derived from the norm
inequality on the spot).  They are slow on purpose.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .gridfn import GridFunction
from .lattice import Box, LatticePoint
from .maxop import ArgmaxWitness, L1Ball, LatticeBox


def _require_1d(f: GridFunction) -> None:
    if f.dim != 1:
        raise ValueError("oracle expects a 1-D function")


def brute_centered_1d(f: GridFunction, n: int, r_cap: int) -> ArgmaxWitness:
    """Exhaustive max over r in [0, r_cap] of literal window averages."""
    _require_1d(f)
    if f and r_cap < max(abs(p[0] - n) for p in f.support):
        raise ValueError("r_cap does not cover the support")
    best_val = Fraction(0)
    best_r = 0
    for r in range(0, r_cap + 1):
        total = Fraction(0)
        for k in range(-r, r + 1):
            total += abs(f[(n + k,)])
        val = total / (2 * r + 1)
        if val > best_val:
            best_val, best_r = val, r
    return ArgmaxWitness(best_val, 2 * best_r + 1, L1Ball((n,), best_r))


def brute_uncentered_1d(f: GridFunction, n: int, reach_cap: int) -> ArgmaxWitness:
    """Exhaustive max over intervals [a, b] with n in [a, b], |a-n|,|b-n| <= reach_cap."""
    _require_1d(f)
    if f and reach_cap < max(abs(p[0] - n) for p in f.support):
        raise ValueError("reach_cap does not cover the support")
    best: tuple[Fraction, int, int] | None = None
    for a in range(n - reach_cap, n + 1):
        for b in range(n, n + reach_cap + 1):
            total = Fraction(0)
            for t in range(a, b + 1):
                total += abs(f[(t,)])
            count = b - a + 1
            val = total / count
            if best is None or val > best[0] or (
                val == best[0] and (count, a) < (best[1], best[2])
            ):
                best = (val, count, a)
    assert best is not None
    val, count, a = best
    return ArgmaxWitness(val, count, LatticeBox((a,), (a + count - 1,)))


def brute_centered_l1(f: GridFunction, n: LatticePoint, r_cap: int) -> ArgmaxWitness:
    """Exhaustive max over r in [0, r_cap]; balls enumerated point by point."""
    n = tuple(n)
    d = f.dim
    if f and r_cap < max(
        sum(abs(a - b) for a, b in zip(p, n)) for p in f.support
    ):
        raise ValueError("r_cap does not cover the support")
    best_val = Fraction(0)
    best_r = 0
    best_count = 1
    for r in range(0, r_cap + 1):
        total = Fraction(0)
        count = 0
        for offset in product(range(-r, r + 1), repeat=d):
            if sum(abs(x) for x in offset) <= r:
                count += 1
                total += abs(f[tuple(a + b for a, b in zip(n, offset))])
        val = total / count
        if val > best_val:
            best_val, best_r, best_count = val, r, count
    return ArgmaxWitness(best_val, best_count, L1Ball(n, best_r))


def brute_uncentered_cube(f: GridFunction, n: LatticePoint, span_cap: int) -> ArgmaxWitness:
    """Exhaustive max over all boxes through n with balanced side counts.

    Enumerates every box [a, a + L - 1] componentwise with
    max L - min L <= 1, max L <= span_cap, n inside, and the box meeting
    the support's bounding box.
    """
    n = tuple(n)
    d = f.dim
    bbox = f.support_box()
    if bbox is not None:
        needed = max(
            max(u, c) - min(l, c) + 1 for l, u, c in zip(bbox[0], bbox[1], n)
        )
        if span_cap < needed:
            raise ValueError("span_cap does not cover the support span")
    best: tuple[Fraction, int, LatticeBox] | None = None
    for side in range(1, span_cap + 1):
        sides = [side, side - 1] if side > 1 else [side]
        for profile in product(sides, repeat=d):
            if max(profile) != side:
                continue
            axis_ranges = []
            for i in range(d):
                axis_ranges.append(range(n[i] - profile[i] + 1, n[i] + 1))
            for corner in product(*axis_ranges):
                upper = tuple(c + l - 1 for c, l in zip(corner, profile))
                if bbox is not None and any(
                    u < bl or c > bu
                    for c, u, bl, bu in zip(corner, upper, bbox[0], bbox[1])
                ):
                    continue
                total = Fraction(0)
                for p, v in f.items():
                    if all(a <= x <= b for a, x, b in zip(corner, p, upper)):
                        total += abs(v)
                count = 1
                for l in profile:
                    count *= l
                val = total / count
                box = LatticeBox(corner, upper)
                if best is None or val > best[0] or (
                    val == best[0]
                    and (count, box.lower, box.upper)
                    < (best[1], best[2].lower, best[2].upper)
                ):
                    best = (val, count, box)
    if best is None:
        return ArgmaxWitness(Fraction(0), 1, LatticeBox(n, n))
    return ArgmaxWitness(best[0], best[1], best[2])


def brute_variation(
    values: dict[LatticePoint, Fraction], box: Box, zero_extend: bool = False
) -> Fraction:
    """Literal neighbour-difference sum over the box.

    Sums |v(n + e_i) - v(n)| over all edges with both endpoints inside the
    box; with `zero_extend`, edges crossing the boundary to the implicit
    zero extension are included too.
    """
    lower, upper = box
    d = len(lower)
    total = Fraction(0)
    for point in product(*(range(l, u + 1) for l, u in zip(lower, upper))):
        v = values.get(point, Fraction(0))
        for i in range(d):
            nb = tuple(c + (1 if j == i else 0) for j, c in enumerate(point))
            if nb[i] <= upper[i]:
                total += abs(values.get(nb, Fraction(0)) - v)
            elif zero_extend:
                total += abs(v)
        if zero_extend:
            for i in range(d):
                if point[i] == lower[i]:
                    total += abs(v)
    return total
