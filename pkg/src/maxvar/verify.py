"""Executable sharpness checks and extremizer scans.

The headline inequalities say Var(maximal function) <= constant * ||f||_1
with equality exactly for one-point supports.  These routines measure the
truncated variation (a certified lower bound), compare it against the
enclosure upper bound of the constant, and report the gap.  A negative gap
would falsify an inequality (or reveal a bug) and is treated as a hard
failure by the suites.  Strictly positive gaps for non-delta inputs are
*consistent with* the uniqueness of delta extremizers; they do not prove it,
since the sharp inequalities quantify over all of l1(Z^d).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .constants import bound_for_geometry
from .gridfn import GridFunction, total_variation
from .lattice import LatticePoint
from .maxop import BallSpec
from .varanalysis import VariationReport, adaptive_variation, truncated_variation_maxfn


@dataclass(frozen=True)
class SharpnessRecord:
    """One measured instance of Var(Mf) / ||f||_1 against its sharp bound."""

    support_size: int
    support: tuple[LatticePoint, ...]
    l1_norm: Fraction
    spec: BallSpec
    ratio: Fraction
    bound: Fraction
    gap: Fraction
    is_delta: bool
    truncation_radius: int

    def sort_key(self):
        return (self.gap, self.support)


def _recenter(f: GridFunction) -> GridFunction:
    """Translate the support bounding box to straddle the origin.

    The operators commute with translations, and the floor-midpoint shift is
    translation equivariant, so measuring recentered copies makes every
    record exactly translation invariant despite the origin-centered
    truncation boxes.
    """
    box = f.support_box()
    if box is None:
        return f
    shift = tuple(-((lo + hi) // 2) for lo, hi in zip(*box))
    if any(shift):
        return f.translate(shift)
    return f


def verify_inequality(
    f: GridFunction,
    spec: BallSpec,
    epsilon: Fraction | int | str,
    r_max: int = 4096,
    terms: int = 1000,
) -> tuple[SharpnessRecord, VariationReport]:
    """Adaptive truncated variation of Mf against the enclosure upper bound.

    The gap uses the *upper* end of the constant's enclosure, so gap >= 0 is
    a sound claim even though the constant itself is known only to enclosure
    width.  The input is recentered before measuring; see `_recenter`.
    """
    if not f:
        raise ValueError("verify_inequality requires a nonzero function")
    f = _recenter(f)
    report = adaptive_variation(f, spec, epsilon, r_max=r_max, terms=terms)
    norm = f.l1_norm()
    ratio = report.truncated_var / norm
    bound = bound_for_geometry(spec.geometry, spec.dim, terms).upper
    record = SharpnessRecord(
        support_size=len(f.support),
        support=f.support,
        l1_norm=norm,
        spec=spec,
        ratio=ratio,
        bound=bound,
        gap=bound - ratio,
        is_delta=f.is_delta(),
        truncation_radius=report.truncation_radius,
    )
    return record, report


@dataclass(frozen=True)
class UncenteredVarBound1D:
    """Eq-style chain for the 1-D uncentered operator: Var Mf <= Var f <= 2||f||_1.

    The first comparison pits a truncated (lower-bound) left side against an
    exact right side, which keeps the check one-sided and sound; the second
    is exact on both sides.
    """

    var_f: Fraction
    l1_norm: Fraction
    maxfn_var_truncated: Fraction
    truncation_radius: int
    maxfn_le_var: bool
    var_le_2l1: bool

    @property
    def all_hold(self) -> bool:
        return self.maxfn_le_var and self.var_le_2l1


def verify_uncentered_var_bound_1d(
    f: GridFunction, R: int | None = None
) -> UncenteredVarBound1D:
    if f.dim != 1:
        raise ValueError("this check is specific to dimension 1")
    if not f:
        raise ValueError("requires a nonzero function")
    if R is None:
        R = f.support_radius() + 32
    spec = BallSpec("uncentered1d", 1)
    trunc = truncated_variation_maxfn(f, spec, R)
    var_f = total_variation(f)
    norm = f.l1_norm()
    return UncenteredVarBound1D(
        var_f=var_f,
        l1_norm=norm,
        maxfn_var_truncated=trunc,
        truncation_radius=R,
        maxfn_le_var=trunc <= var_f,
        var_le_2l1=var_f <= 2 * norm,
    )


def random_gridfn(
    seed: int,
    d: int,
    support_radius: int,
    support_count: int,
    value_bound: int = 16,
    signed: bool = False,
) -> GridFunction:
    """Deterministic pseudo-random finite-support function.

    Support points are drawn without replacement from the centered box of
    the given radius; values are uniform rationals p/q with
    1 <= p, q <= value_bound (negated with probability 1/2 when `signed`).
    """
    if d < 1 or support_radius < 0 or support_count < 1 or value_bound < 1:
        raise ValueError("parameters must be positive")
    box_size = (2 * support_radius + 1) ** d
    if support_count > box_size:
        raise ValueError(
            f"support_count {support_count} exceeds box size {box_size}"
        )
    rng = random.Random(seed)
    points: set[LatticePoint] = set()
    while len(points) < support_count:
        points.add(
            tuple(rng.randint(-support_radius, support_radius) for _ in range(d))
        )
    values = {}
    for p in sorted(points):
        v = Fraction(rng.randint(1, value_bound), rng.randint(1, value_bound))
        if signed and rng.random() < 0.5:
            v = -v
        values[p] = v
    return GridFunction(d, values)


DEFAULT_RATIOS: tuple[Fraction, ...] = (
    Fraction(1, 4),
    Fraction(1, 3),
    Fraction(1, 2),
    Fraction(2, 3),
    Fraction(1),
    Fraction(3, 2),
    Fraction(2),
    Fraction(3),
    Fraction(4),
)


def two_point_shapes(spec: BallSpec, max_distance: int) -> list[LatticePoint]:
    """Canonical second-point offsets for two-point supports {0, q}.

    The operators commute with coordinate permutations and sign flips and
    every record is translation invariant, so offsets are canonicalised to
    sorted nonnegative coordinates; the distance is measured in the
    geometry's own metric.
    """
    if spec.dim == 1:
        return [(q,) for q in range(1, max_distance + 1)]
    if spec.dim != 2:
        raise ValueError("two-point scans support d <= 2")
    shapes = []
    for a in range(0, max_distance + 1):
        for b in range(0, a + 1):
            if (a, b) == (0, 0):
                continue
            dist = a + b if spec.geometry == "l1" else a
            if dist <= max_distance:
                shapes.append((a, b))
    return shapes


def scan_extremizers(
    spec: BallSpec,
    max_distance: int,
    R: int,
    epsilon: Fraction | int | str = Fraction(1, 10**9),
    ratios: tuple[Fraction, ...] = DEFAULT_RATIOS,
    include_delta: bool = True,
    terms: int = 1000,
) -> list[SharpnessRecord]:
    """Sweep the two-point family {0 -> 1, q -> ratio} plus the delta.

    Every instance is truncated at radius R exactly: a shared truncation
    makes gaps comparable across the family, so `epsilon` (kept for parity
    with the adaptive runs) plays no role here.  Records come back sorted
    by (gap, support), so delta rows lead when the family is consistent
    with delta-only extremality.
    """
    if R < max_distance:
        raise ValueError("R must cover the family diameter")
    bound = bound_for_geometry(spec.geometry, spec.dim, terms).upper
    records: list[SharpnessRecord] = []

    def record_for(f: GridFunction) -> SharpnessRecord:
        var = truncated_variation_maxfn(f, spec, R)
        norm = f.l1_norm()
        ratio = var / norm
        return SharpnessRecord(
            support_size=len(f.support),
            support=f.support,
            l1_norm=norm,
            spec=spec,
            ratio=ratio,
            bound=bound,
            gap=bound - ratio,
            is_delta=f.is_delta(),
            truncation_radius=R,
        )

    if include_delta:
        records.append(record_for(GridFunction.delta((0,) * spec.dim)))
    for q in two_point_shapes(spec, max_distance):
        for ratio in ratios:
            f = GridFunction(spec.dim, {(0,) * spec.dim: Fraction(1), q: ratio})
            records.append(record_for(f))
    records.sort(key=SharpnessRecord.sort_key)
    return records
