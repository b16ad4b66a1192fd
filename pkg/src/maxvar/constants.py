"""Exact partial sums and certified enclosures for the sharp variation ratios.

Two one-parameter families of constants are handled:

* centered cross-polytope averages, d >= 2:

      C(d) = 2d * (1 + sum_{k>=1} (N(d-1,k) - N(d-1,k-1)) / N(d,k))

* uncentered cube averages, d >= 1:

      Ct(d) = 2d * (1 + sum_{k>=1} (1/k) * ((2/(k+1) + (2k-1)/k)^(d-1)
                                            - ((2k-1)/k)^(d-1)))

  (all terms vanish at d = 1, so Ct(1) = 2 exactly).

The sharp 1-D bound for the centered interval operator is the standalone
constant 2 (`ONE_DIM_CENTERED_SHARP`); it is not the d = 1 case of C(d),
which is undefined.

Partial sums are exact rationals.  Enclosures add a certified tail bound:
for each (d, kind) the term t_k is a fixed rational function of k, and we
certify a majorant

    t_k <= c / (k (k+1))        for all k >= k0,

by checking that the integer polynomial c * den(k) - k (k+1) * num(k) has
nonnegative coefficients after substituting k -> k0 + t (nonnegative
coefficients in t give nonnegativity for every real t >= 0, hence every
integer k >= k0).  The tail beyond K >= k0 - 1 then telescopes to at most
c / (K+1).  The numerator/denominator polynomials come from Lagrange
interpolation of the counting recurrence: the dilation count of an integral
polytope is a polynomial of degree d (Ehrhart), so agreement with the
recurrence on d + 41 sample points pins it down exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from . import lattice
from .exact import tree_sum

KINDS = ("centered", "uncentered")

#: sharp constant in Var Mf <= 2 ||f||_1 for the centered interval operator on Z
ONE_DIM_CENTERED_SHARP = Fraction(2)


# ---------------------------------------------------------------------------
# Series terms and partial sums
# ---------------------------------------------------------------------------

def centered_term(d: int, k: int) -> Fraction:
    """k-th series term of C(d): 2d * shell_{d-1}(k) / N(d, k)."""
    if d < 2:
        raise ValueError("centered constants are defined for d >= 2")
    if k < 1:
        raise ValueError("terms are indexed from k = 1")
    return Fraction(2 * d * lattice.l1_shell_count(d - 1, k), lattice.l1_ball_count(d, k))


def uncentered_term(d: int, k: int) -> Fraction:
    """k-th series term of Ct(d)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if k < 1:
        raise ValueError("terms are indexed from k = 1")
    if d == 1:
        return Fraction(0)
    a = Fraction(2, k + 1)
    b = Fraction(2 * k - 1, k)
    return Fraction(2 * d, k) * ((a + b) ** (d - 1) - b ** (d - 1))


def centered_constant_partial(d: int, K: int) -> Fraction:
    """Partial sum of C(d) through k = K (K = 0 gives 2d)."""
    if d < 2:
        raise ValueError(
            "centered constants are defined for d >= 2; "
            "the sharp 1-D constant is ONE_DIM_CENTERED_SHARP"
        )
    if K < 0:
        raise ValueError("K must be >= 0")
    lattice.l1_ball_count(d, max(K, 1))  # warm the memo in one pass
    return 2 * d + tree_sum(centered_term(d, k) for k in range(1, K + 1))


def uncentered_constant_partial(d: int, K: int) -> Fraction:
    """Partial sum of Ct(d) through k = K."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if K < 0:
        raise ValueError("K must be >= 0")
    return 2 * d + tree_sum(uncentered_term(d, k) for k in range(1, K + 1))


# ---------------------------------------------------------------------------
# Polynomial helpers (coefficient lists, ascending powers, Fraction entries)
# ---------------------------------------------------------------------------

Poly = tuple[Fraction, ...]


def _padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _pneg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def _pscale(a: Poly, s: Fraction) -> Poly:
    return tuple(c * s for c in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return tuple(out)


def _ppow(a: Poly, n: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(n):
        out = _pmul(out, a)
    return out


def _peval(a: Poly, x: Fraction | int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _pshift(a: Poly, h: int) -> Poly:
    """Coefficients of a(h + t) as a polynomial in t."""
    out: Poly = ()
    for c in reversed(a):
        out = _padd(_pmul(out, (Fraction(h), Fraction(1))), (c,))
    return out


def _ptrim(a: Poly) -> Poly:
    n = len(a)
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


@cache
def _count_poly(d: int) -> Poly:
    """The degree-d polynomial with p(k) = N(d, k) for all integers k >= 0."""
    if d == 0:
        return (Fraction(1),)
    xs = list(range(d + 1))
    ys = [lattice.l1_ball_count(d, x) for x in xs]
    poly: Poly = (Fraction(0),)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term: Poly = (Fraction(yi),)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            term = _pmul(term, (Fraction(-xj, xi - xj), Fraction(1, xi - xj)))
        poly = _padd(poly, term)
    for k in range(0, d + 41):
        assert _peval(poly, k) == lattice.l1_ball_count(d, k), (
            f"count interpolation failed at d={d}, k={k}"
        )
    return _ptrim(poly)


def _term_polynomials(d: int, kind: str) -> tuple[Poly, Poly]:
    """(num, den) with term_k = num(k) / den(k) for k >= 1, both integer-coefficient."""
    x: Poly = (Fraction(0), Fraction(1))
    if kind == "centered":
        shell = _padd(_count_poly(d - 1), _pneg(_pshift(_count_poly(d - 1), -1)))
        num = _pscale(shell, Fraction(2 * d))
        den = _count_poly(d)
    else:
        # a + b = (2k^2 + 3k - 1) / (k(k+1)), b = (2k^2 + k - 1) / (k(k+1))
        top = (Fraction(-1), Fraction(3), Fraction(2))
        bot = (Fraction(-1), Fraction(1), Fraction(2))
        num = _pscale(_padd(_ppow(top, d - 1), _pneg(_ppow(bot, d - 1))), Fraction(2 * d))
        den = _pmul(_ppow(x, d), _ppow(_padd(x, (Fraction(1),)), d - 1))
    num, den = _ptrim(num), _ptrim(den)
    term = centered_term if kind == "centered" else uncentered_term
    for k in range(1, 41):
        assert _peval(num, k) / _peval(den, k) == term(d, k), (
            f"term polynomial mismatch at d={d}, kind={kind}, k={k}"
        )
    return num, den


@dataclass(frozen=True)
class TailMajorant:
    """Certificate that term_k <= c / (k (k+1)) for every k >= crossover."""

    d: int
    kind: str
    c: Fraction
    crossover: int
    statement: str

    def tail_bound(self, K: int) -> Fraction:
        """Upper bound for sum_{k > K} term_k; requires K >= crossover - 1."""
        if K < self.crossover - 1:
            raise ValueError(
                f"K = {K} is below the certified crossover {self.crossover}"
            )
        return self.c / (K + 1)


@cache
def tail_majorant(d: int, kind: str) -> TailMajorant:
    """Search for and certify a termwise majorant c / (k (k+1)).

    The certificate is exact: nonnegativity of every coefficient of
    (c * den - k(k+1) * num)(k0 + t) in t.  Positivity of den and num on
    [k0, inf) is certified the same way, so the division is sound and the
    terms are nonnegative (making the partial sums genuine lower bounds).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "centered" and d < 2:
        raise ValueError("centered constants are defined for d >= 2")
    if kind == "uncentered" and d == 1:
        return TailMajorant(
            1, "uncentered", Fraction(0), 0, "all series terms vanish for d = 1"
        )
    num, den = _term_polynomials(d, kind)
    kk1 = _pmul(num, (Fraction(0), Fraction(1), Fraction(1)))  # k(k+1) * num
    scan = max(
        (Fraction(_peval(kk1, k), _peval(den, k)) for k in range(1, 513)),
        default=Fraction(0),
    )
    if len(kk1) == len(den):
        scan = max(scan, Fraction(kk1[-1], den[-1]))
    elif len(kk1) > len(den):
        raise AssertionError("term does not decay like 1/k^2")
    c = scan
    for _ in range(8):
        for k0 in (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64):
            rem = _padd(_pscale(den, c), _pneg(kk1))
            ok = all(coef >= 0 for coef in _pshift(rem, k0))
            ok = ok and all(coef >= 0 for coef in _pshift(den, k0))
            ok = ok and all(coef >= 0 for coef in _pshift(num, k0))
            if ok:
                statement = (
                    f"term_k <= {c}/(k(k+1)) for all k >= {k0}: the polynomial "
                    f"{c}*den(k) - k(k+1)*num(k) has nonnegative coefficients "
                    f"after the substitution k -> {k0} + t, hence the tail "
                    f"beyond K telescopes to at most {c}/(K+1)"
                )
                return TailMajorant(d, kind, c, k0, statement)
        c *= Fraction(17, 16)
    raise AssertionError(f"no tail majorant certificate found for d={d}, {kind}")


# ---------------------------------------------------------------------------
# Enclosures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantEnclosure:
    """Exact rational bracket [lower, upper] for a sharp constant.

    `lower` is the partial sum through k = terms_used, `upper` adds the
    certified tail majorant.  The true constant lies in the closed interval.
    """

    d: int
    kind: str
    terms_used: int
    lower: Fraction
    upper: Fraction
    majorant: TailMajorant

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, x: Fraction) -> bool:
        return self.lower <= x <= self.upper


def constant_enclosure(d: int, K: int, kind: str) -> ConstantEnclosure:
    """Certified enclosure from K exact terms plus the tail majorant.

    Rejects K below the majorant's certified crossover.  For uncentered
    d = 1 the series is empty and the enclosure is the point [2, 2].
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    maj = tail_majorant(d, kind)
    if kind == "uncentered":
        lower = uncentered_constant_partial(d, K)
    else:
        lower = centered_constant_partial(d, K)
    upper = lower + maj.tail_bound(K)
    return ConstantEnclosure(d, kind, K, lower, upper, maj)


def bound_for_geometry(geometry: str, dim: int, terms: int = 1000) -> ConstantEnclosure:
    """Enclosure of the sharp Var/||f||_1 ratio bound for an operator geometry."""
    if geometry == "centered1d":
        maj = TailMajorant(1, "centered", Fraction(0), 0, "exact sharp constant 2")
        two = ONE_DIM_CENTERED_SHARP
        return ConstantEnclosure(1, "centered", 0, two, two, maj)
    if geometry == "uncentered1d":
        return constant_enclosure(1, 0, "uncentered")
    if geometry == "l1":
        return constant_enclosure(dim, terms, "centered")
    if geometry == "cube":
        return constant_enclosure(dim, terms, "uncentered")
    raise ValueError(f"unknown geometry {geometry!r}")
