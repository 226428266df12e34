"""Markov kernels of the binomial and Young-bouquet projective systems.

All pre-limit links are row-finite and exact; the boundary links involve
exp factors and are computed as exact rational shape parts times a float
exponential.  Links are exposed as row generators, never as materialized
matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .partitions import (
    Partition,
    contains,
    dim,
    enumerate_partitions,
    frobenius,
    partitions_up_to,
    size,
    skew_dim,
    subdiagrams,
)
from .symfunc import ThomaPoint, schur_at_point


def binomial_link(r_fine, r_coarse, l: int, m: int) -> Fraction:
    """Binomial-system link on Z+: Binom(l, r/r') mass at m."""
    r_fine, r_coarse = Fraction(r_fine), Fraction(r_coarse)
    if not r_fine > r_coarse > 0:
        raise ValueError("need r_fine > r_coarse > 0")
    if l < 0 or m < 0:
        raise ValueError("grades must be nonnegative")
    if m > l:
        return Fraction(0)
    p = r_coarse / r_fine
    return comb(l, m) * p ** m * (1 - p) ** (l - m)


def poisson_link(r, x, m: int) -> float:
    """Boundary link of the binomial system: Poisson(r*x) mass at m."""
    r, x = Fraction(r), Fraction(x)
    if r <= 0 or x < 0 or m < 0:
        raise ValueError("need r > 0, x >= 0, m >= 0")
    mean = r * x
    return math.exp(-mean) * float(mean ** m / factorial(m))


def young_link(lam: Partition, mu: Partition) -> Fraction:
    """Young-graph link between grades: dim(mu) dim(mu,lam) / dim(lam)."""
    sd = skew_dim(mu, lam)
    if sd == 0:
        return Fraction(0)
    return Fraction(dim(mu) * sd, dim(lam))


def bouquet_link(r_fine, r_coarse, lam: Partition, mu: Partition) -> Fraction:
    """Young-bouquet link on diagrams: binomial size factor times Young link."""
    if not contains(mu, lam):
        return Fraction(0)
    return binomial_link(r_fine, r_coarse, size(lam), size(mu)) * young_link(lam, mu)


def boundary_link(r, omega: ThomaPoint, mu: Partition) -> float:
    """Boundary link of the bouquet system:
    e^{-r|omega|} r^m/m! dim(mu) S_mu(omega)."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("need r > 0")
    m = size(mu)
    shape = r ** m / factorial(m) * dim(mu) * schur_at_point(mu, omega)
    return math.exp(-float(r * omega.delta)) * float(shape)


def phi_r(lam: Partition, r) -> ThomaPoint:
    """The scaled embedding of diagrams into the Thoma cone: coordinates
    divided by r."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("need r > 0")
    a, b, _ = frobenius(lam)
    return ThomaPoint(
        tuple(x / r for x in a),
        tuple(x / r for x in b),
        Fraction(size(lam)) / r,
    )


# ---------------------------------------------------------------------------
# link specifications and their action on functions / measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinomialLinkSpec:
    """Z+ -> Z+ link of the binomial system."""

    r_fine: Fraction
    r_coarse: Fraction

    def row(self, l: int):
        return {m: binomial_link(self.r_fine, self.r_coarse, l, m) for m in range(l + 1)}


@dataclass(frozen=True)
class PoissonLinkSpec:
    """R+ -> Z+ boundary link of the binomial system."""

    r: Fraction

    def entry(self, x, m: int) -> float:
        return poisson_link(self.r, x, m)


@dataclass(frozen=True)
class YoungLinkSpec:
    """Y_l -> Y_m link of the Young graph."""

    l: int
    m: int

    def row(self, lam: Partition):
        if size(lam) != self.l:
            raise ValueError(f"state {lam} is not in grade {self.l}")
        return {
            mu: young_link(lam, mu)
            for mu in enumerate_partitions(self.m)
            if contains(mu, lam)
        }


@dataclass(frozen=True)
class BouquetLinkSpec:
    """Y -> Y link of the Young-bouquet system."""

    r_fine: Fraction
    r_coarse: Fraction

    def row(self, lam: Partition):
        return {
            mu: bouquet_link(self.r_fine, self.r_coarse, lam, mu)
            for mu in subdiagrams(lam)
        }


@dataclass(frozen=True)
class BoundaryLinkSpec:
    """Thoma cone -> Y boundary link of the bouquet system."""

    r: Fraction

    def entry(self, omega: ThomaPoint, mu: Partition) -> float:
        return boundary_link(self.r, omega, mu)


class TruncationError(RuntimeError):
    """Raised when a truncated sum cannot meet its tolerance within budget."""


def apply_link_to_function(link, f):
    """Pull a function back through a row-finite link: (Lf)(x) = sum L(x,y) f(y)."""
    if isinstance(link, BinomialLinkSpec):
        def g_int(l: int):
            return sum(w * f(m) for m, w in link.row(l).items())

        return g_int
    if isinstance(link, (YoungLinkSpec, BouquetLinkSpec)):
        def g_lam(lam: Partition):
            return sum(w * f(mu) for mu, w in link.row(lam).items())

        return g_lam
    raise ValueError(f"link {link!r} is not row-finite; use the boundary helpers")


def apply_boundary_to_function(link: BoundaryLinkSpec, f, growth_bound,
                               tol: float = 1e-12, max_size: int = 120):
    """Pull a function on Y back to the Thoma cone through the boundary link.

    growth_bound(l) must dominate |f| on the grade Y_l; the grade-l mass of
    the link is the Poisson(r|omega|) weight, which gives a computable tail.
    """

    def g(omega: ThomaPoint) -> float:
        mean = float(link.r * omega.delta)
        total = 0.0
        for l in range(max_size + 1):
            for mu in enumerate_partitions(l):
                total += boundary_link(link.r, omega, mu) * float(f(mu))
            if _grade_tail(mean, l, growth_bound) < tol:
                return total
        raise TruncationError(f"boundary sum did not converge by size {max_size}")

    return g


def _grade_tail(mean: float, l: int, growth_bound) -> float:
    """Bound sum_{k>l} Poisson(mean; k) * growth_bound(k) numerically.

    The grade-k mass of a boundary-link row is the Poisson weight, so this
    dominates the discarded part of the sum whenever growth_bound dominates
    the summand on each grade.
    """
    if mean == 0:
        return 0.0
    weight = math.exp(-mean)
    for k in range(1, l + 1):
        weight *= mean / k
    tail = 0.0
    k = l
    while True:
        weight *= mean / (k + 1)
        k += 1
        term = weight * float(growth_bound(k))
        tail += term
        if k > mean and k > l + 5 and term < 1e-18 * max(tail, 1.0):
            return tail


def apply_link_to_measure(weights: dict, link) -> dict:
    """Push a measure through a link: (ML)(y) = sum_x M(x) L(x,y).

    `weights` maps states to masses; exact for the row-finite kinds.
    """
    out: dict = {}
    if isinstance(link, (BinomialLinkSpec, YoungLinkSpec, BouquetLinkSpec)):
        for x, mass in weights.items():
            if not mass:
                continue
            for y, w in link.row(x).items():
                if w:
                    out[y] = out.get(y, 0) + mass * w
        return out
    raise ValueError(f"measure pushforward not implemented for {link!r}")


def approx_sup_error(r, s, mu: Partition, n_max: int) -> float:
    """Sup over |lam| <= n_max of the defect between the pre-limit link at
    scale r and the boundary link at the scaled embedding of lam."""
    r, s = Fraction(r), Fraction(s)
    if not r > s > 0:
        raise ValueError("need r > s > 0")
    worst = 0.0
    for lam in partitions_up_to(n_max):
        pre = float(bouquet_link(r, s, lam, mu))
        lim = boundary_link(s, phi_r(lam, r), mu)
        worst = max(worst, abs(pre - lim))
    return worst


def binomial_sup_error(r, s, m: int, l_max: int) -> float:
    """Same defect for the binomial system, sup over l <= l_max."""
    r, s = Fraction(r), Fraction(s)
    if not r > s > 0:
        raise ValueError("need r > s > 0")
    worst = 0.0
    for l in range(l_max + 1):
        pre = float(binomial_link(r, s, l, m))
        lim = poisson_link(s, Fraction(l) / r, m)
        worst = max(worst, abs(pre - lim))
    return worst
