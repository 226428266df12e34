"""Point-configuration view of diagrams and correlation measures of the
pre-limit lattice ensembles.

A diagram embedded at scale r becomes a configuration on the punctured real
line whose points live on the half-integer lattice scaled by 1/r.  All
correlation values are computed from first principles (probabilities of
containing prescribed points), never from a kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .generators import GeneratorSpec, Meixner1D, Plancherel, ZMeasure
from .measures import (
    WeightedEnsemble,
    evolve,
    meixner_ensemble,
    plancherel_measure,
    sample,
    z_ensemble,
)
from .partitions import Partition, frobenius, partitions_up_to, size
from .symfunc import ParamPair


@dataclass(frozen=True)
class PointConfig:
    """A finite configuration on the punctured line, sorted decreasing."""

    points: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(sorted((Fraction(x) for x in self.points), reverse=True))
        if any(x == 0 for x in pts):
            raise ValueError("configuration points must be nonzero")
        if len(set(pts)) != len(pts):
            raise ValueError("configuration points must be distinct")
        object.__setattr__(self, "points", pts)

    def __contains__(self, x) -> bool:
        return Fraction(x) in set(self.points)

    def count_outside(self, eps) -> int:
        eps = Fraction(eps)
        return sum(1 for x in self.points if abs(x) >= eps)


def config_of(lam: Partition, r) -> PointConfig:
    """Scaled Frobenius coordinates as a configuration: {a_i/r, -b_i/r}."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("need r > 0")
    a, b, _ = frobenius(lam)
    return PointConfig(tuple(x / r for x in a) + tuple(-x / r for x in b))


def on_lattice(x, r) -> bool:
    """True if x sits on the lattice (1/r)(Z + 1/2)."""
    return (Fraction(x) * Fraction(r) - Fraction(1, 2)).denominator == 1


@dataclass(frozen=True)
class SpaceTimeQuery:
    """Positions with weakly increasing query times."""

    entries: tuple[tuple[Fraction, float], ...]

    def __post_init__(self):
        entries = tuple((Fraction(x), float(t)) for x, t in self.entries)
        if any(x == 0 for x, _ in entries):
            raise ValueError("positions must be nonzero")
        times = [t for _, t in entries]
        if any(t < 0 for t in times) or times != sorted(times):
            raise ValueError("times must be nonnegative and weakly increasing")
        object.__setattr__(self, "entries", entries)

    def grouped(self):
        """Distinct times in order with their position lists."""
        out: list[tuple[float, list[Fraction]]] = []
        for x, t in self.entries:
            if out and out[-1][0] == t:
                out[-1][1].append(x)
            else:
                out.append((t, [x]))
        return out


@dataclass
class CorrelationResult:
    value: float
    error_bound: float
    lattice_ok: bool = True


def static_correlation(sigma: ParamPair, r, pts, n_max: int) -> CorrelationResult:
    """Probability that the stationary configuration contains all the given
    lattice points, truncated at size n_max with the marginal tail attached."""
    r = Fraction(r)
    pts = [Fraction(x) for x in pts]
    if len(set(pts)) != len(pts):
        raise ValueError("query points must be distinct")
    if not all(on_lattice(x, r) for x in pts):
        return CorrelationResult(0.0, 0.0, lattice_ok=False)
    ens = z_ensemble(sigma, r, n_max)
    want = set(pts)
    value = sum(
        mass
        for lam, mass in ens.weights.items()
        if want <= set(config_of(lam, r).points)
    )
    return CorrelationResult(value, ens.tail_bound, True)


def static_correlation_mc(sigma: ParamPair, r, pts, n_samples: int,
                          rng: np.random.Generator) -> tuple[float, float]:
    """Monte-Carlo estimate of the same probability with its standard error."""
    r = Fraction(r)
    want = set(Fraction(x) for x in pts)
    hits = 0
    for _ in range(n_samples):
        lam = sample(sigma, r, rng)
        if want <= set(config_of(lam, r).points):
            hits += 1
    p = hits / n_samples
    stderr = (max(p * (1 - p), 1.0 / n_samples) / n_samples) ** 0.5
    return p, stderr


def stationary_ensemble(spec: GeneratorSpec, n_max: int) -> WeightedEnsemble:
    """Truncated stationary law of a generator family."""
    if isinstance(spec, ZMeasure):
        return z_ensemble(spec.sigma, spec.r, n_max)
    if isinstance(spec, Meixner1D):
        return meixner_ensemble(spec.c, spec.r, n_max)
    if isinstance(spec, Plancherel):
        weights = {
            lam: plancherel_measure(spec.theta, lam)
            for lam in partitions_up_to(n_max)
        }
        tail = max(0.0, 1.0 - sum(weights.values()))
        return WeightedEnsemble(weights, "float", n_max, tail)
    raise TypeError(f"no stationary law known for {spec!r}")


def fdd(spec: GeneratorSpec, times, g_functions, n_max: int,
        m0: WeightedEnsemble | None = None) -> tuple[float, float]:
    """Equilibrium finite-dimensional pairing by the semigroup recursion.

    Evolves the initial ensemble through the time gaps, multiplying by each
    test function in turn; returns the pairing and the accumulated
    truncation bound (valid when every |g| <= 1, as for indicators)."""
    times = [float(t) for t in times]
    if times != sorted(times) or any(t < 0 for t in times):
        raise ValueError("times must be nonnegative and weakly increasing")
    if len(times) != len(g_functions):
        raise ValueError("one test function per time")
    current = m0 if m0 is not None else stationary_ensemble(spec, n_max)
    prev = 0.0
    for t, g in zip(times, g_functions):
        current = evolve(spec, current, t - prev, n_max)
        current = WeightedEnsemble(
            {s: w * float(g(s)) for s, w in current.weights.items()},
            "float",
            n_max,
            current.tail_bound,
        )
        prev = t
    return current.total(), current.tail_bound


def dynamic_correlation(sigma: ParamPair, r, query: SpaceTimeQuery,
                        n_max: int) -> CorrelationResult:
    """Probability that at every queried time the equilibrium configuration
    contains the queried points."""
    r = Fraction(r)
    if not all(on_lattice(x, r) for x, _ in query.entries):
        return CorrelationResult(0.0, 0.0, lattice_ok=False)
    spec = ZMeasure(sigma, r)
    times, gs = [], []
    for t, positions in query.grouped():
        want = set(positions)
        times.append(t)
        gs.append(
            lambda lam, want=want: 1.0
            if want <= set(config_of(lam, r).points)
            else 0.0
        )
    value, err = fdd(spec, times, gs, n_max)
    return CorrelationResult(value, err, True)


def density_sum_identity(sigma: ParamPair, r, n_max: int) -> tuple[float, float, float]:
    """Sum of the one-point correlations over all lattice points against the
    expected point count 2 * E[diagonal depth]; returns (lhs, rhs, tail)."""
    ens = z_ensemble(sigma, r, n_max)
    lhs = 0.0
    rhs = 0.0
    for lam, mass in ens.weights.items():
        cfg = config_of(lam, r)
        lhs += mass * len(cfg.points)
        rhs += mass * 2 * frobenius(lam).d
    return lhs, rhs, ens.tail_bound


def ball_bound_holds(lam: Partition, r, eps) -> bool:
    """The point-count bound: at most eps^{-1} |lam|/r points at distance
    at least eps from the origin, exactly in rationals."""
    cfg = config_of(lam, r)
    eps = Fraction(eps)
    return cfg.count_outside(eps) <= Fraction(size(lam)) / (Fraction(r) * eps)
