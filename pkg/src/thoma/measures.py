"""Mixed z-measures on Young diagrams, exact sampling, simulation, and
truncated semigroup evolution.

Weights come in two modes: exact rational shape parts (the common scalar
(r+1)^{-sigma2} cancels in every identity test) and float-normalized tables
for simulation.  Evolution uses uniformization over a finite size window
with the leaked boundary mass tracked explicitly.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
from scipy import sparse
from scipy.stats import poisson

from .generators import GeneratorSpec, VerifyReport, ZMeasure
from .partitions import (
    Partition,
    boxes,
    dim,
    enumerate_partitions,
    partitions_up_to,
    rising_factorial,
    size,
    up_set,
)
from .symfunc import ParamPair, ThomaPoint


@dataclass
class WeightedEnsemble:
    """A truncated measure: finite support with recorded tail bound."""

    weights: dict
    mode: str  # "exact" (rational, up to a common scalar) or "float"
    max_size: int
    tail_bound: float = 0.0

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise ValueError("mode must be 'exact' or 'float'")

    def total(self):
        return sum(self.weights.values())

    def to_float(self, scale=1.0) -> "WeightedEnsemble":
        """Explicit conversion out of exact mode; `scale` is the common
        normalization the exact mode dropped."""
        return WeightedEnsemble(
            {s: float(w) * scale for s, w in self.weights.items()},
            "float",
            self.max_size,
            self.tail_bound,
        )


def delta_ensemble(state, max_size: int) -> WeightedEnsemble:
    return WeightedEnsemble({state: 1.0}, "float", max_size, 0.0)


def tv_distance(a: WeightedEnsemble, b: WeightedEnsemble) -> float:
    keys = set(a.weights) | set(b.weights)
    return 0.5 * sum(abs(a.weights.get(k, 0.0) - b.weights.get(k, 0.0)) for k in keys)


# ---------------------------------------------------------------------------
# the mixed z-measure and its size marginal
# ---------------------------------------------------------------------------


def content_product(sigma: ParamPair, lam: Partition) -> Fraction:
    prod = Fraction(1)
    for i, j in boxes(lam):
        prod *= sigma.content_factor(j - i)
    return prod


def z_weight(sigma: ParamPair, r, lam: Partition) -> Fraction:
    """Shape part of the stationary weight; the scalar (r+1)^{-sigma2} is
    carried separately."""
    sigma.require_admissible()
    r = Fraction(r)
    if r <= 0:
        raise ValueError("need r > 0")
    n = size(lam)
    return (
        (r / (r + 1)) ** n
        * content_product(sigma, lam)
        * Fraction(dim(lam), factorial(n)) ** 2
    )


def z_normalization(sigma: ParamPair, r) -> float:
    """(r+1)^{-sigma2} as a float."""
    r = Fraction(r)
    return math.exp(-float(sigma.sigma2) * math.log(float(r) + 1.0))


def size_marginal(sigma: ParamPair, r, l: int) -> Fraction:
    """Shape part of the size distribution: the negative-binomial term
    (sigma2)_l / l! * (r/(r+1))^l with a rising Pochhammer."""
    r = Fraction(r)
    if l < 0:
        raise ValueError("need l >= 0")
    return rising_factorial(sigma.sigma2, l) / factorial(l) * (r / (r + 1)) ** l


def size_marginal_exhaustive(sigma: ParamPair, r, l: int) -> Fraction:
    """The same quantity summed over every diagram of size l; the oracle that
    pins the closed form."""
    return sum(
        (z_weight(sigma, r, lam) for lam in enumerate_partitions(l)), Fraction(0)
    )


def nb_tail(sigma: ParamPair, r, n_max: int) -> float:
    """Mass of the size marginal beyond n_max."""
    partial = sum((size_marginal(sigma, r, l) for l in range(n_max + 1)), Fraction(0))
    return max(0.0, 1.0 - z_normalization(sigma, r) * float(partial))


def z_ensemble(sigma: ParamPair, r, n_max: int) -> WeightedEnsemble:
    """Float-normalized stationary measure truncated at size n_max."""
    norm = z_normalization(sigma, r)
    weights = {
        lam: norm * float(z_weight(sigma, r, lam))
        for lam in partitions_up_to(n_max)
    }
    return WeightedEnsemble(weights, "float", n_max, nb_tail(sigma, r, n_max))


def z_ensemble_exact(sigma: ParamPair, r, n_max: int) -> WeightedEnsemble:
    weights = {lam: z_weight(sigma, r, lam) for lam in partitions_up_to(n_max)}
    return WeightedEnsemble(weights, "exact", n_max, nb_tail(sigma, r, n_max))


def meixner_ensemble(c, r, n_max: int) -> WeightedEnsemble:
    """Stationary negative binomial of the 1-D chain, truncated."""
    c, r = Fraction(c), Fraction(r)
    norm = math.exp(-float(c) * math.log(float(r) + 1.0))
    shape = [
        rising_factorial(c, l) / factorial(l) * (r / (r + 1)) ** l
        for l in range(n_max + 1)
    ]
    weights = {l: norm * float(s) for l, s in enumerate(shape)}
    tail = max(0.0, 1.0 - sum(weights.values()))
    return WeightedEnsemble(weights, "float", n_max, tail)


# ---------------------------------------------------------------------------
# two-stage exact sampling
# ---------------------------------------------------------------------------


class CapExceeded(RuntimeError):
    """A draw fell beyond the precomputed size cap."""


class ZMeasureSampler:
    """Two-stage sampler: size from the negative binomial, then the shape
    from the conditional measure on the diagrams of that size."""

    def __init__(self, sigma: ParamPair, r, cap: int = 50):
        sigma.require_admissible()
        self.sigma = sigma
        self.r = Fraction(r)
        self.cap = cap
        norm = z_normalization(sigma, self.r)
        pmf = [norm * float(size_marginal(sigma, self.r, l)) for l in range(cap + 1)]
        self.size_cdf = np.cumsum(pmf)
        self.overflow_prob = max(0.0, 1.0 - float(self.size_cdf[-1]))
        self._shape_tables: dict[int, tuple[list[Partition], np.ndarray]] = {}

    def _shape_table(self, l: int):
        cached = self._shape_tables.get(l)
        if cached is None:
            lams = list(enumerate_partitions(l))
            w = np.array(
                [
                    float(content_product(self.sigma, lam)) * float(dim(lam)) ** 2
                    for lam in lams
                ]
            )
            cdf = np.cumsum(w)
            cdf /= cdf[-1]
            cached = (lams, cdf)
            self._shape_tables[l] = cached
        return cached

    def sample(self, rng: np.random.Generator, on_overflow: str = "resample") -> Partition:
        for _ in range(1000):
            u = rng.random()
            l = int(np.searchsorted(self.size_cdf, u, side="right"))
            if l > self.cap:
                if on_overflow == "raise":
                    raise CapExceeded(f"size draw beyond cap {self.cap}")
                continue
            lams, cdf = self._shape_table(l)
            v = rng.random()
            return lams[int(np.searchsorted(cdf, v, side="right"))]
        raise CapExceeded("resampling failed 1000 times; cap far too small")


@lru_cache(maxsize=32)
def _cached_sampler(sigma: ParamPair, r: Fraction, cap: int) -> ZMeasureSampler:
    return ZMeasureSampler(sigma, r, cap)


def sample(sigma: ParamPair, r, rng: np.random.Generator, cap: int = 50,
           on_overflow: str = "resample") -> Partition:
    """One draw from the mixed z-measure; deterministic given the generator."""
    return _cached_sampler(sigma, Fraction(r), cap).sample(rng, on_overflow)


# ---------------------------------------------------------------------------
# Gillespie simulation
# ---------------------------------------------------------------------------


@dataclass
class Trajectory:
    """Piecewise-constant sample path: (time, state) at each jump."""

    events: list = field(default_factory=list)

    @property
    def final_state(self):
        return self.events[-1][1]

    def states(self):
        return [s for _, s in self.events]


def gillespie(spec: GeneratorSpec, start, t_end: float,
              rng: np.random.Generator) -> Trajectory:
    """Event-driven simulation: exponential holds, jumps along the row."""
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    t = 0.0
    state = start
    events = [(0.0, start)]
    while True:
        row = spec.row(state)
        exit_rate = float(-row[state])
        if exit_rate <= 0.0:
            break
        t += rng.exponential(1.0 / exit_rate)
        if t > t_end:
            break
        targets = [(s, float(w)) for s, w in row.items() if s != state]
        u = rng.random() * exit_rate
        acc = 0.0
        for s, w in targets:
            acc += w
            if u < acc:
                state = s
                break
        else:
            state = targets[-1][0]
        events.append((t, state))
    return Trajectory(events)


# ---------------------------------------------------------------------------
# truncated semigroup evolution by uniformization
# ---------------------------------------------------------------------------


class TruncationExceeded(RuntimeError):
    pass


def evolve(spec: GeneratorSpec, m0: WeightedEnsemble, t: float, n_max: int,
           tol: float = 1e-10, max_leak: float | None = None) -> WeightedEnsemble:
    """m0 * exp(t Q) restricted to the size window; mass flowing out of the
    window is dropped and reported in the tail bound."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if m0.mode != "float":
        raise ValueError("evolve needs a float-normalized ensemble; "
                         "use to_float with the explicit scalar")
    if t == 0:
        return WeightedEnsemble(dict(m0.weights), "float", n_max, m0.tail_bound)

    states = spec.states_up_to(n_max)
    index = {s: i for i, s in enumerate(states)}
    n = len(states)

    rows = [spec.row(s) for s in states]
    theta = max(float(-row[s]) for row, s in zip(rows, states)) * (1 + 1e-9)

    data, rows_i, cols_i = [], [], []
    for i, (s, row) in enumerate(zip(states, rows)):
        for target, rate in row.items():
            j = index.get(target)
            if j is None:
                continue  # out of the window: leaked mass
            val = float(rate) / theta + (1.0 if j == i else 0.0)
            rows_i.append(j)  # transposed: columns act on measure vectors
            cols_i.append(i)
            data.append(val)
    transfer = sparse.csr_matrix((data, (rows_i, cols_i)), shape=(n, n))

    v = np.zeros(n)
    for s, w in m0.weights.items():
        i = index.get(s)
        if i is None:
            raise ValueError(f"initial state {s} outside the window")
        v[i] = w
    mass0 = float(v.sum())

    mu = theta * t
    k_max = int(poisson.isf(tol, mu)) + 1
    weights = poisson.pmf(np.arange(k_max + 1), mu)
    out = weights[0] * v
    vk = v
    for k in range(1, k_max + 1):
        vk = transfer @ vk
        out = out + weights[k] * vk

    leak = max(0.0, mass0 - float(out.sum()))
    if max_leak is not None and leak > max_leak:
        raise TruncationExceeded(
            f"window leak {leak:.3e} exceeds budget {max_leak:.3e} at N={n_max}"
        )
    result = {s: float(out[i]) for s, i in index.items() if out[i] > 0.0}
    return WeightedEnsemble(result, "float", n_max, m0.tail_bound + leak + tol)


# ---------------------------------------------------------------------------
# stationarity, reversibility, coherence
# ---------------------------------------------------------------------------


def detailed_balance_check(sigma: ParamPair, r, n_max: int) -> VerifyReport:
    """Exact rational check of w(lam) Q(lam, kappa) = w(kappa) Q(kappa, lam)
    on every edge inside the window; the normalization scalar cancels."""
    spec = ZMeasure(sigma, r)
    report = VerifyReport("detailed-balance")
    for lam in partitions_up_to(n_max):
        w_lam = z_weight(sigma, r, lam)
        row = spec.row(lam)
        for up in up_set(lam):
            if size(up) > n_max:
                continue
            lhs = w_lam * row[up]
            rhs = z_weight(sigma, r, up) * spec.row(up)[lam]
            report.record(lhs == rhs, f"edge {lam} <-> {up}: {lhs} != {rhs}")
    return report


def stationarity_check(sigma: ParamPair, r, n_max: int, times,
                       tol: float = 1e-8) -> VerifyReport:
    """TV distance between the truncated stationary measure and its
    evolution, against the truncation budget."""
    spec = ZMeasure(sigma, r)
    m0 = z_ensemble(sigma, r, n_max)
    report = VerifyReport("stationarity")
    for t in times:
        mt = evolve(spec, m0, float(t), n_max)
        dist = tv_distance(m0, mt)
        budget = m0.tail_bound + mt.tail_bound + tol
        report.record(dist <= budget,
                      f"t={t}: TV {dist:.3e} over budget {budget:.3e}",
                      defect=dist)
    return report


def coherence_check(sigma: ParamPair, r_fine, r_coarse, n_max: int) -> VerifyReport:
    """Pushing the finer stationary measure through the link reproduces the
    coarser one, up to the truncation tail."""
    from .links import bouquet_link
    from .partitions import contains

    r_fine, r_coarse = Fraction(r_fine), Fraction(r_coarse)
    if not r_fine > r_coarse > 0:
        raise ValueError("need r_fine > r_coarse > 0")
    fine = z_ensemble(sigma, r_fine, n_max)
    targets = partitions_up_to(n_max // 2)
    pushed: dict[Partition, float] = {mu: 0.0 for mu in targets}
    for lam, mass in fine.weights.items():
        for mu in targets:
            if contains(mu, lam):
                pushed[mu] += mass * float(bouquet_link(r_fine, r_coarse, lam, mu))
    norm_coarse = z_normalization(sigma, r_coarse)
    report = VerifyReport("coherence")
    for m in range(n_max // 2 + 1):
        for mu in enumerate_partitions(m):
            want = norm_coarse * float(z_weight(sigma, r_coarse, mu))
            got = pushed.get(mu, 0.0)
            defect = abs(got - want)
            report.record(
                defect <= fine.tail_bound + 1e-12 and got <= want + 1e-12,
                f"mu={mu}: defect {defect:.3e} over tail {fine.tail_bound:.3e}",
                defect=defect,
            )
    return report


# ---------------------------------------------------------------------------
# Plancherel measure and deterministic flow
# ---------------------------------------------------------------------------


def plancherel_measure(theta, lam: Partition) -> float:
    """Poissonized Plancherel weight e^{-theta} theta^|lam| (dim/|lam|!)^2."""
    theta = Fraction(theta)
    if theta <= 0:
        raise ValueError("need theta > 0")
    n = size(lam)
    return math.exp(-float(theta)) * float(
        theta ** n * Fraction(dim(lam), factorial(n)) ** 2
    )


def plancherel_flow_scale(u, omega: ThomaPoint) -> ThomaPoint:
    """The deterministic flow written in the contraction variable u = e^{-t}:
    (alpha, beta, delta) -> (u alpha, u beta, u delta + (1-u)), exact."""
    u = Fraction(u)
    if not 0 < u <= 1:
        raise ValueError("need 0 < u <= 1")
    return ThomaPoint(
        tuple(a * u for a in omega.alpha),
        tuple(b * u for b in omega.beta),
        omega.delta * u + (1 - u),
    )


def plancherel_flow(t: float, omega: ThomaPoint) -> ThomaPoint:
    """The flow at time t >= 0; exact given the binary rational e^{-t}."""
    if t < 0:
        raise ValueError("need t >= 0")
    return plancherel_flow_scale(Fraction(math.exp(-t)), omega)


# ---------------------------------------------------------------------------
# moments of the scaled size under the stationary law
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _stirling2(k: int, j: int) -> int:
    if k == j:
        return 1
    if j == 0 or j > k:
        return 0
    return j * _stirling2(k - 1, j) + _stirling2(k - 1, j - 1)


def scaled_size_moment(sigma: ParamPair, r, k: int) -> Fraction:
    """E[(|lam|/r)^k] under the stationary law, exactly.

    Factorial moments of the negative binomial are (sigma2)_j r^j, so the
    raw moment is a Stirling-weighted sum."""
    r = Fraction(r)
    if k < 0:
        raise ValueError("need k >= 0")
    total = Fraction(0)
    for j in range(k + 1):
        total += _stirling2(k, j) * rising_factorial(sigma.sigma2, j) * r ** j
    return total / r ** k


def gamma_moment_check(sigma: ParamPair, r_grid, k_max: int) -> VerifyReport:
    """Scaled size moments approach the Gamma(sigma2) moments (sigma2)_k as
    r grows, with defect monotone in 1/r."""
    report = VerifyReport("gamma-moments")
    r_grid = [Fraction(r) for r in r_grid]
    for k in range(1, k_max + 1):
        limit = rising_factorial(sigma.sigma2, k)
        defects = [abs(scaled_size_moment(sigma, r, k) - limit) for r in r_grid]
        report.record(
            all(defects[i] >= defects[i + 1] for i in range(len(defects) - 1)),
            f"k={k}: defects not monotone along the r grid",
            defect=float(max(defects)),
        )
        if k == 1:
            report.record(
                all(d == 0 for d in defects),
                "k=1: the first scaled moment must equal sigma2 exactly",
            )
        report.details[f"defects_k{k}"] = [float(d) for d in defects]
    return report
