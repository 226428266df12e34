"""Jump-rate matrices and their diagonalizing differential operators.

Three generator families: the 1-D birth-death chain attached to the Meixner
polynomials, the z-parameter chain on Young diagrams, and its Plancherel
degeneration.  Alongside them, the one-variable and infinite-variate
Laguerre differential operators, applied symbolically over exact rationals,
and verification routines for intertwining, eigenrelations, and the
regularity bounds of the generator criterion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import polys
from .links import BinomialLinkSpec, BouquetLinkSpec
from .partitions import (
    Partition,
    added_box,
    dim,
    down_set,
    partitions_up_to,
    size,
    up_set,
)
from .symfunc import Coeffs, ParamPair, SymFn, merge_indices


@dataclass(frozen=True)
class Meixner1D:
    """Birth-death rates on Z+ diagonalized by the Meixner polynomials."""

    c: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "r", Fraction(self.r))
        if self.c <= 0 or self.r <= 0:
            raise ValueError("need c > 0 and r > 0")

    def row(self, l: int) -> dict[int, Fraction]:
        c, r = self.c, self.r
        row = {l + 1: r * (c + l), l: -((2 * r + 1) * l + r * c)}
        if l > 0:
            row[l - 1] = (r + 1) * l
        return row

    def states_up_to(self, n: int):
        return list(range(n + 1))

    @staticmethod
    def state_size(l: int) -> int:
        return l

    def link_to(self, other: "Meixner1D") -> BinomialLinkSpec:
        if other.c != self.c or not self.r > other.r:
            raise ValueError("links require equal c and a coarser r")
        return BinomialLinkSpec(self.r, other.r)


@dataclass(frozen=True)
class ZMeasure:
    """Jump rates on Young diagrams for the z-parameter chain."""

    sigma: ParamPair
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if self.r <= 0:
            raise ValueError("need r > 0")
        self.sigma.require_admissible()

    def row(self, lam: Partition) -> dict[Partition, Fraction]:
        r, sigma = self.r, self.sigma
        n = size(lam)
        d = dim(lam)
        row: dict[Partition, Fraction] = {}
        for up in up_set(lam):
            box = added_box(lam, up)
            row[up] = (
                r
                * sigma.content_factor(box[1] - box[0])
                * Fraction(dim(up), (n + 1) * d)
            )
        for dn in down_set(lam):
            row[dn] = (r + 1) * Fraction(n * dim(dn), d)
        row[lam] = -((2 * r + 1) * n + r * sigma.sigma2)
        return row

    def states_up_to(self, n: int):
        return partitions_up_to(n)

    @staticmethod
    def state_size(lam: Partition) -> int:
        return size(lam)

    def link_to(self, other: "ZMeasure") -> BouquetLinkSpec:
        if other.sigma != self.sigma or not self.r > other.r:
            raise ValueError("links require equal sigma and a coarser r")
        return BouquetLinkSpec(self.r, other.r)


@dataclass(frozen=True)
class Plancherel:
    """Plancherel degeneration of the diagram chain: one rate parameter."""

    theta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "theta", Fraction(self.theta))
        if self.theta <= 0:
            raise ValueError("need theta > 0")

    def row(self, lam: Partition) -> dict[Partition, Fraction]:
        n = size(lam)
        d = dim(lam)
        row: dict[Partition, Fraction] = {}
        for up in up_set(lam):
            row[up] = self.theta * Fraction(dim(up), (n + 1) * d)
        for dn in down_set(lam):
            row[dn] = Fraction(n * dim(dn), d)
        row[lam] = -(n + self.theta)
        return row

    def states_up_to(self, n: int):
        return partitions_up_to(n)

    @staticmethod
    def state_size(lam: Partition) -> int:
        return size(lam)

    def link_to(self, other: "Plancherel") -> BouquetLinkSpec:
        if not self.theta > other.theta:
            raise ValueError("link requires a coarser theta")
        return BouquetLinkSpec(self.theta, other.theta)


GeneratorSpec = Meixner1D | ZMeasure | Plancherel


def q_row(spec: GeneratorSpec, state) -> dict:
    """Complete row of the jump-rate matrix at `state`, diagonal included."""
    return spec.row(state)


def apply_q(spec: GeneratorSpec, f, state):
    """(Qf)(state) = sum over the row of rate * f(target)."""
    return sum(rate * f(target) for target, rate in spec.row(state).items())


# ---------------------------------------------------------------------------
# the one-variable Laguerre differential operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpPoly1D:
    """A function x -> e^{-rate*x} * poly(x) with exact coefficients."""

    rate: Fraction
    poly: polys.Poly

    def __post_init__(self):
        object.__setattr__(self, "rate", Fraction(self.rate))
        if self.rate < 0:
            raise ValueError("rate must be nonnegative")

    def __eq__(self, other):
        return (
            isinstance(other, ExpPoly1D)
            and self.rate == other.rate
            and self.poly == other.poly
        )


def laguerre_op_1d(c, g: ExpPoly1D) -> ExpPoly1D:
    """Apply x d^2/dx^2 + (c - x) d/dx to e^{-rx} P(x), exactly.

    The image is e^{-rx} times a polynomial with the same rate."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("need c > 0")
    r, p = g.rate, g.poly
    d1 = polys.padd(polys.pdiff(p), polys.pscale(p, -r))
    d2 = polys.padd(polys.pdiff(d1), polys.pscale(d1, -r))
    x = polys.poly({1: 1})
    out = polys.padd(polys.pmul(x, d2), polys.pmul(polys.poly({0: c, 1: -1}), d1))
    return ExpPoly1D(r, out)


# ---------------------------------------------------------------------------
# the infinite-variate Laguerre differential operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpSymFn:
    """A function omega -> e^{-rate*e1(omega)} * F(omega), F in the e basis."""

    rate: Fraction
    fn: SymFn

    def __post_init__(self):
        object.__setattr__(self, "rate", Fraction(self.rate))
        if self.rate < 0:
            raise ValueError("rate must be nonnegative")
        if self.fn.basis != "e":
            raise ValueError("symbolic part must be in the e basis")


def _mult(idx: Partition, n: int) -> int:
    return sum(1 for part in idx if part == n)


def _remove_part(idx: Partition, n: int) -> Partition:
    out = list(idx)
    out.remove(n)
    return tuple(out)


def _add_terms(acc: Coeffs, idx: Partition, coeff: Fraction) -> None:
    if not coeff:
        return
    cc = acc.get(idx, Fraction(0)) + coeff
    if cc:
        acc[idx] = cc
    else:
        acc.pop(idx, None)


def _second_order_coefficient_index(a: int, k: int) -> Partition:
    # the quadratic coefficient monomial e_a e_k with e_0 = 1 dropped
    return tuple(sorted((x for x in (a, k) if x > 0), reverse=True))


def laguerre_operator_e(sigma: ParamPair, f: SymFn) -> SymFn:
    """The infinite-variate Laguerre operator on polynomials in e_1, e_2, ...

    Second-order coefficients are the finite sums
    sum_k (2n-1-2k) e_{2n-1-k} e_k  and  2 sum_k (n'+n-1-2k) e_{n'+n-1-k} e_k,
    the first-order ones are -n e_n + (content factor at 1-n) e_{n-1}.
    """
    if f.basis != "e":
        raise ValueError("input must be in the e basis")
    acc: Coeffs = {}
    for idx, c in f.coeffs.items():
        parts = sorted(set(idx), reverse=True)
        # first order
        for n in parts:
            m = _mult(idx, n)
            base = _remove_part(idx, n)
            _add_terms(acc, idx, -Fraction(n) * m * c)
            low = sigma.content_factor(1 - n) * m * c
            if n - 1 >= 1:
                _add_terms(acc, merge_indices(base, (n - 1,)), low)
            else:
                _add_terms(acc, base, low)
        # second order, equal variables
        for n in parts:
            m = _mult(idx, n)
            if m < 2:
                continue
            base = _remove_part(_remove_part(idx, n), n)
            scale = Fraction(m * (m - 1)) * c
            for k in range(n):
                w = 2 * n - 1 - 2 * k
                mono = _second_order_coefficient_index(2 * n - 1 - k, k)
                _add_terms(acc, merge_indices(base, mono), scale * w)
        # second order, distinct variables
        for ai, n2 in enumerate(parts):
            for n1 in parts[ai + 1:]:  # n2 > n1 >= 1
                m2, m1 = _mult(idx, n2), _mult(idx, n1)
                base = _remove_part(_remove_part(idx, n2), n1)
                scale = Fraction(2 * m2 * m1) * c
                for k in range(n1):
                    w = n2 + n1 - 1 - 2 * k
                    mono = _second_order_coefficient_index(n2 + n1 - 1 - k, k)
                    _add_terms(acc, merge_indices(base, mono), scale * w)
    return SymFn("e", acc)


def _euler_weighted(f: SymFn) -> SymFn:
    """sum_n n e_n d/de_n: multiplies each monomial by its total degree."""
    return SymFn(f.basis, {idx: c * size(idx) for idx, c in f.coeffs.items()})


def laguerre_op_sym_parts(sigma: ParamPair, phi: ExpSymFn):
    """The three expressions of the product-rule split of the operator
    applied to e^{-r e1} F: (D e^{-r e1}) F, e^{-r e1} (D F), and the
    cross term.  Each is returned as the polynomial multiplying e^{-r e1}.
    """
    sigma.require_admissible()
    r, f = phi.rate, phi.fn
    e1 = SymFn.term("e", (1,))
    part1 = (r * r + r) * e1.multiply(f) - (r * sigma.sigma2) * f
    part2 = laguerre_operator_e(sigma, f)
    part3 = (-2 * r) * _euler_weighted(f)
    return part1, part2, part3


def laguerre_op_sym(sigma: ParamPair, phi: ExpSymFn) -> ExpSymFn:
    """Apply the infinite-variate Laguerre operator to e^{-r e1} F exactly."""
    p1, p2, p3 = laguerre_op_sym_parts(sigma, phi)
    return ExpSymFn(phi.rate, p1 + p2 + p3)


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    max_defect: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, condition: bool, message: str, defect: float = 0.0) -> None:
        self.checked += 1
        self.max_defect = max(self.max_defect, abs(defect))
        if not condition:
            self.failures.append(message)


def _row_times_link(spec: GeneratorSpec, link, state) -> dict:
    out: dict = {}
    for mid, rate in spec.row(state).items():
        if not rate:
            continue
        for target, w in link.row(mid).items():
            if w:
                cur = out.get(target, Fraction(0)) + rate * w
                if cur:
                    out[target] = cur
                else:
                    out.pop(target, None)
    return out


def _link_times_row(link, spec: GeneratorSpec, state) -> dict:
    out: dict = {}
    for mid, w in link.row(state).items():
        if not w:
            continue
        for target, rate in spec.row(mid).items():
            if rate:
                cur = out.get(target, Fraction(0)) + w * rate
                if cur:
                    out[target] = cur
                else:
                    out.pop(target, None)
    return out


def verify_intertwining(spec_fine: GeneratorSpec, spec_coarse: GeneratorSpec,
                        n_max: int) -> VerifyReport:
    """Entrywise exact comparison of Q_fine Λ and Λ Q_coarse on every row of
    size at most n_max.  Both products are row-finite, so there is no
    truncation anywhere."""
    link = spec_fine.link_to(spec_coarse)
    report = VerifyReport("intertwining")
    for state in spec_fine.states_up_to(n_max):
        lhs = _row_times_link(spec_fine, link, state)
        rhs = _link_times_row(link, spec_coarse, state)
        report.record(lhs == rhs, f"row {state}: products differ")
    return report


def verify_ek_bounds(spec: GeneratorSpec, n_max: int) -> VerifyReport:
    """Window maxima for the three regularity inequalities with
    gamma = eta = size + 1, plus the analytic prediction from the 1-D
    reduction of the rates.

    The constants are certified on the window only; the 1-D collapse of the
    row sums is what extends them, and it is checked separately."""
    report = VerifyReport("ek-bounds")

    def gamma(state):
        return Fraction(spec.state_size(state) + 1)

    def window_maxima(n):
        c_diag = Fraction(0)
        c_recip = Fraction(0)
        c_eta = Fraction(0)
        for state in spec.states_up_to(n):
            row = spec.row(state)
            c_diag = max(c_diag, -row[state] / gamma(state))
            q_recip = sum(rate / gamma(t) for t, rate in row.items())
            c_recip = max(c_recip, q_recip * gamma(state))
            q_eta = sum(rate * gamma(t) for t, rate in row.items())
            c_eta = max(c_eta, q_eta / gamma(state))
        return {"diagonal": c_diag, "reciprocal": c_recip, "eta": c_eta}

    full = window_maxima(n_max)
    half = window_maxima(n_max // 2)
    predicted = _predict_bounds_1d(*_size_rate_coefficients(spec),
                                   horizon=max(200, 4 * n_max))

    for key in full:
        report.record(
            full[key] <= predicted[key],
            f"{key}: window constant {full[key]} exceeds prediction {predicted[key]}",
            defect=float(full[key] - predicted[key]),
        )
    report.details = {
        "window": {k: float(v) for k, v in full.items()},
        "window_half": {k: float(v) for k, v in half.items()},
        "predicted": {k: float(v) for k, v in predicted.items()},
        "stabilized": all(full[k] <= predicted[k] for k in full),
    }
    return report


def _size_rate_coefficients(spec: GeneratorSpec):
    """(a, b, c, d) with total up-rate a*l + b and down-rate c*l + d as
    functions of the size l; the diagram chains collapse to these by the
    hook-content identity."""
    if isinstance(spec, Meixner1D):
        return spec.r, spec.r * spec.c, spec.r + 1, Fraction(0)
    if isinstance(spec, ZMeasure):
        return spec.r, spec.r * spec.sigma.sigma2, spec.r + 1, Fraction(0)
    return Fraction(0), spec.theta, Fraction(1), Fraction(0)


def _predict_bounds_1d(a, b, c, d, horizon: int) -> dict:
    """Suprema of the three ratio functions for linear birth-death rates.

    With gamma(l) = l + 1, the diagonal and eta ratios are monotone
    fractional-linear, so their suprema are endpoint values; the reciprocal
    ratio tends to c - a, and the window scan covers any interior maximum."""
    diag = max(b + d, a + c)
    eta = max(b - d, a - c, Fraction(0))
    recip = c - a
    for l in range(horizon + 1):
        up, down = a * l + b, c * l + d
        val = up * Fraction(l + 1, l + 2) - (up + down)
        if l > 0:
            val += down * Fraction(l + 1, l)
        recip = max(recip, val)
    return {"diagonal": diag, "reciprocal": recip, "eta": eta}


def size_rate_sums(spec: ZMeasure | Plancherel, lam: Partition):
    """Total up-rate and down-rate out of lam; by the hook-content collapse
    they depend on lam only through its size."""
    row = spec.row(lam)
    n = size(lam)
    up = sum(rate for t, rate in row.items() if spec.state_size(t) == n + 1)
    down = sum(rate for t, rate in row.items() if spec.state_size(t) == n - 1)
    return up, down


def plancherel_limit_check(theta, sigmas: list[ParamPair], n_max: int) -> VerifyReport:
    """Entrywise defect between the z-parameter rates at r = theta/sigma2 and
    the Plancherel rates, along a sequence of parameter pairs."""
    theta = Fraction(theta)
    limit = Plancherel(theta)
    report = VerifyReport("plancherel-limit")
    defects = []
    for sigma in sigmas:
        spec = ZMeasure(sigma, theta / sigma.sigma2)
        worst = Fraction(0)
        for lam in partitions_up_to(n_max):
            row = spec.row(lam)
            lrow = limit.row(lam)
            for target in set(row) | set(lrow):
                diff = abs(row.get(target, Fraction(0)) - lrow.get(target, Fraction(0)))
                worst = max(worst, diff)
        defects.append(float(worst))
    for i in range(1, len(defects)):
        report.record(
            defects[i] < defects[i - 1],
            f"defect did not decrease between steps {i - 1} and {i}",
            defect=defects[i],
        )
    report.details["defects"] = defects
    return report


def plancherel_limit_operator(f: SymFn) -> SymFn:
    """First-order generator of the deterministic boundary flow, acting on
    polynomials in the power sums: d/dp1 minus the degree-weighted Euler
    operator."""
    if f.basis != "p":
        raise ValueError("input must be in the p basis")
    acc: Coeffs = {}
    for idx, c in f.coeffs.items():
        m1 = _mult(idx, 1)
        if m1:
            _add_terms(acc, _remove_part(idx, 1), c * m1)
        _add_terms(acc, idx, -c * size(idx))
    return SymFn("p", acc)
