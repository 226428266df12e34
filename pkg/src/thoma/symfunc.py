"""Multi-basis symmetric functions with exact evaluation on diagrams and
Thoma-cone points.

Bases: power sums ``p``, elementary ``e``, Schur ``s``, and the inhomogeneous
Frobenius-Schur basis ``fs``.  The first three convert into each other
exactly; ``fs`` is a formal basis that supports pointwise evaluation on
diagrams and the degree-weighted map onto the Schur basis, which is all the
boundary dynamics needs.

Also home to the parameter pair (sigma1, sigma2) = (z+z', zz'), the 1-D
monic Meixner/Laguerre families, and the Meixner/Laguerre symmetric
functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import polys
from .partitions import (
    Partition,
    content,
    dim,
    enumerate_partitions,
    falling_factorial,
    frobenius,
    rising_factorial,
    size,
    skew_boxes,
    skew_dim,
    subdiagrams,
    transpose,
    _det,
)

BASES = ("p", "e", "s", "fs")

Coeffs = dict[Partition, Fraction]


class SymFn:
    """A symmetric function as a sparse coefficient table over one basis."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: str, coeffs: dict[Partition, Fraction | int] | None = None):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.basis = basis
        self.coeffs: Coeffs = {}
        for idx, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                self.coeffs[tuple(idx)] = c

    @classmethod
    def term(cls, basis: str, index: Partition, coeff=1) -> "SymFn":
        return cls(basis, {tuple(index): Fraction(coeff)})

    @classmethod
    def one(cls, basis: str) -> "SymFn":
        return cls.term(basis, ())

    @classmethod
    def zero(cls, basis: str) -> "SymFn":
        return cls(basis)

    def degree(self) -> int:
        return max((size(idx) for idx in self.coeffs), default=0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymFn)
            and self.basis == other.basis
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.basis, frozenset(self.coeffs.items())))

    def __add__(self, other: "SymFn") -> "SymFn":
        if self.basis != other.basis:
            raise ValueError("basis mismatch; convert first")
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            cc = out.get(idx, Fraction(0)) + c
            if cc:
                out[idx] = cc
            else:
                out.pop(idx, None)
        return SymFn(self.basis, out)

    def __sub__(self, other: "SymFn") -> "SymFn":
        return self + (other * -1)

    def __mul__(self, scalar) -> "SymFn":
        scalar = Fraction(scalar)
        return SymFn(self.basis, {idx: c * scalar for idx, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __repr__(self):
        if not self.coeffs:
            return f"SymFn({self.basis!r}, 0)"
        terms = ", ".join(f"{idx}: {c}" for idx, c in sorted(self.coeffs.items()))
        return f"SymFn({self.basis!r}, {{{terms}}})"

    def multiply(self, other: "SymFn") -> "SymFn":
        """Product in a multiplicative basis (p or e)."""
        if self.basis != other.basis or self.basis not in ("p", "e"):
            raise ValueError("multiply requires both factors in the p or e basis")
        out: Coeffs = {}
        for i1, c1 in self.coeffs.items():
            for i2, c2 in other.coeffs.items():
                idx = merge_indices(i1, i2)
                cc = out.get(idx, Fraction(0)) + c1 * c2
                if cc:
                    out[idx] = cc
                else:
                    out.pop(idx, None)
        return SymFn(self.basis, out)

    def as_diagram_function(self):
        """Callable lam -> exact value; handles every basis including fs."""
        if self.basis == "fs":
            items = list(self.coeffs.items())
            return lambda lam: sum((c * fs_eval(mu, lam) for mu, c in items), Fraction(0))
        return lambda lam: eval_on_diagram(self, lam)


def merge_indices(a: Partition, b: Partition) -> Partition:
    return tuple(sorted(a + b, reverse=True))


# ---------------------------------------------------------------------------
# parameters (z, z') through sigma1 = z + z', sigma2 = z z'
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParamPair:
    """The symmetric parameter pair; (z+c)(z'+c) = c^2 + sigma1*c + sigma2."""

    sigma1: Fraction
    sigma2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "sigma1", Fraction(self.sigma1))
        object.__setattr__(self, "sigma2", Fraction(self.sigma2))

    def content_factor(self, c) -> Fraction:
        c = Fraction(c)
        return c * c + self.sigma1 * c + self.sigma2

    def is_admissible(self) -> bool:
        # the quadratic k^2 + sigma1 k + sigma2 is convex, so its minimum
        # over the integers sits at one of the two integers nearest -sigma1/2
        half = -self.sigma1 / 2
        for k in {math.floor(half), math.ceil(half)}:
            if self.content_factor(k) <= 0:
                return False
        return True

    def require_admissible(self) -> "ParamPair":
        if not self.is_admissible():
            raise ValueError(
                f"inadmissible parameters sigma1={self.sigma1}, sigma2={self.sigma2}: "
                "k^2 + sigma1*k + sigma2 must be positive for every integer k"
            )
        return self


# ---------------------------------------------------------------------------
# Thoma cone
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThomaPoint:
    """A point (alpha, beta, delta) of the Thoma cone with finite support."""

    alpha: tuple[Fraction, ...] = ()
    beta: tuple[Fraction, ...] = ()
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        alpha = tuple(Fraction(a) for a in self.alpha)
        beta = tuple(Fraction(b) for b in self.beta)
        delta = Fraction(self.delta)
        for seq, name in ((alpha, "alpha"), (beta, "beta")):
            if any(x <= 0 for x in seq):
                raise ValueError(f"{name} entries must be positive")
            if any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
                raise ValueError(f"{name} must be weakly decreasing")
        if sum(alpha) + sum(beta) > delta:
            raise ValueError("sum(alpha) + sum(beta) must not exceed delta")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "delta", delta)

    @property
    def gamma(self) -> Fraction:
        return self.delta - sum(self.alpha) - sum(self.beta)

    def size(self) -> Fraction:
        return self.delta

    def scale(self, factor) -> "ThomaPoint":
        """The homothety omega -> factor * omega on the cone."""
        factor = Fraction(factor)
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        if factor == 0:
            return ThomaPoint()
        return ThomaPoint(
            tuple(a * factor for a in self.alpha),
            tuple(b * factor for b in self.beta),
            self.delta * factor,
        )


def point_of_diagram(lam: Partition) -> ThomaPoint:
    """The canonical embedding of a diagram via its Frobenius coordinates."""
    a, b, _ = frobenius(lam)
    return ThomaPoint(a, b, Fraction(size(lam)))


# ---------------------------------------------------------------------------
# irreducible characters by the Murnaghan-Nakayama rule (beta-set form)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _char_beta(betas: tuple[int, ...], rho: Partition) -> int:
    if not rho:
        return 1
    s, rest = rho[0], rho[1:]
    bset = set(betas)
    total = 0
    for b in betas:
        nb = b - s
        if nb >= 0 and nb not in bset:
            crossed = sum(1 for x in betas if nb < x < b)
            nxt = tuple(sorted((bset - {b}) | {nb}, reverse=True))
            total += (-1) ** crossed * _char_beta(nxt, rest)
    return total


def character(lam: Partition, rho: Partition) -> int:
    """chi^lam(rho) for lam, rho partitions of the same number."""
    if size(lam) != size(rho):
        raise ValueError("lam and rho must partition the same number")
    n = len(lam)
    betas = tuple(lam[i] + (n - 1 - i) for i in range(n))
    return _char_beta(betas, rho)


def centralizer_order(rho: Partition) -> int:
    """z_rho = prod k^{m_k} m_k!."""
    z = 1
    mult: dict[int, int] = {}
    for part in rho:
        mult[part] = mult.get(part, 0) + 1
    for k, m in mult.items():
        z *= k ** m * factorial(m)
    return z


# ---------------------------------------------------------------------------
# base changes among p, e, s
# ---------------------------------------------------------------------------


def _mono_mul(table: Coeffs, index: Partition, scalar: Fraction) -> Coeffs:
    return {merge_indices(idx, index): c * scalar for idx, c in table.items()}


def _table_add(acc: Coeffs, other: Coeffs) -> None:
    for idx, c in other.items():
        cc = acc.get(idx, Fraction(0)) + c
        if cc:
            acc[idx] = cc
        else:
            acc.pop(idx, None)


@lru_cache(maxsize=None)
def _p_in_e(k: int) -> tuple[tuple[Partition, Fraction], ...]:
    # Newton: p_k = sum_{i<k} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
    acc: Coeffs = {(k,): Fraction((-1) ** (k - 1) * k)}
    for i in range(1, k):
        inner = dict(_p_in_e(k - i))
        _table_add(acc, _mono_mul(inner, (i,), Fraction((-1) ** (i - 1))))
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def _e_in_p(k: int) -> tuple[tuple[Partition, Fraction], ...]:
    # Newton: e_k = (1/k) sum_{i=1..k} (-1)^{i-1} p_i e_{k-i}
    if k == 0:
        return (((), Fraction(1)),)
    acc: Coeffs = {}
    for i in range(1, k + 1):
        inner = dict(_e_in_p(k - i))
        _table_add(acc, _mono_mul(inner, (i,), Fraction((-1) ** (i - 1), k)))
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def _schur_in_p(mu: Partition) -> tuple[tuple[Partition, Fraction], ...]:
    n = size(mu)
    acc: Coeffs = {}
    for rho in enumerate_partitions(n):
        chi = character(mu, rho)
        if chi:
            acc[rho] = Fraction(chi, centralizer_order(rho))
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def _p_in_s(rho: Partition) -> tuple[tuple[Partition, Fraction], ...]:
    n = size(rho)
    acc: Coeffs = {}
    for lam in enumerate_partitions(n):
        chi = character(lam, rho)
        if chi:
            acc[lam] = Fraction(chi)
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def _schur_in_e(mu: Partition) -> tuple[tuple[Partition, Fraction], ...]:
    # dual Jacobi-Trudi: s_mu = det[e_{mu'_i - i + j}]
    tr = transpose(mu)
    d = len(tr)
    if d == 0:
        return (((), Fraction(1)),)
    from itertools import permutations

    acc: Coeffs = {}
    for perm in permutations(range(d)):
        sign = _perm_sign(perm)
        index: list[int] = []
        ok = True
        for i in range(d):
            a = tr[i] - (i + 1) + (perm[i] + 1)
            if a < 0:
                ok = False
                break
            if a > 0:
                index.append(a)
        if not ok:
            continue
        idx = tuple(sorted(index, reverse=True))
        cc = acc.get(idx, Fraction(0)) + sign
        if cc:
            acc[idx] = cc
        else:
            acc.pop(idx, None)
    return tuple(sorted(acc.items()))


def _perm_sign(perm: tuple[int, ...]) -> int:
    inv = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inv % 2 else 1


def _expand_index(index: Partition, atom_table) -> Coeffs:
    """Expand a product basis element through per-degree atom expansions."""
    acc: Coeffs = {(): Fraction(1)}
    for part in index:
        atom = dict(atom_table(part))
        out: Coeffs = {}
        for idx1, c1 in acc.items():
            for idx2, c2 in atom.items():
                idx = merge_indices(idx1, idx2)
                cc = out.get(idx, Fraction(0)) + c1 * c2
                if cc:
                    out[idx] = cc
                else:
                    out.pop(idx, None)
        acc = out
    return acc


def convert(f: SymFn, target: str) -> SymFn:
    """Exact change of basis within {p, e, s}."""
    if target not in ("p", "e", "s"):
        raise ValueError(f"cannot convert into basis {target!r}")
    if f.basis == "fs":
        raise ValueError("fs basis has no polynomial expansion here; "
                         "use fs_eval or boundary_basis_map")
    if f.basis == target:
        return SymFn(f.basis, dict(f.coeffs))

    out: Coeffs = {}
    if f.basis == "p" and target == "e":
        for idx, c in f.coeffs.items():
            _table_add(out, {k: v * c for k, v in _expand_index(idx, _p_in_e).items()})
    elif f.basis == "e" and target == "p":
        for idx, c in f.coeffs.items():
            _table_add(out, {k: v * c for k, v in _expand_index(idx, _e_in_p).items()})
    elif f.basis == "s" and target == "p":
        for idx, c in f.coeffs.items():
            _table_add(out, {k: v * c for k, v in dict(_schur_in_p(idx)).items()})
    elif f.basis == "s" and target == "e":
        for idx, c in f.coeffs.items():
            _table_add(out, {k: v * c for k, v in dict(_schur_in_e(idx)).items()})
    elif f.basis == "p" and target == "s":
        for idx, c in f.coeffs.items():
            _table_add(out, {k: v * c for k, v in dict(_p_in_s(idx)).items()})
    elif f.basis == "e" and target == "s":
        return convert(convert(f, "p"), "s")
    else:  # pragma: no cover
        raise AssertionError
    return SymFn(target, out)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def eval_p_on_point(k: int, omega: ThomaPoint) -> Fraction:
    """p_k at a Thoma-cone point: p_1 = |omega|, higher k from alpha/beta."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return omega.delta
    return sum(a ** k for a in omega.alpha) + (-1) ** (k - 1) * sum(
        b ** k for b in omega.beta
    )


def eval_p_on_diagram(k: int, lam: Partition) -> Fraction:
    """p_k as a function on diagrams, by the row formula."""
    half = Fraction(1, 2)
    total = Fraction(0)
    for i, row in enumerate(lam, start=1):
        total += (row - i + half) ** k - (-i + half) ** k
    return total


def eval_on_point(f: SymFn, omega: ThomaPoint) -> Fraction:
    if f.basis == "fs":
        raise ValueError("fs basis cannot be evaluated at Thoma points; "
                         "map it to the Schur basis first")
    g = f if f.basis == "p" else convert(f, "p")
    total = Fraction(0)
    for idx, c in g.coeffs.items():
        term = c
        for k in idx:
            term *= eval_p_on_point(k, omega)
        total += term
    return total


def eval_on_diagram(f: SymFn, lam: Partition) -> Fraction:
    if f.basis == "fs":
        raise ValueError("fs basis is evaluated with fs_eval")
    g = f if f.basis == "p" else convert(f, "p")
    total = Fraction(0)
    for idx, c in g.coeffs.items():
        term = c
        for k in idx:
            term *= eval_p_on_diagram(k, lam)
        total += term
    return total


@lru_cache(maxsize=None)
def fs_eval(mu: Partition, lam: Partition) -> Fraction:
    """The Frobenius-Schur function FS_mu at a diagram:
    |lam|^(falling |mu|) * dim(mu, lam) / dim(lam)."""
    sd = skew_dim(mu, lam)
    if sd == 0:
        return Fraction(0)
    return Fraction(falling_factorial(size(lam), size(mu)) * sd, dim(lam))


# ---------------------------------------------------------------------------
# Schur values at Thoma points, via the h-generating series
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _h_values(omega: ThomaPoint, n: int) -> tuple[Fraction, ...]:
    """h_0..h_n under the specialization determined by omega.

    Generating series exp(gamma u) * prod_i (1 + beta_i u) / (1 - alpha_i u).
    """
    gamma = omega.gamma
    hs = [Fraction(0)] * (n + 1)
    acc = Fraction(1)
    for k in range(n + 1):
        hs[k] = acc
        acc = acc * gamma / (k + 1)
    for a in omega.alpha:
        for k in range(1, n + 1):
            hs[k] += a * hs[k - 1]
    for b in omega.beta:
        for k in range(n, 0, -1):
            hs[k] += b * hs[k - 1]
    return tuple(hs)


def schur_at_point(lam: Partition, omega: ThomaPoint) -> Fraction:
    """S_lam(omega), exact, by Jacobi-Trudi over the h-series of omega."""
    if not lam:
        return Fraction(1)
    if omega.gamma == 0:
        # pure two-sided specialization: S_lam vanishes outside the
        # (n_alpha, n_beta) hook, so skip the determinant
        na, nb = len(omega.alpha), len(omega.beta)
        if len(lam) > na and lam[na] > nb:
            return Fraction(0)
    ell = len(lam)
    hs = _h_values(omega, lam[0] + ell)
    mat = []
    for i in range(1, ell + 1):
        row = []
        for j in range(1, ell + 1):
            a = lam[i - 1] - i + j
            row.append(hs[a] if a >= 0 else Fraction(0))
        mat.append(row)
    return _det(mat)


# ---------------------------------------------------------------------------
# Meixner / Laguerre families
# ---------------------------------------------------------------------------


def _skew_content_product(sigma: ParamPair, mu: Partition, nu: Partition) -> Fraction:
    prod = Fraction(1)
    for box in skew_boxes(mu, nu):
        prod *= sigma.content_factor(box[1] - box[0])
    return prod


def meixner_sym(nu: Partition, sigma: ParamPair, r) -> SymFn:
    """Meixner symmetric function for the jump chain, in the fs basis."""
    sigma.require_admissible()
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    n = size(nu)
    coeffs: Coeffs = {}
    for mu in subdiagrams(nu):
        m = size(mu)
        coeffs[mu] = (
            (-r) ** (n - m)
            * Fraction(skew_dim(mu, nu), factorial(n - m))
            * _skew_content_product(sigma, mu, nu)
        )
    return SymFn("fs", coeffs)


def laguerre_sym(nu: Partition, sigma: ParamPair) -> SymFn:
    """Laguerre symmetric function (eigenbasis of the boundary operator),
    in the Schur basis."""
    sigma.require_admissible()
    n = size(nu)
    coeffs: Coeffs = {}
    for mu in subdiagrams(nu):
        m = size(mu)
        coeffs[mu] = (
            Fraction(-1) ** (n - m)
            * Fraction(skew_dim(mu, nu), factorial(n - m))
            * _skew_content_product(sigma, mu, nu)
        )
    return SymFn("s", coeffs)


def boundary_basis_map(f: SymFn, r) -> SymFn:
    """FS_mu -> r^|mu| S_mu termwise; the boundary-link action on the
    fs basis."""
    if f.basis != "fs":
        raise ValueError("input must be in the fs basis")
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    return SymFn("s", {mu: c * r ** size(mu) for mu, c in f.coeffs.items()})


def meixner_poly_1d(n: int, c, r) -> polys.Poly:
    """Monic Meixner polynomial of degree n, coefficients in the
    falling-factorial basis {l^(falling m)}."""
    c, r = Fraction(c), Fraction(r)
    if n < 0 or c <= 0 or r <= 0:
        raise ValueError("need n >= 0, c > 0, r > 0")
    cn = rising_factorial(c, n)
    return polys.poly(
        {
            m: cn
            * (-r) ** (n - m)
            * Fraction(falling_factorial(n, m), rising_factorial(c, m) * factorial(m))
            for m in range(n + 1)
        }
    )


def laguerre_poly_1d(n: int, c) -> polys.Poly:
    """Monic Laguerre polynomial of degree n in the monomial basis."""
    c = Fraction(c)
    if n < 0 or c <= 0:
        raise ValueError("need n >= 0, c > 0")
    cn = rising_factorial(c, n)
    return polys.poly(
        {
            m: cn
            * Fraction(-1) ** (n - m)
            * Fraction(falling_factorial(n, m), rising_factorial(c, m) * factorial(m))
            for m in range(n + 1)
        }
    )
