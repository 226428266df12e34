"""Exact univariate polynomials as sparse {degree: Fraction} dicts.

Used for the one-variable Meixner/Laguerre families and the 1-D Laguerre
differential operator.  Zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction

Poly = dict[int, Fraction]


def poly(coeffs: dict[int, Fraction | int]) -> Poly:
    return {d: Fraction(c) for d, c in coeffs.items() if c != 0}


def padd(*ps: Poly) -> Poly:
    out: Poly = {}
    for p in ps:
        for d, c in p.items():
            cc = out.get(d, Fraction(0)) + c
            if cc:
                out[d] = cc
            else:
                out.pop(d, None)
    return out


def pscale(p: Poly, s) -> Poly:
    s = Fraction(s)
    if not s:
        return {}
    return {d: c * s for d, c in p.items()}


def pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for d1, c1 in p.items():
        for d2, c2 in q.items():
            d = d1 + d2
            cc = out.get(d, Fraction(0)) + c1 * c2
            if cc:
                out[d] = cc
            else:
                out.pop(d, None)
    return out


def pdiff(p: Poly) -> Poly:
    return {d - 1: c * d for d, c in p.items() if d >= 1}


def peval(p: Poly, x):
    return sum((c * x ** d for d, c in p.items()), start=Fraction(0))


def pdegree(p: Poly) -> int:
    return max(p, default=-1)


def falling_poly(m: int) -> Poly:
    """x(x-1)...(x-m+1) expanded in the monomial basis."""
    out = poly({0: 1})
    for k in range(m):
        out = pmul(out, poly({1: 1, 0: -k}))
    return out


def from_falling_basis(ff: Poly) -> Poly:
    """Expand a polynomial given by falling-factorial coefficients."""
    out: Poly = {}
    for m, c in ff.items():
        out = padd(out, pscale(falling_poly(m), c))
    return out


def ff_eval(ff: Poly, y):
    """Evaluate a falling-factorial-basis polynomial at y."""
    total = Fraction(0)
    for m, c in ff.items():
        term = c
        for k in range(m):
            term *= y - k
        total += term
    return total
