"""Young-diagram combinatorics: enumeration, dimensions, Frobenius coordinates.

A partition is represented as a tuple of weakly decreasing positive
integers; the empty tuple is the empty diagram.  All counting is done in
arbitrary-precision integers, all half-integer data in exact fractions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, NamedTuple

Partition = tuple[int, ...]

EMPTY: Partition = ()


def is_partition(parts) -> bool:
    """True if `parts` is a weakly decreasing tuple of positive integers."""
    return all(isinstance(p, int) and p >= 1 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1)
    )


def check_partition(parts: Partition) -> Partition:
    if not is_partition(parts):
        raise ValueError(f"not a partition: {parts!r}")
    return parts


def size(lam: Partition) -> int:
    return sum(lam)


def transpose(lam: Partition) -> Partition:
    if not lam:
        return ()
    cols = [0] * lam[0]
    for row in lam:
        for j in range(row):
            cols[j] += 1
    return tuple(cols)


def contains(mu: Partition, lam: Partition) -> bool:
    """True if the diagram of mu fits inside the diagram of lam."""
    if len(mu) > len(lam):
        return False
    return all(m <= l for m, l in zip(mu, lam))


def _gen_partitions(n: int, max_part: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _gen_partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n in reverse-lexicographic order, (n) first."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return tuple(_gen_partitions(n, n))


def partitions_up_to(n: int) -> list[Partition]:
    """All partitions of size 0..n, graded by size, rev-lex within a grade."""
    out: list[Partition] = []
    for k in range(n + 1):
        out.extend(enumerate_partitions(k))
    return out


def up_set(lam: Partition) -> list[Partition]:
    """All diagrams obtained from lam by appending one box."""
    out = []
    for i in range(len(lam)):
        if i == 0 or lam[i - 1] > lam[i]:
            out.append(lam[:i] + (lam[i] + 1,) + lam[i + 1:])
    out.append(lam + (1,))
    return out


def down_set(lam: Partition) -> list[Partition]:
    """All diagrams obtained from lam by removing one box."""
    out = []
    for i in range(len(lam)):
        if i == len(lam) - 1 or lam[i] > lam[i + 1]:
            if lam[i] == 1:
                out.append(lam[:i])
            else:
                out.append(lam[:i] + (lam[i] - 1,) + lam[i + 1:])
    return out


def boxes(lam: Partition) -> Iterator[tuple[int, int]]:
    """All boxes (row, col), 1-based."""
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            yield (i, j)


def content(lam: Partition, box: tuple[int, int]) -> int:
    """Content c(box) = col - row for a box inside lam (1-based)."""
    i, j = box
    if not (1 <= i <= len(lam) and 1 <= j <= lam[i - 1]):
        raise ValueError(f"box {box} outside diagram {lam}")
    return j - i


def added_box(lam: Partition, mu: Partition) -> tuple[int, int]:
    """The unique box of mu not in lam, for mu = lam plus one box."""
    for i in range(len(mu)):
        li = lam[i] if i < len(lam) else 0
        if mu[i] == li + 1:
            return (i + 1, mu[i])
        if mu[i] != li:
            break
    raise ValueError(f"{mu} is not {lam} plus one box")


def skew_boxes(mu: Partition, lam: Partition) -> list[tuple[int, int]]:
    """Boxes of lam not in mu (mu must be contained in lam)."""
    if not contains(mu, lam):
        raise ValueError(f"{mu} not contained in {lam}")
    out = []
    for i in range(len(lam)):
        mi = mu[i] if i < len(mu) else 0
        out.extend((i + 1, j) for j in range(mi + 1, lam[i] + 1))
    return out


@lru_cache(maxsize=None)
def dim(lam: Partition) -> int:
    """Number of standard Young tableaux of shape lam (hook lengths)."""
    n = sum(lam)
    if n == 0:
        return 1
    tr = transpose(lam)
    d = factorial(n)
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            hook = (row - j) + (tr[j - 1] - i) + 1
            d //= hook
    return d


@lru_cache(maxsize=None)
def dim_chain_count(lam: Partition) -> int:
    """dim via saturated-chain counting; test oracle for the hook formula."""
    if not lam:
        return 1
    return sum(dim_chain_count(mu) for mu in down_set(lam))


@lru_cache(maxsize=None)
def skew_dim(mu: Partition, lam: Partition) -> int:
    """Number of standard tableaux of skew shape lam/mu.

    Computed by the determinant formula n! * det[1/(lam_i - mu_j - i + j)!];
    returns 0 unless mu is contained in lam, and 1 for mu = lam.
    """
    if not contains(mu, lam):
        return 0
    n = sum(lam) - sum(mu)
    if n == 0:
        return 1
    if len(lam) > lam[0]:
        # transposing the pair shrinks the determinant
        return skew_dim(transpose(mu), transpose(lam))
    ell = len(lam)
    mat = []
    for i in range(1, ell + 1):
        row = []
        for j in range(1, ell + 1):
            mj = mu[j - 1] if j - 1 < len(mu) else 0
            a = lam[i - 1] - mj - i + j
            row.append(Fraction(1, factorial(a)) if a >= 0 else Fraction(0))
        mat.append(row)
    d = factorial(n) * _det(mat)
    assert d.denominator == 1
    return int(d)


def _det(mat: list[list[Fraction]]) -> Fraction:
    """Fraction-exact determinant by Gaussian elimination."""
    m = [row[:] for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


@lru_cache(maxsize=None)
def skew_dim_chain_count(mu: Partition, lam: Partition) -> int:
    """Saturated-chain count from mu to lam; oracle for skew_dim."""
    if not contains(mu, lam):
        return 0
    if mu == lam:
        return 1
    return sum(
        skew_dim_chain_count(mu, kappa)
        for kappa in down_set(lam)
        if contains(mu, kappa)
    )


class FrobeniusCoords(NamedTuple):
    """Modified Frobenius coordinates: half-integer arm/leg lengths."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    d: int


def frobenius(lam: Partition) -> FrobeniusCoords:
    """Modified Frobenius coordinates a_i = lam_i - i + 1/2, b_i from rows of lam'."""
    tr = transpose(lam)
    d = sum(1 for i, row in enumerate(lam, start=1) if row >= i)
    half = Fraction(1, 2)
    a = tuple(lam[i] - (i + 1) + half for i in range(d))
    b = tuple(tr[i] - (i + 1) + half for i in range(d))
    return FrobeniusCoords(a, b, d)


def from_frobenius(coords: FrobeniusCoords) -> Partition:
    """Inverse of `frobenius`."""
    a, b, d = coords
    half = Fraction(1, 2)
    rows = [int(a[i] + (i + 1) - half) for i in range(d)]
    cols = [int(b[i] + (i + 1) - half) for i in range(d)]
    extra = []
    for i in range(d + 1, (cols[0] if cols else d) + 1):
        length = sum(1 for c in cols if c >= i)
        if length:
            extra.append(length)
    return check_partition(tuple(rows + extra))


def falling_factorial(y, m: int):
    """y(y-1)...(y-m+1); equals 1 when m = 0."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = y ** 0  # keeps the caller's numeric type
    for k in range(m):
        out *= y - k
    return out


def rising_factorial(y, m: int):
    """Pochhammer y(y+1)...(y+m-1); equals 1 when m = 0."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = y ** 0
    for k in range(m):
        out *= y + k
    return out


@lru_cache(maxsize=None)
def subdiagrams(lam: Partition) -> tuple[Partition, ...]:
    """All partitions contained in lam, graded by size."""
    return tuple(
        mu
        for m in range(sum(lam) + 1)
        for mu in enumerate_partitions(m)
        if contains(mu, lam)
    )


def count_partitions(n: int) -> int:
    """Classical p(n) by the p(n, max) recursion; oracle for enumeration."""

    @lru_cache(maxsize=None)
    def p(n: int, m: int) -> int:
        if n == 0:
            return 1
        if m == 0:
            return 0
        return sum(p(n - k, min(k, n - k)) for k in range(1, m + 1))

    return p(n, n)
