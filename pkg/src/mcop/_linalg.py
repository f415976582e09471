"""Small exact linear algebra over the rationals."""

from __future__ import annotations

import math
from fractions import Fraction
from collections.abc import Sequence


def primitive(vec: Sequence[Fraction]) -> tuple[tuple[int, ...], Fraction]:
    """Scale ``vec`` by a positive rational to coprime integers.

    Returns ``(ints, factor)`` with ``ints == factor * vec``; a zero vector
    comes back unchanged with factor 1.
    """
    den = 1
    for v in vec:
        den = math.lcm(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(ints), Fraction(1)
    return tuple(v // g for v in ints), Fraction(den, g)


class RowSpace:
    """Incrementally maintained row echelon basis used for rank tests."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: list[tuple[int, list[Fraction]]] = []

    def reduce(self, row: Sequence[Fraction]) -> list[Fraction]:
        row = [Fraction(v) for v in row]
        for col, prow in self.pivots:
            c = row[col]
            if c:
                for j in range(len(row)):
                    if prow[j]:
                        row[j] -= c * prow[j]
        return row

    def add(self, row: Sequence[Fraction], ncols: int | None = None) -> bool:
        """Add ``row`` if independent; returns whether the rank grew.

        Pivots are only taken among the first ``ncols`` entries, so trailing
        columns (a right-hand side) ride along with the elimination.
        """
        red = self.reduce(row)
        limit = len(red) if ncols is None else ncols
        for col in range(limit):
            v = red[col]
            if v:
                inv = 1 / v
                red = [x * inv for x in red]
                # keep the basis fully reduced so reduce() is one pass
                for i, (pc, prow) in enumerate(self.pivots):
                    c = prow[col]
                    if c:
                        self.pivots[i] = (pc, [a - c * b for a, b in zip(prow, red)])
                self.pivots.append((col, red))
                return True
        return False

    def copy(self) -> RowSpace:
        other = RowSpace()
        other.pivots = list(self.pivots)
        return other

    def __len__(self) -> int:
        return len(self.pivots)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    space = RowSpace()
    for r in rows:
        space.add(r)
    return len(space)


def affine_dimension(points: Sequence[Sequence[Fraction]], directions=()) -> int:
    """Dimension of the affine hull of ``points`` plus the span of ``directions``."""
    if not points:
        return -1
    base = points[0]
    diffs = [[Fraction(a) - b for a, b in zip(p, base)] for p in points[1:]]
    return rank(diffs + [list(d) for d in directions])


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Unique solution of the square system ``A x = b`` or None if singular."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                c = M[r][col]
                M[r] = [a - c * p for a, p in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def nullspace_vector(rows: Sequence[Sequence[Fraction]], n: int) -> list[Fraction] | None:
    """A nonzero kernel vector when ``rows`` has rank exactly ``n - 1``."""
    space = RowSpace()
    for r in rows:
        space.add(r)
    if len(space) != n - 1:
        return None
    pivot_cols = {c for c, _ in space.pivots}
    (free,) = [c for c in range(n) if c not in pivot_cols]
    vec = [Fraction(0)] * n
    vec[free] = Fraction(1)
    for col, prow in space.pivots:
        vec[col] = -prow[free]
    return vec
