"""Ehrhart polynomials, reciprocity, rank markings and reflexivity."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from ._linalg import primitive, solve
from .errors import (
    InterpolationMismatch,
    MarkingNotIntegral,
    NotRanked,
    NotRankMarking,
    NotRegular,
    Unbounded,
)
from .marked import (
    ChainOrderPartition,
    MarkedPoset,
    all_order,
    all_partitions,
    is_rank_marking,
    is_regular,
)
from .polyhedron import (
    HPolyhedron,
    LinearConstraint,
    Point,
    build_polyhedron,
    count_interior_lattice_points,
    count_lattice_points,
    dilate,
    dimension,
    facets,
    interior_lattice_points,
    vertices,
)
from .poset import Poset, rank_function


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Polynomial with exact rational coefficients, constant term first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, m) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coefficients):
            out = out * m + c
        return out

    def reflected(self) -> EhrhartPolynomial:
        """The polynomial ``m -> L(-m-1)``."""
        out = [Fraction(0)] * len(self.coefficients)
        for k, c in enumerate(self.coefficients):
            # (-m-1)^k = (-1)^k sum_j C(k,j) m^j
            sign = -1 if k % 2 else 1
            for j in range(k + 1):
                out[j] += sign * c * comb(k, j)
        return EhrhartPolynomial(tuple(out))

    def __str__(self) -> str:
        terms = []
        for k in reversed(range(len(self.coefficients))):
            c = self.coefficients[k]
            if not c:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("m" if k == 1 else f"m^{k}")
            text = str(mag) if (mag != 1 or not mono) else ""
            if text and mono:
                text += "*"
            terms.append(("-" if c < 0 else "+", text + mono))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def interpolate(values: Sequence[int]) -> EhrhartPolynomial:
    """The polynomial of degree ``< len(values)`` through ``(m, values[m])``."""
    n = len(values)
    A = [[Fraction(m) ** k for k in range(n)] for m in range(n)]
    coeffs = solve(A, [Fraction(v) for v in values])
    return EhrhartPolynomial(tuple(coeffs))


def _bounded_polytope(mp: MarkedPoset, part: ChainOrderPartition) -> HPolyhedron:
    if not mp.is_integral:
        raise MarkingNotIntegral("marking must be integral", "λ integral violated")
    h = build_polyhedron(mp, part.check(mp))
    if not h.is_bounded():
        raise Unbounded("the polyhedron is unbounded")
    return h


def dilate_counts(mp: MarkedPoset, part: ChainOrderPartition, upto: int) -> list[int]:
    return [count_lattice_points(dilate(mp, part, m)) for m in range(upto + 1)]


def ehrhart_polynomial(
    mp: MarkedPoset, part: ChainOrderPartition | None = None, dim: int | None = None
) -> EhrhartPolynomial:
    """Count dilates ``0..dim``, interpolate, then check dilate ``dim + 1``."""
    part = part or all_order(mp)
    h = _bounded_polytope(mp, part)
    if dim is None:
        dim = dimension(h)
    counts = dilate_counts(mp, part, dim + 1)
    poly = interpolate(counts[:-1])
    if poly(dim + 1) != counts[-1]:
        raise InterpolationMismatch(
            f"interpolated value {poly(dim + 1)} differs from count {counts[-1]} at m={dim + 1}"
        )
    return poly


def check_reciprocity(mp: MarkedPoset, part: ChainOrderPartition, m_max: int) -> bool:
    h = _bounded_polytope(mp, part)
    dim = dimension(h)
    poly = ehrhart_polynomial(mp, part, dim)
    sign = -1 if dim % 2 else 1
    for m in range(1, m_max + 1):
        interior = count_interior_lattice_points(dilate(mp, part, m))
        if sign * poly(-m) != interior:
            return False
    return True


def hibi_criterion(L: EhrhartPolynomial, n: int) -> bool:
    """Whether ``L(-m-1) == (-1)^n L(m)`` as polynomials."""
    sign = -1 if n % 2 else 1
    target = EhrhartPolynomial(tuple(sign * c for c in L.coefficients))
    return L.reflected() == target


# -- rank markings and interior points ----------------------------------------


def rank_marking(poset: Poset, marked: Iterable[str]) -> MarkedPoset:
    rank = rank_function(poset)
    if rank is None:
        raise NotRanked("poset is not ranked", "P ranked violated")
    return MarkedPoset(poset, {a: rank[a] for a in marked})


def canonical_interior_point(mp: MarkedPoset, part: ChainOrderPartition) -> Point:
    """``r(p)`` on order coordinates and 1 on chain coordinates."""
    rank = is_rank_marking(mp)
    if rank is None:
        raise NotRankMarking("marking is not a rank marking", "λ = λ^r violated")
    point = tuple(1 if p in part.chain else rank[p] for p in mp.unmarked)
    if not build_polyhedron(mp, part.check(mp)).contains(point, strict=True):
        raise AssertionError(f"{point} is not an interior point")
    return point


def unique_interior_check(mp: MarkedPoset, part: ChainOrderPartition) -> tuple[bool, list[Point]]:
    points = interior_lattice_points(_bounded_polytope(mp, part))
    return len(points) == 1, points


@dataclass
class ReflexivityReport:
    coords: tuple[str, ...]
    partition: ChainOrderPartition
    dimension: int
    interior_points: list[Point]
    unique_interior: bool
    reflexive: bool
    hibi_holds: bool
    ehrhart: EhrhartPolynomial
    lattice_polytope: bool = True
    translation: Point | None = None
    facets: list[LinearConstraint] = field(default_factory=list)
    failing_facet: LinearConstraint | None = None

    @property
    def consistent(self) -> bool:
        """Facet normalization and the Ehrhart symmetry test agree."""
        return not self.unique_interior or self.reflexive == self.hibi_holds

    @property
    def failing_dual_vertex(self) -> tuple[Fraction, ...] | None:
        """The facet functional scaled to right-hand side 1."""
        if self.failing_facet is None:
            return None
        f = self.failing_facet
        return tuple(c / f.rhs for c in f.dense(self.coords))


def _normalized_facet(c: LinearConstraint, coords: Sequence[str], shift: Point) -> LinearConstraint:
    dense = c.dense(coords)
    rhs = c.rhs - sum(a * s for a, s in zip(dense, shift))
    ints, factor = primitive(dense)
    return LinearConstraint.make(dict(zip(coords, ints)), rhs * factor, tag=c.tag)


def is_reflexive(mp: MarkedPoset, part: ChainOrderPartition | None = None) -> ReflexivityReport:
    """Translate by the interior lattice point and test every facet for right side 1."""
    part = part or all_order(mp)
    h = _bounded_polytope(mp, part)
    dim = dimension(h)
    points = interior_lattice_points(h)
    poly = ehrhart_polynomial(mp, part, dim)
    report = ReflexivityReport(
        h.coords,
        part,
        dim,
        points,
        len(points) == 1,
        False,
        hibi_criterion(poly, dim),
        poly,
        lattice_polytope=vertices(h).is_integral,
    )
    if not report.unique_interior:
        return report
    u = points[0]
    report.translation = u
    report.facets = [_normalized_facet(c, h.coords, u) for _, c in facets(h)]
    bad = [f for f in report.facets if f.rhs != 1]
    report.failing_facet = bad[0] if bad else None
    report.reflexive = report.lattice_polytope and not bad
    return report


@dataclass
class AuditReport:
    rank_marking: bool
    rows: list[ReflexivityReport]

    @property
    def statement(self) -> bool:
        """Every partition has a unique interior lattice point and is reflexive."""
        return all(r.unique_interior and r.reflexive for r in self.rows)

    @property
    def agreement(self) -> bool:
        return self.rank_marking == self.statement

    @property
    def falsification(self) -> str | None:
        if self.agreement:
            return None
        return (
            f"rank marking={self.rank_marking} but reflexive over partitions={self.statement}: "
            + ", ".join(f"{r.partition.label()}={r.reflexive}" for r in self.rows)
        )


def theorem_main_audit(
    mp: MarkedPoset, partitions: Sequence[ChainOrderPartition] | None = None
) -> AuditReport:
    """Compare "λ is the rank marking" with "every partition gives a reflexive polytope"."""
    if not mp.is_integral:
        raise MarkingNotIntegral("marking must be integral", "λ integral violated")
    if not is_regular(mp):
        raise NotRegular("marking is not regular", "(P, λ) regular violated")
    parts = list(partitions) if partitions is not None else all_partitions(mp)
    rows = [is_reflexive(mp, part) for part in parts]
    return AuditReport(is_rank_marking(mp) is not None, rows)
