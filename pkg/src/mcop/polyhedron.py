"""Exact H-polyhedra for marked chain-order polyhedra.

Coordinates are the unmarked elements in label order; marked coordinates are
substituted by their marking values. All arithmetic is exact.

Lattice points are enumerated depth-first. A Fourier-Motzkin projection
(with Chernikov's history rule against redundant rows) turns the system into
per-coordinate levels: the rows of level ``k`` bound ``x_k`` in terms of
``x_0 .. x_{k-1}``, so the search never needs a bounding box. The same
projection decides emptiness and boundedness exactly.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import kernel
from ._linalg import RowSpace, affine_dimension, nullspace_vector, primitive, rank
from .errors import (
    EmptyPolyhedron,
    InconsistentMarking,
    NotFullDimensional,
    NotPointed,
    NotRegular,
    OriginNotInterior,
    Unbounded,
)
from .marked import ChainOrderPartition, MarkedPoset, is_regular
from .poset import saturated_chains

TAGS = ("chain-nonneg", "chain-sum", "order-cover", "marking-bound")

Point = tuple[int, ...]


@dataclass(frozen=True)
class LinearConstraint:
    """``Σ coeffs·x <= rhs`` (``kind="le"``) or ``= rhs`` (``kind="eq"``)."""

    coeffs: tuple[tuple[str, Fraction], ...]
    rhs: Fraction
    kind: str = "le"
    tag: str = ""

    @classmethod
    def make(cls, coeffs: Mapping[str, object], rhs, kind: str = "le", tag: str = "") -> LinearConstraint:
        if kind not in ("le", "eq"):
            raise ValueError(f"unknown constraint kind {kind!r}")
        items = tuple(sorted((k, Fraction(v)) for k, v in coeffs.items() if v))
        return cls(items, Fraction(rhs), kind, tag)

    def coeff(self, label: str) -> Fraction:
        return dict(self.coeffs).get(label, Fraction(0))

    def dense(self, coords: Sequence[str]) -> tuple[Fraction, ...]:
        d = dict(self.coeffs)
        return tuple(d.get(c, Fraction(0)) for c in coords)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        return sum((v * Fraction(point[k]) for k, v in self.coeffs), Fraction(0))

    def __str__(self) -> str:
        terms = []
        for label, v in self.coeffs:
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            coef = "" if mag == 1 else f"{_fmt(mag)}*"
            terms.append(f"{sign} {coef}x_{label}")
        lhs = " ".join(terms).lstrip("+ ") if terms else "0"
        if lhs.startswith("- "):
            lhs = "-" + lhs[2:]
        op = "<=" if self.kind == "le" else "="
        return f"{lhs} {op} {_fmt(self.rhs)}"


def _fmt(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class VRep:
    coords: tuple[str, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(tuple(map(Fraction, v)) for v in self.vertices)))
        object.__setattr__(self, "rays", tuple(sorted(tuple(map(Fraction, r)) for r in self.rays)))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for v in self.vertices for c in v)

    def translate(self, shift: Sequence) -> VRep:
        shift = [Fraction(s) for s in shift]
        return VRep(self.coords, tuple(tuple(a + s for a, s in zip(v, shift)) for v in self.vertices), self.rays)


@dataclass
class _Projection:
    feasible: bool
    bounded: bool
    levels: list[list[tuple[tuple[int, ...], Fraction]]] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class HPolyhedron:
    coords: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        known = set(self.coords)
        for c in self.constraints:
            extra = {k for k, _ in c.coeffs} - known
            if extra:
                raise ValueError(f"constraint {c} uses unknown coordinates {sorted(extra)}")

    @property
    def provenance(self) -> tuple[str, ...]:
        return tuple(c.tag for c in self.constraints)

    @property
    def dim_ambient(self) -> int:
        return len(self.coords)

    def same_constraints(self, other: HPolyhedron) -> bool:
        return self.coords == other.coords and sorted(map(_key, self.constraints)) == sorted(
            map(_key, other.constraints)
        )

    # -- normalised integer rows ---------------------------------------------
    @cached_property
    def _rows(self) -> tuple[list, list]:
        """``(inequalities, equalities)`` as ``(int coefs, Fraction rhs)``, zero rows kept."""
        ineqs, eqs = [], []
        for c in self.constraints:
            ints, factor = primitive(c.dense(self.coords))
            row = (ints, c.rhs * factor)
            (ineqs if c.kind == "le" else eqs).append(row)
        return ineqs, eqs

    def _all_inequalities(self) -> list[tuple[tuple[int, ...], Fraction]]:
        ineqs, eqs = self._rows
        out = list(ineqs)
        for a, b in eqs:
            out.append((a, b))
            out.append((tuple(-v for v in a), -b))
        return out

    @cached_property
    def _projection(self) -> _Projection:
        return _project(len(self.coords), self._all_inequalities())

    @cached_property
    def _strict_projection(self) -> _Projection:
        rows = []
        for a, b in self._all_inequalities():
            if any(a):
                rows.append((a, Fraction(math.ceil(b) - 1)))
            elif b <= 0:
                return _Projection(False, True)
        return _project(len(self.coords), rows)

    # -- predicates ---------------------------------------------------------
    def contains(self, point: Sequence, strict: bool = False) -> bool:
        """Membership test; ``strict`` asks for every nontrivial inequality to be strict."""
        x = [Fraction(v) for v in point]
        ineqs, eqs = self._rows
        for a, b in eqs:
            if sum(ai * xi for ai, xi in zip(a, x)) != b:
                return False
        for a, b in ineqs:
            lhs = sum(ai * xi for ai, xi in zip(a, x))
            if lhs > b or (strict and any(a) and lhs == b):
                return False
        return True

    def is_empty(self) -> bool:
        return not self._projection.feasible

    def is_bounded(self) -> bool:
        return self._projection.bounded

    def translate(self, shift: Sequence) -> HPolyhedron:
        """The polyhedron ``self - shift``."""
        shift = dict(zip(self.coords, map(Fraction, shift)))
        cons = tuple(
            LinearConstraint(c.coeffs, c.rhs - sum(v * shift[k] for k, v in c.coeffs), c.kind, c.tag)
            for c in self.constraints
        )
        return HPolyhedron(self.coords, cons)

    @cached_property
    def vrep(self) -> VRep:
        return _vertices(self)

    def __repr__(self) -> str:
        return f"HPolyhedron(coords={self.coords}, {len(self.constraints)} constraints)"


def _key(c: LinearConstraint):
    return (c.coeffs, c.rhs, c.kind)


# -- construction -------------------------------------------------------------


def build_polyhedron(mp: MarkedPoset, part: ChainOrderPartition) -> HPolyhedron:
    """The marked chain-order polyhedron projected to the unmarked coordinates."""
    part.check(mp)
    lam = mp.marking
    cons = [
        LinearConstraint.make({p: -1}, 0, tag="chain-nonneg") for p in sorted(part.chain)
    ]
    for a, inner, b in saturated_chains(mp.poset, mp.marked | part.order, part.chain):
        coeffs: dict[str, int] = {p: 1 for p in inner}
        rhs = Fraction(0)
        if a in lam:
            rhs -= lam[a]
        else:
            coeffs[a] = 1
        if b in lam:
            rhs += lam[b]
        else:
            coeffs[b] = -1
        if not coeffs:
            if rhs < 0:
                raise InconsistentMarking(
                    f"marking violates {a} < {b}", "marking is order-preserving on P* violated"
                )
            continue
        if inner:
            tag = "chain-sum"
        elif a in lam or b in lam:
            tag = "marking-bound"
        else:
            tag = "order-cover"
        cons.append(LinearConstraint.make(coeffs, rhs, tag=tag))
    return HPolyhedron(mp.unmarked, tuple(cons))


def facet_constraints_regular_order(mp: MarkedPoset) -> HPolyhedron:
    """Facet inequalities of the marked order polytope of a regular marked poset."""
    if not is_regular(mp):
        raise NotRegular("marked poset is not regular", "regularity violated")
    lam = mp.marking
    cons = []
    for p, q in sorted(mp.poset.covers):
        if p in lam and q in lam:
            continue
        if p in lam:
            cons.append(LinearConstraint.make({q: -1}, -lam[p], tag="marking-bound"))
        elif q in lam:
            cons.append(LinearConstraint.make({p: 1}, lam[q], tag="marking-bound"))
        else:
            cons.append(LinearConstraint.make({p: 1, q: -1}, 0, tag="order-cover"))
    return HPolyhedron(mp.unmarked, tuple(cons))


def dilate(mp: MarkedPoset, part: ChainOrderPartition, m: int) -> HPolyhedron:
    """``m`` times the polyhedron, obtained by scaling the marking (``m >= 0``)."""
    if m < 0:
        raise ValueError("dilation factor must be nonnegative")
    return build_polyhedron(mp.scaled(m), part)


# -- Fourier-Motzkin ----------------------------------------------------------


def _project(n: int, rows: Iterable[tuple[tuple[int, ...], Fraction]]) -> _Projection:
    current: dict[tuple[int, ...], tuple[Fraction, int]] = {}

    def put(store, a, b, hist):
        old = store.get(a)
        if old is None or b < old[0] or (b == old[0] and hist.bit_count() < old[1].bit_count()):
            store[a] = (b, hist)

    for i, (a, b) in enumerate(rows):
        if not any(a):
            if b < 0:
                return _Projection(False, True)
            continue
        put(current, tuple(a), Fraction(b), 1 << i)

    levels: list = [None] * n
    bounded = True
    for k in reversed(range(n)):
        level, rest = [], {}
        for a, (b, h) in current.items():
            if a[k]:
                level.append((a, b, h))
            else:
                rest[a] = (b, h)
        level.sort()
        levels[k] = [(a[: k + 1], b) for a, b, _ in level]
        pos = [r for r in level if r[0][k] > 0]
        neg = [r for r in level if r[0][k] < 0]
        if not pos or not neg:
            bounded = False
        limit = n - k + 1
        for ap, bp, hp in pos:
            cp = ap[k]
            for an, bn, hn in neg:
                hist = hp | hn
                if hist.bit_count() > limit:
                    continue
                cn = -an[k]
                a = [cn * x + cp * y for x, y in zip(ap, an)]
                b = cn * bp + cp * bn
                g = math.gcd(*a)
                if g == 0:
                    if b < 0:
                        return _Projection(False, bounded)
                    continue
                if g != 1:
                    a = [v // g for v in a]
                    b = b / g
                put(rest, tuple(a), b, hist)
        current = rest
    return _Projection(True, bounded, levels)


def _run(levels, n: int, count_only: bool):
    int_levels = [[(a, math.floor(b)) for a, b in rows] for rows in levels]
    return kernel.enumerate_levels(n, int_levels, count_only)


def _require_bounded(h: HPolyhedron) -> _Projection:
    proj = h._projection
    if proj.feasible and not proj.bounded:
        raise Unbounded("lattice point enumeration needs a bounded polyhedron")
    return proj


def lattice_points(h: HPolyhedron) -> list[Point]:
    """All integer points, lexicographic in coordinate order."""
    proj = _require_bounded(h)
    if not proj.feasible:
        return []
    return _run(proj.levels, len(h.coords), False)


def count_lattice_points(h: HPolyhedron) -> int:
    proj = _require_bounded(h)
    if not proj.feasible:
        return 0
    return _run(proj.levels, len(h.coords), True)


def _interior_projection(h: HPolyhedron, check_full_dimensional: bool) -> _Projection:
    _require_bounded(h)
    if check_full_dimensional and dimension(h) < len(h.coords):
        raise NotFullDimensional("interior is empty in the ambient space")
    return h._strict_projection


def interior_lattice_points(h: HPolyhedron, check_full_dimensional: bool = True) -> list[Point]:
    """Integer points satisfying every nontrivial inequality strictly."""
    proj = _interior_projection(h, check_full_dimensional)
    if not proj.feasible:
        return []
    return _run(proj.levels, len(h.coords), False)


def count_interior_lattice_points(h: HPolyhedron, check_full_dimensional: bool = True) -> int:
    proj = _interior_projection(h, check_full_dimensional)
    if not proj.feasible:
        return 0
    return _run(proj.levels, len(h.coords), True)


# -- vertices, rays, facets ---------------------------------------------------


def _reduced_inequalities(h: HPolyhedron):
    best: dict[tuple[int, ...], Fraction] = {}
    for a, b in h._rows[0]:
        if any(a) and (a not in best or b < best[a]):
            best[a] = b
    return sorted(best.items())


def _vertices(h: HPolyhedron) -> VRep:
    n = len(h.coords)
    proj = h._projection
    if not proj.feasible:
        raise EmptyPolyhedron("polyhedron has no points")
    ineqs = _reduced_inequalities(h)
    eqs = [(a, b) for a, b in h._rows[1] if any(a)]
    if rank([a for a, _ in ineqs] + [a for a, _ in eqs]) < n:
        raise NotPointed("polyhedron contains a line; it has no vertices")

    def feasible(x) -> bool:
        for a, b in eqs:
            if sum(ai * xi for ai, xi in zip(a, x)) != b:
                return False
        for a, b in ineqs:
            if sum(ai * xi for ai, xi in zip(a, x)) > b:
                return False
        return True

    base = RowSpace()
    for a, b in eqs:
        base.add(list(a) + [b], ncols=n)

    found: set[tuple[Fraction, ...]] = set()

    def rec(start: int, space: RowSpace):
        if len(space) == n:
            x = [Fraction(0)] * n
            for col, prow in space.pivots:
                x[col] = prow[n]
            if feasible(x):
                found.add(tuple(x))
            return
        missing = n - len(space)
        for i in range(start, len(ineqs) - missing + 1):
            a, b = ineqs[i]
            nxt = space.copy()
            if nxt.add(list(a) + [b], ncols=n):
                rec(i + 1, nxt)

    rec(0, base)

    rays: set[tuple[Fraction, ...]] = set()
    if not proj.bounded:
        homog = [a for a, _ in ineqs]
        eq_rows = [a for a, _ in eqs]
        for combo in itertools.combinations(range(len(homog)), n - 1 - rank(eq_rows)):
            d = nullspace_vector(eq_rows + [homog[i] for i in combo], n)
            if d is None:
                continue
            for cand in (d, [-v for v in d]):
                if all(sum(ai * di for ai, di in zip(a, cand)) <= 0 for a in homog):
                    ints, _ = primitive(cand)
                    rays.add(tuple(Fraction(v) for v in ints))
    return VRep(h.coords, tuple(found), tuple(rays))


def vertices(h: HPolyhedron) -> VRep:
    """Exact vertices (and extreme rays) by tight-subset search."""
    return h.vrep


def dimension(h: HPolyhedron) -> int:
    """Affine dimension; -1 for the empty polyhedron."""
    if h.is_empty():
        return -1
    v = h.vrep
    return affine_dimension(v.vertices, v.rays)


def facets(h: HPolyhedron) -> list[tuple[int, LinearConstraint]]:
    """Irredundant inequalities as ``(index, constraint)``, one per facet.

    A constraint defines a facet when its tight vertices and rays span a face
    of dimension ``dim - 1``. Parallel duplicates keep the first index.
    """
    v = h.vrep
    dim = affine_dimension(v.vertices, v.rays)
    ineqs, _ = h._rows
    seen = set()
    out = []
    ineq_index = [i for i, c in enumerate(h.constraints) if c.kind == "le"]
    for i, (a, b) in zip(ineq_index, ineqs):
        if not any(a) or (a, b) in seen:
            continue
        tight = [x for x in v.vertices if sum(ai * xi for ai, xi in zip(a, x)) == b]
        if not tight:
            continue
        tight_rays = [r for r in v.rays if sum(ai * ri for ai, ri in zip(a, r)) == 0]
        if len(tight) == len(v.vertices) and len(tight_rays) == len(v.rays):
            continue  # implicit equality
        if affine_dimension(tight, tight_rays) == dim - 1:
            seen.add((a, b))
            out.append((i, h.constraints[i]))
    return out


def facet_polyhedron(h: HPolyhedron) -> HPolyhedron:
    """``h`` restricted to its facet-defining inequalities and equalities."""
    keep = {i for i, _ in facets(h)}
    cons = [c for i, c in enumerate(h.constraints) if i in keep or c.kind == "eq"]
    return HPolyhedron(h.coords, tuple(cons))


# -- polar duality and sums ---------------------------------------------------


def hull_facets(v: VRep) -> list[tuple[tuple[int, ...], Fraction]]:
    """Facets ``c·x <= d`` of the convex hull of a full-dimensional vertex set."""
    n = len(v.coords)
    pts = [list(p) for p in v.vertices]
    if v.rays:
        raise ValueError("hull_facets needs a bounded vertex set")
    if affine_dimension(pts) != n:
        raise NotFullDimensional("vertex set is not full-dimensional")
    found: set[tuple[tuple[int, ...], Fraction]] = set()
    for combo in itertools.combinations(range(len(pts)), n):
        p0 = pts[combo[0]]
        diffs = [[a - b for a, b in zip(pts[i], p0)] for i in combo[1:]]
        normal = nullspace_vector(diffs, n)
        if normal is None:
            continue
        d = sum(a * b for a, b in zip(normal, p0))
        vals = [sum(a * b for a, b in zip(normal, p)) for p in pts]
        if all(x <= d for x in vals):
            sign = 1
        elif all(x >= d for x in vals):
            sign = -1
        else:
            continue
        ints, factor = primitive([sign * c for c in normal])
        found.add((ints, sign * d * factor))
    return sorted(found)


def polar_dual(v: VRep) -> VRep:
    """Vertices of the polar dual: the facet functionals scaled to ``α(x) <= 1``."""
    if v.rays:
        raise Unbounded("polar duality needs a bounded polytope")
    try:
        fs = hull_facets(v)
    except NotFullDimensional as exc:
        raise OriginNotInterior("a lower-dimensional polytope has no interior") from exc
    dual = []
    for c, d in fs:
        if d <= 0:
            raise OriginNotInterior("origin is not an interior point")
        dual.append(tuple(Fraction(ci) / d for ci in c))
    return VRep(v.coords, tuple(dual))


def minkowski_sum_points(A: Iterable[Sequence[int]], B: Iterable[Sequence[int]]) -> list[Point]:
    """Deduplicated pairwise sums, sorted."""
    B = list(B)
    return sorted({tuple(x + y for x, y in zip(a, b)) for a in A for b in B})


def scaled_sumset(points: Iterable[Sequence[int]], weight: int, dim: int) -> list[Point]:
    """``weight`` copies of ``points`` summed; negative weights use ``-points``."""
    pts = [tuple(p) for p in points]
    if weight < 0:
        pts = [tuple(-x for x in p) for p in pts]
        weight = -weight
    acc: list[Point] = [(0,) * dim]
    for _ in range(weight):
        acc = minkowski_sum_points(acc, pts)
    return acc
