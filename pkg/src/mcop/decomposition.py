"""Constructive Minkowski decomposition into elementary-marking pieces.

A lattice point of a marked chain-order polytope with integral marking is
split into lattice points of polytopes of elementary markings. The base
piece uses the all-ones marking with the point that is 1 on order
coordinates and 0 on chain coordinates. Every further step peels one unit
of the current lowest positive marking level:

* order coordinates give ``min(x_p, 1)``;
* chain coordinates give the indicator of the minimal elements of ``S ∩ supp(x)``.
  Here ``S`` holds the chain elements with no 1-marked element below and no
  0-marked element above, where order coordinates count as marked by their
  current values.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    MarkingsNotInCommonCell,
    NonIntegralInput,
    PointNotInPolyhedron,
    Unbounded,
)
from .marked import (
    ChainOrderPartition,
    IdealChain,
    MarkedPoset,
    all_chain,
    all_order,
    cell_coordinates,
    common_refinement,
    cone_cell_membership,
    elementary_decomposition,
    ideal_chain_of_marking,
    ray_generators,
)
from .poset import Poset
from .polyhedron import (
    HPolyhedron,
    Point,
    build_polyhedron,
    lattice_points,
    minkowski_sum_points,
    scaled_sumset,
)

FrozenMarking = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Summand:
    weight: int
    index: int  # 0 for the all-ones marking, i for the i-th elementary marking
    marking: FrozenMarking
    point: Point


@dataclass(frozen=True)
class PointDecomposition:
    coords: tuple[str, ...]
    marked: tuple[str, ...]
    summands: tuple[Summand, ...]

    def reconstruct(self) -> tuple[dict[str, int], Point]:
        lam: Counter[str] = Counter()
        x = [0] * len(self.coords)
        for s in self.summands:
            for a, v in s.marking:
                lam[a] += s.weight * v
            for i, v in enumerate(s.point):
                x[i] += s.weight * v
        return {a: lam[a] for a in self.marked}, tuple(x)

    def weights_by_index(self) -> dict[int, int]:
        out: Counter[int] = Counter()
        for s in self.summands:
            out[s.index] += s.weight
        return dict(sorted(out.items()))


def _integral_point(x: Sequence) -> Point:
    out = []
    for v in x:
        f = Fraction(v)
        if f.denominator != 1:
            raise NonIntegralInput(f"point coordinate {v} is not an integer")
        out.append(int(f))
    return tuple(out)


def _freeze(marking: Mapping[str, int]) -> FrozenMarking:
    return tuple(sorted((a, int(v)) for a, v in marking.items()))


class _PolytopeCache:
    """Polyhedra of the elementary markings, built once per decomposition."""

    def __init__(self, poset: Poset, part: ChainOrderPartition):
        self.poset = poset
        self.part = part
        self._cache: dict[FrozenMarking, HPolyhedron] = {}

    def get(self, marking: FrozenMarking) -> HPolyhedron:
        h = self._cache.get(marking)
        if h is None:
            h = build_polyhedron(MarkedPoset(self.poset, dict(marking)), self.part)
            self._cache[marking] = h
        return h


def decompose_co_point(mp: MarkedPoset, part: ChainOrderPartition, x: Sequence) -> PointDecomposition:
    """Decompose a lattice point of ``O_{C,O}(P, λ)`` into elementary pieces."""
    part.check(mp)
    if not mp.is_integral:
        raise NonIntegralInput("marking is not integral")
    point = _integral_point(x)
    h = build_polyhedron(mp, part)
    if len(point) != len(h.coords):
        raise PointNotInPolyhedron(f"point has {len(point)} coordinates, expected {len(h.coords)}")
    if not h.contains(point):
        raise PointNotInPolyhedron(f"{point} is not in the polyhedron")
    if not h.is_bounded():
        raise Unbounded("decomposition is only implemented for bounded polytopes")

    P = mp.poset
    coords = h.coords
    order, chain = part.order, part.chain
    lam = {a: int(v) for a, v in mp.marking.items()}
    cur = dict(zip(coords, point))

    elem = elementary_decomposition(mp)
    index_of = {_freeze(m): i for i, (_, m) in enumerate(elem.markings())}

    c0 = min(lam.values())
    base_marking = _freeze({a: 1 for a in lam})
    base_point = tuple(1 if p in order else 0 for p in coords)
    summands: Counter[tuple[int, FrozenMarking, Point]] = Counter()
    if c0:
        summands[(0, base_marking, base_point)] += c0
    lam = {a: v - c0 for a, v in lam.items()}
    for p in order:
        cur[p] -= c0

    # relations restricted to what the chain step consults
    hat_below = {p: [u for u in P.down(p) if u in lam or u in order] for p in chain}
    hat_above = {p: [u for u in P.up(p) if u in lam or u in order] for p in chain}

    while any(lam.values()):
        omega = {a: int(v > 0) for a, v in lam.items()}
        hat = {**omega, **{p: int(cur[p] > 0) for p in order}}

        y = {p: min(cur[p], 1) for p in order}
        support = [
            p
            for p in chain
            if cur[p] > 0
            and not any(hat[u] for u in hat_below[p])
            and all(hat[u] for u in hat_above[p])
        ]
        support_set = set(support)
        for p in chain:
            y[p] = int(p in support_set and not (P.down(p) & support_set))

        frozen = _freeze(omega)
        y_point = tuple(y[p] for p in coords)
        summands[(index_of[frozen], frozen, y_point)] += 1
        for a in lam:
            lam[a] -= omega[a]
        for p in coords:
            cur[p] -= y[p]

    if any(cur.values()):
        raise AssertionError(f"decomposition left a nonzero remainder {cur}")
    ordered = sorted(summands.items(), key=lambda kv: (kv[0][0], kv[0][2]))
    return PointDecomposition(
        coords, tuple(sorted(mp.marked)), tuple(Summand(w, i, m, pt) for (i, m, pt), w in ordered if w)
    )


def decompose_order_point(mp: MarkedPoset, x: Sequence) -> PointDecomposition:
    return decompose_co_point(mp, all_order(mp), x)


def decompose_chain_point(mp: MarkedPoset, x: Sequence) -> PointDecomposition:
    return decompose_co_point(mp, all_chain(mp), x)


def check_decomposition(
    mp: MarkedPoset, part: ChainOrderPartition, x: Sequence, dec: PointDecomposition, cache=None
) -> list[str]:
    """Problems with ``dec`` as a decomposition of ``x`` (empty when valid)."""
    cache = cache or _PolytopeCache(mp.poset, part)
    problems = []
    lam, total = dec.reconstruct()
    if lam != {a: int(v) for a, v in mp.marking.items()}:
        problems.append(f"markings sum to {lam}, expected {dict(mp.marking)}")
    if total != tuple(int(v) for v in x):
        problems.append(f"points sum to {total}, expected {tuple(x)}")
    for s in dec.summands:
        if not cache.get(s.marking).contains(s.point):
            problems.append(f"summand {s.point} not in polytope of {dict(s.marking)}")
    return problems


# -- verification reports -----------------------------------------------------


@dataclass
class MinkowskiReport:
    partition: ChainOrderPartition
    equal: bool
    lhs_count: int
    rhs_count: int
    missing: list[Point] = field(default_factory=list)  # lhs points absent from the sumset
    extra: list[Point] = field(default_factory=list)
    decompositions: dict[Point, PointDecomposition] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.equal and not self.failures


def elementary_sumset(mp: MarkedPoset, part: ChainOrderPartition, cache=None) -> list[Point]:
    """The weighted sumset ``c_0 O(ω_0) + Σ (c_i - c_{i-1}) O(ω_i)`` of lattice points."""
    cache = cache or _PolytopeCache(mp.poset, part)
    dim = len(mp.unmarked)
    acc: list[Point] = [(0,) * dim]
    for coeff, omega in elementary_decomposition(mp).markings():
        if coeff.denominator != 1:
            raise NonIntegralInput("marking is not integral")
        h = cache.get(_freeze(omega))
        acc = minkowski_sum_points(acc, scaled_sumset(lattice_points(h), int(coeff), dim))
    return acc


def verify_minkowski(mp: MarkedPoset, part: ChainOrderPartition, decompose: bool = True) -> MinkowskiReport:
    """Compare lattice points with the elementary sumset and decompose each point."""
    part.check(mp)
    if not mp.is_integral:
        raise NonIntegralInput("marking is not integral")
    h = build_polyhedron(mp, part)
    if not h.is_bounded():
        raise Unbounded("Minkowski verification needs a bounded polytope")
    cache = _PolytopeCache(mp.poset, part)
    lhs = lattice_points(h)
    rhs = elementary_sumset(mp, part, cache)
    lhs_set, rhs_set = set(lhs), set(rhs)
    report = MinkowskiReport(
        part,
        lhs_set == rhs_set,
        len(lhs),
        len(rhs),
        sorted(lhs_set - rhs_set),
        sorted(rhs_set - lhs_set),
    )
    if decompose:
        for x in lhs:
            dec = decompose_co_point(mp, part, x)
            report.decompositions[x] = dec
            report.failures.extend(f"{x}: {msg}" for msg in check_decomposition(mp, part, x, dec, cache))
    return report


@dataclass
class AdditivityReport:
    cell: IdealChain
    equal: bool
    lhs_count: int
    rhs_count: int
    counterexample: Point | None = None
    witness: tuple[Point, Point, Point] | None = None  # (x, x_λ, x_μ)
    redistributed: int = 0
    failures: list[str] = field(default_factory=list)


def _redistribute(
    total: MarkedPoset,
    first: MarkedPoset,
    second: MarkedPoset,
    part: ChainOrderPartition,
    cell: IdealChain,
    x: Point,
) -> tuple[Point, Point]:
    """Split ``x`` of ``O(λ+μ)`` into points of ``O(λ)`` and ``O(μ)``."""
    gens = [_freeze(g) for g in ray_generators(cell, total.marked)]
    gen_index = {g: j for j, g in enumerate(gens)}
    coeff_first = [int(c) for c in cell_coordinates(first, cell)]

    coords = tuple(total.unmarked)
    base = tuple(1 if p in part.order else 0 for p in coords)
    xa = [coeff_first[0] * v for v in base]
    taken = Counter()
    for s in decompose_co_point(total, part, x).summands:
        if s.index == 0:
            continue
        j = gen_index[s.marking]
        for _ in range(s.weight):
            if taken[j] < coeff_first[j]:
                taken[j] += 1
                xa = [a + b for a, b in zip(xa, s.point)]
    xa_t = tuple(xa)
    return xa_t, tuple(a - b for a, b in zip(x, xa_t))


def verify_cone_additivity(
    mp_lambda: MarkedPoset,
    mp_mu: MarkedPoset,
    cell: IdealChain | None = None,
    part: ChainOrderPartition | None = None,
) -> AdditivityReport:
    """Check ``O(λ+μ) = O(λ) + O(μ)`` on lattice points for markings in a common cell.

    Without ``cell`` the coarsest common refinement of the two ideal chains
    is used. Raises :class:`MarkingsNotInCommonCell` when none exists.
    """
    if mp_lambda.poset != mp_mu.poset or mp_lambda.marked != mp_mu.marked:
        raise ValueError("markings must live on the same poset and marked set")
    if not (mp_lambda.is_integral and mp_mu.is_integral):
        raise NonIntegralInput("markings must be integral")
    if cell is None:
        cell = common_refinement(ideal_chain_of_marking(mp_lambda), ideal_chain_of_marking(mp_mu))
        if cell is None:
            raise MarkingsNotInCommonCell("the ideal chains of the two markings have no common refinement")
    for mp in (mp_lambda, mp_mu):
        if not cone_cell_membership(mp, cell):
            raise MarkingsNotInCommonCell(f"marking {dict(mp.marking)} is not in the given cell")
    part = (part or all_order(mp_lambda)).check(mp_lambda)

    total = mp_lambda.with_marking({a: v + mp_mu.marking[a] for a, v in mp_lambda.marking.items()})
    h_sum = build_polyhedron(total, part)
    h_l = build_polyhedron(mp_lambda, part)
    h_m = build_polyhedron(mp_mu, part)
    for h in (h_sum, h_l, h_m):
        if not h.is_bounded():
            raise Unbounded("cone additivity check needs bounded polytopes")
    lhs = lattice_points(h_sum)
    rhs = minkowski_sum_points(lattice_points(h_l), lattice_points(h_m))
    report = AdditivityReport(cell, set(lhs) == set(rhs), len(lhs), len(set(rhs)))
    missing = sorted(set(lhs) - set(rhs))
    if missing:
        report.counterexample = missing[0]
    for x in lhs:
        xa, xb = _redistribute(total, mp_lambda, mp_mu, part, cell, x)
        if h_l.contains(xa) and h_m.contains(xb):
            report.redistributed += 1
        else:
            report.failures.append(f"{x} -> {xa} + {xb} leaves the summand polytopes")
    if lhs:
        x = lhs[-1]
        report.witness = (x, *_redistribute(total, mp_lambda, mp_mu, part, cell, x))
    return report


def semigroup_generators(
    poset: Poset, marked, cell: IdealChain, part: ChainOrderPartition
) -> list[tuple[dict[str, int], list[Point]]]:
    """Lattice points of the polytopes of ``1, φ_1, ..., φ_k`` for ``cell``."""
    out = []
    for omega in ray_generators(cell, marked):
        mp = MarkedPoset(poset, omega)
        h = build_polyhedron(mp, part.check(mp))
        if not h.is_bounded():
            raise Unbounded("generator polytopes must be bounded")
        out.append((omega, lattice_points(h)))
    return out
