"""Marked posets, chain-order partitions and the combinatorics of markings.

A marking is stored as exact :class:`~fractions.Fraction` values on the
marked elements. Elementary markings (indicators of filters of the marked
subposet) and chains of order ideals describe where a marking sits inside
the cone of all order-preserving markings.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from .errors import MarkingError, MarkingNotIntegral
from .poset import Poset, rank_function

Marking = Mapping[str, Fraction]


def as_fraction(value) -> Fraction:
    """Exact conversion of ints, Fractions and ``"p/q"`` strings."""
    if isinstance(value, bool):
        raise TypeError("booleans are not markings")
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float marking value {value!r}")
    return Fraction(value)


class MarkedPoset:
    """A poset together with a marking of the subset ``P*``.

    Raises :class:`MarkingError` unless every minimal element is marked and
    the marking is order preserving on ``P*``.
    """

    __slots__ = ("poset", "marking", "marked", "unmarked", "_hash")

    def __init__(self, poset: Poset, marking: Mapping[str, object]):
        lam = {a: as_fraction(v) for a, v in marking.items()}
        unknown = sorted(set(lam) - set(poset.elements))
        if unknown:
            raise MarkingError(f"marking mentions unknown elements {unknown}", "P* ⊆ P violated")
        missing = [p for p in poset.minimal() if p not in lam]
        if missing:
            raise MarkingError(
                f"minimal elements {missing} are unmarked", "min(P) ⊆ P* violated"
            )
        for a in lam:
            for b in poset.up(a):
                if b in lam and lam[a] > lam[b]:
                    raise MarkingError(
                        f"marking decreases along {a} < {b}",
                        "marking is order-preserving on P* violated",
                    )
        self.poset = poset
        self.marking: Mapping[str, Fraction] = MappingProxyType(dict(sorted(lam.items())))
        self.marked: frozenset[str] = frozenset(lam)
        self.unmarked: tuple[str, ...] = tuple(p for p in poset.elements if p not in lam)
        self._hash = hash((poset, tuple(self.marking.items())))

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.marking.values())

    def values(self) -> list[Fraction]:
        """Distinct marking values ``c_0 < c_1 < ... < c_k``."""
        return sorted(set(self.marking.values()))

    def with_marking(self, marking: Mapping[str, object]) -> MarkedPoset:
        return MarkedPoset(self.poset, marking)

    def scaled(self, factor) -> MarkedPoset:
        factor = as_fraction(factor)
        return MarkedPoset(self.poset, {a: factor * v for a, v in self.marking.items()})

    def marked_subposet(self) -> Poset:
        return self.poset.subposet(self.marked)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MarkedPoset):
            return NotImplemented
        return self.poset == other.poset and dict(self.marking) == dict(other.marking)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        lam = ", ".join(f"{a}={v}" for a, v in self.marking.items())
        return f"MarkedPoset({self.poset!r}; {lam})"


@dataclass(frozen=True)
class ChainOrderPartition:
    chain: frozenset[str]
    order: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "chain", frozenset(self.chain))
        object.__setattr__(self, "order", frozenset(self.order))
        if self.chain & self.order:
            raise MarkingError("chain and order sets overlap", "C ∩ O = ∅ violated")

    def check(self, mp: MarkedPoset) -> ChainOrderPartition:
        if self.chain | self.order != set(mp.unmarked):
            raise MarkingError(
                "chain and order elements must partition the unmarked elements",
                "C ⊔ O = P \\ P* violated",
            )
        return self

    def label(self) -> str:
        return "C={" + ",".join(sorted(self.chain)) + "} O={" + ",".join(sorted(self.order)) + "}"


def make_partition(mp: MarkedPoset, chain: Iterable[str] = ()) -> ChainOrderPartition:
    chain = frozenset(chain)
    return ChainOrderPartition(chain, frozenset(mp.unmarked) - chain).check(mp)


def all_order(mp: MarkedPoset) -> ChainOrderPartition:
    return make_partition(mp, ())


def all_chain(mp: MarkedPoset) -> ChainOrderPartition:
    return make_partition(mp, mp.unmarked)


def all_partitions(mp: MarkedPoset) -> list[ChainOrderPartition]:
    """All ``2^|unmarked|`` partitions, by chain-set size then labels."""
    out = []
    for size in range(len(mp.unmarked) + 1):
        for chain in itertools.combinations(mp.unmarked, size):
            out.append(make_partition(mp, chain))
    return out


# -- predicates ---------------------------------------------------------------


def is_regular(mp: MarkedPoset) -> bool:
    """For every cover ``p < q`` and marked ``a <= q``, ``p <= b``: a == b or λ(a) < λ(b)."""
    P, lam = mp.poset, mp.marking
    for p, q in P.covers:
        below = [a for a in mp.marked if P.leq(a, q)]
        above = [b for b in mp.marked if P.leq(p, b)]
        for a in below:
            for b in above:
                if a != b and not lam[a] < lam[b]:
                    return False
    return True


def is_ranked_marked(mp: MarkedPoset) -> bool:
    """Whether some rank function ``r`` has ``r(a) < r(b)  =>  λ(a) < λ(b)`` on ``P*``.

    Rank functions are unique up to one shift per Hasse component, so the
    search runs over relative component shifts inside a window large enough
    to realise every relative ordering of ranks.
    """
    P, lam = mp.poset, mp.marking
    rank = rank_function(P)
    if rank is None:
        return False

    comps = [tuple(a for a in comp if a in lam) for comp in P.components()]
    comps = [c for c in comps if c]

    def compatible(xs, ys, shift_x, shift_y) -> bool:
        for a in xs:
            for b in ys:
                ra, rb = rank[a] + shift_x, rank[b] + shift_y
                if ra < rb and not lam[a] < lam[b]:
                    return False
                if rb < ra and not lam[b] < lam[a]:
                    return False
        return True

    for comp in comps:
        if not compatible(comp, comp, 0, 0):
            return False
    if len(comps) <= 1:
        return True

    spread = max(lam.values()) - min(lam.values())
    window = math.ceil(spread) + P.longest_chain_length() + 1
    shifts = [0]

    def assign(i: int) -> bool:
        if i == len(comps):
            return True
        for s in range(-window, window + 1):
            if all(compatible(comps[j], comps[i], shifts[j], s) for j in range(i)):
                shifts.append(s)
                if assign(i + 1):
                    return True
                shifts.pop()
        return False

    return assign(1)


def is_rank_marking(mp: MarkedPoset) -> dict[str, int] | None:
    """The rank function extending the marking, if the marking is one."""
    if not mp.is_integral:
        raise MarkingNotIntegral("a rank marking must be integral", "λ integral violated")
    rank = rank_function(mp.poset)
    if rank is None:
        return None
    out: dict[str, int] = {}
    for comp in mp.poset.components():
        offsets = {int(mp.marking[a]) - rank[a] for a in comp if a in mp.marking}
        if len(offsets) != 1:
            return None
        (shift,) = offsets
        out.update((p, rank[p] + shift) for p in comp)
    return out


# -- elementary markings ------------------------------------------------------


@dataclass(frozen=True)
class ElementaryDecomposition:
    """``λ = c_0·χ_{P*} + Σ (c_i - c_{i-1})·χ_{F_i}`` with shrinking filters."""

    marked: frozenset[str]
    base_coeff: Fraction
    steps: tuple[tuple[Fraction, frozenset[str]], ...]

    def markings(self) -> list[tuple[Fraction, dict[str, int]]]:
        """Weighted elementary markings, the all-ones marking first."""
        out = [(self.base_coeff, indicator(self.marked, self.marked))]
        out.extend((coeff, indicator(self.marked, f)) for coeff, f in self.steps)
        return out

    def reconstruct(self) -> dict[str, Fraction]:
        lam = {a: Fraction(0) for a in self.marked}
        for coeff, omega in self.markings():
            for a, v in omega.items():
                lam[a] += coeff * v
        return lam


def indicator(marked: Iterable[str], support: Iterable[str]) -> dict[str, int]:
    support = set(support)
    return {a: int(a in support) for a in sorted(marked)}


def elementary_decomposition(mp: MarkedPoset) -> ElementaryDecomposition:
    values = mp.values()
    steps = []
    for prev, c in zip(values, values[1:]):
        filt = frozenset(a for a, v in mp.marking.items() if v >= c)
        steps.append((c - prev, filt))
    return ElementaryDecomposition(mp.marked, values[0], tuple(steps))


@dataclass(frozen=True)
class IdealChain:
    """Strictly increasing chain of proper nonempty order ideals of ``P*``.

    The empty chain is the coarsest cell (constant markings).
    """

    ideals: tuple[frozenset[str], ...] = ()

    def __post_init__(self):
        ideals = tuple(frozenset(i) for i in self.ideals)
        for small, big in zip(ideals, ideals[1:]):
            if not small < big:
                raise ValueError("ideal chain must be strictly increasing")
        object.__setattr__(self, "ideals", ideals)

    def check(self, marked_poset: Poset) -> IdealChain:
        everything = frozenset(marked_poset.elements)
        for ideal in self.ideals:
            if not ideal or ideal == everything or not ideal <= everything:
                raise ValueError("ideals must be nonempty proper subsets of P*")
            if any(marked_poset.down(a) - ideal for a in ideal):
                raise ValueError(f"{sorted(ideal)} is not an order ideal")
        return self

    def __len__(self) -> int:
        return len(self.ideals)

    def __iter__(self) -> Iterator[frozenset[str]]:
        return iter(self.ideals)


def ideal_chain_of_marking(mp: MarkedPoset) -> IdealChain:
    values = mp.values()
    return IdealChain(
        tuple(frozenset(a for a, v in mp.marking.items() if v <= c) for c in values[:-1])
    )


def coarsening_leq(x: IdealChain, y: IdealChain) -> bool:
    """True iff ``x`` is obtained from ``y`` by deleting ideals."""
    return set(x.ideals) <= set(y.ideals)


def common_refinement(x: IdealChain, y: IdealChain) -> IdealChain | None:
    """The coarsest chain refining both, or None if the ideals are not nested."""
    ideals = sorted(set(x.ideals) | set(y.ideals), key=len)
    for small, big in zip(ideals, ideals[1:]):
        if not small < big:
            return None
    return IdealChain(tuple(ideals))


def cone_cell_membership(mp: MarkedPoset, cell: IdealChain) -> bool:
    return coarsening_leq(ideal_chain_of_marking(mp), cell)


def ray_generators(cell: IdealChain, marked: Iterable[str]) -> list[dict[str, int]]:
    """``[1, φ_1, ..., φ_k]`` with ``φ_j`` the indicator of ``P* \\ I_{j-1}``."""
    marked = frozenset(marked)
    gens = [indicator(marked, marked)]
    gens.extend(indicator(marked, marked - ideal) for ideal in cell.ideals)
    return gens


def cell_coordinates(mp: MarkedPoset, cell: IdealChain) -> list[Fraction]:
    """Coefficients of the marking in the generators of ``cell``.

    Assumes membership; returns ``[c, a_1, ..., a_k]`` with
    ``λ = c·1 + Σ a_j φ_j``.
    """
    blocks = []
    prev: frozenset[str] = frozenset()
    for ideal in list(cell.ideals) + [mp.marked]:
        blocks.append(ideal - prev)
        prev = ideal
    block_values = [mp.marking[min(block)] for block in blocks]
    return [block_values[0]] + [b - a for a, b in zip(block_values, block_values[1:])]
