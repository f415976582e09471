"""Finite posets: covers, order relation, saturated chains, filters, ranks.

Labels are opaque strings. Everything derived from a poset is reported in
the lexicographic order of the labels so results are reproducible.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping

from .errors import CycleDetected, UnknownElement

Chain = tuple[str, tuple[str, ...], str]


class Poset:
    """Immutable finite poset.

    Build instances with :func:`build_poset`; the constructor expects an
    already transitively closed strict order given as up-sets.
    """

    __slots__ = ("elements", "_up", "_down", "covers", "_upper", "_lower", "_hash")

    def __init__(self, elements: Iterable[str], up: Mapping[str, Iterable[str]]):
        self.elements: tuple[str, ...] = tuple(sorted(set(elements)))
        self._up = {p: frozenset(up.get(p, ())) for p in self.elements}
        down: dict[str, set[str]] = {p: set() for p in self.elements}
        for p, ups in self._up.items():
            for q in ups:
                down[q].add(p)
        self._down = {p: frozenset(s) for p, s in down.items()}

        covers = set()
        for p in self.elements:
            for q in self._up[p]:
                # q covers p iff nothing sits strictly between them
                if not (self._up[p] & self._down[q]):
                    covers.add((p, q))
        self.covers: frozenset[tuple[str, str]] = frozenset(covers)
        self._upper = {p: tuple(sorted(q for (a, q) in covers if a == p)) for p in self.elements}
        self._lower = {q: tuple(sorted(a for (a, b) in covers if b == q)) for q in self.elements}
        self._hash = hash((self.elements, self.covers))

    # basic relations
    def leq(self, p: str, q: str) -> bool:
        return p == q or q in self._up[p]

    def lt(self, p: str, q: str) -> bool:
        return q in self._up[p]

    def up(self, p: str) -> frozenset[str]:
        """Elements strictly above ``p``."""
        return self._up[p]

    def down(self, p: str) -> frozenset[str]:
        """Elements strictly below ``p``."""
        return self._down[p]

    def upper_covers(self, p: str) -> tuple[str, ...]:
        return self._upper[p]

    def lower_covers(self, p: str) -> tuple[str, ...]:
        return self._lower[p]

    def leq_pairs(self) -> frozenset[tuple[str, str]]:
        """The full reflexive order relation as a set of pairs."""
        pairs = {(p, p) for p in self.elements}
        pairs.update((p, q) for p in self.elements for q in self._up[p])
        return frozenset(pairs)

    def minimal(self) -> tuple[str, ...]:
        return tuple(p for p in self.elements if not self._down[p])

    def maximal(self) -> tuple[str, ...]:
        return tuple(p for p in self.elements if not self._up[p])

    def linear_extension(self) -> tuple[str, ...]:
        """Bottom-up topological order, ties broken by label."""
        return tuple(sorted(self.elements, key=lambda p: (len(self._down[p]), p)))

    def components(self) -> list[tuple[str, ...]]:
        """Connected components of the Hasse diagram, in canonical order."""
        seen: set[str] = set()
        comps = []
        for start in self.elements:
            if start in seen:
                continue
            comp = []
            queue = deque([start])
            seen.add(start)
            while queue:
                p = queue.popleft()
                comp.append(p)
                for q in self._upper[p] + self._lower[p]:
                    if q not in seen:
                        seen.add(q)
                        queue.append(q)
            comps.append(tuple(sorted(comp)))
        return comps

    def longest_chain_length(self) -> int:
        """Number of covers in a longest chain."""
        height: dict[str, int] = {}
        for p in self.linear_extension():
            height[p] = max((height[a] + 1 for a in self._lower[p]), default=0)
        return max(height.values(), default=0)

    def subposet(self, keep: Iterable[str]) -> Poset:
        keep = set(keep)
        return Poset(keep, {p: self._up[p] & keep for p in keep})

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p) -> bool:
        return p in self._up

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.covers == other.covers

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        cov = ", ".join(f"{p}<{q}" for p, q in sorted(self.covers))
        return f"Poset([{', '.join(self.elements)}]; {cov})"


def build_poset(elements: Iterable[str], relations: Iterable[tuple[str, str]] = ()) -> Poset:
    """Build a poset from cover relations or any generating set of relations.

    The order is the reflexive-transitive closure of ``relations``; the covers
    are its transitive reduction. Reflexive pairs ``(p, p)`` are ignored.
    """
    elements = set(elements)
    succ: dict[str, set[str]] = {p: set() for p in elements}
    for p, q in relations:
        for x in (p, q):
            if x not in elements:
                raise UnknownElement(f"relation mentions unknown element {x!r}")
        if p != q:
            succ[p].add(q)

    up: dict[str, set[str]] = {}
    for p in elements:
        reach: set[str] = set()
        stack = list(succ[p])
        while stack:
            q = stack.pop()
            if q in reach:
                continue
            reach.add(q)
            stack.extend(succ[q])
        if p in reach:
            raise CycleDetected(f"relations force {p} < {p}")
        up[p] = reach
    return Poset(elements, up)


def saturated_chains(poset: Poset, lower_set: Iterable[str], inner_set: Iterable[str]) -> list[Chain]:
    """All saturated chains ``a < p_1 < ... < p_r < b`` (consecutive covers).

    Endpoints come from ``lower_set``, interior elements from ``inner_set``;
    ``r = 0`` chains are single covers between endpoints. Chains are returned
    as ``(a, (p_1, ..., p_r), b)`` sorted canonically.
    """
    ends = set(lower_set)
    inner = set(inner_set)
    chains: list[Chain] = []

    def walk(a: str, path: list[str], cur: str):
        for q in poset.upper_covers(cur):
            if q in ends:
                chains.append((a, tuple(path), q))
            elif q in inner:
                path.append(q)
                walk(a, path, q)
                path.pop()

    for a in sorted(ends):
        walk(a, [], a)
    chains.sort()
    return chains


def rank_function(poset: Poset) -> dict[str, int] | None:
    """A rank function with each Hasse component starting at 0, or None."""
    rank: dict[str, int] = {}
    for comp in poset.components():
        start = comp[0]
        rank[start] = 0
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for q in poset.upper_covers(p):
                if q not in rank:
                    rank[q] = rank[p] + 1
                    queue.append(q)
                elif rank[q] != rank[p] + 1:
                    return None
            for a in poset.lower_covers(p):
                if a not in rank:
                    rank[a] = rank[p] - 1
                    queue.append(a)
                elif rank[a] != rank[p] - 1:
                    return None
        low = min(rank[p] for p in comp)
        for p in comp:
            rank[p] -= low
    return rank


def _sort_sets(sets: Iterable[frozenset[str]]) -> list[frozenset[str]]:
    return sorted(sets, key=lambda s: (len(s), sorted(s)))


def filters_of(poset: Poset) -> list[frozenset[str]]:
    """Every upward-closed subset, ordered by size then labels."""
    order = list(reversed(poset.linear_extension()))  # tops first
    found: list[frozenset[str]] = []

    def rec(i: int, chosen: set[str]):
        if i == len(order):
            found.append(frozenset(chosen))
            return
        p = order[i]
        rec(i + 1, chosen)
        if poset.up(p) <= chosen:
            chosen.add(p)
            rec(i + 1, chosen)
            chosen.remove(p)

    rec(0, set())
    return _sort_sets(found)


def ideals_of(poset: Poset) -> list[frozenset[str]]:
    """Every downward-closed subset, ordered by size then labels."""
    everything = frozenset(poset.elements)
    return _sort_sets(everything - f for f in filters_of(poset))
