"""Deterministic corpus of small marked posets for exhaustive checks."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator
from dataclasses import dataclass

from .marked import MarkedPoset
from .poset import Poset, build_poset, rank_function


@dataclass(frozen=True)
class CorpusPoset:
    """A poset with its marked elements; every minimal and maximal element is marked."""

    poset: Poset
    marked: tuple[str, ...]

    @property
    def unmarked(self) -> tuple[str, ...]:
        return tuple(p for p in self.poset.elements if p not in self.marked)

    @property
    def ranked(self) -> bool:
        return rank_function(self.poset) is not None


def _canonical(poset: Poset, marked: frozenset[str]) -> tuple:
    """Isomorphism invariant key: lexicographically least relabelled description."""
    elems = poset.elements
    best = None
    for perm in itertools.permutations(range(len(elems))):
        relabel = dict(zip(elems, perm))
        key = (
            tuple(sorted((relabel[p], relabel[q]) for p, q in poset.covers)),
            tuple(sorted(relabel[a] for a in marked)),
        )
        if best is None or key < best:
            best = key
    return (len(elems),) + best


def generate_corpus(count: int = 240, max_elements: int = 6, seed: int = 20240611) -> list[CorpusPoset]:
    """``count`` pairwise non-isomorphic instances with at least one unmarked element.

    Random covers come from an upper-triangular relation so the result is
    always acyclic; extra marked elements are sprinkled in with probability
    one quarter.
    """
    rng = random.Random(seed)
    seen: set[tuple] = set()
    out: list[CorpusPoset] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("corpus generator could not find enough distinct instances")
        n = rng.randint(2, max_elements)
        labels = [f"e{i}" for i in range(n)]
        density = rng.choice((0.3, 0.45, 0.6))
        rel = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
        poset = build_poset(labels, rel)
        marked = set(poset.minimal()) | set(poset.maximal())
        marked |= {p for p in labels if rng.random() < 0.25}
        if len(marked) == n:
            continue
        key = _canonical(poset, frozenset(marked))
        if key in seen:
            continue
        seen.add(key)
        out.append(CorpusPoset(poset, tuple(sorted(marked))))
    return out


def integral_markings(inst: CorpusPoset, values=range(4)) -> Iterator[MarkedPoset]:
    """Every order-preserving marking with the given values, lexicographically."""
    P = inst.poset
    marked = inst.marked
    values = tuple(values)
    below = {a: [b for b in marked[:i] if P.lt(b, a) or P.lt(a, b)] for i, a in enumerate(marked)}

    def rec(i: int, acc: dict):
        if i == len(marked):
            yield MarkedPoset(P, dict(acc))
            return
        a = marked[i]
        for v in values:
            ok = True
            for b in below[a]:
                if P.lt(b, a) and acc[b] > v or P.lt(a, b) and v > acc[b]:
                    ok = False
                    break
            if ok:
                acc[a] = v
                yield from rec(i + 1, acc)
                del acc[a]

    yield from rec(0, {})
