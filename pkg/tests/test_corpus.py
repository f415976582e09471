import itertools

from mcop.corpus import _canonical, generate_corpus, integral_markings
from mcop.errors import MarkingError
from mcop.marked import MarkedPoset
from mcop.poset import build_poset

CORPUS = generate_corpus()


def test_size_and_shape():
    assert len(CORPUS) >= 200
    for inst in CORPUS:
        P = inst.poset
        assert 2 <= len(P.elements) <= 6
        assert set(P.minimal()) | set(P.maximal()) <= set(inst.marked)
        assert inst.unmarked


def test_deterministic():
    again = generate_corpus()
    assert [(i.poset, i.marked) for i in again] == [(i.poset, i.marked) for i in CORPUS]


def test_pairwise_non_isomorphic():
    keys = {_canonical(i.poset, frozenset(i.marked)) for i in CORPUS}
    assert len(keys) == len(CORPUS)


def test_canonical_key_ignores_labels():
    a = build_poset("xyz", [("x", "y"), ("x", "z")])
    b = build_poset("uvw", [("w", "u"), ("w", "v")])
    assert _canonical(a, frozenset("x")) == _canonical(b, frozenset("w"))
    assert _canonical(a, frozenset("y")) != _canonical(a, frozenset("x"))


def test_markings_match_brute_force():
    for inst in CORPUS[:40]:
        got = [dict(mp.marking) for mp in integral_markings(inst, range(3))]
        want = []
        for values in itertools.product(range(3), repeat=len(inst.marked)):
            lam = dict(zip(inst.marked, values))
            try:
                MarkedPoset(inst.poset, lam)
            except MarkingError:
                continue
            want.append(lam)
        assert sorted(map(sorted, map(dict.items, got))) == sorted(map(sorted, map(dict.items, want)))
