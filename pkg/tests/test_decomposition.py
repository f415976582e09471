import itertools
from collections import Counter

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from mcop.decomposition import (
    check_decomposition,
    decompose_chain_point,
    decompose_co_point,
    decompose_order_point,
    elementary_sumset,
    semigroup_generators,
    verify_cone_additivity,
    verify_minkowski,
)
from mcop.errors import MarkingsNotInCommonCell, NonIntegralInput, PointNotInPolyhedron, Unbounded
from mcop.marked import IdealChain, MarkedPoset, all_chain, all_order, all_partitions, make_partition
from mcop.poset import build_poset
from mcop.polyhedron import build_polyhedron, lattice_points
from strategies import marked_with_partition, partitions


def chain(*labels):
    return build_poset(labels, list(zip(labels, labels[1:])))


CHAIN3 = chain("a", "p", "b")
CHAIN4 = chain("a", "p", "q", "b")
TWO_TOPS = build_poset("zpuv", [("z", "p"), ("p", "u"), ("p", "v")])
FOUR = MarkedPoset(CHAIN4, {"a": 0, "b": 3})


def points_of(dec, index=None):
    out = Counter()
    for s in dec.summands:
        if index is None or s.index == index:
            out[s.point] += s.weight
    return out


class TestOrder:
    def test_four_chain(self):
        dec = decompose_order_point(FOUR, (1, 2))
        assert points_of(dec, 1) == Counter({(0, 1): 1, (1, 1): 1, (0, 0): 1})
        assert dec.weights_by_index() == {1: 3}

    def test_zero_point(self):
        dec = decompose_order_point(FOUR, (0, 0))
        assert points_of(dec) == Counter({(0, 0): 3})

    def test_constant_marking(self):
        mp = MarkedPoset(CHAIN3, {"a": 2, "b": 2})
        dec = decompose_order_point(mp, (2,))
        assert [(s.weight, s.index, s.point) for s in dec.summands] == [(2, 0, (1,))]
        assert dict(dec.summands[0].marking) == {"a": 1, "b": 1}

    def test_outside(self):
        with pytest.raises(PointNotInPolyhedron):
            decompose_order_point(FOUR, (2, 1))

    def test_wrong_length(self):
        with pytest.raises(PointNotInPolyhedron):
            decompose_order_point(FOUR, (1,))

    def test_fractional_point(self):
        with pytest.raises(NonIntegralInput):
            decompose_order_point(FOUR, ("1/2", 1))

    def test_fractional_marking(self):
        with pytest.raises(NonIntegralInput):
            decompose_order_point(MarkedPoset(CHAIN4, {"a": 0, "b": "5/2"}), (1, 2))

    def test_unbounded(self):
        mp = MarkedPoset(CHAIN3, {"a": 0})
        with pytest.raises(Unbounded):
            decompose_order_point(mp, (1, 1))


class TestChain:
    def test_four_chain(self):
        dec = decompose_chain_point(FOUR, (1, 2))
        assert points_of(dec, 1) == Counter({(0, 1): 2, (1, 0): 1})
        for s in dec.summands:
            assert sum(s.point) <= 1

    def test_zero(self):
        assert points_of(decompose_chain_point(FOUR, (0, 0))) == Counter({(0, 0): 3})

    def test_two_tops(self):
        mp = MarkedPoset(TWO_TOPS, {"z": 0, "u": 1, "v": 1})
        dec = decompose_chain_point(mp, (1,))
        assert [(s.weight, s.point) for s in dec.summands] == [(1, (1,))]
        assert dict(dec.summands[0].marking) == {"z": 0, "u": 1, "v": 1}

    def test_negative_base_keeps_chain_coordinates(self):
        mp = MarkedPoset(CHAIN3, {"a": -2, "b": 1})
        dec = decompose_chain_point(mp, (3,))
        assert dec.weights_by_index() == {0: -2, 1: 3}
        assert check_decomposition(mp, all_chain(mp), (3,), dec) == []


class TestMixed:
    def test_four_chain(self):
        part = make_partition(FOUR, ["p"])
        dec = decompose_co_point(FOUR, part, (1, 2))
        assert sum(s.weight for s in dec.summands) == 3
        for s in dec.summands:
            p, q = s.point
            assert 0 <= p <= q <= 1
        assert check_decomposition(FOUR, part, (1, 2), dec) == []

    @given(marked_with_partition(max_elements=6, max_value=3), st.data())
    def test_reconstruction_and_membership(self, args, data):
        mp, part = args
        h = build_polyhedron(mp, part)
        assume(h.is_bounded())
        pts = lattice_points(h)
        assume(pts)
        x = data.draw(st.sampled_from(pts))
        dec = decompose_co_point(mp, part, x)
        lam, total = dec.reconstruct()
        assert lam == {a: int(v) for a, v in mp.marking.items()}
        assert total == x
        for s in dec.summands:
            summand_mp = MarkedPoset(mp.poset, dict(s.marking))
            assert oracles.definition_holds(
                mp.poset.elements, mp.poset.covers, summand_mp.marking, part.chain, part.order, dict(zip(dec.coords, s.point))
            )
            assert s.weight > 0 or s.index == 0

    @given(marked_with_partition(max_elements=6, max_value=3), st.data())
    def test_specializations(self, args, data):
        mp, _ = args
        for part, single in ((all_order(mp), decompose_order_point), (all_chain(mp), decompose_chain_point)):
            h = build_polyhedron(mp, part)
            assume(h.is_bounded())
            x = data.draw(st.sampled_from(lattice_points(h)))
            assert repr(decompose_co_point(mp, part, x)) == repr(single(mp, x))

    @given(marked_with_partition(max_elements=6, max_value=3))
    def test_deterministic_order(self, args):
        mp, part = args
        h = build_polyhedron(mp, part)
        assume(h.is_bounded())
        x = lattice_points(h)[-1]
        dec = decompose_co_point(mp, part, x)
        keys = [(s.index, s.point) for s in dec.summands]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)


class TestMinkowski:
    @pytest.mark.parametrize("chain_part", [[], ["p"], ["q"], ["p", "q"]])
    def test_four_chain(self, chain_part):
        report = verify_minkowski(FOUR, make_partition(FOUR, chain_part))
        assert report.ok and report.lhs_count == report.rhs_count == 10
        assert len(report.decompositions) == 10

    def test_two_tops(self):
        mp = MarkedPoset(TWO_TOPS, {"z": 0, "u": 1, "v": 1})
        for part in all_partitions(mp):
            assert verify_minkowski(mp, part).ok

    @given(marked_with_partition(max_elements=7, max_value=3))
    def test_completeness(self, args):
        mp, part = args
        assume(build_polyhedron(mp, part).is_bounded())
        report = verify_minkowski(mp, part, decompose=False)
        assert report.equal, (report.missing, report.extra)

    def test_sumset_against_bruteforce(self):
        mp = MarkedPoset(CHAIN4, {"a": 1, "b": 3})
        part = make_partition(mp, ["q"])
        assert elementary_sumset(mp, part) == oracles.brute_points(mp, part)


class TestAdditivity:
    def test_doubling(self):
        report = verify_cone_additivity(FOUR, FOUR)
        assert report.equal and not report.failures
        assert report.witness == ((6, 6), (3, 3), (3, 3))

    def test_two_tops_no_common_cell(self):
        lam = MarkedPoset(TWO_TOPS, {"z": 0, "u": 1, "v": 0})
        mu = MarkedPoset(TWO_TOPS, {"z": 0, "u": 0, "v": 1})
        with pytest.raises(MarkingsNotInCommonCell):
            verify_cone_additivity(lam, mu)
        # and the sumset genuinely falls short
        total = MarkedPoset(TWO_TOPS, {"z": 0, "u": 1, "v": 1})
        assert lattice_points(build_polyhedron(lam, all_order(lam))) == [(0,)]
        assert lattice_points(build_polyhedron(mu, all_order(mu))) == [(0,)]
        assert lattice_points(build_polyhedron(total, all_order(total))) == [(0,), (1,)]

    def test_same_cell_on_two_chain(self):
        lam = MarkedPoset(CHAIN4, {"a": 1, "b": 4})
        mu = MarkedPoset(CHAIN4, {"a": 0, "b": 1})
        cell = IdealChain((frozenset("a"),))
        for part in all_partitions(lam):
            report = verify_cone_additivity(lam, mu, cell, part)
            assert report.equal and report.redistributed == report.lhs_count

    def test_marking_outside_given_cell(self):
        lam = MarkedPoset(CHAIN4, {"a": 1, "b": 1})
        with pytest.raises(MarkingsNotInCommonCell):
            verify_cone_additivity(FOUR, lam, IdealChain((frozenset("b"),)))

    @given(st.data())
    def test_random_pairs_in_common_cell(self, data):
        from strategies import marked_posets

        mp = data.draw(marked_posets(max_elements=6, max_value=2))
        other = data.draw(marked_posets(poset=mp.poset, max_value=2))
        assume(other.marked == mp.marked)
        part = data.draw(partitions(mp))
        assume(build_polyhedron(mp, part).is_bounded())
        try:
            report = verify_cone_additivity(mp, other, part=part)
        except MarkingsNotInCommonCell:
            assume(False)
        assert report.equal and not report.failures


class TestGenerators:
    CELL = IdealChain((frozenset("a"),))

    def test_order(self):
        gens = semigroup_generators(CHAIN4, {"a", "b"}, self.CELL, make_partition(FOUR, []))
        assert gens == [({"a": 1, "b": 1}, [(1, 1)]), ({"a": 0, "b": 1}, [(0, 0), (0, 1), (1, 1)])]

    def test_chain(self):
        gens = semigroup_generators(CHAIN4, {"a", "b"}, self.CELL, all_chain(FOUR))
        assert gens == [({"a": 1, "b": 1}, [(0, 0)]), ({"a": 0, "b": 1}, [(0, 0), (0, 1), (1, 0)])]

    def test_empty_cell(self):
        gens = semigroup_generators(CHAIN4, {"a", "b"}, IdealChain(()), all_order(FOUR))
        assert gens == [({"a": 1, "b": 1}, [(1, 1)])]

    @given(st.integers(0, 2), st.integers(0, 2), st.sampled_from([[], ["p"], ["q"], ["p", "q"]]))
    def test_generation(self, n1, a1, chain_part):
        part = make_partition(FOUR, chain_part)
        gens = semigroup_generators(CHAIN4, {"a", "b"}, self.CELL, part)
        mp = MarkedPoset(CHAIN4, {"a": n1, "b": n1 + a1})
        acc = {(0, 0)}
        for (_, pts), mult in zip(gens, (n1, a1)):
            for _ in range(mult):
                acc = {tuple(x + y for x, y in zip(u, v)) for u in acc for v in pts}
        assert sorted(acc) == lattice_points(build_polyhedron(mp, part))

    def test_generation_on_tree(self):
        P = build_poset("zpqu", [("z", "p"), ("p", "u"), ("z", "q"), ("q", "u")])
        cell = IdealChain((frozenset("z"),))
        for part in all_partitions(MarkedPoset(P, {"z": 0, "u": 1})):
            gens = semigroup_generators(P, {"z", "u"}, cell, part)
            for n1, a1 in itertools.product(range(3), repeat=2):
                mp = MarkedPoset(P, {"z": n1, "u": n1 + a1})
                acc = {(0, 0)}
                for (_, pts), mult in zip(gens, (n1, a1)):
                    for _ in range(mult):
                        acc = {tuple(x + y for x, y in zip(u, v)) for u in acc for v in pts}
                assert sorted(acc) == lattice_points(build_polyhedron(mp, part))
