"""Tests for divisors, firing, burning, reduction and rank."""

import random

import networkx as nx
import pytest

from chipfire.divisors import (
    BurnOutcome,
    Divisor,
    FiringScript,
    apply_script,
    degree,
    dhar_burn,
    effective_divisors,
    find_unwinnable_debt,
    fire_set,
    is_q_reduced,
    is_winnable,
    mdba,
    multi_support,
    multiplicity_free_divisors,
    negative_part,
    positive_part,
    q_reduce,
    rank,
    rank_at_least,
    reduction_chain,
    scale,
    support,
)
from chipfire.errors import InvalidInputError, PreconditionError
from chipfire.families import generalized_banana
from chipfire.gonality import theorem12_divisor, theorem12_preconditions
from chipfire.graph import distances
from chipfire.repro import matched_pair_divisor


def D(*chips: int) -> Divisor:
    return Divisor(chips)


def random_script(rng: random.Random, n: int, spread: int = 3) -> FiringScript:
    return FiringScript(tuple(rng.randint(-spread, spread) for _ in range(n)))


class TestDivisor:
    def test_degree(self, c4) -> None:
        assert degree(Divisor.zero(4)) == 0
        assert degree(D(1, 1, 1, 0)) == 3
        assert degree(D(3, 0, -1, 0)) == 2

    def test_parse(self) -> None:
        assert Divisor.parse("1 1 1 0") == D(1, 1, 1, 0)
        assert Divisor.parse("[3, 0, -1, 0]") == D(3, 0, -1, 0)

    def test_parse_rejects_garbage(self) -> None:
        with pytest.raises(InvalidInputError, match="not a list of integers"):
            Divisor.parse("1 one 1")

    def test_arithmetic(self) -> None:
        assert D(1, 2) + D(0, -3) == D(1, -1)
        assert D(1, 2) - D(1, 1) == D(0, 1)
        assert -D(1, -2) == D(-1, 2)
        assert str(D(3, 0, -1)) == "3 0 -1"

    def test_parts(self) -> None:
        d = D(2, -1, 0, 3)
        assert support(d) == frozenset({0, 3})
        assert positive_part(d) == D(2, 0, 0, 3)
        assert negative_part(d) == D(0, 1, 0, 0)
        assert positive_part(d) - negative_part(d) == d

    def test_multi_support(self) -> None:
        assert multi_support(D(2, 0, 1)) == (0, 0, 2)
        with pytest.raises(InvalidInputError):
            multi_support(D(1, -1))

    def test_from_multiset_and_scale(self) -> None:
        assert Divisor.from_multiset(3, [2, 0, 2]) == D(1, 0, 2)
        assert scale(D(1, 0, 2), 3) == D(3, 0, 6)

    def test_enumeration_order(self) -> None:
        assert list(effective_divisors(3, 2)) == [
            (2, 0, 0),
            (1, 1, 0),
            (1, 0, 1),
            (0, 2, 0),
            (0, 1, 1),
            (0, 0, 2),
        ]
        assert list(multiplicity_free_divisors(3, 2)) == [(1, 1, 0), (1, 0, 1), (0, 1, 1)]


class TestFiring:
    def test_single_vertex(self, c4) -> None:
        assert fire_set(c4, D(2, 0, 0, 0), {0}) == D(0, 1, 0, 1)

    def test_whole_graph_changes_nothing(self, c4) -> None:
        assert fire_set(c4, D(1, -2, 0, 4), c4.vertices) == D(1, -2, 0, 4)

    def test_three_vertices(self, c4) -> None:
        assert fire_set(c4, D(1, 1, -1, 1), {0, 1, 3}) == D(1, 0, 1, 0)

    def test_apply_script(self, c4) -> None:
        assert apply_script(c4, D(3, 0, -1, 0), FiringScript((2, 1, 0, 1))) == D(1, 0, 1, 0)
        assert apply_script(c4, D(3, 0, -1, 0), FiringScript.zero(4)) == D(3, 0, -1, 0)
        assert apply_script(c4, D(3, 0, -1, 0), FiringScript((5, 5, 5, 5))) == D(3, 0, -1, 0)

    def test_script_agrees_with_set_firing(self, c4) -> None:
        U = {1, 2}
        assert apply_script(c4, D(0, 2, 2, 0), FiringScript.indicator(4, U)) == fire_set(
            c4, D(0, 2, 2, 0), U
        )

    def test_degree_is_conserved(self, corpus5) -> None:
        rng = random.Random(7)
        for G in corpus5:
            d = Divisor(tuple(rng.randint(-3, 3) for _ in G.vertices))
            U = {v for v in G.vertices if rng.random() < 0.5}
            assert fire_set(G, d, U).degree == d.degree
            assert apply_script(G, d, random_script(rng, G.n)).degree == d.degree

    def test_length_mismatch(self, c4) -> None:
        with pytest.raises(InvalidInputError, match="length"):
            fire_set(c4, D(1, 1), {0})


class TestBurning:
    def test_effective_divisor_is_returned_as_is(self, c4) -> None:
        report = mdba(c4, D(0, 2, 0, 1))
        assert report.outcome is BurnOutcome.FOUND
        assert report.result == D(0, 2, 0, 1)
        assert report.script.is_zero()

    def test_finds_effective_equivalent(self, c4) -> None:
        report = mdba(c4, D(3, 0, -1, 0))
        assert report.found
        assert report.result == D(1, 0, 1, 0)
        assert report.script == FiringScript((2, 1, 0, 1))
        assert report.first_pass_components == ((1, 2, 3),)

    def test_unwinnable(self, c4) -> None:
        report = mdba(c4, D(1, 0, -1, 0))
        assert report.outcome is BurnOutcome.NONE
        assert report.result is None

    def test_scan_order_does_not_matter(self, corpus5) -> None:
        rng = random.Random(11)
        for G in corpus5:
            d = Divisor(tuple(rng.randint(0, 2) for _ in G.vertices))
            assert dhar_burn(G, d, [0]) == dhar_burn(G, d, [0], reverse=True)

    def test_script_soundness_and_oracle_agreement(self, corpus6) -> None:
        rng = random.Random(2024)
        small = [G for G in corpus6 if G.n >= 2]
        for _ in range(1000):
            G = rng.choice(small)
            d = Divisor(tuple(rng.randint(-3, 3) for _ in G.vertices))
            report = mdba(G, d)
            assert report.found == is_winnable(G, d)
            if report.found:
                assert report.result is not None and report.result.is_effective()
                assert apply_script(G, d, report.script) == report.result
            for component in report.first_pass_components:
                assert nx.is_connected(G.simple_graph.subgraph(component))

    @pytest.mark.slow
    def test_flammable_components_are_small_trees(self, corpus6) -> None:
        checked = 0
        for G in corpus6:
            for r in (1, 2):
                if G.n < 2 or not theorem12_preconditions(G, r):
                    continue
                base = theorem12_divisor(G, r)
                for chips in effective_divisors(G.n, r):
                    d = base - Divisor(chips)
                    for component in mdba(G, d).first_pass_components:
                        debt = -min(d[v] for v in component)
                        assert len(component) <= r - debt + 1
                        assert nx.is_tree(G.simple_graph.subgraph(component))
                        checked += 1
        assert checked > 0


class TestReduction:
    def test_already_reduced(self, c4) -> None:
        reduced, script = q_reduce(c4, D(2, 0, 1, 0), 0)
        assert reduced == D(2, 0, 1, 0)
        assert script.is_zero()

    def test_cycle(self, c4) -> None:
        reduced, script = q_reduce(c4, D(0, 0, 3, 0), 0)
        assert reduced == D(2, 0, 1, 0)
        assert is_q_reduced(c4, reduced, 0)
        assert apply_script(c4, D(0, 0, 3, 0), script) == reduced
        assert script.f[0] == 0

    def test_single_edge(self, p2) -> None:
        reduced, script = q_reduce(p2, D(5, 0), 1)
        assert reduced == D(0, 5)
        assert script == FiringScript((5, 0))

    def test_not_reduced(self, c4, p2) -> None:
        assert not is_q_reduced(p2, D(1, 4), 1)
        assert not is_q_reduced(c4, D(0, -1, 1, 0), 0)

    def test_debt_off_q_is_cleared(self, banana3) -> None:
        reduced, script = q_reduce(banana3, D(0, 0, -7), 1)
        assert all(c >= 0 for v, c in enumerate(reduced) if v != 1)
        assert is_q_reduced(banana3, reduced, 1)
        assert apply_script(banana3, D(0, 0, -7), script) == reduced

    def test_equivalent_divisors_share_reduced_form(self, corpus6) -> None:
        rng = random.Random(3)
        for G in corpus6:
            if G.n < 2:
                continue
            d = Divisor(tuple(rng.randint(-2, 3) for _ in G.vertices))
            other = apply_script(G, d, random_script(rng, G.n))
            q = rng.randrange(G.n)
            assert q_reduce(G, d, q)[0] == q_reduce(G, other, q)[0]

    def test_vertex_out_of_range(self, c4) -> None:
        with pytest.raises(InvalidInputError):
            q_reduce(c4, D(0, 0, 0, 0), 4)


class TestReductionChain:
    def test_chain_stays_effective(self, corpus5) -> None:
        rng = random.Random(5)
        for G in corpus5:
            if G.n < 2:
                continue
            d = Divisor(tuple(rng.randint(0, 3) for _ in G.vertices))
            q = rng.randrange(G.n)
            chain = reduction_chain(G, d, q)
            current = d
            previous: frozenset[int] = frozenset()
            for step in chain:
                assert q not in step.fired
                assert previous <= step.fired
                current = fire_set(G, current, step.fired)
                assert current == step.divisor
                assert current.is_effective()
                previous = step.fired
            assert current == q_reduce(G, d, q)[0]

    def test_banana_chain(self, banana3) -> None:
        chain = reduction_chain(banana3, D(0, 0, 6), 0)
        assert [step.fired for step in chain] == [frozenset({2}), frozenset({1, 2})]
        assert [step.divisor for step in chain] == [D(0, 6, 0), D(6, 0, 0)]

    def test_needs_effective_divisor(self, c4) -> None:
        with pytest.raises(PreconditionError, match="effective"):
            reduction_chain(c4, D(1, -1, 0, 0), 0)


class TestWinnability:
    def test_effective(self, c4) -> None:
        assert is_winnable(c4, D(0, 0, 1, 0))

    def test_negative_degree(self, c4) -> None:
        assert not is_winnable(c4, D(5, 0, -6, 0))

    def test_unwinnable_degree_zero(self, c4) -> None:
        assert not is_winnable(c4, D(1, 0, -1, 0))


class TestRank:
    def test_negative_degree(self, c4) -> None:
        assert rank(c4, D(0, -1, 0, 0)) == -1

    def test_zero_divisor(self, c4, banana3) -> None:
        assert rank(c4, Divisor.zero(4)) == 0
        assert rank(banana3, Divisor.zero(3)) == 0

    def test_cycle(self, c4) -> None:
        assert rank(c4, D(1, 1, 1, 0)) == 2
        assert rank(c4, D(1, 0, 1, 0)) == 1
        assert rank(c4, D(1, 0, 0, 0)) == 0

    def test_rank_at_least(self, c4) -> None:
        assert rank_at_least(c4, D(0, 0, 0, 0), 0)
        assert rank_at_least(c4, D(1, 1, 1, 0), 2)
        assert not rank_at_least(c4, D(1, 1, 1, 0), 3)

    def test_rank_at_least_rejects_negative(self, c4) -> None:
        with pytest.raises(PreconditionError):
            rank_at_least(c4, D(1, 1, 1, 0), -1)

    def test_crown_matched_pair_divisor(self, crown10) -> None:
        d = matched_pair_divisor(5)
        assert d.degree == 8
        assert distances(crown10)[0, 5] == 3
        assert rank_at_least(crown10, d, 2)

    def test_unwinnable_debt(self, c4) -> None:
        assert find_unwinnable_debt(c4, D(1, 1, 1, 0), 2) is None
        assert find_unwinnable_debt(c4, D(1, 1, 1, 0), 3) == D(3, 0, 0, 0)

    def test_trees_have_rank_equal_degree(self) -> None:
        tree = generalized_banana(4, [1, 1, 1])
        assert rank(tree, D(2, 0, 1, 0)) == 3

    def test_invariant_under_equivalence(self, corpus5) -> None:
        rng = random.Random(17)
        for G in corpus5:
            if G.n < 2:
                continue
            d = Divisor(tuple(rng.randint(-1, 2) for _ in G.vertices))
            expected = rank(G, d)
            for _ in range(5):
                assert rank(G, apply_script(G, d, random_script(rng, G.n))) == expected

    def test_adding_a_chip_never_lowers_rank(self, corpus5) -> None:
        rng = random.Random(23)
        for G in corpus5:
            d = Divisor(tuple(rng.randint(-1, 2) for _ in G.vertices))
            base = rank(G, d)
            for v in G.vertices:
                assert rank(G, d + Divisor.from_multiset(G.n, [v])) >= base

    @pytest.mark.slow
    def test_equivalence_invariance_many_scripts(self, corpus5) -> None:
        rng = random.Random(29)
        for G in corpus5:
            if G.n < 2:
                continue
            d = Divisor(tuple(rng.randint(-1, 3) for _ in G.vertices))
            expected = rank(G, d)
            for _ in range(100):
                assert rank(G, apply_script(G, d, random_script(rng, G.n))) == expected
