"""Tests for exact gonality search, independence numbers and the independence bound."""

import pytest

from chipfire.certificates import scramble_order, vertex_scramble
from chipfire.divisors import Divisor, rank, rank_at_least
from chipfire.errors import InfeasibleError, PreconditionError
from chipfire.families import bipartite_extension, complete_bipartite, crown, cycle, generalized_banana, path
from chipfire.gonality import (
    alpha_r,
    gonality,
    mf_gonality,
    scaled_witness,
    theorem12_divisor,
    theorem12_preconditions,
    upper_bound,
)
from chipfire.graph import distances, edge_connectivity
from chipfire.repro import matched_pair_divisor


class TestIndependence:
    def test_crown(self, crown10) -> None:
        report = alpha_r(crown10, 2)
        assert report.alpha == 2
        assert report.witness == (0, 5)

    def test_cycle(self, c4) -> None:
        assert alpha_r(c4, 1).alpha == 2
        assert alpha_r(c4, 1).witness == (0, 2)
        assert alpha_r(c4, 2).alpha == 1
        assert alpha_r(c4, 2).witness == (0,)

    def test_witness_is_far_apart(self, corpus6) -> None:
        for G in corpus6:
            for r in (1, 2):
                report = alpha_r(G, r)
                dist = distances(G)
                assert len(report.witness) == report.alpha
                assert all(
                    dist[u, v] > r for u in report.witness for v in report.witness if u < v
                )

    def test_rejects_r_zero(self, c4) -> None:
        with pytest.raises(PreconditionError):
            alpha_r(c4, 0)

    def test_bipartite_extension_keeps_alpha(self, crown10) -> None:
        extended, _ = bipartite_extension(crown10)
        assert alpha_r(extended, 2).alpha == alpha_r(crown10, 2).alpha == 2
        k44 = complete_bipartite(4, 4)
        extended, _ = bipartite_extension(k44)
        assert alpha_r(extended, 2).alpha == alpha_r(k44, 2).alpha == 1


class TestIndependenceBound:
    def test_cycle(self, c4) -> None:
        assert theorem12_preconditions(c4, 2)
        assert upper_bound(c4, 2) == 3
        assert theorem12_divisor(c4, 2) == Divisor((0, 1, 1, 1))

    def test_crown_divisor_is_the_matched_pair_divisor(self, crown10) -> None:
        assert upper_bound(crown10, 2) == 8
        assert theorem12_divisor(crown10, 2) == matched_pair_divisor(5)

    def test_preconditions_fail_on_parallel_edges(self, banana3) -> None:
        assert not theorem12_preconditions(banana3, 2)
        with pytest.raises(PreconditionError, match="girth"):
            upper_bound(banana3, 2)

    def test_preconditions_fail_on_low_valence(self) -> None:
        assert not theorem12_preconditions(path(4), 2)

    def test_divisor_has_rank_on_small_graphs(self, corpus6) -> None:
        for G in corpus6:
            for r in (1, 2):
                if G.n > 1 and theorem12_preconditions(G, r):
                    D = theorem12_divisor(G, r)
                    assert D.degree == G.n - alpha_r(G, r).alpha
                    assert rank_at_least(G, D, r)


class TestGonality:
    def test_cycle_second_gonality(self, c4) -> None:
        report = gonality(c4, 2)
        assert report.minimum_degree == 3
        assert report.witness == Divisor((3, 0, 0, 0))
        assert report.degrees_exhausted == [(2, 10)]
        assert not report.budget_exceeded

    def test_cycle_first_gonality(self, c4) -> None:
        report = gonality(c4, 1)
        assert report.minimum_degree == 2
        assert report.witness == Divisor((2, 0, 0, 0))
        assert report.degrees_exhausted == [(1, 4)]

    def test_trees_have_gonality_one(self) -> None:
        assert gonality(path(3), 1).minimum_degree == 1

    def test_banana(self, banana3) -> None:
        report = gonality(banana3, 2)
        assert report.minimum_degree == 6
        assert rank(banana3, report.witness) >= 2

    def test_descending_strategy(self, c4) -> None:
        report = gonality(c4, 2, strategy="descending")
        assert report.minimum_degree == 3
        assert report.strategy == "descending"
        assert report.degrees_exhausted == [(2, 10)]

    def test_descending_without_bound_starts_at_ceiling(self, banana3) -> None:
        report = gonality(banana3, 2, strategy="descending")
        assert report.strategy == "descending"
        assert report.minimum_degree == 6
        assert report.degrees_exhausted == [(5, 21)]

    def test_descending_multiplicity_free_infeasible(self, p2) -> None:
        with pytest.raises(InfeasibleError):
            mf_gonality(p2, 3, strategy="descending")

    def test_start_degree_is_recorded(self, c4) -> None:
        report = gonality(c4, 2, start_degree=3)
        assert report.minimum_degree == 3
        assert report.assumed_lower_bound == 3
        assert report.degrees_exhausted == []

    def test_budget_exceeded(self, crown10) -> None:
        report = gonality(crown10, 2, budget=1e-9)
        assert report.budget_exceeded
        assert report.minimum_degree is None
        assert report.witness is None

    def test_worker_pool_gives_same_witness(self, c4) -> None:
        serial = gonality(c4, 2, chunk_size=3)
        parallel = gonality(c4, 2, threads=2, chunk_size=3)
        assert parallel.minimum_degree == serial.minimum_degree
        assert parallel.witness == serial.witness
        assert parallel.degrees_exhausted == serial.degrees_exhausted

    def test_rejects_bad_arguments(self, c4) -> None:
        with pytest.raises(PreconditionError):
            gonality(c4, 0)
        with pytest.raises(PreconditionError):
            gonality(c4, 1, threads=0)


class TestMultiplicityFreeGonality:
    def test_cycle(self, c4) -> None:
        report = mf_gonality(c4, 1)
        assert report.multiplicity_free
        assert report.minimum_degree == 2
        assert report.witness == Divisor((1, 1, 0, 0))

    def test_infeasible(self, p2) -> None:
        with pytest.raises(InfeasibleError, match="infeasible at n"):
            mf_gonality(p2, 3)

    def test_never_below_gonality(self, corpus5) -> None:
        for G in corpus5:
            if G.n > 1:
                assert mf_gonality(G, 1).minimum_degree >= gonality(G, 1).minimum_degree

    @pytest.mark.slow
    def test_k44_extension(self) -> None:
        extended, _ = bipartite_extension(complete_bipartite(4, 4))
        report = mf_gonality(extended, 2, strategy="descending")
        assert report.minimum_degree == 15
        assert report.degrees_exhausted == [(14, 120)]

    @pytest.mark.slow
    def test_crown10_extension(self) -> None:
        extended, _ = bipartite_extension(crown(10))
        report = mf_gonality(extended, 2, strategy="descending", threads=4)
        assert report.minimum_degree == 18
        assert report.degrees_exhausted == [(17, 1140)]


class TestScaling:
    def test_scaled_witness(self, c4) -> None:
        report = gonality(c4, 1)
        assert scaled_witness(c4, report, 2) == Divisor((4, 0, 0, 0))

    def test_needs_a_witness(self, crown10) -> None:
        report = gonality(crown10, 2, budget=1e-9)
        with pytest.raises(PreconditionError):
            scaled_witness(crown10, report, 2)

    @pytest.mark.slow
    def test_second_gonality_at_most_twice_first(self, corpus6) -> None:
        for G in corpus6:
            if G.n < 2:
                continue
            first = gonality(G, 1)
            scaled_witness(G, first, 2)
            assert gonality(G, 2).minimum_degree <= 2 * first.minimum_degree


class TestAcceptance:
    @pytest.mark.parametrize("n, multiplicities", [(2, [4]), (3, [6, 6])])
    def test_banana_vertex_scramble_meets_gonality(self, n: int, multiplicities: list[int]) -> None:
        G = generalized_banana(n, multiplicities)
        assert edge_connectivity(G) >= 2 * n
        assert scramble_order(G, vertex_scramble(G, 2)).order == 2 * n
        assert gonality(G, 2).minimum_degree == 2 * n

    @pytest.mark.slow
    def test_crown10_second_gonality(self, crown10) -> None:
        report = gonality(crown10, 2, strategy="descending", threads=4)
        assert report.minimum_degree == 8
        assert report.degrees_exhausted[0][0] == 7

    @pytest.mark.slow
    def test_independence_bound_sweep(self, corpus7) -> None:
        violations = []
        for G in corpus7:
            for r in (1, 2):
                if G.n < 2 or not theorem12_preconditions(G, r):
                    continue
                bound = G.n - alpha_r(G, r).alpha
                if not rank_at_least(G, theorem12_divisor(G, r), r):
                    violations.append((G, r, "rank"))
                if gonality(G, r).minimum_degree > bound:
                    violations.append((G, r, "bound"))
        assert violations == []


def test_cycle_families_have_gonality_two() -> None:
    for n in (3, 5, 6):
        assert gonality(cycle(n), 1).minimum_degree == 2
