from fractions import Fraction as F

import pytest

from diskdispersal.geometry import Point
from diskdispersal.instance_io import Instance, Witness, validate_witness
from diskdispersal.oracle import GuardError, oracle
from diskdispersal.solver import (
    SolverConfig,
    enumerate_candidate_sets,
    feasibility,
    solve,
)
from diskdispersal.udg import build_graph
from diskdispersal.generators import gen_colocated


def P(x, y):
    return Point(F(x), F(y))


def fig1(k, d2, variant="euclidean"):
    return Instance(variant, k, F(d2), (P(0, 0), P(1, 0), P(2, 0)))


class TestEnumerateCandidateSets:
    def test_edgeless_all_small_subsets(self):
        g = build_graph([P(0, 0), P(4, 0)])
        assert list(enumerate_candidate_sets(g, 1)) == [[], [0], [1]]

    def test_single_edge_covers(self):
        g = build_graph([P(0, 0), P(1, 0)])
        assert list(enumerate_candidate_sets(g, 1)) == [[0], [1]]

    def test_triangle_needs_two(self):
        g = build_graph([P(0, 0), P(1, 0), P(F(1, 2), F(1, 2))])
        assert list(enumerate_candidate_sets(g, 1)) == []
        two = list(enumerate_candidate_sets(g, 2))
        assert two == [[0, 1], [0, 2], [1, 2]]

    def test_supersets_included_in_order(self):
        g = build_graph([P(0, 0), P(1, 0), P(5, 0)])
        got = list(enumerate_candidate_sets(g, 2))
        assert got == [[0], [1], [0, 1], [0, 2], [1, 2]]

    def test_order_is_size_then_lex(self):
        g = build_graph([P(0, 0), P(1, 0), P(2, 0), P(3, 0)])
        got = list(enumerate_candidate_sets(g, 3))
        sizes = [len(s) for s in got]
        assert sizes == sorted(sizes)
        for a, b in zip(got, got[1:]):
            if len(a) == len(b):
                assert a < b


class TestFeasibility:
    def test_tangency_candidate_found(self):
        from diskdispersal.numerics import s_square
        res = feasibility([P(0, 0), P(2, 0)], [P(1, 0)], F(3), "euclidean")
        assert res.status == "feasible"
        target = res.assignment[0]
        assert target.x == F(1)
        assert s_square(target.y) == F(3)  # lands at (1, +-sqrt(3))

    def test_no_motion_possible(self):
        res = feasibility([P(0, 0)], [P(1, 0)], F(0), "euclidean")
        assert res.status == "infeasible"
        assert res.delta is not None

    def test_empty_movables(self):
        res = feasibility([P(0, 0), P(2, 0)], [], F(1), "euclidean")
        assert res.status == "feasible" and res.assignment == {}

    def test_rectilinear_axis_solution(self):
        res = feasibility([P(0, 0), P(2, 0)], [P(1, 0)], F(3), "rectilinear")
        assert res.status == "feasible"
        t = res.assignment[0]
        assert t.x == F(1)  # vertical slide


class TestSolve:
    def test_fig1_yes_with_validating_witness(self):
        inst = fig1(1, 3)
        ans = solve(inst)
        assert ans.verdict == "yes"
        assert validate_witness(inst, ans.witness).status == "accept"

    def test_fig1_quarter_budget_refuted(self):
        ans = solve(fig1(1, F(1, 4)))
        assert ans.verdict == "no"

    def test_fig1_unit_budget_refuted(self):
        # the only size-1 cover is the middle disk, which needs sqrt(3)
        ans = solve(fig1(1, 1))
        assert ans.verdict == "no"

    def test_overlap_no_budget(self):
        inst = Instance("euclidean", 0, F(1), (P(0, 0), P(1, 0)))
        assert solve(inst).verdict == "no"

    def test_four_colocated_two_moves_insufficient(self):
        assert solve(gen_colocated(4, 2, 10 ** 6)).verdict == "no"

    def test_packing_is_trivially_yes(self):
        inst = Instance("euclidean", 0, F(1), (P(0, 0), P(2, 0), P(4, 0)))
        ans = solve(inst)
        assert ans.verdict == "yes" and ans.witness.moves == {}

    def test_empty_instance(self):
        ans = solve(Instance("euclidean", 0, F(0), ()))
        assert ans.verdict == "yes"

    def test_witness_indices_refer_to_original_instance(self):
        # far-away clutter is kernelised away; indices must survive
        disks = (P(100, 100), P(0, 0), P(1, 0), P(2, 0), P(-100, -100))
        inst = Instance("euclidean", 1, F(3), disks)
        ans = solve(inst)
        assert ans.verdict == "yes"
        assert set(ans.witness.moves) <= {1, 2, 3}
        assert validate_witness(inst, ans.witness).status == "accept"

    def test_determinism_and_jobs_equivalence(self):
        inst = fig1(1, 3)
        a1, a2 = solve(inst), solve(inst)
        assert a1.witness.moves == a2.witness.moves
        a3 = solve(inst, SolverConfig(jobs=4))
        assert a3.verdict == a1.verdict
        assert a3.witness.moves == a1.witness.moves

    def test_kernel_commutation(self):
        from diskdispersal.kernel import kernelize
        disks = (P(0, 0), P(1, 0), P(20, 20), P(40, 0))
        inst = Instance("euclidean", 1, F(4), disks)
        kinst, _ = kernelize(inst)
        assert solve(inst).verdict == solve(kinst).verdict

    def test_rectilinear_yes_revalidates_as_euclidean(self):
        inst = fig1(1, 3, "rectilinear")
        ans = solve(inst)
        assert ans.verdict == "yes"
        eu = Instance("euclidean", inst.k, inst.d2, inst.disks)
        assert validate_witness(eu, ans.witness).status == "accept"

    def test_blocks_rejected(self):
        from diskdispersal.instance_io import LatticeBlock
        b = LatticeBlock(F(0), F(0), F(4), F(4), F(2))
        inst = Instance("euclidean", 0, F(0), (), (b,))
        with pytest.raises(ValueError):
            solve(inst)


class TestRefutationMonotonicity:
    def test_finer_grids_keep_refuting(self):
        # once a set is refuted at some resolution, every finer tested
        # resolution must refute it too
        cases = [
            ([P(0, 0), P(2, 0)], [P(1, 0)], F(1, 4)),
            ([P(0, 0)], [P(1, 0)], F(0)),
            ([P(0, 0), P(2, 0), P(1, F(7, 4))], [P(1, 0)], F(1)),
        ]
        for fixed, movs, d2 in cases:
            deltas = [F(1, 4), F(1, 8), F(1, 16), F(1, 32)]
            refuted_from = None
            for i, dl in enumerate(deltas):
                cfg = SolverConfig(delta=dl, delta_start=dl)
                res = feasibility(fixed, movs, d2, "euclidean", cfg)
                if res.status == "infeasible" and refuted_from is None:
                    refuted_from = i
                if refuted_from is not None:
                    assert res.status == "infeasible"


class TestOracle:
    def test_packing_zero_budget(self):
        inst = Instance("euclidean", 0, F(1), (P(0, 0), P(2, 0)))
        assert oracle(inst).verdict == "yes"

    def test_fig1_quarter_budget_refutes(self):
        assert oracle(fig1(1, F(1, 4)), F(1, 16)).verdict == "no"

    def test_fig1_unit_budget_refutes(self):
        assert oracle(fig1(1, 1), F(1, 16)).verdict == "no"

    def test_grid_hit_yields_exact_witness(self):
        inst = Instance("euclidean", 1, F(4), (P(0, 0), P(1, 0)))
        ans = oracle(inst, F(1, 4))
        assert ans.verdict == "yes"
        assert validate_witness(inst, ans.witness).status == "accept"

    def test_tight_instance_is_unknown_not_wrong(self):
        # the only solutions move the middle disk to (1, +-sqrt(3)),
        # which no grid hits: the oracle must not claim a no
        ans = oracle(fig1(1, 3), F(1, 8))
        assert ans.verdict == "unknown"

    def test_guard(self):
        with pytest.raises(GuardError):
            oracle(gen_colocated(13, 1, 1))
        with pytest.raises(GuardError):
            oracle(Instance("euclidean", 4, F(1), (P(0, 0),)))

    def test_rectilinear_refutes_diagonal_only_solution(self):
        # two overlapping disks; only diagonal escapes exist euclidean-ly
        inst = Instance("rectilinear", 1, F(2),
                        (P(0, 0), P(1, 0), P(-2, 0), P(F(5, 2), F(0))))
        a = oracle(inst, F(1, 8))
        s = solve(inst)
        assert not (a.verdict == "yes" and s.verdict == "no")
        assert not (a.verdict == "no" and s.verdict == "yes")


class TestDifferentialAgainstOracle:
    def test_random_small_instances_never_contradict(self):
        import random
        from diskdispersal.geometry import translate
        from diskdispersal.generators import gen_random
        rng = random.Random(424242)
        for trial in range(30):
            n = rng.randint(2, 8)
            k = rng.randint(0, 2)
            d2 = rng.choice([F(1, 4), F(1), F(2), F(4)])
            variant = rng.choice(["euclidean", "rectilinear"])
            base = gen_random(n, rng.randint(3, 7), 7000 + trial, k, d2,
                              variant)
            shift = (F(-rng.randint(0, 5), 2), F(rng.randint(0, 5), 4))
            inst = Instance(variant, k, d2,
                            tuple(translate(p, *shift) for p in base.disks))
            s = solve(inst)
            o = oracle(inst, F(1, 8))
            assert {s.verdict, o.verdict} != {"yes", "no"}, trial
            if s.verdict == "yes":
                assert validate_witness(inst, s.witness).accepted
            if o.verdict == "yes":
                assert validate_witness(inst, o.witness).accepted


class TestVariantOrdering:
    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_colocated_thresholds(self, m):
        d2 = F(4 * m * m)
        for variant in ("euclidean", "rectilinear"):
            no = solve(gen_colocated(m, m - 2, d2, variant))
            assert no.verdict == "no"
            yes = solve(gen_colocated(m, m - 1, d2, variant))
            assert yes.verdict == "yes"
            inst = gen_colocated(m, m - 1, d2, variant)
            assert validate_witness(inst, yes.witness).status == "accept"
            if variant == "rectilinear":
                eu = Instance("euclidean", inst.k, inst.d2, inst.disks)
                assert validate_witness(eu, yes.witness).status == "accept"
