import random
from fractions import Fraction as F

import pytest

from diskdispersal.geometry import Point, dist2
from diskdispersal.instance_io import Instance
from diskdispersal.kernel import (
    derived_d,
    full_kernel,
    halo_partition,
    kernelize,
    shrink_parts,
    size_bound,
)


def P(x, y):
    return Point(F(x), F(y))


class TestKernelize:
    def test_distance_filter_worked_example(self):
        # threshold (d+2)(k+1) = 3*2 = 6; disk at x=10 is 9 away from the
        # nearest cover disk and gets dropped
        inst = Instance("euclidean", 1, F(1),
                        (P(0, 0), P(1, 0), P(5, 0), P(10, 0)))
        out, report = kernelize(inst)
        assert report.cover == (0, 1)
        assert report.threshold == 6
        assert report.kept == (0, 1, 2)
        assert report.removed == (3,)
        assert out.disks == inst.disks[:3]
        assert out.k == inst.k and out.d2 == inst.d2

    def test_edgeless_collapses_to_empty(self):
        inst = Instance("euclidean", 2, F(4), (P(0, 0), P(10, 0)))
        out, report = kernelize(inst)
        assert report.cover == ()
        assert out.disks == ()

    def test_all_within_threshold_identity(self):
        inst = Instance("euclidean", 1, F(1), (P(0, 0), P(1, 0), P(3, 0)))
        out, report = kernelize(inst)
        assert out.disks == inst.disks

    def test_trivially_no(self):
        inst = Instance("euclidean", 1, F(1),
                        (P(0, 0), P(1, 0), P(50, 0), P(51, 0)))
        assert kernelize(inst) is None

    def test_boundary_disk_kept(self):
        # exactly at threshold distance 6 from the cover
        inst = Instance("euclidean", 1, F(1), (P(0, 0), P(1, 0), P(7, 0)))
        out, report = kernelize(inst)
        assert 2 in report.kept

    def test_size_bound_holds(self):
        rng = random.Random(2)
        for trial in range(25):
            n = rng.randint(1, 18)
            disks = tuple(P(F(rng.randint(0, 40), 4), F(rng.randint(0, 40), 4))
                          for _ in range(n))
            k = rng.randint(0, 3)
            d2 = F(rng.randint(1, 9))
            kr = kernelize(Instance("euclidean", k, d2, disks))
            if kr is None:
                continue
            out, report = kr
            assert set(report.kept) | set(report.removed) == set(range(n))
            assert not set(report.kept) & set(report.removed)
            assert len(report.kept) <= report.size_bound


class TestSizeBound:
    def test_worked_value(self):
        assert size_bound(1, F(1)) == 2 + 2 * 64

    def test_zero_budget(self):
        assert size_bound(0, F(5)) == 0

    def test_monotone(self):
        vals_k = [size_bound(k, F(2)) for k in range(6)]
        assert vals_k == sorted(vals_k)
        vals_d = [size_bound(2, F(d)) for d in range(1, 8)]
        assert vals_d == sorted(vals_d)


class TestShrinkParts:
    def test_two_singletons_on_diagonal(self):
        disks = [P(100, 100), P(500, 500)]
        out, mapping = shrink_parts(disks, [[0], [1]], F(4))
        assert out == [P(0, 0), P(4, 4)]
        assert mapping == [0, 1]
        assert dist2(out[0], out[1]) == 32  # (4*sqrt2)^2 > 4^2

    def test_single_part_moves_to_corner(self):
        disks = [P(10, 7), P(12, 9), P(11, 20)]
        out, _ = shrink_parts(disks, [[0, 1, 2]], F(2))
        assert min(p.x for p in out) == 0
        assert min(p.y for p in out) == 0

    def test_intra_part_distances_exact(self):
        rng = random.Random(9)
        for trial in range(100):
            n = rng.randint(2, 10)
            disks = [P(F(rng.randint(-400, 400), 4),
                       F(rng.randint(-400, 400), 4)) for _ in range(n)]
            idx = list(range(n))
            rng.shuffle(idx)
            cut = rng.randint(1, n)
            parts = [idx[:cut], idx[cut:]]
            parts = [p for p in parts if p]
            r = F(rng.randint(1, 10))
            out, _ = shrink_parts(disks, parts, r)
            for part in parts:
                for a in part:
                    for b in part:
                        assert dist2(disks[a], disks[b]) == \
                            dist2(out[a], out[b])
            if len(parts) == 2:
                for a in parts[0]:
                    for b in parts[1]:
                        assert dist2(out[a], out[b]) > r * r


class TestHaloPartition:
    def test_far_disks_split(self):
        # d = 1: centers 5 apart exceed 2d+2 = 4
        inst = Instance("euclidean", 1, F(1), (P(0, 0), P(5, 0)))
        assert halo_partition(inst, F(1)) == [[0], [1]]

    def test_near_disks_together(self):
        inst = Instance("euclidean", 1, F(1), (P(0, 0), P(3, 0)))
        assert halo_partition(inst, F(1)) == [[0, 1]]

    def test_single_disk(self):
        inst = Instance("euclidean", 1, F(1), (P(7, 7),))
        assert halo_partition(inst, F(1)) == [[0]]

    def test_parts_separated_beyond_reach(self):
        rng = random.Random(4)
        for trial in range(20):
            disks = tuple(P(rng.randint(0, 60), rng.randint(0, 60))
                          for _ in range(8))
            inst = Instance("euclidean", 2, F(4), disks)
            d = derived_d(inst.d2)
            parts = halo_partition(inst)
            lim = (2 * d + 2) ** 2
            for pi in range(len(parts)):
                for pj in range(pi + 1, len(parts)):
                    for a in parts[pi]:
                        for b in parts[pj]:
                            assert dist2(disks[a], disks[b]) > lim


class TestFullKernel:
    def test_single_part_translated_to_origin(self):
        inst = Instance("euclidean", 1, F(3), (P(0, 0), P(1, 0), P(2, 0)))
        out = full_kernel(inst)
        assert out.disks == inst.disks  # already at the corner

    def test_far_parts_brought_near(self):
        inst = Instance("euclidean", 2, F(3),
                        (P(0, 0), P(1, 0), P(1000, 1000), P(1001, 1000)))
        out = full_kernel(inst)
        assert len(out.disks) == 4
        assert max(abs(p.x) for p in out.disks) < 1000
        # intra-pair geometry preserved
        assert dist2(out.disks[2], out.disks[3]) == 1

    def test_empty(self):
        inst = Instance("euclidean", 1, F(3), ())
        assert full_kernel(inst).disks == ()

    def test_trivially_no_maps_to_canonical_no(self):
        inst = Instance("euclidean", 0, F(3), (P(0, 0), P(1, 0)))
        out = full_kernel(inst)
        assert out.k == 0 and len(out.disks) == 2
        assert out.disks[0] == out.disks[1]
