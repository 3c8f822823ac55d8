import json
import math

import numpy as np
import pytest

from peakspam import dpc
from peakspam.distances import DistanceMatrix
from peakspam.errors import (
    DegenerateDistancesError,
    ParamError,
    ShapeError,
    TooFewPointsError,
)

import oracle


@pytest.fixture
def dm3():
    """The worked 3-point example: scores 0, 0.1, 0.9."""
    return DistanceMatrix.from_1d([0.0, 0.1, 0.9])


class TestDensityParams:
    def test_defaults(self):
        params = dpc.DensityParams()
        assert params.kernel == "cutoff" and params.t == 0.02 and params.d_c is None

    def test_t_out_of_domain(self):
        with pytest.raises(ParamError):
            dpc.DensityParams(t=1.5)
        with pytest.raises(ParamError):
            dpc.DensityParams(t=0.0)

    def test_t_outside_rule_of_thumb_warns(self):
        with pytest.warns(UserWarning):
            dpc.DensityParams(t=0.34)

    def test_bad_kernel(self):
        with pytest.raises(ParamError):
            dpc.DensityParams(kernel="tophat")

    def test_bad_explicit_dc(self):
        with pytest.raises(ParamError):
            dpc.DensityParams(d_c=0.0)


class TestSelectDc:
    def test_small_fraction_picks_first(self, dm3):
        with pytest.warns(UserWarning):
            params = dpc.DensityParams(t=0.34)
        assert dpc.select_dc(dm3, params) == 0.1

    def test_clamp_to_max(self, dm3):
        with pytest.warns(UserWarning):
            params = dpc.DensityParams(t=0.999)
        assert dpc.select_dc(dm3, params) == 0.9

    def test_explicit_override(self, dm3):
        params = dpc.DensityParams(d_c=0.25)
        assert dpc.select_dc(dm3, params) == 0.25

    def test_all_zero_distances(self):
        dm = DistanceMatrix.from_1d([0.5, 0.5, 0.5, 0.5])
        with pytest.raises(DegenerateDistancesError):
            dpc.select_dc(dm, dpc.DensityParams())

    def test_heavy_ties_can_select_zero_which_density_rejects(self):
        # contract seam: select_dc returns d_k verbatim, which is 0.0 when
        # ties put more than t*M pairs at distance zero; local_density then
        # refuses it (its domain is d_c > 0)
        dm = DistanceMatrix.from_1d([0.5] * 8 + [0.1, 0.9])
        d_c = dpc.select_dc(dm, dpc.DensityParams())
        assert d_c == 0.0
        with pytest.raises(ParamError):
            dpc.local_density(dm, d_c, "cutoff")

    def test_round_half_up(self):
        # 10 points -> M=45; t=0.1 -> k = floor(4.5+0.5) = 5
        vals = np.arange(10, dtype=np.float64)
        dm = DistanceMatrix.from_1d(vals)
        with pytest.warns(UserWarning):
            params = dpc.DensityParams(t=0.1)
        expected = sorted(dm.condensed.tolist())[4]
        assert dpc.select_dc(dm, params) == expected

    def test_matches_oracle_on_random_data(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            vals = rng.uniform(-3, 3, int(rng.integers(5, 60)))
            dm = DistanceMatrix.from_1d(vals)
            got = dpc.select_dc(dm, dpc.DensityParams(t=0.02))
            want = oracle.select_dc(oracle.full_matrix([float(v) for v in vals]), 0.02)
            assert got == want


class TestCutoffIndicator:
    @pytest.mark.parametrize(
        "x,expected",
        [(-1.0, 1), (-1e-15, 1), (0.0, 0), (1e-15, 0), (1.0, 0)],
    )
    def test_truth_table(self, x, expected):
        assert dpc.cutoff_indicator(x) == expected


class TestLocalDensity:
    def test_cutoff_example(self, dm3):
        assert dpc.local_density(dm3, 0.2, "cutoff").tolist() == [1.0, 1.0, 0.0]

    def test_dc_below_min_gives_all_zero(self, dm3):
        assert dpc.local_density(dm3, 0.05, "cutoff").tolist() == [0.0, 0.0, 0.0]

    def test_pair_exactly_at_dc_not_counted(self):
        dm = DistanceMatrix.from_1d([0.0, 0.2])
        assert dpc.local_density(dm, 0.2, "cutoff").tolist() == [0.0, 0.0]

    def test_gaussian_two_points_at_dc(self):
        dm = DistanceMatrix.from_1d([0.0, 0.2])
        rho = dpc.local_density(dm, 0.2, "gaussian")
        assert rho.tolist() == pytest.approx([math.exp(-1.0)] * 2, rel=1e-15)

    def test_invalid_dc(self, dm3):
        with pytest.raises(ParamError):
            dpc.local_density(dm3, 0.0, "cutoff")

    def test_invalid_kernel(self, dm3):
        with pytest.raises(ParamError):
            dpc.local_density(dm3, 0.2, "tophat")

    def test_cutoff_is_integer_valued(self):
        rng = np.random.default_rng(1)
        dm = DistanceMatrix.from_1d(rng.uniform(-3, 3, 80))
        rho = dpc.local_density(dm, 0.5, "cutoff")
        assert np.array_equal(rho, np.round(rho))
        assert rho.min() >= 0 and rho.max() <= dm.n - 1


class TestDensityOrder:
    def test_tie_keeps_input_order(self):
        assert dpc.density_order([1.0, 1.0, 0.0]).tolist() == [0, 1, 2]

    def test_all_equal_is_identity(self):
        assert dpc.density_order([2.0, 2.0, 2.0, 2.0]).tolist() == [0, 1, 2, 3]

    def test_strict_sort(self):
        assert dpc.density_order([0.0, 5.0, 2.0]).tolist() == [1, 2, 0]


class TestComputeDelta:
    def test_worked_example(self, dm3):
        delta, nearest = dpc.compute_delta(dm3, [0, 1, 2])
        assert delta.tolist() == [0.9, 0.1, 0.8]
        assert nearest.tolist() == [-1, 0, 1]

    def test_two_points(self):
        dm = DistanceMatrix.from_1d([0.0, 0.7])
        delta, nearest = dpc.compute_delta(dm, [0, 1])
        assert delta.tolist() == [0.7, 0.7]
        assert nearest.tolist() == [-1, 0]

    def test_leader_gets_global_max(self):
        rng = np.random.default_rng(2)
        vals = rng.uniform(-3, 3, 40)
        dm = DistanceMatrix.from_1d(vals)
        rho = dpc.local_density(dm, dpc.select_dc(dm, dpc.DensityParams()), "cutoff")
        order = dpc.density_order(rho)
        delta, nearest = dpc.compute_delta(dm, order)
        leader = order[0]
        assert nearest[leader] == -1
        assert delta[leader] == dm.row(leader).max()
        assert np.count_nonzero(nearest == -1) == 1

    def test_invalid_permutation(self, dm3):
        with pytest.raises(ParamError):
            dpc.compute_delta(dm3, [0, 0, 2])


class TestComputeGamma:
    def test_product(self):
        assert dpc.compute_gamma([2.0], [0.5]).tolist() == [1.0]

    def test_zero_rho(self):
        assert dpc.compute_gamma([0.0], [123.0]).tolist() == [0.0]

    def test_worked_example(self):
        got = dpc.compute_gamma([1.0, 1.0, 0.0], [0.9, 0.1, 0.8])
        assert got.tolist() == [0.9, 0.1, 0.0]

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            dpc.compute_gamma([1.0, 2.0], [0.5])


def stats_from(rho, delta):
    rho = np.asarray(rho, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    return dpc.PointStats(rho=rho, delta=delta, gamma=rho * delta,
                          nearest_higher=np.full(rho.shape, -1, dtype=np.intp))


class TestSelectCenters:
    def test_fixed_top_two(self):
        stats = stats_from([1.0, 1.0, 0.0], [0.9, 0.1, 0.8])
        assert dpc.select_centers(stats, dpc.FixedCenters(2)).tolist() == [0, 1]

    def test_fixed_k_too_large(self):
        stats = stats_from([1.0], [1.0])
        with pytest.raises(ParamError):
            dpc.select_centers(stats, dpc.FixedCenters(2))

    def test_fixed_k_below_one(self):
        with pytest.raises(ParamError):
            dpc.FixedCenters(0)

    def test_jump_ratio_must_exceed_one(self):
        with pytest.raises(ParamError):
            dpc.GammaJump(1.0)

    def test_jump_takes_prefix_before_drop(self):
        stats = stats_from([1.0, 1.0, 1.0, 1.0], [5.0, 4.8, 0.3, 0.2])
        centers = dpc.select_centers(stats, dpc.GammaJump(3.0))
        assert centers.tolist() == [0, 1]

    def test_jump_with_zero_tail(self):
        stats = stats_from([1.0, 0.0, 0.0], [5.0, 1.0, 1.0])
        assert dpc.select_centers(stats, dpc.GammaJump(3.0)).tolist() == [0]

    def test_all_equal_falls_back_with_warning(self):
        stats = stats_from([1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
        with pytest.warns(UserWarning):
            centers = dpc.select_centers(stats, dpc.GammaJump(3.0))
        assert centers.tolist() == [0]

    def test_ties_break_by_index(self):
        stats = stats_from([1.0, 1.0, 1.0], [2.0, 2.0, 0.1])
        assert dpc.select_centers(stats, dpc.FixedCenters(2)).tolist() == [0, 1]


class TestAssignPoints:
    def test_nearer_center_wins(self):
        dm = DistanceMatrix.from_1d([1.0, -1.0, 0.4])
        model = dpc.assign_points(dm, [0, 1], "nearest_center")
        assert model.assignment.tolist() == [0, 1, 0]
        assert model.sizes.tolist() == [2, 1]

    def test_centers_self_assigned(self):
        rng = np.random.default_rng(3)
        dm = DistanceMatrix.from_1d(rng.uniform(-3, 3, 50))
        centers = [7, 21, 40]
        model = dpc.assign_points(dm, centers, "nearest_center")
        for pos, center in enumerate(centers):
            assert model.assignment[center] == pos

    def test_equidistant_tie_goes_to_earlier_center(self):
        dm = DistanceMatrix.from_1d([1.0, -1.0, 0.0])
        model = dpc.assign_points(dm, [0, 1], "nearest_center")
        assert model.assignment[2] == 0
        model = dpc.assign_points(dm, [1, 0], "nearest_center")
        assert model.assignment[2] == 0  # position 0 now holds center index 1

    def test_duplicate_centers_rejected(self, dm3):
        with pytest.raises(ParamError):
            dpc.assign_points(dm3, [1, 1], "nearest_center")

    def test_empty_centers_rejected(self, dm3):
        with pytest.raises(ParamError):
            dpc.assign_points(dm3, [], "nearest_center")

    def test_unknown_rule(self, dm3):
        with pytest.raises(ParamError):
            dpc.assign_points(dm3, [0], "closest")

    def test_nearest_higher_rule_requires_array(self, dm3):
        with pytest.raises(ParamError):
            dpc.assign_points(dm3, [0], "nearest_higher_neighbor")

    def test_nearest_higher_rule_matches_density_order_walk(self):
        rng = np.random.default_rng(4)
        vals = rng.uniform(-3, 3, 60)
        dm = DistanceMatrix.from_1d(vals)
        d_c = dpc.select_dc(dm, dpc.DensityParams())
        stats = dpc.point_stats(dm, d_c)
        centers = dpc.select_centers(stats, dpc.FixedCenters(3))
        model = dpc.assign_points(dm, centers, "nearest_higher_neighbor",
                                  stats.nearest_higher)
        # reference: walk points in density order, inheriting labels
        order = dpc.density_order(stats.rho)
        labels = {int(c): pos for pos, c in enumerate(centers)}
        for i in order:
            i = int(i)
            if i not in labels:
                labels[i] = labels[int(stats.nearest_higher[i])]
        assert model.assignment.tolist() == [labels[i] for i in range(dm.n)]
        assert model.sizes.sum() == dm.n

    def test_partition_properties_random(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            vals = rng.uniform(-3, 3, int(rng.integers(10, 80)))
            dm = DistanceMatrix.from_1d(vals)
            k = int(rng.integers(1, 5))
            centers = rng.choice(dm.n, size=k, replace=False)
            model = dpc.assign_points(dm, centers, "nearest_center")
            assert model.sizes.sum() == dm.n
            assert model.assignment.min() >= 0
            assert model.assignment.max() < k


class TestClusterDistances:
    def test_matches_oracle_end_to_end(self):
        rng = np.random.default_rng(6)
        vals = [float(v) for v in rng.uniform(-3, 3, 70)]
        result = dpc.cluster_distances(
            DistanceMatrix.from_1d(vals), dpc.DensityParams(), dpc.FixedCenters(3)
        )
        want = oracle.cluster_pipeline(vals, t=0.02, k=3)
        assert result.d_c == want["d_c"]
        assert result.stats.rho.tolist() == want["rho"]
        assert result.model.centers.tolist() == want["centers"]
        assert result.model.assignment.tolist() == want["assignment"]
        assert result.model.sizes.tolist() == want["sizes"]

    def test_deterministic_bitwise(self):
        rng = np.random.default_rng(7)
        vals = rng.uniform(-3, 3, 90)
        dm = DistanceMatrix.from_1d(vals)
        a = dpc.cluster_distances(dm, dpc.DensityParams(kernel="gaussian"), dpc.FixedCenters(4))
        b = dpc.cluster_distances(dm, dpc.DensityParams(kernel="gaussian"), dpc.FixedCenters(4))
        assert np.array_equal(a.stats.rho, b.stats.rho)
        assert np.array_equal(a.stats.delta, b.stats.delta)
        assert np.array_equal(a.stats.gamma, b.stats.gamma)
        assert np.array_equal(a.model.assignment, b.model.assignment)


class TestDecisionGraph:
    def test_rows_from_worked_example(self, dm3):
        stats = dpc.point_stats(dm3, 0.2, "cutoff")
        rows = dpc.decision_graph_data(stats, None)
        assert rows == [
            (0, 1.0, 0.9, 0.9, -1),
            (1, 1.0, 0.1, 0.1, -1),
            (2, 0.0, 0.8, 0.0, -1),
        ]

    def test_model_fills_cluster_column(self, dm3):
        stats = dpc.point_stats(dm3, 0.2, "cutoff")
        model = dpc.assign_points(dm3, [0], "nearest_center")
        rows = dpc.decision_graph_data(stats, model)
        assert [r[4] for r in rows] == [0, 0, 0]

    def test_two_seeded_modes_top_gamma(self):
        # synthetic analog of the 28-point demonstration: two tight groups,
        # whose seeds must own the top-2 gamma
        rng = np.random.default_rng(28)
        group_a = -0.5 + rng.uniform(-0.01, 0.01, 14)
        group_b = 0.5 + rng.uniform(-0.01, 0.01, 14)
        vals = np.concatenate([group_a, group_b])
        dm = DistanceMatrix.from_1d(vals)
        d_c = dpc.select_dc(dm, dpc.DensityParams())
        stats = dpc.point_stats(dm, d_c)
        top2 = np.argsort(-stats.gamma, kind="stable")[:2]
        sides = {0 if vals[i] < 0 else 1 for i in top2}
        assert sides == {0, 1}

    def test_csv_format(self, dm3):
        stats = dpc.point_stats(dm3, 0.2, "cutoff")
        text = dpc.decision_csv_text(dpc.decision_graph_data(stats, None))
        lines = text.splitlines()
        assert lines[0] == "id,rho,delta,gamma,cluster"
        assert lines[1] == "0,1.000000,0.900000,0.900000,-1"
        assert len(lines) == 4


class TestModelJson:
    def test_keys_and_values(self, dm3):
        model = dpc.assign_points(dm3, [0, 2], "nearest_center")
        text = dpc.model_json_text(model, kernel="cutoff", t=0.02, d_c=0.1,
                                   rule="nearest_center")
        payload = json.loads(text)
        assert list(payload) == ["centers", "assignment", "sizes", "params"]
        assert payload["centers"] == [0, 2]
        assert payload["assignment"] == [0, 0, 1]
        assert payload["sizes"] == [2, 1]
        assert payload["params"] == {
            "kernel": "cutoff", "t": 0.02, "d_c": 0.1, "rule": "nearest_center",
        }


class TestScalingInvariance:
    def test_scale_by_positive_constant(self):
        rng = np.random.default_rng(8)
        vals = rng.uniform(-3, 3, 120)
        scale = 2.5
        base = dpc.cluster_distances(DistanceMatrix.from_1d(vals),
                                     dpc.DensityParams(), dpc.FixedCenters(3))
        scaled = dpc.cluster_distances(DistanceMatrix.from_1d(vals * scale),
                                       dpc.DensityParams(), dpc.FixedCenters(3))
        assert np.array_equal(base.stats.rho, scaled.stats.rho)
        assert np.array_equal(base.model.centers, scaled.model.centers)
        assert np.array_equal(base.model.assignment, scaled.model.assignment)
        np.testing.assert_allclose(scaled.stats.delta, base.stats.delta * scale, rtol=1e-12)
        np.testing.assert_allclose(scaled.stats.gamma, base.stats.gamma * scale, rtol=1e-12)
