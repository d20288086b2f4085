import math

import numpy as np
import pytest

from dimscope import (
    FitRecord,
    InvalidArgumentError,
    PointCloud,
    SizeSchedule,
    fit_dimension,
    fit_power_law,
    sweep_alpha,
)
from dimscope.schweinhart import (
    DegenerateFitError,
    default_schedule,
    fit_from_logs,
    schedule_sizes,
)


class TestSchedules:
    def test_geometric_example(self):
        s = schedule_sizes(100000, 10000, 5)
        assert s.sizes == (10000, 17783, 31623, 56234, 100000)

    def test_powers_of_two(self):
        s = schedule_sizes(32, 2, 5)
        assert s.sizes == (2, 4, 8, 16, 32)

    def test_dedup_after_rounding(self):
        # ratio so small that neighbors collapse
        s = schedule_sizes(12, 10, 5)
        assert s.sizes == sorted(set(s.sizes))
        assert s.sizes[0] == 10 and s.sizes[-1] == 12

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            schedule_sizes(100, 100, 5)
        with pytest.raises(InvalidArgumentError):
            schedule_sizes(100, 10, 4)
        with pytest.raises(InvalidArgumentError):
            SizeSchedule((10, 10, 20))
        with pytest.raises(InvalidArgumentError):
            SizeSchedule((1, 2))
        with pytest.raises(InvalidArgumentError):
            SizeSchedule((2, 4), replicates=0)

    def test_default_schedule_caps_n_min(self):
        s = default_schedule(400)
        assert s.sizes[0] == 100 and s.sizes[-1] == 400


class TestExactPowerLaws:
    @pytest.mark.parametrize("d_true", [2.0, 4.0, 8.0])
    def test_noise_free_recovery(self, d_true):
        sizes = np.array([100, 200, 400, 800, 1600, 3200])
        alpha = 1.0
        e = 3.7 * sizes ** (1 - alpha / d_true)
        rec = fit_power_law(sizes, e, alpha)
        assert rec.d_hat == pytest.approx(d_true, abs=1e-9)
        assert rec.slope == pytest.approx(1 - alpha / d_true, abs=1e-12)
        assert rec.admissible
        assert rec.ci_low == pytest.approx(d_true, abs=1e-6)
        assert rec.ci_high == pytest.approx(d_true, abs=1e-6)

    def test_half_slope_example(self):
        # E = 7 * m^0.5 at alpha 1 -> slope 0.5, d_hat 2, intercept ln 7
        sizes = [10, 100, 1000, 10000, 100000]
        e = [7 * math.sqrt(m) for m in sizes]
        rec = fit_power_law(sizes, e, 1.0)
        assert rec.slope == pytest.approx(0.5, abs=1e-12)
        assert rec.d_hat == pytest.approx(2.0, abs=1e-12)
        assert rec.intercept == pytest.approx(math.log(7), abs=1e-10)
        assert rec.line_ci_rel == pytest.approx(0.0, abs=1e-8)

    def test_alpha_ge_dhat_rejection(self):
        sizes = np.array([100, 200, 400, 800, 1600])
        e = 2.0 * sizes ** (1 - 3.0 / 2.0)  # d_true = 2, alpha = 3
        rec = fit_power_law(sizes, e, 3.0)
        assert rec.d_hat == pytest.approx(2.0, abs=1e-9)
        assert not rec.admissible
        assert rec.rejection_reason == "alpha_ge_dhat"

    def test_uniform_scale_leaves_dimension(self):
        # scaling the cloud by c scales E by c**alpha: slope and d_hat fixed
        sizes = np.array([100, 300, 900, 2700, 8100])
        alpha = 2.0
        e = 1.3 * sizes ** (1 - alpha / 3.0)
        a = fit_power_law(sizes, e, alpha)
        b = fit_power_law(sizes, (5.0**alpha) * e, alpha)
        assert b.slope == pytest.approx(a.slope, abs=1e-12)
        assert b.d_hat == pytest.approx(a.d_hat, abs=1e-9)
        assert b.intercept == pytest.approx(a.intercept + alpha * math.log(5), abs=1e-9)


class TestAdmissibilityReasons:
    x = np.log(np.array([100.0, 200, 400, 800, 1600, 3200]))

    def test_param_ci_rejection(self):
        # near-zero slope with mild noise: slope interval is wide relative
        # to the slope, while the fitted line itself is well determined
        g = np.random.default_rng(0)
        y = 10.0 + 0.02 * self.x + 0.01 * g.standard_normal(self.x.size)
        rec = fit_from_logs(self.x, y, alpha=1.0, gamma=0.1)
        assert rec.rejection_reason == "param_ci"

    def test_line_ci_rejection(self):
        # fitted values near zero blow up the relative mean-response band
        g = np.random.default_rng(1)
        y = 0.001 + 0.5 * (self.x - self.x.mean()) + 0.3 * g.standard_normal(self.x.size)
        rec = fit_from_logs(self.x, y, alpha=1.0, gamma=0.1)
        assert rec.rejection_reason == "line_ci"

    def test_slope_ge_one_no_dimension(self):
        y = 1.2 * self.x
        rec = fit_from_logs(self.x, y, alpha=1.0, gamma=0.1)
        assert rec.d_hat is None
        assert not rec.admissible

    def test_degenerate_constant(self):
        with pytest.raises(DegenerateFitError):
            fit_from_logs(self.x, np.zeros(self.x.size) + 4.0, alpha=1.0, gamma=0.1)

    def test_nonpositive_e(self):
        with pytest.raises(DegenerateFitError):
            fit_power_law([10, 20, 40, 80, 160], [1, 2, -3, 4, 5], 1.0)

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            fit_from_logs(self.x, self.x, alpha=0.0, gamma=0.1)
        with pytest.raises(InvalidArgumentError):
            fit_from_logs(self.x, self.x, alpha=1.0, gamma=1.5)
        with pytest.raises(InvalidArgumentError):
            fit_from_logs(self.x[:2], self.x[:2], alpha=1.0, gamma=0.1)


@pytest.fixture(scope="module")
def square_cloud():
    g = np.random.default_rng(99)
    return PointCloud(g.random((4000, 2)))


class TestOnClouds:
    def test_uniform_square(self, square_cloud):
        sched = SizeSchedule((250, 500, 1000, 2000, 4000), replicates=3)
        rec = fit_dimension(square_cloud, 1.0, sched, seed=5)
        assert rec.d_hat == pytest.approx(2.0, abs=0.25)

    def test_deterministic(self, square_cloud):
        sched = SizeSchedule((250, 500, 1000, 2000, 4000), replicates=2)
        a = fit_dimension(square_cloud, 1.0, sched, seed=3)
        b = fit_dimension(square_cloud, 1.0, sched, seed=3)
        assert a == b

    def test_requires_five_sizes(self, square_cloud):
        with pytest.raises(InvalidArgumentError):
            fit_dimension(square_cloud, 1.0, SizeSchedule((100, 200, 400)))

    def test_size_exceeding_n(self, square_cloud):
        with pytest.raises(InvalidArgumentError):
            fit_dimension(square_cloud, 1.0, SizeSchedule((100, 200, 400, 800, 5000)))


class TestSweep:
    def test_matches_single_fits(self, square_cloud):
        sched = SizeSchedule((250, 500, 1000, 2000, 4000), replicates=2)
        rep = sweep_alpha(
            square_cloud, {"start": 1.0, "stop": 3.0, "step": 1.0}, sched, seed=7
        )
        assert [r.alpha for r in rep.records] == [1.0, 2.0, 3.0]
        for r in rep.records:
            single = fit_dimension(square_cloud, r.alpha, sched, seed=7)
            assert r == single

    def test_summary_fields(self, square_cloud):
        sched = SizeSchedule((250, 500, 1000, 2000, 4000), replicates=2)
        rep = sweep_alpha(
            square_cloud, {"start": 0.5, "stop": 1.5, "step": 0.5}, sched, seed=7
        )
        adm = [r for r in rep.records if r.admissible]
        if adm:
            assert rep.d_min == min(r.d_hat for r in adm)
            assert rep.d_max == max(r.d_hat for r in adm)
            for lo, hi in rep.admissible_alpha:
                assert lo <= hi
        else:
            assert rep.d_min is None and rep.d_max is None

    def test_grid_validation(self, square_cloud):
        with pytest.raises(InvalidArgumentError):
            sweep_alpha(square_cloud, {"start": 0.0, "stop": 1.0, "step": 0.1})
        with pytest.raises(InvalidArgumentError):
            sweep_alpha(square_cloud, {"start": 2.0, "stop": 1.0, "step": 0.1})

    def test_report_round_trips_to_dict(self, square_cloud):
        sched = SizeSchedule((250, 500, 1000, 2000, 4000), replicates=2)
        rep = sweep_alpha(
            square_cloud, {"start": 1.0, "stop": 2.0, "step": 1.0}, sched, seed=1
        )
        d = rep.to_dict()
        assert d["sizes"] == [250, 500, 1000, 2000, 4000]
        assert len(d["records"]) == 2
        assert isinstance(d["records"][0]["admissible"], bool)

    def test_record_to_dict_handles_nonfinite(self):
        rec = FitRecord(
            alpha=1.0,
            d_hat=None,
            slope=math.nan,
            intercept=math.nan,
            ci_low=None,
            ci_high=None,
            line_ci_rel=math.inf,
            param_ci_rel=math.inf,
            admissible=False,
            rejection_reason="degenerate",
        )
        d = rec.to_dict()
        assert d["slope"] is None and d["line_ci_rel"] is None
