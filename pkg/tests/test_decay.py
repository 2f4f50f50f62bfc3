import io
import math

import numpy as np
import pytest

from resolab import (BreitWigner, bw_amplitude, nogo_report, quad_oscillatory,
                     quad_real_line, survival_full, truncated_survival,
                     write_survival_csv)


class TestAmplitude:
    @pytest.mark.parametrize("c,alpha", [(0.0, 1.0), (1.0, 0.1), (5.0, 0.01)])
    def test_full_line_normalization(self, c, alpha):
        bw = BreitWigner(c, alpha)
        q, _ = quad_real_line(lambda x: abs(bw.amplitude_value(x)) ** 2)
        assert abs(q - 1.0) < 1e-8

    def test_rational_form_matches(self):
        bw = BreitWigner(1.0, 0.1)
        e = bw_amplitude(bw)
        for x in (-2.0, 0.9, 3.3):
            assert e(x) == pytest.approx(bw.amplitude_value(x))

    def test_zeta(self):
        assert BreitWigner(2.0, 0.5).zeta == 2.0 - 0.5j

    def test_half_line_norm(self):
        bw = BreitWigner(1.0, 0.1)
        q, _ = quad_real_line(lambda x: abs(bw.amplitude_value(x)) ** 2 if x > 0 else 0.0)
        assert abs(q - bw.half_line_norm_sq) < 1e-6


class TestSurvivalFull:
    def test_matches_oscillatory_quadrature(self):
        bw = BreitWigner(1.0, 0.1)
        for t in (0.5, 1.0, 5.0, 10.0):
            q = quad_oscillatory(lambda x: abs(bw.amplitude_value(x)) ** 2, t)
            assert abs(q - survival_full(bw, t)) < 1e-6

    def test_semigroup_law(self):
        bw = BreitWigner(1.0, 0.1)
        for t1, t2 in ((0.5, 0.7), (1.0, 3.0)):
            lhs = survival_full(bw, t1) * survival_full(bw, t2)
            assert abs(lhs - survival_full(bw, t1 + t2)) < 1e-10

    def test_negative_time_conjugate(self):
        bw = BreitWigner(0.5, 0.2)
        assert survival_full(bw, -2.0) == pytest.approx(np.conj(survival_full(bw, 2.0)))


class TestTruncatedSurvival:
    def test_t_zero_is_one(self):
        assert truncated_survival(BreitWigner(1.0, 0.05), 0.0) == pytest.approx(1.0)

    def test_matches_direct_quadrature(self):
        # oracle: half-line oscillatory integral of the truncated density
        bw = BreitWigner(1.0, 0.1)
        dens = lambda x: abs(bw.amplitude_value(x)) ** 2 / bw.half_line_norm_sq
        for t in (0.5, 2.0, 10.0):
            q = quad_oscillatory(lambda x: dens(x), t, half_line=True)
            assert abs(q - truncated_survival(bw, t)) < 1e-7

    def test_early_time_near_exponential(self):
        bw = BreitWigner(1.0, 0.05)
        for t in (1.0, 5.0, 20.0):
            p = abs(truncated_survival(bw, t)) ** 2
            assert p == pytest.approx(math.exp(-2 * bw.alpha * t), rel=0.1)

    def test_late_time_power_law(self):
        bw = BreitWigner(1.0, 0.05)
        p1 = abs(truncated_survival(bw, 2e3)) ** 2
        p2 = abs(truncated_survival(bw, 4e3)) ** 2
        slope = math.log(p2 / p1) / math.log(2.0)
        assert slope == pytest.approx(-2.0, abs=0.05)


class TestNoGo:
    def setup_method(self):
        ts = np.unique(np.concatenate([np.linspace(0.0, 20.0, 21),
                                       np.geomspace(20.0, 1e4, 60)]))
        self.report = nogo_report(BreitWigner(1.0, 0.05), ts)

    def test_verdict(self):
        assert self.report.verdict == "non-exponential"
        assert -2.2 <= self.report.tail_slope <= -1.8

    def test_ratio_divergence(self):
        # survival exceeds every exponential envelope by orders of magnitude
        assert self.report.max_log10_ratio > 6.0

    def test_json(self):
        doc = self.report.to_json()
        assert doc["verdict"] == "non-exponential"
        assert doc["schema_version"] == 1

    def test_csv(self):
        buf = io.StringIO()
        write_survival_csv(self.report, fp=buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "t,ReA,ImA,P,exp_neg2alphat,ratio"
        assert len(lines) == len(self.report.t_grid) + 1
        row = lines[1].split(",")
        assert len(row) == 6


def test_invalid_grid_rejected():
    bw = BreitWigner(1.0, 0.05)
    with pytest.raises(ValueError):
        nogo_report(bw, [0.0, 1.0, 0.5, 2.0])
    with pytest.raises(ValueError):
        nogo_report(bw, [-1.0, 0.0, 1.0, 2.0])
