
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helixinfo.entropy import InformationValue, info_of_message
from helixinfo.errors import (
    ConfigurationError,
    ConsistencyError,
    DegenerateDistributionError,
    ValidationError,
)
from helixinfo.overlap import CountVector
from helixinfo.systemness import (
    SMOOTHING_FLOOR,
    SeriesFrame,
    SystemnessResult,
    Verdict,
    admissible_start_years,
    best_start_prediction,
    observed_distribution,
    predict_markov,
    predict_timeseries,
    scan_start_years,
    systemness_test,
    transmission_series,
    trend_fit,
)
from oracles import closed_form_ols

# Frozen from tests/oracles.py: closed-form OLS over the per-year brute-force T, bits per year.
TABLE5_CUBE_SLOPE = -1.8283271336099277e-06
TABLE5_CLOSED7_SLOPE = 0.004391743079072007


def vector(u1=0, i1=0, g1=0, ui1=0, ug1=0, ig1=0, uig=0, year=None):
    """CountVector from exclusive cell counts."""
    return CountVector(
        u=u1 + ui1 + ug1 + uig, i=i1 + ui1 + ig1 + uig, g=g1 + ug1 + ig1 + uig,
        ui=ui1 + uig, ug=ug1 + uig, ig=ig1 + uig, uig=uig, year=year,
    )


def pair_frame(rows, start=2000):
    """Three-category frame from (ui, ug, ig) exclusive counts per year."""
    return SeriesFrame.from_vectors(
        [vector(ui1=a, ug1=b, ig1=c, year=start + k) for k, (a, b, c) in enumerate(rows)], "three"
    )


def seven_frame(rows, start=2000, mode="seven"):
    return SeriesFrame.from_vectors([vector(*cells, year=start + k) for k, cells in enumerate(rows)], mode)


class TestObservedDistribution:
    def test_seven(self, hand_vector):
        frame = SeriesFrame((1,), (hand_vector,))
        d = observed_distribution(frame, 1)
        assert d.probs == pytest.approx([c / 200 for c in (70, 55, 40, 15, 10, 5, 5)], abs=1e-15)
        assert d.labels == ("U", "I", "G", "UI", "UG", "IG", "UIG")

    def test_three(self, hand_vector):
        frame = SeriesFrame((1,), (hand_vector,), "three")
        assert observed_distribution(frame, 1).probs == pytest.approx((0.5, 1 / 3, 1 / 6), abs=1e-15)

    def test_single_category(self):
        frame = seven_frame([(0, 0, 0, 0, 9, 0, 0)])
        assert observed_distribution(frame, 2000).probs == (0, 0, 0, 0, 1.0, 0, 0)

    def test_all_zero(self):
        frame = pair_frame([(0, 0, 0)])
        with pytest.raises(DegenerateDistributionError):
            observed_distribution(frame, 2000)

    def test_strict_rejects_forced_negative(self):
        bad = CountVector(u=10, i=8, g=8, ui=8, ug=8, ig=0, uig=0, year=2000)
        frame = SeriesFrame.from_vectors([bad])
        with pytest.raises(ConsistencyError):
            observed_distribution(frame, 2000)
        assert observed_distribution(frame, 2000, "clamp").probs[0] == 0.0

    def test_missing_year(self, hand_vector):
        with pytest.raises(ValidationError):
            observed_distribution(SeriesFrame((1,), (hand_vector,)), 2)

    def test_frame_validation(self, hand_vector):
        with pytest.raises(ValidationError):
            SeriesFrame((2, 1), (hand_vector, hand_vector))
        with pytest.raises(ConfigurationError):
            SeriesFrame((1,), (hand_vector,), "five")


class TestPredictMarkov:
    def test_previous_year_verbatim(self, table5):
        for year in table5.years[1:]:
            assert predict_markov(table5, year) == observed_distribution(table5, year - 1)

    def test_constant_series(self):
        frame = pair_frame([(3, 2, 1)] * 3)
        assert info_of_message(observed_distribution(frame, 2002), predict_markov(frame, 2002)).bits == 0.0

    def test_missing_previous(self, table5):
        with pytest.raises(ValidationError, match="1992"):
            predict_markov(table5, 1993)


class TestPredictTimeseries:
    def test_constant(self):
        frame = pair_frame([(3, 2, 1)] * 4)
        assert predict_timeseries(frame, 2003, 2000).probs == pytest.approx((0.5, 1 / 3, 1 / 6), abs=1e-12)

    def test_exact_linear_two_shares(self):
        # 2 live categories; the third is held at zero and floored
        frame = pair_frame([(2, 8, 0), (3, 7, 0), (4, 6, 0), (5, 5, 0)])
        d = predict_timeseries(frame, 2003, 2000)
        assert d.probs == pytest.approx((0.5, 0.5, 0.0), abs=1e-5)

    def test_exact_linear_three_shares(self):
        frame = pair_frame([(2, 3, 5), (3, 3, 4), (4, 3, 3), (5, 3, 2)])
        d = predict_timeseries(frame, 2003, 2000)
        assert d.probs == pytest.approx((0.5, 0.3, 0.2), abs=1e-12)
        assert info_of_message(observed_distribution(frame, 2003), d).bits == pytest.approx(0, abs=1e-12)

    def test_floor(self):
        # shares of the first category: 0.10, 0.06, 0.02 -> -0.02 next year
        frame = pair_frame([(10, 45, 45), (6, 47, 47), (2, 49, 49), (1, 49, 50)])
        d = predict_timeseries(frame, 2003, 2000)
        # OLS on the other two: 0.45, 0.47, 0.49 -> 0.51 each
        total = SMOOTHING_FLOOR + 0.51 + 0.51
        assert d.probs[0] == pytest.approx(SMOOTHING_FLOOR / total, rel=1e-9)
        assert d.probs[1] == pytest.approx(0.51 / total, rel=1e-9)
        assert sum(d.probs) == pytest.approx(1.0, abs=1e-12)

    def test_loglinear(self):
        frame = pair_frame([(1, 1, 1), (2, 1, 1), (4, 1, 1), (8, 1, 1)])
        d = predict_timeseries(frame, 2003, 2000, method="loglinear", basis="counts")
        assert d.probs == pytest.approx((0.8, 0.1, 0.1), abs=1e-12)

    def test_short_window(self, table5):
        with pytest.raises(ValidationError, match="fewer than 2"):
            predict_timeseries(table5, 2001, 2000)

    def test_gap_in_window(self):
        frame = SeriesFrame.from_vectors([vector(ui1=1, ug1=1, ig1=1, year=y) for y in (2000, 2002, 2003)], "three")
        with pytest.raises(ValidationError, match="lacks"):
            predict_timeseries(frame, 2003, 2000)

    def test_unknown_method(self, table5):
        with pytest.raises(ConfigurationError):
            predict_timeseries(table5, 2001, 1993, method="spline")
        with pytest.raises(ConfigurationError):
            predict_timeseries(table5, 2001, 1993, basis="logits")


class TestBestStart:
    def test_perfect_line_picks_earliest(self):
        frame = pair_frame([(2, 3, 5), (3, 3, 4), (4, 3, 3), (5, 3, 2)])
        _, start = best_start_prediction(frame, 2003)
        assert start == 2000
        assert all(info.bits == pytest.approx(0, abs=1e-12) for _, info in scan_start_years(frame, 2003))

    def test_regime_break(self):
        # flat until 2003, then a clean linear trend
        rows = [(30, 30, 40)] * 4 + [(34, 30, 36), (38, 30, 32), (42, 30, 28), (46, 30, 24)]
        frame = pair_frame(rows)
        target = 2007
        _, start = best_start_prediction(frame, target)
        scan = scan_start_years(frame, target)
        best_info = min(i.bits for _, i in scan)
        assert start >= 2003
        assert dict(scan)[start].bits == best_info
        assert start == min(s for s, i in scan if i.bits <= best_info + 1e-12)

    def test_two_year_history(self):
        frame = pair_frame([(1, 2, 3), (2, 2, 3), (3, 2, 3)])
        assert admissible_start_years(frame, 2002) == [2000]
        _, start = best_start_prediction(frame, 2002)
        assert start == 2000

    def test_no_history(self):
        frame = pair_frame([(1, 2, 3), (2, 2, 3)])
        with pytest.raises(ValidationError):
            best_start_prediction(frame, 2001)


class TestSystemnessTest:
    @pytest.mark.parametrize("ts, mk, stat, verdict", [
        (2.06, 2.83, -0.77, Verdict.REJECTED),
        (5.93, 5.54, 0.39, Verdict.CORROBORATED),
        (5.06, 4.15, 0.91, Verdict.CORROBORATED),
    ])
    def test_published_pairs(self, ts, mk, stat, verdict):
        r = SystemnessResult.from_values(InformationValue.from_millibits(ts), InformationValue.from_millibits(mk))
        assert round(r.statistic.millibits, 2) == stat
        assert r.verdict is verdict

    def test_identical_is_indeterminate(self):
        v = InformationValue.from_millibits(1.5)
        assert SystemnessResult.from_values(v, v).verdict is Verdict.INDETERMINATE
        near = SystemnessResult.from_values(v, InformationValue.from_millibits(1.504))
        assert near.verdict is Verdict.INDETERMINATE

    def test_homogeneous_frame(self):
        frame = seven_frame([(7, 5, 4, 3, 2, 1, 1)] * 5)
        r = systemness_test(frame, 2004)
        assert r.i_timeseries.bits == pytest.approx(0, abs=1e-12)
        assert r.i_markov.bits == pytest.approx(0, abs=1e-12)
        assert r.verdict is Verdict.INDETERMINATE

    def test_table5_runs(self, table5):
        for mode in ("seven", "four", "three"):
            r = systemness_test(table5.with_mode(mode), 2001)
            assert r.statistic == r.i_timeseries - r.i_markov
            assert r.chosen_start_year in admissible_start_years(table5, 2001)
            assert r.category_mode == mode

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(*[st.integers(1, 500)] * 7), min_size=4, max_size=7))
    def test_statistic_identity(self, rows):
        frame = seven_frame(rows)
        r = systemness_test(frame, frame.years[-1])
        assert r.statistic.bits == r.i_timeseries.bits - r.i_markov.bits


def frames(min_size=4, max_size=7):
    return st.lists(st.tuples(*[st.integers(1, 500)] * 7), min_size=min_size, max_size=max_size)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(frames())
    def test_best_start_minimizes(self, rows):
        frame = seven_frame(rows)
        target = frame.years[-1]
        observed = observed_distribution(frame, target)
        best, _ = best_start_prediction(frame, target)
        best_bits = info_of_message(observed, best).bits
        for start in admissible_start_years(frame, target):
            fixed = info_of_message(observed, predict_timeseries(frame, target, start)).bits
            assert best_bits <= fixed + 1e-12

    @settings(max_examples=40, deadline=None)
    @given(frames(), st.integers(2, 1000))
    def test_scale_invariance(self, rows, factor):
        frame = seven_frame(rows)
        scaled = seven_frame([tuple(c * factor for c in r) for r in rows])
        target = frame.years[-1]
        a = systemness_test(frame, target)
        b = systemness_test(scaled, target)
        assert b.i_timeseries.bits == pytest.approx(a.i_timeseries.bits, abs=1e-9)
        assert b.i_markov.bits == pytest.approx(a.i_markov.bits, abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(frames())
    def test_mode_symmetry(self, rows):
        # the three-mode test on a frame equals the seven-mode test on a frame
        # whose other four cells are zero, up to the smoothing floor
        target = 2000 + len(rows) - 1
        three = seven_frame(rows, mode="three")
        only_pairs = seven_frame([(0, 0, 0, r[3], r[4], r[5], 0) for r in rows], mode="seven")
        a = systemness_test(three, target)
        b = systemness_test(only_pairs, target)
        assert b.i_markov.bits == pytest.approx(a.i_markov.bits, abs=1e-12)
        assert b.i_timeseries.bits == pytest.approx(a.i_timeseries.bits, abs=1e-4)
        assert b.statistic == b.i_timeseries - b.i_markov


class TestTrendFit:
    def test_exact_line(self):
        fit = trend_fit({y: 2 * y + 1 for y in range(5)})
        assert fit.slope == pytest.approx(2)
        assert fit.intercept == pytest.approx(1)
        assert fit.r_squared == pytest.approx(1)

    def test_constant(self):
        fit = trend_fit([(1990, 3.0), (1991, 3.0), (1992, 3.0)])
        assert fit == (0.0, 3.0, 0.0)

    def test_constant_x(self):
        with pytest.raises(ValidationError, match="constant"):
            trend_fit([(2000, 1.0), (2000, 2.0)])

    def test_too_few_points(self):
        with pytest.raises(ValidationError):
            trend_fit({2000: 1.0, 2001: 2.0}, window=(2001, 2005))

    def test_window(self):
        fit = trend_fit({1993: 50.0, 1994: 1.0, 1995: 2.0, 1996: 3.0}, window=(1994, 1996))
        assert fit.slope == pytest.approx(1.0)

    @given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=15))
    def test_matches_closed_form(self, ys):
        pts = list(enumerate(ys, start=1990))
        fit = trend_fit(pts)
        slope, intercept = closed_form_ols([x for x, _ in pts], ys)
        assert fit.slope == pytest.approx(slope, rel=1e-6, abs=1e-6)
        assert 0.0 <= fit.r_squared <= 1.0

    def test_table5_cube_slope(self, table5):
        rows = transmission_series(table5, "cube")
        fit = trend_fit([(r.year, r.t_uig.bits) for r in rows])
        assert fit.slope == pytest.approx(TABLE5_CUBE_SLOPE, abs=1e-12)

    def test_table5_closed7_slope(self, table5):
        rows = transmission_series(table5, "closed7")
        fit = trend_fit([(r.year, r.t_uig.bits) for r in rows])
        assert fit.slope == pytest.approx(TABLE5_CLOSED7_SLOPE, abs=1e-12)
        assert fit.slope > 0
        assert all(r.t_uig.bits < 0 for r in rows)
