import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from guardzone.pointprocess import (
    Point,
    PointPattern,
    Window,
    carve_php,
    contact_distance_mass,
    contact_distance_pdf,
    nearest_distance,
    sample_ppp,
    substream,
)


class TestSubstream:
    def test_same_key_same_stream(self):
        a = substream(123, 2, 7).random(5)
        b = substream(123, 2, 7).random(5)
        assert np.array_equal(a, b)

    def test_distinct_keys_decorrelate(self):
        a = substream(123, 2, 7).random(5)
        b = substream(123, 2, 8).random(5)
        c = substream(124, 2, 7).random(5)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestWindow:
    def test_geometry(self):
        w = Window(5.0)
        assert w.side == 10.0
        assert w.area == 100.0

    def test_invalid_extent(self):
        with pytest.raises(ValueError):
            Window(0.0)

    def test_wrap_metric_short_cuts_across_boundary(self):
        w = Window(5.0, wrap=True)
        d = w.distance(np.array([-4.9, 0.0]), np.array([[4.9, 0.0]]))
        assert d[0] == pytest.approx(0.2, abs=1e-12)

    def test_plain_metric_does_not_wrap(self):
        w = Window(5.0, wrap=False)
        d = w.distance(np.array([-4.9, 0.0]), np.array([[4.9, 0.0]]))
        assert d[0] == pytest.approx(9.8, abs=1e-12)

    @given(
        x1=st.floats(-5.0, 5.0), y1=st.floats(-5.0, 5.0),
        x2=st.floats(-5.0, 5.0), y2=st.floats(-5.0, 5.0),
    )
    def test_wrap_distance_bounded_by_half_diagonal(self, x1, y1, x2, y2):
        w = Window(5.0, wrap=True)
        d = float(w.distance(np.array([x1, y1]), np.array([[x2, y2]]))[0])
        assert 0.0 <= d <= math.hypot(5.0, 5.0) + 1e-12


class TestSamplePpp:
    def test_deterministic_under_seed(self):
        w = Window(8.0)
        a = sample_ppp(0.7, w, substream(5, 0))
        b = sample_ppp(0.7, w, substream(5, 0))
        assert np.array_equal(a.xy, b.xy)

    def test_points_inside_window(self):
        w = Window(3.0)
        p = sample_ppp(2.0, w, substream(11, 0))
        assert np.all(np.abs(p.xy) <= 3.0)

    def test_mean_count_matches_intensity(self):
        w = Window(5.0)
        counts = [sample_ppp(0.5, w, substream(77, i)).n for i in range(400)]
        mean = w.area * 0.5
        # Poisson mean 50, sample of 400: allow 4 standard errors
        tol = 4.0 * math.sqrt(mean / 400)
        assert abs(np.mean(counts) - mean) < tol

    def test_zero_density_gives_empty_pattern(self):
        p = sample_ppp(0.0, Window(5.0), substream(3, 0))
        assert p.n == 0
        assert p.xy.shape == (0, 2)


def _brute_active_mask(baseline, holes, r_g):
    if holes.n == 0 or r_g == 0.0:
        return np.ones(baseline.n, dtype=bool)
    mask = np.ones(baseline.n, dtype=bool)
    for i in range(baseline.n):
        d = baseline.window.distance(baseline.xy[i], holes.xy)
        if d.size and d.min() < r_g:
            mask[i] = False
    return mask


class TestCarvePhp:
    @pytest.mark.parametrize("r_g", [0.0, 0.2, 0.7, 2.5])
    def test_matches_brute_force(self, r_g):
        w = Window(5.0, wrap=True)
        for i in range(20):
            pts = sample_ppp(1.0, w, substream(31, 0, i))
            ers = sample_ppp(0.6, w, substream(31, 1, i))
            carved = carve_php(pts, ers, r_g)
            assert np.array_equal(carved.active_mask,
                                  _brute_active_mask(pts, ers, r_g))

    def test_geometry_is_preserved(self):
        w = Window(5.0, wrap=True)
        pts = sample_ppp(1.0, w, substream(9, 0))
        carved = carve_php(pts, sample_ppp(0.5, w, substream(9, 1)), 0.4)
        assert np.array_equal(carved.xy, pts.xy)

    def test_empirical_retention(self):
        # active fraction should match exp(-lambda_s * pi * r_g^2)
        w = Window(6.0, wrap=True)
        r_g, lam_s = 0.4, 0.6
        kept = total = 0
        for i in range(150):
            pts = sample_ppp(1.0, w, substream(101, 0, i))
            ers = sample_ppp(lam_s, w, substream(101, 1, i))
            mask = carve_php(pts, ers, r_g).active_mask
            kept += int(mask.sum())
            total += mask.size
        expected = math.exp(-lam_s * math.pi * r_g ** 2)
        se = math.sqrt(expected * (1 - expected) / total)
        # points are spatially correlated, so pad the binomial error
        assert abs(kept / total - expected) < 6 * se

    def test_negative_radius_rejected(self):
        w = Window(5.0)
        pts = sample_ppp(1.0, w, substream(1, 0))
        with pytest.raises(ValueError):
            carve_php(pts, pts, -0.1)


class TestNearestDistance:
    def test_empty_pattern_returns_none(self):
        empty = PointPattern(Window(5.0), np.empty((0, 2)))
        assert nearest_distance(Point(0.0, 0.0), empty) is None

    def test_matches_manual_minimum(self):
        w = Window(5.0, wrap=True)
        p = sample_ppp(0.8, w, substream(42, 0))
        got = nearest_distance(Point(0.3, -0.2), p)
        want = w.distance(np.array([0.3, -0.2]), p.xy).min()
        assert got == pytest.approx(want, rel=1e-15)

    def test_active_only_restricts_candidates(self):
        w = Window(5.0, wrap=True)
        xy = np.array([[0.1, 0.0], [2.0, 0.0]])
        pat = PointPattern(w, xy, active_mask=np.array([False, True]))
        assert nearest_distance(Point(0, 0), pat) == pytest.approx(0.1)
        assert nearest_distance(Point(0, 0), pat,
                                active_only=True) == pytest.approx(2.0)


class TestContactDistance:
    def test_zero_below_guard_radius(self):
        r = np.linspace(0.0, 2.0, 41)
        pdf = contact_distance_pdf(r, 0.8, r_g=0.5)
        assert np.all(pdf[r < 0.5] == 0.0)
        assert np.all(pdf[r >= 0.5] >= 0.0)

    def test_exact_normalization_without_hole(self):
        assert contact_distance_mass(0.7, 0.0) == pytest.approx(1.0, abs=1e-9)

    def test_mass_excess_closed_form(self):
        lt, r_g = 0.9, 0.6
        excess = contact_distance_mass(lt, r_g) - 1.0
        assert excess == pytest.approx(math.pi * r_g * math.sqrt(lt), rel=1e-6)

    def test_zero_density_has_zero_mass(self):
        assert contact_distance_mass(0.0, 0.3) == 0.0

    @given(
        lt=st.floats(min_value=0.01, max_value=5.0),
        r_g=st.floats(min_value=0.0, max_value=2.0),
    )
    def test_mass_never_below_one(self, lt, r_g):
        assert contact_distance_mass(lt, r_g) >= 1.0 - 1e-9

    def test_rejects_negative_arguments(self):
        with pytest.raises(ValueError):
            contact_distance_pdf(1.0, -0.5)
        with pytest.raises(ValueError):
            contact_distance_pdf(1.0, 0.5, r_g=-1.0)
