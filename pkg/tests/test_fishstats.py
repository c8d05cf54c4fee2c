import math

import numpy as np
import pytest

from fishcast import fishstats
from fishcast.fishstats import (
    FishProfile,
    OccurrenceRecord,
    fit_normal,
    fit_profiles,
    livable_range,
    load_occurrences,
    load_profiles,
    normal_cdf,
    normal_pdf,
    qq_points,
    save_profiles,
    transition_probability,
)

HERRING = FishProfile("herring", 10.397, 0.010)
MACKEREL = FishProfile("mackerel", 10.304, 0.119)


class TestFitNormal:
    def test_hand_arithmetic(self):
        # mean 1.5; variance with n-1 denominator: (3*0.25 + 2.25)/3 = 1
        mu, sigma = fit_normal([1, 1, 1, 3])
        assert mu == pytest.approx(1.5)
        assert sigma == pytest.approx(1.0)

    def test_symmetric_samples_recover_center(self):
        c, d = 7.3, 0.9
        mu, _ = fit_normal([c, c + d, c - d])
        assert mu == pytest.approx(c)

    def test_recovers_table_parameters_from_synthetic_draws(self):
        rng = np.random.default_rng(2024)
        samples = rng.normal(10.397, 0.010, 100_000)
        mu, sigma = fit_normal(samples)
        assert abs(mu - 10.397) < 0.001
        assert abs(sigma - 0.010) / 0.010 < 0.05

    def test_too_few_samples(self):
        with pytest.raises(ValueError, match="at least 2"):
            fit_normal([4.2])

    def test_zero_variance(self):
        with pytest.raises(ValueError, match="zero variance"):
            fit_normal([5.0, 5.0, 5.0])


class TestLivableRange:
    def test_herring_band(self):
        lo, hi = livable_range(10.397, 0.010)
        assert round(lo, 3) == 10.377
        assert round(hi, 3) == 10.417

    def test_mackerel_band(self):
        lo, hi = livable_range(10.304, 0.119)
        assert round(lo, 3) == 10.066
        assert round(hi, 3) == 10.542

    def test_standard_normal(self):
        assert livable_range(0, 1) == (-2.0, 2.0)

    def test_rejects_bad_sigma(self):
        with pytest.raises(ValueError):
            livable_range(10.0, 0.0)

    def test_width_is_four_sigma(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            mu = float(rng.uniform(-20, 20))
            sigma = float(rng.uniform(1e-3, 5.0))
            lo, hi = livable_range(mu, sigma)
            assert hi - lo == pytest.approx(4 * sigma)
            assert lo <= mu <= hi


class TestDensities:
    def test_pdf_peak_unit_sigma(self):
        profile = FishProfile("x", 3.0, 1.0)
        assert normal_pdf(3.0, profile) == pytest.approx(0.3989422804014327, abs=1e-12)

    def test_pdf_symmetry(self):
        d = 0.37
        assert normal_pdf(HERRING.mu + d, HERRING) == pytest.approx(
            normal_pdf(HERRING.mu - d, HERRING), rel=1e-12
        )

    def test_herring_peak_density(self):
        assert normal_pdf(HERRING.mu, HERRING) == pytest.approx(39.89422804014327, abs=1e-9)

    def test_cdf_median(self):
        assert normal_cdf(HERRING.mu, HERRING) == pytest.approx(0.5, abs=1e-12)

    def test_cdf_two_sigma_coverage(self):
        cover = normal_cdf(MACKEREL.mu + 2 * MACKEREL.sigma, MACKEREL) - normal_cdf(
            MACKEREL.mu - 2 * MACKEREL.sigma, MACKEREL
        )
        assert cover == pytest.approx(0.9545, abs=1e-4)

    def test_cdf_one_sigma(self):
        assert normal_cdf(HERRING.mu + HERRING.sigma, HERRING) == pytest.approx(
            0.8413447460685429, abs=1e-12
        )

    def test_cdf_monotone(self):
        temps = np.linspace(MACKEREL.mu - 5 * MACKEREL.sigma, MACKEREL.mu + 5 * MACKEREL.sigma, 300)
        values = [normal_cdf(t, MACKEREL) for t in temps]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_pdf_mass_by_quadrature(self):
        # trapezoid integral over +-8 sigma should capture all the mass
        temps = np.linspace(HERRING.mu - 8 * HERRING.sigma, HERRING.mu + 8 * HERRING.sigma, 20001)
        dens = np.array([normal_pdf(t, HERRING) for t in temps])
        assert np.trapezoid(dens, temps) == pytest.approx(1.0, abs=1e-8)


class TestTransitionProbability:
    def test_zero_at_preferred_temp(self):
        assert transition_probability(HERRING.preferred_temp, HERRING) == 0.0

    def test_band_edge_matches_coverage(self):
        p = transition_probability(HERRING.mu - 2 * HERRING.sigma, HERRING)
        assert p == pytest.approx(0.9545, abs=1e-4)

    def test_far_temperature_saturates(self):
        assert transition_probability(-1e6, HERRING) == pytest.approx(1.0)
        assert transition_probability(1e6, HERRING) == pytest.approx(1.0)

    def test_symmetry_about_mean(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            d = float(rng.uniform(0, 6 * MACKEREL.sigma))
            assert transition_probability(MACKEREL.mu + d, MACKEREL) == pytest.approx(
                transition_probability(MACKEREL.mu - d, MACKEREL), abs=1e-12
            )

    def test_monotone_in_distance_from_preferred(self):
        gaps = np.linspace(0, 8 * HERRING.sigma, 200)
        values = [transition_probability(HERRING.mu + g, HERRING) for g in gaps]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert all(0.0 <= v <= 1.0 for v in values)

    def test_matches_quadrature_oracle(self):
        # numerator of the rule integrated numerically, denominator = half mass
        quad = pytest.importorskip("scipy.integrate")
        rng = np.random.default_rng(5)
        for profile in (HERRING, MACKEREL):
            temps = rng.uniform(profile.mu - 6 * profile.sigma,
                                profile.mu + 6 * profile.sigma, 50)
            for temp in temps:
                lo, hi = sorted((temp, profile.preferred_temp))
                numer, _ = quad.quad(lambda u: normal_pdf(u, profile), lo, hi,
                                     epsabs=1e-13, limit=200)
                assert transition_probability(temp, profile) == pytest.approx(
                    numer / 0.5, abs=1e-9
                )


class TestQqPoints:
    def test_exact_normal_quantiles_sit_on_diagonal(self):
        # samples constructed as the quantiles themselves; only the finite-n
        # wobble of the refitted sigma separates the points from the diagonal
        from statistics import NormalDist

        dist = NormalDist(0.0, 1.0)
        devs = {}
        for n in (500, 50_000):
            sample = [dist.inv_cdf((i - 0.5) / n) for i in range(1, n + 1)]
            points, max_dev = qq_points(sample)
            np.testing.assert_allclose(points[:, 0], points[:, 1], atol=0.01)
            devs[n] = max_dev
        assert devs[500] < 5e-3
        assert devs[50_000] < devs[500] / 5

    def test_normal_sample_deviation_shrinks_with_n(self):
        rng = np.random.default_rng(99)
        _, dev_small = qq_points(rng.normal(10, 2, 200))
        _, dev_large = qq_points(rng.normal(10, 2, 50_000))
        assert dev_large < dev_small

    def test_uniform_sample_is_visibly_non_normal(self):
        rng = np.random.default_rng(123)
        _, max_dev = qq_points(rng.uniform(0, 1, 10_000))
        assert max_dev > 0.05

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            qq_points([1.0, 2.0])


class TestProfileIo:
    def test_round_trip(self, tmp_path):
        profiles = {"herring": HERRING, "mackerel": MACKEREL}
        path = tmp_path / "profiles.csv"
        save_profiles(profiles, path)
        loaded = load_profiles(path)
        assert loaded.keys() == profiles.keys()
        for name in profiles:
            assert loaded[name].mu == profiles[name].mu
            assert loaded[name].sigma == profiles[name].sigma

    def test_profile_rejects_bad_sigma(self):
        with pytest.raises(ValueError):
            FishProfile("x", 10.0, -1.0)

    def test_occurrence_loading_and_fit(self, tmp_path):
        path = tmp_path / "occ.csv"
        rng = np.random.default_rng(0)
        with open(path, "w") as fh:
            fh.write("species,sst_c\n")
            for t in rng.normal(10.397, 0.010, 5000):
                fh.write(f"herring,{float(t)!r}\n")
        records = load_occurrences(path)
        assert len(records) == 5000
        profiles = fit_profiles(records)
        lo, hi = profiles["herring"].livable
        assert abs(lo - 10.377) < 0.003
        assert abs(hi - 10.417) < 0.003

    def test_occurrence_bad_row_names_line(self, tmp_path):
        path = tmp_path / "occ.csv"
        path.write_text("species,sst_c\nherring,10.4\nherring,oops\n")
        with pytest.raises(ValueError, match=":3"):
            load_occurrences(path)

    def test_occurrence_record_requires_finite(self):
        with pytest.raises(ValueError):
            OccurrenceRecord("herring", math.inf)
