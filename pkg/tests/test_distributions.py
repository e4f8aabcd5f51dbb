"""Distribution layer: construction, CDFs, confidence bounds, binning."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmab import (
    EmpiricalCdf,
    FiniteDistribution,
    PiecewiseDensity,
    bernoulli_decomposition,
    bin_index,
    bin_value,
    cdf,
    confidence_radius,
    discretize_interval,
    dominant_cdf,
    empirical_update,
    l1_distance,
    make_finite,
    sample,
    substream,
)
from util import bruteforce_max_law, dicts_close, law_as_dict, random_finite

EXACT = 1e-12
# sqrt(3 ln 100 / 200), frozen
RADIUS_100_100 = 0.2628260884878466


class TestMakeFinite:
    def test_basic_construction(self):
        d = make_finite([0.1, 0.5, 0.9], [0.2, 0.3, 0.5])
        assert np.array_equal(d.support, [0.1, 0.5, 0.9])
        assert np.array_equal(d.probs, [0.2, 0.3, 0.5])

    def test_sorts_support(self):
        d = make_finite([0.9, 0.1], [0.6, 0.4])
        assert np.array_equal(d.support, [0.1, 0.9])
        assert np.array_equal(d.probs, [0.4, 0.6])

    def test_merges_duplicates(self):
        d = make_finite([0.5, 0.5, 1.0], [0.2, 0.3, 0.5])
        assert np.array_equal(d.support, [0.5, 1.0])
        assert np.allclose(d.probs, [0.5, 0.5], atol=EXACT)

    def test_drops_zero_masses(self):
        d = make_finite([0.2, 0.4, 0.6], [0.5, 0.0, 0.5])
        assert np.array_equal(d.support, [0.2, 0.6])

    def test_rejects_bad_mass_total(self):
        with pytest.raises(ValueError):
            make_finite([0.5], [0.9])

    def test_rejects_out_of_range_support(self):
        with pytest.raises(ValueError):
            make_finite([1.5], [1.0])
        with pytest.raises(ValueError):
            make_finite([-0.1, 0.5], [0.5, 0.5])

    def test_rejects_negative_mass(self):
        with pytest.raises(ValueError):
            make_finite([0.2, 0.8], [-0.1, 1.1])

    def test_rejects_near_duplicate_distinct_points(self):
        with pytest.raises(ValueError):
            make_finite([0.5, 0.5 + 1e-10], [0.5, 0.5])

    def test_rejects_empty_or_mismatched(self):
        with pytest.raises(ValueError):
            make_finite([], [])
        with pytest.raises(ValueError):
            make_finite([0.5], [0.5, 0.5])

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_canonical_form(self, seed):
        d = random_finite(np.random.default_rng(seed))
        assert np.all(np.diff(d.support) > 0)
        assert np.all(d.probs > 0)
        assert abs(d.probs.sum() - 1.0) <= 1e-9
        assert 0.0 <= d.support[0] and d.support[-1] <= 1.0


class TestFiniteDistribution:
    def test_cdf_staircase(self):
        d = make_finite([0.2, 0.8], [0.3, 0.7])
        assert d.cdf(0.0) == 0.0
        assert d.cdf(0.2) == pytest.approx(0.3, abs=EXACT)
        assert d.cdf(0.5) == pytest.approx(0.3, abs=EXACT)
        assert d.cdf(0.8) == pytest.approx(1.0, abs=EXACT)
        assert d.cdf(1.0) == pytest.approx(1.0, abs=EXACT)

    def test_cdf_vectorized(self):
        d = make_finite([0.2, 0.8], [0.3, 0.7])
        out = d.cdf(np.array([0.0, 0.2, 0.9]))
        assert np.allclose(out, [0.0, 0.3, 1.0], atol=EXACT)

    def test_mean(self):
        d = make_finite([0.2, 0.8], [0.25, 0.75])
        assert d.mean() == pytest.approx(0.65, abs=EXACT)

    def test_inverse_cdf_boundaries(self):
        d = make_finite([0.2, 0.8], [0.3, 0.7])
        assert d.inverse_cdf(0.0) == 0.2
        assert d.inverse_cdf(0.3) == 0.2
        assert d.inverse_cdf(0.3 + 1e-9) == 0.8
        assert d.inverse_cdf(1.0) == 0.8

    def test_module_cdf_validates_range(self):
        d = make_finite([0.5], [1.0])
        with pytest.raises(ValueError):
            cdf(d, 1.2)
        assert cdf(d, 0.5) == 1.0

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_inverse_cdf_is_quantile(self, seed):
        rng = np.random.default_rng(seed)
        d = random_finite(rng)
        u = rng.random()
        x = d.inverse_cdf(u)
        # smallest support point with F(x) >= u
        assert d.cdf(x) >= u - EXACT
        below = d.support[d.support < x - 1e-12]
        if len(below):
            assert d.cdf(float(below[-1])) < u


class TestPiecewiseDensity:
    def test_uniform(self):
        u = PiecewiseDensity([0.0, 1.0], [1.0])
        assert u.cdf(0.25) == pytest.approx(0.25, abs=EXACT)
        assert u.mean() == pytest.approx(0.5, abs=EXACT)
        assert u.inverse_cdf(0.7) == pytest.approx(0.7, abs=EXACT)

    def test_tilted_density(self):
        d = PiecewiseDensity([0.0, 0.5, 1.0], [1.2, 0.8])
        assert d.cdf(0.5) == pytest.approx(0.6, abs=EXACT)
        assert d.cdf(1.0) == pytest.approx(1.0, abs=EXACT)
        # mean = 1.2 * 0.5^2/2 + 0.8 * (1 - 0.5^2)/2
        assert d.mean() == pytest.approx(0.45, abs=EXACT)
        assert d.inverse_cdf(0.6) == pytest.approx(0.5, abs=EXACT)
        assert d.inverse_cdf(0.8) == pytest.approx(0.75, abs=EXACT)

    def test_zero_density_segment(self):
        d = PiecewiseDensity([0.0, 0.5, 1.0], [2.0, 0.0])
        assert d.cdf(0.5) == pytest.approx(1.0, abs=EXACT)
        assert d.inverse_cdf(1.0) == pytest.approx(0.5, abs=EXACT)

    def test_validation(self):
        with pytest.raises(ValueError):
            PiecewiseDensity([0.0, 0.5], [2.0])  # does not end at 1
        with pytest.raises(ValueError):
            PiecewiseDensity([0.0, 0.5, 0.5, 1.0], [1.0, 1.0, 1.0])  # flat step
        with pytest.raises(ValueError):
            PiecewiseDensity([0.0, 1.0], [-1.0])
        with pytest.raises(ValueError):
            PiecewiseDensity([0.0, 1.0], [0.5])  # integrates to 0.5


class TestEmpiricalCdf:
    def test_counts_and_cdf(self):
        e = EmpiricalCdf([0.2, 0.2, 0.8])
        assert e.count == 3
        assert e.cdf(0.1) == 0.0
        assert e.cdf(0.2) == pytest.approx(2 / 3, abs=EXACT)
        assert e.cdf(1.0) == 1.0

    def test_add_validates(self):
        e = EmpiricalCdf()
        with pytest.raises(ValueError):
            e.add(1.5)
        with pytest.raises(ValueError):
            e.add(-0.1)

    def test_empty_cdf_errors(self):
        with pytest.raises(ValueError):
            EmpiricalCdf().cdf(0.5)

    def test_arrays_sorted(self):
        e = EmpiricalCdf([0.9, 0.1, 0.9])
        vals, cum = e.arrays()
        assert np.array_equal(vals, [0.1, 0.9])
        assert np.array_equal(cum, [1.0, 3.0])

    def test_empirical_update_in_place(self):
        e = EmpiricalCdf()
        out = empirical_update(e, 0.4)
        assert out is e and e.count == 1


class TestConfidenceRadius:
    def test_frozen_value(self):
        assert confidence_radius(100, 100) == pytest.approx(RADIUS_100_100, abs=0.0)

    def test_formula(self):
        assert confidence_radius(8, 3) == pytest.approx(math.sqrt(1.5 * math.log(8) / 3), abs=0.0)

    def test_shrinks_with_count(self):
        assert confidence_radius(100, 200) < confidence_radius(100, 100)


class TestDominantCdf:
    def test_frozen_two_point_example(self):
        e = EmpiricalCdf([0.0] * 60 + [1.0] * 40)
        d = dominant_cdf(e, 100)
        assert np.array_equal(d.support, [0.0, 1.0])
        assert d.cdf(0.0) == pytest.approx(0.6 - RADIUS_100_100, abs=0.0)
        assert d.probs[1] == pytest.approx(0.4 + RADIUS_100_100, abs=EXACT)

    def test_total_relocation_when_radius_large(self):
        e = EmpiricalCdf([0.3])
        d = dominant_cdf(e, 2)  # radius > 1
        assert np.array_equal(d.support, [1.0])
        assert d.probs[0] == 1.0

    def test_override_radius(self):
        e = EmpiricalCdf([0.0, 0.0, 1.0, 1.0])
        d = dominant_cdf(e, 2, confidence_radius_override=0.25)
        assert d.cdf(0.0) == pytest.approx(0.25, abs=EXACT)
        assert d.cdf(1.0) == 1.0

    def test_zero_radius_reproduces_empirical(self):
        e = EmpiricalCdf([0.2, 0.4, 0.4, 0.8])
        d = dominant_cdf(e, 2, confidence_radius_override=0.0)
        # the appended point at 1 carries zero mass and is dropped
        assert np.array_equal(d.support, [0.2, 0.4, 0.8])
        assert np.allclose(d.probs, [0.25, 0.5, 0.25], atol=EXACT)
        for x in (0.2, 0.4, 0.8, 1.0):
            assert d.cdf(x) == pytest.approx(e.cdf(x), abs=EXACT)

    def test_requires_observations_and_t(self):
        with pytest.raises(ValueError):
            dominant_cdf(EmpiricalCdf(), 5)
        with pytest.raises(ValueError):
            dominant_cdf(EmpiricalCdf([0.5]), 1)

    @settings(derandomize=True, max_examples=80, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 500))
    def test_dominates_empirical(self, seed, t):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 30))
        e = EmpiricalCdf(np.round(rng.random(n), 3))
        d = dominant_cdf(e, t)
        assert abs(d.probs.sum() - 1.0) <= 1e-9
        assert d.cdf(1.0) == pytest.approx(1.0, abs=EXACT)
        for x in np.linspace(0, 1, 23):
            assert d.cdf(float(x)) <= e.cdf(float(x)) + EXACT
        # dominance raises the mean
        emp_mean = sum(v * c for v, c in e._counts.items()) / e.count
        assert d.mean() >= emp_mean - EXACT


class TestL1Distance:
    def test_identical_is_zero(self):
        d = make_finite([0.1, 0.9], [0.5, 0.5])
        assert l1_distance(d, d) == 0.0

    def test_disjoint_is_two(self):
        p = make_finite([0.1], [1.0])
        q = make_finite([0.9], [1.0])
        assert l1_distance(p, q) == pytest.approx(2.0, abs=EXACT)

    def test_known_overlap(self):
        p = make_finite([0.2, 0.8], [0.5, 0.5])
        q = make_finite([0.2, 0.8], [0.2, 0.8])
        assert l1_distance(p, q) == pytest.approx(0.6, abs=EXACT)

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_symmetric_and_bounded(self, seed):
        rng = np.random.default_rng(seed)
        p, q = random_finite(rng), random_finite(rng)
        d1, d2 = l1_distance(p, q), l1_distance(q, p)
        assert d1 == pytest.approx(d2, abs=EXACT)
        assert -EXACT <= d1 <= 2.0 + EXACT


class TestBinning:
    def test_bin_index_table(self):
        # I_1 = [0, 1/s], I_j = ((j-1)/s, j/s]
        assert bin_index(0.0, 4) == 1
        assert bin_index(0.25, 4) == 1
        assert bin_index(0.25 + 1e-12, 4) == 2
        assert bin_index(0.5, 4) == 2
        assert bin_index(1.0, 4) == 4
        assert bin_index(0.0, 1) == 1 and bin_index(1.0, 1) == 1

    def test_bin_value(self):
        assert bin_value(0.25, 10) == pytest.approx(0.3, abs=0.0)
        assert bin_value(0.0, 7) == pytest.approx(1 / 7, abs=0.0)
        assert bin_value(1.0, 3) == 1.0

    @settings(derandomize=True, max_examples=80, deadline=None)
    @given(st.floats(0.0, 1.0, allow_nan=False), st.integers(1, 200))
    def test_bin_brackets_input(self, x, s):
        j = bin_index(x, s)
        assert 1 <= j <= s
        assert x <= j / s + EXACT
        if j > 1:
            assert x > (j - 1) / s - 1e-9


class TestDiscretizeInterval:
    def test_uniform_grid(self):
        u = PiecewiseDensity([0.0, 1.0], [1.0])
        d = discretize_interval(u, 4)
        assert np.array_equal(d.support, [0.25, 0.5, 0.75, 1.0])
        assert np.allclose(d.probs, 0.25, atol=EXACT)

    def test_finite_mass_moves_to_right_endpoints(self):
        src = make_finite([0.0, 0.3, 0.55, 1.0], [0.1, 0.2, 0.3, 0.4])
        d = discretize_interval(src, 2)
        # 0.0 and 0.3 land in (0, 0.5]; 0.55 and 1.0 in (0.5, 1]
        assert np.array_equal(d.support, [0.5, 1.0])
        assert np.allclose(d.probs, [0.3, 0.7], atol=EXACT)

    def test_finite_cum_floats_copied_verbatim(self):
        src = make_finite([0.05, 0.3, 0.8], [0.125, 0.25, 0.625])
        d = discretize_interval(src, 3)
        for c in d.cum:
            assert c in set(src.cum)

    def test_mean_shift_bounded_by_bin_width(self):
        src = make_finite([0.12, 0.49, 0.77], [0.3, 0.4, 0.3])
        for s in (1, 2, 5, 10):
            d = discretize_interval(src, s)
            shift = d.mean() - src.mean()
            assert -EXACT <= shift <= 1 / s + EXACT

    def test_rejects_bad_s(self):
        with pytest.raises(ValueError):
            discretize_interval(make_finite([0.5], [1.0]), 0)

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 40))
    def test_mass_conserved_on_grid(self, seed, s):
        src = random_finite(np.random.default_rng(seed))
        d = discretize_interval(src, s)
        assert abs(d.probs.sum() - src.probs.sum()) <= EXACT
        for v in d.support:
            assert v * s == pytest.approx(round(v * s), abs=1e-9)


class TestSampling:
    def test_sample_consumes_one_uniform(self):
        d = make_finite([0.2, 0.8], [0.3, 0.7])
        r1 = substream(7, 0, 0)
        r2 = substream(7, 0, 0)
        xs = [sample(d, r1) for _ in range(5)]
        expected = [d.inverse_cdf(r2.random()) for _ in range(5)]
        assert xs == expected

    def test_sample_continuous(self):
        u = PiecewiseDensity([0.0, 1.0], [1.0])
        r1 = substream(7, 0, 1)
        r2 = substream(7, 0, 1)
        assert sample(u, r1) == u.inverse_cdf(r2.random())

    def test_point_mass_sampling(self):
        d = make_finite([0.4], [1.0])
        rng = substream(0, 0, 0)
        assert all(sample(d, rng) == 0.4 for _ in range(10))


class TestBernoulliDecomposition:
    def test_activation_rates(self):
        d = make_finite([0.1, 0.5, 0.9], [0.2, 0.3, 0.5])
        pairs = bernoulli_decomposition(d)
        assert pairs[0] == (0.1, pytest.approx(1.0, abs=EXACT))
        assert pairs[1] == (0.5, pytest.approx(0.3 / 0.5, abs=EXACT))
        assert pairs[2] == (0.9, pytest.approx(0.5 / 1.0, abs=EXACT))

    def test_max_law_matches_input(self):
        d = make_finite([0.0, 0.25, 0.6, 1.0], [0.4, 0.1, 0.3, 0.2])
        law = bruteforce_max_law(bernoulli_decomposition(d))
        assert dicts_close(law, law_as_dict(d), EXACT)

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_max_law_matches_input_random(self, seed):
        d = random_finite(np.random.default_rng(seed))
        law = bruteforce_max_law(bernoulli_decomposition(d))
        assert dicts_close(law, law_as_dict(d), EXACT)
