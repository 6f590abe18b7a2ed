"""Tests for markers, marked-chain counting and the density check."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from forbidden_subposet.core.chains import (
    count_marked_chains,
    count_marked_chains_by_enumeration,
    count_marked_chains_oracle,
    density_check,
    k_chains,
    lym_sum,
    marked_chains_on,
    marker_histogram,
    markers,
)
from forbidden_subposet.core.exceptions import ParamError, SizeError
from forbidden_subposet.core.extremal import middle_levels
from forbidden_subposet.core.lattice import vertex, whole_lattice
from forbidden_subposet.core.utils import spawn_rngs
from forbidden_subposet.models import Family, FullChain


def family(n, *members):
    return Family.explicit(n, members)


@st.composite
def explicit_families(draw, max_n=5):
    n = draw(st.integers(min_value=2, max_value=max_n))
    members = draw(st.sets(st.integers(min_value=0, max_value=(1 << n) - 1)))
    return Family.explicit(n, members)


class TestMarkers:
    @pytest.fixture
    def chain(self):
        # {1,2} > {1} > {}
        return FullChain(n=2, anchor=0b11, order=(1, 0))

    def test_top_and_bottom(self, chain):
        assert markers(chain, family(2, 0, 0b11)) == (0b11, 0)

    def test_empty_family(self, chain):
        assert markers(chain, family(2)) == ()

    def test_whole_lattice(self, chain):
        assert len(markers(chain, whole_lattice(2))) == 3

    def test_marked_chains_on(self, chain):
        marked = list(marked_chains_on(chain, whole_lattice(2), 2))
        assert len(marked) == 3
        assert all(m.host == chain and m.k == 2 for m in marked)
        assert marked[0].marker_at(1) == 0b11


class TestLymSum:
    def test_two_singletons(self):
        assert lym_sum(family(2, vertex(1), vertex(2)), 2) == 1

    def test_whole_b2(self):
        assert lym_sum(whole_lattice(2), 2) == 3

    def test_middle_level(self):
        assert lym_sum(middle_levels(4, 1), 4) == 1

    def test_is_exact(self):
        assert lym_sum(family(3, vertex(1)), 3) == Fraction(1, 3)


class TestCountMarkedChains:
    def test_chain_family(self):
        assert count_marked_chains(family(2, 0, vertex(1), vertex(1, 2)), 2, 2) == 4

    def test_antichain(self):
        assert count_marked_chains(family(3, vertex(1), vertex(2), vertex(3)), 2, 3) == 0

    def test_whole_b2(self):
        assert count_marked_chains(whole_lattice(2), 2, 2) == 6

    @pytest.mark.parametrize("F, k, n, expected", [
        (family(2, 0, vertex(1), vertex(1, 2)), 2, 2, 4),
        (family(3, vertex(1), vertex(2), vertex(3)), 2, 3, 0),
        (whole_lattice(2), 2, 2, 6),
        (family(3, 0), 1, 3, 6),
        (family(3, vertex(1)), 1, 3, 2),
    ])
    def test_oracle_values(self, F, k, n, expected):
        assert count_marked_chains_oracle(F, k, n) == expected
        assert count_marked_chains(F, k, n) == expected

    def test_k_must_be_positive(self):
        with pytest.raises(ParamError):
            count_marked_chains(whole_lattice(2), 0, 2)

    def test_family_cap(self):
        with pytest.raises(SizeError):
            count_marked_chains(whole_lattice(4), 2, 4, cap=8)

    def test_k_chains_listed_top_first(self):
        chains = list(k_chains(whole_lattice(2), 3))
        assert sorted(chains) == [(0b11, 0b01, 0), (0b11, 0b10, 0)]

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
    @pytest.mark.parametrize("k", [2, 3])
    def test_identity_on_random_families(self, n, k):
        for rng in spawn_rngs(7 + n * 10 + k, 100):
            keep = rng.random(1 << n) < rng.uniform(0.1, 0.9)
            F = Family.explicit(n, (int(v) for v in np.flatnonzero(keep)))
            assert count_marked_chains(F, k, n) == count_marked_chains_oracle(F, k, n)
            assert lym_sum(F, n) * math.factorial(n) == marker_histogram(F, n).first_moment

    @given(explicit_families(), st.integers(min_value=1, max_value=3))
    @settings(max_examples=60, deadline=None)
    def test_dp_matches_listing(self, F, k):
        assert count_marked_chains(F, k, F.n) == count_marked_chains_by_enumeration(F, k, F.n)

    @given(explicit_families(max_n=4), st.data())
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_family(self, F, data):
        extra = data.draw(st.integers(min_value=0, max_value=(1 << F.n) - 1))
        grown = Family.explicit(F.n, set(F.members) | {extra})
        assert count_marked_chains(grown, 2, F.n) >= count_marked_chains(F, 2, F.n)


class TestMarkerHistogram:
    def test_whole_b2(self):
        assert marker_histogram(whole_lattice(2), 2).counts == {3: 2}

    def test_empty_family(self):
        histogram = marker_histogram(family(3), 3)
        assert histogram.counts == {0: 6}
        assert histogram.total == 6

    def test_single_vertex(self):
        assert marker_histogram(family(2, vertex(1)), 2).counts == {0: 1, 1: 1}

    @given(explicit_families())
    @settings(max_examples=50, deadline=None)
    def test_lym_consistency(self, F):
        histogram = marker_histogram(F, F.n)
        assert histogram.total == math.factorial(F.n)
        assert lym_sum(F, F.n) * math.factorial(F.n) == histogram.first_moment
        assert histogram.mean() == lym_sum(F, F.n)


class TestDensityCheck:
    def test_whole_b2(self):
        report = density_check(whole_lattice(2), 2, 1, 2)
        assert report.hypothesis_met
        assert report.count == 6
        assert report.bound == 1
        assert report.holds
        assert report.printed_bound == 1

    def test_middle_level_short_of_threshold(self):
        report = density_check(middle_levels(4, 1), 2, Fraction(1, 10), 4)
        assert report.threshold == Fraction(33, 5)
        assert not report.hypothesis_met

    def test_empty_family(self):
        report = density_check(family(3), 2, Fraction(1, 2), 3)
        assert not report.hypothesis_met
        assert report.count == 0

    def test_hypothesis_under_both_readings(self):
        report = density_check(middle_levels(4, 1), 2, Fraction(1, 10), 4)
        assert report.t == 2
        assert report.printed_threshold == report.threshold
        loose = density_check(whole_lattice(4), 2, 1, 4, t=1)
        assert loose.printed_threshold == 6
        assert loose.threshold == 12
        assert loose.printed_hypothesis_met and loose.hypothesis_met
        strict = density_check(middle_levels(4, 1), 2, 1, 4, t=1)
        assert strict.printed_hypothesis_met
        assert not strict.hypothesis_met

    def test_epsilon_from_string(self):
        assert density_check(whole_lattice(2), 2, "1/2", 2).epsilon == Fraction(1, 2)

    @pytest.mark.parametrize("k, epsilon, t", [(1, 1, None), (2, 0, None), (2, -1, None), (2, 1, 0)])
    def test_invalid_parameters(self, k, epsilon, t):
        with pytest.raises(ParamError):
            density_check(whole_lattice(2), k, epsilon, 2, t=t)

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("epsilon", [Fraction(1, 2), Fraction(1)])
    def test_bound_holds_whenever_dense(self, n, epsilon):
        for rng in spawn_rngs(n, 40):
            keep = rng.random(1 << n) < rng.uniform(0.5, 1.0)
            F = Family.explicit(n, (int(v) for v in np.flatnonzero(keep)))
            for k in (2, 3):
                report = density_check(F, k, epsilon, n)
                if report.hypothesis_met:
                    assert report.holds
