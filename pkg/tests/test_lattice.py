"""Tests for Boolean lattice vertices, bands, forbidden zones and full chains."""
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from forbidden_subposet.core.exceptions import NotChainError, ParamError, SizeError, WitnessPlacementError
from forbidden_subposet.core.lattice import (
    band_bounds,
    boolean_lattice_poset,
    chain_uniformity_pvalue,
    chains_through_count,
    complement,
    down_up_set,
    elements_of,
    enumerate_full_chains,
    enumerate_sublattice_chains,
    forbidden_zone,
    format_vertex,
    is_proper_subset,
    is_subset,
    resolve_band,
    sample_chain,
    subchain,
    submasks,
    vertex,
    weight,
    whole_lattice,
)
from forbidden_subposet.models import Band, ChainDirection, Family, FullChain, ZoneSide


class TestVertices:
    def test_vertex_bits(self):
        assert vertex(1, 2) == 0b11
        assert vertex() == 0
        assert vertex(3) == 0b100

    def test_zero_element_rejected(self):
        with pytest.raises(ParamError):
            vertex(0)

    def test_elements_and_format(self):
        v = vertex(1, 3)
        assert elements_of(v) == (1, 3)
        assert format_vertex(v) == "{1,3}"
        assert format_vertex(0) == "{}"

    def test_weight(self):
        assert weight(vertex(2, 5, 7)) == 3
        assert weight(0) == 0

    def test_complement(self):
        assert complement(vertex(1, 2), 4) == vertex(3, 4)

    def test_subset_relations(self):
        assert is_subset(vertex(1), vertex(1, 2))
        assert is_subset(vertex(1), vertex(1))
        assert not is_proper_subset(vertex(1), vertex(1))
        assert not is_subset(vertex(3), vertex(1, 2))

    def test_submasks(self):
        subs = list(submasks(vertex(1, 2)))
        assert subs[0] == vertex(1, 2)
        assert subs[-1] == 0
        assert sorted(subs) == [0, 1, 2, 3]


class TestBand:
    def test_large_n(self):
        band = band_bounds(10_000)
        assert band.lo == pytest.approx(4393.0, abs=0.1)
        assert band.hi == pytest.approx(5607.0, abs=0.1)

    @pytest.mark.parametrize("n", [2, 4])
    def test_small_n_covers_everything(self, n):
        assert band_bounds(n).weights(n) == range(0, n + 1)

    @pytest.mark.parametrize("n", [68, 100, 1000])
    def test_excludes_extremes(self, n):
        band = band_bounds(n)
        assert not band.contains(0)
        assert not band.contains(n)
        assert band.contains(n // 2)

    def test_n_one_rejected(self):
        with pytest.raises(ParamError):
            band_bounds(1)

    def test_resolve_prefers_override(self):
        override = Band(1, 3)
        assert resolve_band(4, override) is override
        assert resolve_band(1, None) == Band.full(1)

    def test_mirrored(self):
        assert Band(1, 3).mirrored(5) == Band(2, 4)

    def test_inverted_band_rejected(self):
        with pytest.raises(ValueError):
            Band(3, 1)


class TestDownUpSet:
    def test_down(self):
        assert down_up_set(vertex(1, 2), ChainDirection.DOWN, 4) == {0, vertex(1), vertex(2), vertex(1, 2)}

    def test_up(self):
        assert down_up_set(vertex(1, 2), ChainDirection.UP, 3) == {vertex(1, 2), vertex(1, 2, 3)}

    def test_empty_down(self):
        assert down_up_set(0, ChainDirection.DOWN, 6) == {0}

    def test_sizes(self):
        v = vertex(1, 2, 3)
        assert len(down_up_set(v, ChainDirection.DOWN, 5)) == 8
        assert len(down_up_set(v, ChainDirection.UP, 5)) == 4

    def test_cap(self):
        with pytest.raises(SizeError):
            down_up_set(vertex(1, 2, 3), ChainDirection.DOWN, 3, cap=4)


def naive_zone(v, S, side, n, band):
    """Triple loop over B_n, S and the definition."""
    zone = set()
    for u in range(1 << n):
        inside = is_proper_subset(u, v) if side is ZoneSide.BELOW else is_proper_subset(v, u)
        if not inside or not band.contains(bin(u).count("1")):
            continue
        for s in S:
            if is_subset(u, s) or is_subset(s, u):
                zone.add(u)
    return zone


class TestForbiddenZone:
    def test_empty_witness(self):
        assert forbidden_zone(vertex(1, 2, 3), [], ZoneSide.BELOW, 4) == frozenset()

    def test_single_outside_element(self):
        zone = forbidden_zone(vertex(1, 2, 3), [vertex(4)], ZoneSide.BELOW, 4, Band(0, 4))
        assert zone == {0}

    def test_band_cuts_empty_set(self):
        zone = forbidden_zone(vertex(1, 2, 3), [vertex(1, 4)], ZoneSide.BELOW, 4, Band(1, 3))
        assert zone == {vertex(1)}

    def test_above(self):
        zone = forbidden_zone(vertex(1), [vertex(2)], ZoneSide.ABOVE, 3, Band(0, 3))
        assert zone == {vertex(1, 2), vertex(1, 2, 3)}

    def test_placement_below(self):
        with pytest.raises(WitnessPlacementError):
            forbidden_zone(vertex(1), [vertex(1, 2)], ZoneSide.BELOW, 3)

    def test_placement_above(self):
        with pytest.raises(WitnessPlacementError):
            forbidden_zone(vertex(1, 2), [vertex(1)], ZoneSide.ABOVE, 3)

    @given(
        n=st.integers(min_value=2, max_value=6),
        data=st.data(),
    )
    @settings(max_examples=100, deadline=None)
    def test_matches_naive_reference(self, n, data):
        v = data.draw(st.integers(min_value=0, max_value=(1 << n) - 1))
        side = data.draw(st.sampled_from(list(ZoneSide)))
        lo = data.draw(st.integers(min_value=0, max_value=n))
        hi = data.draw(st.integers(min_value=lo, max_value=n))
        band = Band(lo, hi)
        placed = [
            s for s in range(1 << n)
            if not (is_subset(v, s) if side is ZoneSide.BELOW else is_subset(s, v))
        ]
        S = data.draw(st.lists(st.sampled_from(placed), max_size=3, unique=True)) if placed else []
        assert forbidden_zone(v, S, side, n, band) == naive_zone(v, S, side, n, band)


class TestFullChains:
    @pytest.mark.parametrize("n, count", [(2, 2), (3, 6), (4, 24)])
    def test_counts(self, n, count):
        assert len(list(enumerate_full_chains(n))) == count

    def test_vertex_shape(self):
        for chain in enumerate_full_chains(3):
            assert len(chain.vertices) == 4
            assert chain.vertices[0] == 0b111
            assert chain.vertices[-1] == 0
            assert [bin(v).count("1") for v in chain.vertices] == [3, 2, 1, 0]

    def test_vertex_multiplicity(self):
        seen = Counter(v for chain in enumerate_full_chains(4) for v in chain.vertices)
        for v in range(16):
            w = bin(v).count("1")
            assert seen[v] == math.factorial(w) * math.factorial(4 - w)

    def test_cap(self):
        with pytest.raises(SizeError):
            list(enumerate_full_chains(4, cap=3))

    def test_up_chain_vertices(self):
        chains = list(enumerate_sublattice_chains(vertex(1), ChainDirection.UP, 3))
        assert len(chains) == 2
        for chain in chains:
            assert chain.vertices[0] == 0b111
            assert chain.vertices[-1] == vertex(1)


class TestSampleChain:
    def test_empty_anchor(self):
        chain = sample_chain(0, ChainDirection.DOWN, 4, np.random.default_rng(1))
        assert chain.order == ()
        assert chain.vertices == (0,)

    def test_seeded_determinism(self):
        a = sample_chain(vertex(1, 2), ChainDirection.DOWN, 3, np.random.default_rng(7))
        b = sample_chain(vertex(1, 2), ChainDirection.DOWN, 3, np.random.default_rng(7))
        assert a == b

    def test_up_chain_stays_above(self):
        chain = sample_chain(vertex(2), ChainDirection.UP, 5, np.random.default_rng(3))
        assert len(chain) == 5
        assert all(is_subset(vertex(2), v) for v in chain.vertices)

    def test_uniformity(self):
        pvalue = chain_uniformity_pvalue(vertex(1, 2, 3), ChainDirection.DOWN, 4, 6000, np.random.default_rng(11))
        assert pvalue > 0.001

    def test_uniformity_single_chain(self):
        assert chain_uniformity_pvalue(vertex(1), ChainDirection.DOWN, 2, 10, np.random.default_rng(0)) == 1.0


class TestChainsThroughCount:
    @pytest.mark.parametrize("Q, n, expected", [
        ((vertex(1, 2), vertex(1)), 2, 1),
        ((vertex(1, 2), 0), 2, 2),
        ((vertex(1, 2), vertex(1)), 3, 1),
        ((), 4, 24),
    ])
    def test_values(self, Q, n, expected):
        assert chains_through_count(Q, n) == expected

    def test_matches_enumeration(self):
        Q = (vertex(1, 2, 3), vertex(2))
        brute = sum(1 for chain in enumerate_full_chains(4) if set(Q) <= set(chain.vertices))
        assert chains_through_count(Q, 4) == brute

    def test_not_a_chain(self):
        with pytest.raises(NotChainError):
            chains_through_count((vertex(1), vertex(2)), 2)


class TestSubchain:
    @pytest.fixture
    def chain(self):
        return FullChain(n=3, anchor=0b111, order=(2, 1, 0))

    def test_picks_from_top(self, chain):
        F = Family.explicit(3, [0b111, 0b011, 0])
        assert subchain(chain, F, [1, 3]) == (0b111, 0)
        assert subchain(chain, F, [2]) == (0b011,)

    def test_short_chain_gives_empty(self, chain):
        F = Family.explicit(3, [0b111, 0])
        assert subchain(chain, F, [1, 3]) == ()

    def test_non_monotone_rejected(self, chain):
        F = whole_lattice(3)
        with pytest.raises(ParamError):
            subchain(chain, F, [1, 3, 2])


class TestWholeLattice:
    def test_explicit_when_small(self):
        F = whole_lattice(3)
        assert F.is_explicit
        assert len(F) == 8
        assert F.symmetric

    def test_oracle_when_large(self):
        F = whole_lattice(30)
        assert not F.is_explicit
        assert (1 << 29) in F


class TestBooleanLatticePoset:
    def test_b2(self):
        P = boolean_lattice_poset(2)
        assert P.labels == ("{}", "{1}", "{2}", "{1,2}")
        assert P.less(0, 3)
        assert not P.comparable(1, 2)
