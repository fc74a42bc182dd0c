"""Unit tests for round-trip latency composition across attachment paths."""

from __future__ import annotations

import random

import pytest

from ocmsim.interconnect import (
    NIC_DEFAULT_CYCLES,
    SERDES_PRESET_CYCLES,
    FlitPlan,
    LatencyBreakdown,
    LocalElectrical,
    Nic,
    OcmLatencyParams,
    OcmOptical,
    flit_plan,
    local_round_trip,
    nic_round_trip,
    ocm_round_trip,
)


class TestOcmLatencyParams:
    def test_distance_is_one_way(self):
        params = OcmLatencyParams(distance_m=2.0)
        assert params.distance_ns == pytest.approx(20.0)

    @pytest.mark.parametrize("one_way_m, cycles", [
        (1.0, 30.0),
        (2.0, 60.0),
        (3.0, 90.0),
    ])
    def test_propagation_presets(self, one_way_m, cycles):
        # 2/4/6 m round trip at 5 ns/m and a 3 GHz core.
        params = OcmLatencyParams(distance_m=one_way_m)
        trip = ocm_round_trip(params, 0.0)
        assert trip.term_cycles("distance") == pytest.approx(cycles)

    def test_setup_time_is_pinned_to_zero(self):
        with pytest.raises(ValueError, match="t_setup"):
            OcmLatencyParams(t_setup=1)

    def test_rejects_negative_terms(self):
        with pytest.raises(ValueError):
            OcmLatencyParams(t_serdes=-1)
        with pytest.raises(ValueError):
            OcmLatencyParams(distance_m=-0.5)

    def test_serdes_presets(self):
        assert SERDES_PRESET_CYCLES == (10, 150, 340)


class TestRoundTrips:
    def test_ocm_terms_present_and_ordered(self):
        trip = ocm_round_trip(OcmLatencyParams(t_serdes=150), 60.0)
        names = [name for name, _ in trip.terms_ns]
        assert names == ["setup", "controller", "memory", "serdes",
                         "modulation", "demodulation", "distance"]
        assert trip.term_ns("memory") == 60.0
        assert trip.term_ns("serdes") == pytest.approx(50.0)

    def test_ocm_total(self):
        params = OcmLatencyParams(t_serdes=10, distance_m=1.0)
        trip = ocm_round_trip(params, 60.0)
        assert trip.total_ns == pytest.approx(60.0 + 10.0 / 3.0 + 10.0)

    def test_nic_total(self):
        trip = nic_round_trip(NIC_DEFAULT_CYCLES, 60.0)
        assert trip.term_ns("nic") == pytest.approx(350.0)
        assert trip.total_ns == pytest.approx(410.0)

    def test_local_is_memory_only(self):
        trip = local_round_trip(60.0)
        assert trip.terms_ns == (("memory", 60.0),)
        assert trip.total_cycles == pytest.approx(180.0)

    def test_unknown_term_raises(self):
        with pytest.raises(KeyError):
            local_round_trip(60.0).term_ns("serdes")

    def test_breakdown_sums_for_randomized_parameters(self):
        rng = random.Random(7)
        for _ in range(1000):
            params = OcmLatencyParams(
                t_contr=rng.randrange(0, 50),
                t_serdes=rng.randrange(0, 400),
                t_mod=rng.randrange(0, 10),
                t_demod=rng.randrange(0, 10),
                distance_m=rng.uniform(0.0, 5.0),
                propagation_ns_per_m=rng.uniform(3.0, 7.0),
                core_ghz=rng.choice([1.0, 2.0, 3.0, 4.0]),
            )
            t_mem = rng.uniform(0.0, 100.0)
            trip = ocm_round_trip(params, t_mem)
            parts_ns = sum(v for _, v in trip.terms_ns)
            assert trip.total_ns == pytest.approx(parts_ns, rel=1e-12)
            assert trip.total_cycles == pytest.approx(
                parts_ns * params.core_ghz, rel=1e-12)


class TestAttachmentFronts:
    @pytest.mark.parametrize("front", [
        LocalElectrical(),
        OcmOptical(),
        OcmOptical(OcmLatencyParams(t_serdes=340, distance_m=3.0)),
        Nic(),
    ])
    def test_round_trip_is_memory_plus_constant(self, front):
        # The engine relies on the added latency being t_mem-independent.
        for t_mem in (0.0, 16.67, 60.0):
            trip = front.round_trip(t_mem)
            assert trip.total_ns == pytest.approx(
                t_mem + front.non_memory_ns, rel=1e-12, abs=1e-12)

    def test_local_adds_nothing(self):
        assert LocalElectrical().non_memory_ns == 0.0

    def test_nic_validates_cycles(self):
        with pytest.raises(ValueError):
            Nic(fixed_cycles=0)

    def test_core_ghz_exposed(self):
        assert LocalElectrical(core_ghz=2.5).core_ghz == 2.5
        assert OcmOptical(OcmLatencyParams(core_ghz=2.5)).core_ghz == 2.5
        assert Nic(core_ghz=2.5).core_ghz == 2.5


class TestFlitPlan:
    @pytest.mark.parametrize("line, flit, data, total", [
        (128, 16, 8, 9),
        (64, 64, 1, 2),
        (128, 100, 2, 3),
    ])
    def test_split(self, line, flit, data, total):
        plan = flit_plan(line, flit)
        assert plan.data_flits == data
        assert plan.extra_flits == 1
        assert plan.total_flits == total

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            flit_plan(0, 16)
        with pytest.raises(ValueError):
            flit_plan(128, 0)
        with pytest.raises(ValueError):
            FlitPlan(flit_bytes=16, data_flits=8, extra_flits=0)


def test_breakdown_term_cycles_consistent():
    trip = LatencyBreakdown(terms_ns=(("a", 10.0), ("b", 5.0)),
                            core_ghz=3.0)
    assert trip.term_cycles("a") == pytest.approx(30.0)
    assert trip.total_cycles == pytest.approx(45.0)
