"""Routes, vehicle interpolation, sensor walks, violation detection."""

import math
import random

import pytest
from hypothesis import given, strategies as st

from ascsim.telemetry import (
    EARTH_RADIUS_KM,
    Route,
    SensorProfile,
    detect_violation,
    haversine_km,
    named_rng,
    next_sensor_reading,
    sensor_series,
    vehicle_position,
)

LONDON = (51.5074, -0.1278)
BIRMINGHAM = (52.4862, -1.8904)
MANCHESTER = (53.4808, -2.2426)


# -- haversine ------------------------------------------------------------------


def test_haversine_zero_for_identical_points():
    assert haversine_km(LONDON, LONDON) == 0.0


def test_haversine_is_symmetric():
    assert haversine_km(LONDON, BIRMINGHAM) == pytest.approx(
        haversine_km(BIRMINGHAM, LONDON)
    )


def test_haversine_matches_independent_formula():
    # oracle: spherical law of cosines on the same reference sphere
    (lat1, lng1), (lat2, lng2) = LONDON, MANCHESTER
    p1, p2 = math.radians(lat1), math.radians(lat2)
    expected = EARTH_RADIUS_KM * math.acos(
        math.sin(p1) * math.sin(p2)
        + math.cos(p1) * math.cos(p2) * math.cos(math.radians(lng2 - lng1))
    )
    assert haversine_km(LONDON, MANCHESTER) == pytest.approx(expected, abs=1e-6)


def test_haversine_quarter_meridian():
    # pole to equator along a meridian is a quarter of the great circle
    assert haversine_km((0.0, 0.0), (90.0, 0.0)) == pytest.approx(
        math.pi * EARTH_RADIUS_KM / 2, rel=1e-12
    )


# -- routes -------------------------------------------------------------------------


def test_route_needs_two_distinct_waypoints_and_positive_speed():
    with pytest.raises(ValueError):
        Route((LONDON,), 70.0)
    with pytest.raises(ValueError):
        Route((LONDON, LONDON), 70.0)
    with pytest.raises(ValueError):
        Route((LONDON, BIRMINGHAM), 0.0)


def test_route_length_is_sum_of_legs():
    route = Route((LONDON, BIRMINGHAM, MANCHESTER), 70.0)
    legs = route.leg_lengths_km
    assert len(legs) == 2
    assert route.length_km == pytest.approx(sum(legs))
    assert route.duration_s() == pytest.approx(route.length_km / 70.0 * 3600.0)


def test_vehicle_position_at_start_and_past_end():
    route = Route((LONDON, BIRMINGHAM), 70.0)
    position, progress = vehicle_position(route, 0.0)
    assert position == LONDON
    assert progress == 0.0
    position, progress = vehicle_position(route, route.duration_s())
    assert position == BIRMINGHAM
    assert progress == 1.0
    position, progress = vehicle_position(route, route.duration_s() * 10)
    assert position == BIRMINGHAM
    assert progress == 1.0  # clamped, never beyond


def test_vehicle_position_halfway_is_half_the_distance():
    route = Route((LONDON, BIRMINGHAM), 70.0)
    position, progress = vehicle_position(route, route.duration_s() / 2)
    assert progress == pytest.approx(0.5)
    assert haversine_km(LONDON, position) == pytest.approx(route.length_km / 2, rel=5e-3)


def test_vehicle_position_interpolates_onto_second_leg():
    route = Route((LONDON, BIRMINGHAM, MANCHESTER), 70.0)
    first_leg_fraction = route.leg_lengths_km[0] / route.length_km
    elapsed = route.duration_s() * (first_leg_fraction + (1 - first_leg_fraction) / 2)
    position, progress = vehicle_position(route, elapsed)
    assert progress == pytest.approx(first_leg_fraction + (1 - first_leg_fraction) / 2)
    # point lies between Birmingham and Manchester
    assert min(BIRMINGHAM[0], MANCHESTER[0]) <= position[0] <= max(BIRMINGHAM[0], MANCHESTER[0])


@given(st.floats(min_value=0.0, max_value=3.0))
def test_vehicle_progress_is_monotone_and_bounded(fraction):
    route = Route((LONDON, BIRMINGHAM, MANCHESTER), 70.0)
    _, progress = vehicle_position(route, route.duration_s() * fraction)
    assert 0.0 <= progress <= 1.0
    assert progress == pytest.approx(min(fraction, 1.0), abs=1e-9)


# -- sensors ---------------------------------------------------------------------------


def make_profile(**kwargs):
    defaults = dict(
        kind="temperature",
        unit="°C",
        target=2.0,
        reversion=0.5,
        noise=0.3,
        safe_range=(0.0, 4.0),
        sample_period_s=5.0,
    )
    defaults.update(kwargs)
    return SensorProfile(**defaults)


def test_noiseless_half_reversion_halves_the_error_each_step():
    profile = make_profile(noise=0.0, reversion=0.5, initial=7.0)
    rng = random.Random(1)
    value = profile.start_value
    for step in range(1, 40):
        value = next_sensor_reading(profile, value, rng)
        expected_error = 5.0 * 0.5**step
        assert abs((value - 2.0) - expected_error) <= 1e-9


def test_zero_reversion_zero_noise_holds_still():
    profile = make_profile(noise=0.0, reversion=0.0, initial=7.0)
    value = next_sensor_reading(profile, 7.0, random.Random(1))
    assert value == 7.0


def test_full_reversion_jumps_to_target():
    profile = make_profile(noise=0.0, reversion=1.0, initial=7.0)
    value = next_sensor_reading(profile, 7.0, random.Random(1))
    assert value == pytest.approx(2.0)


def test_noise_stays_within_one_sigma_band_per_step():
    profile = make_profile(noise=0.3, reversion=0.0)
    rng = random.Random(9)
    prev = 2.0
    for _ in range(200):
        value = next_sensor_reading(profile, prev, rng)
        assert abs(value - prev) <= 0.3 + 1e-12
        prev = value


def test_draw_schedule_is_independent_of_noise_parameter():
    # the rng is consumed even at sigma=0, so switching noise on or off
    # never shifts later draws of the same stream
    quiet, loud = make_profile(noise=0.0), make_profile(noise=0.3)
    rng_a, rng_b = random.Random(5), random.Random(5)
    for _ in range(10):
        next_sensor_reading(quiet, 2.0, rng_a)
        next_sensor_reading(loud, 2.0, rng_b)
    assert rng_a.random() == rng_b.random()


def test_sensor_series_length_and_determinism():
    profile = make_profile()
    a = sensor_series(profile, random.Random(3), 20)
    b = sensor_series(profile, random.Random(3), 20)
    assert len(a) == 20
    assert a == b


def test_profile_validation():
    with pytest.raises(ValueError):
        make_profile(reversion=1.5)
    with pytest.raises(ValueError):
        make_profile(noise=-0.1)
    with pytest.raises(ValueError):
        make_profile(safe_range=(4.0, 0.0))
    with pytest.raises(ValueError):
        make_profile(sample_period_s=0.0)


# -- violation detection ---------------------------------------------------------------


def test_detect_violation_closed_interval_boundaries_are_safe():
    assert detect_violation("temperature", 0.0, (0.0, 4.0)) is None
    assert detect_violation("temperature", 4.0, (0.0, 4.0)) is None
    assert detect_violation("temperature", 2.0, (0.0, 4.0)) is None


def test_detect_violation_below():
    violation = detect_violation("temperature", -0.5, (0.0, 4.0))
    assert violation is not None
    assert violation.direction == "low"
    assert violation.excess == pytest.approx(0.5)


def test_detect_violation_above():
    violation = detect_violation("temperature", 4.75, (0.0, 4.0))
    assert violation.direction == "high"
    assert violation.excess == pytest.approx(0.75)


@given(st.floats(min_value=-10, max_value=10, allow_nan=False))
def test_detect_violation_flags_exactly_out_of_range(value):
    violation = detect_violation("x", value, (0.0, 4.0))
    assert (violation is not None) == (value < 0.0 or value > 4.0)


# -- named rng -----------------------------------------------------------------------


def test_named_rng_reproducible_and_name_sensitive():
    assert named_rng(42, "a").random() == named_rng(42, "a").random()
    assert named_rng(42, "a").random() != named_rng(42, "b").random()
    assert named_rng(42, "a").random() != named_rng(43, "a").random()
