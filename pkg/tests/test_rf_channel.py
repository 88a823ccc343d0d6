from __future__ import annotations

import pytest

from zonegov import codec
from zonegov.codec import decode_frame, encode_frame
from zonegov.rf_channel import ChannelParams, TransmitterSite, in_range, propagate

FRAME = encode_frame(0xA5, 0x3)
OTHER = encode_frame(0xA5, 0x5)


def site(zone_id="z1", position=500.0, range_m=100.0, frequency=433.93):
    return TransmitterSite(zone_id=zone_id, position=position,
                           range_m=range_m, frequency=frequency)


def test_in_range_boundaries():
    s = site()
    assert in_range(s, 550.0)
    assert not in_range(s, 601.0)
    assert in_range(s, 600.0)  # boundary inclusive


def test_site_validation():
    with pytest.raises(ValueError):
        TransmitterSite(zone_id="z", position=0, range_m=0)
    with pytest.raises(ValueError):
        TransmitterSite(zone_id="z", position=0, range_m=10, repeat_period=0)
    with pytest.raises(ValueError):
        ChannelParams(bit_error_rate=1.5)


def test_single_site_clean_channel_is_identity():
    heard = propagate([(site(), FRAME)], 550.0, ChannelParams(), tick=0)
    assert heard == {433.93: FRAME.bits}
    assert decode_frame(heard[433.93]) == (0xA5, 0x3)


def test_out_of_range_site_is_silent():
    heard = propagate([(site(), FRAME)], 700.0, ChannelParams(), tick=0)
    assert heard == {}


def test_same_frequency_collision_yields_garbage():
    sites = [(site("a", 500.0), FRAME), (site("b", 550.0, 100.0), OTHER)]
    saw_bad_header = False
    for tick in range(50):
        heard = propagate(sites, 520.0, ChannelParams(rng_seed=7), tick)
        bits = heard[433.93]
        assert bits != FRAME.bits and bits != OTHER.bits
        try:
            decode_frame(bits)
        except codec.BadHeader:
            saw_bad_header = True
    assert saw_bad_header


def test_distinct_frequencies_both_get_through():
    sites = [(site("a", 500.0, frequency=433.93), FRAME),
             (site("b", 550.0, frequency=434.10), OTHER)]
    heard = propagate(sites, 520.0, ChannelParams(), tick=3)
    assert decode_frame(heard[433.93]) == (0xA5, 0x3)
    assert decode_frame(heard[434.10]) == (0xA5, 0x5)


def test_propagate_is_deterministic():
    sites = [(site("a", 500.0), FRAME), (site("b", 550.0, 100.0), OTHER)]
    params = ChannelParams(bit_error_rate=0.2, rng_seed=99)
    for tick in (0, 1, 17):
        assert propagate(sites, 520.0, params, tick) == propagate(sites, 520.0, params, tick)


def test_bit_error_rate_monte_carlo():
    # >= 1e5 bits at ber 0.01: observed flip rate within +-20% of 0.01
    params = ChannelParams(bit_error_rate=0.01, rng_seed=11)
    s = site()
    n_frames = 7000
    flips = 0
    for tick in range(n_frames):
        heard = propagate([(s, FRAME)], 500.0, params, tick)
        flips += sum(a != b for a, b in zip(heard[433.93], FRAME.bits))
    total_bits = n_frames * 16
    assert total_bits >= 100_000
    rate = flips / total_bits
    assert 0.008 <= rate <= 0.012
