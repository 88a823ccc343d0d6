"""Simulated broadcast medium between roadside transmitters and vehicles.

Delivery is a hard disc around each transmitter.  Two in-range
transmitters sharing a frequency collide at the receiver and produce
uniformly random garbage bits, so corrupted headers and addresses
exercise the decoder's rejection paths.  A lone in-range transmitter
gets through with independent per-bit errors.  All randomness is drawn
from streams keyed by (seed, tick, site), so output is a pure function
of the inputs and call order never matters.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .codec import FRAME_LEN, Bits, Codeword

DEFAULT_FREQUENCY_MHZ = 433.93
DEFAULT_REPEAT_PERIOD_S = 0.1


@dataclass(frozen=True)
class TransmitterSite:
    """Roadside transmitter: disc range on a 1-D road, fixed frequency."""

    zone_id: str
    position: float
    range_m: float
    frequency: float = DEFAULT_FREQUENCY_MHZ
    repeat_period: float = DEFAULT_REPEAT_PERIOD_S

    def __post_init__(self) -> None:
        if self.range_m <= 0:
            raise ValueError("range must be positive")
        if self.repeat_period <= 0:
            raise ValueError("repeat period must be positive")


@dataclass(frozen=True)
class ChannelParams:
    bit_error_rate: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.bit_error_rate <= 1.0:
            raise ValueError("bit error rate must be within [0, 1]")


def in_range(site: TransmitterSite, pos: float) -> bool:
    """Reception boundary is inclusive at exactly range_m."""
    return abs(pos - site.position) <= site.range_m


def _freq_key(frequency: float) -> int:
    # kHz resolution keeps equal configured frequencies on one key.
    return int(round(frequency * 1000))


def _site_key(site: TransmitterSite) -> int:
    return zlib.crc32(site.zone_id.encode())


def _stream(params: ChannelParams, tick: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence((params.rng_seed, tick) + keys))


def propagate(active_sites: list[tuple[TransmitterSite, Codeword]],
              receiver_pos: float,
              params: ChannelParams,
              tick: int) -> dict[float, Bits]:
    """One reception window: per-frequency bits heard at receiver_pos.

    Returns {frequency: 16 bits} for every frequency with at least one
    in-range transmitter; silent frequencies are absent.  Two or more
    in-range transmitters on one frequency collide into random bits.
    """
    by_freq: dict[float, list[tuple[TransmitterSite, Codeword]]] = {}
    for site, frame in active_sites:
        if in_range(site, receiver_pos):
            by_freq.setdefault(site.frequency, []).append((site, frame))

    heard: dict[float, Bits] = {}
    for frequency, entries in by_freq.items():
        if len(entries) > 1:
            rng = _stream(params, tick, _freq_key(frequency), 1)
            heard[frequency] = tuple(int(b) for b in rng.integers(0, 2, FRAME_LEN))
            continue
        site, frame = entries[0]
        bits = frame.bits
        if params.bit_error_rate > 0.0:
            rng = _stream(params, tick, _site_key(site))
            flips = rng.random(FRAME_LEN) < params.bit_error_rate
            bits = tuple(b ^ int(f) for b, f in zip(bits, flips))
        heard[frequency] = bits
    return heard
