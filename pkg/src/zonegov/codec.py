"""Bit-exact codec for the 12-bit remote-control beacon frames.

One over-the-air frame is 16 bits: a fixed 4-bit header, an 8-bit system
address and a 4-bit data nibble, each field msb-first.  The data nibble
carries a zone symbol index (3 bits) plus a honk-free flag (1 bit).
Receivers act on a frame only after the triple-match rule: three
consecutive, gap-free frames carrying the local address and identical
data.
"""

from __future__ import annotations

from dataclasses import dataclass

HEADER = 0b0101
HEADER_LEN = 4
ADDRESS_LEN = 8
DATA_LEN = 4
FRAME_LEN = HEADER_LEN + ADDRESS_LEN + DATA_LEN

# Default shared address of all governors on the road.
DEFAULT_ADDRESS = 0xA5

# Zone symbols: one active/release pair per zone kind.  Index 0 is idle,
# index 7 is unassigned (can only appear via a corrupted nibble).
SYMBOLS = {"!": 1, "@": 2, "#": 3, "$": 4, "%": 5, "^": 6}
SYMBOL_MEANING = {
    1: ("school", True),
    2: ("school", False),
    3: ("office", True),
    4: ("office", False),
    5: ("hospital", True),
    6: ("hospital", False),
}
_INDEX_TO_SYMBOL = {i: s for s, i in SYMBOLS.items()}

HONK_FREE_BIT = 0x8
SYMBOL_INDEX_MASK = 0x7

Bits = tuple[int, ...]


class CodecError(Exception):
    """Base class for frame coding errors."""


class BadHeader(CodecError):
    """First four bits of a frame do not match the fixed header."""


class BadLength(CodecError):
    """Frame is not exactly 16 bits."""


class UnknownSymbol(CodecError):
    """Character outside the six-symbol zone alphabet."""


class NoSymbol(CodecError):
    """Payload index that maps to no broadcast symbol (idle or unassigned)."""


def _int_to_bits(value: int, width: int) -> Bits:
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def _bits_to_int(bits: Bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | (b & 1)
    return out


@dataclass(frozen=True)
class Payload:
    """Decoded data nibble: bit3 = honk_free, bits2..0 = symbol index."""

    symbol_index: int
    honk_free: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.symbol_index <= 7:
            raise ValueError(f"symbol_index {self.symbol_index} outside 3-bit range")

    def pack(self) -> int:
        return (HONK_FREE_BIT if self.honk_free else 0) | self.symbol_index

    @classmethod
    def unpack(cls, nibble: int) -> "Payload":
        if not 0 <= nibble <= 0xF:
            raise ValueError(f"nibble {nibble} outside 4-bit range")
        return cls(symbol_index=nibble & SYMBOL_INDEX_MASK,
                   honk_free=bool(nibble & HONK_FREE_BIT))


@dataclass(frozen=True)
class Codeword:
    """One transmissible frame: header, address and data nibble."""

    address: int
    data: int

    def __post_init__(self) -> None:
        if not 0 <= self.address < 256:
            raise ValueError(f"address {self.address} outside 8-bit range")
        if not 0 <= self.data < 16:
            raise ValueError(f"data {self.data} outside 4-bit range")

    @property
    def bits(self) -> Bits:
        return (_int_to_bits(HEADER, HEADER_LEN)
                + _int_to_bits(self.address, ADDRESS_LEN)
                + _int_to_bits(self.data, DATA_LEN))


@dataclass(frozen=True)
class ValidTransmission:
    """Receiver outcome after three consecutive matching frames."""

    address: int
    payload: Payload
    observed_at: float = 0.0


def encode_frame(address: int, data: int) -> Codeword:
    """Build the 16-bit frame for an (address, data) pair."""
    return Codeword(address=address, data=data)


def decode_frame(bits: Bits) -> tuple[int, int]:
    """Inverse of encode_frame; raises BadLength / BadHeader on bad input."""
    if len(bits) != FRAME_LEN:
        raise BadLength(f"expected {FRAME_LEN} bits, got {len(bits)}")
    if _bits_to_int(bits[:HEADER_LEN]) != HEADER:
        raise BadHeader("header bits do not match")
    address = _bits_to_int(bits[HEADER_LEN:HEADER_LEN + ADDRESS_LEN])
    data = _bits_to_int(bits[HEADER_LEN + ADDRESS_LEN:])
    return address, data


def frame_to_hex(frame: Codeword) -> str:
    """Frame as 4 hex digits, e.g. address 0xA5 / data 0x3 -> '5A53'."""
    return f"{_bits_to_int(frame.bits):04X}"


def hex_to_frame(text: str) -> tuple[int, int]:
    """Decode the 4-hex-digit text form back to (address, data)."""
    text = text.strip()
    if len(text) != 4:
        raise BadLength(f"expected 4 hex digits, got {len(text)}")
    try:
        word = int(text, 16)
    except ValueError as exc:
        raise BadLength(f"not hex digits: {text!r}") from exc
    return decode_frame(_int_to_bits(word, FRAME_LEN))


def symbol_to_payload(symbol: str, honk_free: bool = False) -> Payload:
    """Map a zone symbol to its data nibble, carrying the zone's honk flag."""
    index = SYMBOLS.get(symbol)
    if index is None:
        raise UnknownSymbol(f"no such zone symbol: {symbol!r}")
    return Payload(symbol_index=index, honk_free=honk_free)


def payload_to_symbol(payload: Payload) -> str:
    """Inverse symbol lookup for display; idle/unassigned indexes have none."""
    symbol = _INDEX_TO_SYMBOL.get(payload.symbol_index)
    if symbol is None:
        raise NoSymbol(f"index {payload.symbol_index} carries no symbol")
    return symbol


Frame = tuple[int, int]  # decoded (address, data); None in a stream means a gap


class TripleValidator:
    """Streaming triple-match check over decoded frames.

    Feed one decoded (address, data) frame, or None for a gap, per
    reception window.  Emits a ValidTransmission on every push that
    completes a run of three or more consecutive frames matching the
    local address with identical data, so a receiver sitting inside a
    zone keeps re-validating every window.  Instances are single-owner.
    """

    def __init__(self, local_address: int):
        self.local_address = local_address
        self._run_data: int | None = None
        self._run_len = 0

    def reset(self) -> None:
        self._run_data = None
        self._run_len = 0

    def push(self, frame: Frame | None, now: float = 0.0) -> ValidTransmission | None:
        if frame is None:
            self.reset()
            return None
        address, data = frame
        if address != self.local_address:
            self.reset()
            return None
        if data == self._run_data:
            self._run_len += 1
        else:
            self._run_data = data
            self._run_len = 1
        if self._run_len >= 3:
            return ValidTransmission(address=address,
                                     payload=Payload.unpack(data),
                                     observed_at=now)
        return None


def validate_reception(frames, local_address: int,
                       now: float = 0.0) -> ValidTransmission | None:
    """First valid transmission in an ordered frame sequence, if any.

    frames is an iterable of decoded (address, data) pairs with None
    marking a gap (decode failure or silence).  Returns the transmission
    from the earliest window of three consecutive matching frames, the
    moment a real decoder would raise its valid-transmission flag.
    """
    validator = TripleValidator(local_address)
    for frame in frames:
        result = validator.push(frame, now)
        if result is not None:
            return result
    return None
