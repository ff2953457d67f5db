"""Fixed-precision integer arithmetic coding engine.

Interval state lives in W-bit integer registers.  `low` is inclusive and
`high` is exclusive, both in [0, 2^W].  Renormalization keeps the range at
least a quarter of the full scale; underflow (E3) expansions are counted in
`pending_bits` and flushed as complements after the next emitted bit, so
output streams without carry rewrites.

The overlap-aware interval split is the one piece that is not classic
arithmetic coding: symbol widths are fixed-point images of (1-p)^gamma and
p^gamma, so for gamma < 1 the two sub-intervals overlap and the split is no
longer a partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidParameter


@dataclass
class ScaledWidths:
    """Fixed-point symbol widths on the 2^W scale.

    q0 / 2^W approximates (1-p)^gamma, q1 / 2^W approximates p^gamma.
    q0 + q1 >= 2^W always (intervals overlap or abut); equality holds at
    gamma = 1, which is the classic non-overlapped split.
    """

    q0: int
    q1: int
    precision: int = 16


def scaled_widths(p: float, gamma: float, precision: int = 16) -> ScaledWidths:
    """Quantize the modified symbol probabilities to W-bit fixed point.

    Round-to-nearest, clamped so neither symbol gets an empty width.  The
    same quantization must be used by encoder and decoder.
    """
    if not 0.0 < p < 1.0:
        raise InvalidParameter(f"p must be in (0, 1), got {p}")
    if not 0.0 < gamma <= 1.0:
        raise InvalidParameter(f"gamma must be in (0, 1], got {gamma}")
    full = 1 << precision
    q0 = int((1.0 - p) ** gamma * full + 0.5)
    if gamma == 1.0:
        # Exact partition: rounding both widths independently can leave a
        # one-unit gap or overlap, which would break unambiguous decoding.
        q0 = min(max(q0, 1), full - 1)
        return ScaledWidths(q0, full - q0, precision)
    q1 = int(p**gamma * full + 0.5)
    q0 = min(max(q0, 1), full)
    q1 = min(max(q1, 1), full)
    if q0 + q1 < full:
        # (1-p)^g + p^g >= 1 for g <= 1; restore the invariant lost to rounding.
        q1 = full - q0
    return ScaledWidths(q0, q1, precision)


@dataclass
class CoderRegisters:
    """W-bit interval registers plus the outstanding-underflow counter."""

    precision: int = 16
    low: int = 0
    high: int = field(default=0)
    pending_bits: int = 0

    def __post_init__(self):
        if self.high == 0:
            self.high = 1 << self.precision

    @property
    def full(self) -> int:
        return 1 << self.precision

    @property
    def half(self) -> int:
        return 1 << (self.precision - 1)

    @property
    def quarter(self) -> int:
        return 1 << (self.precision - 2)


def split_interval(low: int, high: int, widths: ScaledWidths) -> tuple[tuple[int, int], tuple[int, int]]:
    """Scale the symbol widths onto [low, high).

    Returns ((low0, high0), (low1, high1)) with floor division throughout;
    the decoder must apply the identical arithmetic.  The two intervals
    overlap on [low1, high0) whenever q0 + q1 > 2^W.
    """
    full = 1 << widths.precision
    rng = high - low
    end0 = low + rng * widths.q0 // full
    start1 = low + rng * (full - widths.q1) // full
    return (low, end0), (start1, high)


def _emit(bit_sink, bit: int, regs: CoderRegisters) -> None:
    bit_sink(bit)
    for _ in range(regs.pending_bits):
        bit_sink(bit ^ 1)
    regs.pending_bits = 0


def renormalize(regs: CoderRegisters, bit_sink) -> None:
    """Expand the interval until range >= quarter scale, emitting MSB bits.

    E1: interval in the lower half, emit 0.  E2: upper half, emit 1.
    E3: straddles the midpoint inside the middle half; defer one bit.
    """
    half, quarter = regs.half, regs.quarter
    while True:
        if regs.high <= half:
            _emit(bit_sink, 0, regs)
        elif regs.low >= half:
            _emit(bit_sink, 1, regs)
            regs.low -= half
            regs.high -= half
        elif regs.low >= quarter and regs.high <= 3 * quarter:
            regs.pending_bits += 1
            regs.low -= quarter
            regs.high -= quarter
        else:
            break
        regs.low <<= 1
        regs.high <<= 1


def terminate(regs: CoderRegisters, bit_sink) -> None:
    """Emit the shortest binary fraction that lies inside [low, high).

    After renormalization the range exceeds a quarter of the scale, so a
    multiple of 2^(W-2) always fits: at most 2 tag bits plus pending.
    """
    for k in range(1, regs.precision + 1):
        step = 1 << (regs.precision - k)
        v = -(-regs.low // step)
        if v * step < regs.high:
            for j in range(k - 1, -1, -1):
                _emit(bit_sink, (v >> j) & 1, regs)
            return
    raise AssertionError("no terminating tag found; registers corrupt")
