"""DAC encoder and soft joint decoder.

Encoding uses overlapped interval widths (1-p)^gamma, p^gamma for the first
N-T symbols and the plain widths 1-p, p for the last T, then terminates the
stream with a minimal in-interval tag.

Decoding is a breadth-first tree search: each hypothesis tracks private
coder registers, a value register, a bit cursor, a normalized HMM forward
vector over z_t = x_t ^ y_t, and a log2-likelihood metric.  Whenever the
value register falls in the overlap region the hypothesis forks into both
symbols; after every symbol at most M hypotheses with the best metric
survive.  Branch state is held in parallel numpy arrays so one decoding
step is a handful of vectorized operations over all live hypotheses, and
the decoded prefixes are recovered by traceback instead of being copied
around every step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .arithmetic import (
    CoderRegisters,
    ScaledWidths,
    renormalize,
    scaled_widths,
    split_interval,
    terminate,
)
from .errors import DecodeExhausted, InvalidParameter, LengthMismatch
from .hmm import HmmModel


@dataclass(frozen=True)
class DacParams:
    """Codec parameters: bias p, overlap factor gamma, search width M,
    non-overlapped tail length T, register precision in bits."""

    p: float
    gamma: float
    M: int = 2048
    T: int = 15
    precision: int = 16

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise InvalidParameter(f"p must be in (0, 1), got {self.p}")
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidParameter(f"gamma must be in (0, 1], got {self.gamma}")
        if self.M < 1:
            raise InvalidParameter("M must be >= 1")
        if self.T < 0:
            raise InvalidParameter("T must be >= 0")


@dataclass(frozen=True)
class Codeword:
    """Emitted bit sequence (MSB-first) and the symbol count it encodes."""

    bits: np.ndarray
    n_symbols: int

    @property
    def n_bits(self) -> int:
        return len(self.bits)

    @property
    def rate(self) -> float:
        return self.n_bits / self.n_symbols


class TernaryDecision(enum.Enum):
    ZERO = 0
    AMBIGUOUS = 1
    ONE = 2


def decide(value: int, low: int, high: int, widths: ScaledWidths) -> TernaryDecision:
    """Classify the value register against the two (possibly overlapping)
    sub-intervals of [low, high)."""
    (_, end0), (start1, _) = split_interval(low, high, widths)
    if value < start1:
        return TernaryDecision.ZERO
    if value >= end0:
        return TernaryDecision.ONE
    return TernaryDecision.AMBIGUOUS


def encode(x, params: DacParams) -> Codeword:
    """Encode a binary sequence; pure function of (x, params)."""
    x = np.asarray(x, dtype=np.uint8)
    n = len(x)
    if n < 1:
        raise InvalidParameter("cannot encode an empty sequence")
    if params.T > n:
        raise InvalidParameter(f"tail length {params.T} exceeds block length {n}")
    body = scaled_widths(params.p, params.gamma, params.precision)
    tail = scaled_widths(params.p, 1.0, params.precision)
    regs = CoderRegisters(precision=params.precision)
    out: list[int] = []
    for t in range(n):
        widths = body if t < n - params.T else tail
        iv0, iv1 = split_interval(regs.low, regs.high, widths)
        regs.low, regs.high = iv1 if x[t] else iv0
        renormalize(regs, out.append)
    terminate(regs, out.append)
    return Codeword(np.array(out, dtype=np.uint8), n)


def prune_indices(metrics: np.ndarray, m: int) -> np.ndarray:
    """Indices of the M best-metric branches, in original (creation) order.

    Ties keep the earlier-created branch; the stable sort plus the final
    index sort make the selection deterministic.
    """
    if len(metrics) <= m:
        return np.arange(len(metrics))
    order = np.argsort(-metrics, kind="stable")
    keep = np.sort(order[:m])
    return keep


def decode(cw: Codeword, y, model: HmmModel, params: DacParams) -> np.ndarray:
    """Jointly decode x from its codeword and the side information y.

    Returns the best-metric hypothesis after all n symbols; decoding
    "failure" (a wrong best hypothesis) is for the caller to detect.
    Raises DecodeExhausted when every hypothesis demands more codeword bits
    than exist (plus a W-bit zero-padding allowance), which only happens on
    truncated or corrupt input.
    """
    n = cw.n_symbols
    y = np.asarray(y, dtype=np.uint8)
    if len(y) != n:
        raise LengthMismatch(f"side information length {len(y)} != {n} symbols")
    if params.T > n:
        raise InvalidParameter(f"tail length {params.T} exceeds block length {n}")
    W = params.precision
    full, half, quarter = 1 << W, 1 << (W - 1), 1 << (W - 2)
    body = scaled_widths(params.p, params.gamma, W)
    tail = scaled_widths(params.p, 1.0, W)

    # Bit source: the codeword followed by W padding zeros.  A branch may
    # read into the padding (the terminating tag is shorter than a full
    # register); reading past it marks the branch dead.
    limit = cw.n_bits + W
    bits = np.concatenate([cw.bits, np.zeros(W, dtype=np.uint8)]).astype(np.int64)
    last = len(bits) - 1

    A = model.A
    Bt = model.B.T.copy()  # Bt[k] = emission probabilities of symbol k per state
    pi = model.pi

    low = np.zeros(1, dtype=np.int64)
    high = np.full(1, full, dtype=np.int64)
    value = np.array([int(bits[:W] @ (1 << np.arange(W - 1, -1, -1)))], dtype=np.int64)
    cursor = np.full(1, W, dtype=np.int64)
    alpha = pi[None, :].copy()
    metric = np.zeros(1)
    history: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []

    for t in range(n):
        widths = body if t < n - params.T else tail
        rng = high - low
        end0 = low + rng * widths.q0 // full
        start1 = low + rng * (full - widths.q1) // full
        forces_one = value >= end0
        ambiguous = (value >= start1) & ~forces_one

        # Children in creation order: parent-major, symbol 0 before 1.
        counts = np.where(ambiguous, 2, 1)
        parent = np.repeat(np.arange(len(low)), counts)
        first = np.ones(len(parent), dtype=bool)
        first[1:] = parent[1:] != parent[:-1]
        sym = np.ones(len(parent), dtype=np.int64)
        sym[first] = forces_one[parent[first]]

        low = np.where(sym == 0, low[parent], start1[parent])
        high = np.where(sym == 0, end0[parent], high[parent])
        value = value[parent]
        cursor = cursor[parent]

        # Forward step on z_t for every extension, forced ones included.
        z = sym ^ int(y[t])
        prev = pi[None, :] if t == 0 else alpha[parent] @ A
        unnorm = prev * Bt[z]
        delta = unnorm.sum(axis=1)
        dead = delta <= 0.0
        safe = np.where(dead, 1.0, delta)
        alpha = unnorm / safe[:, None]
        alpha[dead] = 1.0 / model.n_states
        metric = metric[parent] + np.where(dead, -np.inf, np.log2(safe))

        # Renormalize all branches in lockstep, refilling value registers.
        while True:
            e1 = high <= half
            e2 = low >= half
            e3 = ~e1 & ~e2 & (low >= quarter) & (high <= 3 * quarter)
            active = e1 | e2 | e3
            if not active.any():
                break
            off = np.where(e2, half, np.where(e3, quarter, 0))
            low = np.where(active, (low - off) << 1, low)
            high = np.where(active, (high - off) << 1, high)
            refill = bits[np.minimum(cursor, last)]
            value = np.where(active, ((value - off) << 1) | refill, value)
            cursor = np.where(active, cursor + 1, cursor)
        metric[cursor > limit] = -np.inf

        keep = prune_indices(metric, params.M)
        history.append((parent, sym, keep))
        low, high, value, cursor = low[keep], high[keep], value[keep], cursor[keep]
        alpha, metric = alpha[keep], metric[keep]

    best = int(np.argmax(metric))
    if metric[best] == -np.inf:
        raise DecodeExhausted("all hypotheses ran out of codeword bits")

    decoded = np.empty(n, dtype=np.uint8)
    i = best
    for t in range(n - 1, -1, -1):
        parent, sym, keep = history[t]
        j = keep[i]
        decoded[t] = sym[j]
        i = parent[j]
    return decoded
