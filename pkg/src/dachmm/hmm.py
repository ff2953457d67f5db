"""Hidden Markov model: container, sampler, forward algorithm, entropy rate.

Conventions: A[j, i] = P(s_t = i | s_{t-1} = j), B[i, k] = P(z_t = k | s_t = i),
pi[i] = P(s_1 = i).  All likelihoods accumulate in log2 (bits), since rates
are reported in bits per symbol.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateObservation, InvalidParameter, NonErgodicChain

_ROW_TOL = 1e-12


@dataclass
class HmmModel:
    A: np.ndarray
    B: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        self.B = np.asarray(self.B, dtype=float)
        self.pi = np.asarray(self.pi, dtype=float)
        if self.A.ndim != 2 or self.A.shape[0] != self.A.shape[1]:
            raise InvalidParameter("A must be a square matrix")
        if self.B.ndim != 2 or self.B.shape[0] != self.A.shape[0]:
            raise InvalidParameter("B must have one row per state")
        if self.pi.shape != (self.A.shape[0],):
            raise InvalidParameter("pi must have one entry per state")
        for name, m in (("A", self.A), ("B", self.B), ("pi", self.pi[None, :])):
            if (m < 0).any():
                raise InvalidParameter(f"{name} has negative entries")
            if np.abs(m.sum(axis=1) - 1.0).max() > _ROW_TOL:
                raise InvalidParameter(f"rows of {name} must sum to 1")

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.B.shape[1]


def from_table_scalars(a00: float, a11: float, b00: float, b11: float,
                       pi=None) -> HmmModel:
    """Build the 2-state/2-output model from its four free scalars.

    Rows are completed stochastically: a01 = 1 - a00, a10 = 1 - a11,
    b0(1) = 1 - b0(0), b1(0) = 1 - b1(1).  When pi is omitted, the
    stationary distribution of A is used.
    """
    for name, v in (("a00", a00), ("a11", a11), ("b00", b00), ("b11", b11)):
        if not 0.0 < v < 1.0:
            raise InvalidParameter(f"{name} must be in (0, 1), got {v}")
    A = np.array([[a00, 1.0 - a00], [1.0 - a11, a11]])
    B = np.array([[b00, 1.0 - b00], [1.0 - b11, b11]])
    if pi is None:
        pi = stationary_distribution(A)
    return HmmModel(A, B, pi)


def load_model(path) -> HmmModel:
    """Read a model from a JSON file.

    Accepts either the full form {"A": ..., "B": ..., "pi": ...} (pi
    optional, defaults to stationary) or the 4-scalar shorthand
    {"a00": ..., "a11": ..., "b00": ..., "b11": ...}.
    """
    with open(path) as fh:
        cfg = json.load(fh)
    if "A" in cfg:
        A = np.asarray(cfg["A"], dtype=float)
        pi = cfg.get("pi")
        if pi is None:
            pi = stationary_distribution(A)
        return HmmModel(A, cfg["B"], pi)
    try:
        return from_table_scalars(cfg["a00"], cfg["a11"], cfg["b00"], cfg["b11"],
                                  pi=cfg.get("pi"))
    except KeyError as exc:
        raise InvalidParameter(f"model file {path} missing key {exc}") from exc


def stationary_distribution(A, tol: float = 1e-10) -> np.ndarray:
    """Stationary row vector v with v @ A = v, sum(v) = 1.

    Uses the eigenvector of A^T at eigenvalue 1; raises NonErgodicChain if
    that eigenvalue is not simple or the residual exceeds tol.
    """
    A = np.asarray(A, dtype=float)
    w, vecs = np.linalg.eig(A.T)
    close = np.where(np.abs(w - 1.0) <= 1e-8)[0]
    if len(close) != 1:
        raise NonErgodicChain(f"{len(close)} unit eigenvalues; chain not ergodic")
    v = np.real(vecs[:, close[0]])
    v = v / v.sum()
    if (v < -tol).any() or np.abs(v @ A - v).max() > tol:
        raise NonErgodicChain("stationary solve failed residual check")
    return np.clip(v, 0.0, None) / np.clip(v, 0.0, None).sum()


@dataclass
class ForwardState:
    """Normalized forward vector plus the accumulated log2-likelihood."""

    alpha: np.ndarray
    loglik: float
    t: int


def forward_init(model: HmmModel, z1: int) -> ForwardState:
    unnorm = model.pi * model.B[:, z1]
    delta = unnorm.sum()
    if delta <= 0.0:
        raise DegenerateObservation(f"observation {z1} impossible at t=1")
    return ForwardState(unnorm / delta, math.log2(delta), 1)


def forward_step(state: ForwardState, model: HmmModel, zt: int) -> ForwardState:
    unnorm = (state.alpha @ model.A) * model.B[:, zt]
    delta = unnorm.sum()
    if delta <= 0.0:
        raise DegenerateObservation(f"observation {zt} impossible at t={state.t + 1}")
    return ForwardState(unnorm / delta, state.loglik + math.log2(delta), state.t + 1)


def loglik(model: HmmModel, z) -> float:
    """log2 P(z_1..z_n | model), exact marginal over all state paths.

    The per-step normalizers multiply back to the joint probability, so the
    sum of their logs is the sequence log-likelihood.  The hot loop runs on
    plain floats: sequences of 10^6 observations are routine for entropy
    estimation and per-step numpy dispatch would dominate.
    """
    z = np.asarray(z)
    if len(z) == 0:
        raise InvalidParameter("observation sequence is empty")
    A_rows = model.A.tolist()
    B_cols = model.B.T.tolist()  # B_cols[k][i] = P(z=k | s=i)
    K = model.n_states
    alpha = [model.pi[i] * B_cols[z[0]][i] for i in range(K)]
    total = 0.0
    delta = sum(alpha)
    if delta <= 0.0:
        raise DegenerateObservation("observation impossible at t=1")
    total += math.log2(delta)
    alpha = [a / delta for a in alpha]
    for t in range(1, len(z)):
        b = B_cols[z[t]]
        new = [
            b[i] * sum(alpha[j] * A_rows[j][i] for j in range(K))
            for i in range(K)
        ]
        delta = sum(new)
        if delta <= 0.0:
            raise DegenerateObservation(f"observation impossible at t={t + 1}")
        total += math.log2(delta)
        alpha = [a / delta for a in new]
    return total


def sample(model: HmmModel, n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Draw (states, observations) of length n; deterministic given seed."""
    if n < 1:
        raise InvalidParameter("sample length must be >= 1")
    rng = np.random.default_rng(seed)
    A_cum = model.A.cumsum(axis=1).tolist()
    B_cum = model.B.cumsum(axis=1).tolist()
    pi_cum = model.pi.cumsum().tolist()
    u_state = rng.random(n).tolist()
    u_obs = rng.random(n).tolist()
    states = np.empty(n, dtype=np.int64)
    obs = np.empty(n, dtype=np.int64)

    def pick(cum, u):
        for i, c in enumerate(cum):
            if u < c:
                return i
        return len(cum) - 1

    s = pick(pi_cum, u_state[0])
    states[0] = s
    obs[0] = pick(B_cum[s], u_obs[0])
    for t in range(1, n):
        s = pick(A_cum[s], u_state[t])
        states[t] = s
        obs[t] = pick(B_cum[s], u_obs[t])
    return states, obs


def entropy_rate(model: HmmModel, n: int, seed) -> float:
    """Monte-Carlo entropy rate in bits/symbol: -log2 P(sample)/n."""
    _, z = sample(model, n, seed)
    return -loglik(model, z) / n
