"""Numeric kernels for the language model.

Matrices are C-order float64 numpy arrays throughout; 64-bit precision is
what lets the finite-difference gradient checks pass at tight tolerance.
Public operations validate shapes and reject non-finite inputs with
distinct errors. The optimizer and loss are written out by hand; numpy
supplies only elementwise arithmetic and matrix multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidArgument,
    InvalidTokenId,
    NonFiniteGradient,
    NonFiniteInput,
    ShapeMismatch,
)
from .rng import Rng

Matrix = np.ndarray


def check_finite(*arrays: np.ndarray, error: type = NonFiniteInput) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise error("array contains NaN or Inf")


def as_matrix(data, rows: int | None = None, cols: int | None = None) -> Matrix:
    """Coerce to a finite, C-order float64 2-D array."""
    m = np.ascontiguousarray(data, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    if rows is not None and m.shape != (rows, cols):
        raise ShapeMismatch(f"expected shape {(rows, cols)}, got {m.shape}")
    check_finite(m)
    return m


def gaussian_init(rows: int, cols: int, mean: float, std: float, seed: int) -> Matrix:
    """Matrix of i.i.d. N(mean, std^2) entries from the seeded stream."""
    if rows <= 0 or cols <= 0:
        raise InvalidArgument(f"dimensions must be positive, got {rows}x{cols}")
    if std <= 0:
        raise InvalidArgument(f"std must be > 0, got {std}")
    return Rng(seed).normal(rows * cols, mean=mean, std=std).reshape(rows, cols)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    check_finite(a, b)
    return a @ b


def add(a: Matrix, b: Matrix) -> Matrix:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot add {a.shape} and {b.shape}")
    check_finite(a, b)
    return a + b


def sigmoid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    check_finite(x)
    return _sigmoid(x)


def tanh(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    check_finite(x)
    return np.tanh(x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # Split by sign so exp never overflows.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax, stabilized by max subtraction."""
    logits = np.asarray(logits, dtype=np.float64)
    check_finite(logits)
    return _softmax(logits)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_cross_entropy(logits: np.ndarray, target_id: int) -> tuple[float, np.ndarray]:
    """Loss -log p[target] and its gradient p - onehot(target).

    Accepts a single logit vector of shape (V,) or (1, V).
    """
    logits = np.asarray(logits, dtype=np.float64)
    flat = logits.reshape(-1)
    if logits.ndim == 2 and logits.shape[0] != 1 or logits.ndim > 2:
        raise ShapeMismatch(f"expected one logit row, got shape {logits.shape}")
    check_finite(flat)
    if not 0 <= target_id < flat.shape[0]:
        raise InvalidTokenId(f"target id {target_id} out of range for {flat.shape[0]} classes")
    shifted = flat - flat.max()
    log_z = np.log(np.exp(shifted).sum())
    loss = float(log_z - shifted[target_id])
    dlogits = _softmax(flat)
    dlogits[target_id] -= 1.0
    return loss, dlogits.reshape(logits.shape)


def masked_cross_entropy(
    logits: np.ndarray, targets: np.ndarray, weights: np.ndarray
) -> tuple[float, float, np.ndarray]:
    """Weighted sum of per-position cross-entropies over a logits block.

    logits: (N, V), targets: (N,) int ids, weights: (N,) with 0 masking a
    position out entirely. Returns (loss_sum, weight_sum, dlogits) where
    dlogits is the gradient of loss_sum.
    """
    n, v = logits.shape
    if targets.shape != (n,) or weights.shape != (n,):
        raise ShapeMismatch("targets/weights do not match logits rows")
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    z = exp.sum(axis=1)
    log_probs = shifted[np.arange(n), targets] - np.log(z)
    loss_sum = float(-(weights * log_probs).sum())
    dlogits = exp / z[:, None]
    dlogits[np.arange(n), targets] -= 1.0
    dlogits *= weights[:, None]
    return loss_sum, float(weights.sum()), dlogits


@dataclass
class AdamState:
    """First/second moment estimates plus hyperparameters for Adam."""

    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def for_params(cls, params: dict[str, np.ndarray], lr: float = 0.001,
                   beta1: float = 0.9, beta2: float = 0.999,
                   epsilon: float = 1e-8) -> "AdamState":
        state = cls(lr=lr, beta1=beta1, beta2=beta2, epsilon=epsilon)
        for name, p in params.items():
            state.m[name] = np.zeros_like(p)
            state.v[name] = np.zeros_like(p)
        return state


def adam_step(
    params: dict[str, np.ndarray], grads: dict[str, np.ndarray], state: AdamState
) -> None:
    """One bias-corrected Adam update, applied to params in place.

    update = lr * m_hat / (sqrt(v_hat) + epsilon)
    """
    if set(grads) != set(params):
        raise ShapeMismatch("gradient keys do not match parameter keys")
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ShapeMismatch(f"{name}: gradient shape {g.shape} != param shape {p.shape}")
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradient(f"{name}: gradient contains NaN or Inf")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    bc1 = 1.0 - b1**state.t
    bc2 = 1.0 - b2**state.t
    for name, p in params.items():
        g = grads[name]
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        p -= state.lr * (m / bc1) / (np.sqrt(v / bc2) + state.epsilon)


def dropout(x: np.ndarray, rate: float, training: bool, seed: int) -> np.ndarray:
    """Inverted dropout: zero with probability rate, scale survivors by 1/(1-rate)."""
    if not 0.0 <= rate < 1.0:
        raise InvalidArgument(f"dropout rate must be in [0, 1), got {rate}")
    x = np.asarray(x, dtype=np.float64)
    check_finite(x)
    if not training or rate == 0.0:
        return x
    return x * dropout_mask(x.shape, rate, Rng(seed))


def dropout_mask(shape: tuple[int, ...], rate: float, rng: Rng) -> np.ndarray:
    """Pre-scaled keep mask: entries are 0 or 1/(1-rate)."""
    keep = rng.uniform(int(np.prod(shape))).reshape(shape) >= rate
    return keep.astype(np.float64) / (1.0 - rate)
