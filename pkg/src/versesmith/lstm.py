"""Word-level LSTM language model with exact hand-written gradients.

Architecture: embedding lookup -> LSTM layer 1 -> dropout -> LSTM layer 2
-> dropout -> dense projection to vocabulary logits. The cell is the
standard LSTM with a forget gate and no peepholes; gates are packed in the
fixed order [input, forget, candidate, output] as rows of the 4H-wide
parameter block:

    a = W x + U h + b            (4H,)
    i = sigmoid(a[0:H])    f = sigmoid(a[H:2H])
    g = tanh(a[2H:3H])     o = sigmoid(a[3H:4H])
    c' = f * c + i * g     h' = o * tanh(c')

backward() backpropagates through the full unrolled sequence (BPTT) and
returns exact gradients for every tensor, including only-touched embedding
rows. Dropout masks depend solely on (seed, shape), never on parameter
values, so finite-difference checks remain valid with dropout active.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidTokenId, ShapeMismatch
from .numerics import _sigmoid, dropout_mask
from .rng import Rng, derive_seed


@dataclass
class LstmLayerParams:
    """One layer's packed gate parameters: w (4H,D), u (4H,H), b (4H,)."""

    w: np.ndarray
    u: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        four_h, d = self.w.shape
        if four_h % 4 != 0:
            raise ShapeMismatch(f"gate block height {four_h} is not a multiple of 4")
        h = four_h // 4
        if self.u.shape != (four_h, h) or self.b.shape != (four_h,):
            raise ShapeMismatch(
                f"inconsistent layer shapes: w={self.w.shape} u={self.u.shape} b={self.b.shape}"
            )

    @property
    def hidden_size(self) -> int:
        return self.w.shape[0] // 4

    @property
    def input_size(self) -> int:
        return self.w.shape[1]


@dataclass
class ModelParams:
    """All trainable tensors of the embedding + 2xLSTM + projection stack."""

    embedding: np.ndarray  # (V, E)
    layer1: LstmLayerParams  # D = E
    layer2: LstmLayerParams  # D = H
    proj_w: np.ndarray  # (V, H)
    proj_b: np.ndarray  # (V,)

    def __post_init__(self):
        v, e = self.embedding.shape
        h = self.layer1.hidden_size
        if self.layer1.input_size != e:
            raise ShapeMismatch("layer1 input size must equal embedding dim")
        if self.layer2.input_size != h or self.layer2.hidden_size != h:
            raise ShapeMismatch("layer2 must map hidden size to hidden size")
        if self.proj_w.shape != (v, h) or self.proj_b.shape != (v,):
            raise ShapeMismatch("projection shapes inconsistent with V and H")

    @property
    def vocab_size(self) -> int:
        return self.embedding.shape[0]

    @property
    def embedding_dim(self) -> int:
        return self.embedding.shape[1]

    @property
    def hidden_size(self) -> int:
        return self.layer1.hidden_size

    def tensors(self) -> dict[str, np.ndarray]:
        """All parameter tensors keyed by name, in fixed declaration order."""
        return {
            "embedding": self.embedding,
            "layer1.w": self.layer1.w,
            "layer1.u": self.layer1.u,
            "layer1.b": self.layer1.b,
            "layer2.w": self.layer2.w,
            "layer2.u": self.layer2.u,
            "layer2.b": self.layer2.b,
            "proj_w": self.proj_w,
            "proj_b": self.proj_b,
        }

    def param_count(self) -> int:
        return sum(t.size for t in self.tensors().values())

    def copy(self) -> "ModelParams":
        t = {name: arr.copy() for name, arr in self.tensors().items()}
        return ModelParams(
            embedding=t["embedding"],
            layer1=LstmLayerParams(t["layer1.w"], t["layer1.u"], t["layer1.b"]),
            layer2=LstmLayerParams(t["layer2.w"], t["layer2.u"], t["layer2.b"]),
            proj_w=t["proj_w"],
            proj_b=t["proj_b"],
        )

    @classmethod
    def init(
        cls,
        vocab_size: int,
        embedding_dim: int = 100,
        hidden_size: int = 50,
        seed: int = 0,
        init_mean: float = 0.0,
        init_std: float = 0.01,
    ) -> "ModelParams":
        """Gaussian-initialized parameters, one derived seed per tensor."""
        if min(vocab_size, embedding_dim, hidden_size) <= 0:
            raise InvalidArgument("model dimensions must be positive")
        if init_std <= 0:
            raise InvalidArgument(f"init_std must be > 0, got {init_std}")
        v, e, h = vocab_size, embedding_dim, hidden_size
        shapes = {
            "embedding": (v, e),
            "layer1.w": (4 * h, e),
            "layer1.u": (4 * h, h),
            "layer1.b": (4 * h,),
            "layer2.w": (4 * h, h),
            "layer2.u": (4 * h, h),
            "layer2.b": (4 * h,),
            "proj_w": (v, h),
            "proj_b": (v,),
        }
        t = {}
        for k, (name, shape) in enumerate(shapes.items()):
            rng = Rng(derive_seed(seed, k))
            t[name] = rng.normal(int(np.prod(shape)), init_mean, init_std).reshape(shape)
        return cls(
            embedding=t["embedding"],
            layer1=LstmLayerParams(t["layer1.w"], t["layer1.u"], t["layer1.b"]),
            layer2=LstmLayerParams(t["layer2.w"], t["layer2.u"], t["layer2.b"]),
            proj_w=t["proj_w"],
            proj_b=t["proj_b"],
        )


def lstm_cell_forward(
    x: np.ndarray, state: tuple[np.ndarray, np.ndarray], layer: LstmLayerParams
) -> tuple[np.ndarray, np.ndarray, dict]:
    """One cell step on a single input vector x (D,) and state (h, c)."""
    h_prev, c_prev = state
    hs = layer.hidden_size
    if x.shape != (layer.input_size,) or h_prev.shape != (hs,) or c_prev.shape != (hs,):
        raise ShapeMismatch(
            f"cell expects x ({layer.input_size},) and state ({hs},), "
            f"got {x.shape}, {h_prev.shape}, {c_prev.shape}"
        )
    a = layer.w @ x + layer.u @ h_prev + layer.b
    i = _sigmoid(a[:hs])
    f = _sigmoid(a[hs : 2 * hs])
    g = np.tanh(a[2 * hs : 3 * hs])
    o = _sigmoid(a[3 * hs :])
    c = f * c_prev + i * g
    tanh_c = np.tanh(c)
    h = o * tanh_c
    cache = {"x": x, "h_prev": h_prev, "c_prev": c_prev, "i": i, "f": f, "g": g,
             "o": o, "tanh_c": tanh_c}
    return h, c, cache


@dataclass
class _LayerCache:
    x: np.ndarray  # (B, T, D) layer input
    i: np.ndarray  # gate activations, each (B, T, H)
    f: np.ndarray
    g: np.ndarray
    o: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray
    h: np.ndarray


@dataclass
class ForwardCache:
    """Intermediates retained by forward() for the matching backward()."""

    ids: np.ndarray  # (B, T)
    x: np.ndarray  # (B, T, E) embedded inputs
    layer1: _LayerCache
    layer2: _LayerCache
    mask1: np.ndarray | None
    mask2: np.ndarray | None
    h_out: np.ndarray  # (B, T, H) projection input (post-dropout)


def _layer_forward(layer: LstmLayerParams, x_seq: np.ndarray) -> _LayerCache:
    b, t, d = x_seq.shape
    hs = layer.hidden_size
    xw = (x_seq.reshape(b * t, d) @ layer.w.T).reshape(b, t, 4 * hs)
    cache = _LayerCache(
        x=x_seq,
        **{k: np.empty((b, t, hs)) for k in ("i", "f", "g", "o", "c", "tanh_c", "h")},
    )
    h = np.zeros((b, hs))
    c = np.zeros((b, hs))
    u_t = layer.u.T
    for step in range(t):
        a = xw[:, step] + h @ u_t + layer.b
        i = _sigmoid(a[:, :hs])
        f = _sigmoid(a[:, hs : 2 * hs])
        g = np.tanh(a[:, 2 * hs : 3 * hs])
        o = _sigmoid(a[:, 3 * hs :])
        c = f * c + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c
        cache.i[:, step] = i
        cache.f[:, step] = f
        cache.g[:, step] = g
        cache.o[:, step] = o
        cache.c[:, step] = c
        cache.tanh_c[:, step] = tanh_c
        cache.h[:, step] = h
    return cache


def _layer_backward(
    layer: LstmLayerParams, cache: _LayerCache, dh_seq: np.ndarray
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    b, t, hs = dh_seq.shape
    d = layer.input_size
    da_seq = np.empty((b, t, 4 * hs))
    dh_next = np.zeros((b, hs))
    dc_next = np.zeros((b, hs))
    for step in reversed(range(t)):
        i = cache.i[:, step]
        f = cache.f[:, step]
        g = cache.g[:, step]
        o = cache.o[:, step]
        tanh_c = cache.tanh_c[:, step]
        c_prev = cache.c[:, step - 1] if step > 0 else np.zeros((b, hs))
        dh = dh_seq[:, step] + dh_next
        do = dh * tanh_c
        dc = dc_next + dh * o * (1.0 - tanh_c * tanh_c)
        dc_next = dc * f
        da = da_seq[:, step]
        da[:, :hs] = dc * g * i * (1.0 - i)
        da[:, hs : 2 * hs] = dc * c_prev * f * (1.0 - f)
        da[:, 2 * hs : 3 * hs] = dc * i * (1.0 - g * g)
        da[:, 3 * hs :] = do * o * (1.0 - o)
        dh_next = da @ layer.u
    da_flat = da_seq.reshape(b * t, 4 * hs)
    dw = da_flat.T @ cache.x.reshape(b * t, d)
    db = da_flat.sum(axis=0)
    if t > 1:
        du = (
            da_seq[:, 1:].reshape(b * (t - 1), 4 * hs).T
            @ cache.h[:, : t - 1].reshape(b * (t - 1), hs)
        )
    else:
        du = np.zeros_like(layer.u)
    dx = (da_flat @ layer.w).reshape(b, t, d)
    return dx, {"w": dw, "u": du, "b": db}


def forward_batch(
    params: ModelParams,
    ids: np.ndarray,
    training: bool = False,
    dropout_rate: float = 0.0,
    dropout_seed: int = 0,
) -> tuple[np.ndarray, ForwardCache]:
    """Run a (B, T) batch of token ids; returns (B, T, V) logits + cache.

    State starts at zero for every sequence; dropout is applied after each
    LSTM layer only when training is true.
    """
    ids = np.asarray(ids)
    if ids.ndim != 2 or ids.shape[1] == 0:
        raise InvalidArgument(f"ids must be a non-empty (B, T) array, got shape {ids.shape}")
    v = params.vocab_size
    if ids.min() < 0 or ids.max() >= v:
        raise InvalidTokenId(f"token ids must lie in [0, {v})")
    b, t = ids.shape
    hs = params.hidden_size
    x = params.embedding[ids]
    cache1 = _layer_forward(params.layer1, x)
    mask1 = mask2 = None
    h1 = cache1.h
    if training and dropout_rate > 0.0:
        rng = Rng(dropout_seed)
        mask1 = dropout_mask((b, t, hs), dropout_rate, rng)
        mask2 = dropout_mask((b, t, hs), dropout_rate, rng)
        h1 = h1 * mask1
    cache2 = _layer_forward(params.layer2, h1)
    h2 = cache2.h
    if mask2 is not None:
        h2 = h2 * mask2
    logits = (h2.reshape(b * t, hs) @ params.proj_w.T + params.proj_b).reshape(b, t, v)
    return logits, ForwardCache(ids=ids, x=x, layer1=cache1, layer2=cache2,
                                mask1=mask1, mask2=mask2, h_out=h2)


def backward_batch(
    params: ModelParams, cache: ForwardCache, dlogits: np.ndarray
) -> dict[str, np.ndarray]:
    """Exact gradients of the loss whose dlogits are given, for every tensor."""
    b, t = cache.ids.shape
    v = params.vocab_size
    if dlogits.shape != (b, t, v):
        raise ShapeMismatch(
            f"dlogits shape {dlogits.shape} does not match forward cache ({b}, {t}, {v})"
        )
    hs = params.hidden_size
    dl = dlogits.reshape(b * t, v)
    grads: dict[str, np.ndarray] = {}
    grads["proj_w"] = dl.T @ cache.h_out.reshape(b * t, hs)
    grads["proj_b"] = dl.sum(axis=0)
    dh2 = (dl @ params.proj_w).reshape(b, t, hs)
    if cache.mask2 is not None:
        dh2 = dh2 * cache.mask2
    dh1, layer2_grads = _layer_backward(params.layer2, cache.layer2, dh2)
    if cache.mask1 is not None:
        dh1 = dh1 * cache.mask1
    dx, layer1_grads = _layer_backward(params.layer1, cache.layer1, dh1)
    grads["layer2.w"] = layer2_grads["w"]
    grads["layer2.u"] = layer2_grads["u"]
    grads["layer2.b"] = layer2_grads["b"]
    grads["layer1.w"] = layer1_grads["w"]
    grads["layer1.u"] = layer1_grads["u"]
    grads["layer1.b"] = layer1_grads["b"]
    demb = np.zeros_like(params.embedding)
    np.add.at(demb, cache.ids, dx)
    grads["embedding"] = demb
    return grads


def forward(
    params: ModelParams,
    id_sequence,
    training: bool = False,
    dropout_rate: float = 0.0,
    dropout_seed: int = 0,
) -> tuple[np.ndarray, ForwardCache]:
    """Single-sequence forward pass: (T, V) logits plus the BPTT cache."""
    ids = np.asarray(list(id_sequence), dtype=np.int64)
    if ids.size == 0:
        raise InvalidArgument("empty id sequence")
    logits, cache = forward_batch(
        params, ids[None, :], training=training,
        dropout_rate=dropout_rate, dropout_seed=dropout_seed,
    )
    return logits[0], cache


def backward(params: ModelParams, cache: ForwardCache, dlogits: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients for a single-sequence forward(); dlogits has shape (T, V)."""
    if dlogits.ndim == 2:
        dlogits = dlogits[None, :, :]
    return backward_batch(params, cache, dlogits)


@dataclass
class HiddenState:
    """Per-layer recurrent state for incremental decoding."""

    h1: np.ndarray
    c1: np.ndarray
    h2: np.ndarray
    c2: np.ndarray


def initial_state(params: ModelParams) -> HiddenState:
    hs = params.hidden_size
    return HiddenState(*(np.zeros(hs) for _ in range(4)))


def step(
    params: ModelParams, state: HiddenState, token_id: int
) -> tuple[np.ndarray, HiddenState]:
    """Advance one token at inference; returns (V,) logits and new state."""
    if not 0 <= token_id < params.vocab_size:
        raise InvalidTokenId(f"token id {token_id} out of range")
    x = params.embedding[token_id]
    h1, c1, _ = lstm_cell_forward(x, (state.h1, state.c1), params.layer1)
    h2, c2, _ = lstm_cell_forward(h1, (state.h2, state.c2), params.layer2)
    logits = params.proj_w @ h2 + params.proj_b
    return logits, HiddenState(h1, c1, h2, c2)
