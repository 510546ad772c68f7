"""Binary checkpoint format for trained models.

Layout (all little-endian):

    8 bytes   magic "AFRIKILM"
    u32       format version (currently 1)
    u32,u32,u32   V, E, H
    V times   u32 byte length + UTF-8 token, in id order
    tensors   raw f64 in fixed declaration order:
              embedding, layer1 w/u/b, layer2 w/u/b, proj_w, proj_b
    u32       epochs completed
    f64       final mean training loss
    u64       training seed

save -> load -> save is byte-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import SPECIALS, Vocabulary
from .errors import CorruptCheckpoint, NotACheckpoint, UnsupportedCheckpointVersion
from .lstm import LstmLayerParams, ModelParams

MAGIC = b"AFRIKILM"
VERSION = 1


@dataclass(frozen=True)
class TrainMeta:
    epochs_completed: int = 0
    final_loss: float = 0.0
    seed: int = 0


@dataclass
class Checkpoint:
    params: ModelParams
    vocab: Vocabulary
    meta: TrainMeta


def _tensor_shapes(v: int, e: int, h: int) -> list[tuple[str, tuple[int, ...]]]:
    return [
        ("embedding", (v, e)),
        ("layer1.w", (4 * h, e)),
        ("layer1.u", (4 * h, h)),
        ("layer1.b", (4 * h,)),
        ("layer2.w", (4 * h, h)),
        ("layer2.u", (4 * h, h)),
        ("layer2.b", (4 * h,)),
        ("proj_w", (v, h)),
        ("proj_b", (v,)),
    ]


def save_checkpoint(
    params: ModelParams, vocab: Vocabulary, meta: TrainMeta, path: str | Path
) -> None:
    if vocab.size != params.vocab_size:
        raise CorruptCheckpoint(
            f"vocabulary size {vocab.size} does not match model V={params.vocab_size}"
        )
    chunks = [MAGIC, struct.pack("<IIII", VERSION, params.vocab_size,
                                 params.embedding_dim, params.hidden_size)]
    for token in vocab.id_to_token:
        raw = token.encode("utf-8")
        chunks.append(struct.pack("<I", len(raw)))
        chunks.append(raw)
    for _, tensor in params.tensors().items():
        chunks.append(np.ascontiguousarray(tensor, dtype="<f8").tobytes())
    chunks.append(struct.pack("<Id Q", meta.epochs_completed, meta.final_loss,
                              meta.seed & (1 << 64) - 1))
    Path(path).write_bytes(b"".join(chunks))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptCheckpoint(
                f"truncated checkpoint: wanted {n} bytes at offset {self.pos}, "
                f"file has {len(self.data)}"
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load_checkpoint(path: str | Path) -> Checkpoint:
    data = Path(path).read_bytes()
    r = _Reader(data)
    if r.take(len(MAGIC)) != MAGIC:
        raise NotACheckpoint(f"{path}: bad magic bytes")
    (version,) = r.unpack("<I")
    if version != VERSION:
        raise UnsupportedCheckpointVersion(f"{path}: version {version}, expected {VERSION}")
    v, e, h = r.unpack("<III")
    if v < len(SPECIALS) or e == 0 or h == 0:
        raise CorruptCheckpoint(f"{path}: implausible dimensions V={v} E={e} H={h}")
    tokens = []
    for _ in range(v):
        (length,) = r.unpack("<I")
        raw = r.take(length)
        try:
            tokens.append(raw.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise CorruptCheckpoint(f"{path}: vocabulary entry is not UTF-8") from exc
    if tuple(tokens[:4]) != SPECIALS:
        raise CorruptCheckpoint(f"{path}: special tokens missing from vocabulary block")
    tensors = {}
    for name, shape in _tensor_shapes(v, e, h):
        count = int(np.prod(shape))
        buf = r.take(count * 8)
        tensors[name] = np.frombuffer(buf, dtype="<f8").astype(np.float64).reshape(shape)
    epochs, final_loss, seed = r.unpack("<Id Q")
    if r.pos != len(data):
        raise CorruptCheckpoint(f"{path}: {len(data) - r.pos} trailing bytes")
    params = ModelParams(
        embedding=tensors["embedding"],
        layer1=LstmLayerParams(tensors["layer1.w"], tensors["layer1.u"], tensors["layer1.b"]),
        layer2=LstmLayerParams(tensors["layer2.w"], tensors["layer2.u"], tensors["layer2.b"]),
        proj_w=tensors["proj_w"],
        proj_b=tensors["proj_b"],
    )
    vocab = Vocabulary(id_to_token=tuple(tokens), token_to_id={t: i for i, t in enumerate(tokens)})
    return Checkpoint(params=params, vocab=vocab,
                      meta=TrainMeta(epochs_completed=epochs, final_loss=final_loss, seed=seed))
