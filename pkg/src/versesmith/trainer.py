"""Training loop: corpus + config -> trained checkpoint.

Each segmented line becomes BOS + tokens + EOL and is its own BPTT
sequence; lines are shuffled each epoch with a seeded stream, batched,
padded with PAD, and PAD targets are masked out of the loss. The whole run
is a deterministic function of (corpus bytes, config, seed).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .checkpoint import Checkpoint, TrainMeta
from .corpus import BOS_ID, Corpus, EOL_ID, PAD_ID, Vocabulary, build_vocab
from .errors import InvalidArgument, NoLines, TrainingDiverged
from .lstm import ModelParams, backward_batch, forward_batch
from .numerics import AdamState, adam_step, masked_cross_entropy
from .rng import Rng, derive_seed

log = logging.getLogger(__name__)

# Substream tags so init / shuffling / dropout never share draws.
_TAG_INIT, _TAG_SHUFFLE, _TAG_DROPOUT = 1, 2, 3


@dataclass(frozen=True)
class TrainConfig:
    embedding_dim: int = 100
    hidden: int = 50
    layers: int = 2
    dropout: float = 0.2
    lr: float = 0.001
    batch_size: int = 16
    epochs: int = 300
    seed: int = 0
    max_seq_len: int = 64
    min_count: int = 1
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    init_std: float = 0.01
    grad_clip: float | None = None

    def __post_init__(self):
        if min(self.embedding_dim, self.hidden, self.batch_size,
               self.epochs, self.max_seq_len, self.min_count) <= 0:
            raise InvalidArgument("all size/count fields must be positive")
        if self.layers != 2:
            raise InvalidArgument("only the two-layer architecture is supported")
        if not 0.0 <= self.dropout < 1.0:
            raise InvalidArgument(f"dropout must be in [0, 1), got {self.dropout}")
        if self.lr <= 0:
            raise InvalidArgument(f"lr must be positive, got {self.lr}")


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    mean_loss: float
    perplexity: float
    seconds: float
    tokens: int


@dataclass
class TrainReport:
    epochs: list[EpochStats] = field(default_factory=list)
    wall_seconds: float = 0.0

    @property
    def losses(self) -> list[float]:
        return [e.mean_loss for e in self.epochs]

    @property
    def token_throughput(self) -> float:
        total = sum(e.tokens for e in self.epochs)
        return total / self.wall_seconds if self.wall_seconds > 0 else 0.0


Batch = tuple[np.ndarray, np.ndarray, np.ndarray]  # inputs, targets, weights


def encode_line(tokens, vocab: Vocabulary, max_seq_len: int) -> list[int]:
    """BOS + encoded tokens (truncated to max_seq_len) + EOL."""
    body = vocab.encode(tokens)
    if len(body) > max_seq_len:
        log.warning("truncating line of %d tokens to %d", len(body), max_seq_len)
        body = body[:max_seq_len]
    return [BOS_ID] + body + [EOL_ID]


def make_batches(
    corpus: Corpus,
    vocab: Vocabulary,
    config: TrainConfig,
    order: np.ndarray | None = None,
) -> list[Batch]:
    """Padded next-token batches: inputs seq[:-1], targets seq[1:].

    Positions whose target is PAD get weight 0 and contribute nothing to
    the loss. `order` selects and orders the lines (defaults to corpus
    order).
    """
    if not corpus.lines:
        raise NoLines(f"{corpus.source_name}: corpus has no segmented lines")
    if order is None:
        order = np.arange(len(corpus.lines))
    sequences = [encode_line(corpus.lines[i], vocab, config.max_seq_len) for i in order]
    batches = []
    for start in range(0, len(sequences), config.batch_size):
        group = sequences[start : start + config.batch_size]
        b = len(group)
        t = max(len(s) for s in group) - 1
        inputs = np.full((b, t), PAD_ID, dtype=np.int64)
        targets = np.full((b, t), PAD_ID, dtype=np.int64)
        weights = np.zeros((b, t))
        for row, seq in enumerate(group):
            n = len(seq) - 1
            inputs[row, :n] = seq[:-1]
            targets[row, :n] = seq[1:]
            weights[row, :n] = 1.0
        batches.append((inputs, targets, weights))
    return batches


def batch_loss(
    params: ModelParams, batch: Batch, training: bool = False,
    dropout_rate: float = 0.0, dropout_seed: int = 0,
) -> tuple[float, int, np.ndarray, object]:
    """Loss summed over unmasked tokens; dlogits are for the mean loss."""
    inputs, targets, weights = batch
    logits, cache = forward_batch(params, inputs, training=training,
                                  dropout_rate=dropout_rate, dropout_seed=dropout_seed)
    b, t, v = logits.shape
    loss_sum, weight_sum, dlogits = masked_cross_entropy(
        logits.reshape(b * t, v), targets.reshape(b * t), weights.reshape(b * t)
    )
    # Gradient of the per-token mean, so the step size is length-independent.
    dlogits = dlogits.reshape(b, t, v) / weight_sum
    return loss_sum, int(weight_sum), dlogits, cache


def train(corpus: Corpus, config: TrainConfig, progress=None) -> tuple[Checkpoint, TrainReport]:
    """Run the full training loop; deterministic given (corpus, config)."""
    vocab = build_vocab(corpus, min_count=config.min_count)
    params = ModelParams.init(
        vocab.size, config.embedding_dim, config.hidden,
        seed=derive_seed(config.seed, _TAG_INIT), init_std=config.init_std,
    )
    tensors = params.tensors()
    adam = AdamState.for_params(tensors, lr=config.lr, beta1=config.beta1,
                                beta2=config.beta2, epsilon=config.epsilon)
    report = TrainReport()
    run_start = time.perf_counter()
    mean_loss = 0.0
    n_lines = len(corpus.lines)
    for epoch in range(config.epochs):
        epoch_start = time.perf_counter()
        order = Rng(derive_seed(config.seed, _TAG_SHUFFLE, epoch)).permutation(n_lines)
        loss_total = 0.0
        tokens_total = 0
        for b_idx, batch in enumerate(make_batches(corpus, vocab, config, order)):
            dropout_seed = derive_seed(config.seed, _TAG_DROPOUT, epoch, b_idx)
            loss_sum, n_tokens, dlogits, cache = batch_loss(
                params, batch, training=True,
                dropout_rate=config.dropout, dropout_seed=dropout_seed,
            )
            if not np.isfinite(loss_sum):
                raise TrainingDiverged(f"non-finite loss at epoch {epoch}, batch {b_idx}")
            grads = backward_batch(params, cache, dlogits)
            if config.grad_clip is not None:
                norm = float(np.sqrt(sum(float((g * g).sum()) for g in grads.values())))
                if norm > config.grad_clip:
                    scale = config.grad_clip / norm
                    for g in grads.values():
                        g *= scale
            adam_step(tensors, grads, adam)
            loss_total += loss_sum
            tokens_total += n_tokens
        mean_loss = loss_total / tokens_total
        stats = EpochStats(
            epoch=epoch,
            mean_loss=mean_loss,
            perplexity=float(np.exp(mean_loss)),
            seconds=time.perf_counter() - epoch_start,
            tokens=tokens_total,
        )
        report.epochs.append(stats)
        if progress is not None:
            progress(stats)
    report.wall_seconds = time.perf_counter() - run_start
    meta = TrainMeta(epochs_completed=config.epochs, final_loss=mean_loss, seed=config.seed)
    return Checkpoint(params=params, vocab=vocab, meta=meta), report
