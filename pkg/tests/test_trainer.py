import math

import numpy as np
import pytest

from versesmith.corpus import BOS_ID, Corpus, EOL_ID, PAD_ID, build_vocab, segment_lines
from versesmith.errors import InvalidArgument, NoLines, TrainingDiverged
from versesmith.numerics import masked_cross_entropy
from versesmith.trainer import TrainConfig, batch_loss, encode_line, make_batches, train
from versesmith import trainer as trainer_module


def _small_config(**overrides) -> TrainConfig:
    base = dict(embedding_dim=8, hidden=6, epochs=5, seed=13, dropout=0.2)
    base.update(overrides)
    return TrainConfig(**base)


# -- config ----------------------------------------------------------------

def test_defaults_are_the_reference_configuration():
    cfg = TrainConfig()
    assert (cfg.embedding_dim, cfg.hidden, cfg.layers) == (100, 50, 2)
    assert (cfg.dropout, cfg.lr, cfg.batch_size, cfg.epochs) == (0.2, 0.001, 16, 300)


@pytest.mark.parametrize("bad", [
    dict(dropout=1.0),
    dict(dropout=-0.1),
    dict(lr=0.0),
    dict(epochs=0),
    dict(batch_size=-1),
    dict(layers=1),
])
def test_config_validation(bad):
    with pytest.raises(InvalidArgument):
        TrainConfig(**bad)


# -- batching ----------------------------------------------------------------

def test_seventeen_lines_make_two_batches(tiny_corpus):
    lines = tuple(tiny_corpus.lines[:17])
    corpus = Corpus(source_name="m", raw_text="x", lines=lines)
    vocab = build_vocab(corpus)
    batches = make_batches(corpus, vocab, _small_config(batch_size=16))
    assert [b[0].shape[0] for b in batches] == [16, 1]


def test_encode_line_adds_bos_and_eol():
    corpus = Corpus(source_name="m", raw_text="x", lines=(("a", "b", "c"),))
    vocab = build_vocab(corpus)
    seq = encode_line(("a", "b", "c"), vocab, max_seq_len=64)
    assert len(seq) == 5
    assert seq[0] == BOS_ID and seq[-1] == EOL_ID


def test_encode_line_truncates_to_max_seq_len():
    corpus = Corpus(source_name="m", raw_text="x", lines=(tuple("abcdefgh"),))
    vocab = build_vocab(corpus)
    seq = encode_line(tuple("abcdefgh"), vocab, max_seq_len=3)
    assert len(seq) == 5  # BOS + 3 + EOL


def test_batch_inputs_and_targets_are_shifted():
    corpus = Corpus(source_name="m", raw_text="x", lines=(("a", "b"),))
    vocab = build_vocab(corpus)
    (inputs, targets, weights), = make_batches(corpus, vocab, _small_config())
    a, b = vocab.token_to_id["a"], vocab.token_to_id["b"]
    assert inputs.tolist() == [[BOS_ID, a, b]]
    assert targets.tolist() == [[a, b, EOL_ID]]
    assert weights.tolist() == [[1.0, 1.0, 1.0]]


def test_pad_positions_carry_zero_weight():
    corpus = Corpus(source_name="m", raw_text="x", lines=(("a",), ("a", "b", "c")))
    vocab = build_vocab(corpus)
    (inputs, targets, weights), = make_batches(corpus, vocab, _small_config())
    assert inputs.shape == (2, 4)
    assert np.all((weights == 0) == (targets == PAD_ID))


def test_all_pad_columns_leave_loss_unchanged():
    corpus = Corpus(source_name="m", raw_text="x", lines=(("a", "b", "c"),))
    vocab = build_vocab(corpus)
    config = _small_config()
    (inputs, targets, weights), = make_batches(corpus, vocab, config)
    params_seed = 3
    from versesmith.lstm import ModelParams

    params = ModelParams.init(vocab.size, 8, 6, seed=params_seed, init_std=0.2)
    loss, n, _, _ = batch_loss(params, (inputs, targets, weights))
    padded = (
        np.concatenate([inputs, np.full((1, 2), PAD_ID)], axis=1),
        np.concatenate([targets, np.full((1, 2), PAD_ID)], axis=1),
        np.concatenate([weights, np.zeros((1, 2))], axis=1),
    )
    loss_padded, n_padded, _, _ = batch_loss(params, padded)
    assert n == n_padded
    assert abs(loss - loss_padded) < 1e-12


def test_make_batches_needs_lines():
    corpus = Corpus(source_name="m", raw_text="x")
    with pytest.raises(NoLines):
        make_batches(corpus, build_vocab(Corpus(source_name="m", raw_text="x",
                                                lines=(("a",),))), _small_config())


# -- training -----------------------------------------------------------------

def test_loss_decreases_on_overfittable_corpus(tiny_corpus):
    ckpt, report = train(tiny_corpus, _small_config(epochs=50))
    assert report.losses[-1] < report.losses[0]
    assert ckpt.meta.epochs_completed == 50


def test_training_is_deterministic(tiny_corpus, tmp_path):
    from versesmith.checkpoint import save_checkpoint

    runs = []
    for name in ("a.ckpt", "b.ckpt"):
        ckpt, report = train(tiny_corpus, _small_config(epochs=5))
        save_checkpoint(ckpt.params, ckpt.vocab, ckpt.meta, tmp_path / name)
        runs.append(report.losses)
    assert runs[0] == runs[1]
    assert (tmp_path / "a.ckpt").read_bytes() == (tmp_path / "b.ckpt").read_bytes()


def test_different_seeds_differ(tiny_corpus):
    _, r1 = train(tiny_corpus, _small_config(epochs=2, seed=1))
    _, r2 = train(tiny_corpus, _small_config(epochs=2, seed=2))
    assert r1.losses != r2.losses


def test_perplexity_is_exp_of_mean_loss(tiny_corpus):
    _, report = train(tiny_corpus, _small_config(epochs=3))
    for stats in report.epochs:
        assert stats.perplexity == pytest.approx(math.exp(stats.mean_loss), rel=1e-9)


def test_report_counts_epochs_and_tokens(tiny_corpus):
    _, report = train(tiny_corpus, _small_config(epochs=4))
    assert len(report.epochs) == 4
    expected_tokens = sum(len(line) + 1 for line in tiny_corpus.lines)  # +EOL per line
    assert all(e.tokens == expected_tokens for e in report.epochs)
    assert report.token_throughput > 0


def test_progress_callback_sees_every_epoch(tiny_corpus):
    seen = []
    train(tiny_corpus, _small_config(epochs=3), progress=lambda s: seen.append(s.epoch))
    assert seen == [0, 1, 2]


def test_non_finite_loss_raises_with_context(tiny_corpus, monkeypatch):
    real = trainer_module.batch_loss
    calls = {"n": 0}

    def poisoned(*args, **kwargs):
        calls["n"] += 1
        loss, n, dlogits, cache = real(*args, **kwargs)
        if calls["n"] == 3:
            return float("nan"), n, dlogits, cache
        return loss, n, dlogits, cache

    monkeypatch.setattr(trainer_module, "batch_loss", poisoned)
    with pytest.raises(TrainingDiverged, match=r"epoch 1, batch 0"):
        train(tiny_corpus, _small_config(epochs=5, batch_size=16))


def test_grad_clip_changes_trajectory(tiny_corpus):
    _, unclipped = train(tiny_corpus, _small_config(epochs=3))
    _, clipped = train(tiny_corpus, _small_config(epochs=3, grad_clip=0.01))
    assert unclipped.losses != clipped.losses


def test_memorizes_single_repeated_line():
    # Fast overfit sanity check; the reference-configuration version runs
    # in the acceptance suite.
    text = "die see praat saggies vanaand. " * 96
    corpus = segment_lines(Corpus(source_name="mem", raw_text=text.strip()))
    config = TrainConfig(embedding_dim=32, hidden=24, epochs=40, seed=11, lr=0.01)
    ckpt, _ = train(corpus, config)
    single = Corpus(source_name="one", raw_text="x", lines=corpus.lines[:1])
    batch = make_batches(single, ckpt.vocab, config)[0]
    loss_sum, n, _, _ = batch_loss(ckpt.params, batch, training=False)
    assert loss_sum / n < 0.1
