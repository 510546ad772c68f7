"""Corpus loading, line segmentation, word tokenization, and vocabulary.

The training unit is the sentence-like line: raw prose is normalized (NFC,
soft line wraps collapsed, paragraph breaks kept), split after runs of
sentence-final punctuation (. ! ? …) and at paragraph breaks, then
tokenized into lowercased words and standalone punctuation marks.
Apostrophe-initial Afrikaans clitics ('n, 's, 't, 'k) survive as single
tokens.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import EmptyCorpus, InvalidEncoding, InvalidTokenId, MissingCorpusFile, NoLines

PAD, UNK, BOS, EOL = "<pad>", "<unk>", "<bos>", "<eol>"
SPECIALS = (PAD, UNK, BOS, EOL)
PAD_ID, UNK_ID, BOS_ID, EOL_ID = 0, 1, 2, 3

_PARAGRAPH_RE = re.compile(r"\n\s*\n")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?…])\s+")
# Alternatives tried in order: clitic, word (internal apostrophes/hyphens
# allowed), single punctuation character.
_TOKEN_RE = re.compile(r"['’‘]\w{1,2}\b|\w+(?:['’‘\-]\w+)*|[^\w\s]")


@dataclass(frozen=True)
class Corpus:
    """A normalized prose corpus, optionally segmented into token lines."""

    source_name: str
    raw_text: str
    lines: tuple[tuple[str, ...], ...] = ()

    @property
    def token_count(self) -> int:
        return sum(len(line) for line in self.lines)


def load_corpus(path: str | Path) -> Corpus:
    """Read a UTF-8 text file and normalize it.

    Normalization: NFC, newlines unified, runs of blanks collapsed to one
    space, single newlines treated as soft wraps, blank-line paragraph
    breaks kept as exactly one empty line.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except FileNotFoundError as exc:
        raise MissingCorpusFile(str(path)) from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidEncoding(f"{path}: not valid UTF-8 ({exc})") from exc
    text = unicodedata.normalize("NFC", text)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    paragraphs = [re.sub(r"\s+", " ", p).strip() for p in _PARAGRAPH_RE.split(text)]
    normalized = "\n\n".join(p for p in paragraphs if p)
    if not normalized:
        raise EmptyCorpus(f"{path}: no text content")
    return Corpus(source_name=path.name, raw_text=normalized)


def tokenize(line: str) -> list[str]:
    """Lowercased word tokens with punctuation split off.

    An apostrophe followed by at most two letters is kept attached (the
    Afrikaans clitics 'n, 's, 't, 'k); other punctuation becomes a
    standalone token.
    """
    return _TOKEN_RE.findall(line.lower())


def _has_word(tokens: list[str]) -> bool:
    return any(any(ch.isalnum() for ch in tok) for tok in tokens)


def segment_lines(corpus: Corpus) -> Corpus:
    """Split the corpus into tokenized lines at sentence ends and paragraphs.

    Segments without word content (stray punctuation) are dropped; an empty
    result raises NoLines.
    """
    if not corpus.raw_text:
        raise EmptyCorpus(corpus.source_name)
    lines: list[tuple[str, ...]] = []
    for paragraph in corpus.raw_text.split("\n\n"):
        for segment in _SENTENCE_SPLIT_RE.split(paragraph):
            tokens = tokenize(segment)
            if tokens and _has_word(tokens):
                lines.append(tuple(tokens))
    if not lines:
        raise NoLines(f"{corpus.source_name}: nothing to segment")
    return replace(corpus, lines=tuple(lines))


@dataclass(frozen=True)
class Vocabulary:
    """Dense bidirectional token<->id map; ids 0-3 are PAD/UNK/BOS/EOL."""

    id_to_token: tuple[str, ...]
    token_to_id: dict[str, int] = field(repr=False)

    def __post_init__(self):
        if self.id_to_token[: len(SPECIALS)] != SPECIALS:
            raise InvalidTokenId("specials must occupy ids 0-3")

    @property
    def size(self) -> int:
        return len(self.id_to_token)

    def encode(self, tokens: list[str] | tuple[str, ...]) -> list[int]:
        """Token ids, with out-of-vocabulary tokens mapped to UNK."""
        return [self.token_to_id.get(t, UNK_ID) for t in tokens]

    def decode(self, ids: list[int] | tuple[int, ...]) -> list[str]:
        """Surface tokens; any id outside [0, size) raises InvalidTokenId."""
        out = []
        for i in ids:
            if not 0 <= i < self.size:
                raise InvalidTokenId(f"id {i} out of range for vocabulary of size {self.size}")
            out.append(self.id_to_token[i])
        return out


def build_vocab(corpus: Corpus, min_count: int = 1) -> Vocabulary:
    """Vocabulary of tokens with frequency >= min_count, after the specials.

    Token ids are assigned by descending frequency, ties broken
    lexicographically, so identical corpora yield identical vocabularies.
    """
    if not corpus.lines:
        raise NoLines(f"{corpus.source_name}: build_vocab needs a segmented corpus")
    counts = Counter(tok for line in corpus.lines for tok in line)
    if not counts:
        raise EmptyCorpus(f"{corpus.source_name}: corpus has zero tokens")
    kept = sorted(
        (t for t, c in counts.items() if c >= min_count),
        key=lambda t: (-counts[t], t),
    )
    id_to_token = SPECIALS + tuple(kept)
    return Vocabulary(id_to_token=id_to_token, token_to_id={t: i for i, t in enumerate(id_to_token)})


def encode(vocab: Vocabulary, tokens: list[str] | tuple[str, ...]) -> list[int]:
    return vocab.encode(tokens)


def decode(vocab: Vocabulary, ids: list[int] | tuple[int, ...]) -> list[str]:
    return vocab.decode(ids)


def save_vocab(vocab: Vocabulary, path: str | Path) -> None:
    """Write one token per line in id order; lines 1-4 are the specials."""
    Path(path).write_text("\n".join(vocab.id_to_token) + "\n", encoding="utf-8", newline="\n")


def load_vocab(path: str | Path) -> Vocabulary:
    tokens = Path(path).read_text(encoding="utf-8").splitlines()
    if tuple(tokens[:4]) != SPECIALS:
        raise InvalidTokenId(f"{path}: missing special-token header")
    return Vocabulary(id_to_token=tuple(tokens), token_to_id={t: i for i, t in enumerate(tokens)})
