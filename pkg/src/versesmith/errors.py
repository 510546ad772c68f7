"""Exception types shared across the package.

Every failure mode that callers are expected to distinguish gets its own
class; the CLI maps them onto exit codes and the HTTP layer onto error
payloads.
"""


class VersesmithError(Exception):
    """Base class for all package errors."""

    code = "error"


# -- corpus ------------------------------------------------------------

class MissingCorpusFile(VersesmithError):
    code = "missing_corpus_file"


class InvalidEncoding(VersesmithError):
    code = "invalid_encoding"


class EmptyCorpus(VersesmithError):
    code = "empty_corpus"


class NoLines(VersesmithError):
    code = "no_lines"


class InvalidTokenId(VersesmithError):
    code = "invalid_token_id"


# -- numerics ----------------------------------------------------------

class ShapeMismatch(VersesmithError):
    code = "shape_mismatch"


class NonFiniteInput(VersesmithError):
    code = "non_finite_input"


class NonFiniteGradient(VersesmithError):
    code = "non_finite_gradient"


class InvalidArgument(VersesmithError):
    code = "invalid_argument"


# -- checkpoints -------------------------------------------------------

class NotACheckpoint(VersesmithError):
    code = "not_a_checkpoint"


class UnsupportedCheckpointVersion(VersesmithError):
    code = "unsupported_checkpoint_version"


class CorruptCheckpoint(VersesmithError):
    code = "corrupt_checkpoint"


# -- training ----------------------------------------------------------

class TrainingDiverged(VersesmithError):
    code = "training_diverged"


# -- generation --------------------------------------------------------

class ModelVocabMismatch(VersesmithError):
    code = "model_vocab_mismatch"


class RetryBudgetExhausted(VersesmithError):
    code = "retry_budget_exhausted"


# -- studio ------------------------------------------------------------

class UnknownSession(VersesmithError):
    code = "unknown_session"


class UnknownLine(VersesmithError):
    code = "unknown_line"


class UnknownPoem(VersesmithError):
    code = "unknown_poem"


class InvalidCount(VersesmithError):
    code = "invalid_count"


class LineNotSelected(VersesmithError):
    code = "line_not_selected"


class LineInUse(VersesmithError):
    code = "line_in_use"


class EditRuleViolation(VersesmithError):
    code = "edit_rule_violation"


class PoemFinalized(VersesmithError):
    code = "poem_finalized"


class EmptyPoem(VersesmithError):
    code = "empty_poem"
