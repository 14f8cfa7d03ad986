"""Exception hierarchy.

Every error raised by the library derives from HeterorepError so callers can
catch library failures in one clause.  The CLI maps ConfigError/SchemaError
onto exit code 2 (usage) and everything else onto exit code 1 (runtime).
"""


class HeterorepError(Exception):
    """Base class for all library errors."""


class SchemaError(HeterorepError):
    """A declared column or field is missing or duplicated."""


class IngestionError(HeterorepError):
    """A data file row is malformed or violates dataset invariants."""


class ParameterError(HeterorepError):
    """An argument is outside its documented domain."""


class FormatError(HeterorepError):
    """A binary or text artifact file violates its format contract."""


class AlignmentError(HeterorepError):
    """A matrix does not line up with the dataset it claims to describe."""


class CompositionError(HeterorepError):
    """Representation blocks cannot be concatenated as requested."""


class IntegrityError(HeterorepError):
    """Numeric payload violates an invariant (NaN/Inf, bad index)."""


class TrainingError(HeterorepError):
    """Model training cannot start or aborted mid-run."""


class EvaluationError(HeterorepError):
    """Predictions cannot be scored against the given labels."""


class ConfigError(HeterorepError):
    """Experiment configuration is missing or inconsistent."""
