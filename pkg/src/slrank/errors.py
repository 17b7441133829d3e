"""Exception types shared across the package.

Every failure the library reports deliberately is a subclass of
:class:`SlrankError`, so callers (CLI, HTTP service) can distinguish data
errors from programming errors with a single except clause.
"""


class SlrankError(Exception):
    """Base class for all slrank errors."""


# --- embedding store ---------------------------------------------------


class DimensionMismatch(SlrankError):
    """Vector components disagree with the expected dimensionality."""

    def __init__(self, message: str, line_no: int | None = None):
        super().__init__(message)
        self.line_no = line_no


class MalformedNumber(SlrankError):
    """A vector component failed to parse as a finite real."""

    def __init__(self, message: str, line_no: int | None = None):
        super().__init__(message)
        self.line_no = line_no


class EmptyModel(SlrankError):
    """An embedding file contained no data lines."""


class NoCoverage(SlrankError):
    """No n-gram of a document obtained a vector; the document has no VSM
    representation under the given model."""


# --- similarity engine -------------------------------------------------


class ZeroVector(SlrankError):
    """Cosine is undefined for a zero-norm vector."""


class EmptyCorpus(SlrankError):
    """Ranking requested against an empty corpus."""


class EmptyQuery(SlrankError):
    """No usable query text was supplied."""


class UnknownModel(SlrankError):
    """A model name not present in the registry."""


# --- corpus store ------------------------------------------------------


class DuplicateId(SlrankError):
    def __init__(self, doc_id: str, line_no: int | None = None):
        super().__init__(f"duplicate doc_id {doc_id!r}"
                         + (f" at line {line_no}" if line_no else ""))
        self.doc_id = doc_id
        self.line_no = line_no


class MissingField(SlrankError):
    def __init__(self, line_no: int, field: str):
        super().__init__(f"line {line_no}: missing or empty field {field!r}")
        self.line_no = line_no
        self.field = field


class MalformedRecord(SlrankError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class IoFailure(SlrankError):
    """Reading or writing a store failed at the filesystem level."""


# --- evaluation --------------------------------------------------------


class LengthMismatch(SlrankError):
    """Paired score lists have different lengths."""


class TooFew(SlrankError):
    """Fewer than two pairs; rank correlation is undefined."""


class ConstantInput(SlrankError):
    """A rank list is constant; correlation is undefined."""


class NoPositives(SlrankError):
    """Precision/recall need at least one positively labeled document."""


class KOutOfRange(SlrankError):
    """Cutoff k outside [1, number of ranked results]."""
