"""Exception types shared across the package.

Parameter misuse raises plain ValueError; these classes mark conditions
the CLI maps to dedicated exit codes (data = 3, training abort = 4,
verification failure = 5).
"""


class DataError(Exception):
    """A dataset file is missing, malformed, or internally inconsistent."""


class DatasetParseError(DataError):
    """Raised while parsing a stochastic dataset file; names the bad line."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class IdxFormatError(DataError):
    """Raised while parsing an IDX image/label file; names the byte offset."""


class TrainAbortError(RuntimeError):
    """Training hit a non-finite loss or gradient; message carries epoch/batch."""


class VerificationError(Exception):
    """An exact-identity check in the verification suite failed."""
