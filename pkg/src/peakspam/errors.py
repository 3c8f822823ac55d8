"""Exception types shared across the package.

Everything raised on purpose derives from PeakspamError so callers (and the
CLI) can separate data/runtime failures from plain bugs.
"""


class PeakspamError(Exception):
    """Base class for all peakspam errors."""


class IoError(PeakspamError):
    """File missing, unreadable, or not valid UTF-8."""


class SchemaError(PeakspamError):
    """Input file lacks the required column/key or a row is malformed."""


class EmptyCorpusError(PeakspamError):
    """Corpus file parsed fine but contained zero data rows."""


class LexiconError(PeakspamError):
    """Lexicon line failed validation. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TooFewPointsError(PeakspamError):
    """Operation needs more points than were supplied."""


class DegenerateDistancesError(PeakspamError):
    """Every pairwise distance is zero; clustering is meaningless."""


class ShapeError(PeakspamError):
    """Array arguments disagree in length/shape."""


class ParamError(PeakspamError):
    """Parameter outside its documented range or otherwise invalid."""
