"""Small shared helpers: atomic file writes and worker-thread configuration."""

import os
import tempfile
import warnings

THREADS_ENV = "PEAKSPAM_THREADS"


def worker_count() -> int:
    """Worker-thread cap from the PEAKSPAM_THREADS environment variable.

    Unset means 1 (single-threaded). A value that is not a positive integer
    is ignored with a warning rather than failing the run.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        warnings.warn(f"{THREADS_ENV}={raw!r} is not a positive integer; using 1")
        return 1
    return value


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write text to path via a same-directory temp file and rename.

    Guarantees the target either keeps its old content or holds the complete
    new content; a failure mid-write never leaves a partial file behind.
    """
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=os.path.basename(path) + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
