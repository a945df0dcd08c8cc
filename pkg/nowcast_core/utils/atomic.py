"""
Atomic file output.

Every artifact is written to a temporary sibling and renamed into place, so
readers never observe a half-written file.
"""

import hashlib
import os
import tempfile
from pathlib import Path
from typing import Optional, Union

from nowcast_core.utils.exceptions import NowcastError
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

PathLike = Union[str, "os.PathLike[str]"]

OUTPUT_MODE = 0o644


def atomic_write_text(path: PathLike, text: str) -> Path:
    """
    Write ``text`` to ``path`` atomically (UTF-8, ``\\n`` newlines).

    The temporary sibling is removed when the write or the rename fails.

    Args:
        path: Destination path; parent directories are created

    Returns:
        The destination as a Path

    Raises:
        NowcastError: If the file cannot be written
    """
    target = Path(path)
    temp_file: Optional[Path] = None
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            "w",
            encoding="utf-8",
            newline="\n",
            dir=target.parent,
            prefix=f".{target.name}.",
            suffix=".tmp",
            delete=False,
        ) as f:
            temp_file = Path(f.name)
            f.write(text)
        os.chmod(temp_file, OUTPUT_MODE)
        temp_file.replace(target)
    except OSError as e:
        if temp_file is not None:
            temp_file.unlink(missing_ok=True)
        logger.error("atomic_write_failed", path=str(target), error=str(e))
        raise NowcastError(f"Failed to write {target}", details={"path": str(target)}, cause=e)

    logger.debug("file_written", path=str(target), size=len(text))
    return target


def file_digest(path: PathLike) -> str:
    """Return the hex SHA-256 digest of a file's bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()
