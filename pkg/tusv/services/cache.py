"""
On-disk cache of form masks.

File layout (little-endian):

    b"TUSV" | version 0x01 | u64 N | ceil((N+1)/64) u64 words

Bit i of the word stream is set iff i is attained. Reads that hit a bad
header or length delete the file and fall back to a rebuild.
"""

import hashlib
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

from tusv.core.errors import MaskFileError
from tusv.core.generators import TernaryForm
from tusv.core.grammar import format_form
from tusv.core.sieve import MAX_BOUND, ValueMask, form_mask

logger = logging.getLogger(__name__)

MAGIC = b"TUSV"
VERSION = 1
HEADER_SIZE = len(MAGIC) + 1 + 8
SUFFIX = ".tusv"


def encode_mask(mask: ValueMask) -> bytes:
    """Serialize a [0, N] mask to the cache file format."""
    if mask.floor != 0:
        raise ValueError(f"only masks starting at 0 are cached, got floor {mask.floor}")
    words = -(-(mask.bound + 1) // 64)
    padded = np.zeros(words * 64, dtype=np.bool_)
    padded[: mask.bound + 1] = mask.bits
    header = MAGIC + bytes([VERSION]) + np.array([mask.bound], dtype="<u8").tobytes()
    return header + np.packbits(padded, bitorder="little").tobytes()


def decode_mask(data: bytes) -> ValueMask:
    """
    Parse the cache file format.

    Raises:
        MaskFileError: on bad magic, unknown version or wrong length
    """
    if len(data) < HEADER_SIZE or data[: len(MAGIC)] != MAGIC:
        raise MaskFileError("bad magic")
    if data[len(MAGIC)] != VERSION:
        raise MaskFileError(f"unsupported version {data[len(MAGIC)]}")
    bound = int(np.frombuffer(data, dtype="<u8", count=1, offset=len(MAGIC) + 1)[0])
    words = -(-(bound + 1) // 64)
    if len(data) != HEADER_SIZE + 8 * words:
        expected = HEADER_SIZE + 8 * words
        raise MaskFileError(f"expected {expected} bytes for N={bound}, got {len(data)}")
    payload = np.frombuffer(data, dtype=np.uint8, offset=HEADER_SIZE)
    bits = np.unpackbits(payload, bitorder="little")[: bound + 1].astype(np.bool_)
    return ValueMask(bound, bits)


def write_mask_file(path: Path, mask: ValueMask) -> None:
    """Write atomically: a temp file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(encode_mask(mask))
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def read_mask_file(path: Path) -> ValueMask:
    return decode_mask(path.read_bytes())


def cache_key(form: TernaryForm, bound: int) -> str:
    """Key from the canonical form string, the domain flags and N."""
    domains = "".join(g.domain.value for g in form.terms)
    text = f"{format_form(form)}|{domains}|{bound}"
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:32]


def cache_roundtrip(mask: ValueMask, cache_dir: Path) -> ValueMask:
    """Write a mask under cache_dir and read it back; IO errors propagate."""
    path = Path(cache_dir) / f"roundtrip-{mask.bound}{SUFFIX}"
    write_mask_file(path, mask)
    try:
        return read_mask_file(path)
    finally:
        path.unlink(missing_ok=True)


class MaskCache:
    """Mask file cache with graceful degradation: failures become misses."""

    def __init__(self, cache_dir: Path, enabled: bool = True) -> None:
        self.cache_dir = Path(cache_dir)
        self._enabled = enabled
        if enabled:
            try:
                self.cache_dir.mkdir(parents=True, exist_ok=True)
            except OSError as e:
                logger.warning(f"Cache directory unusable, cache disabled: {e}")
                self._enabled = False

    def path_for(self, form: TernaryForm, bound: int) -> Path:
        return self.cache_dir / f"{cache_key(form, bound)}{SUFFIX}"

    def get(self, form: TernaryForm, bound: int) -> Optional[ValueMask]:
        """
        Get a cached mask.

        Returns None if absent, unreadable or corrupt (corrupt files are removed).
        """
        if not self._enabled:
            return None
        path = self.path_for(form, bound)
        if not path.exists():
            return None
        try:
            mask = read_mask_file(path)
        except MaskFileError as e:
            logger.warning(f"Cache file {path.name} is corrupt, rebuilding: {e}")
            path.unlink(missing_ok=True)
            return None
        except OSError as e:
            logger.warning(f"Cache get failed: {e}")
            return None
        if mask.bound != bound:
            logger.warning(f"Cache file {path.name} holds N={mask.bound}, wanted {bound}")
            path.unlink(missing_ok=True)
            return None
        return mask

    def set(self, form: TernaryForm, bound: int, mask: ValueMask) -> bool:
        """
        Store a mask.

        Returns True if successful, False otherwise.
        """
        if not self._enabled:
            return False
        try:
            write_mask_file(self.path_for(form, bound), mask)
            return True
        except OSError as e:
            logger.warning(f"Cache set failed: {e}")
            return False

    def get_or_build(
        self, form: TernaryForm, bound: int, limit: int = MAX_BOUND
    ) -> tuple[ValueMask, bool]:
        """Cached mask if present, else build and store it; second item is the hit flag."""
        cached = self.get(form, bound)
        if cached is not None:
            logger.debug(f"Cache hit for {format_form(form)} at N={bound}")
            return cached, True
        mask = form_mask(form, bound, limit)
        self.set(form, bound, mask)
        return mask, False

    def entries(self) -> list[Path]:
        if not self.cache_dir.is_dir():
            return []
        return sorted(self.cache_dir.glob(f"*{SUFFIX}"))

    def info(self) -> dict[str, object]:
        files = self.entries()
        return {
            "cache_dir": str(self.cache_dir),
            "enabled": self._enabled,
            "entries": len(files),
            "total_bytes": sum(f.stat().st_size for f in files),
        }

    def clear(self) -> int:
        """Delete every cached mask; returns the number removed."""
        removed = 0
        for path in self.entries():
            try:
                path.unlink()
                removed += 1
            except OSError as e:
                logger.warning(f"Cache clear failed for {path.name}: {e}")
        logger.info(f"Removed {removed} cached masks from {self.cache_dir}")
        return removed

    @property
    def is_available(self) -> bool:
        """Check if cache is available."""
        return self._enabled
