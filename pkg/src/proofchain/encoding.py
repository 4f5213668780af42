"""Canonical JSON encoding and digest helpers.

One byte form is used everywhere: UTF-8 JSON with lexicographically sorted
keys, no insignificant whitespace, and every integer rendered as a lowercase
hex string with no leading zeros (zero is "0").  Byte strings render as
lowercase hex.  The same bytes feed hash transcripts, ledger entries, and
files on disk, so serialization is deterministic by construction.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .errors import ParameterError

__all__ = [
    "canonical_bytes",
    "canonical_str",
    "from_canonical_bytes",
    "int_to_hex",
    "hex_to_int",
    "sha256",
    "transcript_hash",
    "is_canonical",
]


def int_to_hex(value: int) -> str:
    """Render a non-negative integer as lowercase hex, no leading zeros."""
    if value < 0:
        raise ParameterError(f"negative integer not encodable: {value}")
    return format(value, "x")


def hex_to_int(text: str) -> int:
    """Parse a lowercase-hex integer, rejecting non-canonical spellings."""
    if not isinstance(text, str) or text == "":
        raise ParameterError(f"not a hex integer: {text!r}")
    if text != text.lower() or (len(text) > 1 and text[0] == "0"):
        raise ParameterError(f"non-canonical hex integer: {text!r}")
    try:
        return int(text, 16)
    except ValueError as exc:
        raise ParameterError(f"not a hex integer: {text!r}") from exc


def as_int(value) -> int:
    """Accept a live int or its canonical hex spelling."""
    if isinstance(value, bool):
        raise ParameterError("boolean is not an integer field")
    if isinstance(value, int):
        return value
    return hex_to_int(value)


def _normalize(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return int_to_hex(obj)
    if isinstance(obj, (bytes, bytearray)):
        return bytes(obj).hex()
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        out = {}
        for key in obj:
            if not isinstance(key, str):
                raise ParameterError(f"non-string key: {key!r}")
            out[key] = _normalize(obj[key])
        return out
    if isinstance(obj, (list, tuple)):
        return [_normalize(item) for item in obj]
    raise ParameterError(f"not canonically encodable: {type(obj).__name__}")


def canonical_str(obj: Any) -> str:
    """Canonical JSON text for a tree of dict/list/str/int/bytes/bool."""
    return json.dumps(
        _normalize(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    )


def canonical_bytes(obj: Any) -> bytes:
    """Canonical JSON encoded as UTF-8 bytes."""
    return canonical_str(obj).encode("utf-8")


def from_canonical_bytes(data: bytes) -> Any:
    """Parse canonical JSON bytes back into a plain tree.

    Integers come back as their hex-string spellings; callers re-interpret
    fields they know to be numeric via :func:`hex_to_int`.
    """
    return json.loads(data.decode("utf-8"))


def is_canonical(data: bytes) -> bool:
    """True iff the bytes are exactly the canonical encoding of their value."""
    try:
        return canonical_bytes(json.loads(data.decode("utf-8"))) == data
    except (ValueError, UnicodeDecodeError, ParameterError):
        return False


def sha256(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def transcript_hash(*parts: bytes) -> bytes:
    """SHA-256 over a length-prefixed concatenation of byte strings.

    Each part is preceded by its 8-byte big-endian length, so distinct
    part sequences can never collide by re-splitting.
    """
    h = hashlib.sha256()
    for part in parts:
        h.update(len(part).to_bytes(8, "big"))
        h.update(part)
    return h.digest()
