"""Fiat-Shamir challenge derivation.

A challenge is SHA-256 over the length-prefixed transcript
(domain tag, params digest, statement, first messages), interpreted
big-endian and reduced mod q.  Statement and first messages are hashed in
their canonical JSON byte form.  Distinct ASCII domain tags per proof type
prevent cross-protocol transcript replay.
"""

from __future__ import annotations

from typing import Any

from ..encoding import canonical_bytes, transcript_hash
from .params import GroupParams

__all__ = [
    "fiat_shamir",
    "OPENING_TAG",
    "RANGE_TAG",
    "SIGNATURE_TAG",
]

OPENING_TAG = b"proofchain/opening/v1"
RANGE_TAG = b"proofchain/range/v1"
SIGNATURE_TAG = b"proofchain/sig/v1"


def fiat_shamir(
    params: GroupParams,
    domain_tag: bytes,
    statement: Any,
    first_messages: Any,
) -> int:
    digest = transcript_hash(
        domain_tag,
        params.digest,
        canonical_bytes(statement),
        canonical_bytes(first_messages),
    )
    return int.from_bytes(digest, "big") % params.q
