"""Deterministic single-writer blockchain simulation.

Append-only blocks carry four kinds of content-addressed entries:
commitment records, authority keys, validator registrations, and recorded
verification results.  States are immutable values; every operation returns
a new state and leaves the old one intact, so histories stay comparable and
any number of readers can verify against a snapshot.

There is no consensus and no networking: the chain is a trust anchor, not a
distributed protocol.  Timestamps are caller-supplied logical ticks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable

from .encoding import (
    canonical_bytes,
    from_canonical_bytes,
    as_int,
    is_canonical,
    sha256,
    transcript_hash,
)
from .errors import ConflictError, LedgerError, NotFoundError, OrderingError, ParameterError
from .merkle import build_tree

__all__ = [
    "EntryKind",
    "LedgerEntry",
    "Block",
    "LedgerState",
    "VerificationResult",
    "empty_ledger",
    "append_block",
    "register_commitment",
    "register_authority",
    "register_validator",
    "invoke_validator",
    "audit_chain",
    "lookup_entry",
    "latest_commitment",
    "commitment_digest",
    "export_jsonl",
    "import_jsonl",
    "register_validator_func",
    "validator_func",
]

GENESIS_PREV_HASH = b"\x00" * 32

# Validator id -> pure verdict function (state, statement, proof) -> (bool, reason).
# Registrations on the ledger carry the auditable descriptor; this table holds
# the executable half, the stand-in for a smart-contract VM.
_VALIDATOR_FUNCS: dict[str, Callable[["LedgerState", Any, Any], tuple[bool, str]]] = {}


def register_validator_func(
    validator_id: str, fn: Callable[["LedgerState", Any, Any], tuple[bool, str]]
) -> None:
    _VALIDATOR_FUNCS[validator_id] = fn


def validator_func(validator_id: str):
    return _VALIDATOR_FUNCS.get(validator_id)


class EntryKind(enum.Enum):
    COMMITMENT_RECORD = "commitment_record"
    AUTHORITY_KEY = "authority_key"
    VALIDATOR_REGISTRATION = "validator_registration"
    VERIFICATION_RESULT = "verification_result"


@dataclass(frozen=True)
class LedgerEntry:
    """Content-addressed ledger entry; payload is canonical JSON bytes."""

    kind: EntryKind
    author: str
    payload: bytes

    def __post_init__(self) -> None:
        if not is_canonical(self.payload):
            raise ParameterError("entry payload must be canonical JSON bytes")

    @property
    def entry_id(self) -> bytes:
        return transcript_hash(self.kind.value.encode(), self.author.encode(), self.payload)

    def payload_tree(self) -> Any:
        return from_canonical_bytes(self.payload)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "author": self.author,
            "payload": self.payload_tree(),
            "entry_id": self.entry_id,
        }


@dataclass(frozen=True)
class Block:
    index: int
    prev_hash: bytes
    timestamp: int
    entries: tuple[LedgerEntry, ...]

    @property
    def entries_root(self) -> bytes:
        return build_tree([e.entry_id for e in self.entries]).root

    @property
    def block_hash(self) -> bytes:
        header = {
            "index": self.index,
            "prev_hash": self.prev_hash,
            "timestamp": self.timestamp,
            "entries_root": self.entries_root,
        }
        return sha256(canonical_bytes(header))

    def to_json(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "prev_hash": self.prev_hash,
            "timestamp": self.timestamp,
            "entries_root": self.entries_root,
            "entries": [e.to_json() for e in self.entries],
            "block_hash": self.block_hash,
        }


@dataclass(frozen=True)
class VerificationResult:
    validator_id: str
    statement_digest: bytes
    verdict: bool
    reason: str
    entry_id: bytes


@dataclass(frozen=True)
class LedgerState:
    blocks: tuple[Block, ...] = ()
    # entry_id -> (block index, offset within block)
    index: dict[bytes, tuple[int, int]] = field(default_factory=dict)
    authorities: dict[str, int] = field(default_factory=dict)
    validators: dict[str, dict[str, str]] = field(default_factory=dict)
    # (author, label) -> ((timestamp, entry_id), ...) in append order
    commitments: dict[tuple[str, str], tuple[tuple[int, bytes], ...]] = field(
        default_factory=dict
    )

    @property
    def tip_timestamp(self) -> int | None:
        return self.blocks[-1].timestamp if self.blocks else None


def empty_ledger() -> LedgerState:
    return LedgerState()


def _index_entry(state_maps: dict, block_index: int, offset: int, entry: LedgerEntry, timestamp: int) -> None:
    state_maps["index"][entry.entry_id] = (block_index, offset)
    tree = entry.payload_tree()
    if entry.kind is EntryKind.AUTHORITY_KEY:
        state_maps["authorities"][tree["party"]] = as_int(tree["public_key"])
    elif entry.kind is EntryKind.VALIDATOR_REGISTRATION:
        state_maps["validators"][tree["validator_id"]] = dict(tree)
    elif entry.kind is EntryKind.COMMITMENT_RECORD:
        key = (entry.author, tree["label"])
        prior = state_maps["commitments"].get(key, ())
        state_maps["commitments"][key] = prior + ((timestamp, entry.entry_id),)


def append_block(
    state: LedgerState, entries: list[LedgerEntry], timestamp: int
) -> LedgerState:
    """Functional append: returns the extended state, prior value untouched."""
    if not entries:
        raise ParameterError("a block must carry at least one entry")
    tip = state.tip_timestamp
    if tip is not None and timestamp < tip:
        raise OrderingError(f"timestamp {timestamp} regresses behind tip {tip}")
    prev_hash = state.blocks[-1].block_hash if state.blocks else GENESIS_PREV_HASH
    block = Block(
        index=len(state.blocks),
        prev_hash=prev_hash,
        timestamp=timestamp,
        entries=tuple(entries),
    )
    maps = {
        "index": dict(state.index),
        "authorities": dict(state.authorities),
        "validators": dict(state.validators),
        "commitments": dict(state.commitments),
    }
    for offset, entry in enumerate(block.entries):
        _index_entry(maps, block.index, offset, entry, timestamp)
    return LedgerState(blocks=state.blocks + (block,), **maps)


def register_commitment(
    state: LedgerState,
    author: str,
    commitment_digest_or_value: Any,
    label: str,
    timestamp: int,
) -> tuple[LedgerState, bytes]:
    """Anchor a digest (or a Pedersen commitment) under (author, label)."""
    if not label:
        raise ParameterError("label must be non-empty")
    digest = commitment_digest_or_value
    if hasattr(digest, "value"):  # Commitment
        digest = digest.value.to_bytes(32, "big")
    if not isinstance(digest, (bytes, bytearray)):
        raise ParameterError("commitment digest must be bytes or a Commitment")
    for ts, _ in state.commitments.get((author, label), ()):
        if ts == timestamp:
            raise ConflictError(
                f"({author!r}, {label!r}) already registered at tick {timestamp};"
                " updates must use a later timestamp"
            )
    entry = LedgerEntry(
        kind=EntryKind.COMMITMENT_RECORD,
        author=author,
        payload=canonical_bytes({"label": label, "digest": bytes(digest)}),
    )
    return append_block(state, [entry], timestamp), entry.entry_id


def register_authority(
    state: LedgerState, party: str, public_key: int, timestamp: int, profile: str = "test"
) -> tuple[LedgerState, bytes]:
    if not party:
        raise ParameterError("party id must be non-empty")
    entry = LedgerEntry(
        kind=EntryKind.AUTHORITY_KEY,
        author=party,
        payload=canonical_bytes(
            {"party": party, "public_key": public_key, "profile": profile}
        ),
    )
    return append_block(state, [entry], timestamp), entry.entry_id


def register_validator(
    state: LedgerState,
    validator_id: str,
    version: str,
    schema: str,
    author: str,
    timestamp: int,
) -> tuple[LedgerState, bytes]:
    if not validator_id:
        raise ParameterError("validator id must be non-empty")
    entry = LedgerEntry(
        kind=EntryKind.VALIDATOR_REGISTRATION,
        author=author,
        payload=canonical_bytes(
            {"validator_id": validator_id, "version": version, "schema": schema}
        ),
    )
    return append_block(state, [entry], timestamp), entry.entry_id


def invoke_validator(
    state: LedgerState,
    validator_id: str,
    statement: Any,
    proof: Any,
    timestamp: int,
) -> tuple[LedgerState, VerificationResult]:
    """Run a registered verifier and record its verdict on the ledger.

    The verifier is pure over (state, statement, proof) and never throws:
    malformed input becomes verdict False with a reason code.
    """
    if validator_id not in state.validators:
        raise NotFoundError(f"validator {validator_id!r} not registered on ledger")
    fn = _VALIDATOR_FUNCS.get(validator_id)
    if fn is None:
        raise NotFoundError(f"validator {validator_id!r} has no executable registered")
    # Validators always see wire form, whatever the caller handed in.
    statement = from_canonical_bytes(canonical_bytes(statement))
    proof = from_canonical_bytes(canonical_bytes(proof))
    try:
        verdict, reason = fn(state, statement, proof)
        verdict = bool(verdict)
    except Exception as exc:  # verifier contract: never throw
        verdict, reason = False, f"malformed:{type(exc).__name__}"
    statement_digest = sha256(canonical_bytes(statement))
    entry = LedgerEntry(
        kind=EntryKind.VERIFICATION_RESULT,
        author=validator_id,
        payload=canonical_bytes(
            {
                "validator_id": validator_id,
                "statement_digest": statement_digest,
                "verdict": verdict,
                "reason": reason,
            }
        ),
    )
    new_state = append_block(state, [entry], timestamp)
    return new_state, VerificationResult(
        validator_id=validator_id,
        statement_digest=statement_digest,
        verdict=verdict,
        reason=reason,
        entry_id=entry.entry_id,
    )


def lookup_entry(state: LedgerState, entry_id: bytes) -> LedgerEntry:
    pos = state.index.get(entry_id)
    if pos is None:
        raise NotFoundError(f"no entry {entry_id.hex()}")
    block_index, offset = pos
    return state.blocks[block_index].entries[offset]


def latest_commitment(state: LedgerState, author: str, label: str) -> LedgerEntry:
    """Lookup-by-label with latest-timestamp-wins semantics."""
    registrations = state.commitments.get((author, label))
    if not registrations:
        raise NotFoundError(f"no commitment for ({author!r}, {label!r})")
    _, entry_id = max(registrations, key=lambda pair: pair[0])
    return lookup_entry(state, entry_id)


def is_latest_commitment(state: LedgerState, entry_id: bytes) -> bool:
    """True iff this commitment entry is the freshest for its (author, label)."""
    entry = lookup_entry(state, entry_id)
    if entry.kind is not EntryKind.COMMITMENT_RECORD:
        return False
    label = entry.payload_tree()["label"]
    return latest_commitment(state, entry.author, label).entry_id == entry_id


def commitment_digest(entry: LedgerEntry) -> bytes:
    if entry.kind is not EntryKind.COMMITMENT_RECORD:
        raise ParameterError("entry is not a commitment record")
    return bytes.fromhex(entry.payload_tree()["digest"])


def audit_chain(state: LedgerState) -> bool:
    """Recompute every hash link, entries root, and index mapping."""
    prev_hash = GENESIS_PREV_HASH
    prev_ts = None
    rebuilt = {"index": {}, "authorities": {}, "validators": {}, "commitments": {}}
    for i, block in enumerate(state.blocks):
        if block.index != i or block.prev_hash != prev_hash or not block.entries:
            return False
        if prev_ts is not None and block.timestamp < prev_ts:
            return False
        try:
            for offset, entry in enumerate(block.entries):
                _index_entry(rebuilt, i, offset, entry, block.timestamp)
        except Exception:
            return False
        prev_hash = block.block_hash
        prev_ts = block.timestamp
    return (
        rebuilt["index"] == state.index
        and rebuilt["authorities"] == state.authorities
        and rebuilt["validators"] == state.validators
        and rebuilt["commitments"] == state.commitments
    )


def export_jsonl(state: LedgerState) -> bytes:
    """One block per line, canonical JSON."""
    return b"".join(canonical_bytes(block.to_json()) + b"\n" for block in state.blocks)


def import_jsonl(data: bytes) -> LedgerState:
    """Rebuild a state from exported lines; fails if any digest disagrees."""
    state = empty_ledger()
    for lineno, line in enumerate(data.splitlines()):
        if not line.strip():
            continue
        tree = from_canonical_bytes(line)
        entries = []
        for raw in tree["entries"]:
            entry = LedgerEntry(
                kind=EntryKind(raw["kind"]),
                author=raw["author"],
                payload=canonical_bytes(raw["payload"]),
            )
            if entry.entry_id != bytes.fromhex(raw["entry_id"]):
                raise LedgerError(f"line {lineno}: entry id mismatch")
            entries.append(entry)
        state = append_block(state, entries, as_int(tree["timestamp"]))
        block = state.blocks[-1]
        if (
            block.block_hash != bytes.fromhex(tree["block_hash"])
            or block.prev_hash != bytes.fromhex(tree["prev_hash"])
            or block.entries_root != bytes.fromhex(tree["entries_root"])
            or block.index != as_int(tree["index"])
        ):
            raise LedgerError(f"line {lineno}: block digest mismatch")
    return state
