"""Zero-knowledge computation units over ledger-anchored records.

The flow has three parts.  An owner commits a batch of private records:
numeric fields become Pedersen commitments, text fields salted hashes, all
gathered under one Merkle root that is registered on the ledger.  A
computation unit then derives a public claim from those records and emits a
bundle: the claim (statement), the cryptographic material backing it
(proof), and the id of the validator that can check it.  Validators verify
that the material traces to the anchored root (right data source) and that
the unit-specific equation holds (right computation), and their verdicts are
recorded back on the ledger.

Three units ship: selective field reveal, threshold predicate (value >= t,
value stays hidden), and aggregate sum (total revealed, addends hidden).
New units register like validators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .crypto.params import GroupParams, group_params
from .crypto.pedersen import Commitment, multiply_commitments, pedersen_commit, shift_commitment
from .crypto.rangeproof import RangeProof, check_range, prove_range
from .crypto.rng import DeterministicRng
from .encoding import as_int, canonical_bytes, from_canonical_bytes, sha256, transcript_hash
from .errors import NotFoundError, ParameterError, ProofError
from .ledger import (
    EntryKind,
    LedgerState,
    VerificationResult,
    commitment_digest,
    invoke_validator,
    lookup_entry,
    register_commitment,
    register_validator,
    register_validator_func,
    validator_func,
)
from .merkle import MerklePath, MerkleTree, build_tree, path_root, prove_membership, verify_membership

__all__ = [
    "PreservedField",
    "PreservedRecord",
    "PreservedCommitment",
    "ZkLinkBundle",
    "make_record",
    "build_record_set",
    "commit_preserved",
    "zkcu_reveal_field",
    "zkcu_predicate_geq",
    "zkcu_aggregate_sum",
    "validate_shared",
    "check_bundle",
    "register_zkcu_validators",
    "preserved_to_json",
    "preserved_from_json",
    "ZKCU_VALIDATORS",
]

SALT_LEN = 16
TEXT_LEAF_TAG = b"\x02"

REVEAL_VALIDATOR = "zkcu-reveal@1"
GEQ_VALIDATOR = "zkcu-geq@1"
SUM_VALIDATOR = "zkcu-sum@1"
ZKCU_VALIDATORS = (REVEAL_VALIDATOR, GEQ_VALIDATOR, SUM_VALIDATOR)

GEQ_TAG_PREFIX = b"proofchain/zkcu/geq/v1/"


@dataclass(frozen=True)
class PreservedField:
    """One private field: a value plus the secrets that blind its leaf."""

    name: str
    value: int | str
    salt: bytes
    randomness: int | None  # Pedersen blinding, numeric fields only

    @property
    def is_numeric(self) -> bool:
        return isinstance(self.value, int)


@dataclass(frozen=True)
class PreservedRecord:
    record_id: str
    fields: tuple[PreservedField, ...]

    def field(self, name: str) -> PreservedField:
        for f in self.fields:
            if f.name == name:
                return f
        raise NotFoundError(f"record {self.record_id!r} has no field {name!r}")

    def field_index(self, name: str) -> int:
        for i, f in enumerate(self.fields):
            if f.name == name:
                return i
        raise NotFoundError(f"record {self.record_id!r} has no field {name!r}")


def make_record(
    record_id: str,
    fields: list[tuple[str, int | str]],
    rng: DeterministicRng,
    params: GroupParams,
) -> PreservedRecord:
    """Draw per-field salts and blinding factors for a new private record."""
    if not record_id:
        raise ParameterError("record id must be non-empty")
    seen: set[str] = set()
    out = []
    for name, value in fields:
        if not name or name in seen:
            raise ParameterError(f"field name empty or duplicated: {name!r}")
        seen.add(name)
        salt = rng.take(SALT_LEN)
        randomness = None
        if isinstance(value, bool):
            raise ParameterError("boolean field values are not supported")
        if isinstance(value, int):
            params.check_scalar(value, f"field {name!r}")
            randomness = rng.scalar(params.q)
        elif not isinstance(value, str):
            raise ParameterError(f"field {name!r} must be int or str")
        out.append(PreservedField(name=name, value=value, salt=salt, randomness=randomness))
    if not out:
        raise ParameterError("a record needs at least one field")
    return PreservedRecord(record_id=record_id, fields=tuple(out))


def _field_commitment(field: PreservedField, params: GroupParams) -> Commitment:
    assert field.is_numeric and field.randomness is not None
    return pedersen_commit(field.value, field.randomness, params)


def _field_leaf_payload(field: PreservedField, params: GroupParams) -> bytes:
    """Leaf encoding: commitment for numbers, salted hash for text.

    The field name rides inside the leaf so a proof for one field cannot be
    replayed as a claim about another.
    """
    if field.is_numeric:
        c = _field_commitment(field, params)
        return canonical_bytes({"commitment": c.value, "name": field.name})
    digest = transcript_hash(
        TEXT_LEAF_TAG, field.salt, field.name.encode(), str(field.value).encode()
    )
    return canonical_bytes({"digest": digest, "name": field.name})


def _set_leaf_payload(record_id: str, record_root: bytes) -> bytes:
    return canonical_bytes({"record_id": record_id, "root": record_root})


@dataclass(frozen=True)
class PreservedCommitment:
    """Owner-side handle: anchored set root plus every off-ledger opening."""

    owner: str
    label: str
    profile: str
    records: tuple[PreservedRecord, ...]
    record_trees: dict[str, MerkleTree]
    set_tree: MerkleTree
    ledger_anchor: bytes

    @property
    def set_root(self) -> bytes:
        return self.set_tree.root

    def record(self, record_id: str) -> PreservedRecord:
        for r in self.records:
            if r.record_id == record_id:
                return r
        raise NotFoundError(f"unknown record {record_id!r}")

    def record_index(self, record_id: str) -> int:
        for i, r in enumerate(self.records):
            if r.record_id == record_id:
                return i
        raise NotFoundError(f"unknown record {record_id!r}")


def build_record_set(
    records: list[PreservedRecord], params: GroupParams
) -> tuple[dict[str, MerkleTree], MerkleTree]:
    """Per-record field trees plus the set tree over (record_id, root) leaves."""
    if not records:
        raise ParameterError("record list must be non-empty")
    ids = [r.record_id for r in records]
    if len(set(ids)) != len(ids):
        raise ParameterError("record ids must be unique")
    record_trees = {
        r.record_id: build_tree([_field_leaf_payload(f, params) for f in r.fields])
        for r in records
    }
    set_tree = build_tree(
        [_set_leaf_payload(r.record_id, record_trees[r.record_id].root) for r in records]
    )
    return record_trees, set_tree


def commit_preserved(
    records: list[PreservedRecord],
    owner: str,
    ledger: LedgerState,
    timestamp: int,
    label: str = "preserved-records",
    profile: str = "test",
) -> tuple[LedgerState, PreservedCommitment]:
    """Anchor a record batch: the set root goes on-chain, openings stay here."""
    params = group_params(profile)
    record_trees, set_tree = build_record_set(records, params)
    ledger, anchor_id = register_commitment(ledger, owner, set_tree.root, label, timestamp)
    pc = PreservedCommitment(
        owner=owner,
        label=label,
        profile=profile,
        records=tuple(records),
        record_trees=record_trees,
        set_tree=set_tree,
        ledger_anchor=anchor_id,
    )
    return ledger, pc


@dataclass(frozen=True)
class ZkLinkBundle:
    """Shared data with proof: one verifiable crossing into the public domain."""

    statement: dict[str, Any]
    proof: dict[str, Any]
    validator_id: str

    def __post_init__(self) -> None:
        # Normalize to wire form so in-process and parsed bundles are identical.
        object.__setattr__(
            self, "statement", from_canonical_bytes(canonical_bytes(self.statement))
        )
        object.__setattr__(self, "proof", from_canonical_bytes(canonical_bytes(self.proof)))

    @property
    def statement_digest(self) -> bytes:
        return sha256(canonical_bytes(self.statement))

    def to_json(self) -> dict[str, Any]:
        return {
            "statement": self.statement,
            "proof": self.proof,
            "validator_id": self.validator_id,
        }

    def to_bytes(self) -> bytes:
        return canonical_bytes(self.to_json())

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "ZkLinkBundle":
        return cls(
            statement=obj["statement"],
            proof=obj["proof"],
            validator_id=obj["validator_id"],
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "ZkLinkBundle":
        return cls.from_json(from_canonical_bytes(data))


def _paths_for_field(
    pc: PreservedCommitment, record_id: str, field_name: str
) -> tuple[MerklePath, MerklePath]:
    record = pc.record(record_id)
    field_path = prove_membership(pc.record_trees[record_id], record.field_index(field_name))
    set_path = prove_membership(pc.set_tree, pc.record_index(record_id))
    return field_path, set_path


def zkcu_reveal_field(
    pc: PreservedCommitment, record_id: str, field_name: str
) -> ZkLinkBundle:
    """Selective disclosure: one field becomes public, siblings stay digests."""
    params = group_params(pc.profile)
    field = pc.record(record_id).field(field_name)
    field_path, set_path = _paths_for_field(pc, record_id, field_name)
    statement = {
        "unit": "reveal",
        "profile": pc.profile,
        "anchor": pc.ledger_anchor,
        "record_id": record_id,
        "field": field_name,
        "outputs": {"value": field.value},
    }
    if field.is_numeric:
        proof = {
            "kind": "numeric",
            "randomness": field.randomness,
            "field_path": field_path.to_json(),
            "set_path": set_path.to_json(),
        }
    else:
        proof = {
            "kind": "text",
            "salt": field.salt,
            "field_path": field_path.to_json(),
            "set_path": set_path.to_json(),
        }
    return ZkLinkBundle(statement=statement, proof=proof, validator_id=REVEAL_VALIDATOR)


def _geq_domain_tag(statement: dict[str, Any]) -> bytes:
    """Range-proof domain tag bound to the exact claim being made."""
    return GEQ_TAG_PREFIX + sha256(canonical_bytes(statement)).hex().encode("ascii")


def zkcu_predicate_geq(
    pc: PreservedCommitment,
    record_id: str,
    field_name: str,
    threshold: int,
    rng_seed: bytes,
    n_bits: int = 16,
) -> ZkLinkBundle:
    """Prove field >= threshold without revealing the field value.

    Works on the shifted commitment C / g^threshold, whose opening is
    (value - threshold, r); a range proof pins that difference into
    [0, 2^n_bits).  Generation refuses when the predicate is false.
    """
    params = group_params(pc.profile)
    if not 0 <= threshold < params.q:
        raise ParameterError("threshold out of range")
    if threshold + (1 << n_bits) > params.q:
        raise ParameterError("threshold + 2^n_bits exceeds the group order")
    field = pc.record(record_id).field(field_name)
    if not field.is_numeric:
        raise ParameterError(f"field {field_name!r} is not numeric")
    if field.value < threshold:
        raise ProofError("committed value does not satisfy the predicate")

    field_path, set_path = _paths_for_field(pc, record_id, field_name)
    commitment = _field_commitment(field, params)
    statement = {
        "unit": "geq",
        "profile": pc.profile,
        "anchor": pc.ledger_anchor,
        "record_id": record_id,
        "field": field_name,
        "threshold": threshold,
        "n_bits": n_bits,
        "outputs": {"satisfied": True},
    }
    shifted = shift_commitment(commitment, threshold, params)
    range_proof = prove_range(
        shifted,
        field.value - threshold,
        field.randomness,
        n_bits,
        rng_seed,
        params,
        domain_tag=_geq_domain_tag(statement),
    )
    proof = {
        "commitment": commitment.to_json(),
        "range_proof": range_proof.to_json(),
        "field_path": field_path.to_json(),
        "set_path": set_path.to_json(),
    }
    return ZkLinkBundle(statement=statement, proof=proof, validator_id=GEQ_VALIDATOR)


def zkcu_aggregate_sum(
    pc: PreservedCommitment,
    record_ids: list[str],
    field_name: str,
    claimed_total: int,
) -> ZkLinkBundle:
    """Prove a claimed total over one numeric field across many records.

    Reveals the sum of blinding factors alongside the total; individual
    values and blindings stay hidden.  A wrong claimed total still produces
    a bundle -- it simply fails validation, which is the behaviour tamper
    scenarios rely on.
    """
    params = group_params(pc.profile)
    if not record_ids:
        raise ParameterError("record id list must be non-empty")
    if len(set(record_ids)) != len(record_ids):
        raise ParameterError("record ids must be distinct")
    params.check_scalar(claimed_total, "claimed total")

    items = []
    randomness_sum = 0
    for rid in record_ids:
        field = pc.record(rid).field(field_name)
        if not field.is_numeric:
            raise ParameterError(f"field {field_name!r} is not numeric in record {rid!r}")
        field_path, set_path = _paths_for_field(pc, rid, field_name)
        items.append(
            {
                "record_id": rid,
                "commitment": _field_commitment(field, params).to_json(),
                "field_path": field_path.to_json(),
                "set_path": set_path.to_json(),
            }
        )
        randomness_sum = (randomness_sum + field.randomness) % params.q

    statement = {
        "unit": "sum",
        "profile": pc.profile,
        "anchor": pc.ledger_anchor,
        "record_ids": list(record_ids),
        "field": field_name,
        "outputs": {"total": claimed_total},
    }
    proof = {"items": items, "aggregate_randomness": randomness_sum}
    return ZkLinkBundle(statement=statement, proof=proof, validator_id=SUM_VALIDATOR)


def preserved_to_json(pc: PreservedCommitment) -> dict[str, Any]:
    """Owner-side openings file; private, never shared or anchored."""
    return {
        "owner": pc.owner,
        "label": pc.label,
        "profile": pc.profile,
        "anchor": pc.ledger_anchor,
        "records": [
            {
                "record_id": r.record_id,
                "fields": [
                    {
                        "name": f.name,
                        "kind": "numeric" if f.is_numeric else "text",
                        "value": f.value,
                        "salt": f.salt,
                        "randomness": f.randomness,
                    }
                    for f in r.fields
                ],
            }
            for r in pc.records
        ],
    }


def preserved_from_json(obj: dict[str, Any]) -> PreservedCommitment:
    params = group_params(obj["profile"])
    records = []
    for raw in obj["records"]:
        fields = []
        for fr in raw["fields"]:
            if fr["kind"] == "numeric":
                value: int | str = as_int(fr["value"])
                randomness = as_int(fr["randomness"])
            else:
                value = fr["value"]
                randomness = None
            fields.append(
                PreservedField(
                    name=fr["name"],
                    value=value,
                    salt=bytes.fromhex(fr["salt"]),
                    randomness=randomness,
                )
            )
        records.append(PreservedRecord(record_id=raw["record_id"], fields=tuple(fields)))
    record_trees, set_tree = build_record_set(records, params)
    return PreservedCommitment(
        owner=obj["owner"],
        label=obj["label"],
        profile=obj["profile"],
        records=tuple(records),
        record_trees=record_trees,
        set_tree=set_tree,
        ledger_anchor=bytes.fromhex(obj["anchor"]),
    )


# --- validator side -------------------------------------------------------


def _resolve_anchor(state: LedgerState, statement: dict[str, Any]) -> bytes:
    entry = lookup_entry(state, bytes.fromhex(statement["anchor"]))
    if entry.kind is not EntryKind.COMMITMENT_RECORD:
        raise NotFoundError("anchor is not a commitment record")
    return commitment_digest(entry)


def _member_of_anchor(
    anchor_root: bytes,
    record_id: str,
    leaf_payload: bytes,
    field_path_json: Any,
    set_path_json: Any,
) -> bool:
    record_root = path_root(leaf_payload, MerklePath.from_json(field_path_json))
    if record_root is None:
        return False
    set_leaf = _set_leaf_payload(record_id, record_root)
    return verify_membership(anchor_root, set_leaf, MerklePath.from_json(set_path_json))


def _check_reveal(state: LedgerState, statement: Any, proof: Any) -> tuple[bool, str]:
    params = group_params(statement["profile"])
    try:
        anchor_root = _resolve_anchor(state, statement)
    except NotFoundError:
        return False, "unanchored"
    name = statement["field"]
    value = statement["outputs"]["value"]
    if proof["kind"] == "numeric":
        v = as_int(value)
        r = as_int(proof["randomness"])
        c = pedersen_commit(v, r, params)
        leaf = canonical_bytes({"commitment": c.value, "name": name})
    elif proof["kind"] == "text":
        salt = bytes.fromhex(proof["salt"])
        if len(salt) != SALT_LEN:
            return False, "malformed-salt"
        digest = transcript_hash(TEXT_LEAF_TAG, salt, name.encode(), str(value).encode())
        leaf = canonical_bytes({"digest": digest, "name": name})
    else:
        return False, "unknown-reveal-kind"
    if not _member_of_anchor(
        anchor_root, statement["record_id"], leaf, proof["field_path"], proof["set_path"]
    ):
        return False, "path-mismatch"
    return True, "ok"


def _check_geq(state: LedgerState, statement: Any, proof: Any) -> tuple[bool, str]:
    params = group_params(statement["profile"])
    try:
        anchor_root = _resolve_anchor(state, statement)
    except NotFoundError:
        return False, "unanchored"
    commitment = Commitment.from_json(proof["commitment"])
    if commitment.params_id != params.digest:
        return False, "params-mismatch"
    leaf = canonical_bytes({"commitment": commitment.value, "name": statement["field"]})
    if not _member_of_anchor(
        anchor_root, statement["record_id"], leaf, proof["field_path"], proof["set_path"]
    ):
        return False, "path-mismatch"
    range_proof = RangeProof.from_json(proof["range_proof"])
    if range_proof.domain_tag != _geq_domain_tag(statement):
        return False, "statement-binding-mismatch"
    shifted = shift_commitment(commitment, as_int(statement["threshold"]), params)
    ok, reason = check_range(shifted, range_proof, as_int(statement["n_bits"]), params)
    return (True, "ok") if ok else (False, f"range:{reason}")


def _check_sum(state: LedgerState, statement: Any, proof: Any) -> tuple[bool, str]:
    params = group_params(statement["profile"])
    try:
        anchor_root = _resolve_anchor(state, statement)
    except NotFoundError:
        return False, "unanchored"
    record_ids = statement["record_ids"]
    items = proof["items"]
    if len(record_ids) != len(items) or not record_ids:
        return False, "item-count-mismatch"
    if len(set(record_ids)) != len(record_ids):
        return False, "duplicate-records"
    commitments = []
    for rid, item in zip(record_ids, items):
        if item["record_id"] != rid:
            return False, "record-order-mismatch"
        c = Commitment.from_json(item["commitment"])
        if c.params_id != params.digest or not params.in_subgroup(c.value):
            return False, "params-mismatch"
        leaf = canonical_bytes({"commitment": c.value, "name": statement["field"]})
        if not _member_of_anchor(
            anchor_root, rid, leaf, item["field_path"], item["set_path"]
        ):
            return False, "path-mismatch"
        commitments.append(c)
    total = as_int(statement["outputs"]["total"])
    agg_r = as_int(proof["aggregate_randomness"])
    if not (0 <= total < params.q and 0 <= agg_r < params.q):
        return False, "scalar-out-of-range"
    if multiply_commitments(commitments, params) != pedersen_commit(total, agg_r, params):
        return False, "aggregate-equation-failed"
    return True, "ok"


register_validator_func(REVEAL_VALIDATOR, _check_reveal)
register_validator_func(GEQ_VALIDATOR, _check_geq)
register_validator_func(SUM_VALIDATOR, _check_sum)

_VALIDATOR_SCHEMAS = {
    REVEAL_VALIDATOR: "zkcu.reveal.statement",
    GEQ_VALIDATOR: "zkcu.geq.statement",
    SUM_VALIDATOR: "zkcu.sum.statement",
}


def register_zkcu_validators(
    state: LedgerState, author: str, timestamp: int
) -> LedgerState:
    """Put the three shipped units' validator descriptors on the ledger."""
    for validator_id in ZKCU_VALIDATORS:
        name, version = validator_id.split("@")
        state, _ = register_validator(
            state, validator_id, version, _VALIDATOR_SCHEMAS[validator_id], author, timestamp
        )
    return state


def check_bundle(ledger: LedgerState, bundle: ZkLinkBundle) -> tuple[bool, str]:
    """Pure bundle check: same verdict as validation, nothing recorded."""
    if bundle.validator_id not in ledger.validators:
        return False, "unknown-validator"
    fn = validator_func(bundle.validator_id)
    if fn is None:
        return False, "unknown-validator"
    try:
        verdict, reason = fn(ledger, bundle.statement, bundle.proof)
        return bool(verdict), reason
    except Exception as exc:
        return False, f"malformed:{type(exc).__name__}"


def validate_shared(
    ledger: LedgerState, bundle: ZkLinkBundle, timestamp: int
) -> tuple[LedgerState, VerificationResult]:
    """Check a bundle via its registered validator and record the verdict."""
    return invoke_validator(
        ledger, bundle.validator_id, bundle.statement, bundle.proof, timestamp
    )
