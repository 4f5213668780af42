"""Schnorr proof of knowledge of a Pedersen commitment opening.

Non-interactive via Fiat-Shamir: the prover shows knowledge of (v, r) with
C = g^v h^r without revealing either.  Verification recomputes the challenge
from the transcript, so any edit to the statement or first message breaks
the proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..encoding import as_int
from ..errors import ProofError
from .params import GroupParams
from .pedersen import Commitment, pedersen_commit
from .rng import DeterministicRng
from .transcript import OPENING_TAG, fiat_shamir

__all__ = ["OpeningProof", "prove_opening", "verify_opening", "check_opening"]


@dataclass(frozen=True)
class OpeningProof:
    t: int
    z1: int
    z2: int
    domain_tag: bytes

    def to_json(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "z1": self.z1,
            "z2": self.z2,
            "domain_tag": self.domain_tag.decode("ascii"),
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "OpeningProof":
        return cls(
            t=as_int(obj["t"]),
            z1=as_int(obj["z1"]),
            z2=as_int(obj["z2"]),
            domain_tag=obj["domain_tag"].encode("ascii"),
        )


def _statement(c: Commitment) -> dict[str, Any]:
    return {"commitment": c.value}


def prove_opening(
    c: Commitment,
    v: int,
    r: int,
    rng_seed: bytes,
    params: GroupParams,
    domain_tag: bytes = OPENING_TAG,
) -> OpeningProof:
    if pedersen_commit(v, r, params) != c:
        raise ProofError("opening does not match commitment")
    rng = DeterministicRng(rng_seed, domain=domain_tag, context=c.value.to_bytes(64, "big"))
    a = rng.scalar(params.q)
    b = rng.scalar(params.q)
    t = pow(params.g, a, params.p) * pow(params.h, b, params.p) % params.p
    challenge = fiat_shamir(params, domain_tag, _statement(c), {"t": t})
    z1 = (a + challenge * v) % params.q
    z2 = (b + challenge * r) % params.q
    return OpeningProof(t=t, z1=z1, z2=z2, domain_tag=domain_tag)


def check_opening(
    c: Commitment, proof: OpeningProof, params: GroupParams
) -> tuple[bool, str]:
    """Full verdict with a diagnostic reason code."""
    if c.params_id != params.digest:
        return False, "params-mismatch"
    if not params.in_subgroup(c.value) or not params.in_subgroup(proof.t):
        return False, "not-in-subgroup"
    if not (0 <= proof.z1 < params.q and 0 <= proof.z2 < params.q):
        return False, "scalar-out-of-range"
    challenge = fiat_shamir(params, proof.domain_tag, _statement(c), {"t": proof.t})
    lhs = pow(params.g, proof.z1, params.p) * pow(params.h, proof.z2, params.p) % params.p
    rhs = proof.t * pow(c.value, challenge, params.p) % params.p
    if lhs != rhs:
        return False, "equation-failed"
    return True, "ok"


def verify_opening(c: Commitment, proof: OpeningProof, params: GroupParams) -> bool:
    ok, _ = check_opening(c, proof, params)
    return ok
