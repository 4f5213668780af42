"""Schnorr signatures for authority attestation.

An authority registers its public key on the ledger and signs digests it
vouches for; a verified signature is a valid termination point for a chain
of proofs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..encoding import as_int
from ..errors import ParameterError
from .params import GroupParams
from .rng import DeterministicRng
from .transcript import SIGNATURE_TAG, fiat_shamir

__all__ = ["Signature", "keygen", "sign_message", "verify_signature", "check_signature"]


@dataclass(frozen=True)
class Signature:
    R: int
    s: int
    signer_key: int

    def to_json(self) -> dict[str, Any]:
        return {"R": self.R, "s": self.s, "signer_key": self.signer_key}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "Signature":
        return cls(
            R=as_int(obj["R"]),
            s=as_int(obj["s"]),
            signer_key=as_int(obj["signer_key"]),
        )


def keygen(rng_seed: bytes, params: GroupParams) -> tuple[int, int]:
    """Derive a (secret, public) keypair from a seed."""
    rng = DeterministicRng(rng_seed, domain=b"proofchain/keygen/v1")
    sk = rng.nonzero_scalar(params.q)
    return sk, pow(params.g, sk, params.p)


def _challenge(params: GroupParams, pk: int, R: int, message: bytes) -> int:
    return fiat_shamir(
        params, SIGNATURE_TAG, {"signer_key": pk}, {"R": R, "message": message}
    )


def sign_message(
    secret_key: int, message: bytes, rng_seed: bytes, params: GroupParams
) -> Signature:
    if not 0 < secret_key < params.q:
        raise ParameterError("secret key must lie in (0, q)")
    pk = pow(params.g, secret_key, params.p)
    rng = DeterministicRng(rng_seed, domain=SIGNATURE_TAG, context=message)
    k = rng.nonzero_scalar(params.q)
    R = pow(params.g, k, params.p)
    e = _challenge(params, pk, R, message)
    s = (k + e * secret_key) % params.q
    return Signature(R=R, s=s, signer_key=pk)


def check_signature(
    sig: Signature, message: bytes, params: GroupParams
) -> tuple[bool, str]:
    """Full verdict with a diagnostic reason code."""
    if not params.in_subgroup(sig.R) or not params.in_subgroup(sig.signer_key):
        return False, "not-in-subgroup"
    if not 0 <= sig.s < params.q:
        return False, "scalar-out-of-range"
    e = _challenge(params, sig.signer_key, sig.R, message)
    lhs = pow(params.g, sig.s, params.p)
    rhs = sig.R * pow(sig.signer_key, e, params.p) % params.p
    if lhs != rhs:
        return False, "equation-failed"
    return True, "ok"


def verify_signature(sig: Signature, message: bytes, params: GroupParams) -> bool:
    ok, _ = check_signature(sig, message, params)
    return ok
