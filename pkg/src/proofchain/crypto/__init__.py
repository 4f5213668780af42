"""Group arithmetic, commitments, sigma-protocol proofs, and signatures."""

from .params import GroupParams, Profile, derive_second_generator, group_params
from .pedersen import Commitment, multiply_commitments, pedersen_commit, shift_commitment
from .rangeproof import BitProof, RangeProof, check_range, prove_range, verify_range
from .rng import DeterministicRng
from .schnorr import OpeningProof, check_opening, prove_opening, verify_opening
from .signing import Signature, check_signature, keygen, sign_message, verify_signature
from .transcript import OPENING_TAG, RANGE_TAG, SIGNATURE_TAG, fiat_shamir

__all__ = [
    "GroupParams",
    "Profile",
    "derive_second_generator",
    "group_params",
    "Commitment",
    "pedersen_commit",
    "multiply_commitments",
    "shift_commitment",
    "BitProof",
    "RangeProof",
    "prove_range",
    "verify_range",
    "check_range",
    "DeterministicRng",
    "OpeningProof",
    "prove_opening",
    "verify_opening",
    "check_opening",
    "Signature",
    "keygen",
    "sign_message",
    "verify_signature",
    "check_signature",
    "fiat_shamir",
    "OPENING_TAG",
    "RANGE_TAG",
    "SIGNATURE_TAG",
]
