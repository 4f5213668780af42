"""Opening proofs: completeness, determinism, and wholesale tamper rejection."""

import dataclasses
import random

import pytest

from proofchain.crypto import (
    OpeningProof,
    check_opening,
    pedersen_commit,
    prove_opening,
    verify_opening,
)
from proofchain.encoding import canonical_bytes
from proofchain.errors import ProofError


def _proof_mutants(proof, params):
    """Every single-field mutation of a proof transcript."""
    yield dataclasses.replace(proof, z1=(proof.z1 + 1) % params.q)
    yield dataclasses.replace(proof, z2=(proof.z2 + 1) % params.q)
    yield dataclasses.replace(proof, t=proof.t * params.g % params.p)
    yield dataclasses.replace(proof, domain_tag=proof.domain_tag + b"x")


def test_completeness(test_params):
    c = pedersen_commit(42, 99, test_params)
    proof = prove_opening(c, 42, 99, b"seed", test_params)
    assert verify_opening(c, proof, test_params)


def test_determinism(test_params):
    c = pedersen_commit(7, 8, test_params)
    a = prove_opening(c, 7, 8, b"same-seed", test_params)
    b = prove_opening(c, 7, 8, b"same-seed", test_params)
    assert canonical_bytes(a.to_json()) == canonical_bytes(b.to_json())
    other = prove_opening(c, 7, 8, b"other-seed", test_params)
    assert canonical_bytes(other.to_json()) != canonical_bytes(a.to_json())


def test_mismatched_opening_refused(test_params):
    c = pedersen_commit(1, 2, test_params)
    with pytest.raises(ProofError):
        prove_opening(c, 1, 3, b"seed", test_params)


def test_single_field_mutants_rejected(test_params):
    c = pedersen_commit(5, 6, test_params)
    proof = prove_opening(c, 5, 6, b"seed", test_params)
    for mutant in _proof_mutants(proof, test_params):
        assert not verify_opening(c, mutant, test_params)


def test_wrong_commitment_rejected(test_params):
    a = pedersen_commit(5, 6, test_params)
    b = pedersen_commit(5, 7, test_params)
    proof = prove_opening(a, 5, 6, b"seed", test_params)
    assert not verify_opening(b, proof, test_params)


def test_trivial_transcript_rejected(test_params):
    """t=1 with zero responses: the challenge binds t, so this cannot pass."""
    c = pedersen_commit(9, 9, test_params)
    fake = OpeningProof(t=1, z1=0, z2=0, domain_tag=b"proofchain/opening/v1")
    ok, reason = check_opening(c, fake, test_params)
    assert not ok and reason == "equation-failed"


def test_subgroup_diagnostic_distinct(test_params):
    c = pedersen_commit(9, 9, test_params)
    proof = prove_opening(c, 9, 9, b"seed", test_params)
    # A non-residue t: diagnostics must name the malformed element, not the
    # verification equation.
    bad = dataclasses.replace(proof, t=test_params.p - 1)
    ok, reason = check_opening(c, bad, test_params)
    assert not ok and reason == "not-in-subgroup"


def test_thousand_random_completeness(test_params):
    rng = random.Random("opening-completeness")
    for i in range(1000):
        v, r = rng.randrange(test_params.q), rng.randrange(test_params.q)
        c = pedersen_commit(v, r, test_params)
        proof = prove_opening(c, v, r, rng.randbytes(16), test_params)
        assert verify_opening(c, proof, test_params)


def test_json_round_trip(test_params):
    from proofchain.encoding import from_canonical_bytes

    c = pedersen_commit(13, 14, test_params)
    proof = prove_opening(c, 13, 14, b"seed", test_params)
    wire = from_canonical_bytes(canonical_bytes(proof.to_json()))
    assert OpeningProof.from_json(wire) == proof
