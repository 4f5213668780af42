"""Bit-decomposition range proof: committed value lies in [0, 2^n).

Each bit gets its own commitment C_i = g^{b_i} h^{r_i}; the bit randomness
is chosen so that prod C_i^(2^i) recombines exactly to the target
commitment.  Each bit carries a two-branch OR proof (Cramer-Damgard-
Schoenmakers composition over "C = h^r" and "C/g = h^r"): the true branch is
proven with fresh randomness, the false branch is simulated, and the two
branch challenges must add up to the Fiat-Shamir challenge.

A threshold claim v >= t reduces to a range proof on C / g^t for v - t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..encoding import as_int
from ..errors import ParameterError, ProofError
from .params import GroupParams
from .pedersen import Commitment, pedersen_commit
from .rng import DeterministicRng
from .transcript import RANGE_TAG, fiat_shamir

__all__ = ["BitProof", "RangeProof", "prove_range", "verify_range", "check_range"]


@dataclass(frozen=True)
class BitProof:
    """OR-proof transcript for one bit commitment."""

    t0: int
    t1: int
    c0: int
    c1: int
    z0: int
    z1: int

    def to_json(self) -> dict[str, Any]:
        return {
            "t0": self.t0,
            "t1": self.t1,
            "c0": self.c0,
            "c1": self.c1,
            "z0": self.z0,
            "z1": self.z1,
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "BitProof":
        return cls(**{k: as_int(obj[k]) for k in ("t0", "t1", "c0", "c1", "z0", "z1")})


@dataclass(frozen=True)
class RangeProof:
    n_bits: int
    bit_commitments: tuple[Commitment, ...]
    bit_proofs: tuple[BitProof, ...]
    domain_tag: bytes

    def to_json(self) -> dict[str, Any]:
        return {
            "n_bits": self.n_bits,
            "bit_commitments": [c.to_json() for c in self.bit_commitments],
            "bit_proofs": [p.to_json() for p in self.bit_proofs],
            "domain_tag": self.domain_tag.decode("ascii"),
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "RangeProof":
        return cls(
            n_bits=as_int(obj["n_bits"]),
            bit_commitments=tuple(Commitment.from_json(c) for c in obj["bit_commitments"]),
            bit_proofs=tuple(BitProof.from_json(p) for p in obj["bit_proofs"]),
            domain_tag=obj["domain_tag"].encode("ascii"),
        )


def _bit_statement(target: Commitment, n_bits: int, index: int, bit_c: int) -> dict[str, Any]:
    return {
        "target": target.value,
        "n_bits": n_bits,
        "index": index,
        "bit_commitment": bit_c,
    }


def _bit_challenge(
    params: GroupParams,
    domain_tag: bytes,
    target: Commitment,
    n_bits: int,
    index: int,
    bit_c: int,
    t0: int,
    t1: int,
) -> int:
    return fiat_shamir(
        params,
        domain_tag + b"/bit",
        _bit_statement(target, n_bits, index, bit_c),
        {"t0": t0, "t1": t1},
    )


def _check_bounds(n_bits: int, params: GroupParams) -> None:
    if n_bits < 1:
        raise ParameterError("n_bits must be positive")
    if 1 << n_bits > params.q:
        raise ParameterError(f"2^{n_bits} exceeds the group order")


def prove_range(
    c: Commitment,
    v: int,
    r: int,
    n_bits: int,
    rng_seed: bytes,
    params: GroupParams,
    domain_tag: bytes = RANGE_TAG,
) -> RangeProof:
    _check_bounds(n_bits, params)
    if not 0 <= v < (1 << n_bits):
        raise ProofError(f"value {v} not in [0, 2^{n_bits})")
    if pedersen_commit(v, r, params) != c:
        raise ProofError("opening does not match commitment")

    p, q, g, h = params.p, params.q, params.g, params.h
    rng = DeterministicRng(
        rng_seed, domain=domain_tag, context=c.value.to_bytes(64, "big")
    )

    # Bit randomness: free except the top one, solved so powers recombine to r.
    bits = [(v >> i) & 1 for i in range(n_bits)]
    rands = [rng.scalar(q) for _ in range(n_bits - 1)]
    partial = sum(rands[i] << i for i in range(n_bits - 1)) % q
    top = (r - partial) * pow(1 << (n_bits - 1), -1, q) % q
    rands.append(top)

    bit_commitments = tuple(pedersen_commit(b, rho, params) for b, rho in zip(bits, rands))

    g_inv = pow(g, -1, p)
    bit_proofs = []
    for i, (b, rho) in enumerate(zip(bits, rands)):
        ci = bit_commitments[i].value
        y0 = ci
        y1 = ci * g_inv % p
        # Simulate the false branch, prove the true one.
        c_fake = rng.scalar(q)
        z_fake = rng.scalar(q)
        w = rng.scalar(q)
        y_fake = y1 if b == 0 else y0
        t_fake = pow(h, z_fake, p) * pow(pow(y_fake, c_fake, p), -1, p) % p
        t_real = pow(h, w, p)
        t0, t1 = (t_real, t_fake) if b == 0 else (t_fake, t_real)
        challenge = _bit_challenge(params, domain_tag, c, n_bits, i, ci, t0, t1)
        c_real = (challenge - c_fake) % q
        z_real = (w + c_real * rho) % q
        if b == 0:
            bit_proofs.append(BitProof(t0, t1, c_real, c_fake, z_real, z_fake))
        else:
            bit_proofs.append(BitProof(t0, t1, c_fake, c_real, z_fake, z_real))

    return RangeProof(
        n_bits=n_bits,
        bit_commitments=bit_commitments,
        bit_proofs=tuple(bit_proofs),
        domain_tag=domain_tag,
    )


def check_range(
    c: Commitment, proof: RangeProof, n_bits: int, params: GroupParams
) -> tuple[bool, str]:
    """Full verdict with a diagnostic reason code."""
    p, q, g, h = params.p, params.q, params.g, params.h
    if proof.n_bits != n_bits or n_bits < 1 or (1 << n_bits) > q:
        return False, "n-bits-mismatch"
    if len(proof.bit_commitments) != n_bits or len(proof.bit_proofs) != n_bits:
        return False, "length-mismatch"
    if c.params_id != params.digest:
        return False, "params-mismatch"
    if not params.in_subgroup(c.value):
        return False, "not-in-subgroup"
    for bc in proof.bit_commitments:
        if bc.params_id != params.digest or not params.in_subgroup(bc.value):
            return False, "not-in-subgroup"

    # Recombination: prod C_i^(2^i) must reproduce the target commitment.
    acc = 1
    for i, bc in enumerate(proof.bit_commitments):
        acc = acc * pow(bc.value, 1 << i, p) % p
    if acc != c.value:
        return False, "recombination-failed"

    g_inv = pow(g, -1, p)
    for i, (bc, bp) in enumerate(zip(proof.bit_commitments, proof.bit_proofs)):
        for z in (bp.z0, bp.z1, bp.c0, bp.c1):
            if not 0 <= z < q:
                return False, "scalar-out-of-range"
        if not (0 < bp.t0 < p and 0 < bp.t1 < p):
            return False, "not-in-subgroup"
        challenge = _bit_challenge(params, proof.domain_tag, c, n_bits, i, bc.value, bp.t0, bp.t1)
        if (bp.c0 + bp.c1) % q != challenge:
            return False, "challenge-split-invalid"
        y0 = bc.value
        y1 = bc.value * g_inv % p
        if pow(h, bp.z0, p) != bp.t0 * pow(y0, bp.c0, p) % p:
            return False, "branch0-failed"
        if pow(h, bp.z1, p) != bp.t1 * pow(y1, bp.c1, p) % p:
            return False, "branch1-failed"
    return True, "ok"


def verify_range(c: Commitment, proof: RangeProof, n_bits: int, params: GroupParams) -> bool:
    ok, _ = check_range(c, proof, n_bits, params)
    return ok
