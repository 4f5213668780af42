"""Pedersen commitments: hiding, binding, and additively homomorphic.

commit(v, r) = g^v * h^r mod p.  Products of commitments commit to sums of
values, which is what lets an auditor check a claimed total against the
product of per-record commitments without seeing any single record.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..encoding import as_int
from ..errors import ParameterError
from .params import GroupParams

__all__ = ["Commitment", "pedersen_commit", "multiply_commitments", "shift_commitment"]


@dataclass(frozen=True)
class Commitment:
    """A group element tied to the parameter set it was made under."""

    value: int
    params_id: bytes

    def to_json(self) -> dict[str, Any]:
        return {"value": self.value, "params_id": self.params_id}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "Commitment":
        return cls(
            value=as_int(obj["value"]),
            params_id=bytes.fromhex(obj["params_id"]),
        )


def pedersen_commit(v: int, r: int, params: GroupParams) -> Commitment:
    """Commit to value v with randomness r; both must lie in [0, q)."""
    params.check_scalar(v, "value")
    params.check_scalar(r, "randomness")
    value = pow(params.g, v, params.p) * pow(params.h, r, params.p) % params.p
    return Commitment(value=value, params_id=params.digest)


def multiply_commitments(commitments: list[Commitment], params: GroupParams) -> Commitment:
    """Homomorphic aggregate: the product commits to the sum of openings."""
    if not commitments:
        raise ParameterError("cannot aggregate an empty commitment list")
    acc = 1
    for c in commitments:
        if c.params_id != params.digest:
            raise ParameterError("commitment made under different parameters")
        acc = acc * c.value % params.p
    return Commitment(value=acc, params_id=params.digest)


def shift_commitment(c: Commitment, delta: int, params: GroupParams) -> Commitment:
    """Divide out g^delta: maps a commitment to v into one to v - delta."""
    g_delta = pow(params.g, delta % params.q, params.p)
    value = c.value * pow(g_delta, -1, params.p) % params.p
    return Commitment(value=value, params_id=c.params_id)
