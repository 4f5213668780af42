"""Prime-order group parameters for Pedersen commitments and sigma protocols.

The group is the order-q subgroup of Z_p* for a safe prime p = 2q + 1 (the
subgroup of quadratic residues).  Two profiles ship as compiled-in constants:

* ``Toy`` -- schoolbook primes (p=23, q=11).  Deliberately insecure; exists so
  tests can brute-force enumerate openings and challenges.
* ``Test`` -- fixed 256-bit safe prime.  Constants are frozen rather than
  generated at startup so every run is deterministic.

The second generator ``h`` is derived from an ASCII seed and squared into the
subgroup, so nobody knows log_g(h).
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from functools import lru_cache

from ..encoding import canonical_bytes, sha256
from ..errors import ParameterError

__all__ = ["Profile", "GroupParams", "group_params", "derive_second_generator"]

H_SEED = b"proofchain/h/v1"

# 256-bit safe prime: q was searched upward from a SHA-256("proofchain/q/v1")
# derived 255-bit start until both q and 2q+1 were prime.
_TEST_P = 0xF45036D52A2F373A53B3D515BB9D0BC5FD7C6FADED0C4E9D7A45A9C9B1F42283
_TEST_Q = 0x7A281B6A95179B9D29D9EA8ADDCE85E2FEBE37D6F686274EBD22D4E4D8FA1141


class Profile(enum.Enum):
    TOY = "toy"
    TEST = "test"


def derive_second_generator(p: int) -> int:
    """Nothing-up-my-sleeve second generator: hash an ASCII seed (with a
    retry counter) into Z_p and square it into the quadratic-residue
    subgroup, skipping 0 and 1."""
    counter = 0
    while True:
        digest = hashlib.sha256(H_SEED + counter.to_bytes(4, "big")).digest()
        h = pow(int.from_bytes(digest, "big") % p, 2, p)
        if h not in (0, 1):
            return h
        counter += 1


@dataclass(frozen=True)
class GroupParams:
    """A safe-prime group with two independent subgroup generators."""

    p: int
    q: int
    g: int
    h: int
    profile: Profile

    def __post_init__(self) -> None:
        if self.p != 2 * self.q + 1:
            raise ParameterError("p must equal 2q + 1")
        for name, gen in (("g", self.g), ("h", self.h)):
            if gen in (0, 1) or pow(gen, self.q, self.p) != 1:
                raise ParameterError(f"{name} is not an order-q subgroup element")
        if self.g == self.h:
            raise ParameterError("g and h must differ")

    @property
    def digest(self) -> bytes:
        """Content digest binding proofs to one parameter set."""
        return _params_digest(self.p, self.q, self.g, self.h, self.profile.value)

    def in_subgroup(self, x: int) -> bool:
        return 0 < x < self.p and pow(x, self.q, self.p) == 1

    def check_scalar(self, x: int, what: str = "scalar") -> int:
        if not 0 <= x < self.q:
            raise ParameterError(f"{what} out of range [0, q): {x}")
        return x


@lru_cache(maxsize=None)
def _params_digest(p: int, q: int, g: int, h: int, profile: str) -> bytes:
    return sha256(
        canonical_bytes({"p": p, "q": q, "g": g, "h": h, "profile": profile})
    )


@lru_cache(maxsize=None)
def _build_params(profile: Profile) -> GroupParams:
    if profile is Profile.TOY:
        return GroupParams(p=23, q=11, g=2, h=3, profile=profile)
    return GroupParams(
        p=_TEST_P,
        q=_TEST_Q,
        g=4,
        h=derive_second_generator(_TEST_P),
        profile=profile,
    )


def group_params(profile: Profile | str = Profile.TEST) -> GroupParams:
    """Fixed, deterministic parameters per profile."""
    if isinstance(profile, str):
        try:
            profile = Profile(profile.lower())
        except ValueError:
            raise ParameterError(f"unknown profile: {profile!r}") from None
    return _build_params(profile)
