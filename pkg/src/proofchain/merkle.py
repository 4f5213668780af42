"""SHA-256 Merkle trees with prefix domain separation.

Leaf digest is H(0x00 || payload), internal node is H(0x01 || left || right),
so a leaf can never masquerade as an internal node.  An unpaired node at any
level is carried up unchanged (no duplication).  One anchored root commits
to an arbitrary batch of records while membership proofs touch single
records.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

from .encoding import as_int, sha256
from .errors import ParameterError

__all__ = [
    "Side",
    "MerkleTree",
    "MerklePath",
    "build_tree",
    "prove_membership",
    "verify_membership",
    "path_root",
    "leaf_digest",
]

LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"


class Side(enum.Enum):
    """Which side of the running hash a path sibling sits on."""

    LEFT = "left"
    RIGHT = "right"


def leaf_digest(payload: bytes) -> bytes:
    return sha256(LEAF_PREFIX + payload)


def _node_digest(left: bytes, right: bytes) -> bytes:
    return sha256(NODE_PREFIX + left + right)


@dataclass(frozen=True)
class MerkleTree:
    leaves: tuple[bytes, ...]
    levels: tuple[tuple[bytes, ...], ...]

    @property
    def root(self) -> bytes:
        return self.levels[-1][0]


@dataclass(frozen=True)
class MerklePath:
    leaf_index: int
    siblings: tuple[tuple[Side, bytes], ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "leaf_index": self.leaf_index,
            "siblings": [[side.value, digest] for side, digest in self.siblings],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "MerklePath":
        return cls(
            leaf_index=as_int(obj["leaf_index"]),
            siblings=tuple(
                (Side(side), bytes.fromhex(digest)) for side, digest in obj["siblings"]
            ),
        )


def build_tree(leaf_payloads: list[bytes]) -> MerkleTree:
    """Deterministic tree over the given payloads; H = SHA-256."""
    if not leaf_payloads:
        raise ParameterError("cannot build a tree over zero leaves")
    leaves = tuple(leaf_digest(p) for p in leaf_payloads)
    levels = [leaves]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        nxt = []
        for i in range(0, len(prev) - 1, 2):
            nxt.append(_node_digest(prev[i], prev[i + 1]))
        if len(prev) % 2:
            nxt.append(prev[-1])
        levels.append(tuple(nxt))
    return MerkleTree(leaves=leaves, levels=tuple(levels))


def prove_membership(tree: MerkleTree, index: int) -> MerklePath:
    if not 0 <= index < len(tree.leaves):
        raise ParameterError(f"leaf index {index} out of bounds")
    siblings = []
    pos = index
    for level in tree.levels[:-1]:
        if pos % 2 == 0:
            if pos + 1 < len(level):
                siblings.append((Side.RIGHT, level[pos + 1]))
            # else: unpaired node carries up, no sibling at this level
        else:
            siblings.append((Side.LEFT, level[pos - 1]))
        pos //= 2
    return MerklePath(leaf_index=index, siblings=tuple(siblings))


def path_root(leaf_payload: bytes, path: MerklePath) -> bytes | None:
    """Replay a path from the leaf digest; None if the path is malformed."""
    try:
        current = leaf_digest(leaf_payload)
        for side, digest in path.siblings:
            if not isinstance(digest, bytes) or len(digest) != 32:
                return None
            if side is Side.LEFT:
                current = _node_digest(digest, current)
            elif side is Side.RIGHT:
                current = _node_digest(current, digest)
            else:
                return None
        return current
    except (TypeError, AttributeError):
        return None


def verify_membership(root: bytes, leaf_payload: bytes, path: MerklePath) -> bool:
    """True iff replaying the path from the leaf reproduces the root."""
    return path_root(leaf_payload, path) == root
