"""Proof-chain graph: typed, verifiable links between data entities.

Entities live in a private or public domain; directed links assert that an
upstream entity's integrity backs a downstream claim.  Four link kinds with
a fixed strength class each:

* Logical (Strong) -- the target recomputes deterministically from the
  source payload via a named recipe.
* ZeroKnowledge (Strong) -- a validated bundle crosses the private/public
  border without exposing the source.
* Authority (Anchored) -- a ledger-registered key signed the target digest;
  a chain may terminate here.
* Statistical (Weak) -- declared model metadata only, never semantically
  verified.

Chain verification walks a claim backward to ledger anchors or authorities.
The strength of a chain is the minimum class along its best verified anchor
path; the reported length is the longest verified anchor path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .crypto.params import group_params
from .crypto.signing import Signature, check_signature
from .encoding import as_int, canonical_bytes, from_canonical_bytes, sha256, transcript_hash
from .errors import GraphBuildError, NotFoundError
from .ledger import EntryKind, LedgerState, commitment_digest, is_latest_commitment, lookup_entry
from .zklink import ZkLinkBundle, check_bundle

__all__ = [
    "Domain",
    "Granularity",
    "LinkKind",
    "ChainStrength",
    "DataEntity",
    "ProofLink",
    "ProofGraph",
    "ChainReport",
    "LintWarning",
    "empty_graph",
    "add_entity",
    "add_link",
    "verify_link",
    "verify_chain",
    "lint_chain",
    "graph_to_json",
    "graph_from_json",
    "strict_graph_from_json",
]

CONCAT_TAG = b"\x05"


class Domain(enum.Enum):
    PRIVATE = "private"
    PUBLIC = "public"


class Granularity(enum.Enum):
    TRANSACTIONAL = "transactional"
    DIGEST = "digest"


class LinkKind(enum.Enum):
    LOGICAL = "logical"
    ZERO_KNOWLEDGE = "zero_knowledge"
    AUTHORITY = "authority"
    STATISTICAL = "statistical"


class ChainStrength(enum.IntEnum):
    NONE = 0
    WEAK = 1
    ANCHORED = 2
    STRONG = 3

    @property
    def label(self) -> str:
        return self.name.lower()


KIND_STRENGTH = {
    LinkKind.LOGICAL: ChainStrength.STRONG,
    LinkKind.ZERO_KNOWLEDGE: ChainStrength.STRONG,
    LinkKind.AUTHORITY: ChainStrength.ANCHORED,
    LinkKind.STATISTICAL: ChainStrength.WEAK,
}


@dataclass(frozen=True)
class DataEntity:
    id: str
    domain: Domain
    granularity: Granularity
    payload_digest: bytes
    created_at: int
    anchor: Optional[bytes] = None

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "domain": self.domain.value,
            "granularity": self.granularity.value,
            "payload_digest": self.payload_digest,
            "created_at": self.created_at,
            "anchor": self.anchor,
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "DataEntity":
        return cls(
            id=obj["id"],
            domain=Domain(obj["domain"]),
            granularity=Granularity(obj["granularity"]),
            payload_digest=bytes.fromhex(obj["payload_digest"]),
            created_at=as_int(obj["created_at"]),
            anchor=bytes.fromhex(obj["anchor"]) if obj.get("anchor") else None,
        )


@dataclass(frozen=True)
class ProofLink:
    id: str
    source: str
    target: str
    kind: LinkKind
    evidence: dict[str, Any]

    def __post_init__(self) -> None:
        # Wire-form evidence so built and parsed links behave identically.
        object.__setattr__(
            self, "evidence", from_canonical_bytes(canonical_bytes(self.evidence))
        )

    @property
    def strength_class(self) -> ChainStrength:
        return KIND_STRENGTH[self.kind]

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "source": self.source,
            "target": self.target,
            "kind": self.kind.value,
            "evidence": self.evidence,
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "ProofLink":
        return cls(
            id=obj["id"],
            source=obj["source"],
            target=obj["target"],
            kind=LinkKind(obj["kind"]),
            evidence=obj["evidence"],
        )


@dataclass(frozen=True)
class ProofGraph:
    entities: dict[str, DataEntity] = field(default_factory=dict)
    links: tuple[ProofLink, ...] = ()

    def in_links(self, entity_id: str) -> list[ProofLink]:
        return [l for l in self.links if l.target == entity_id]

    def out_links(self, entity_id: str) -> list[ProofLink]:
        return [l for l in self.links if l.source == entity_id]


def empty_graph() -> ProofGraph:
    return ProofGraph()


def add_entity(graph: ProofGraph, entity: DataEntity) -> ProofGraph:
    if entity.id in graph.entities:
        raise GraphBuildError(f"duplicate entity id {entity.id!r}")
    if len(entity.payload_digest) != 32:
        raise GraphBuildError("payload digest must be 32 bytes")
    entities = dict(graph.entities)
    entities[entity.id] = entity
    return replace(graph, entities=entities)


def _reaches(graph: ProofGraph, start: str, goal: str) -> bool:
    """Downstream reachability along link direction."""
    stack, seen = [start], set()
    while stack:
        node = stack.pop()
        if node == goal:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(l.target for l in graph.out_links(node))
    return False


def add_link(graph: ProofGraph, link: ProofLink) -> ProofGraph:
    if any(l.id == link.id for l in graph.links):
        raise GraphBuildError(f"duplicate link id {link.id!r}")
    for endpoint in (link.source, link.target):
        if endpoint not in graph.entities:
            raise GraphBuildError(f"dangling endpoint {endpoint!r}")
    if link.source == link.target or _reaches(graph, link.target, link.source):
        raise GraphBuildError(f"link {link.id!r} would introduce a cycle")
    source = graph.entities[link.source]
    target = graph.entities[link.target]
    if link.kind is LinkKind.ZERO_KNOWLEDGE:
        if source.domain is not Domain.PRIVATE or target.domain is not Domain.PUBLIC:
            raise GraphBuildError(
                f"zero-knowledge link {link.id!r} must cross private -> public"
            )
    if link.kind is LinkKind.LOGICAL and source.domain is Domain.PRIVATE:
        # Recomputation requires the source payload; from a private entity
        # that is only tenable when the inputs are declared public.
        if not link.evidence.get("inputs_public"):
            raise GraphBuildError(
                f"logical link {link.id!r} from a private entity needs public inputs"
            )
    return replace(graph, links=graph.links + (link,))


# --- link verification ------------------------------------------------------


def _apply_recipe(recipe: str, source_payload: bytes) -> bytes | None:
    """Named deterministic transforms for Logical links."""
    if recipe == "identity":
        return source_payload
    tree = from_canonical_bytes(source_payload)
    if recipe == "concat-hash":
        if not isinstance(tree, list) or not all(isinstance(x, str) for x in tree):
            return None
        return canonical_bytes(transcript_hash(CONCAT_TAG, *(x.encode() for x in tree)))
    if recipe == "sum-of-fields":
        values = list(tree.values()) if isinstance(tree, dict) else tree
        if not isinstance(values, list):
            return None
        return canonical_bytes(sum(as_int(v) for v in values))
    return None


def _check_logical(
    link: ProofLink, source: DataEntity, target: DataEntity
) -> tuple[bool, str]:
    source_payload = link.evidence["source_payload"].encode("utf-8")
    if sha256(source_payload) != source.payload_digest:
        return False, "source-mismatch"
    derived = _apply_recipe(link.evidence["recipe"], source_payload)
    if derived is None:
        return False, "unknown-recipe"
    if sha256(derived) != target.payload_digest:
        return False, "recompute-mismatch"
    return True, "ok"


def _check_zero_knowledge(
    link: ProofLink, source: DataEntity, target: DataEntity, ledger: LedgerState
) -> tuple[bool, str]:
    bundle = ZkLinkBundle.from_json(link.evidence["bundle"])
    if bundle.statement_digest != target.payload_digest:
        return False, "statement-mismatch"
    if source.anchor is None or source.anchor.hex() != bundle.statement.get("anchor"):
        return False, "anchor-mismatch"
    return check_bundle(ledger, bundle)


def _check_authority(
    link: ProofLink, target: DataEntity, ledger: LedgerState
) -> tuple[bool, str]:
    registered = ledger.authorities.get(link.evidence["authority"])
    if registered is None:
        return False, "unanchored"
    sig = Signature.from_json(link.evidence["signature"])
    if sig.signer_key != registered:
        return False, "unanchored"
    params = group_params(link.evidence["profile"])
    ok, reason = check_signature(sig, target.payload_digest, params)
    return (True, "ok") if ok else (False, f"signature:{reason}")


def _check_statistical(link: ProofLink) -> tuple[bool, str]:
    declared = bytes.fromhex(link.evidence["descriptor_digest"])
    if sha256(canonical_bytes(link.evidence["model"])) != declared:
        return False, "descriptor-mismatch"
    return True, "declared"


def verify_link(
    link: ProofLink, graph: ProofGraph, ledger: LedgerState
) -> tuple[bool, str]:
    """Kind-dispatched, pure check of one link's evidence."""
    try:
        source = graph.entities[link.source]
        target = graph.entities[link.target]
        if link.kind is LinkKind.LOGICAL:
            return _check_logical(link, source, target)
        if link.kind is LinkKind.ZERO_KNOWLEDGE:
            return _check_zero_knowledge(link, source, target, ledger)
        if link.kind is LinkKind.AUTHORITY:
            return _check_authority(link, target, ledger)
        if link.kind is LinkKind.STATISTICAL:
            return _check_statistical(link)
        return False, "unknown-kind"
    except Exception as exc:
        return False, f"malformed:{type(exc).__name__}"


# --- chain verification -----------------------------------------------------


def _anchor_ok(entity: DataEntity, ledger: LedgerState) -> tuple[bool, str | None]:
    """Valid anchor: a fresh commitment record or an authority key whose
    recorded digest matches the entity's payload digest."""
    if entity.anchor is None:
        return False, None
    try:
        entry = lookup_entry(ledger, entity.anchor)
    except NotFoundError:
        return False, None
    if entry.kind is EntryKind.COMMITMENT_RECORD:
        if commitment_digest(entry) != entity.payload_digest:
            return False, None
        if not is_latest_commitment(ledger, entity.anchor):
            return False, None
        return True, entry.entry_id.hex()
    if entry.kind is EntryKind.AUTHORITY_KEY:
        if sha256(entry.payload) != entity.payload_digest:
            return False, None
        return True, entry.payload_tree()["party"]
    return False, None


@dataclass(frozen=True)
class ChainReport:
    target: str
    verified: bool
    anchors_reached: tuple[str, ...]
    chain_strength: ChainStrength
    chain_length: int
    failures: tuple[tuple[str, str], ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "target": self.target,
            "verified": self.verified,
            "anchors_reached": list(self.anchors_reached),
            "chain_strength": self.chain_strength.label,
            "chain_length": self.chain_length,
            "failures": [list(f) for f in self.failures],
        }


class _ChainWalker:
    """Memoized backward walk shared by verify_chain and lint_chain."""

    def __init__(self, graph: ProofGraph, ledger: LedgerState) -> None:
        self.graph = graph
        self.ledger = ledger
        self._link_results: dict[str, tuple[bool, str]] = {}
        self._contrib: dict[str, tuple[ChainStrength, int, bool]] = {}
        self._nonstat: dict[str, bool] = {}
        self._anchors: dict[str, tuple[bool, str | None]] = {}

    def link_result(self, link: ProofLink) -> tuple[bool, str]:
        if link.id not in self._link_results:
            self._link_results[link.id] = verify_link(link, self.graph, self.ledger)
        return self._link_results[link.id]

    def anchor(self, entity_id: str) -> tuple[bool, str | None]:
        if entity_id not in self._anchors:
            self._anchors[entity_id] = _anchor_ok(self.graph.entities[entity_id], self.ledger)
        return self._anchors[entity_id]

    def contributions(self, entity_id: str, _trail: frozenset = frozenset()) -> tuple[ChainStrength, int, bool]:
        """(best strength, longest length, reachable) over verified anchor paths."""
        if entity_id in self._contrib:
            return self._contrib[entity_id]
        if entity_id in _trail:  # cycle in a hand-built graph: no contribution
            return ChainStrength.NONE, 0, False
        trail = _trail | {entity_id}
        best = ChainStrength.NONE
        longest = 0
        reachable = False
        ok, _ = self.anchor(entity_id)
        if ok:
            best, longest, reachable = ChainStrength.STRONG, 0, True
        for link in self.graph.in_links(entity_id):
            verified, _ = self.link_result(link)
            if not verified:
                continue
            cls = link.strength_class
            if link.kind is LinkKind.AUTHORITY:
                # A verified signature from a registered key terminates the
                # chain at this link, whatever lies behind the signer entity.
                reachable = True
                best = max(best, cls)
                longest = max(longest, 1)
            s, l, r = self.contributions(link.source, trail)
            if r:
                reachable = True
                best = max(best, min(cls, s))
                longest = max(longest, l + 1)
        result = (best, longest, reachable)
        self._contrib[entity_id] = result
        return result

    def has_nonstatistical_path(self, entity_id: str, _trail: frozenset = frozenset()) -> bool:
        if entity_id in self._nonstat:
            return self._nonstat[entity_id]
        if entity_id in _trail:
            return False
        trail = _trail | {entity_id}
        ok, _ = self.anchor(entity_id)
        result = ok
        if not result:
            for link in self.graph.in_links(entity_id):
                if link.kind is LinkKind.STATISTICAL:
                    continue
                verified, _ = self.link_result(link)
                if not verified:
                    continue
                if link.kind is LinkKind.AUTHORITY or self.has_nonstatistical_path(
                    link.source, trail
                ):
                    result = True
                    break
        self._nonstat[entity_id] = result
        return result

    def upstream_cone(self, entity_id: str) -> set[str]:
        seen: set[str] = set()
        stack = [entity_id]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(l.source for l in self.graph.in_links(node))
        return seen

    def anchors_reached(self, entity_id: str) -> list[str]:
        """Anchor identifiers reachable from the target via verified links."""
        found: set[str] = set()
        seen: set[str] = set()
        stack = [entity_id]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            ok, ident = self.anchor(node)
            if ok and ident is not None and self.contributions(node)[2]:
                found.add(ident)
            for link in self.graph.in_links(node):
                verified, _ = self.link_result(link)
                if not verified:
                    continue
                if link.kind is LinkKind.AUTHORITY:
                    found.add(link.evidence.get("authority", link.id))
                stack.append(link.source)
        return sorted(found)


def verify_chain(graph: ProofGraph, target: str, ledger: LedgerState) -> ChainReport:
    """Walk a claim back to its anchors and grade the weakest link."""
    if target not in graph.entities:
        raise NotFoundError(f"unknown entity {target!r}")
    walker = _ChainWalker(graph, ledger)
    strength, length, reachable = walker.contributions(target)
    failures = []
    for node in walker.upstream_cone(target):
        for link in graph.in_links(node):
            ok, reason = walker.link_result(link)
            if not ok:
                failures.append((link.id, reason))
    in_links_ok = all(walker.link_result(l)[0] for l in graph.in_links(target))
    verified = reachable and in_links_ok
    return ChainReport(
        target=target,
        verified=verified,
        anchors_reached=tuple(walker.anchors_reached(target)) if reachable else (),
        chain_strength=strength if reachable else ChainStrength.NONE,
        chain_length=length,
        failures=tuple(sorted(set(failures))),
    )


# --- lint --------------------------------------------------------------------


@dataclass(frozen=True)
class LintWarning:
    code: str
    subject: str
    message: str

    def to_json(self) -> dict[str, str]:
        return {"code": self.code, "subject": self.subject, "message": self.message}


def lint_chain(graph: ProofGraph, ledger: LedgerState) -> list[LintWarning]:
    """Machine-checkable design guidelines.

    W1 a public entity has no verified anchor path at all;
    W2 a chain hangs off an unanchored transactional origin (free to fake);
    W3 a zero-knowledge link starts from an already-public entity;
    W4 a public claim is only reachable through statistical links.
    """
    walker = _ChainWalker(graph, ledger)
    warnings: list[LintWarning] = []
    for entity in graph.entities.values():
        _, _, reachable = walker.contributions(entity.id)
        if entity.domain is Domain.PUBLIC and not reachable:
            warnings.append(
                LintWarning(
                    "W1",
                    entity.id,
                    f"public entity {entity.id!r} has no verified anchor path",
                )
            )
        anchored, _ = walker.anchor(entity.id)
        if (
            entity.granularity is Granularity.TRANSACTIONAL
            and not anchored
            and not graph.in_links(entity.id)
            and graph.out_links(entity.id)
        ):
            warnings.append(
                LintWarning(
                    "W2",
                    entity.id,
                    f"transactional origin {entity.id!r} feeds a chain but is not anchored; "
                    "its inputs are free to fake",
                )
            )
        if (
            entity.domain is Domain.PUBLIC
            and reachable
            and not walker.has_nonstatistical_path(entity.id)
        ):
            warnings.append(
                LintWarning(
                    "W4",
                    entity.id,
                    f"every anchor path to {entity.id!r} relies on a statistical link",
                )
            )
    for link in graph.links:
        if link.kind is LinkKind.ZERO_KNOWLEDGE:
            source = graph.entities.get(link.source)
            if source is not None and source.domain is Domain.PUBLIC:
                warnings.append(
                    LintWarning(
                        "W3",
                        link.id,
                        f"zero-knowledge link {link.id!r} starts from a public entity; "
                        "a plain recomputation link would do",
                    )
                )
    return sorted(warnings, key=lambda w: (w.code, w.subject))


# --- serialization -----------------------------------------------------------


def graph_to_json(graph: ProofGraph) -> dict[str, Any]:
    return {
        "entities": [e.to_json() for e in sorted(graph.entities.values(), key=lambda e: e.id)],
        "links": [l.to_json() for l in graph.links],
    }


def strict_graph_from_json(obj: dict[str, Any]) -> ProofGraph:
    """Build a graph from JSON with every add-time rule enforced, domain
    crossings included."""
    graph = empty_graph()
    for raw in obj.get("entities", []):
        graph = add_entity(graph, DataEntity.from_json(raw))
    for raw in obj.get("links", []):
        graph = add_link(graph, ProofLink.from_json(raw))
    return graph


def graph_from_json(obj: dict[str, Any]) -> ProofGraph:
    """Load a graph file.

    Structural invariants (unique ids, endpoints, acyclicity) are enforced;
    domain-crossing rules are left to lint so that questionable designs can
    be loaded and reported on rather than rejected outright.
    """
    graph = empty_graph()
    for raw in obj.get("entities", []):
        graph = add_entity(graph, DataEntity.from_json(raw))
    links: list[ProofLink] = []
    seen_ids: set[str] = set()
    for raw in obj.get("links", []):
        link = ProofLink.from_json(raw)
        if link.id in seen_ids:
            raise GraphBuildError(f"duplicate link id {link.id!r}")
        seen_ids.add(link.id)
        for endpoint in (link.source, link.target):
            if endpoint not in graph.entities:
                raise GraphBuildError(f"dangling endpoint {endpoint!r}")
        links.append(link)
    candidate = replace(graph, links=tuple(links))
    _assert_acyclic(candidate)
    return candidate


def _assert_acyclic(graph: ProofGraph) -> None:
    indegree = {eid: 0 for eid in graph.entities}
    for link in graph.links:
        if link.source == link.target:
            raise GraphBuildError(f"link {link.id!r} is a self-loop")
        indegree[link.target] += 1
    queue = [eid for eid, d in indegree.items() if d == 0]
    seen = 0
    while queue:
        node = queue.pop()
        seen += 1
        for link in graph.out_links(node):
            indegree[link.target] -= 1
            if indegree[link.target] == 0:
                queue.append(link.target)
    if seen != len(indegree):
        raise GraphBuildError("graph contains a cycle")
