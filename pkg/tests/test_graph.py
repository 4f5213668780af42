"""Proof-chain graphs: build rules, link checks, chain semantics vs an
independent path-enumeration oracle, and the lint guidelines."""

import dataclasses
import random

import pytest

from proofchain.crypto import DeterministicRng, group_params, keygen, sign_message
from proofchain.encoding import canonical_bytes, canonical_str, from_canonical_bytes, sha256, transcript_hash
from proofchain.errors import GraphBuildError, NotFoundError
from proofchain.graph import (
    CONCAT_TAG,
    ChainStrength,
    DataEntity,
    Domain,
    Granularity,
    LinkKind,
    ProofGraph,
    ProofLink,
    add_entity,
    add_link,
    empty_graph,
    graph_from_json,
    graph_to_json,
    lint_chain,
    strict_graph_from_json,
    verify_chain,
    verify_link,
)
from proofchain.ledger import (
    EntryKind,
    empty_ledger,
    lookup_entry,
    register_authority,
    register_commitment,
)
from proofchain.zklink import (
    commit_preserved,
    make_record,
    register_zkcu_validators,
    zkcu_predicate_geq,
)

PARAMS = group_params("test")


def _entity(eid, domain=Domain.PUBLIC, gran=Granularity.DIGEST, payload=b"x", anchor=None, tick=0):
    return DataEntity(
        id=eid,
        domain=domain,
        granularity=gran,
        payload_digest=sha256(payload),
        created_at=tick,
        anchor=anchor,
    )


def _stat_evidence(tag="model-1"):
    model = {"name": tag, "version": "1.0", "features": ["a", "b"]}
    return {"model": model, "descriptor_digest": sha256(canonical_bytes(model))}


# --- build rules ---------------------------------------------------------------


def test_duplicate_entity_rejected():
    g = add_entity(empty_graph(), _entity("a"))
    with pytest.raises(GraphBuildError):
        add_entity(g, _entity("a"))


def test_dangling_endpoint_rejected():
    g = add_entity(empty_graph(), _entity("a"))
    with pytest.raises(GraphBuildError):
        add_link(g, ProofLink("l", "a", "ghost", LinkKind.STATISTICAL, _stat_evidence()))


def test_self_loop_rejected():
    g = add_entity(empty_graph(), _entity("a"))
    with pytest.raises(GraphBuildError):
        add_link(g, ProofLink("l", "a", "a", LinkKind.STATISTICAL, _stat_evidence()))


def test_cycle_rejected():
    g = empty_graph()
    for eid in ("a", "b", "c"):
        g = add_entity(g, _entity(eid))
    g = add_link(g, ProofLink("l1", "a", "b", LinkKind.STATISTICAL, _stat_evidence()))
    g = add_link(g, ProofLink("l2", "b", "c", LinkKind.STATISTICAL, _stat_evidence()))
    with pytest.raises(GraphBuildError):
        add_link(g, ProofLink("l3", "c", "a", LinkKind.STATISTICAL, _stat_evidence()))


def test_zero_knowledge_must_cross_private_to_public():
    g = add_entity(empty_graph(), _entity("pub1", Domain.PUBLIC))
    g = add_entity(g, _entity("pub2", Domain.PUBLIC))
    g = add_entity(g, _entity("priv", Domain.PRIVATE))
    with pytest.raises(GraphBuildError):
        add_link(g, ProofLink("zk", "pub1", "pub2", LinkKind.ZERO_KNOWLEDGE, {}))
    add_link(g, ProofLink("zk", "priv", "pub1", LinkKind.ZERO_KNOWLEDGE, {"bundle": {}}))


def test_logical_from_private_needs_public_inputs():
    g = add_entity(empty_graph(), _entity("priv", Domain.PRIVATE))
    g = add_entity(g, _entity("pub", Domain.PUBLIC))
    ev = {"recipe": "identity", "source_payload": "null"}
    with pytest.raises(GraphBuildError):
        add_link(g, ProofLink("l", "priv", "pub", LinkKind.LOGICAL, ev))
    add_link(
        g,
        ProofLink("l", "priv", "pub", LinkKind.LOGICAL, dict(ev, inputs_public=True)),
    )


# --- verify_link ----------------------------------------------------------------


def test_authority_link_signed_by_registered_key():
    sk, pk = keygen(b"auth", PARAMS)
    ledger, entry = register_authority(empty_ledger(), "registrar", pk, 0)
    target = _entity("claim", payload=b"attested")
    g = add_entity(empty_graph(), _entity("authority"))
    g = add_entity(g, target)
    sig = sign_message(sk, target.payload_digest, b"n", PARAMS)
    link = ProofLink(
        "att", "authority", "claim", LinkKind.AUTHORITY,
        {"authority": "registrar", "profile": "test", "signature": sig.to_json()},
    )
    g = add_link(g, link)
    assert verify_link(link, g, ledger) == (True, "ok")

    # Unregistered key: same shape, key never registered.
    sk2, _ = keygen(b"rogue", PARAMS)
    sig2 = sign_message(sk2, target.payload_digest, b"n", PARAMS)
    rogue = ProofLink(
        "att2", "authority", "claim", LinkKind.AUTHORITY,
        {"authority": "nobody", "profile": "test", "signature": sig2.to_json()},
    )
    g = add_link(g, rogue)
    assert verify_link(rogue, g, ledger) == (False, "unanchored")


def test_logical_identity_link():
    payload = canonical_bytes({"total": 12})
    src = _entity("src", payload=payload)
    dst = _entity("dst", payload=payload)
    g = add_entity(add_entity(empty_graph(), src), dst)
    link = ProofLink(
        "l", "src", "dst", LinkKind.LOGICAL,
        {"recipe": "identity", "source_payload": payload.decode()},
    )
    g = add_link(g, link)
    assert verify_link(link, g, empty_ledger()) == (True, "ok")


def test_logical_sum_link_detects_wrong_total():
    source_tree = {"mon": 5, "tue": 7, "wed": 1}
    src_payload = canonical_bytes(source_tree)
    good_target = canonical_bytes(13)
    bad_target = canonical_bytes(14)
    g = empty_graph()
    g = add_entity(g, _entity("src", payload=src_payload))
    g = add_entity(g, _entity("ok", payload=good_target))
    g = add_entity(g, _entity("off", payload=bad_target))
    ev = {"recipe": "sum-of-fields", "source_payload": src_payload.decode()}
    good = ProofLink("good", "src", "ok", LinkKind.LOGICAL, ev)
    bad = ProofLink("bad", "src", "off", LinkKind.LOGICAL, ev)
    g = add_link(add_link(g, good), bad)
    assert verify_link(good, g, empty_ledger()) == (True, "ok")
    assert verify_link(bad, g, empty_ledger()) == (False, "recompute-mismatch")


def test_logical_concat_hash_link():
    routes = ["plant-A", "hub-3", "port-N"]
    src_payload = canonical_bytes(routes)
    target_payload = canonical_bytes(transcript_hash(CONCAT_TAG, *(r.encode() for r in routes)))
    g = empty_graph()
    g = add_entity(g, _entity("routes", payload=src_payload))
    g = add_entity(g, _entity("digest", payload=target_payload))
    link = ProofLink(
        "l", "routes", "digest", LinkKind.LOGICAL,
        {"recipe": "concat-hash", "source_payload": src_payload.decode()},
    )
    g = add_link(g, link)
    assert verify_link(link, g, empty_ledger()) == (True, "ok")
    # Evidence diverging from the published source payload is caught first.
    altered = dataclasses.replace(
        link, evidence={"recipe": "concat-hash", "source_payload": canonical_str(["plant-A", "hub-9", "port-N"])}
    )
    assert verify_link(altered, g, empty_ledger()) == (False, "source-mismatch")


def test_statistical_link_checks_descriptor_only():
    g = add_entity(add_entity(empty_graph(), _entity("m")), _entity("p"))
    good = ProofLink("s", "m", "p", LinkKind.STATISTICAL, _stat_evidence())
    g = add_link(g, good)
    assert verify_link(good, g, empty_ledger()) == (True, "declared")
    ev = _stat_evidence()
    ev["descriptor_digest"] = sha256(b"other")
    bad = ProofLink("s2", "m", "p", LinkKind.STATISTICAL, ev)
    g = add_link(g, bad)
    assert verify_link(bad, g, empty_ledger()) == (False, "descriptor-mismatch")


def _zk_fixture():
    """Anchored records, a geq bundle, and the entity pair it connects."""
    rng = DeterministicRng(b"zk-graph")
    ledger = register_zkcu_validators(empty_ledger(), "op", 0)
    records = [make_record("r", [("age", 34)], rng, PARAMS)]
    ledger, pc = commit_preserved(records, "owner", ledger, 1, label="archive")
    bundle = zkcu_predicate_geq(pc, "r", "age", 18, b"seed", n_bits=8)
    src = DataEntity(
        id="records", domain=Domain.PRIVATE, granularity=Granularity.TRANSACTIONAL,
        payload_digest=pc.set_root, created_at=1, anchor=pc.ledger_anchor,
    )
    dst = DataEntity(
        id="claim", domain=Domain.PUBLIC, granularity=Granularity.DIGEST,
        payload_digest=bundle.statement_digest, created_at=2,
    )
    link = ProofLink("zk", "records", "claim", LinkKind.ZERO_KNOWLEDGE, {"bundle": bundle.to_json()})
    return ledger, src, dst, link


def test_zero_knowledge_link_delegates_to_bundle_check():
    ledger, src, dst, link = _zk_fixture()
    g = add_link(add_entity(add_entity(empty_graph(), src), dst), link)
    assert verify_link(link, g, ledger) == (True, "ok")
    # Target entity whose digest is not the statement digest.
    other = dataclasses.replace(dst, payload_digest=sha256(b"other"))
    g2 = add_link(add_entity(add_entity(empty_graph(), src), other), link)
    assert verify_link(link, g2, ledger) == (False, "statement-mismatch")


# --- verify_chain ----------------------------------------------------------------


def test_vacuous_chain():
    g = add_entity(empty_graph(), _entity("orphan"))
    report = verify_chain(g, "orphan", empty_ledger())
    assert not report.verified
    assert report.chain_strength is ChainStrength.NONE
    assert report.chain_length == 0
    assert report.anchors_reached == ()


def test_unknown_target():
    with pytest.raises(NotFoundError):
        verify_chain(empty_graph(), "ghost", empty_ledger())


def _anchored_entity(ledger, eid, payload, tick, domain=Domain.PRIVATE,
                     gran=Granularity.TRANSACTIONAL, owner=None, label=None):
    digest = sha256(payload)
    ledger, entry = register_commitment(ledger, owner or eid, digest, label or eid, tick)
    entity = DataEntity(
        id=eid, domain=domain, granularity=gran,
        payload_digest=digest, created_at=tick, anchor=entry,
    )
    return ledger, entity


def test_zk_then_logical_chain_is_strong_length_two():
    # anchored records -ZK-> claim -Logical(identity)-> final
    ledger, src, claim, zk = _zk_fixture()
    statement_payload = canonical_bytes(zk.evidence["bundle"]["statement"])
    assert sha256(statement_payload) == claim.payload_digest
    final = _entity("final", payload=statement_payload)
    log = ProofLink(
        "log", "claim", "final", LinkKind.LOGICAL,
        {"recipe": "identity", "source_payload": statement_payload.decode()},
    )
    g = empty_graph()
    for e in (src, claim, final):
        g = add_entity(g, e)
    g = add_link(add_link(g, zk), log)
    report = verify_chain(g, "final", ledger)
    assert report.verified
    assert report.chain_strength is ChainStrength.STRONG
    assert report.chain_length == 2


def test_logical_then_statistical_chain_is_weak():
    payload = canonical_bytes({"obs": 1})
    ledger, origin = _anchored_entity(empty_ledger(), "origin", payload, 0)
    mid = _entity("model-out", payload=payload)
    target = _entity("claim", payload=payload)
    g = empty_graph()
    for e in (origin, mid, target):
        g = add_entity(g, e)
    g = add_link(
        g,
        ProofLink("stat", "origin", "model-out", LinkKind.STATISTICAL, _stat_evidence()),
    )
    g = add_link(
        g,
        ProofLink(
            "log", "model-out", "claim", LinkKind.LOGICAL,
            {"recipe": "identity", "source_payload": payload.decode()},
        ),
    )
    report = verify_chain(g, "claim", ledger)
    assert report.verified
    assert report.chain_strength is ChainStrength.WEAK
    assert report.chain_length == 2


def test_directly_anchored_target():
    payload = canonical_bytes(["row"])
    ledger, entity = _anchored_entity(empty_ledger(), "self", payload, 0, domain=Domain.PUBLIC)
    g = add_entity(empty_graph(), entity)
    report = verify_chain(g, "self", ledger)
    assert report.verified and report.chain_length == 0
    assert report.chain_strength is ChainStrength.STRONG


def test_stale_anchor_not_accepted():
    payload = canonical_bytes(["v1"])
    ledger, entity = _anchored_entity(empty_ledger(), "doc", payload, 0)
    # A later registration under the same (author, label) supersedes it.
    ledger, _ = register_commitment(ledger, "doc", sha256(b"v2"), "doc", 5)
    g = add_entity(empty_graph(), entity)
    report = verify_chain(g, "doc", ledger)
    assert not report.verified


def test_purity_identical_reports():
    ledger, src, dst, link = _zk_fixture()
    g = add_link(add_entity(add_entity(empty_graph(), src), dst), link)
    a = verify_chain(g, "claim", ledger)
    b = verify_chain(g, "claim", ledger)
    assert a == b


# --- oracle comparison ------------------------------------------------------------

CLASS_OF = {
    LinkKind.LOGICAL: 3,
    LinkKind.ZERO_KNOWLEDGE: 3,
    LinkKind.AUTHORITY: 2,
    LinkKind.STATISTICAL: 1,
}


def oracle_chain(graph, target, ledger):
    """Independent brute-force path enumeration re-deriving chain semantics."""

    def anchor_ok(entity):
        if entity.anchor is None:
            return False, None
        try:
            entry = lookup_entry(ledger, entity.anchor)
        except NotFoundError:
            return False, None
        tree = entry.payload_tree()
        if entry.kind is EntryKind.COMMITMENT_RECORD:
            if bytes.fromhex(tree["digest"]) != entity.payload_digest:
                return False, None
            registrations = ledger.commitments[(entry.author, tree["label"])]
            _, latest = max(registrations, key=lambda p: p[0])
            if latest != entity.anchor:
                return False, None
            return True, entity.anchor.hex()
        if entry.kind is EntryKind.AUTHORITY_KEY:
            if sha256(entry.payload) != entity.payload_digest:
                return False, None
            return True, tree["party"]
        return False, None

    link_ok = {l.id: verify_link(l, graph, ledger)[0] for l in graph.links}
    paths = []

    def walk(eid, acc):
        ok, _ = anchor_ok(graph.entities[eid])
        if ok:
            paths.append(list(acc))
        for link in graph.in_links(eid):
            if not link_ok[link.id]:
                continue
            if link.kind is LinkKind.AUTHORITY:
                paths.append(acc + [link])
            walk(link.source, acc + [link])

    walk(target, [])
    if not paths:
        strength, length = 0, 0
    else:
        strength = max(min((CLASS_OF[l.kind] for l in p), default=3) for p in paths)
        length = max(len(p) for p in paths)
    verified = bool(paths) and all(link_ok[l.id] for l in graph.in_links(target))
    return strength, length, verified


def _random_graph(rng, seq):
    """Random DAG over <= 8 entities with a mix of valid and broken links."""
    ledger = register_zkcu_validators(empty_ledger(), "op", 0)
    sk, pk = keygen(b"corpus-auth", PARAMS)
    ledger, _ = register_authority(ledger, "corpus-auth", pk, 0)

    include_zk = rng.random() < 0.5
    n = rng.randrange(2, 7 if include_zk else 9)
    payloads = {}
    entities = {}
    tick = 1

    link_plan = []  # (source idx, target idx, kind, valid)
    for j in range(1, n):
        for i in range(j):
            if rng.random() < 0.45:
                kind = rng.choice(
                    [LinkKind.LOGICAL, LinkKind.AUTHORITY, LinkKind.STATISTICAL]
                )
                link_plan.append((i, j, kind, rng.random() < 0.7))

    # Assign payloads topologically so intended-valid identity links can hold.
    for j in range(n):
        payload = canonical_bytes({"node": j, "blob": rng.randrange(1 << 30)})
        for (i, jj, kind, valid) in link_plan:
            if jj == j and kind is LinkKind.LOGICAL and valid:
                payload = payloads[i]
                break
        payloads[j] = payload

    for j in range(n):
        anchored = rng.random() < 0.5
        anchor = None
        if anchored:
            digest = sha256(payloads[j])
            if rng.random() < 0.2:  # stale/wrong anchor
                digest = sha256(payloads[j] + b"!")
            ledger, anchor = register_commitment(
                ledger, f"owner{seq}-{j}", digest, f"label{j}", tick
            )
            tick += 1
        entities[j] = DataEntity(
            id=f"e{j}",
            domain=rng.choice([Domain.PRIVATE, Domain.PUBLIC]),
            granularity=rng.choice([Granularity.TRANSACTIONAL, Granularity.DIGEST]),
            payload_digest=sha256(payloads[j]),
            created_at=j,
            anchor=anchor,
        )

    links = []
    for idx, (i, j, kind, valid) in enumerate(link_plan):
        if kind is LinkKind.LOGICAL:
            payload = payloads[i] if valid else payloads[i] + b"?"
            ev = {"recipe": "identity", "source_payload": payload.decode()}
        elif kind is LinkKind.AUTHORITY:
            message = entities[j].payload_digest
            if valid:
                sig = sign_message(sk, message, b"n%d" % idx, PARAMS)
                ev = {"authority": "corpus-auth", "profile": "test", "signature": sig.to_json()}
            else:
                rogue_sk, _ = keygen(b"rogue", PARAMS)
                sig = sign_message(rogue_sk, message, b"n%d" % idx, PARAMS)
                ev = {"authority": "corpus-auth", "profile": "test", "signature": sig.to_json()}
        else:
            ev = _stat_evidence(f"m{idx}")
            if not valid:
                ev["descriptor_digest"] = sha256(b"broken")
        links.append(ProofLink(f"l{idx}", f"e{i}", f"e{j}", kind, ev))

    graph = ProofGraph(entities={e.id: e for e in entities.values()}, links=tuple(links))

    if include_zk:
        zk_ledger, src, dst, zk_link = _zk_fixture_cached()
        # Splice the canned pair in: its ledger registrations go first.
        merged = zk_ledger
        for block in ledger.blocks:
            from proofchain.ledger import append_block

            merged = append_block(merged, list(block.entries), block.timestamp + 10)
        graph = ProofGraph(
            entities={**graph.entities, src.id: src, dst.id: dst},
            links=graph.links + (zk_link,),
        )
        if graph.entities and rng.random() < 0.7 and n >= 1:
            graph = dataclasses.replace(
                graph,
                links=graph.links
                + (
                    ProofLink(
                        "bridge", dst.id, "e0", LinkKind.STATISTICAL, _stat_evidence("bridge")
                    ),
                ),
            )
        ledger = merged

    return graph, ledger


_ZK_CACHE = None


def _zk_fixture_cached():
    global _ZK_CACHE
    if _ZK_CACHE is None:
        _ZK_CACHE = _zk_fixture()
    return _ZK_CACHE


def test_chain_semantics_match_oracle_on_corpus():
    rng = random.Random("graph-corpus")
    for seq in range(40):
        graph, ledger = _random_graph(rng, seq)
        for entity_id in graph.entities:
            report = verify_chain(graph, entity_id, ledger)
            strength, length, verified = oracle_chain(graph, entity_id, ledger)
            assert int(report.chain_strength) == strength, (seq, entity_id)
            assert report.chain_length == length, (seq, entity_id)
            assert report.verified == verified, (seq, entity_id)


def test_monotonicity_under_growth():
    rng = random.Random("monotone")
    for seq in range(15):
        graph, ledger = _random_graph(rng, 100 + seq)
        before = {
            eid: verify_chain(graph, eid, ledger) for eid in graph.entities
        }
        # Grow: a fresh anchored entity plus a verified statistical link in.
        payload = canonical_bytes({"grow": seq})
        ledger, new_entity = _anchored_entity(
            ledger, f"new{seq}", payload, 1000, domain=Domain.PUBLIC, gran=Granularity.DIGEST
        )
        target = rng.choice(sorted(graph.entities))
        grown = add_entity(graph, new_entity)
        grown = add_link(
            grown,
            ProofLink(f"grow{seq}", new_entity.id, target, LinkKind.STATISTICAL, _stat_evidence()),
        )
        for eid, old in before.items():
            new = verify_chain(grown, eid, ledger)
            assert int(new.chain_strength) >= int(old.chain_strength), eid
            assert new.chain_length >= old.chain_length, eid


def test_tamper_propagation_flips_downstream_targets():
    payload = canonical_bytes({"ground": "truth"})
    ledger, origin = _anchored_entity(empty_ledger(), "origin", payload, 0)
    g = add_entity(empty_graph(), origin)
    evidence = {"recipe": "identity", "source_payload": payload.decode(), "inputs_public": True}
    prev = "origin"
    for i in range(3):
        eid = f"hop{i}"
        g = add_entity(g, _entity(eid, payload=payload))
        g = add_link(g, ProofLink(f"l{i}", prev, eid, LinkKind.LOGICAL, evidence))
        prev = eid
    for eid in ("hop0", "hop1", "hop2"):
        assert verify_chain(g, eid, ledger).verified

    # Mutate the anchored source payload.
    mutated = dataclasses.replace(origin, payload_digest=sha256(payload + b"!"))
    g2 = dataclasses.replace(g, entities={**g.entities, "origin": mutated})
    for eid in ("hop0", "hop1", "hop2"):
        assert not verify_chain(g2, eid, ledger).verified


# --- lint -------------------------------------------------------------------------


def test_w1_fires_on_unanchorable_public_entity():
    g = add_entity(empty_graph(), _entity("floating", Domain.PUBLIC))
    warnings = lint_chain(g, empty_ledger())
    assert any(w.code == "W1" and w.subject == "floating" for w in warnings)


def test_w2_fires_on_free_to_fake_origin():
    # A verified chain exists via the anchored records; the unanchored
    # transactional sensor feeding the same claim is the ship-location smell.
    ledger, src, dst, link = _zk_fixture()
    g = add_entity(add_entity(empty_graph(), src), dst)
    g = add_link(g, link)
    sensor_payload = canonical_bytes(["lat=1", "lon=2"])
    g = add_entity(
        g,
        _entity("ship-location", Domain.PUBLIC, Granularity.TRANSACTIONAL, sensor_payload),
    )
    g = add_link(
        g,
        ProofLink(
            "loc", "ship-location", "claim", LinkKind.LOGICAL,
            {"recipe": "identity", "source_payload": sensor_payload.decode()},
        ),
    )
    warnings = lint_chain(g, ledger)
    assert any(w.code == "W2" and w.subject == "ship-location" for w in warnings)


def test_w3_fires_on_planted_public_to_public_zk_link():
    # Construct directly: add_link would reject this, lint must still see it.
    a = _entity("pub-a", Domain.PUBLIC)
    b = _entity("pub-b", Domain.PUBLIC)
    planted = ProofLink("needless", "pub-a", "pub-b", LinkKind.ZERO_KNOWLEDGE, {"bundle": {}})
    g = ProofGraph(entities={"pub-a": a, "pub-b": b}, links=(planted,))
    warnings = lint_chain(g, empty_ledger())
    assert any(w.code == "W3" and w.subject == "needless" for w in warnings)
    # And the private->public zk link never triggers W3.
    ledger, src, dst, link = _zk_fixture()
    g2 = add_link(add_entity(add_entity(empty_graph(), src), dst), link)
    assert not any(w.code == "W3" for w in lint_chain(g2, ledger))


def test_w4_fires_when_only_statistical_paths_exist():
    payload = canonical_bytes({"features": "x"})
    ledger, origin = _anchored_entity(empty_ledger(), "features", payload, 0)
    g = add_entity(empty_graph(), origin)
    g = add_entity(g, _entity("prediction", Domain.PUBLIC))
    g = add_link(
        g, ProofLink("model", "features", "prediction", LinkKind.STATISTICAL, _stat_evidence())
    )
    warnings = lint_chain(g, ledger)
    assert any(w.code == "W4" and w.subject == "prediction" for w in warnings)


def test_lint_clean_on_verified_strong_graph():
    ledger, src, dst, link = _zk_fixture()
    g = add_link(add_entity(add_entity(empty_graph(), src), dst), link)
    assert lint_chain(g, ledger) == []


# --- serialization ------------------------------------------------------------------


def test_graph_json_round_trip():
    ledger, src, dst, link = _zk_fixture()
    g = add_link(add_entity(add_entity(empty_graph(), src), dst), link)
    wire = from_canonical_bytes(canonical_bytes(graph_to_json(g)))
    loaded = graph_from_json(wire)
    assert canonical_bytes(graph_to_json(loaded)) == canonical_bytes(graph_to_json(g))
    report_a = verify_chain(g, "claim", ledger)
    report_b = verify_chain(loaded, "claim", ledger)
    assert report_a == report_b


def test_strict_loader_enforces_domain_rules():
    a = _entity("pub-a", Domain.PUBLIC)
    b = _entity("pub-b", Domain.PUBLIC)
    planted = ProofLink("needless", "pub-a", "pub-b", LinkKind.ZERO_KNOWLEDGE, {"bundle": {}})
    doc = {
        "entities": [a.to_json(), b.to_json()],
        "links": [planted.to_json()],
    }
    wire = from_canonical_bytes(canonical_bytes(doc))
    graph_from_json(wire)  # lenient load succeeds
    with pytest.raises(GraphBuildError):
        strict_graph_from_json(wire)


def test_loader_rejects_cycles_and_dangles():
    a = _entity("a")
    b = _entity("b")
    l1 = ProofLink("l1", "a", "b", LinkKind.STATISTICAL, _stat_evidence())
    l2 = ProofLink("l2", "b", "a", LinkKind.STATISTICAL, _stat_evidence())
    doc = {"entities": [a.to_json(), b.to_json()], "links": [l1.to_json(), l2.to_json()]}
    with pytest.raises(GraphBuildError):
        graph_from_json(from_canonical_bytes(canonical_bytes(doc)))
    doc2 = {"entities": [a.to_json()], "links": [l1.to_json()]}
    with pytest.raises(GraphBuildError):
        graph_from_json(from_canonical_bytes(canonical_bytes(doc2)))
