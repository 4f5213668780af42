"""End-to-end case studies producing deterministic transcripts.

Three runnable stories exercise the whole stack:

* identity  -- an archive authority anchors a citizen's record set and signs
  it; a service provider learns "age >= threshold" and nothing else.
* audit     -- an auditee re-anchors its growing accounting records day by
  day; an auditor verifies a claimed period total against the anchored
  commitments without seeing any daily amount.
* supplychain -- a manufacturer anchors private shipment records; the public
  domain carries a proven monthly total (zero-knowledge crossing) and a
  route digest held by plain recomputation, no proof wasted where the data
  is already public.

Given the same config every run emits byte-identical transcripts, which
double as golden files for regression tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .crypto.params import group_params
from .crypto.rng import DeterministicRng
from .crypto.signing import keygen, sign_message
from .encoding import canonical_bytes, sha256, transcript_hash
from .errors import ParameterError, ProofError
from .graph import (
    CONCAT_TAG,
    ChainReport,
    DataEntity,
    Domain,
    Granularity,
    LinkKind,
    ProofGraph,
    ProofLink,
    add_entity,
    add_link,
    empty_graph,
    lint_chain,
    verify_chain,
)
from .ledger import LedgerState, empty_ledger, lookup_entry, register_authority, register_commitment
from .zklink import (
    PreservedCommitment,
    build_record_set,
    commit_preserved,
    make_record,
    register_zkcu_validators,
    validate_shared,
    zkcu_aggregate_sum,
    zkcu_predicate_geq,
)

__all__ = [
    "ScenarioConfig",
    "ScenarioResult",
    "run_identity_scenario",
    "run_audit_scenario",
    "run_supplychain_scenario",
    "run_scenario",
    "SCENARIO_NAMES",
]

SCENARIO_NAMES = ("identity", "audit", "supplychain")

CORRUPT_ECOSYSTEM_CAVEAT = (
    "proof-chain verification binds public claims to anchored private records; "
    "it cannot restrain an ecosystem whose members collude end to end, since "
    "every anchored record would itself be fabricated"
)


@dataclass(frozen=True)
class ScenarioConfig:
    seed: bytes
    profile: str = "test"
    age: int = 34
    threshold: int = 18
    days: int = 30
    shipments: int = 12
    tamper: bool = False
    corrupt_ecosystem: bool = False


@dataclass
class ScenarioResult:
    transcript: dict[str, Any]
    ledger: LedgerState
    graph: ProofGraph
    bundles: list[Any] = field(default_factory=list)

    @property
    def transcript_bytes(self) -> bytes:
        return canonical_bytes(self.transcript)


class _Recorder:
    """Collects transcript steps with the ledger delta after each one."""

    def __init__(self) -> None:
        self.steps: list[dict[str, Any]] = []

    def step(
        self,
        actor: str,
        action: str,
        state: LedgerState,
        prev_state: LedgerState,
        verdict: Optional[bool] = None,
        **detail: Any,
    ) -> None:
        delta = None
        if state.blocks and (not prev_state.blocks or state.blocks[-1] is not prev_state.blocks[-1]):
            delta = state.blocks[-1].block_hash
        entry: dict[str, Any] = {"actor": actor, "action": action, "ledger_delta": delta}
        if verdict is not None:
            entry["verdict"] = verdict
        if detail:
            entry["detail"] = detail
        self.steps.append(entry)


def _tampered_commitment(
    pc: PreservedCommitment, mutate_record_id: str, field_name: str, profile: str
) -> PreservedCommitment:
    """Rebuild the owner's trees from mutated data while keeping the original
    ledger anchor: the shape of a post-anchor tamper attempt."""
    params = group_params(profile)
    records = []
    for record in pc.records:
        if record.record_id == mutate_record_id:
            fields = tuple(
                replace(f, value=f.value + 1) if f.name == field_name else f
                for f in record.fields
            )
            record = replace(record, fields=fields)
        records.append(record)
    record_trees, set_tree = build_record_set(records, params)
    return PreservedCommitment(
        owner=pc.owner,
        label=pc.label,
        profile=pc.profile,
        records=tuple(records),
        record_trees=record_trees,
        set_tree=set_tree,
        ledger_anchor=pc.ledger_anchor,
    )


def _finish(
    name: str,
    config: ScenarioConfig,
    recorder: _Recorder,
    ledger: LedgerState,
    graph: ProofGraph,
    report: ChainReport,
    extra_reports: dict[str, ChainReport],
    verdicts: list[bool],
    caveats: list[str],
    bundles: list[Any],
    config_detail: dict[str, Any],
) -> ScenarioResult:
    warnings = lint_chain(graph, ledger)
    final_verdict = bool(verdicts) and all(verdicts) and report.verified and all(
        r.verified for r in extra_reports.values()
    )
    transcript = {
        "scenario": name,
        "profile": config.profile,
        "seed": config.seed,
        "config": config_detail,
        "steps": recorder.steps,
        "final_report": report.to_json(),
        "reports": {k: v.to_json() for k, v in extra_reports.items()},
        "lint": [w.to_json() for w in warnings],
        "caveats": caveats,
        "final_verdict": final_verdict,
    }
    return ScenarioResult(transcript=transcript, ledger=ledger, graph=graph, bundles=bundles)


def run_identity_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Personal archive to personal information digest, authority-terminated."""
    params = group_params(config.profile)
    if not 0 <= config.age < 256 or not 0 <= config.threshold < 256:
        raise ParameterError("age and threshold must fit in 8 bits")
    rng = DeterministicRng(config.seed, domain=b"proofchain/scenario/identity")
    recorder = _Recorder()
    ledger = empty_ledger()
    tick = 0

    authority = "national-archive"
    sk, pk = keygen(rng.take(32), params)
    prev = ledger
    ledger, authority_entry = register_authority(ledger, authority, pk, tick, config.profile)
    recorder.step(authority, "register-authority-key", ledger, prev)

    prev = ledger
    ledger = register_zkcu_validators(ledger, "network-operator", tick)
    recorder.step("network-operator", "register-validators", ledger, prev)

    tick += 1
    record = make_record(
        "citizen-42",
        [("name", "Alice Example"), ("age", config.age), ("region", "north")],
        rng,
        params,
    )
    prev = ledger
    ledger, pc = commit_preserved(
        [record], authority, ledger, tick, label="personal-archive/citizen-42",
        profile=config.profile,
    )
    recorder.step(authority, "anchor-archive-root", ledger, prev)

    archive_digest = pc.set_root
    signature = sign_message(sk, archive_digest, rng.take(32), params)

    prover_pc = pc
    if config.tamper:
        prover_pc = _tampered_commitment(pc, "citizen-42", "age", config.profile)
        recorder.step(authority, "tamper-archive-post-anchor", ledger, ledger)

    tick += 1
    bundles: list[Any] = []
    claim_digest: bytes
    verdicts: list[bool] = []
    bundle = None
    try:
        bundle = zkcu_predicate_geq(
            prover_pc, "citizen-42", "age", config.threshold, rng.take(32), n_bits=8
        )
        bundles.append(bundle)
        claim_digest = bundle.statement_digest
        recorder.step("service-provider", "request-age-predicate", ledger, ledger)
        prev = ledger
        ledger, result = validate_shared(ledger, bundle, tick)
        verdicts.append(result.verdict)
        recorder.step(
            "validator", "validate-age-predicate", ledger, prev,
            verdict=result.verdict, reason=result.reason,
        )
    except ProofError as exc:
        claim_digest = sha256(canonical_bytes({"unproven": str(exc)}))
        recorder.step(
            "service-provider", "request-age-predicate-refused", ledger, ledger,
            verdict=False, reason=str(exc),
        )
        verdicts.append(False)

    graph = empty_graph()
    authority_payload = lookup_entry(ledger, authority_entry).payload
    graph = add_entity(
        graph,
        DataEntity(
            id="archive-authority",
            domain=Domain.PUBLIC,
            granularity=Granularity.DIGEST,
            payload_digest=sha256(authority_payload),
            created_at=0,
            anchor=authority_entry,
        ),
    )
    graph = add_entity(
        graph,
        DataEntity(
            id="personal-archive",
            domain=Domain.PRIVATE,
            granularity=Granularity.TRANSACTIONAL,
            payload_digest=archive_digest,
            created_at=1,
            anchor=pc.ledger_anchor,
        ),
    )
    graph = add_entity(
        graph,
        DataEntity(
            id="age-threshold-claim",
            domain=Domain.PUBLIC,
            granularity=Granularity.DIGEST,
            payload_digest=claim_digest,
            created_at=2,
        ),
    )
    graph = add_link(
        graph,
        ProofLink(
            id="authority-attests-archive",
            source="archive-authority",
            target="personal-archive",
            kind=LinkKind.AUTHORITY,
            evidence={
                "authority": authority,
                "profile": config.profile,
                "signature": signature.to_json(),
            },
        ),
    )
    if bundle is not None:
        graph = add_link(
            graph,
            ProofLink(
                id="age-zero-knowledge",
                source="personal-archive",
                target="age-threshold-claim",
                kind=LinkKind.ZERO_KNOWLEDGE,
                evidence={"bundle": bundle.to_json()},
            ),
        )

    report = verify_chain(graph, "age-threshold-claim", ledger)
    return _finish(
        "identity", config, recorder, ledger, graph, report, {}, verdicts, [],
        bundles,
        {"age": config.age, "threshold": config.threshold, "tamper": config.tamper},
    )


def run_audit_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Everyday records to a statistical report, anchored day by day."""
    params = group_params(config.profile)
    if config.days < 1:
        raise ParameterError("audit scenario needs at least one day")
    rng = DeterministicRng(config.seed, domain=b"proofchain/scenario/audit")
    recorder = _Recorder()
    ledger = empty_ledger()
    auditee = "auditee-bank"

    ledger = register_zkcu_validators(ledger, "network-operator", 0)
    recorder.step("network-operator", "register-validators", ledger, empty_ledger())

    amounts = [rng.scalar(1 << 16) for _ in range(config.days)]
    records = []
    pc = None
    for day, amount in enumerate(amounts):
        records.append(make_record(f"day-{day:04d}", [("amount", amount)], rng, params))
        prev = ledger
        # Cumulative re-anchoring: each day's root supersedes yesterday's
        # under the same label, so the freshest anchor covers the full set.
        ledger, pc = commit_preserved(
            list(records), auditee, ledger, day + 1,
            label="accounting-records", profile=config.profile,
        )
        recorder.step(auditee, f"anchor-day-{day:04d}", ledger, prev)

    true_total = sum(amounts)
    claimed = true_total + 1 if config.tamper else true_total
    tick = config.days + 1
    recorder.step("auditor", "request-period-total", ledger, ledger)
    bundle = zkcu_aggregate_sum(pc, [r.record_id for r in records], "amount", claimed)
    prev = ledger
    ledger, result = validate_shared(ledger, bundle, tick)
    recorder.step(
        "validator", "validate-period-total", ledger, prev,
        verdict=result.verdict, reason=result.reason,
    )

    graph = empty_graph()
    graph = add_entity(
        graph,
        DataEntity(
            id="daily-records",
            domain=Domain.PRIVATE,
            granularity=Granularity.TRANSACTIONAL,
            payload_digest=pc.set_root,
            created_at=config.days,
            anchor=pc.ledger_anchor,
        ),
    )
    graph = add_entity(
        graph,
        DataEntity(
            id="period-total-report",
            domain=Domain.PUBLIC,
            granularity=Granularity.DIGEST,
            payload_digest=bundle.statement_digest,
            created_at=tick,
        ),
    )
    graph = add_link(
        graph,
        ProofLink(
            id="total-zero-knowledge",
            source="daily-records",
            target="period-total-report",
            kind=LinkKind.ZERO_KNOWLEDGE,
            evidence={"bundle": bundle.to_json()},
        ),
    )

    report = verify_chain(graph, "period-total-report", ledger)
    return _finish(
        "audit", config, recorder, ledger, graph, report, {}, [result.verdict], [],
        [bundle],
        {"days": config.days, "claimed_total": claimed, "tamper": config.tamper},
    )


def run_supplychain_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Transparent and privacy domains side by side: a proven monthly total
    crosses the border with zero knowledge; the public route digest needs
    only plain recomputation."""
    params = group_params(config.profile)
    if config.shipments < 1:
        raise ParameterError("supply chain scenario needs at least one shipment")
    rng = DeterministicRng(config.seed, domain=b"proofchain/scenario/supplychain")
    recorder = _Recorder()
    ledger = empty_ledger()
    manufacturer = "manufacturer"

    ledger = register_zkcu_validators(ledger, "network-operator", 0)
    recorder.step("network-operator", "register-validators", ledger, empty_ledger())

    records = []
    for i in range(config.shipments):
        qty = rng.scalar(1 << 16)
        hub = f"hub-{rng.scalar(90) + 10}"
        records.append(
            make_record(f"shipment-{i:04d}", [("qty", qty), ("dest", hub)], rng, params)
        )
    prev = ledger
    ledger, pc = commit_preserved(
        records, manufacturer, ledger, 1, label="shipments/month", profile=config.profile
    )
    recorder.step(manufacturer, "anchor-shipment-records", ledger, prev)

    # Transparent-domain route list: public data, anchored for integrity.
    route_list = [f"hub-{rng.scalar(90) + 10}" for _ in range(4)]
    route_payload = canonical_bytes(route_list)
    prev = ledger
    ledger, route_anchor = register_commitment(
        ledger, manufacturer, sha256(route_payload), "route-list/month", 2
    )
    recorder.step(manufacturer, "anchor-route-list", ledger, prev)

    evidence_routes = list(route_list)
    if config.tamper:
        evidence_routes[0] = "hub-00"
        recorder.step(manufacturer, "tamper-route-evidence", ledger, ledger)
    evidence_payload = canonical_bytes(evidence_routes)
    digest_payload = canonical_bytes(
        transcript_hash(CONCAT_TAG, *(x.encode() for x in evidence_routes))
    )

    total = sum(r.field("qty").value for r in records)
    recorder.step("retail-partner", "request-monthly-total", ledger, ledger)
    bundle = zkcu_aggregate_sum(pc, [r.record_id for r in records], "qty", total)
    prev = ledger
    ledger, result = validate_shared(ledger, bundle, 3)
    recorder.step(
        "validator", "validate-monthly-total", ledger, prev,
        verdict=result.verdict, reason=result.reason,
    )

    graph = empty_graph()
    graph = add_entity(
        graph,
        DataEntity(
            id="shipment-records",
            domain=Domain.PRIVATE,
            granularity=Granularity.TRANSACTIONAL,
            payload_digest=pc.set_root,
            created_at=1,
            anchor=pc.ledger_anchor,
        ),
    )
    graph = add_entity(
        graph,
        DataEntity(
            id="route-list",
            domain=Domain.PUBLIC,
            granularity=Granularity.TRANSACTIONAL,
            payload_digest=sha256(route_payload),
            created_at=2,
            anchor=route_anchor,
        ),
    )
    graph = add_entity(
        graph,
        DataEntity(
            id="route-digest",
            domain=Domain.PUBLIC,
            granularity=Granularity.DIGEST,
            payload_digest=sha256(digest_payload),
            created_at=2,
        ),
    )
    graph = add_entity(
        graph,
        DataEntity(
            id="monthly-shipped-total",
            domain=Domain.PUBLIC,
            granularity=Granularity.DIGEST,
            payload_digest=bundle.statement_digest,
            created_at=3,
        ),
    )
    graph = add_link(
        graph,
        ProofLink(
            id="route-recompute",
            source="route-list",
            target="route-digest",
            kind=LinkKind.LOGICAL,
            evidence={
                "recipe": "concat-hash",
                "source_payload": evidence_payload.decode("utf-8"),
            },
        ),
    )
    graph = add_link(
        graph,
        ProofLink(
            id="total-zero-knowledge",
            source="shipment-records",
            target="monthly-shipped-total",
            kind=LinkKind.ZERO_KNOWLEDGE,
            evidence={"bundle": bundle.to_json()},
        ),
    )

    report = verify_chain(graph, "monthly-shipped-total", ledger)
    route_report = verify_chain(graph, "route-digest", ledger)
    caveats = [CORRUPT_ECOSYSTEM_CAVEAT] if config.corrupt_ecosystem else []
    return _finish(
        "supplychain", config, recorder, ledger, graph, report,
        {"route-digest": route_report}, [result.verdict], caveats, [bundle],
        {
            "shipments": config.shipments,
            "claimed_total": total,
            "tamper": config.tamper,
            "corrupt_ecosystem": config.corrupt_ecosystem,
        },
    )


_RUNNERS = {
    "identity": run_identity_scenario,
    "audit": run_audit_scenario,
    "supplychain": run_supplychain_scenario,
}


def run_scenario(name: str, config: ScenarioConfig) -> ScenarioResult:
    if name not in _RUNNERS:
        raise ParameterError(f"unknown scenario {name!r}")
    return _RUNNERS[name](config)
