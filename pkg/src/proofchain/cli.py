"""Command-line surface over the documented file formats.

Files: ledger.jsonl (one block per line), graph.json, *.zkb bundles,
transcript.json.  Exit codes: 0 success or verdict-true, 1 verification
failed, 2 usage or I/O error.  With --json all machine output lands on
stdout as canonical JSON.
"""

from __future__ import annotations

import json
import secrets
import sys
from pathlib import Path

import click

from .encoding import canonical_bytes, canonical_str, sha256
from .errors import ProofChainError
from .graph import graph_from_json, graph_to_json, lint_chain, strict_graph_from_json, verify_chain
from .ledger import (
    EntryKind,
    LedgerEntry,
    append_block,
    audit_chain,
    empty_ledger,
    export_jsonl,
    import_jsonl,
)
from .scenarios import SCENARIO_NAMES, ScenarioConfig, run_scenario
from .zklink import (
    ZkLinkBundle,
    check_bundle,
    commit_preserved,
    make_record,
    preserved_from_json,
    preserved_to_json,
    validate_shared,
    zkcu_aggregate_sum,
    zkcu_predicate_geq,
    zkcu_reveal_field,
)
from .crypto.params import group_params
from .crypto.rng import DeterministicRng


class CliError(click.ClickException):
    exit_code = 2


def _fail(message: str) -> "CliError":
    return CliError(message)


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise _fail(f"cannot read {path}: {exc}") from exc


def _write_bytes(path: str, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise _fail(f"cannot write {path}: {exc}") from exc


def _load_json(path: str):
    try:
        return json.loads(_read_bytes(path).decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise _fail(f"{path} is not valid JSON: {exc}") from exc


def _load_ledger(path: str):
    data = _read_bytes(path)
    try:
        return import_jsonl(data)
    except ProofChainError as exc:
        raise _fail(f"{path} is not a valid ledger: {exc}") from exc


def _save_ledger(state, path: str) -> None:
    _write_bytes(path, export_jsonl(state))


def _get_seed(seed_hex: str | None) -> bytes:
    if seed_hex:
        try:
            return bytes.fromhex(seed_hex)
        except ValueError as exc:
            raise _fail(f"--seed must be hex: {exc}") from exc
    seed = secrets.token_bytes(32)
    click.echo(f"generated seed: {seed.hex()}", err=True)
    return seed


def _emit(ctx: click.Context, payload, human: str) -> None:
    if ctx.obj.get("json"):
        click.echo(canonical_str(payload))
    else:
        click.echo(human)


@click.group()
@click.option("--json", "json_out", is_flag=True, help="Machine output as canonical JSON.")
@click.option(
    "--profile",
    envvar="PROOFCHAIN_PROFILE",
    default="test",
    type=click.Choice(["toy", "test"], case_sensitive=False),
    help="Group parameter profile (env: PROOFCHAIN_PROFILE).",
)
@click.pass_context
def cli(ctx: click.Context, json_out: bool, profile: str) -> None:
    """Proof-chain toolkit: anchor, prove, verify, analyze."""
    ctx.obj = {"json": json_out, "profile": profile.lower()}


# --- ledger ------------------------------------------------------------------


@cli.group()
def ledger() -> None:
    """Manage the simulated append-only ledger."""


@ledger.command("init")
@click.option("--out", required=True, type=click.Path(), help="Ledger file to create.")
@click.pass_context
def ledger_init(ctx: click.Context, out: str) -> None:
    _write_bytes(out, b"")
    _emit(ctx, {"ledger": out, "blocks": 0}, f"initialized empty ledger at {out}")


@ledger.command("append")
@click.option("--ledger", "ledger_path", required=True, type=click.Path())
@click.option("--kind", required=True, type=click.Choice([k.value for k in EntryKind]))
@click.option("--author", required=True)
@click.option("--payload-file", required=True, type=click.Path())
@click.option("--timestamp", required=True, type=int)
@click.pass_context
def ledger_append(
    ctx: click.Context, ledger_path: str, kind: str, author: str, payload_file: str, timestamp: int
) -> None:
    state = _load_ledger(ledger_path)
    payload = _load_json(payload_file)
    try:
        entry = LedgerEntry(
            kind=EntryKind(kind), author=author, payload=canonical_bytes(payload)
        )
        state = append_block(state, [entry], timestamp)
    except ProofChainError as exc:
        raise _fail(str(exc)) from exc
    _save_ledger(state, ledger_path)
    _emit(
        ctx,
        {"entry_id": entry.entry_id, "block": len(state.blocks) - 1},
        f"appended {kind} entry {entry.entry_id.hex()}",
    )


@ledger.command("export")
@click.option("--ledger", "ledger_path", required=True, type=click.Path())
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def ledger_export(ctx: click.Context, ledger_path: str, out: str) -> None:
    state = _load_ledger(ledger_path)
    _write_bytes(out, export_jsonl(state))
    _emit(ctx, {"blocks": len(state.blocks), "out": out}, f"exported {len(state.blocks)} blocks to {out}")


@ledger.command("import")
@click.option("--in", "in_path", required=True, type=click.Path())
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def ledger_import(ctx: click.Context, in_path: str, out: str) -> None:
    state = _load_ledger(in_path)
    if not audit_chain(state):
        raise _fail(f"{in_path} fails the chain audit")
    _save_ledger(state, out)
    _emit(ctx, {"blocks": len(state.blocks), "out": out}, f"imported {len(state.blocks)} blocks to {out}")


@ledger.command("audit")
@click.option("--ledger", "ledger_path", required=True, type=click.Path())
@click.pass_context
def ledger_audit(ctx: click.Context, ledger_path: str) -> None:
    data = _read_bytes(ledger_path)
    try:
        state = import_jsonl(data)
        ok = audit_chain(state)
    except ProofChainError:
        ok = False
    _emit(ctx, {"audit": ok}, f"audit: {'ok' if ok else 'FAILED'}")
    if not ok:
        ctx.exit(1)


# --- commit ------------------------------------------------------------------


@cli.command("commit")
@click.option("--ledger", "ledger_path", required=True, type=click.Path())
@click.option("--owner", required=True)
@click.option("--records", "records_path", required=True, type=click.Path(),
              help='JSON: [{"record_id": ..., "fields": [[name, value], ...]}, ...]')
@click.option("--label", default="preserved-records", show_default=True)
@click.option("--timestamp", required=True, type=int)
@click.option("--seed", "seed_hex", default=None, help="Hex seed for salts and blindings.")
@click.option("--openings-out", required=True, type=click.Path(),
              help="Private openings file for later proving. Keep it secret.")
@click.pass_context
def commit(
    ctx: click.Context,
    ledger_path: str,
    owner: str,
    records_path: str,
    label: str,
    timestamp: int,
    seed_hex: str | None,
    openings_out: str,
) -> None:
    """Anchor a batch of private records on the ledger."""
    profile = ctx.obj["profile"]
    params = group_params(profile)
    state = _load_ledger(ledger_path)
    seed = _get_seed(seed_hex)
    rng = DeterministicRng(seed, domain=b"proofchain/cli/commit")
    raw_records = _load_json(records_path)
    try:
        records = [
            make_record(r["record_id"], [tuple(f) for f in r["fields"]], rng, params)
            for r in raw_records
        ]
        state, pc = commit_preserved(
            records, owner, state, timestamp, label=label, profile=profile
        )
    except (ProofChainError, KeyError, TypeError) as exc:
        raise _fail(f"cannot commit records: {exc}") from exc
    _save_ledger(state, ledger_path)
    _write_bytes(openings_out, canonical_bytes(preserved_to_json(pc)))
    _emit(
        ctx,
        {"anchor": pc.ledger_anchor, "set_root": pc.set_root, "records": len(records)},
        f"anchored {len(records)} records; anchor entry {pc.ledger_anchor.hex()}",
    )


# --- prove -------------------------------------------------------------------


@cli.group()
def prove() -> None:
    """Generate zero-knowledge computation unit bundles."""


def _load_openings(path: str):
    try:
        return preserved_from_json(_load_json(path))
    except (ProofChainError, KeyError, TypeError) as exc:
        raise _fail(f"cannot load openings from {path}: {exc}") from exc


def _write_bundle(ctx: click.Context, bundle: ZkLinkBundle, out: str) -> None:
    _write_bytes(out, bundle.to_bytes())
    _emit(
        ctx,
        {"bundle": out, "statement_digest": bundle.statement_digest},
        f"wrote bundle {out} (validator {bundle.validator_id})",
    )


@prove.command("reveal")
@click.option("--openings", required=True, type=click.Path())
@click.option("--record", "record_id", required=True)
@click.option("--field", "field_name", required=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def prove_reveal(ctx, openings: str, record_id: str, field_name: str, out: str) -> None:
    pc = _load_openings(openings)
    try:
        bundle = zkcu_reveal_field(pc, record_id, field_name)
    except ProofChainError as exc:
        raise _fail(str(exc)) from exc
    _write_bundle(ctx, bundle, out)


@prove.command("geq")
@click.option("--openings", required=True, type=click.Path())
@click.option("--record", "record_id", required=True)
@click.option("--field", "field_name", required=True)
@click.option("--threshold", required=True, type=int)
@click.option("--n-bits", default=16, show_default=True, type=int)
@click.option("--seed", "seed_hex", default=None)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def prove_geq(
    ctx, openings: str, record_id: str, field_name: str, threshold: int,
    n_bits: int, seed_hex: str | None, out: str,
) -> None:
    pc = _load_openings(openings)
    seed = _get_seed(seed_hex)
    try:
        bundle = zkcu_predicate_geq(pc, record_id, field_name, threshold, seed, n_bits)
    except ProofChainError as exc:
        raise _fail(str(exc)) from exc
    _write_bundle(ctx, bundle, out)


@prove.command("sum")
@click.option("--openings", required=True, type=click.Path())
@click.option("--records", "record_ids", default=None,
              help="Comma-separated record ids; default: all records.")
@click.option("--field", "field_name", required=True)
@click.option("--total", default=None, type=int,
              help="Claimed total; default: the true sum of the openings.")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def prove_sum(
    ctx, openings: str, record_ids: str | None, field_name: str,
    total: int | None, out: str,
) -> None:
    pc = _load_openings(openings)
    ids = record_ids.split(",") if record_ids else [r.record_id for r in pc.records]
    try:
        if total is None:
            total = sum(pc.record(rid).field(field_name).value for rid in ids)
        bundle = zkcu_aggregate_sum(pc, ids, field_name, total)
    except ProofChainError as exc:
        raise _fail(str(exc)) from exc
    _write_bundle(ctx, bundle, out)


# --- verify ------------------------------------------------------------------


@cli.command("verify")
@click.option("-f", "--file", "bundle_path", required=True, type=click.Path())
@click.option("--ledger", "ledger_path", required=True, type=click.Path())
@click.option("--record", "record_verdict", is_flag=True,
              help="Also record the verdict on the ledger (needs --timestamp).")
@click.option("--timestamp", default=None, type=int)
@click.pass_context
def verify(
    ctx: click.Context, bundle_path: str, ledger_path: str,
    record_verdict: bool, timestamp: int | None,
) -> None:
    """Check a bundle against the ledger; exit 0 iff the verdict is true."""
    state = _load_ledger(ledger_path)
    try:
        bundle = ZkLinkBundle.from_bytes(_read_bytes(bundle_path))
    except (ProofChainError, ValueError, KeyError) as exc:
        raise _fail(f"{bundle_path} is not a valid bundle: {exc}") from exc
    if record_verdict:
        if timestamp is None:
            raise _fail("--record requires --timestamp")
        try:
            state, result = validate_shared(state, bundle, timestamp)
        except ProofChainError as exc:
            raise _fail(str(exc)) from exc
        _save_ledger(state, ledger_path)
        verdict, reason = result.verdict, result.reason
    else:
        verdict, reason = check_bundle(state, bundle)
    _emit(ctx, {"verdict": verdict, "reason": reason},
          f"verdict: {'true' if verdict else 'false'} ({reason})")
    if not verdict:
        ctx.exit(1)


# --- chain -------------------------------------------------------------------


@cli.group()
def chain() -> None:
    """Build, verify, and lint proof-chain graphs."""


@chain.command("build")
@click.option("-f", "--file", "graph_path", required=True, type=click.Path())
@click.option("--out", default=None, type=click.Path())
@click.pass_context
def chain_build(ctx: click.Context, graph_path: str, out: str | None) -> None:
    """Validate a graph file, enforcing every build-time rule."""
    try:
        graph = strict_graph_from_json(_load_json(graph_path))
    except ProofChainError as exc:
        raise _fail(str(exc)) from exc
    data = canonical_bytes(graph_to_json(graph))
    if out:
        _write_bytes(out, data)
    _emit(
        ctx,
        {"entities": len(graph.entities), "links": len(graph.links)},
        f"graph ok: {len(graph.entities)} entities, {len(graph.links)} links",
    )


@chain.command("verify")
@click.option("-f", "--file", "graph_path", required=True, type=click.Path())
@click.option("--target", required=True)
@click.option("--ledger", "ledger_path", required=True, type=click.Path())
@click.pass_context
def chain_verify(ctx: click.Context, graph_path: str, target: str, ledger_path: str) -> None:
    """Walk a public claim back to its anchors; exit 0 iff verified."""
    state = _load_ledger(ledger_path)
    try:
        graph = graph_from_json(_load_json(graph_path))
        report = verify_chain(graph, target, state)
    except ProofChainError as exc:
        raise _fail(str(exc)) from exc
    _emit(
        ctx,
        report.to_json(),
        f"target {target}: verified={report.verified} "
        f"strength={report.chain_strength.label} length={report.chain_length}",
    )
    if not report.verified:
        ctx.exit(1)


@chain.command("lint")
@click.option("-f", "--file", "graph_path", required=True, type=click.Path())
@click.option("--ledger", "ledger_path", default=None, type=click.Path())
@click.pass_context
def chain_lint(ctx: click.Context, graph_path: str, ledger_path: str | None) -> None:
    """Report design smells; advisory, always exits 0."""
    state = _load_ledger(ledger_path) if ledger_path else empty_ledger()
    try:
        graph = graph_from_json(_load_json(graph_path))
    except ProofChainError as exc:
        raise _fail(str(exc)) from exc
    warnings = lint_chain(graph, state)
    human = "\n".join(f"{w.code} {w.subject}: {w.message}" for w in warnings) or "no warnings"
    _emit(ctx, {"warnings": [w.to_json() for w in warnings]}, human)


# --- scenario ----------------------------------------------------------------


@cli.group()
def scenario() -> None:
    """Run the built-in end-to-end case studies."""


@scenario.command("run")
@click.argument("name", type=click.Choice(list(SCENARIO_NAMES)))
@click.option("--seed", "seed_hex", default=None)
@click.option("--out", default=None, type=click.Path(), help="Transcript file to write.")
@click.option("--age", default=34, show_default=True, type=int)
@click.option("--threshold", default=18, show_default=True, type=int)
@click.option("--days", default=30, show_default=True, type=int)
@click.option("--shipments", default=12, show_default=True, type=int)
@click.option("--tamper", is_flag=True)
@click.option("--corrupt-ecosystem", is_flag=True)
@click.option("--ledger-out", default=None, type=click.Path(), help="Also export the final ledger.")
@click.pass_context
def scenario_run(
    ctx: click.Context, name: str, seed_hex: str | None, out: str | None,
    age: int, threshold: int, days: int, shipments: int,
    tamper: bool, corrupt_ecosystem: bool, ledger_out: str | None,
) -> None:
    config = ScenarioConfig(
        seed=_get_seed(seed_hex),
        profile=ctx.obj["profile"],
        age=age,
        threshold=threshold,
        days=days,
        shipments=shipments,
        tamper=tamper,
        corrupt_ecosystem=corrupt_ecosystem,
    )
    try:
        result = run_scenario(name, config)
    except ProofChainError as exc:
        raise _fail(str(exc)) from exc
    if out:
        _write_bytes(out, result.transcript_bytes)
    if ledger_out:
        _save_ledger(result.ledger, ledger_out)
    final = result.transcript["final_verdict"]
    _emit(
        ctx,
        result.transcript if ctx.obj.get("json") else {"final_verdict": final},
        f"scenario {name}: final verdict {'true' if final else 'false'}"
        + (f"; transcript written to {out}" if out else ""),
    )
    if not final:
        ctx.exit(1)


def main(argv: list[str] | None = None) -> int:
    """Programmatic entry point mirroring the console script's exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False, obj={})
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 2
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return exc.exit_code
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
