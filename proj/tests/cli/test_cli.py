# delegsim: EIP-7702 delegation simulator
# Copyright 2026 The delegsim Authors.
# SPDX-License-Identifier: Apache-2.0

"""End-to-end checks of the delegsim command line tool."""

import filecmp
import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("DELEGSIM_BIN", "delegsim")


def cli(*args, cwd):
    return subprocess.run([BIN, *map(str, args)], cwd=cwd, capture_output=True, text=True)


def load(path):
    return json.loads(Path(path).read_text())


@pytest.mark.parametrize("scenario", ["a", "b", "c", "pipeline", "composite"])
def test_run_layout(tmp_path, scenario):
    p = cli("--output", "out", "run", scenario, cwd=tmp_path)
    assert p.returncode == 0, p.stderr
    out = tmp_path / "out"
    manifest = load(out / "run.json")
    assert manifest["postcondition"] == "held"
    assert manifest["seed"] == 7702
    assert (out / "state" / "before.json").is_file()
    assert (out / "state" / "after.json").is_file()
    assert list((out / "reports").glob("*.json"))
    traces = list((out / "traces").glob("0x*.jsonl"))
    assert traces
    for line in traces[0].read_text().splitlines():
        json.loads(line)


def test_run_is_deterministic(tmp_path):
    assert cli("--output", "x", "run", "pipeline", cwd=tmp_path).returncode == 0
    assert cli("--output", "y", "run", "pipeline", cwd=tmp_path).returncode == 0
    cmp = filecmp.dircmp(tmp_path / "x", tmp_path / "y")
    stack = [cmp]
    while stack:
        c = stack.pop()
        assert not c.diff_files and not c.left_only and not c.right_only
        stack.extend(c.subdirs.values())


def test_pipeline_report_values(tmp_path):
    assert cli("--output", "out", "run", "pipeline", cwd=tmp_path).returncode == 0
    a = load(tmp_path / "out" / "reports" / "A.json")
    assert a["eth_after"] == "690000000000000"
    assert a["tokens_after"] == "0"
    assert a["drain_satisfied"] is True


def test_crosschain_layout(tmp_path):
    p = cli("--output", "out", "run", "crosschain", cwd=tmp_path)
    assert p.returncode == 0, p.stderr
    out = tmp_path / "out"
    agg = load(out / "reports" / "aggregate.json")
    assert len(agg["chains"]) == 3
    for cid in (1337, 2337, 3337):
        assert (out / "reports" / f"chain_{cid}").is_dir()
        assert (out / "state" / f"chain_{cid}" / "after.json").is_file()


def test_policy_block_is_expected(tmp_path):
    p = cli("--output", "out", "--policy", "foreground", "run", "b", cwd=tmp_path)
    assert p.returncode == 0, p.stderr
    manifest = load(tmp_path / "out" / "run.json")
    assert manifest["blocked"] is True
    assert manifest["expect_drain"] is False


def test_policy_file(tmp_path):
    (tmp_path / "p.json").write_text(json.dumps({"require_scope": True}))
    p = cli("--output", "out", "--policy", "p.json", "run", "a", cwd=tmp_path)
    assert p.returncode == 0, p.stderr
    assert load(tmp_path / "out" / "run.json")["blocked"] is True


def test_postcondition_failure(tmp_path):
    # Dust below the threshold: the drain condition cannot hold without a policy.
    (tmp_path / "cfg.json").write_text(json.dumps({"victim_eth": "0.005", "self_send_value": "0"}))
    p = cli("--config", "cfg.json", "--output", "out", "run", "a", cwd=tmp_path)
    assert p.returncode == 4
    assert load(tmp_path / "out" / "run.json")["postcondition"] == "failed"


def test_unaffordable_trigger(tmp_path):
    (tmp_path / "cfg.json").write_text(json.dumps({"victim_eth": "0.005"}))
    p = cli("--config", "cfg.json", "--output", "out", "run", "a", cwd=tmp_path)
    assert p.returncode == 4
    assert "InsufficientGasFunds" in p.stderr


def test_config_chains(tmp_path):
    cfg = {"victim_eth": "2", "chains": [{"chain_id": 10}, {"chain_id": 20}]}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    p = cli("--config", "cfg.json", "--output", "out", "run", "crosschain", cwd=tmp_path)
    assert p.returncode == 0, p.stderr
    assert (tmp_path / "out" / "reports" / "chain_20").is_dir()


def test_init_craft_authtx_scan(tmp_path):
    assert cli("--output", "st", "init", cwd=tmp_path).returncode == 0
    p = cli("scan", "st/state.json", cwd=tmp_path)
    assert p.returncode == 0
    assert json.loads(p.stdout)["status"] == "no delegations"

    p = cli("craft-tuple", "--chain-id", 1337, "--target", "drainer", "--nonce", 1,
            "--key", "victim", "--out", "t.hex", cwd=tmp_path)
    assert p.returncode == 0, p.stderr
    crafted = json.loads(p.stdout)
    assert crafted["authority"] == "0xf39fd6e51aad88f6f4ce6ab8827279cfffb92266"

    p = cli("--output", "st", "authtx", "--tuple", "t.hex", "--sender", "victim", cwd=tmp_path)
    assert p.returncode == 0, p.stderr
    receipt = json.loads(p.stdout)
    assert receipt["gas_used"] == 33500
    assert receipt["tuples_applied"][0]["accepted"] is True

    p = cli("scan", "st/state.json", "--address", "victim", cwd=tmp_path)
    assert p.returncode == 0
    report = json.loads(p.stdout)
    assert report["findings"][0]["malicious"] is True
    assert "warning" in p.stderr

    p = cli("scan", "t.hex", cwd=tmp_path)
    assert json.loads(p.stdout)["authority"] == crafted["authority"]


def test_nonce_mismatch_is_not_an_error(tmp_path):
    assert cli("--output", "st", "init", cwd=tmp_path).returncode == 0
    cli("craft-tuple", "--chain-id", 1337, "--target", "drainer", "--nonce", 9,
        "--out", "t.hex", cwd=tmp_path)
    p = cli("--output", "st", "authtx", "--tuple", "t.hex", "--sender", "attacker", cwd=tmp_path)
    assert p.returncode == 0
    assert json.loads(p.stdout)["tuples_applied"][0]["reject_reason"] == "NonceMismatch"


def test_policy_rejection_exit_code(tmp_path):
    assert cli("--output", "st", "init", cwd=tmp_path).returncode == 0
    cli("craft-tuple", "--chain-id", 0, "--target", "drainer", "--out", "t.hex", cwd=tmp_path)
    p = cli("--output", "st", "--policy", "chain-agnostic", "authtx", "--tuple", "t.hex",
            "--sender", "attacker", cwd=tmp_path)
    assert p.returncode == 3
    assert json.loads(p.stdout)["tuples_applied"][0]["reject_reason"] == "ChainAgnosticForbidden"


def test_scan_flags_chain_agnostic_tuple(tmp_path):
    cli("craft-tuple", "--chain-id", 0, "--target", "drainer", "--out", "t.hex", cwd=tmp_path)
    assert "warning" in json.loads(cli("scan", "t.hex", cwd=tmp_path).stdout)


@pytest.mark.parametrize("args", [
    ["scan", "missing.json"],
    ["run", "nope"],
    ["bogus"],
    [],
    ["--policy", "no-such-preset", "run", "a"],
    ["craft-tuple", "--target", "0x12"],
])
def test_usage_errors(tmp_path, args):
    assert cli(*args, cwd=tmp_path).returncode == 2


def test_malformed_inputs(tmp_path):
    (tmp_path / "bad.hex").write_text("0xzz")
    assert cli("scan", "bad.hex", cwd=tmp_path).returncode == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert cli("scan", "bad.json", cwd=tmp_path).returncode == 2
    (tmp_path / "cfg.json").write_text(json.dumps({"chain_id": "x"}))
    assert cli("--config", "cfg.json", "run", "a", cwd=tmp_path).returncode == 2


def test_help(tmp_path):
    p = cli("--help", cwd=tmp_path)
    assert p.returncode == 0
    assert "craft-tuple" in p.stdout
