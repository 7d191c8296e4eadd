// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/multichain.hpp>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace delegsim
{
using json = nlohmann::ordered_json;

/// Wei and token amounts are decimal strings.
json amount_json(Amount v);
Amount amount_from_json(const json& j);

json to_json(const TraceEvent& e);
json to_json(const TupleOutcome& t);
json to_json(const Receipt& r);
json to_json(const AuthorizationTuple& t);
json to_json(const ScenarioReport& r);
json to_json(const AggregateReport& a);
json to_json(const BundleReceipt& b);
json to_json(const guard::GuardPolicy& p);
json to_json(const std::vector<guard::DelegationFinding>& findings);

/// World state snapshot. Receipts are not included.
json state_to_json(const ChainState& state);
ChainState state_from_json(const json& j);

/// Policy file: {forbid_chain_agnostic, require_scope, foreground_only, expiry_blocks,
/// single_use, bundler_filter, paymaster_filter, entrypoint_check, allowlist}.
guard::GuardPolicy policy_from_json(const json& j);

UserOperation user_op_from_json(const json& j);

/// Overlays the keys present in `j` onto `base`. Amounts are ether strings ("0.1");
/// keys are hex scalars or the fixture names victim / attacker / relayer; addresses are
/// hex or fixture names. `policy` is a preset name or a policy object.
EnvConfig env_config_from_json(const json& j, EnvConfig base = {});

/// Fixture name or 0x-prefixed hex.
Address resolve_address(std::string_view text, const ActorSet& actors = {});
PrivateKey resolve_key(std::string_view text);

/// Preset name, or a policy object.
guard::GuardPolicy policy_from_spec(const json& j);

/// One JSON object per line.
std::string trace_to_jsonl(const std::vector<TraceEvent>& trace);

/// Canonical text form: two-space indent and a trailing newline.
std::string dump(const json& j);
}  // namespace delegsim
