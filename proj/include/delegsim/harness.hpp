// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/aa4337.hpp>
#include <delegsim/guard.hpp>
#include <delegsim/signing.hpp>
#include <delegsim/txproc.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace delegsim
{
namespace fixtures
{
/// Well-known development keys #0, #1, #2.
const PrivateKey& victim_key();
const PrivateKey& attacker_key();
const PrivateKey& relayer_key();

/// Drainer deployed on the single-chain devnet.
const Address& local_drainer();
/// Drainer deployed at the same address on every chain of the multi-chain setup.
const Address& crosschain_drainer();
const Address& mock_token();
const Address& dummy_protocol();
const Address& paymaster();
}  // namespace fixtures

/// Keys and contract addresses taking part in a run.
struct ActorSet
{
    PrivateKey victim_key = fixtures::victim_key();
    PrivateKey attacker_key = fixtures::attacker_key();
    /// Third party that calls the protocol and bundles user operations.
    PrivateKey relayer_key = fixtures::relayer_key();
    Address delegate = fixtures::local_drainer();
    Address token = fixtures::mock_token();
    Address protocol = fixtures::dummy_protocol();
    Address paymaster = fixtures::paymaster();

    [[nodiscard]] Address victim() const { return derive_address(victim_key); }
    [[nodiscard]] Address attacker() const { return derive_address(attacker_key); }
    [[nodiscard]] Address relayer() const { return derive_address(relayer_key); }
};

struct EnvConfig
{
    uint64_t chain_id = 1337;
    /// chainId carried by the installed tuple. Unset means the chain's own id.
    std::optional<uint64_t> tuple_chain_id;
    uint8_t auth_magic = default_auth_magic;
    Amount victim_eth = 10000 * one_ether;
    Amount victim_tokens = 2000 * one_ether;
    Amount attacker_eth = 10000 * one_ether;
    Amount relayer_eth = 10000 * one_ether;
    Amount paymaster_eth = 10 * one_ether;
    /// EntryPoint deposit, the source of op call values.
    Amount entrypoint_eth = one_ether;
    uint64_t gas_limit = 100000;
    /// Economic threshold of the drain condition.
    Amount delta = one_ether / 100;
    Amount self_send_value = one_ether / 10;
    Amount protocol_value = one_ether / 10;
    /// Outer call of the install transaction; the zero address does not trigger the delegate.
    Address install_call_target;
    guard::GuardPolicy policy;
    /// Blocks between install and trigger.
    uint64_t dormancy_blocks = 0;
    ActorSet actors;
};

struct Env
{
    ChainState state;
    ActorSet actors;
    EnvConfig config;
    EntryPoint entrypoint;
};

/// Funds the actors, deploys the drainer, token, protocol, EntryPoint and paymaster.
Env setup_environment(const EnvConfig& config);

struct DrainCriterion
{
    Amount delta = one_ether / 100;
    /// Inclusive block range. Unset bounds follow the two snapshots.
    std::optional<uint64_t> window_start;
    std::optional<uint64_t> window_end;
};

struct DrainCheck
{
    bool balance_decreased = false;
    bool delegation_resolved = false;
    Amount value_to_attacker = 0;
    bool satisfied = false;
};

/// Drain condition over the receipts appended between the two snapshots.
DrainCheck check_drain(const ChainState& before, const ChainState& after, const Address& victim,
    const Address& attacker, const DrainCriterion& criterion);

struct ScenarioReport
{
    std::string scenario_id;
    uint64_t chain_id = 0;
    Amount eth_before = 0;
    Amount eth_after = 0;
    /// ETH sent to the victim by others inside the window.
    Amount eth_inflow = 0;
    Amount tokens_before = 0;
    Amount tokens_after = 0;
    /// Attacker's ETH delta plus any gas the attacker paid inside the window.
    Amount attacker_gain_eth = 0;
    Amount attacker_gain_tokens = 0;
    Amount victim_gas = 0;
    bool fallback_executed = false;
    std::vector<Hash32> tx_hashes;
    bool drain_satisfied = false;
    /// Tuple or pipeline rejections observed inside the window.
    std::vector<std::string> blocked_by;
    std::string trigger_origin;
};

/// Builds a report for the window between `before` and `after`.
ScenarioReport make_report(std::string scenario_id, const ChainState& before,
    const ChainState& after, const ActorSet& actors, const DrainCriterion& criterion);

/// Signs and submits the installation tuple. Returns the install receipt.
Receipt run_phase1(Env& env);

ScenarioReport run_scenario_a(Env& env);
ScenarioReport run_scenario_b(Env& env);
ScenarioReport run_scenario_c(Env& env);

/// A user operation naming the victim as sender, sponsored by the paymaster,
/// submitted by the relayer as bundler.
ScenarioReport run_composite(Env& env);

struct PipelineResult
{
    Receipt install;
    bool installed = false;
    /// A, B, C and the end-to-end pipeline summary, in that order.
    std::vector<ScenarioReport> reports;
};

/// Phase 1, then A, B, C. Stops after Phase 1 if the tuple is not accepted.
PipelineResult run_full_pipeline(Env& env);
PipelineResult run_full_pipeline(const EnvConfig& config);

/// eth_before + eth_inflow - eth_after == attacker_gain_eth + victim_gas.
bool report_balances(const ScenarioReport& r) noexcept;

/// The four routes by which a dormant delegation is triggered.
enum class AttackFlow
{
    user,
    attacker,
    protocol,
    composite,
};

std::string_view to_string(AttackFlow flow) noexcept;

struct FlowOutcome
{
    bool installed = false;
    ScenarioReport report;
    /// The drain condition did not hold.
    [[nodiscard]] bool blocked() const noexcept { return !report.drain_satisfied; }
};

/// Fresh environment, install, dormancy, then a single trigger of the given flow.
FlowOutcome run_attack_flow(AttackFlow flow, const EnvConfig& config);

/// Plain transfers, a token transfer, a protocol call and a sponsored UserOperation
/// between undelegated accounts. Returns the final state.
ChainState run_benign_workflow(const guard::GuardPolicy& policy);
}  // namespace delegsim
