// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/harness.hpp>
#include <map>
#include <vector>

namespace delegsim
{
struct MultiChainConfig
{
    std::vector<uint64_t> chain_ids{1337, 2337, 3337};
    /// Funding, actors and gas settings applied to every chain. Its chain_id is ignored.
    EnvConfig base = default_base();
    /// Per-chain guard policies. Chains without an entry use base.policy.
    std::map<uint64_t, guard::GuardPolicy> policies;
    /// Process chains on separate threads.
    bool parallel = false;

    static EnvConfig default_base();
};

/// Independent chains sharing one actor keyspace.
struct MultiChainEnv
{
    std::vector<Env> chains;
    ActorSet actors;
    bool parallel = false;

    Env& chain(uint64_t chain_id);
};

/// Throws Errc::duplicate_chain_id, or Errc::config_error for fewer than two chains.
MultiChainEnv setup_multichain(const MultiChainConfig& config);

/// Submits the identical tuple in a fresh attacker-sponsored set-code
/// transaction on every chain. Per-chain rejections are reported, not thrown.
std::vector<Receipt> replay_tuple(MultiChainEnv& env, const AuthorizationTuple& tuple);

struct ChainTotals
{
    uint64_t chain_id = 0;
    Amount eth_before = 0;
    Amount eth_after = 0;
    Amount tokens_before = 0;
    Amount tokens_after = 0;
    Amount attacker_gain_eth = 0;
    Amount attacker_gain_tokens = 0;
    Amount victim_gas = 0;
    bool drained = false;
};

struct AggregateReport
{
    std::vector<ChainTotals> chains;
    ChainTotals total;
    size_t delegation_writes = 0;
    size_t chains_drained = 0;
};

struct CrossChainResult
{
    std::vector<Receipt> replay;
    std::vector<ScenarioReport> reports;
    AggregateReport aggregate;
};

/// Replays `tuple` on every chain, then sends a victim self-call on each chain
/// whose replay was accepted.
CrossChainResult run_crosschain_experiment(MultiChainEnv& env, const AuthorizationTuple& tuple);

/// The victim-signed chain-agnostic tuple delegating to the cross-chain drainer.
AuthorizationTuple chain_agnostic_tuple(const ActorSet& actors, uint64_t nonce = 0);
}  // namespace delegsim
