// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/multichain.hpp>
#include <future>
#include <set>

namespace delegsim
{
EnvConfig MultiChainConfig::default_base()
{
    EnvConfig c;
    c.actors.delegate = fixtures::crosschain_drainer();
    return c;
}

Env& MultiChainEnv::chain(uint64_t chain_id)
{
    for (auto& c : chains)
        if (c.state.chain_id() == chain_id)
            return c;
    throw Error{Errc::config_error, "no chain with id " + std::to_string(chain_id)};
}

MultiChainEnv setup_multichain(const MultiChainConfig& config)
{
    if (config.chain_ids.size() < 2)
        throw Error{Errc::config_error, "a multi-chain setup needs at least two chains"};
    std::set<uint64_t> seen;
    for (const auto id : config.chain_ids)
        if (!seen.insert(id).second)
            throw Error{Errc::duplicate_chain_id, "duplicate chain id " + std::to_string(id)};

    MultiChainEnv env;
    env.actors = config.base.actors;
    env.parallel = config.parallel;
    for (const auto id : config.chain_ids)
    {
        auto c = config.base;
        c.chain_id = id;
        if (const auto it = config.policies.find(id); it != config.policies.end())
            c.policy = it->second;
        env.chains.push_back(setup_environment(c));
    }
    return env;
}

namespace
{
Receipt replay_on(Env& env, const AuthorizationTuple& tuple)
{
    TxOptions options;
    options.policy = env.config.policy.tuple;
    return process_set_code_tx(build_auth_tx(env.state, {tuple}, env.actors.attacker(),
                                   env.config.install_call_target, 0, {}, env.config.gas_limit),
        env.state, options);
}

template <typename Fn>
void for_each_chain(MultiChainEnv& env, Fn&& fn)
{
    if (!env.parallel)
    {
        for (size_t i = 0; i < env.chains.size(); ++i)
            fn(i);
        return;
    }
    std::vector<std::future<void>> jobs;
    for (size_t i = 0; i < env.chains.size(); ++i)
        jobs.push_back(std::async(std::launch::async, fn, i));
    for (auto& j : jobs)
        j.get();
}
}  // namespace

std::vector<Receipt> replay_tuple(MultiChainEnv& env, const AuthorizationTuple& tuple)
{
    std::vector<Receipt> out(env.chains.size());
    for_each_chain(env, [&](size_t i) { out[i] = replay_on(env.chains[i], tuple); });
    return out;
}

CrossChainResult run_crosschain_experiment(MultiChainEnv& env, const AuthorizationTuple& tuple)
{
    CrossChainResult result;
    result.replay.resize(env.chains.size());
    result.reports.resize(env.chains.size());

    for_each_chain(env, [&](size_t i) {
        auto& chain = env.chains[i];
        const auto before = chain.state;
        result.replay[i] = replay_on(chain, tuple);
        const auto victim = chain.actors.victim();
        process_call_tx(build_call_tx(chain.state, victim, victim, chain.config.self_send_value,
                            {}, chain.config.gas_limit),
            chain.state);

        DrainCriterion criterion;
        criterion.delta = chain.config.delta;
        result.reports[i] = make_report("crosschain", before, chain.state, chain.actors, criterion);
        result.reports[i].trigger_origin = "user";
    });

    auto& agg = result.aggregate;
    agg.total.chain_id = 0;
    for (size_t i = 0; i < env.chains.size(); ++i)
    {
        const auto& r = result.reports[i];
        ChainTotals t{r.chain_id, r.eth_before, r.eth_after, r.tokens_before, r.tokens_after,
            r.attacker_gain_eth, r.attacker_gain_tokens, r.victim_gas, r.drain_satisfied};
        agg.chains.push_back(t);
        agg.total.eth_before += t.eth_before;
        agg.total.eth_after += t.eth_after;
        agg.total.tokens_before += t.tokens_before;
        agg.total.tokens_after += t.tokens_after;
        agg.total.attacker_gain_eth += t.attacker_gain_eth;
        agg.total.attacker_gain_tokens += t.attacker_gain_tokens;
        agg.total.victim_gas += t.victim_gas;
        for (const auto& o : result.replay[i].tuples_applied)
            agg.delegation_writes += o.accepted ? 1 : 0;
        agg.chains_drained += t.drained ? 1 : 0;
    }
    agg.total.drained = agg.chains_drained == env.chains.size();
    return result;
}

AuthorizationTuple chain_agnostic_tuple(const ActorSet& actors, uint64_t nonce)
{
    return sign_authorization(actors.victim_key, 0, fixtures::crosschain_drainer(), nonce);
}
}  // namespace delegsim
