// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/harness.hpp>

namespace delegsim
{
namespace fixtures
{
const PrivateKey& victim_key()
{
    static const auto k = PrivateKey::from_hex(
        "0xac0974bec39a17e36ba4a6b4d238ff944bacb478cbed5efcae784d7bf4f2ff80");
    return k;
}

const PrivateKey& attacker_key()
{
    static const auto k = PrivateKey::from_hex(
        "0x59c6995e998f97a5a0044966f0945389dc9e86dae88c7a8412f4603b6b78690d");
    return k;
}

const PrivateKey& relayer_key()
{
    static const auto k = PrivateKey::from_hex(
        "0x5de4111afa1a4b94908f83103eb1f1706367c2e68ca870fc3fb9a804cdab365a");
    return k;
}

const Address& local_drainer()
{
    static const auto a = Address::from_hex("0x5fbdb2315678afecb367f032d93f642f64180aa3");
    return a;
}

const Address& crosschain_drainer()
{
    static const auto a = Address::from_hex("0x8464135c8F25Da09e49BC8782676a84730C318bC");
    return a;
}

const Address& mock_token()
{
    static const auto a = Address::from_hex("0x71C95911E9a5D330f4D621842EC243EE1343292e");
    return a;
}

const Address& dummy_protocol()
{
    static const auto a = Address::from_hex("0x663f3ad617193148711d28f5334ee4ed07016602");
    return a;
}

const Address& paymaster()
{
    static const auto a = Address::from_hex("0x0000000000000000000000000000000000facade");
    return a;
}
}  // namespace fixtures

namespace
{
void fund(ChainState& state, const Address& who, Amount amount)
{
    if (amount > 0)
        state.fund(who, amount);
}

Amount token_balance(const ChainState& state, const Address& token, const Address& holder)
{
    return state.tokens().contains(token) ? erc20_balance_of(state, token, holder) : 0;
}

/// Receipts appended after `before` was taken.
std::vector<const Receipt*> window(const ChainState& before, const ChainState& after)
{
    std::vector<const Receipt*> out;
    for (auto i = before.receipts().size(); i < after.receipts().size(); ++i)
        out.push_back(&after.receipts()[i]);
    return out;
}

Amount saturating_sub(Amount a, Amount b) noexcept
{
    return a > b ? a - b : 0;
}

ScenarioReport finish(Env& env, std::string id, const ChainState& before)
{
    DrainCriterion criterion;
    criterion.delta = env.config.delta;
    return make_report(std::move(id), before, env.state, env.actors, criterion);
}

ScenarioReport run_call(Env& env, std::string id, const Address& sender, const Address& to,
    Amount value, bytes data)
{
    const auto before = env.state;
    process_call_tx(build_call_tx(env.state, sender, to, value, std::move(data), env.config.gas_limit),
        env.state);
    return finish(env, std::move(id), before);
}
}  // namespace

Env setup_environment(const EnvConfig& config)
{
    if (config.chain_id == 0)
        throw Error{Errc::config_error, "chain id 0 is reserved for chain-agnostic tuples"};
    if (config.delta == 0)
        throw Error{Errc::config_error, "drain threshold must be positive"};
    const auto& actors = config.actors;
    if (actors.victim() == actors.attacker())
        throw Error{Errc::config_error, "victim and attacker must differ"};

    Env env{ChainState{config.chain_id, config.auth_magic}, actors, config, {}};
    auto& state = env.state;

    register_token(state, actors.token, "MOCK");
    register_behavior(state, actors.delegate, MaliciousDrainer{actors.attacker(), {actors.token}});
    register_behavior(state, actors.protocol, DummyProtocol{});
    register_behavior(state, actors.paymaster, EmptyBehavior{});
    env.entrypoint = deploy_entrypoint(state);

    fund(state, actors.victim(), config.victim_eth);
    fund(state, actors.attacker(), config.attacker_eth);
    fund(state, actors.relayer(), config.relayer_eth);
    fund(state, actors.paymaster, config.paymaster_eth);
    fund(state, env.entrypoint.address, config.entrypoint_eth);
    if (config.victim_tokens > 0)
        erc20_mint(state, actors.token, actors.victim(), config.victim_tokens);
    return env;
}

DrainCheck check_drain(const ChainState& before, const ChainState& after, const Address& victim,
    const Address& attacker, const DrainCriterion& criterion)
{
    const auto start = criterion.window_start.value_or(before.height());
    const auto end = criterion.window_end.value_or(after.height() == 0 ? 0 : after.height() - 1);

    DrainCheck c;
    c.balance_decreased = after.balance(victim) < before.balance(victim);
    for (const auto& [token, _] : before.tokens())
        if (token_balance(after, token, victim) < token_balance(before, token, victim))
            c.balance_decreased = true;

    for (const auto& r : after.receipts())
    {
        if (r.height < start || r.height > end)
            continue;
        for (const auto& e : r.trace)
        {
            if (e.kind == TraceKind::delegation_resolved && e.to == victim)
                c.delegation_resolved = true;
            if (e.kind == TraceKind::value_transfer && !e.reverted && e.from == victim &&
                e.to == attacker)
                c.value_to_attacker += e.amount;
        }
    }
    c.satisfied =
        c.balance_decreased && c.delegation_resolved && c.value_to_attacker >= criterion.delta;
    return c;
}

ScenarioReport make_report(std::string scenario_id, const ChainState& before,
    const ChainState& after, const ActorSet& actors, const DrainCriterion& criterion)
{
    const auto victim = actors.victim();
    const auto attacker = actors.attacker();

    ScenarioReport r;
    r.scenario_id = std::move(scenario_id);
    r.chain_id = after.chain_id();
    r.eth_before = before.balance(victim);
    r.eth_after = after.balance(victim);
    r.tokens_before = token_balance(before, actors.token, victim);
    r.tokens_after = token_balance(after, actors.token, victim);

    Amount attacker_gas = 0;
    for (const auto* rec : window(before, after))
    {
        r.tx_hashes.push_back(rec->tx_hash);
        if (rec->sender == victim)
            r.victim_gas += rec->gas_cost;
        if (rec->sender == attacker)
            attacker_gas += rec->gas_cost;
        for (const auto& t : rec->tuples_applied)
            if (t.reject_reason)
                r.blocked_by.emplace_back(to_string(*t.reject_reason));
        for (const auto& e : rec->trace)
        {
            if (e.kind == TraceKind::fallback_executed && e.to == victim)
                r.fallback_executed = true;
            if (e.kind == TraceKind::value_transfer && !e.reverted && e.to == victim &&
                e.from != victim)
                r.eth_inflow += e.amount;
            if (e.kind == TraceKind::scope_denied && e.to == victim)
                r.blocked_by.push_back(e.note);
        }
    }

    r.attacker_gain_eth =
        saturating_sub(after.balance(attacker) + attacker_gas, before.balance(attacker));
    r.attacker_gain_tokens = saturating_sub(
        token_balance(after, actors.token, attacker), token_balance(before, actors.token, attacker));
    r.drain_satisfied = check_drain(before, after, victim, attacker, criterion).satisfied;
    return r;
}

bool report_balances(const ScenarioReport& r) noexcept
{
    return r.eth_before + r.eth_inflow == r.eth_after + r.attacker_gain_eth + r.victim_gas;
}

Receipt run_phase1(Env& env)
{
    auto& state = env.state;
    const auto victim = env.actors.victim();
    const auto tuple = sign_authorization(env.actors.victim_key,
        env.config.tuple_chain_id.value_or(state.chain_id()), env.actors.delegate,
        next_tuple_nonce(state, victim, victim), state.auth_magic());

    TxOptions options;
    options.policy = env.config.policy.tuple;
    const auto receipt = process_set_code_tx(
        build_auth_tx(state, {tuple}, victim, env.config.install_call_target, 0, {},
            env.config.gas_limit),
        state, options);
    state.advance_height(env.config.dormancy_blocks);
    return receipt;
}

ScenarioReport run_scenario_a(Env& env)
{
    const auto victim = env.actors.victim();
    auto r = run_call(env, "A", victim, victim, env.config.self_send_value, {});
    r.trigger_origin = "user";
    return r;
}

ScenarioReport run_scenario_b(Env& env)
{
    auto r = run_call(env, "B", env.actors.attacker(), env.actors.victim(), 0, {});
    r.trigger_origin = "attacker";
    return r;
}

ScenarioReport run_scenario_c(Env& env)
{
    auto r = run_call(env, "C", env.actors.relayer(), env.actors.protocol,
        env.config.protocol_value, encode_call_target(env.actors.victim()));
    r.trigger_origin = "protocol";
    return r;
}

ScenarioReport run_composite(Env& env)
{
    const auto victim = env.actors.victim();
    UserOperation op;
    op.sender = victim;
    op.op_nonce = env.entrypoint.op_nonce(victim);
    op.call_target = victim;
    op.paymaster = env.actors.paymaster;

    const auto before = env.state;
    const auto bundle = bundler_submit(
        env.state, env.entrypoint, {op}, env.config.policy.pipeline, env.actors.relayer());
    auto r = finish(env, "composite", before);
    r.trigger_origin = "4337-pipeline";
    for (const auto& o : bundle.ops)
        if (o.status != OpStatus::included)
            r.blocked_by.emplace_back(to_string(o.status));
    return r;
}

PipelineResult run_full_pipeline(Env& env)
{
    PipelineResult out;
    const auto initial = env.state;
    out.install = run_phase1(env);
    out.installed = !out.install.tuples_applied.empty() &&
                    out.install.tuples_applied.front().accepted;
    if (!out.installed)
        return out;

    out.reports.push_back(run_scenario_a(env));
    out.reports.push_back(run_scenario_b(env));
    out.reports.push_back(run_scenario_c(env));
    out.reports.push_back(finish(env, "pipeline", initial));
    out.reports.back().trigger_origin = "pipeline";
    return out;
}

PipelineResult run_full_pipeline(const EnvConfig& config)
{
    auto env = setup_environment(config);
    return run_full_pipeline(env);
}

std::string_view to_string(AttackFlow flow) noexcept
{
    switch (flow)
    {
    case AttackFlow::user:
        return "A";
    case AttackFlow::attacker:
        return "B";
    case AttackFlow::protocol:
        return "C";
    case AttackFlow::composite:
        return "composite";
    }
    return "unknown";
}

FlowOutcome run_attack_flow(AttackFlow flow, const EnvConfig& config)
{
    auto env = setup_environment(config);
    FlowOutcome out;
    const auto install = run_phase1(env);
    out.installed = install.tuples_applied.front().accepted;
    switch (flow)
    {
    case AttackFlow::user:
        out.report = run_scenario_a(env);
        break;
    case AttackFlow::attacker:
        out.report = run_scenario_b(env);
        break;
    case AttackFlow::protocol:
        out.report = run_scenario_c(env);
        break;
    case AttackFlow::composite:
        out.report = run_composite(env);
        break;
    }
    return out;
}

ChainState run_benign_workflow(const guard::GuardPolicy& policy)
{
    EnvConfig config;
    config.policy = policy;
    auto env = setup_environment(config);
    auto& state = env.state;
    const auto victim = env.actors.victim();
    const auto attacker = env.actors.attacker();
    const auto relayer = env.actors.relayer();

    process_call_tx(build_call_tx(state, attacker, relayer, one_ether), state);
    process_call_tx(build_call_tx(state, victim, env.actors.token, 0,
                        encode_erc20_transfer(relayer, 100 * one_ether)),
        state);
    process_call_tx(build_call_tx(state, relayer, env.actors.protocol, one_ether / 10,
                        encode_call_target(victim)),
        state);

    UserOperation op;
    op.sender = relayer;
    op.op_nonce = env.entrypoint.op_nonce(relayer);
    op.call_target = victim;
    op.call_value = one_ether / 100;
    op.paymaster = env.actors.paymaster;
    bundler_submit(state, env.entrypoint, {op}, policy.pipeline, relayer);
    return state;
}
}  // namespace delegsim
