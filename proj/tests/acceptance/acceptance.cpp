// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"
#include <delegsim/multichain.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace delegsim;
using namespace delegsim::test;

namespace
{
// Pinned tolerances.
constexpr Amount dust_threshold = one_ether / 100;                   // 0.01 ETH
constexpr Amount min_attacker_eth_gain = 99999 * one_ether / 10;     // 9999.9 ETH
constexpr Amount min_aggregate_eth_gain = 299997 * one_ether / 10;   // 29999.7 ETH
constexpr Amount tokens_per_victim = 2000 * one_ether;
constexpr double scenario_budget_s = 1.0;
constexpr double crosschain_budget_s = 3.0;

class Criterion
{
public:
    explicit Criterion(std::string title) : title_{std::move(title)} {}

    void check(bool ok, const std::string& what)
    {
        if (!ok)
        {
            passed_ = false;
            failures_.push_back(what);
        }
    }

    [[nodiscard]] bool passed() const noexcept { return passed_; }
    [[nodiscard]] const std::string& title() const noexcept { return title_; }
    [[nodiscard]] const std::vector<std::string>& failures() const noexcept { return failures_; }

private:
    std::string title_;
    bool passed_ = true;
    std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string eth(Amount v)
{
    return format_units(v);
}

std::string fmt_seconds(double s)
{
    std::ostringstream os;
    os.precision(4);
    os << s << " s";
    return os.str();
}

bool has_event(const std::vector<TraceEvent>& trace, TraceKind kind, const Address& from,
    const Address& to, Amount amount)
{
    for (const auto& e : trace)
        if (e.kind == kind && e.from == from && e.to == to && e.amount == amount && !e.reverted)
            return true;
    return false;
}

/// Shared environment for criteria 1 to 3, which run in sequence.
struct Sequence
{
    Env env = setup_environment(EnvConfig{});
};

Criterion scenario_a(Sequence& seq)
{
    Criterion c{"Scenario A user-driven drain"};
    const auto t0 = std::chrono::steady_clock::now();
    run_phase1(seq.env);
    const auto r = run_scenario_a(seq.env);
    const auto elapsed = seconds_since(t0);
    c.check(r.tokens_after == 0, "victim tokens " + eth(r.tokens_after) + " != 0");
    c.check(r.eth_after <= dust_threshold, "victim ETH " + eth(r.eth_after) + " > 0.01");
    c.check(r.attacker_gain_tokens == tokens_per_victim,
        "attacker token gain " + eth(r.attacker_gain_tokens) + " != 2000");
    c.check(r.attacker_gain_eth >= min_attacker_eth_gain,
        "attacker ETH gain " + eth(r.attacker_gain_eth) + " < 9999.9");
    c.check(elapsed < scenario_budget_s, "runtime " + fmt_seconds(elapsed));
    std::printf("    A: victim ETH %s, attacker +%s ETH, +%s tokens (%s)\n", eth(r.eth_after).c_str(),
        eth(r.attacker_gain_eth).c_str(), eth(r.attacker_gain_tokens).c_str(),
        fmt_seconds(elapsed).c_str());
    return c;
}

Criterion scenario_b(Sequence& seq)
{
    Criterion c{"Scenario B attacker-driven drain"};
    const auto t0 = std::chrono::steady_clock::now();
    const auto first = run_scenario_b(seq.env);
    c.check(first.eth_after == 0, "victim ETH after first call " + eth(first.eth_after));
    seq.env.state.fund(seq.env.actors.victim(), one_ether);
    const auto second = run_scenario_b(seq.env);
    const auto elapsed = seconds_since(t0);
    c.check(second.eth_before == one_ether, "re-funded balance " + eth(second.eth_before));
    c.check(second.eth_after == 0, "victim ETH after re-drain " + eth(second.eth_after));
    c.check(elapsed < scenario_budget_s, "runtime " + fmt_seconds(elapsed));
    std::printf("    B: dust drained %s ETH, re-funded 1 ETH drained to %s (%s)\n",
        eth(first.attacker_gain_eth).c_str(), eth(second.eth_after).c_str(),
        fmt_seconds(elapsed).c_str());
    return c;
}

Criterion scenario_c(Sequence& seq)
{
    Criterion c{"Scenario C ambient protocol trigger"};
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_scenario_c(seq.env);
    const auto elapsed = seconds_since(t0);
    c.check(r.attacker_gain_eth == one_ether / 10,
        "attacker gain " + eth(r.attacker_gain_eth) + " != 0.1");
    c.check(r.eth_after == 0, "victim ETH " + eth(r.eth_after) + " != 0");
    c.check(r.fallback_executed, "delegate did not run");
    c.check(elapsed < scenario_budget_s, "runtime " + fmt_seconds(elapsed));
    std::printf("    C: attacker +%s ETH, victim %s (%s)\n", eth(r.attacker_gain_eth).c_str(),
        eth(r.eth_after).c_str(), fmt_seconds(elapsed).c_str());
    return c;
}

Criterion revert_safety()
{
    Criterion c{"Revert-safe delegation write"};
    const auto stub = Address::from_uint(0x5eed);
    auto ok_env = setup_environment(EnvConfig{});
    auto bad_env = setup_environment(EnvConfig{});
    register_behavior(bad_env.state, stub, RevertingStub{});

    const auto victim = ok_env.actors.victim();
    const auto tuple = sign_authorization(ok_env.actors.victim_key, 1337, ok_env.actors.delegate,
        next_tuple_nonce(ok_env.state, victim, victim));
    const auto ok = process_set_code_tx(build_auth_tx(ok_env.state, {tuple}, victim, {}), ok_env.state);
    const auto bad =
        process_set_code_tx(build_auth_tx(bad_env.state, {tuple}, victim, stub), bad_env.state);

    c.check(ok.success, "control transaction failed");
    c.check(!bad.success, "reverting twin did not revert");
    c.check(is_delegated(ok_env.state, victim) == ok_env.actors.delegate, "control not delegated");
    c.check(is_delegated(bad_env.state, victim) == ok_env.actors.delegate,
        "delegation lost when the outer call reverted");
    std::printf("    twin receipts: success=%d / success=%d, both delegated to %s\n", ok.success,
        bad.success, ok_env.actors.delegate.hex().c_str());
    return c;
}

Criterion crosschain()
{
    Criterion c{"Cross-chain replay of a chainId 0 tuple"};
    const auto t0 = std::chrono::steady_clock::now();
    auto env = setup_multichain({});
    const auto tuple = chain_agnostic_tuple(env.actors);
    c.check(tuple.chain_id == 0, "tuple is chain bound");
    const auto res = run_crosschain_experiment(env, tuple);
    for (size_t i = 0; i < res.replay.size(); ++i)
    {
        const auto id = std::to_string(res.reports[i].chain_id);
        c.check(res.replay[i].tuples_applied.at(0).accepted, "tuple rejected on chain " + id);
        c.check(res.reports[i].attacker_gain_tokens == tokens_per_victim,
            "token drain on chain " + id + " = " + eth(res.reports[i].attacker_gain_tokens));
        c.check(res.reports[i].attacker_gain_eth >= min_attacker_eth_gain,
            "ETH drain on chain " + id + " = " + eth(res.reports[i].attacker_gain_eth));
    }
    const auto& total = res.aggregate.total;
    c.check(total.attacker_gain_tokens == 3 * tokens_per_victim,
        "aggregate tokens " + eth(total.attacker_gain_tokens));
    c.check(total.attacker_gain_eth >= min_aggregate_eth_gain,
        "aggregate ETH " + eth(total.attacker_gain_eth));

    auto isolated = setup_multichain({});
    auto& second = isolated.chain(2337);
    process_call_tx(build_call_tx(second.state, isolated.actors.victim(),
                        isolated.actors.relayer(), 1),
        second.state);
    const auto blocked = run_crosschain_experiment(isolated, tuple);
    c.check(blocked.replay[0].tuples_applied[0].accepted, "chain 1337 blocked by foreign nonce");
    c.check(blocked.replay[1].tuples_applied[0].reject_reason == RejectReason::nonce_mismatch,
        "advanced nonce did not block chain 2337");
    c.check(blocked.replay[2].tuples_applied[0].accepted, "chain 3337 blocked by foreign nonce");
    c.check(blocked.aggregate.chains_drained == 2, "expected exactly two drained chains");

    const auto elapsed = seconds_since(t0);
    c.check(elapsed < crosschain_budget_s, "runtime " + fmt_seconds(elapsed));
    std::printf("    aggregate: +%s ETH, +%s tokens over %zu chains (%s)\n",
        eth(total.attacker_gain_eth).c_str(), eth(total.attacker_gain_tokens).c_str(),
        res.reports.size(), fmt_seconds(elapsed).c_str());
    return c;
}

Criterion composite()
{
    Criterion c{"Composite 4337 pipeline drain"};
    auto env = setup_environment(EnvConfig{});
    run_full_pipeline(env);
    const auto victim = env.actors.victim();
    signing_audit::reset();
    env.state.fund(victim, one_ether);

    const auto before = env.state;
    UserOperation op;
    op.sender = victim;
    op.op_nonce = env.entrypoint.op_nonce(victim);
    op.call_target = victim;
    op.paymaster = env.actors.paymaster;
    const auto bundle = bundler_submit(env.state, env.entrypoint, {op}, {}, env.actors.relayer());
    const auto r = make_report("composite", before, env.state, env.actors, {});

    c.check(bundle.ops.at(0).status == OpStatus::included, "op not included");
    c.check(r.eth_before == one_ether && r.eth_after == 0, "re-funded victim not drained");
    c.check(r.drain_satisfied, "drain condition not met");
    c.check(signing_audit::count(victim) == 0, "victim key signed after install");

    const auto& trace = bundle.ops[0].trace;
    size_t validation = trace.size();
    size_t execution = trace.size();
    size_t fallback = trace.size();
    for (size_t i = 0; i < trace.size(); ++i)
    {
        if (trace[i].kind == TraceKind::phase && trace[i].note == "validation" && validation == trace.size())
            validation = i;
        if (trace[i].kind == TraceKind::phase && trace[i].note == "execution" && execution == trace.size())
            execution = i;
        if (trace[i].kind == TraceKind::fallback_executed && fallback == trace.size())
            fallback = i;
    }
    c.check(validation < fallback && fallback < execution,
        "delegate did not execute during validation");

    env.state.fund(victim, one_ether);
    UserOperation wei_op = op;
    wei_op.op_nonce = env.entrypoint.op_nonce(victim);
    wei_op.call_value = 1;
    const auto wei_bundle =
        bundler_submit(env.state, env.entrypoint, {wei_op}, {}, env.actors.relayer());
    const auto& wt = wei_bundle.ops.at(0).trace;
    c.check(has_event(wt, TraceKind::value_transfer, env.entrypoint.address, victim, 1),
        "missing 1-wei EntryPoint -> victim transfer");
    c.check(has_event(wt, TraceKind::value_transfer, victim, env.actors.attacker(), 1),
        "missing 1-wei victim -> attacker forward");
    c.check(signing_audit::count(victim) == 0, "victim key signed during 1-wei op");
    std::printf("    composite: victim %s -> %s ETH, victim signatures after install: %zu\n",
        eth(r.eth_before).c_str(), eth(r.eth_after).c_str(), signing_audit::count(victim));
    return c;
}

Criterion defense_matrix()
{
    Criterion c{"Defense matrix and benign workflow"};
    struct Row
    {
        const char* mitigation;
        bool blocks[4];
    };
    // Columns: A, B, C, composite. Dormancy 10 blocks; expiry lifetime 5 blocks.
    const Row rows[] = {
        {"chain-agnostic", {false, false, false, false}},
        {"scoped", {true, true, true, true}},
        {"foreground", {false, true, true, true}},
        {"expiry", {true, true, true, true}},
        {"bundler", {false, false, false, true}},
        {"paymaster", {false, false, false, true}},
    };
    const AttackFlow flows[] = {
        AttackFlow::user, AttackFlow::attacker, AttackFlow::protocol, AttackFlow::composite};

    std::printf("    %-16s %-9s %-9s %-9s %-9s\n", "mitigation", "A", "B", "C", "composite");
    for (const auto& row : rows)
    {
        EnvConfig config;
        config.policy = guard::preset(row.mitigation);
        config.dormancy_blocks = 10;
        std::string line;
        for (size_t i = 0; i < 4; ++i)
        {
            const auto out = run_attack_flow(flows[i], config);
            c.check(out.blocked() == row.blocks[i],
                std::string{row.mitigation} + "/" + std::string{to_string(flows[i])} +
                    (out.blocked() ? " blocked" : " allowed"));
            char cell[16];
            std::snprintf(cell, sizeof cell, "%-9s ", out.blocked() ? "blocked" : "allowed");
            line += cell;
        }
        std::printf("    %-16s %s\n", row.mitigation, line.c_str());
    }

    // Baseline: every flow drains with no mitigation.
    for (const auto flow : flows)
    {
        EnvConfig config;
        config.dormancy_blocks = 10;
        c.check(!run_attack_flow(flow, config).blocked(),
            "baseline " + std::string{to_string(flow)} + " did not drain");
    }

    EnvConfig replay;
    replay.policy = guard::preset("chain-agnostic");
    replay.tuple_chain_id = 0;
    c.check(!run_attack_flow(AttackFlow::user, replay).installed,
        "chain-agnostic ban accepted a chainId 0 tuple");

    const auto baseline = run_benign_workflow(guard::preset("none"));
    const auto guarded = run_benign_workflow(guard::preset("all"));
    c.check(guarded.accounts() == baseline.accounts() && guarded.tokens() == baseline.tokens(),
        "benign workflow diverged under all guards");
    for (const auto& r : guarded.receipts())
        c.check(r.success, "benign transaction failed under all guards");
    return c;
}

Criterion codec_oracle()
{
    Criterion c{"Codec agreement with reference implementations"};
    size_t keccak_ok = 0;
    const auto kv = load_data("keccak_vectors.json");
    for (const auto& v : kv)
        keccak_ok += hex(keccak256(from_hex(v["input"].get<std::string>())).view()) ==
                     v["digest"].get<std::string>();
    c.check(kv.size() == 1000 && keccak_ok == kv.size(),
        "keccak " + std::to_string(keccak_ok) + "/" + std::to_string(kv.size()));

    const std::function<rlp::Item(const json&)> item = [&](const json& j) -> rlp::Item {
        if (!j.is_array())
            return from_hex(j.get<std::string>());
        rlp::Item::List l;
        for (const auto& x : j)
            l.push_back(item(x));
        return l;
    };
    size_t rlp_ok = 0;
    const auto rv = load_data("rlp_vectors.json");
    for (const auto& v : rv["valid"])
    {
        const auto enc = from_hex(v["encoding"].get<std::string>());
        const auto it = item(v["item"]);
        rlp_ok += rlp::encode(it) == enc && rlp::decode(enc) == it;
    }
    c.check(rv["valid"].size() == 1000 && rlp_ok == rv["valid"].size(),
        "rlp " + std::to_string(rlp_ok) + "/" + std::to_string(rv["valid"].size()));

    const auto victim = derive_address(fixtures::victim_key());
    try
    {
        const auto t = decode_tuple_hex(read_text("tuple_chain0.hex"));
        c.check(t.chain_id == 0 && t.target == fixtures::crosschain_drainer() && t.nonce == 0,
            "published tuple fields");
        const auto recovered =
            recover_authority(auth_message(t.chain_id, t.target, t.nonce), t.signature);
        c.check(recovered == victim, "published tuple signature recovers " + recovered.hex() +
                                         ", fixture victim is " + victim.hex());
    }
    catch (const Error& e)
    {
        c.check(false, std::string{"published tuple: "} + e.what());
    }
    std::printf("    keccak %zu/%zu, rlp %zu/%zu\n", keccak_ok, kv.size(), rlp_ok,
        rv["valid"].size());
    return c;
}

Criterion properties()
{
    Criterion c{"Property suites"};
    std::mt19937_64 rng{7702};

    size_t sig_ok = 0;
    for (int i = 0; i < 100; ++i)
    {
        Bytes32 k;
        do
        {
            for (auto& b : k.bytes)
                b = static_cast<uint8_t>(rng());
        } while (k.is_zero() || !(k < secp256k1_order()));
        const PrivateKey key{k};
        Hash32 digest;
        for (auto& b : digest.bytes)
            b = static_cast<uint8_t>(rng());
        sig_ok += recover_authority(digest, sign_digest(key, digest)) == derive_address(key);
    }
    c.check(sig_ok == 100, "signature roundtrip " + std::to_string(sig_ok) + "/100");

    const std::function<rlp::Item(int)> gen = [&](int depth) -> rlp::Item {
        if (depth < 4 && rng() % 10 < 3)
        {
            rlp::Item::List l(rng() % 6);
            for (auto& x : l)
                x = gen(depth + 1);
            return l;
        }
        bytes b(rng() % 4 == 0 ? 56 + rng() % 200 : rng() % 56, 0);
        for (auto& x : b)
            x = static_cast<uint8_t>(rng());
        return b;
    };
    size_t rlp_ok = 0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto it = gen(0);
        rlp_ok += rlp::decode(rlp::encode(it)) == it;
    }
    c.check(rlp_ok == 1000, "rlp roundtrip " + std::to_string(rlp_ok) + "/1000");

    auto env = setup_environment(EnvConfig{});
    const auto eth0 = env.state.total_eth();
    const auto tokens0 = total_tokens(env.state, env.actors.token);
    const auto check_state = [&](const std::string& step, const std::map<Address, uint64_t>& n) {
        c.check(env.state.total_eth() == eth0, step + ": ETH not conserved");
        c.check(total_tokens(env.state, env.actors.token) == tokens0,
            step + ": tokens not conserved");
        for (const auto& [a, v] : n)
            c.check(env.state.nonce(a) >= v, step + ": nonce decreased for " + a.hex());
        const auto set = active_delegations(env.state);
        for (const auto& [a, acct] : env.state.accounts())
            if (const auto d = parse_delegation(acct.code))
                c.check(set.contains({a, *d}), step + ": delegation set mismatch");
        for (const auto& [a, rec] : env.state.scopes())
            c.check(is_delegated(env.state, a) == rec.target, step + ": orphan scope record");
    };
    const auto nonces = [&] {
        std::map<Address, uint64_t> n;
        for (const auto& [a, acct] : env.state.accounts())
            n[a] = acct.nonce;
        return n;
    };
    auto n = nonces();
    run_phase1(env);
    check_state("install", n);
    using Step = ScenarioReport (*)(Env&);
    for (const Step step : {Step{run_scenario_a}, Step{run_scenario_b}, Step{run_scenario_c},
             Step{run_composite}})
    {
        n = nonces();
        const auto r = step(env);
        c.check(report_balances(r), r.scenario_id + ": report identity");
        check_state(r.scenario_id, n);
    }
    return c;
}
}  // namespace

int main()
{
    Sequence seq;
    std::vector<std::pair<int, std::function<Criterion()>>> criteria{
        {1, [&] { return scenario_a(seq); }},
        {2, [&] { return scenario_b(seq); }},
        {3, [&] { return scenario_c(seq); }},
        {4, revert_safety},
        {5, crosschain},
        {6, composite},
        {7, defense_matrix},
        {8, codec_oracle},
        {9, properties},
    };

    int failed = 0;
    for (const auto& [n, run] : criteria)
    {
        Criterion c{""};
        try
        {
            c = run();
        }
        catch (const std::exception& e)
        {
            c = Criterion{"criterion " + std::to_string(n)};
            c.check(false, std::string{"exception: "} + e.what());
        }
        std::printf("%s %d %s\n", c.passed() ? "PASS" : "FAIL", n, c.title().c_str());
        for (const auto& f : c.failures())
            std::printf("    - %s\n", f.c_str());
        failed += c.passed() ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
        criteria.size());
    return failed == 0 ? 0 : 1;
}
