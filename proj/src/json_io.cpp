// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/json_io.hpp>

namespace delegsim
{
namespace
{
[[noreturn]] void bad_config(const std::string& why)
{
    throw Error{Errc::config_error, why};
}

template <typename T>
T field(const json& j, const char* key, T fallback)
{
    const auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return fallback;
    try
    {
        return it->get<T>();
    }
    catch (const json::exception&)
    {
        bad_config(std::string{"field '"} + key + "' has the wrong type");
    }
}

Address address_field(const json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_string())
        bad_config(std::string{"missing address field '"} + key + "'");
    return Address::from_hex(j[key].get<std::string>());
}

json optional_address(const std::optional<Address>& a)
{
    return a ? json(a->hex()) : json(nullptr);
}

json behavior_json(const ContractBehavior& b)
{
    json j{{"kind", behavior_kind(b)}};
    if (const auto* d = std::get_if<MaliciousDrainer>(&b))
    {
        j["sink"] = d->sink.hex();
        json tokens = json::array();
        for (const auto& t : d->watched_tokens)
            tokens.push_back(t.hex());
        j["watched_tokens"] = tokens;
    }
    return j;
}

ContractBehavior behavior_from_json(const json& j)
{
    const auto kind = field<std::string>(j, "kind", "");
    if (kind == "MaliciousDrainer")
    {
        MaliciousDrainer d;
        d.sink = address_field(j, "sink");
        for (const auto& t : j.value("watched_tokens", json::array()))
            d.watched_tokens.push_back(Address::from_hex(t.get<std::string>()));
        return d;
    }
    if (kind == "MockErc20")
        return MockErc20{};
    if (kind == "DummyProtocol")
        return DummyProtocol{};
    if (kind == "RevertingStub")
        return RevertingStub{};
    if (kind == "EmptyBehavior")
        return EmptyBehavior{};
    bad_config("unknown behavior kind '" + kind + "'");
}
}  // namespace

json amount_json(Amount v)
{
    return to_decimal(v);
}

Amount amount_from_json(const json& j)
{
    if (j.is_string())
        return parse_decimal(j.get<std::string>());
    if (j.is_number_unsigned() || (j.is_number_integer() && j.get<int64_t>() >= 0))
        return j.get<uint64_t>();
    bad_config("amount must be a decimal string");
}

json to_json(const TraceEvent& e)
{
    json j{{"kind", to_string(e.kind)}, {"from", e.from.hex()}, {"to", e.to.hex()},
        {"amount", amount_json(e.amount)}, {"depth", e.depth}};
    if (e.token)
        j["token"] = e.token->hex();
    if (e.delegate)
        j["delegate"] = e.delegate->hex();
    if (!e.note.empty())
        j["note"] = e.note;
    if (e.reverted)
        j["reverted"] = true;
    return j;
}

json to_json(const TupleOutcome& t)
{
    return {{"authority", optional_address(t.authority)}, {"target", t.target.hex()},
        {"accepted", t.accepted},
        {"reject_reason", t.reject_reason ? json(to_string(*t.reject_reason)) : json(nullptr)}};
}

json to_json(const Receipt& r)
{
    json tuples = json::array();
    for (const auto& t : r.tuples_applied)
        tuples.push_back(to_json(t));
    json trace = json::array();
    for (const auto& e : r.trace)
        trace.push_back(to_json(e));
    json j{{"tx_hash", r.tx_hash.hex()}, {"sender", r.sender.hex()}, {"success", r.success},
        {"height", r.height}, {"gas_used", r.gas_used}, {"gas_cost", amount_json(r.gas_cost)},
        {"tuples_applied", tuples}, {"trace", trace}};
    if (!r.error.empty())
        j["error"] = r.error;
    return j;
}

json to_json(const AuthorizationTuple& t)
{
    return {{"chain_id", t.chain_id}, {"target", t.target.hex()}, {"nonce", t.nonce},
        {"y_parity", t.signature.y_parity}, {"r", t.signature.r.hex()},
        {"s", t.signature.s.hex()}};
}

json to_json(const ScenarioReport& r)
{
    json hashes = json::array();
    for (const auto& h : r.tx_hashes)
        hashes.push_back(h.hex());
    return {{"scenario_id", r.scenario_id}, {"chain_id", r.chain_id},
        {"eth_before", amount_json(r.eth_before)}, {"eth_after", amount_json(r.eth_after)},
        {"eth_inflow", amount_json(r.eth_inflow)},
        {"tokens_before", amount_json(r.tokens_before)},
        {"tokens_after", amount_json(r.tokens_after)},
        {"attacker_gain_eth", amount_json(r.attacker_gain_eth)},
        {"attacker_gain_tokens", amount_json(r.attacker_gain_tokens)},
        {"victim_gas", amount_json(r.victim_gas)}, {"fallback_executed", r.fallback_executed},
        {"tx_hashes", hashes}, {"drain_satisfied", r.drain_satisfied},
        {"blocked_by", r.blocked_by}, {"trigger_origin", r.trigger_origin},
        {"human",
            {{"eth_before", format_units(r.eth_before)}, {"eth_after", format_units(r.eth_after)},
                {"attacker_gain_eth", format_units(r.attacker_gain_eth)},
                {"attacker_gain_tokens", format_units(r.attacker_gain_tokens)}}}};
}

json to_json(const AggregateReport& a)
{
    const auto row = [](const ChainTotals& t) {
        return json{{"chain_id", t.chain_id}, {"eth_before", amount_json(t.eth_before)},
            {"eth_after", amount_json(t.eth_after)},
            {"tokens_before", amount_json(t.tokens_before)},
            {"tokens_after", amount_json(t.tokens_after)},
            {"attacker_gain_eth", amount_json(t.attacker_gain_eth)},
            {"attacker_gain_tokens", amount_json(t.attacker_gain_tokens)},
            {"victim_gas", amount_json(t.victim_gas)}, {"drained", t.drained},
            {"human", {{"eth_before", format_units(t.eth_before)},
                          {"eth_after", format_units(t.eth_after)},
                          {"tokens_before", format_units(t.tokens_before)},
                          {"tokens_after", format_units(t.tokens_after)}}}};
    };
    json chains = json::array();
    for (const auto& t : a.chains)
        chains.push_back(row(t));
    auto total = row(a.total);
    total.erase("chain_id");
    return {{"chains", chains}, {"total", total}, {"delegation_writes", a.delegation_writes},
        {"chains_drained", a.chains_drained}};
}

json to_json(const BundleReceipt& b)
{
    json ops = json::array();
    for (const auto& o : b.ops)
    {
        json trace = json::array();
        for (const auto& e : o.trace)
            trace.push_back(to_json(e));
        ops.push_back({{"index", o.index}, {"sender", o.sender.hex()},
            {"status", to_string(o.status)}, {"detail", o.detail}, {"sponsored", o.sponsored},
            {"gas_used", o.gas_used}, {"trace", trace}});
    }
    return {{"bundle_hash", b.bundle_hash.hex()}, {"bundler", b.bundler.hex()},
        {"height", b.height}, {"gas_used", b.gas_used}, {"gas_cost", amount_json(b.gas_cost)},
        {"ops", ops}};
}

json to_json(const guard::GuardPolicy& p)
{
    json allow = json::array();
    for (const auto& a : p.pipeline.allowlist)
        allow.push_back(a.hex());
    return {{"forbid_chain_agnostic", p.tuple.forbid_chain_agnostic},
        {"require_scope", p.tuple.require_scope}, {"foreground_only", p.tuple.foreground_only},
        {"expiry_blocks",
            p.tuple.max_delegation_lifetime ? json(*p.tuple.max_delegation_lifetime) :
                                              json(nullptr)},
        {"single_use", p.tuple.single_use}, {"bundler_filter", p.pipeline.bundler_filter_enabled},
        {"paymaster_filter", p.pipeline.paymaster_filter_enabled},
        {"entrypoint_check", p.pipeline.entrypoint_static_check_enabled}, {"allowlist", allow}};
}

json to_json(const std::vector<guard::DelegationFinding>& findings)
{
    json out = json::array();
    for (const auto& f : findings)
        out.push_back({{"authority", f.authority.hex()}, {"delegate", f.delegate.hex()},
            {"behavior", f.behavior}, {"malicious", f.malicious}});
    return out;
}

json state_to_json(const ChainState& state)
{
    json accounts = json::object();
    for (const auto& [addr, a] : state.accounts())
        accounts[addr.hex()] = {
            {"nonce", a.nonce}, {"balance", amount_json(a.balance)}, {"code", hex0x(a.code)}};

    json tokens = json::object();
    for (const auto& [addr, t] : state.tokens())
    {
        json balances = json::object();
        for (const auto& [holder, b] : t.balances)
            balances[holder.hex()] = amount_json(b);
        tokens[addr.hex()] = {{"symbol", t.symbol}, {"total_supply", amount_json(t.total_supply)},
            {"balances", balances}};
    }

    json behaviors = json::object();
    for (const auto& [addr, b] : state.behaviors())
        behaviors[addr.hex()] = behavior_json(b);

    json scopes = json::object();
    for (const auto& [addr, s] : state.scopes())
        scopes[addr.hex()] = {{"target", s.target.hex()}, {"installed_at", s.installed_at},
            {"expiry_height", s.expiry_height ? json(*s.expiry_height) : json(nullptr)},
            {"single_use", s.single_use}, {"foreground_only", s.foreground_only},
            {"consumed", s.consumed}};

    return {{"chain_id", state.chain_id()}, {"auth_magic", state.auth_magic()},
        {"height", state.height()}, {"burned", amount_json(state.burned())},
        {"accounts", accounts}, {"tokens", tokens}, {"behaviors", behaviors},
        {"scopes", scopes}};
}

ChainState state_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("chain_id"))
        bad_config("state document must be an object with a chain_id");
    ChainState state{field<uint64_t>(j, "chain_id", 0),
        field<uint8_t>(j, "auth_magic", default_auth_magic)};
    state.load_height(field<uint64_t>(j, "height", 0));
    state.load_burned(amount_from_json(j.value("burned", json("0"))));

    const auto accounts = j.value("accounts", json::object());
    for (const auto& [addr, a] : accounts.items())
        state.load_account(Address::from_hex(addr),
            Account{field<uint64_t>(a, "nonce", 0), amount_from_json(a.value("balance", json("0"))),
                from_hex(field<std::string>(a, "code", "0x"))});

    const auto tokens = j.value("tokens", json::object());
    for (const auto& [addr, t] : tokens.items())
    {
        TokenLedger ledger;
        ledger.symbol = field<std::string>(t, "symbol", "");
        ledger.total_supply = amount_from_json(t.value("total_supply", json("0")));
        const auto balances = t.value("balances", json::object());
        for (const auto& [holder, b] : balances.items())
            ledger.balances[Address::from_hex(holder)] = amount_from_json(b);
        state.tokens()[Address::from_hex(addr)] = std::move(ledger);
    }

    const auto behaviors = j.value("behaviors", json::object());
    for (const auto& [addr, b] : behaviors.items())
        state.set_behavior(Address::from_hex(addr), behavior_from_json(b));

    const auto scopes = j.value("scopes", json::object());
    for (const auto& [addr, s] : scopes.items())
    {
        ScopeRecord rec;
        rec.target = address_field(s, "target");
        rec.installed_at = field<uint64_t>(s, "installed_at", 0);
        if (s.contains("expiry_height") && !s["expiry_height"].is_null())
            rec.expiry_height = s["expiry_height"].get<uint64_t>();
        rec.single_use = field<bool>(s, "single_use", false);
        rec.foreground_only = field<bool>(s, "foreground_only", false);
        rec.consumed = field<bool>(s, "consumed", false);
        state.scopes()[Address::from_hex(addr)] = rec;
    }
    return state;
}

guard::GuardPolicy policy_from_json(const json& j)
{
    if (!j.is_object())
        bad_config("policy must be a JSON object");
    guard::GuardPolicy p;
    p.tuple.forbid_chain_agnostic = field<bool>(j, "forbid_chain_agnostic", false);
    p.tuple.require_scope = field<bool>(j, "require_scope", false);
    p.tuple.foreground_only = field<bool>(j, "foreground_only", false);
    p.tuple.single_use = field<bool>(j, "single_use", false);
    if (j.contains("expiry_blocks") && !j["expiry_blocks"].is_null())
    {
        const auto blocks = field<uint64_t>(j, "expiry_blocks", 0);
        if (blocks == 0)
            bad_config("expiry_blocks must be positive");
        p.tuple.max_delegation_lifetime = blocks;
    }
    p.pipeline.bundler_filter_enabled = field<bool>(j, "bundler_filter", false);
    p.pipeline.paymaster_filter_enabled = field<bool>(j, "paymaster_filter", false);
    p.pipeline.entrypoint_static_check_enabled = field<bool>(j, "entrypoint_check", false);
    for (const auto& a : j.value("allowlist", json::array()))
        p.pipeline.allowlist.push_back(Address::from_hex(a.get<std::string>()));
    return p;
}

UserOperation user_op_from_json(const json& j)
{
    UserOperation op;
    op.sender = address_field(j, "sender");
    op.op_nonce = field<uint64_t>(j, "op_nonce", 0);
    op.call_target = address_field(j, "call_target");
    op.call_value = amount_from_json(j.value("call_value", json("0")));
    op.call_data = from_hex(field<std::string>(j, "call_data", "0x"));
    if (j.contains("paymaster") && !j["paymaster"].is_null())
        op.paymaster = address_field(j, "paymaster");
    op.gas_budget = field<uint64_t>(j, "gas_budget", 100000);
    if (op.gas_budget == 0)
        bad_config("gas_budget must be positive");
    return op;
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace)
{
    std::string out;
    for (const auto& e : trace)
        out += to_json(e).dump() + '\n';
    return out;
}

std::string dump(const json& j)
{
    return j.dump(2) + '\n';
}

Address resolve_address(std::string_view text, const ActorSet& actors)
{
    if (text == "victim")
        return actors.victim();
    if (text == "attacker")
        return actors.attacker();
    if (text == "relayer")
        return actors.relayer();
    if (text == "drainer" || text == "delegate")
        return actors.delegate;
    if (text == "crosschain-drainer")
        return fixtures::crosschain_drainer();
    if (text == "local-drainer")
        return fixtures::local_drainer();
    if (text == "token")
        return actors.token;
    if (text == "protocol")
        return actors.protocol;
    if (text == "paymaster")
        return actors.paymaster;
    if (text == "entrypoint")
        return default_entrypoint_address();
    if (text == "zero")
        return Address{};
    try
    {
        return Address::from_hex(text);
    }
    catch (const Error&)
    {
        bad_config("not an address or fixture name: '" + std::string{text} + "'");
    }
}

PrivateKey resolve_key(std::string_view text)
{
    if (text == "victim")
        return fixtures::victim_key();
    if (text == "attacker")
        return fixtures::attacker_key();
    if (text == "relayer")
        return fixtures::relayer_key();
    try
    {
        return PrivateKey::from_hex(text);
    }
    catch (const Error&)
    {
        bad_config("not a private key or fixture name");
    }
}

guard::GuardPolicy policy_from_spec(const json& j)
{
    if (j.is_string())
        return guard::preset(j.get<std::string>());
    return policy_from_json(j);
}

EnvConfig env_config_from_json(const json& j, EnvConfig base)
{
    if (!j.is_object())
        bad_config("configuration must be a JSON object");
    auto& c = base;
    const auto ether = [&](const char* key, Amount& out) {
        if (!j.contains(key) || j[key].is_null())
            return;
        const auto& v = j[key];
        if (v.is_string())
            out = parse_ether(v.get<std::string>());
        else if (v.is_number_integer() && v.get<int64_t>() >= 0)
            out = Amount{v.get<uint64_t>()} * one_ether;
        else
            bad_config(std::string{"field '"} + key + "' must be an ether amount");
    };

    if (j.contains("actors"))
    {
        const auto& a = j["actors"];
        if (!a.is_object())
            bad_config("actors must be an object");
        if (a.contains("victim_key"))
            c.actors.victim_key = resolve_key(field<std::string>(a, "victim_key", ""));
        if (a.contains("attacker_key"))
            c.actors.attacker_key = resolve_key(field<std::string>(a, "attacker_key", ""));
        if (a.contains("relayer_key"))
            c.actors.relayer_key = resolve_key(field<std::string>(a, "relayer_key", ""));
        for (const auto& [key, slot] : {std::pair{"delegate", &c.actors.delegate},
                 std::pair{"token", &c.actors.token}, std::pair{"protocol", &c.actors.protocol},
                 std::pair{"paymaster", &c.actors.paymaster}})
            if (a.contains(key))
                *slot = resolve_address(field<std::string>(a, key, ""), c.actors);
    }

    c.chain_id = field<uint64_t>(j, "chain_id", c.chain_id);
    if (j.contains("tuple_chain_id"))
        c.tuple_chain_id = j["tuple_chain_id"].is_null() ?
                               std::nullopt :
                               std::optional{field<uint64_t>(j, "tuple_chain_id", 0)};
    c.auth_magic = field<uint8_t>(j, "auth_magic", c.auth_magic);
    ether("victim_eth", c.victim_eth);
    ether("victim_tokens", c.victim_tokens);
    ether("attacker_eth", c.attacker_eth);
    ether("relayer_eth", c.relayer_eth);
    ether("paymaster_eth", c.paymaster_eth);
    ether("entrypoint_eth", c.entrypoint_eth);
    ether("delta", c.delta);
    ether("self_send_value", c.self_send_value);
    ether("protocol_value", c.protocol_value);
    c.gas_limit = field<uint64_t>(j, "gas_limit", c.gas_limit);
    c.dormancy_blocks = field<uint64_t>(j, "dormancy_blocks", c.dormancy_blocks);
    if (j.contains("install_call_target"))
        c.install_call_target =
            resolve_address(field<std::string>(j, "install_call_target", "zero"), c.actors);
    if (j.contains("policy") && !j["policy"].is_null())
        c.policy = policy_from_spec(j["policy"]);
    return c;
}
}  // namespace delegsim
