// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/json_io.hpp>
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace delegsim;

namespace
{
enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 2,
    exit_policy = 3,
    exit_postcondition = 4,
};

/// Raised for bad arguments and unreadable inputs; maps to exit code 2.
struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Globals
{
    std::string config_path;
    std::string output_dir = "delegsim-out";
    std::string policy;
    uint64_t seed = 7702;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw UsageError{"cannot read " + path.string()};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& path)
{
    try
    {
        return json::parse(read_file(path));
    }
    catch (const json::parse_error& e)
    {
        throw UsageError{path.string() + ": " + e.what()};
    }
}

void write_file(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out{path, std::ios::binary};
    if (!out)
        throw UsageError{"cannot write " + path.string()};
    out << text;
}

json load_config(const Globals& g)
{
    return g.config_path.empty() ? json::object() : read_json(g.config_path);
}

/// Top-level keys apply to every chain; entries of "chains" override them per chain.
std::vector<EnvConfig> chain_configs(const Globals& g, const EnvConfig& base)
{
    auto doc = load_config(g);
    if (!doc.is_object())
        throw UsageError{"config must be a JSON object"};
    auto shared = doc;
    shared.erase("chains");
    const auto common = env_config_from_json(shared, base);

    std::vector<EnvConfig> out;
    if (doc.contains("chains"))
    {
        if (!doc["chains"].is_array() || doc["chains"].empty())
            throw UsageError{"config 'chains' must be a non-empty array"};
        for (const auto& c : doc["chains"])
            out.push_back(env_config_from_json(c, common));
    }
    else
    {
        out.push_back(common);
    }

    if (!g.policy.empty())
    {
        const auto policy = fs::exists(g.policy) ? policy_from_json(read_json(g.policy)) :
                                                   guard::preset(g.policy);
        for (auto& c : out)
            c.policy = policy;
    }
    return out;
}

guard::GuardPolicy global_policy(const Globals& g)
{
    if (g.policy.empty())
        return {};
    return fs::exists(g.policy) ? policy_from_json(read_json(g.policy)) : guard::preset(g.policy);
}

fs::path default_state(const Globals& g)
{
    return fs::path{g.output_dir} / "state.json";
}

void print(const json& j)
{
    std::cout << dump(j);
}

// ---------------------------------------------------------------------------------------

int cmd_init(const Globals& g, std::optional<uint64_t> chain_id)
{
    auto config = chain_configs(g, EnvConfig{}).front();
    if (chain_id)
        config.chain_id = *chain_id;
    const auto env = setup_environment(config);
    const auto path = default_state(g);
    write_file(path, dump(state_to_json(env.state)));
    print({{"state", path.string()}, {"chain_id", env.state.chain_id()},
        {"victim", env.actors.victim().hex()}, {"attacker", env.actors.attacker().hex()},
        {"relayer", env.actors.relayer().hex()}, {"delegate", env.actors.delegate.hex()},
        {"entrypoint", env.entrypoint.address.hex()}});
    return exit_ok;
}

int cmd_craft_tuple(uint64_t chain_id, const std::string& target, uint64_t nonce,
    const std::string& key, const std::string& out_path, unsigned magic)
{
    if (magic > 0xff)
        throw UsageError{"magic must fit in one byte"};
    const auto k = resolve_key(key);
    const auto t = sign_authorization(
        k, chain_id, resolve_address(target), nonce, static_cast<uint8_t>(magic));
    const auto text = encode_tuple_hex(t);
    write_file(out_path, text + "\n");
    const auto authority = recover_authority(
        auth_message(t.chain_id, t.target, t.nonce, static_cast<uint8_t>(magic)), t.signature);
    auto j = to_json(t);
    j["tuple_hex"] = text;
    j["file"] = out_path;
    j["authority"] = authority.hex();
    print(j);
    return exit_ok;
}

int cmd_authtx(const Globals& g, const std::vector<std::string>& tuple_files,
    const std::string& state_path, const std::string& sender, const std::string& to,
    const std::string& value)
{
    const fs::path path = state_path.empty() ? default_state(g) : fs::path{state_path};
    auto state = state_from_json(read_json(path));

    std::vector<AuthorizationTuple> tuples;
    for (const auto& f : tuple_files)
        tuples.push_back(decode_tuple_hex(read_file(f)));

    TxOptions options;
    const auto policy = global_policy(g);
    if (policy.any())
        options.policy = policy.tuple;

    const auto receipt = process_set_code_tx(
        build_auth_tx(state, tuples, resolve_address(sender), resolve_address(to),
            value.empty() ? 0 : parse_ether(value)),
        state, options);
    write_file(path, dump(state_to_json(state)));
    write_file(fs::path{g.output_dir} / "traces" / (receipt.tx_hash.hex() + ".jsonl"),
        trace_to_jsonl(receipt.trace));
    print(to_json(receipt));

    for (const auto& t : receipt.tuples_applied)
        if (t.reject_reason && is_policy_rejection(*t.reject_reason))
            return exit_policy;
    return exit_ok;
}

/// Looks at tuple hex files and state snapshots.
int cmd_scan(const std::string& input, const std::string& address)
{
    const auto text = read_file(input);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] != '{')
    {
        const auto t = decode_tuple_hex(text);
        auto j = to_json(t);
        try
        {
            j["authority"] =
                recover_authority(auth_message(t.chain_id, t.target, t.nonce), t.signature).hex();
        }
        catch (const Error& e)
        {
            j["authority"] = nullptr;
            j["recovery_error"] = e.what();
        }
        if (t.chain_id == 0)
            j["warning"] = "chain-agnostic tuple: replayable on every chain";
        print(j);
        return exit_ok;
    }

    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw UsageError{input + ": " + e.what()};
    }
    const auto state = state_from_json(doc);
    auto findings = guard::scan_state(state);
    if (!address.empty())
    {
        const auto who = resolve_address(address);
        std::erase_if(findings, [&](const auto& f) { return f.authority != who; });
    }

    json out{{"chain_id", state.chain_id()}, {"height", state.height()}};
    if (findings.empty())
    {
        out["status"] = "no delegations";
        out["findings"] = json::array();
    }
    else
    {
        out["status"] = std::to_string(findings.size()) + " delegation(s)";
        out["findings"] = to_json(findings);
        json warnings = json::array();
        for (const auto& f : findings)
            if (f.malicious)
                warnings.push_back(f.authority.hex() + " delegates to drainer " + f.delegate.hex());
        out["warnings"] = warnings;
    }
    print(out);
    for (const auto& f : findings)
        if (f.malicious)
            std::cerr << "warning: " << f.authority.hex() << " delegates to " << f.delegate.hex()
                      << " (" << f.behavior << ")\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------------------

class RunWriter
{
public:
    explicit RunWriter(fs::path root) : root_{std::move(root)} {}

    void report(const ScenarioReport& r, const fs::path& sub = {})
    {
        write_file(root_ / "reports" / sub / (r.scenario_id + ".json"), dump(to_json(r)));
    }

    void traces(const ChainState& before, const ChainState& after, const fs::path& sub = {})
    {
        for (auto i = before.receipts().size(); i < after.receipts().size(); ++i)
        {
            const auto& rec = after.receipts()[i];
            write_file(root_ / "traces" / sub / (rec.tx_hash.hex() + ".jsonl"),
                trace_to_jsonl(rec.trace));
        }
    }

    void states(const ChainState& before, const ChainState& after, const fs::path& sub = {})
    {
        write_file(root_ / "state" / sub / "before.json", dump(state_to_json(before)));
        write_file(root_ / "state" / sub / "after.json", dump(state_to_json(after)));
    }

    void write(const fs::path& rel, const json& j) { write_file(root_ / rel, dump(j)); }

private:
    fs::path root_;
};

int finish_run(RunWriter& w, json summary, bool expect_drain, bool drained, bool consistent)
{
    const bool ok = consistent && (!expect_drain || drained);
    summary["expect_drain"] = expect_drain;
    summary["drained"] = drained;
    summary["postcondition"] = ok ? "held" : "failed";
    w.write("run.json", summary);
    print(summary);
    return ok ? exit_ok : exit_postcondition;
}

int cmd_run(const Globals& g, const std::string& scenario)
{
    RunWriter w{g.output_dir};
    json summary{{"scenario", scenario}, {"seed", g.seed}};

    if (scenario == "crosschain")
    {
        auto configs = chain_configs(g, MultiChainConfig::default_base());
        MultiChainConfig mc;
        mc.base = configs.front();
        if (configs.size() > 1)
        {
            mc.chain_ids.clear();
            for (const auto& c : configs)
            {
                mc.chain_ids.push_back(c.chain_id);
                mc.policies[c.chain_id] = c.policy;
            }
        }
        mc.parallel = true;
        auto env = setup_multichain(mc);
        std::vector<ChainState> before;
        for (const auto& c : env.chains)
            before.push_back(c.state);

        const auto res = run_crosschain_experiment(env, chain_agnostic_tuple(env.actors));
        bool consistent = true;
        bool any_policy = false;
        for (size_t i = 0; i < env.chains.size(); ++i)
        {
            const fs::path sub = "chain_" + std::to_string(env.chains[i].state.chain_id());
            w.report(res.reports[i], sub);
            w.traces(before[i], env.chains[i].state, sub);
            w.states(before[i], env.chains[i].state, sub);
            consistent = consistent && report_balances(res.reports[i]);
            any_policy = any_policy || env.chains[i].config.policy.any();
        }
        w.write("reports/aggregate.json", to_json(res.aggregate));
        summary["aggregate"] = to_json(res.aggregate);
        return finish_run(w, summary, !any_policy,
            res.aggregate.chains_drained == env.chains.size(), consistent);
    }

    const auto config = chain_configs(g, EnvConfig{}).front();
    summary["policy"] = to_json(config.policy);
    auto env = setup_environment(config);
    const auto initial = env.state;

    if (scenario == "pipeline")
    {
        const auto res = run_full_pipeline(env);
        w.traces(initial, env.state);
        w.states(initial, env.state);
        json reports = json::array();
        bool consistent = true;
        for (const auto& r : res.reports)
        {
            w.report(r);
            reports.push_back(to_json(r));
            consistent = consistent && report_balances(r);
        }
        summary["installed"] = res.installed;
        summary["install"] = to_json(res.install.tuples_applied.at(0));
        summary["reports"] = reports;
        const bool zeroed = res.installed && !res.reports.empty() &&
                            res.reports.back().eth_after == 0 &&
                            res.reports.back().tokens_after == 0;
        return finish_run(w, summary, !config.policy.any(), zeroed, consistent);
    }

    AttackFlow flow;
    if (scenario == "a")
        flow = AttackFlow::user;
    else if (scenario == "b")
        flow = AttackFlow::attacker;
    else if (scenario == "c")
        flow = AttackFlow::protocol;
    else if (scenario == "composite")
        flow = AttackFlow::composite;
    else
        throw UsageError{"unknown scenario '" + scenario + "'"};

    const auto install = run_phase1(env);
    const auto mid = env.state;
    ScenarioReport r;
    switch (flow)
    {
    case AttackFlow::user:
        r = run_scenario_a(env);
        break;
    case AttackFlow::attacker:
        r = run_scenario_b(env);
        break;
    case AttackFlow::protocol:
        r = run_scenario_c(env);
        break;
    case AttackFlow::composite:
        r = run_composite(env);
        break;
    }
    w.traces(initial, env.state);
    w.states(mid, env.state);
    w.report(r);
    summary["installed"] = install.tuples_applied.at(0).accepted;
    summary["install"] = to_json(install.tuples_applied.at(0));
    summary["report"] = to_json(r);
    summary["blocked"] = !r.drain_satisfied;
    return finish_run(w, summary, !config.policy.any(), r.drain_satisfied, report_balances(r));
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"delegsim: EIP-7702 delegation simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "Run configuration (JSON)");
    app.add_option("--output", g.output_dir, "Output directory")->capture_default_str();
    app.add_option("--policy", g.policy, "Guard preset name or policy JSON file");
    app.add_option("--seed", g.seed, "Seed recorded in the run manifest")->capture_default_str();

    auto* init = app.add_subcommand("init", "Create a funded single-chain state file");
    std::optional<uint64_t> init_chain;
    init->add_option("--chain-id", init_chain, "Chain id");

    auto* craft = app.add_subcommand("craft-tuple", "Sign an authorization tuple to a .hex file");
    uint64_t craft_chain = 0;
    uint64_t craft_nonce = 0;
    unsigned craft_magic = default_auth_magic;
    std::string craft_target;
    std::string craft_key = "victim";
    std::string craft_out = "tuple.hex";
    craft->add_option("--chain-id", craft_chain, "Tuple chain id (0 = any chain)")->capture_default_str();
    craft->add_option("--target", craft_target, "Delegate address or fixture name")->required();
    craft->add_option("--nonce", craft_nonce, "Authority nonce")->capture_default_str();
    craft->add_option("--key", craft_key, "Private key hex or fixture name")->capture_default_str();
    craft->add_option("--out", craft_out, "Output .hex file")->capture_default_str();
    craft->add_option("--magic", craft_magic, "Signing domain byte")->capture_default_str();

    auto* authtx = app.add_subcommand("authtx", "Submit a set-code transaction against a state file");
    std::vector<std::string> authtx_tuples;
    std::string authtx_state;
    std::string authtx_sender = "victim";
    std::string authtx_to = "zero";
    std::string authtx_value;
    authtx->add_option("--tuple", authtx_tuples, "Tuple .hex file (repeatable)")->required();
    authtx->add_option("--state", authtx_state, "State file (default OUTPUT/state.json)");
    authtx->add_option("--sender", authtx_sender, "Sender address or fixture name")->capture_default_str();
    authtx->add_option("--to", authtx_to, "Outer call target")->capture_default_str();
    authtx->add_option("--value", authtx_value, "Outer call value in ETH");

    auto* run = app.add_subcommand("run", "Run a scenario and write a run directory");
    std::string scenario;
    run->add_option("scenario", scenario, "a | b | c | pipeline | crosschain | composite")
        ->required()
        ->check(CLI::IsMember({"a", "b", "c", "pipeline", "crosschain", "composite"}));

    auto* scan = app.add_subcommand("scan", "Report delegations in a state file or decode a tuple");
    std::string scan_input;
    std::string scan_address;
    scan->add_option("input", scan_input, "State JSON or tuple .hex file")->required();
    scan->add_option("--address", scan_address, "Only report this authority");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const auto code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*init)
            return cmd_init(g, init_chain);
        if (*craft)
            return cmd_craft_tuple(craft_chain, craft_target, craft_nonce, craft_key, craft_out,
                craft_magic);
        if (*authtx)
            return cmd_authtx(g, authtx_tuples, authtx_state, authtx_sender, authtx_to, authtx_value);
        if (*run)
            return cmd_run(g, scenario);
        if (*scan)
            return cmd_scan(scan_input, scan_address);
    }
    catch (const UsageError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return e.code() == Errc::insufficient_gas_funds ? exit_postcondition : exit_usage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
