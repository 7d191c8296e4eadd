// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/json_io.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace delegsim;

namespace
{
py::object to_py(const json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

json from_py(const py::handle& obj)
{
    if (obj.is_none())
        return json::object();
    return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

EnvConfig config_from(const py::object& config, const py::object& policy)
{
    auto c = env_config_from_json(from_py(config));
    if (!policy.is_none())
        c.policy = policy_from_spec(from_py(policy));
    return c;
}

json tuple_json(const AuthorizationTuple& t, uint8_t magic)
{
    auto j = to_json(t);
    j["tuple_hex"] = encode_tuple_hex(t);
    try
    {
        j["authority"] =
            recover_authority(auth_message(t.chain_id, t.target, t.nonce, magic), t.signature).hex();
    }
    catch (const Error&)
    {
        j["authority"] = nullptr;
    }
    return j;
}

json pipeline_json(const PipelineResult& r)
{
    json reports = json::array();
    for (const auto& rep : r.reports)
        reports.push_back(to_json(rep));
    return {{"installed", r.installed}, {"install", to_json(r.install)}, {"reports", reports}};
}

AttackFlow flow_from(std::string_view name)
{
    if (name == "a" || name == "A")
        return AttackFlow::user;
    if (name == "b" || name == "B")
        return AttackFlow::attacker;
    if (name == "c" || name == "C")
        return AttackFlow::protocol;
    if (name == "composite")
        return AttackFlow::composite;
    throw Error{Errc::config_error, "unknown scenario '" + std::string{name} + "'"};
}
}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "EIP-7702 delegation simulator";

    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const Error& e)
        {
            PyErr_SetString(PyExc_ValueError,
                (std::string{to_string(e.code())} + ": " + e.what()).c_str());
        }
    });

    m.def(
        "keccak256",
        [](const py::bytes& data) {
            const std::string s = data;
            const auto h = keccak256(bytes_view{reinterpret_cast<const uint8_t*>(s.data()), s.size()});
            return py::bytes(reinterpret_cast<const char*>(h.bytes.data()), h.bytes.size());
        },
        py::arg("data"));

    m.def("presets",
        [] {
            return std::vector<std::string>{"none", "chain-agnostic", "strict", "scoped",
                "foreground", "expiry", "single-use", "bundler", "paymaster", "entrypoint",
                "all-filters", "all"};
        });

    m.def(
        "policy", [](const py::object& spec) { return to_py(to_json(policy_from_spec(from_py(spec)))); },
        py::arg("spec"), "Expands a preset name or policy dict into a full policy dict.");

    m.def(
        "craft_tuple",
        [](uint64_t chain_id, const std::string& target, uint64_t nonce, const std::string& key,
            uint8_t magic) {
            return to_py(tuple_json(
                sign_authorization(resolve_key(key), chain_id, resolve_address(target), nonce, magic),
                magic));
        },
        py::arg("chain_id"), py::arg("target"), py::arg("nonce") = 0, py::arg("key") = "victim",
        py::arg("magic") = default_auth_magic);

    m.def(
        "decode_tuple",
        [](const std::string& text, uint8_t magic) {
            return to_py(tuple_json(decode_tuple_hex(text), magic));
        },
        py::arg("tuple_hex"), py::arg("magic") = default_auth_magic);

    m.def(
        "run_pipeline",
        [](const py::object& config, const py::object& policy) {
            return to_py(pipeline_json(run_full_pipeline(config_from(config, policy))));
        },
        py::arg("config") = py::none(), py::arg("policy") = py::none());

    m.def(
        "run_scenario",
        [](const std::string& name, const py::object& config, const py::object& policy) {
            const auto out = run_attack_flow(flow_from(name), config_from(config, policy));
            return to_py({{"installed", out.installed}, {"blocked", out.blocked()},
                {"report", to_json(out.report)}});
        },
        py::arg("name"), py::arg("config") = py::none(), py::arg("policy") = py::none(),
        "Installs the delegation on a fresh environment, then runs one trigger: a, b, c or composite.");

    m.def(
        "run_crosschain",
        [](const std::vector<uint64_t>& chain_ids, const py::object& policy, bool parallel) {
            MultiChainConfig mc;
            mc.chain_ids = chain_ids;
            mc.parallel = parallel;
            if (!policy.is_none())
                mc.base.policy = policy_from_spec(from_py(policy));
            auto env = setup_multichain(mc);
            const auto res = run_crosschain_experiment(env, chain_agnostic_tuple(env.actors));
            json replay = json::array();
            json reports = json::array();
            for (const auto& r : res.replay)
                replay.push_back(to_json(r));
            for (const auto& r : res.reports)
                reports.push_back(to_json(r));
            return to_py(
                {{"replay", replay}, {"reports", reports}, {"aggregate", to_json(res.aggregate)}});
        },
        py::arg("chain_ids") = std::vector<uint64_t>{1337, 2337, 3337},
        py::arg("policy") = py::none(), py::arg("parallel") = false);

    m.def(
        "benign_workflow",
        [](const py::object& policy) {
            return to_py(state_to_json(run_benign_workflow(policy_from_spec(from_py(policy)))));
        },
        py::arg("policy") = "none", "Final state of an ordinary transfer workflow.");

    m.def(
        "scan_state",
        [](const py::object& state) {
            return to_py(to_json(guard::scan_state(state_from_json(from_py(state)))));
        },
        py::arg("state"));

    m.def(
        "initial_state",
        [](const py::object& config) {
            return to_py(state_to_json(setup_environment(config_from(config, py::none())).state));
        },
        py::arg("config") = py::none());
}
