// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/state.hpp>
#include <delegsim/user_operation.hpp>
#include <optional>
#include <string>
#include <vector>

namespace delegsim::guard
{
/// Admission rules applied to authorization tuples before they are installed.
struct TuplePolicy
{
    bool forbid_chain_agnostic = false;
    /// Unscoped tuples are refused.
    bool require_scope = false;
    /// Applied to every accepted tuple: expiry = install height + lifetime.
    std::optional<uint64_t> max_delegation_lifetime;
    bool single_use = false;
    bool foreground_only = false;

    friend bool operator==(const TuplePolicy&, const TuplePolicy&) = default;
};

/// Optional constraints a wallet attaches to a tuple it signs.
struct ScopedTupleExtension
{
    /// Absolute height after which the delegation is void.
    std::optional<uint64_t> expiry_height;
    bool single_use = false;
    bool foreground_only = false;

    friend bool operator==(const ScopedTupleExtension&, const ScopedTupleExtension&) = default;
};

/// The three ERC-4337 pipeline filters.
struct PipelineConfig
{
    bool bundler_filter_enabled = false;
    bool paymaster_filter_enabled = false;
    bool entrypoint_static_check_enabled = false;
    /// Delegates the EntryPoint static check accepts.
    std::vector<Address> allowlist;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Tuple admission plus pipeline filters, as loaded from a policy file.
struct GuardPolicy
{
    TuplePolicy tuple;
    PipelineConfig pipeline;

    [[nodiscard]] bool any() const noexcept { return *this != GuardPolicy{}; }

    friend bool operator==(const GuardPolicy&, const GuardPolicy&) = default;
};

/// Named presets: none, chain-agnostic, strict, scoped, foreground, expiry, single-use,
/// bundler, paymaster, entrypoint, all-filters, all. Throws Errc::config_error for an unknown name.
GuardPolicy preset(std::string_view name);

enum class GuardReason
{
    chain_agnostic_forbidden,
    scope_required,
    expired,
    foreground_only,
    single_use_consumed,
    delegated_account,
    sponsorship_refused,
    delegate_not_allowlisted,
};

std::string_view to_string(GuardReason reason) noexcept;

struct Verdict
{
    bool accepted = true;
    std::optional<GuardReason> reason;
    std::string detail;

    static Verdict accept() { return {}; }
    static Verdict reject(GuardReason r, std::string detail = {})
    {
        return {false, r, std::move(detail)};
    }
    explicit operator bool() const noexcept { return accepted; }
};

/// The delegate named by a delegation indicator, if `code` is one.
std::optional<Address> scan_code(bytes_view code) noexcept;

/// Policy check for a single tuple. Pure: nothing is recorded here.
Verdict admit_tuple(const AuthorizationTuple& tuple,
    const std::optional<ScopedTupleExtension>& extension, const TuplePolicy& policy);

/// The scope record to store for an accepted tuple, or nothing when neither
/// the extension nor the policy constrains it.
std::optional<ScopeRecord> make_scope_record(const Address& target, uint64_t height,
    const std::optional<ScopedTupleExtension>& extension, const TuplePolicy& policy);

/// Checks a dispatch into `authority` against its scope record. An expired
/// delegation is cleared. A single-use delegation is consumed on acceptance.
Verdict enforce_scope(ChainState& state, const Address& authority, const CallFrame& frame);

/// Refuses operations whose sender or call target carries a delegation indicator.
Verdict bundler_filter(const UserOperation& op, const ChainState& state);

/// Refuses to sponsor operations whose sender or call target carries a
/// delegation indicator. Unsponsored operations pass.
Verdict paymaster_filter(const UserOperation& op, const ChainState& state);

/// Accepts a delegated sender only if its delegate is on the allowlist.
Verdict entrypoint_static_check(
    const UserOperation& op, const ChainState& state, const std::vector<Address>& allowlist);

/// Every delegation on the chain with its delegate's behavior kind.
struct DelegationFinding
{
    Address authority;
    Address delegate;
    std::string behavior;
    bool malicious = false;
};

std::vector<DelegationFinding> scan_state(const ChainState& state);
}  // namespace delegsim::guard
