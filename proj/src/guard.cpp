// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/guard.hpp>
#include <algorithm>

namespace delegsim::guard
{
GuardPolicy preset(std::string_view name)
{
    GuardPolicy p;
    if (name == "none")
        return p;
    if (name == "chain-agnostic")
    {
        p.tuple.forbid_chain_agnostic = true;
        return p;
    }
    if (name == "strict")
    {
        p.tuple.forbid_chain_agnostic = true;
        p.tuple.require_scope = true;
        return p;
    }
    if (name == "scoped")
    {
        p.tuple.require_scope = true;
        return p;
    }
    if (name == "foreground")
    {
        p.tuple.foreground_only = true;
        return p;
    }
    if (name == "expiry")
    {
        p.tuple.max_delegation_lifetime = 5;
        return p;
    }
    if (name == "single-use")
    {
        p.tuple.single_use = true;
        return p;
    }
    if (name == "bundler")
    {
        p.pipeline.bundler_filter_enabled = true;
        return p;
    }
    if (name == "paymaster")
    {
        p.pipeline.paymaster_filter_enabled = true;
        return p;
    }
    if (name == "entrypoint")
    {
        p.pipeline.entrypoint_static_check_enabled = true;
        return p;
    }
    if (name == "all-filters")
    {
        p.pipeline.bundler_filter_enabled = true;
        p.pipeline.paymaster_filter_enabled = true;
        p.pipeline.entrypoint_static_check_enabled = true;
        return p;
    }
    if (name == "all")
    {
        p.tuple = {true, true, 5, true, true};
        p.pipeline.bundler_filter_enabled = true;
        p.pipeline.paymaster_filter_enabled = true;
        p.pipeline.entrypoint_static_check_enabled = true;
        return p;
    }
    throw Error{Errc::config_error, "unknown policy preset: " + std::string{name}};
}

std::string_view to_string(GuardReason reason) noexcept
{
    switch (reason)
    {
    case GuardReason::chain_agnostic_forbidden:
        return "ChainAgnosticForbidden";
    case GuardReason::scope_required:
        return "ScopeRequired";
    case GuardReason::expired:
        return "Expired";
    case GuardReason::foreground_only:
        return "ForegroundOnly";
    case GuardReason::single_use_consumed:
        return "SingleUseConsumed";
    case GuardReason::delegated_account:
        return "DelegatedAccount";
    case GuardReason::sponsorship_refused:
        return "SponsorshipRefused";
    case GuardReason::delegate_not_allowlisted:
        return "DelegateNotAllowlisted";
    }
    return "Unknown";
}

std::optional<Address> scan_code(bytes_view code) noexcept
{
    return parse_delegation(code);
}

Verdict admit_tuple(const AuthorizationTuple& tuple,
    const std::optional<ScopedTupleExtension>& extension, const TuplePolicy& policy)
{
    if (policy.forbid_chain_agnostic && tuple.chain_id == 0)
        return Verdict::reject(GuardReason::chain_agnostic_forbidden, "tuple has chainId 0");
    if (policy.require_scope && !extension)
        return Verdict::reject(GuardReason::scope_required, "tuple carries no scope extension");
    return Verdict::accept();
}

std::optional<ScopeRecord> make_scope_record(const Address& target, uint64_t height,
    const std::optional<ScopedTupleExtension>& extension, const TuplePolicy& policy)
{
    ScopeRecord rec;
    rec.target = target;
    rec.installed_at = height;
    bool constrained = false;

    if (extension)
    {
        rec.expiry_height = extension->expiry_height;
        rec.single_use = extension->single_use;
        rec.foreground_only = extension->foreground_only;
        constrained = true;
    }
    if (policy.max_delegation_lifetime)
    {
        const auto cap = height + *policy.max_delegation_lifetime;
        rec.expiry_height = rec.expiry_height ? std::min(*rec.expiry_height, cap) : cap;
        constrained = true;
    }
    if (policy.single_use)
        rec.single_use = constrained = true;
    if (policy.foreground_only)
        rec.foreground_only = constrained = true;

    if (!constrained)
        return std::nullopt;
    return rec;
}

Verdict enforce_scope(ChainState& state, const Address& authority, const CallFrame& frame)
{
    const auto it = state.scopes().find(authority);
    if (it == state.scopes().end())
        return Verdict::accept();
    auto& rec = it->second;

    if (rec.expiry_height && *rec.expiry_height < state.height())
    {
        const auto detail = "expired at height " + std::to_string(*rec.expiry_height);
        clear_delegation(state, authority);
        return Verdict::reject(GuardReason::expired, detail);
    }
    if (rec.foreground_only && frame.caller != authority)
        return Verdict::reject(GuardReason::foreground_only, "call not initiated by the authority");
    if (rec.single_use)
    {
        if (rec.consumed)
            return Verdict::reject(GuardReason::single_use_consumed, "delegation already used");
        rec.consumed = true;
    }
    return Verdict::accept();
}

namespace
{
/// The first of sender / call_target that carries a delegation indicator.
std::optional<std::pair<Address, Address>> delegated_party(
    const UserOperation& op, const ChainState& state)
{
    for (const auto& who : {op.sender, op.call_target})
        if (const auto d = scan_code(state.code(who)))
            return std::pair{who, *d};
    return std::nullopt;
}
}  // namespace

Verdict bundler_filter(const UserOperation& op, const ChainState& state)
{
    if (const auto hit = delegated_party(op, state))
        return Verdict::reject(GuardReason::delegated_account,
            hit->first.hex() + " delegates to " + hit->second.hex());
    return Verdict::accept();
}

Verdict paymaster_filter(const UserOperation& op, const ChainState& state)
{
    if (!op.paymaster)
        return Verdict::accept();
    if (const auto hit = delegated_party(op, state))
        return Verdict::reject(GuardReason::sponsorship_refused,
            hit->first.hex() + " delegates to " + hit->second.hex());
    return Verdict::accept();
}

Verdict entrypoint_static_check(
    const UserOperation& op, const ChainState& state, const std::vector<Address>& allowlist)
{
    const auto d = is_delegated(state, op.sender);
    if (!d || std::find(allowlist.begin(), allowlist.end(), *d) != allowlist.end())
        return Verdict::accept();
    return Verdict::reject(
        GuardReason::delegate_not_allowlisted, "delegate " + d->hex() + " not on allowlist");
}

std::vector<DelegationFinding> scan_state(const ChainState& state)
{
    std::vector<DelegationFinding> out;
    for (const auto& [authority, delegate] : active_delegations(state))
    {
        DelegationFinding f{authority, delegate, "none", false};
        if (const auto* b = state.behavior_at(delegate))
        {
            f.behavior = behavior_kind(*b);
            f.malicious = std::holds_alternative<MaliciousDrainer>(*b);
        }
        out.push_back(std::move(f));
    }
    return out;
}
}  // namespace delegsim::guard
