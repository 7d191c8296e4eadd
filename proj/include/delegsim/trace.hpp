// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/common.hpp>
#include <optional>
#include <string>
#include <vector>

namespace delegsim
{
inline constexpr unsigned max_call_depth = 16;

/// One message call. depth 0 is the transaction's outer call.
struct CallFrame
{
    Address caller;
    Address callee;
    Amount value = 0;
    bytes data;
    unsigned depth = 0;
};

enum class TraceKind
{
    call,
    value_transfer,
    token_transfer,
    fallback_executed,
    delegation_resolved,
    revert,
    scope_denied,
    phase,
};

std::string_view to_string(TraceKind kind) noexcept;

struct TraceEvent
{
    TraceKind kind = TraceKind::call;
    Address from;
    Address to;
    Amount amount = 0;
    /// Token contract for token_transfer events.
    std::optional<Address> token;
    /// Resolved delegate for delegation_resolved / fallback_executed events.
    std::optional<Address> delegate;
    unsigned depth = 0;
    std::string note;
    /// Set when an enclosing call failed and rolled this event's effects back.
    bool reverted = false;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

enum class RejectReason
{
    chain_mismatch,
    nonce_mismatch,
    non_canonical_signature,
    recovery_failure,
    chain_agnostic_forbidden,
    scope_required,
};

std::string_view to_string(RejectReason reason) noexcept;

/// Flags trace[from..] as rolled back.
void mark_reverted(std::vector<TraceEvent>& trace, size_t from) noexcept;

/// True for the reasons produced by a guard policy rather than protocol validation.
constexpr bool is_policy_rejection(RejectReason r) noexcept
{
    return r == RejectReason::chain_agnostic_forbidden || r == RejectReason::scope_required;
}

struct TupleOutcome
{
    std::optional<Address> authority;
    Address target;
    bool accepted = false;
    std::optional<RejectReason> reject_reason;

    friend bool operator==(const TupleOutcome&, const TupleOutcome&) = default;
};

struct Receipt
{
    Hash32 tx_hash;
    Address sender;
    /// Outcome of the outer call (or of the bundle, for handleOps receipts).
    bool success = false;
    std::vector<TupleOutcome> tuples_applied;
    uint64_t gas_used = 0;
    Amount gas_cost = 0;
    /// Block height the transaction was included at.
    uint64_t height = 0;
    std::vector<TraceEvent> trace;
    std::string error;

    friend bool operator==(const Receipt&, const Receipt&) = default;
};
}  // namespace delegsim
