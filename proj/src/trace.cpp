// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/trace.hpp>

namespace delegsim
{
std::string_view to_string(TraceKind kind) noexcept
{
    switch (kind)
    {
    case TraceKind::call:
        return "Call";
    case TraceKind::value_transfer:
        return "ValueTransfer";
    case TraceKind::token_transfer:
        return "TokenTransfer";
    case TraceKind::fallback_executed:
        return "FallbackExecuted";
    case TraceKind::delegation_resolved:
        return "DelegationResolved";
    case TraceKind::revert:
        return "Revert";
    case TraceKind::scope_denied:
        return "ScopeDenied";
    case TraceKind::phase:
        return "Phase";
    }
    return "Unknown";
}

void mark_reverted(std::vector<TraceEvent>& trace, size_t from) noexcept
{
    for (auto i = from; i < trace.size(); ++i)
        trace[i].reverted = true;
}

std::string_view to_string(RejectReason reason) noexcept
{
    switch (reason)
    {
    case RejectReason::chain_mismatch:
        return "ChainMismatch";
    case RejectReason::nonce_mismatch:
        return "NonceMismatch";
    case RejectReason::non_canonical_signature:
        return "NonCanonicalSignature";
    case RejectReason::recovery_failure:
        return "RecoveryFailure";
    case RejectReason::chain_agnostic_forbidden:
        return "ChainAgnosticForbidden";
    case RejectReason::scope_required:
        return "ScopeRequired";
    }
    return "Unknown";
}
}  // namespace delegsim
