// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/state.hpp>
#include <delegsim/trace.hpp>
#include <string>
#include <vector>

namespace delegsim
{
/// Marker written as the code of every registered behavior contract.
bytes behavior_marker(const ContractBehavior& behavior);

/// Installs `behavior` at `addr`. Throws Errc::address_occupied if the address
/// already has code or a behavior.
void register_behavior(ChainState& state, const Address& addr, ContractBehavior behavior);

/// Creates an empty token ledger with an optional symbol.
void register_token(ChainState& state, const Address& token, std::string symbol = {});

/// Precompiles 0x01..0x09 run no behavior when used as a delegate.
bool is_precompile(const Address& addr) noexcept;

enum class ExecStatus
{
    success,
    reverted,
    depth_exceeded,
};

std::string_view to_string(ExecStatus status) noexcept;

struct ExecResult
{
    ExecStatus status = ExecStatus::success;
    std::string reason;

    [[nodiscard]] bool ok() const noexcept { return status == ExecStatus::success; }
};

/// Per-transaction execution context shared by nested calls.
struct ExecContext
{
    std::vector<TraceEvent> trace;
    /// Calls at depth >= 1. Each costs GasSchedule::per_call.
    uint64_t internal_calls = 0;
};

/// Runs one message call. All effects of a failing call are rolled back;
/// trace events are kept.
ExecResult dispatch_call(ChainState& state, const CallFrame& frame, ExecContext& ctx);

// ERC-20 ledger operations on MockErc20 tokens.
Amount erc20_balance_of(const ChainState& state, const Address& token, const Address& holder);
void erc20_mint(ChainState& state, const Address& token, const Address& to, Amount amount);
void erc20_transfer(ChainState& state, const Address& token, const Address& from,
    const Address& to, Amount amount);

// Calldata builders.
bytes selector(std::string_view signature);
bytes encode_erc20_transfer(const Address& to, Amount amount);
bytes encode_call_target(const Address& target);

/// Third-party entry into DummyProtocol.callTarget(target) carrying `value`.
ExecResult protocol_call_target(ChainState& state, const Address& protocol,
    const Address& target, Amount value, const Address& caller, ExecContext& ctx);
}  // namespace delegsim
