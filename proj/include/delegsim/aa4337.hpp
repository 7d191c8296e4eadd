// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/exec.hpp>
#include <delegsim/guard.hpp>
#include <delegsim/user_operation.hpp>
#include <map>
#include <string>
#include <vector>

namespace delegsim
{
/// Singleton EntryPoint contract with flat per-sender op nonces.
struct EntryPoint
{
    Address address;
    uint64_t processed_ops = 0;
    std::map<Address, uint64_t> op_nonces;

    [[nodiscard]] uint64_t op_nonce(const Address& sender) const
    {
        const auto it = op_nonces.find(sender);
        return it == op_nonces.end() ? 0 : it->second;
    }
};

/// Canonical EntryPoint v0.6 deployment address.
const Address& default_entrypoint_address();

/// Registers the EntryPoint contract on `state` and returns its model.
EntryPoint deploy_entrypoint(ChainState& state, const Address& addr = default_entrypoint_address());

enum class OpStatus
{
    included,
    rejected_by_bundler,
    rejected_by_paymaster,
    rejected_by_entrypoint,
    op_nonce_mismatch,
    paymaster_unfunded,
    validation_failed,
    execution_reverted,
    out_of_gas,
};

std::string_view to_string(OpStatus status) noexcept;

struct OpReceipt
{
    size_t index = 0;
    Address sender;
    OpStatus status = OpStatus::included;
    std::string detail;
    bool sponsored = false;
    uint64_t gas_used = 0;
    /// Phase events separate the validation trace from the execution trace.
    std::vector<TraceEvent> trace;
};

struct BundleReceipt
{
    Hash32 bundle_hash;
    Address bundler;
    uint64_t height = 0;
    uint64_t gas_used = 0;
    Amount gas_cost = 0;
    std::vector<OpReceipt> ops;
};

/// Calls validateUserOp on the sender. A delegated sender runs its delegate's code here.
ExecResult validate_user_op(
    ChainState& state, const EntryPoint& ep, const UserOperation& op, ExecContext& ctx);

/// The EntryPoint calls op.call_target with the op's value and calldata.
ExecResult execute_user_op(
    ChainState& state, const EntryPoint& ep, const UserOperation& op, ExecContext& ctx);

/// Bundler -> EntryPoint.handleOps as a single transaction paid by the bundler.
/// Each op is screened by the enabled filters, then validated, then executed.
/// Sponsored ops have their gas reimbursed to the bundler by the paymaster.
BundleReceipt bundler_submit(ChainState& state, EntryPoint& ep,
    const std::vector<UserOperation>& ops, const guard::PipelineConfig& config,
    const Address& bundler);
}  // namespace delegsim
