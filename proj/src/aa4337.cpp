// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/aa4337.hpp>
#include <delegsim/txproc.hpp>

namespace delegsim
{
namespace
{
const bytes validate_selector = selector("validateUserOp((address,uint256,bytes),bytes32,uint256)");
const bytes handle_ops_selector = selector("handleOps((address,uint256,bytes)[],address)");

TraceEvent phase(const Address& from, const Address& to, std::string name)
{
    return {TraceKind::phase, from, to, 0, std::nullopt, std::nullopt, 1, std::move(name)};
}

rlp::Item op_rlp(const UserOperation& op)
{
    return rlp::Item::List{bytes{op.sender.view()}, rlp::uint_string(op.op_nonce),
        bytes{op.call_target.view()}, to_minimal_be(op.call_value), op.call_data,
        op.paymaster ? bytes{op.paymaster->view()} : bytes{}, rlp::uint_string(op.gas_budget)};
}

Hash32 bundle_hash(const ChainState& state, const EntryPoint& ep,
    const std::vector<UserOperation>& ops, const Address& bundler)
{
    rlp::Item::List list;
    for (const auto& op : ops)
        list.push_back(op_rlp(op));
    const rlp::Item item{rlp::Item::List{bytes{bundler.view()},
        rlp::uint_string(state.nonce(bundler)), bytes{ep.address.view()}, list,
        rlp::uint_string(state.chain_id())}};
    return keccak256(rlp::encode(item));
}
}  // namespace

const Address& default_entrypoint_address()
{
    static const Address a = Address::from_hex("0x5FF137D4b0FDCD49DcA30c7CF57E578a026d2789");
    return a;
}

EntryPoint deploy_entrypoint(ChainState& state, const Address& addr)
{
    register_behavior(state, addr, EmptyBehavior{});
    return EntryPoint{addr, 0, {}};
}

std::string_view to_string(OpStatus status) noexcept
{
    switch (status)
    {
    case OpStatus::included:
        return "Included";
    case OpStatus::rejected_by_bundler:
        return "RejectedByBundler";
    case OpStatus::rejected_by_paymaster:
        return "RejectedByPaymaster";
    case OpStatus::rejected_by_entrypoint:
        return "RejectedByEntryPoint";
    case OpStatus::op_nonce_mismatch:
        return "OpNonceMismatch";
    case OpStatus::paymaster_unfunded:
        return "PaymasterUnfunded";
    case OpStatus::validation_failed:
        return "ValidationFailed";
    case OpStatus::execution_reverted:
        return "ExecutionReverted";
    case OpStatus::out_of_gas:
        return "OutOfGas";
    }
    return "Unknown";
}

ExecResult validate_user_op(
    ChainState& state, const EntryPoint& ep, const UserOperation& op, ExecContext& ctx)
{
    return dispatch_call(state, {ep.address, op.sender, 0, validate_selector, 1}, ctx);
}

ExecResult execute_user_op(
    ChainState& state, const EntryPoint& ep, const UserOperation& op, ExecContext& ctx)
{
    return dispatch_call(
        state, {ep.address, op.call_target, op.call_value, op.call_data, 1}, ctx);
}

BundleReceipt bundler_submit(ChainState& state, EntryPoint& ep,
    const std::vector<UserOperation>& ops, const guard::PipelineConfig& config,
    const Address& bundler)
{
    uint64_t budget = GasSchedule::tx_base;
    for (const auto& op : ops)
        budget += op.gas_budget;
    const Amount reserve = Amount{budget} * GasSchedule::gas_price;
    if (state.balance(bundler) < reserve)
        throw Error{Errc::insufficient_gas_funds, "bundler cannot cover the bundle gas budget"};

    BundleReceipt bundle;
    bundle.bundle_hash = bundle_hash(state, ep, ops, bundler);
    bundle.bundler = bundler;
    bundle.height = state.height();
    // Held for the whole bundle so a bundler drained mid-bundle can still pay.
    state.debit(bundler, reserve);
    state.bump_nonce(bundler);

    uint64_t total_gas = GasSchedule::tx_base;
    for (size_t i = 0; i < ops.size(); ++i)
    {
        const auto& op = ops[i];
        OpReceipt r;
        r.index = i;
        r.sender = op.sender;
        r.sponsored = op.paymaster.has_value();

        const auto screen = [&](bool enabled, const guard::Verdict& v, OpStatus status) {
            if (!enabled || v.accepted)
                return false;
            r.status = status;
            r.detail = std::string{guard::to_string(*v.reason)} + ": " + v.detail;
            return true;
        };
        if (screen(config.bundler_filter_enabled, guard::bundler_filter(op, state),
                OpStatus::rejected_by_bundler) ||
            screen(config.paymaster_filter_enabled, guard::paymaster_filter(op, state),
                OpStatus::rejected_by_paymaster) ||
            screen(config.entrypoint_static_check_enabled,
                guard::entrypoint_static_check(op, state, config.allowlist),
                OpStatus::rejected_by_entrypoint))
        {
            bundle.ops.push_back(std::move(r));
            continue;
        }
        if (op.op_nonce != ep.op_nonce(op.sender))
        {
            r.status = OpStatus::op_nonce_mismatch;
            r.detail = "expected op nonce " + std::to_string(ep.op_nonce(op.sender));
            bundle.ops.push_back(std::move(r));
            continue;
        }
        if (op.paymaster &&
            state.balance(*op.paymaster) < Amount{op.gas_budget} * GasSchedule::gas_price)
        {
            r.status = OpStatus::paymaster_unfunded;
            bundle.ops.push_back(std::move(r));
            continue;
        }

        auto cp = state.checkpoint();
        ExecContext ctx;
        ctx.trace.push_back(phase(ep.address, op.sender, "validation"));
        const auto v = validate_user_op(state, ep, op, ctx);
        if (!v.ok())
        {
            r.status = OpStatus::validation_failed;
            r.detail = v.reason;
        }
        else
        {
            ++ep.op_nonces[op.sender];
            ++ep.processed_ops;
            ctx.trace.push_back(phase(ep.address, op.sender, "execution"));
            const auto e = execute_user_op(state, ep, op, ctx);
            if (!e.ok())
            {
                r.status = OpStatus::execution_reverted;
                r.detail = e.reason;
            }
        }

        uint64_t op_gas = GasSchedule::per_call * ctx.internal_calls;
        if (op_gas > op.gas_budget)
        {
            state.restore(std::move(cp));
            mark_reverted(ctx.trace, 0);
            if (v.ok())
            {
                --ep.op_nonces[op.sender];
                --ep.processed_ops;
            }
            r.status = OpStatus::out_of_gas;
            r.detail = "op exceeded its gas budget";
            op_gas = op.gas_budget;
        }
        if (op.paymaster)
            transfer_value(state, *op.paymaster, bundler, Amount{op_gas} * GasSchedule::gas_price);

        r.gas_used = op_gas;
        r.trace = std::move(ctx.trace);
        total_gas += op_gas;
        bundle.ops.push_back(std::move(r));
    }

    bundle.gas_used = total_gas;
    bundle.gas_cost = Amount{total_gas} * GasSchedule::gas_price;
    state.credit(bundler, reserve);
    state.burn(bundler, bundle.gas_cost);

    Receipt receipt;
    receipt.tx_hash = bundle.bundle_hash;
    receipt.sender = bundler;
    receipt.gas_used = bundle.gas_used;
    receipt.gas_cost = bundle.gas_cost;
    receipt.height = bundle.height;
    receipt.trace.push_back({TraceKind::call, bundler, ep.address, 0, std::nullopt,
        std::nullopt, 0, hex0x(handle_ops_selector)});
    bool any_included = false;
    for (const auto& r : bundle.ops)
    {
        any_included = any_included || r.status == OpStatus::included;
        receipt.trace.insert(receipt.trace.end(), r.trace.begin(), r.trace.end());
    }
    receipt.success = any_included;
    state.append_receipt(std::move(receipt));
    state.advance_height();
    return bundle;
}
}  // namespace delegsim
