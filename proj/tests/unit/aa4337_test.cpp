// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"
#include <delegsim/harness.hpp>
#include <gtest/gtest.h>
#include <algorithm>

using namespace delegsim;
using namespace delegsim::test;

namespace
{
class Pipeline4337 : public ::testing::Test
{
protected:
    Env env = setup_environment(EnvConfig{});
    ChainState& s = env.state;
    Address victim = env.actors.victim();
    Address relayer = env.actors.relayer();

    UserOperation op_for(const Address& sender, const Address& target, Amount value = 0,
        bool sponsored = true)
    {
        UserOperation op;
        op.sender = sender;
        op.op_nonce = env.entrypoint.op_nonce(sender);
        op.call_target = target;
        op.call_value = value;
        if (sponsored)
            op.paymaster = env.actors.paymaster;
        return op;
    }

    BundleReceipt submit(const UserOperation& op, const guard::PipelineConfig& config = {})
    {
        return bundler_submit(s, env.entrypoint, {op}, config, relayer);
    }
};

size_t index_of(const std::vector<TraceEvent>& trace, TraceKind kind, const std::string& note = {})
{
    for (size_t i = 0; i < trace.size(); ++i)
        if (trace[i].kind == kind && (note.empty() || trace[i].note == note))
            return i;
    return trace.size();
}
}  // namespace

TEST(aa4337, entrypoint_address)
{
    EXPECT_EQ(default_entrypoint_address().hex(), "0x5ff137d4b0fdcd49dca30c7cf57e578a026d2789");
}

TEST_F(Pipeline4337, undelegated_op_is_included)
{
    const auto bundle = submit(op_for(relayer, victim, one_ether / 100));
    ASSERT_EQ(bundle.ops.size(), 1u);
    EXPECT_EQ(bundle.ops[0].status, OpStatus::included);
    EXPECT_EQ(s.balance(victim), 10000 * one_ether + one_ether / 100);
    EXPECT_EQ(env.entrypoint.op_nonce(relayer), 1u);
    EXPECT_EQ(env.entrypoint.processed_ops, 1u);
    EXPECT_EQ(bundle.ops[0].gas_used, 2 * GasSchedule::per_call);
    EXPECT_EQ(bundle.gas_used, GasSchedule::tx_base + 2 * GasSchedule::per_call);
    EXPECT_EQ(s.receipts().size(), 1u);
    EXPECT_TRUE(s.receipts().back().success);
}

TEST_F(Pipeline4337, paymaster_reimburses_bundler)
{
    const auto relayer_before = s.balance(relayer);
    const auto paymaster_before = s.balance(env.actors.paymaster);
    const auto bundle = submit(op_for(relayer, victim));
    const auto op_cost = Amount{bundle.ops[0].gas_used} * GasSchedule::gas_price;
    EXPECT_EQ(s.balance(env.actors.paymaster), paymaster_before - op_cost);
    EXPECT_EQ(s.balance(relayer), relayer_before - bundle.gas_cost + op_cost);
}

TEST_F(Pipeline4337, op_nonce_mismatch)
{
    auto op = op_for(relayer, victim);
    op.op_nonce = 5;
    const auto bundle = submit(op);
    EXPECT_EQ(bundle.ops[0].status, OpStatus::op_nonce_mismatch);
    EXPECT_EQ(env.entrypoint.op_nonce(relayer), 0u);
    EXPECT_FALSE(s.receipts().back().success);
}

TEST_F(Pipeline4337, unfunded_paymaster)
{
    const auto broke = Address::from_uint(0xb0b);
    auto op = op_for(relayer, victim);
    op.paymaster = broke;
    EXPECT_EQ(submit(op).ops[0].status, OpStatus::paymaster_unfunded);
}

TEST_F(Pipeline4337, validation_phase_runs_delegate)
{
    run_phase1(env);
    signing_audit::reset();
    const auto bundle = submit(op_for(victim, victim));
    const auto& trace = bundle.ops[0].trace;
    const auto validation = index_of(trace, TraceKind::phase, "validation");
    const auto execution = index_of(trace, TraceKind::phase, "execution");
    const auto fallback = index_of(trace, TraceKind::fallback_executed);
    ASSERT_LT(validation, trace.size());
    ASSERT_LT(execution, trace.size());
    EXPECT_LT(validation, fallback);
    EXPECT_LT(fallback, execution);
    EXPECT_EQ(s.balance(victim), 0);
    EXPECT_EQ(erc20_balance_of(s, env.actors.token, victim), 0);
    EXPECT_EQ(signing_audit::count(victim), 0u);
}

TEST_F(Pipeline4337, bundler_filter_never_reaches_validation)
{
    run_phase1(env);
    guard::PipelineConfig config;
    config.bundler_filter_enabled = true;
    for (const auto& op : {op_for(victim, relayer), op_for(relayer, victim)})
    {
        const auto bundle = submit(op, config);
        EXPECT_EQ(bundle.ops[0].status, OpStatus::rejected_by_bundler);
        EXPECT_TRUE(bundle.ops[0].trace.empty());
    }
    EXPECT_EQ(s.balance(victim), 10000 * one_ether - 335000 * one_gwei);
}

TEST_F(Pipeline4337, paymaster_filter_only_affects_sponsored_ops)
{
    run_phase1(env);
    guard::PipelineConfig config;
    config.paymaster_filter_enabled = true;
    EXPECT_EQ(submit(op_for(victim, victim), config).ops[0].status, OpStatus::rejected_by_paymaster);
    EXPECT_EQ(submit(op_for(victim, victim, 0, false), config).ops[0].status, OpStatus::included);
}

TEST_F(Pipeline4337, entrypoint_static_check_with_allowlist)
{
    run_phase1(env);
    guard::PipelineConfig config;
    config.entrypoint_static_check_enabled = true;
    EXPECT_EQ(submit(op_for(victim, relayer), config).ops[0].status,
        OpStatus::rejected_by_entrypoint);
    config.allowlist.push_back(env.actors.delegate);
    EXPECT_EQ(submit(op_for(victim, relayer), config).ops[0].status, OpStatus::included);
}

TEST_F(Pipeline4337, filters_do_not_block_undelegated_ops)
{
    run_phase1(env);
    const auto all = guard::preset("all").pipeline;
    const auto bundle = submit(op_for(relayer, env.actors.attacker(), 1), all);
    EXPECT_EQ(bundle.ops[0].status, OpStatus::included);
}

TEST_F(Pipeline4337, reverting_execution)
{
    const auto stub = Address::from_uint(0x5eed);
    register_behavior(s, stub, RevertingStub{});
    const auto before = s.balance(env.entrypoint.address);
    const auto bundle = submit(op_for(relayer, stub, one_ether / 10));
    EXPECT_EQ(bundle.ops[0].status, OpStatus::execution_reverted);
    EXPECT_EQ(s.balance(env.entrypoint.address), before);
    EXPECT_EQ(env.entrypoint.op_nonce(relayer), 1u);
}

TEST_F(Pipeline4337, op_gas_budget_exhaustion)
{
    run_phase1(env);
    auto op = op_for(victim, victim);
    op.gas_budget = GasSchedule::per_call;
    const auto bundle = submit(op);
    EXPECT_EQ(bundle.ops[0].status, OpStatus::out_of_gas);
    EXPECT_EQ(bundle.ops[0].gas_used, op.gas_budget);
    EXPECT_EQ(s.balance(victim), 10000 * one_ether - 335000 * one_gwei);
    EXPECT_EQ(env.entrypoint.op_nonce(victim), 0u);
}

TEST_F(Pipeline4337, bundler_must_afford_budget)
{
    const auto poor = Address::from_uint(0x9000);
    s.fund(poor, 1);
    EXPECT_THROW(bundler_submit(s, env.entrypoint, {op_for(relayer, victim)}, {}, poor), Error);
}

TEST_F(Pipeline4337, multiple_ops_processed_in_order)
{
    auto first = op_for(relayer, victim, 1);
    auto second = first;
    second.op_nonce = 1;
    const auto bundle = bundler_submit(s, env.entrypoint, {first, second}, {}, relayer);
    ASSERT_EQ(bundle.ops.size(), 2u);
    EXPECT_EQ(bundle.ops[0].status, OpStatus::included);
    EXPECT_EQ(bundle.ops[1].status, OpStatus::included);
    EXPECT_EQ(env.entrypoint.op_nonce(relayer), 2u);
}
