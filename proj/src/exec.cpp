// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/exec.hpp>
#include <delegsim/guard.hpp>

namespace delegsim
{
namespace
{
const bytes transfer_selector = selector("transfer(address,uint256)");
const bytes balance_of_selector = selector("balanceOf(address)");
const bytes call_target_selector = selector("callTarget(address)");

bytes word(bytes_view value)
{
    bytes w(32 - value.size(), 0);
    w += value;
    return w;
}

bool has_selector(bytes_view data, const bytes& sel)
{
    return data.size() >= 4 && data.substr(0, 4) == sel;
}

/// Reads the n-th 32-byte argument word as an address. Upper 12 bytes must be zero.
std::optional<Address> arg_address(bytes_view data, size_t n)
{
    const auto off = 4 + 32 * n;
    if (data.size() < off + 32)
        return std::nullopt;
    const auto w = data.substr(off, 32);
    for (size_t i = 0; i < 12; ++i)
        if (w[i] != 0)
            return std::nullopt;
    return Address::from_view(w.substr(12));
}

std::optional<Amount> arg_amount(bytes_view data, size_t n)
{
    const auto off = 4 + 32 * n;
    if (data.size() < off + 32)
        return std::nullopt;
    const auto w = data.substr(off, 32);
    for (size_t i = 0; i < 16; ++i)
        if (w[i] != 0)
            return std::nullopt;
    Amount v = 0;
    for (size_t i = 16; i < 32; ++i)
        v = (v << 8) | w[i];
    return v;
}

ExecResult revert(std::string reason)
{
    return {ExecStatus::reverted, std::move(reason)};
}

CallFrame sub_frame(const CallFrame& parent, const Address& self, const Address& callee,
    Amount value, bytes data)
{
    return {self, callee, value, std::move(data), parent.depth + 1};
}

class Interpreter
{
public:
    Interpreter(ChainState& state, const CallFrame& frame, ExecContext& ctx,
        const Address& code_address)
      : state_{state}, frame_{frame}, ctx_{ctx}, code_address_{code_address}
    {}

    ExecResult operator()(const MaliciousDrainer& d)
    {
        const auto& self = frame_.callee;
        ctx_.trace.push_back({TraceKind::fallback_executed, frame_.caller, self, frame_.value,
            std::nullopt, code_address_, frame_.depth, {}});

        for (const auto& token : d.watched_tokens)
        {
            if (!state_.tokens().contains(token))
                continue;
            const auto held = erc20_balance_of(state_, token, self);
            if (held == 0)
                continue;
            const auto r = dispatch_call(state_,
                sub_frame(frame_, self, token, 0, encode_erc20_transfer(d.sink, held)), ctx_);
            if (r.status == ExecStatus::depth_exceeded)
                return r;
        }

        if (const auto eth = state_.balance(self); eth > 0)
        {
            const auto r = dispatch_call(state_, sub_frame(frame_, self, d.sink, eth, {}), ctx_);
            if (r.status == ExecStatus::depth_exceeded)
                return r;
        }
        return {};
    }

    ExecResult operator()(const MockErc20&)
    {
        const auto& data = frame_.data;
        if (has_selector(data, transfer_selector))
        {
            const auto to = arg_address(data, 0);
            const auto amount = arg_amount(data, 1);
            if (!to || !amount)
                return revert("malformed transfer arguments");
            try
            {
                erc20_transfer(state_, frame_.callee, frame_.caller, *to, *amount);
            }
            catch (const Error& e)
            {
                return revert(e.what());
            }
            ctx_.trace.push_back({TraceKind::token_transfer, frame_.caller, *to, *amount,
                frame_.callee, std::nullopt, frame_.depth, {}});
            return {};
        }
        if (has_selector(data, balance_of_selector))
            return {};
        if (data.empty() && frame_.value == 0)
            return {};
        return revert("token: unsupported call");
    }

    ExecResult operator()(const DummyProtocol&)
    {
        const auto& data = frame_.data;
        if (data.empty())
            return {};
        if (!has_selector(data, call_target_selector))
            return revert("protocol: unsupported call");
        const auto target = arg_address(data, 0);
        if (!target)
            return revert("malformed callTarget argument");
        return dispatch_call(
            state_, sub_frame(frame_, frame_.callee, *target, frame_.value, {}), ctx_);
    }

    ExecResult operator()(const RevertingStub&) { return revert("stub reverts"); }

    ExecResult operator()(const EmptyBehavior&) { return {}; }

private:
    ChainState& state_;
    const CallFrame& frame_;
    ExecContext& ctx_;
    Address code_address_;
};

ExecResult run_code(ChainState& state, const CallFrame& frame, ExecContext& ctx)
{
    const ContractBehavior* behavior = nullptr;
    Address code_address = frame.callee;

    if (const auto delegate = is_delegated(state, frame.callee))
    {
        if (const auto v = guard::enforce_scope(state, frame.callee, frame); !v)
        {
            ctx.trace.push_back({TraceKind::scope_denied, frame.caller, frame.callee, 0,
                std::nullopt, delegate, frame.depth,
                std::string{to_string(*v.reason)} + ": " + v.detail});
            return {};
        }
        ctx.trace.push_back({TraceKind::delegation_resolved, frame.caller, frame.callee, 0,
            std::nullopt, delegate, frame.depth, {}});
        if (is_precompile(*delegate))
            return {};
        behavior = state.behavior_at(*delegate);
        code_address = *delegate;
    }
    else
    {
        behavior = state.behavior_at(frame.callee);
    }

    if (behavior == nullptr)
        return {};
    // Copy: a nested register_behavior could invalidate the reference.
    const auto b = *behavior;
    return std::visit(Interpreter{state, frame, ctx, code_address}, b);
}
}  // namespace

bytes behavior_marker(const ContractBehavior& behavior)
{
    const std::string tag = "delegsim.behavior." + std::string{behavior_kind(behavior)};
    const auto h = keccak256({reinterpret_cast<const uint8_t*>(tag.data()), tag.size()});
    return bytes{h.view()};
}

void register_behavior(ChainState& state, const Address& addr, ContractBehavior behavior)
{
    if (!state.code(addr).empty() || state.behavior_at(addr) != nullptr)
        throw Error{Errc::address_occupied, "address already has code: " + addr.hex()};
    state.set_code(addr, behavior_marker(behavior));
    if (std::holds_alternative<MockErc20>(behavior) && !state.tokens().contains(addr))
        state.tokens().emplace(addr, TokenLedger{});
    state.set_behavior(addr, std::move(behavior));
}

void register_token(ChainState& state, const Address& token, std::string symbol)
{
    register_behavior(state, token, MockErc20{});
    state.tokens()[token].symbol = std::move(symbol);
}

bool is_precompile(const Address& addr) noexcept
{
    for (size_t i = 0; i < 19; ++i)
        if (addr.bytes[i] != 0)
            return false;
    return addr.bytes[19] >= 0x01 && addr.bytes[19] <= 0x09;
}

std::string_view to_string(ExecStatus status) noexcept
{
    switch (status)
    {
    case ExecStatus::success:
        return "Success";
    case ExecStatus::reverted:
        return "Reverted";
    case ExecStatus::depth_exceeded:
        return "DepthExceeded";
    }
    return "Unknown";
}

ExecResult dispatch_call(ChainState& state, const CallFrame& frame, ExecContext& ctx)
{
    if (frame.depth > max_call_depth)
    {
        ctx.trace.push_back({TraceKind::revert, frame.caller, frame.callee, frame.value,
            std::nullopt, std::nullopt, frame.depth, "DepthExceeded"});
        return {ExecStatus::depth_exceeded, "call depth limit exceeded"};
    }
    if (frame.depth >= 1)
        ++ctx.internal_calls;

    const auto first_event = ctx.trace.size();
    ctx.trace.push_back({TraceKind::call, frame.caller, frame.callee, frame.value, std::nullopt,
        std::nullopt, frame.depth, frame.data.size() >= 4 ? hex0x(frame.data.substr(0, 4)) : ""});

    auto cp = state.checkpoint();

    if (frame.value > 0)
    {
        if (state.balance(frame.caller) < frame.value)
        {
            ctx.trace.push_back({TraceKind::revert, frame.caller, frame.callee, frame.value,
                std::nullopt, std::nullopt, frame.depth, "insufficient balance"});
            return revert("insufficient balance for value transfer");
        }
        transfer_value(state, frame.caller, frame.callee, frame.value);
        ctx.trace.push_back({TraceKind::value_transfer, frame.caller, frame.callee, frame.value,
            std::nullopt, std::nullopt, frame.depth, {}});
    }

    auto result = run_code(state, frame, ctx);
    if (!result.ok())
    {
        state.restore(std::move(cp));
        mark_reverted(ctx.trace, first_event);
        ctx.trace.push_back({TraceKind::revert, frame.caller, frame.callee, frame.value,
            std::nullopt, std::nullopt, frame.depth, result.reason});
    }
    return result;
}

Amount erc20_balance_of(const ChainState& state, const Address& token, const Address& holder)
{
    const auto it = state.tokens().find(token);
    if (it == state.tokens().end())
        throw Error{Errc::unknown_token, "unknown token " + token.hex()};
    const auto b = it->second.balances.find(holder);
    return b == it->second.balances.end() ? 0 : b->second;
}

void erc20_mint(ChainState& state, const Address& token, const Address& to, Amount amount)
{
    const auto it = state.tokens().find(token);
    if (it == state.tokens().end())
        throw Error{Errc::unknown_token, "unknown token " + token.hex()};
    it->second.balances[to] += amount;
    it->second.total_supply += amount;
}

void erc20_transfer(ChainState& state, const Address& token, const Address& from,
    const Address& to, Amount amount)
{
    const auto it = state.tokens().find(token);
    if (it == state.tokens().end())
        throw Error{Errc::unknown_token, "unknown token " + token.hex()};
    auto& balances = it->second.balances;
    const auto held = balances.contains(from) ? balances[from] : Amount{0};
    if (held < amount)
        throw Error{Errc::insufficient_token_balance, "insufficient token balance in " +
                                                          from.hex() + ": has " +
                                                          to_decimal(held) + ", needs " +
                                                          to_decimal(amount)};
    balances[from] = held - amount;
    balances[to] += amount;
}

bytes selector(std::string_view signature)
{
    const auto h = keccak256({reinterpret_cast<const uint8_t*>(signature.data()), signature.size()});
    return bytes{h.view().substr(0, 4)};
}

bytes encode_erc20_transfer(const Address& to, Amount amount)
{
    auto out = transfer_selector;
    out += word(to.view());
    out += word(to_minimal_be(amount));
    return out;
}

bytes encode_call_target(const Address& target)
{
    auto out = call_target_selector;
    out += word(target.view());
    return out;
}

ExecResult protocol_call_target(ChainState& state, const Address& protocol,
    const Address& target, Amount value, const Address& caller, ExecContext& ctx)
{
    return dispatch_call(state, {caller, protocol, value, encode_call_target(target), 0}, ctx);
}
}  // namespace delegsim
