// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/state.hpp>
#include <algorithm>
#include <limits>

namespace delegsim
{
bytes make_delegation_code(const Address& target)
{
    bytes code{delegation_prefix.begin(), delegation_prefix.end()};
    code += target.view();
    return code;
}

std::optional<Address> parse_delegation(bytes_view code) noexcept
{
    if (code.size() != delegation_code_size ||
        !std::equal(delegation_prefix.begin(), delegation_prefix.end(), code.begin()))
        return std::nullopt;
    Address a;
    std::copy(code.begin() + 3, code.end(), a.bytes.begin());
    return a;
}

std::string_view behavior_kind(const ContractBehavior& behavior) noexcept
{
    struct Visitor
    {
        std::string_view operator()(const MaliciousDrainer&) const { return "MaliciousDrainer"; }
        std::string_view operator()(const MockErc20&) const { return "MockErc20"; }
        std::string_view operator()(const DummyProtocol&) const { return "DummyProtocol"; }
        std::string_view operator()(const RevertingStub&) const { return "RevertingStub"; }
        std::string_view operator()(const EmptyBehavior&) const { return "EmptyBehavior"; }
    };
    return std::visit(Visitor{}, behavior);
}

const Account& ChainState::account(const Address& addr) const
{
    static const Account empty;
    const auto it = accounts_.find(addr);
    return it == accounts_.end() ? empty : it->second;
}

void ChainState::bump_nonce(const Address& addr)
{
    auto& a = mut(addr);
    if (a.nonce == std::numeric_limits<uint64_t>::max())
        throw Error{Errc::amount_overflow, "nonce overflow for " + addr.hex()};
    ++a.nonce;
}

void ChainState::credit(const Address& addr, Amount amount)
{
    auto& a = mut(addr);
    if (a.balance > std::numeric_limits<Amount>::max() - amount)
        throw Error{Errc::amount_overflow, "balance overflow for " + addr.hex()};
    a.balance += amount;
}

void ChainState::debit(const Address& addr, Amount amount)
{
    if (balance(addr) < amount)
        throw Error{Errc::insufficient_balance, "insufficient balance in " + addr.hex() +
                                                    ": has " + to_decimal(balance(addr)) +
                                                    ", needs " + to_decimal(amount)};
    mut(addr).balance -= amount;
}

void ChainState::set_code(const Address& addr, bytes code)
{
    mut(addr).code = std::move(code);
}

void ChainState::fund(const Address& addr, Amount amount)
{
    credit(addr, amount);
}

void ChainState::burn(const Address& payer, Amount amount)
{
    debit(payer, amount);
    burned_ += amount;
}

Amount ChainState::total_eth() const
{
    Amount total = burned_;
    for (const auto& [_, a] : accounts_)
        total += a.balance;
    return total;
}

const ContractBehavior* ChainState::behavior_at(const Address& addr) const
{
    const auto it = behaviors_.find(addr);
    return it == behaviors_.end() ? nullptr : &it->second;
}

void ChainState::set_behavior(const Address& addr, ContractBehavior behavior)
{
    behaviors_.insert_or_assign(addr, std::move(behavior));
}

void ChainState::restore(Checkpoint cp)
{
    accounts_ = std::move(cp.accounts);
    tokens_ = std::move(cp.tokens);
    scopes_ = std::move(cp.scopes);
}

void write_delegation(ChainState& state, const Address& authority, const Address& target)
{
    state.set_code(authority, make_delegation_code(target));
}

void clear_delegation(ChainState& state, const Address& authority)
{
    state.set_code(authority, {});
    state.scopes().erase(authority);
}

std::optional<Address> is_delegated(const ChainState& state, const Address& addr)
{
    return parse_delegation(state.code(addr));
}

std::set<std::pair<Address, Address>> active_delegations(const ChainState& state)
{
    std::set<std::pair<Address, Address>> out;
    for (const auto& [addr, account] : state.accounts())
        if (const auto target = parse_delegation(account.code))
            out.emplace(addr, *target);
    return out;
}

CodeInfo code_introspection(const ChainState& state, const Address& addr)
{
    const auto& code = state.code(addr);
    return {code.size(), code.empty() ? empty_code_hash : keccak256(code)};
}

void transfer_value(ChainState& state, const Address& from, const Address& to, Amount amount)
{
    state.debit(from, amount);
    state.credit(to, amount);
}

Amount total_tokens(const ChainState& state, const Address& token)
{
    const auto it = state.tokens().find(token);
    if (it == state.tokens().end())
        return 0;
    Amount total = 0;
    for (const auto& [_, b] : it->second.balances)
        total += b;
    return total;
}
}  // namespace delegsim
