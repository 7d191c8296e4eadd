// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/codec.hpp>
#include <delegsim/trace.hpp>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

namespace delegsim
{
/// Flat gas schedule. Every internal message call costs the same.
struct GasSchedule
{
    static constexpr uint64_t tx_base = 21000;
    static constexpr uint64_t per_tuple = 12500;
    static constexpr uint64_t per_call = 5000;
    static constexpr Amount gas_price = 10 * one_gwei;
};

/// The 0xef0100 prefix of a delegation indicator.
inline constexpr std::array<uint8_t, 3> delegation_prefix{0xef, 0x01, 0x00};
inline constexpr size_t delegation_code_size = 23;

bytes make_delegation_code(const Address& target);

/// The delegate if `code` is exactly a 23-byte delegation indicator.
std::optional<Address> parse_delegation(bytes_view code) noexcept;

struct Account
{
    uint64_t nonce = 0;
    Amount balance = 0;
    bytes code;

    friend bool operator==(const Account&, const Account&) = default;
};

struct TokenLedger
{
    std::string symbol;
    Amount total_supply = 0;
    std::map<Address, Amount> balances;

    friend bool operator==(const TokenLedger&, const TokenLedger&) = default;
};

/// Sweeps every watched token and then all ETH of the executing account to `sink`.
struct MaliciousDrainer
{
    Address sink;
    std::vector<Address> watched_tokens;

    friend bool operator==(const MaliciousDrainer&, const MaliciousDrainer&) = default;
};

/// ERC-20 with transfer(address,uint256) and balanceOf(address).
struct MockErc20
{
    friend bool operator==(const MockErc20&, const MockErc20&) = default;
};

/// Forwards its received value to the account named in callTarget(address).
struct DummyProtocol
{
    friend bool operator==(const DummyProtocol&, const DummyProtocol&) = default;
};

struct RevertingStub
{
    friend bool operator==(const RevertingStub&, const RevertingStub&) = default;
};

/// Accepts any call and does nothing.
struct EmptyBehavior
{
    friend bool operator==(const EmptyBehavior&, const EmptyBehavior&) = default;
};

using ContractBehavior =
    std::variant<MaliciousDrainer, MockErc20, DummyProtocol, RevertingStub, EmptyBehavior>;

std::string_view behavior_kind(const ContractBehavior& behavior) noexcept;

/// Constraints attached to a delegation at install time and enforced at dispatch.
struct ScopeRecord
{
    Address target;
    uint64_t installed_at = 0;
    std::optional<uint64_t> expiry_height;
    bool single_use = false;
    bool foreground_only = false;
    bool consumed = false;

    friend bool operator==(const ScopeRecord&, const ScopeRecord&) = default;
};

struct CodeInfo
{
    size_t size = 0;
    Hash32 hash;
};

class ChainState
{
public:
    /// Restorable copy of every mutable part of the world state except the
    /// append-only receipt log and the burned-gas counter.
    struct Checkpoint
    {
        std::map<Address, Account> accounts;
        std::map<Address, TokenLedger> tokens;
        std::map<Address, ScopeRecord> scopes;
    };

    explicit ChainState(uint64_t chain_id, uint8_t auth_magic = default_auth_magic)
      : chain_id_{chain_id}, auth_magic_{auth_magic}
    {}

    [[nodiscard]] uint64_t chain_id() const noexcept { return chain_id_; }
    [[nodiscard]] uint8_t auth_magic() const noexcept { return auth_magic_; }

    [[nodiscard]] uint64_t height() const noexcept { return height_; }
    void advance_height(uint64_t blocks = 1) noexcept { height_ += blocks; }

    [[nodiscard]] bool exists(const Address& addr) const { return accounts_.contains(addr); }
    /// The account, or an empty one if it was never touched.
    [[nodiscard]] const Account& account(const Address& addr) const;
    [[nodiscard]] const std::map<Address, Account>& accounts() const noexcept { return accounts_; }

    [[nodiscard]] Amount balance(const Address& addr) const { return account(addr).balance; }
    [[nodiscard]] uint64_t nonce(const Address& addr) const { return account(addr).nonce; }
    [[nodiscard]] const bytes& code(const Address& addr) const { return account(addr).code; }

    /// Nonces only move forward.
    void bump_nonce(const Address& addr);
    void credit(const Address& addr, Amount amount);
    /// Throws Errc::insufficient_balance.
    void debit(const Address& addr, Amount amount);
    void set_code(const Address& addr, bytes code);

    /// Genesis allocation. Mints ETH outside the conservation accounting.
    void fund(const Address& addr, Amount amount);

    [[nodiscard]] Amount burned() const noexcept { return burned_; }
    /// Debits `amount` from `payer` and adds it to the burned counter.
    void burn(const Address& payer, Amount amount);
    /// Sum of all balances plus burned gas. Constant across transactions.
    [[nodiscard]] Amount total_eth() const;

    [[nodiscard]] std::map<Address, TokenLedger>& tokens() noexcept { return tokens_; }
    [[nodiscard]] const std::map<Address, TokenLedger>& tokens() const noexcept { return tokens_; }

    [[nodiscard]] const ContractBehavior* behavior_at(const Address& addr) const;
    [[nodiscard]] const std::map<Address, ContractBehavior>& behaviors() const noexcept
    {
        return behaviors_;
    }
    void set_behavior(const Address& addr, ContractBehavior behavior);

    [[nodiscard]] std::map<Address, ScopeRecord>& scopes() noexcept { return scopes_; }
    [[nodiscard]] const std::map<Address, ScopeRecord>& scopes() const noexcept { return scopes_; }

    [[nodiscard]] const std::vector<Receipt>& receipts() const noexcept { return receipts_; }
    void append_receipt(Receipt receipt) { receipts_.push_back(std::move(receipt)); }

    [[nodiscard]] Checkpoint checkpoint() const { return {accounts_, tokens_, scopes_}; }
    void restore(Checkpoint cp);

    /// Raw setters for deserialization.
    void load_height(uint64_t h) noexcept { height_ = h; }
    void load_account(const Address& addr, Account a) { accounts_[addr] = std::move(a); }
    void load_burned(Amount b) noexcept { burned_ = b; }

private:
    Account& mut(const Address& addr) { return accounts_[addr]; }

    uint64_t chain_id_;
    uint8_t auth_magic_;
    uint64_t height_ = 0;
    Amount burned_ = 0;
    std::map<Address, Account> accounts_;
    std::map<Address, TokenLedger> tokens_;
    std::map<Address, ContractBehavior> behaviors_;
    std::map<Address, ScopeRecord> scopes_;
    std::vector<Receipt> receipts_;
};

/// Sets code(authority) to the delegation indicator for `target`.
void write_delegation(ChainState& state, const Address& authority, const Address& target);

/// Restores the empty code hash and drops any scope record.
void clear_delegation(ChainState& state, const Address& authority);

std::optional<Address> is_delegated(const ChainState& state, const Address& addr);

/// Every (authority, delegate) pair currently installed.
std::set<std::pair<Address, Address>> active_delegations(const ChainState& state);

/// EXTCODESIZE / EXTCODEHASH as seen on the authority itself.
CodeInfo code_introspection(const ChainState& state, const Address& addr);

/// Throws Errc::insufficient_balance without touching state.
void transfer_value(ChainState& state, const Address& from, const Address& to, Amount amount);

/// Sum over every holder of every ledger.
Amount total_tokens(const ChainState& state, const Address& token);
}  // namespace delegsim
