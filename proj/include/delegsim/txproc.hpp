// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/exec.hpp>
#include <delegsim/guard.hpp>
#include <delegsim/signing.hpp>
#include <optional>
#include <vector>

namespace delegsim
{
/// Type-4 set-code transaction.
struct SetCodeTransaction
{
    Address sender;
    uint64_t tx_nonce = 0;
    Address to;
    Amount value = 0;
    bytes data;
    uint64_t gas_limit = 100000;
    Amount max_fee = GasSchedule::gas_price;
    std::vector<AuthorizationTuple> auth_list;
    uint64_t tx_chain_id = 0;

    friend bool operator==(const SetCodeTransaction&, const SetCodeTransaction&) = default;
};

/// Ordinary message-call transaction.
struct CallTransaction
{
    Address sender;
    uint64_t tx_nonce = 0;
    Address to;
    Amount value = 0;
    bytes data;
    uint64_t gas_limit = 100000;
    Amount max_fee = GasSchedule::gas_price;
    uint64_t tx_chain_id = 0;

    friend bool operator==(const CallTransaction&, const CallTransaction&) = default;
};

/// Knobs for processing a set-code transaction.
struct TxOptions
{
    std::optional<guard::TuplePolicy> policy;
    /// Per-tuple scope extensions, parallel to auth_list. Missing entries mean none.
    std::vector<std::optional<guard::ScopedTupleExtension>> extensions;
    bool allow_empty_auth_list = false;
};

struct TupleValidation
{
    std::optional<Address> authority;
    std::optional<RejectReason> reason;

    [[nodiscard]] bool valid() const noexcept { return !reason; }
};

/// Protocol checks in order: chain, signature, nonce.
TupleValidation validate_tuple(const AuthorizationTuple& tuple, const ChainState& state);

/// Applies the authorization list, then runs the outer call. Delegation writes
/// persist even if the outer call reverts. Throws Errc::empty_auth_list and
/// Errc::insufficient_gas_funds before touching state.
Receipt process_set_code_tx(
    const SetCodeTransaction& tx, ChainState& state, const TxOptions& options = {});

/// Throws Errc::insufficient_gas_funds before touching state.
Receipt process_call_tx(const CallTransaction& tx, ChainState& state);

/// Assembles a set-code transaction using the sender's current nonce and the
/// state's chain id.
SetCodeTransaction build_auth_tx(const ChainState& state, std::vector<AuthorizationTuple> tuples,
    const Address& sender, const Address& to, Amount value = 0, bytes data = {},
    uint64_t gas_limit = 100000);

CallTransaction build_call_tx(const ChainState& state, const Address& sender, const Address& to,
    Amount value = 0, bytes data = {}, uint64_t gas_limit = 100000);

/// Nonce a fresh tuple signed by `authority` must carry to be valid when
/// submitted by `sender` in the next transaction.
uint64_t next_tuple_nonce(const ChainState& state, const Address& authority, const Address& sender);

/// 0x04 || rlp(fields), and its inverse.
bytes serialize_tx(const SetCodeTransaction& tx);
SetCodeTransaction parse_set_code_tx(bytes_view raw);
bytes serialize_tx(const CallTransaction& tx);

Hash32 tx_hash(const SetCodeTransaction& tx);
Hash32 tx_hash(const CallTransaction& tx);

/// Gas for the intrinsic part of a transaction with `tuples` authorizations.
constexpr uint64_t intrinsic_gas(size_t tuples) noexcept
{
    return GasSchedule::tx_base + GasSchedule::per_tuple * tuples;
}
}  // namespace delegsim
