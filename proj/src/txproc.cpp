// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/txproc.hpp>
#include <limits>

namespace delegsim
{
namespace
{
constexpr uint8_t set_code_tx_type = 0x04;
constexpr uint8_t call_tx_type = 0x02;

struct Envelope
{
    const Address& sender;
    const Address& to;
    Amount value;
    const bytes& data;
    uint64_t gas_limit;
    Amount max_fee;
    Hash32 hash;
};

[[noreturn]] void bad_tx(const std::string& why)
{
    throw Error{Errc::malformed_rlp, "malformed transaction: " + why};
}

Amount read_uint(const rlp::Item& item, size_t max_bytes, const char* field)
{
    if (item.is_list())
        bad_tx(std::string{field} + " is a list");
    const auto& s = item.str();
    if (s.size() > max_bytes)
        bad_tx(std::string{field} + " too large");
    if (!s.empty() && s[0] == 0)
        bad_tx(std::string{field} + " has a leading zero");
    Amount v = 0;
    for (const auto b : s)
        v = (v << 8) | b;
    return v;
}

Address read_address(const rlp::Item& item, const char* field)
{
    if (item.is_list() || item.str().size() != 20)
        bad_tx(std::string{field} + " must be a 20-byte string");
    return Address::from_view(item.str());
}

/// Reserves gas_limit * price up front and fails before any state change when
/// the sender cannot cover it plus the transferred value.
void check_affordable(const ChainState& state, const Envelope& tx, size_t tuples)
{
    if (tx.gas_limit < intrinsic_gas(tuples))
        throw Error{Errc::insufficient_gas_funds,
            "gas limit " + std::to_string(tx.gas_limit) + " below intrinsic cost " +
                std::to_string(intrinsic_gas(tuples))};
    if (tx.max_fee < GasSchedule::gas_price)
        throw Error{Errc::insufficient_gas_funds, "max fee below the gas price"};
    if (tx.max_fee > std::numeric_limits<Amount>::max() / tx.gas_limit)
        throw Error{Errc::insufficient_gas_funds, "max fee overflows"};
    const Amount need = Amount{tx.gas_limit} * tx.max_fee;
    if (need > std::numeric_limits<Amount>::max() - tx.value ||
        state.balance(tx.sender) < need + tx.value)
        throw Error{Errc::insufficient_gas_funds,
            "sender " + tx.sender.hex() + " cannot cover gas and value: has " +
                to_decimal(state.balance(tx.sender)) + ", needs " + to_decimal(need + tx.value)};
}

void log_tuple(Receipt& receipt, const Address& who, std::string note)
{
    receipt.trace.push_back(
        {TraceKind::phase, who, who, 0, std::nullopt, std::nullopt, 0, std::move(note)});
}

Receipt execute(ChainState& state, const Envelope& tx,
    const std::vector<AuthorizationTuple>* auth_list, const TxOptions& options)
{
    const auto tuples = auth_list ? auth_list->size() : 0;
    check_affordable(state, tx, tuples);

    Receipt receipt;
    receipt.tx_hash = tx.hash;
    receipt.sender = tx.sender;
    receipt.height = state.height();

    const Amount reserve = Amount{tx.gas_limit} * GasSchedule::gas_price;
    state.debit(tx.sender, reserve);
    state.bump_nonce(tx.sender);

    for (size_t i = 0; i < tuples; ++i)
    {
        const auto& tuple = (*auth_list)[i];
        const auto ext = i < options.extensions.size() ? options.extensions[i] : std::nullopt;

        TupleOutcome out;
        out.target = tuple.target;
        log_tuple(receipt, tx.sender, "tuple extracted: chainId=" + std::to_string(tuple.chain_id) +
                                          " target=" + tuple.target.hex() +
                                          " nonce=" + std::to_string(tuple.nonce));
        const auto v = validate_tuple(tuple, state);
        out.authority = v.authority;
        out.reject_reason = v.reason;
        if (v.authority)
            log_tuple(receipt, tx.sender, "signature verified: authority=" + v.authority->hex());

        if (!out.reject_reason && options.policy)
        {
            if (const auto verdict = guard::admit_tuple(tuple, ext, *options.policy); !verdict)
                out.reject_reason = *verdict.reason == guard::GuardReason::chain_agnostic_forbidden ?
                                        RejectReason::chain_agnostic_forbidden :
                                        RejectReason::scope_required;
        }

        if (!out.reject_reason)
        {
            const auto& authority = *out.authority;
            if (tuple.target.is_zero())
            {
                clear_delegation(state, authority);
            }
            else
            {
                write_delegation(state, authority, tuple.target);
                if (auto rec = guard::make_scope_record(tuple.target, state.height(), ext,
                        options.policy.value_or(guard::TuplePolicy{})))
                    state.scopes()[authority] = *rec;
                else
                    state.scopes().erase(authority);
            }
            state.bump_nonce(authority);
            out.accepted = true;
            log_tuple(receipt, authority,
                tuple.target.is_zero() ? "delegation cleared" :
                                         "delegation write persisted (revert-safe)");
        }
        else
        {
            log_tuple(receipt, tx.sender,
                "tuple rejected: " + std::string{to_string(*out.reject_reason)});
        }
        receipt.tuples_applied.push_back(out);
    }

    auto cp = state.checkpoint();
    ExecContext ctx;
    const auto result = dispatch_call(
        state, {tx.sender, tx.to, tx.value, tx.data, 0}, ctx);

    uint64_t gas_used = intrinsic_gas(tuples) + GasSchedule::per_call * ctx.internal_calls;
    receipt.success = result.ok();
    receipt.error = result.reason;
    if (gas_used > tx.gas_limit)
    {
        if (result.ok())
            state.restore(std::move(cp));
        mark_reverted(ctx.trace, 0);
        gas_used = tx.gas_limit;
        receipt.success = false;
        receipt.error = "out of gas";
    }

    receipt.gas_used = gas_used;
    receipt.gas_cost = Amount{gas_used} * GasSchedule::gas_price;
    // Release the reservation, then burn what was actually used.
    state.credit(tx.sender, reserve);
    state.burn(tx.sender, receipt.gas_cost);
    receipt.trace.insert(receipt.trace.end(), ctx.trace.begin(), ctx.trace.end());

    state.append_receipt(receipt);
    state.advance_height();
    return receipt;
}

rlp::Item tx_common_fields(const Address& sender, uint64_t nonce, const Address& to,
    Amount value, const bytes& data, uint64_t gas_limit, Amount max_fee)
{
    return rlp::Item::List{bytes{sender.view()}, rlp::uint_string(nonce), bytes{to.view()},
        to_minimal_be(value), data, rlp::uint_string(gas_limit), to_minimal_be(max_fee)};
}
}  // namespace

TupleValidation validate_tuple(const AuthorizationTuple& tuple, const ChainState& state)
{
    TupleValidation v;
    if (tuple.chain_id != 0 && tuple.chain_id != state.chain_id())
    {
        v.reason = RejectReason::chain_mismatch;
        return v;
    }
    try
    {
        v.authority = recover_authority(
            auth_message(tuple.chain_id, tuple.target, tuple.nonce, state.auth_magic()),
            tuple.signature);
    }
    catch (const Error& e)
    {
        v.reason = e.code() == Errc::non_canonical_signature ?
                       RejectReason::non_canonical_signature :
                       RejectReason::recovery_failure;
        return v;
    }
    if (state.nonce(*v.authority) != tuple.nonce)
        v.reason = RejectReason::nonce_mismatch;
    return v;
}

Receipt process_set_code_tx(
    const SetCodeTransaction& tx, ChainState& state, const TxOptions& options)
{
    if (tx.auth_list.empty() && !options.allow_empty_auth_list)
        throw Error{Errc::empty_auth_list, "set-code transaction has an empty authorization list"};
    const Envelope env{tx.sender, tx.to, tx.value, tx.data, tx.gas_limit, tx.max_fee, tx_hash(tx)};
    return execute(state, env, &tx.auth_list, options);
}

Receipt process_call_tx(const CallTransaction& tx, ChainState& state)
{
    const Envelope env{tx.sender, tx.to, tx.value, tx.data, tx.gas_limit, tx.max_fee, tx_hash(tx)};
    return execute(state, env, nullptr, {});
}

SetCodeTransaction build_auth_tx(const ChainState& state, std::vector<AuthorizationTuple> tuples,
    const Address& sender, const Address& to, Amount value, bytes data, uint64_t gas_limit)
{
    SetCodeTransaction tx;
    tx.sender = sender;
    tx.tx_nonce = state.nonce(sender);
    tx.to = to;
    tx.value = value;
    tx.data = std::move(data);
    tx.gas_limit = gas_limit;
    tx.auth_list = std::move(tuples);
    tx.tx_chain_id = state.chain_id();
    return tx;
}

CallTransaction build_call_tx(const ChainState& state, const Address& sender, const Address& to,
    Amount value, bytes data, uint64_t gas_limit)
{
    CallTransaction tx;
    tx.sender = sender;
    tx.tx_nonce = state.nonce(sender);
    tx.to = to;
    tx.value = value;
    tx.data = std::move(data);
    tx.gas_limit = gas_limit;
    tx.tx_chain_id = state.chain_id();
    return tx;
}

uint64_t next_tuple_nonce(const ChainState& state, const Address& authority, const Address& sender)
{
    return state.nonce(authority) + (authority == sender ? 1 : 0);
}

bytes serialize_tx(const SetCodeTransaction& tx)
{
    auto fields = tx_common_fields(
        tx.sender, tx.tx_nonce, tx.to, tx.value, tx.data, tx.gas_limit, tx.max_fee);
    rlp::Item::List tuples;
    for (const auto& t : tx.auth_list)
        tuples.push_back(to_rlp(t));
    auto list = fields.items();
    list.emplace_back(std::move(tuples));
    list.emplace_back(rlp::uint_string(tx.tx_chain_id));
    bytes out{set_code_tx_type};
    out += rlp::encode(list);
    return out;
}

bytes serialize_tx(const CallTransaction& tx)
{
    auto list = tx_common_fields(
        tx.sender, tx.tx_nonce, tx.to, tx.value, tx.data, tx.gas_limit, tx.max_fee)
                    .items();
    list.emplace_back(rlp::uint_string(tx.tx_chain_id));
    bytes out{call_tx_type};
    out += rlp::encode(list);
    return out;
}

SetCodeTransaction parse_set_code_tx(bytes_view raw)
{
    if (raw.empty() || raw[0] != set_code_tx_type)
        bad_tx("expected type 0x04");
    const auto item = rlp::decode(raw.substr(1));
    if (!item.is_list() || item.items().size() != 9)
        bad_tx("expected a list of 9 fields");
    const auto& f = item.items();

    SetCodeTransaction tx;
    tx.sender = read_address(f[0], "sender");
    tx.tx_nonce = static_cast<uint64_t>(read_uint(f[1], 8, "nonce"));
    tx.to = read_address(f[2], "to");
    tx.value = read_uint(f[3], 16, "value");
    if (f[4].is_list())
        bad_tx("data is a list");
    tx.data = f[4].str();
    tx.gas_limit = static_cast<uint64_t>(read_uint(f[5], 8, "gas_limit"));
    tx.max_fee = read_uint(f[6], 16, "max_fee");
    if (!f[7].is_list())
        bad_tx("auth_list is not a list");
    for (const auto& t : f[7].items())
        tx.auth_list.push_back(tuple_from_rlp(t));
    tx.tx_chain_id = static_cast<uint64_t>(read_uint(f[8], 8, "chain_id"));
    return tx;
}

Hash32 tx_hash(const SetCodeTransaction& tx)
{
    return keccak256(serialize_tx(tx));
}

Hash32 tx_hash(const CallTransaction& tx)
{
    return keccak256(serialize_tx(tx));
}
}  // namespace delegsim
