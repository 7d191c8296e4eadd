// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/common.hpp>
#include <string>
#include <variant>
#include <vector>

namespace delegsim
{
/// Keccak-256 with the original Keccak padding (0x01), not FIPS-202 SHA3-256.
Hash32 keccak256(bytes_view data) noexcept;

/// keccak256 of the empty string; the code hash of an account without code.
inline const Hash32 empty_code_hash = Hash32::from_hex(
    "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");

namespace rlp
{
/// A byte string or an ordered list of items.
class Item
{
public:
    using List = std::vector<Item>;

    Item() = default;
    Item(bytes str) : value_{std::move(str)} {}  // NOLINT(google-explicit-constructor)
    Item(List items) : value_{std::move(items)} {}  // NOLINT(google-explicit-constructor)

    [[nodiscard]] bool is_list() const noexcept { return value_.index() == 1; }
    [[nodiscard]] const bytes& str() const { return std::get<bytes>(value_); }
    [[nodiscard]] const List& items() const { return std::get<List>(value_); }

    friend bool operator==(const Item&, const Item&) = default;

private:
    std::variant<bytes, List> value_;
};

bytes encode(const Item& item);

/// Strict decoder: rejects truncation, trailing bytes and every non-canonical
/// length prefix. Throws Errc::malformed_rlp.
Item decode(bytes_view data);

/// Minimal big-endian integer string; zero is the empty string.
inline bytes uint_string(uint64_t value)
{
    return to_minimal_be(value);
}

/// Renders an item as nested JSON-ish text, for diagnostics.
std::string to_debug_string(const Item& item);
}  // namespace rlp

/// Domain-separation byte prepended to the authorization signing payload.
inline constexpr uint8_t default_auth_magic = 0x05;

/// keccak256(magic || rlp([chain_id, target, nonce])).
Hash32 auth_message(uint64_t chain_id, const Address& target, uint64_t nonce,
    uint8_t magic = default_auth_magic);

struct RecoverableSignature
{
    uint8_t y_parity = 0;
    Bytes32 r;
    Bytes32 s;

    friend bool operator==(const RecoverableSignature&, const RecoverableSignature&) = default;
};

/// Signed delegation intent. chain_id == 0 means "valid on any chain".
struct AuthorizationTuple
{
    uint64_t chain_id = 0;
    Address target;
    uint64_t nonce = 0;
    RecoverableSignature signature;

    friend bool operator==(const AuthorizationTuple&, const AuthorizationTuple&) = default;
};

rlp::Item to_rlp(const AuthorizationTuple& tuple);

/// Inverse of to_rlp. Integer fields tolerate leading zero bytes (some tooling emits 0x00
/// for zero) as long as the value fits. Throws Errc::malformed_tuple_hex.
AuthorizationTuple tuple_from_rlp(const rlp::Item& item);

/// 0x-prefixed lowercase hex of the 6-element RLP list.
std::string encode_tuple_hex(const AuthorizationTuple& tuple);

/// Accepts surrounding whitespace (a trailing newline in .hex files). Throws
/// Errc::malformed_tuple_hex.
AuthorizationTuple decode_tuple_hex(std::string_view text);
}  // namespace delegsim
