// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace delegsim
{
using bytes = std::basic_string<uint8_t>;
using bytes_view = std::basic_string_view<uint8_t>;

/// Wei and token base units. 128 bits covers every amount the simulator handles
/// (10^38 wei) without pulling in a bignum type.
using Amount = unsigned __int128;

inline constexpr Amount one_ether = Amount{1'000'000'000'000'000'000ULL};
inline constexpr Amount one_gwei = Amount{1'000'000'000ULL};

enum class Errc
{
    malformed_hex,
    malformed_rlp,
    malformed_tuple_hex,
    invalid_key,
    non_canonical_signature,
    recovery_failure,
    insufficient_balance,
    insufficient_token_balance,
    unknown_token,
    address_occupied,
    empty_auth_list,
    insufficient_gas_funds,
    duplicate_chain_id,
    config_error,
    amount_overflow,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what) : std::runtime_error{what}, code_{code} {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Lowercase hex without prefix.
std::string hex(bytes_view data);

/// Lowercase hex with 0x prefix.
std::string hex0x(bytes_view data);

/// Accepts an optional 0x prefix and either case. Odd length is an error.
bytes from_hex(std::string_view text);

template <size_t N>
struct FixedBytes
{
    std::array<uint8_t, N> bytes{};

    static constexpr size_t size = N;

    [[nodiscard]] bytes_view view() const noexcept { return {bytes.data(), N}; }
    [[nodiscard]] bool is_zero() const noexcept
    {
        for (const auto b : bytes)
            if (b != 0)
                return false;
        return true;
    }
    [[nodiscard]] std::string hex() const { return hex0x(view()); }

    static FixedBytes from_view(bytes_view data)
    {
        if (data.size() != N)
            throw Error{Errc::malformed_hex, "expected " + std::to_string(N) + " bytes, got " +
                                                 std::to_string(data.size())};
        FixedBytes r;
        std::copy(data.begin(), data.end(), r.bytes.begin());
        return r;
    }

    static FixedBytes from_hex(std::string_view text) { return from_view(delegsim::from_hex(text)); }

    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

struct Address : FixedBytes<20>
{
    Address() = default;
    explicit Address(const FixedBytes<20>& b) : FixedBytes{b} {}

    static Address from_view(bytes_view data) { return Address{FixedBytes::from_view(data)}; }
    static Address from_hex(std::string_view text) { return Address{FixedBytes::from_hex(text)}; }

    /// Builds an address whose trailing bytes hold `value` (e.g. 0x01 for precompile #1).
    static Address from_uint(uint64_t value)
    {
        Address a;
        for (size_t i = 0; i < 8; ++i)
            a.bytes[19 - i] = static_cast<uint8_t>(value >> (8 * i));
        return a;
    }

    friend auto operator<=>(const Address&, const Address&) = default;
};

struct Hash32 : FixedBytes<32>
{
    Hash32() = default;
    explicit Hash32(const FixedBytes<32>& b) : FixedBytes{b} {}

    static Hash32 from_view(bytes_view data) { return Hash32{FixedBytes::from_view(data)}; }
    static Hash32 from_hex(std::string_view text) { return Hash32{FixedBytes::from_hex(text)}; }

    friend auto operator<=>(const Hash32&, const Hash32&) = default;
};

/// 32-byte big-endian unsigned scalar (signature r / s, private keys).
using Bytes32 = FixedBytes<32>;

std::string to_decimal(Amount value);

/// Parses a non-negative decimal integer; throws Errc::amount_overflow or
/// Errc::config_error.
Amount parse_decimal(std::string_view text);

/// Renders an 18-decimal fixed-point value, e.g. "9999.999310000000000000".
std::string format_units(Amount value);

/// Parses "1.5" / "10000" style ether strings into wei.
Amount parse_ether(std::string_view text);

/// Minimal big-endian encoding (zero encodes to an empty string).
bytes to_minimal_be(Amount value);
}  // namespace delegsim
