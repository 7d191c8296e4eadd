// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/common.hpp>
#include <algorithm>

namespace delegsim
{
std::string_view to_string(Errc code) noexcept
{
    switch (code)
    {
    case Errc::malformed_hex:
        return "MalformedHex";
    case Errc::malformed_rlp:
        return "MalformedRlp";
    case Errc::malformed_tuple_hex:
        return "MalformedTupleHex";
    case Errc::invalid_key:
        return "InvalidKey";
    case Errc::non_canonical_signature:
        return "NonCanonicalSignature";
    case Errc::recovery_failure:
        return "RecoveryFailure";
    case Errc::insufficient_balance:
        return "InsufficientBalance";
    case Errc::insufficient_token_balance:
        return "InsufficientTokenBalance";
    case Errc::unknown_token:
        return "UnknownToken";
    case Errc::address_occupied:
        return "AddressOccupied";
    case Errc::empty_auth_list:
        return "EmptyAuthList";
    case Errc::insufficient_gas_funds:
        return "InsufficientGasFunds";
    case Errc::duplicate_chain_id:
        return "DuplicateChainId";
    case Errc::config_error:
        return "ConfigError";
    case Errc::amount_overflow:
        return "AmountOverflow";
    }
    return "Unknown";
}

std::string hex(bytes_view data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (const auto b : data)
    {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::string hex0x(bytes_view data)
{
    return "0x" + hex(data);
}

namespace
{
int nibble(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}
}  // namespace

bytes from_hex(std::string_view text)
{
    if (text.starts_with("0x") || text.starts_with("0X"))
        text.remove_prefix(2);
    if (text.size() % 2 != 0)
        throw Error{Errc::malformed_hex, "odd-length hex string"};
    bytes out;
    out.reserve(text.size() / 2);
    for (size_t i = 0; i < text.size(); i += 2)
    {
        const auto hi = nibble(text[i]);
        const auto lo = nibble(text[i + 1]);
        if (hi < 0 || lo < 0)
            throw Error{Errc::malformed_hex, "invalid hex digit"};
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string to_decimal(Amount value)
{
    if (value == 0)
        return "0";
    std::string out;
    while (value != 0)
    {
        out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

Amount parse_decimal(std::string_view text)
{
    if (text.empty())
        throw Error{Errc::config_error, "empty decimal string"};
    constexpr auto max = ~Amount{0};
    Amount value = 0;
    for (const auto c : text)
    {
        if (c < '0' || c > '9')
            throw Error{Errc::config_error, "invalid decimal string: " + std::string{text}};
        const auto digit = static_cast<Amount>(c - '0');
        if (value > (max - digit) / 10)
            throw Error{Errc::amount_overflow, "decimal value exceeds 128 bits"};
        value = value * 10 + digit;
    }
    return value;
}

std::string format_units(Amount value)
{
    auto frac = to_decimal(value % one_ether);
    frac.insert(0, 18 - frac.size(), '0');
    return to_decimal(value / one_ether) + "." + frac;
}

Amount parse_ether(std::string_view text)
{
    const auto dot = text.find('.');
    const auto whole_part = text.substr(0, dot);
    std::string frac_part = dot == std::string_view::npos ? "" : std::string{text.substr(dot + 1)};
    if (frac_part.size() > 18)
        throw Error{Errc::config_error, "more than 18 decimals: " + std::string{text}};
    frac_part.append(18 - frac_part.size(), '0');
    const auto whole = whole_part.empty() ? Amount{0} : parse_decimal(whole_part);
    if (whole > (~Amount{0}) / one_ether)
        throw Error{Errc::amount_overflow, "ether amount too large"};
    return whole * one_ether + parse_decimal(frac_part);
}

bytes to_minimal_be(Amount value)
{
    bytes out;
    while (value != 0)
    {
        out.insert(out.begin(), static_cast<uint8_t>(value & 0xff));
        value >>= 8;
    }
    return out;
}
}  // namespace delegsim
