// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/codec.hpp>
#include <algorithm>
#include <cctype>

namespace delegsim
{
Hash32 auth_message(uint64_t chain_id, const Address& target, uint64_t nonce, uint8_t magic)
{
    const rlp::Item payload{rlp::Item::List{
        rlp::uint_string(chain_id), bytes{target.view()}, rlp::uint_string(nonce)}};
    bytes preimage{magic};
    preimage += rlp::encode(payload);
    return keccak256(preimage);
}

rlp::Item to_rlp(const AuthorizationTuple& tuple)
{
    const auto trim = [](const Bytes32& v) {
        auto view = v.view();
        while (!view.empty() && view.front() == 0)
            view.remove_prefix(1);
        return bytes{view};
    };
    return rlp::Item::List{
        rlp::uint_string(tuple.chain_id),
        bytes{tuple.target.view()},
        rlp::uint_string(tuple.nonce),
        rlp::uint_string(tuple.signature.y_parity),
        trim(tuple.signature.r),
        trim(tuple.signature.s),
    };
}

namespace
{
[[noreturn]] void bad_tuple(const std::string& why)
{
    throw Error{Errc::malformed_tuple_hex, "malformed tuple: " + why};
}

bytes_view strip_leading_zeros(const bytes& s)
{
    bytes_view v{s};
    while (!v.empty() && v.front() == 0)
        v.remove_prefix(1);
    return v;
}

uint64_t read_u64(const rlp::Item& item, const char* field)
{
    if (item.is_list())
        bad_tuple(std::string{field} + " is a list");
    const auto v = strip_leading_zeros(item.str());
    if (v.size() > 8)
        bad_tuple(std::string{field} + " exceeds 64 bits");
    uint64_t out = 0;
    for (const auto b : v)
        out = (out << 8) | b;
    return out;
}

Bytes32 read_scalar(const rlp::Item& item, const char* field)
{
    if (item.is_list())
        bad_tuple(std::string{field} + " is a list");
    const auto v = strip_leading_zeros(item.str());
    if (v.size() > 32)
        bad_tuple(std::string{field} + " exceeds 256 bits");
    Bytes32 out;
    std::copy(v.begin(), v.end(), out.bytes.end() - static_cast<ptrdiff_t>(v.size()));
    return out;
}
}  // namespace

AuthorizationTuple tuple_from_rlp(const rlp::Item& item)
{
    if (!item.is_list())
        bad_tuple("expected a list");
    const auto& f = item.items();
    if (f.size() != 6)
        bad_tuple("expected 6 fields, got " + std::to_string(f.size()));
    if (f[1].is_list() || f[1].str().size() != 20)
        bad_tuple("target must be a 20-byte string");

    AuthorizationTuple t;
    t.chain_id = read_u64(f[0], "chain_id");
    t.target = Address::from_view(f[1].str());
    t.nonce = read_u64(f[2], "nonce");
    const auto parity = read_u64(f[3], "y_parity");
    if (parity > 1)
        bad_tuple("y_parity must be 0 or 1");
    t.signature.y_parity = static_cast<uint8_t>(parity);
    t.signature.r = read_scalar(f[4], "r");
    t.signature.s = read_scalar(f[5], "s");
    return t;
}

std::string encode_tuple_hex(const AuthorizationTuple& tuple)
{
    return hex0x(rlp::encode(to_rlp(tuple)));
}

AuthorizationTuple decode_tuple_hex(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);

    bytes raw;
    rlp::Item item;
    try
    {
        raw = from_hex(text);
        item = rlp::decode(raw);
    }
    catch (const Error& e)
    {
        bad_tuple(e.what());
    }
    return tuple_from_rlp(item);
}
}  // namespace delegsim
