// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/codec.hpp>

namespace delegsim::rlp
{
namespace
{
bytes length_prefix(size_t length, uint8_t short_base, uint8_t long_base)
{
    if (length <= 55)
        return bytes{static_cast<uint8_t>(short_base + length)};
    const auto len_bytes = to_minimal_be(length);
    bytes out{static_cast<uint8_t>(long_base + len_bytes.size())};
    out += len_bytes;
    return out;
}

void encode_into(const Item& item, bytes& out)
{
    if (!item.is_list())
    {
        const auto& s = item.str();
        if (s.size() == 1 && s[0] < 0x80)
        {
            out.push_back(s[0]);
            return;
        }
        out += length_prefix(s.size(), 0x80, 0xb7);
        out += s;
        return;
    }

    bytes payload;
    for (const auto& child : item.items())
        encode_into(child, payload);
    out += length_prefix(payload.size(), 0xc0, 0xf7);
    out += payload;
}

[[noreturn]] void malformed(const char* why)
{
    throw Error{Errc::malformed_rlp, std::string{"malformed RLP: "} + why};
}

/// Reads a long-form length of `len_of_len` bytes.
size_t read_long_length(bytes_view& in, size_t len_of_len)
{
    if (in.size() < len_of_len)
        malformed("truncated length");
    if (len_of_len > sizeof(size_t))
        malformed("length does not fit");
    if (in[0] == 0)
        malformed("leading zero in length");
    size_t length = 0;
    for (size_t i = 0; i < len_of_len; ++i)
        length = (length << 8) | in[i];
    in.remove_prefix(len_of_len);
    if (length <= 55)
        malformed("long form used for short payload");
    return length;
}

Item decode_one(bytes_view& in)
{
    if (in.empty())
        malformed("unexpected end of input");

    const auto prefix = in[0];
    in.remove_prefix(1);

    if (prefix < 0x80)
        return bytes{prefix};

    if (prefix <= 0xbf)
    {
        size_t length = 0;
        if (prefix <= 0xb7)
            length = prefix - 0x80u;
        else
            length = read_long_length(in, prefix - 0xb7u);

        if (in.size() < length)
            malformed("truncated string");
        bytes s{in.substr(0, length)};
        in.remove_prefix(length);
        if (length == 1 && s[0] < 0x80)
            malformed("single byte below 0x80 must self-encode");
        return s;
    }

    size_t length = 0;
    if (prefix <= 0xf7)
        length = prefix - 0xc0u;
    else
        length = read_long_length(in, prefix - 0xf7u);

    if (in.size() < length)
        malformed("truncated list");
    auto payload = in.substr(0, length);
    in.remove_prefix(length);

    Item::List items;
    while (!payload.empty())
        items.push_back(decode_one(payload));
    return items;
}

void debug_into(const Item& item, std::string& out)
{
    if (!item.is_list())
    {
        out += '"' + hex0x(item.str()) + '"';
        return;
    }
    out += '[';
    bool first = true;
    for (const auto& child : item.items())
    {
        if (!first)
            out += ',';
        first = false;
        debug_into(child, out);
    }
    out += ']';
}
}  // namespace

bytes encode(const Item& item)
{
    bytes out;
    encode_into(item, out);
    return out;
}

Item decode(bytes_view data)
{
    auto item = decode_one(data);
    if (!data.empty())
        malformed("trailing bytes");
    return item;
}

std::string to_debug_string(const Item& item)
{
    std::string out;
    debug_into(item, out);
    return out;
}
}  // namespace delegsim::rlp
