// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/codec.hpp>

namespace delegsim
{
namespace
{
constexpr uint64_t round_constants[24] = {
    0x0000000000000001,
    0x0000000000008082,
    0x800000000000808a,
    0x8000000080008000,
    0x000000000000808b,
    0x0000000080000001,
    0x8000000080008081,
    0x8000000000008009,
    0x000000000000008a,
    0x0000000000000088,
    0x0000000080008009,
    0x000000008000000a,
    0x000000008000808b,
    0x800000000000008b,
    0x8000000000008089,
    0x8000000000008003,
    0x8000000000008002,
    0x8000000000000080,
    0x000000000000800a,
    0x800000008000000a,
    0x8000000080008081,
    0x8000000000008080,
    0x0000000080000001,
    0x8000000080008008,
};

// Rho offsets and Pi lane order, walked together along the (x,y) -> (y,2x+3y) cycle.
constexpr int rho_offsets[24] = {
    1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44};
constexpr int pi_lanes[24] = {
    10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1};

constexpr uint64_t rotl(uint64_t x, int n) noexcept
{
    return (x << n) | (x >> (64 - n));
}

void keccak_f1600(uint64_t (&st)[25]) noexcept
{
    for (const auto rc : round_constants)
    {
        // Theta
        uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = st[x] ^ st[x + 5] ^ st[x + 10] ^ st[x + 15] ^ st[x + 20];
        for (int x = 0; x < 5; ++x)
        {
            const auto d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5)
                st[y + x] ^= d;
        }

        // Rho + Pi
        auto carry = st[1];
        for (int i = 0; i < 24; ++i)
        {
            const auto j = pi_lanes[i];
            const auto tmp = st[j];
            st[j] = rotl(carry, rho_offsets[i]);
            carry = tmp;
        }

        // Chi
        for (int y = 0; y < 25; y += 5)
        {
            uint64_t row[5];
            for (int x = 0; x < 5; ++x)
                row[x] = st[y + x];
            for (int x = 0; x < 5; ++x)
                st[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
        }

        // Iota
        st[0] ^= rc;
    }
}

constexpr size_t rate = 136;

void absorb_block(uint64_t (&st)[25], const uint8_t* block) noexcept
{
    for (size_t i = 0; i < rate / 8; ++i)
    {
        uint64_t lane = 0;
        for (size_t b = 0; b < 8; ++b)
            lane |= uint64_t{block[i * 8 + b]} << (8 * b);
        st[i] ^= lane;
    }
    keccak_f1600(st);
}
}  // namespace

Hash32 keccak256(bytes_view data) noexcept
{
    uint64_t st[25] = {};

    while (data.size() >= rate)
    {
        absorb_block(st, data.data());
        data.remove_prefix(rate);
    }

    uint8_t last[rate] = {};
    std::copy(data.begin(), data.end(), last);
    last[data.size()] ^= 0x01;
    last[rate - 1] ^= 0x80;
    absorb_block(st, last);

    Hash32 out;
    for (size_t i = 0; i < 32; ++i)
        out.bytes[i] = static_cast<uint8_t>(st[i / 8] >> (8 * (i % 8)));
    return out;
}
}  // namespace delegsim
