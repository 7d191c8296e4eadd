// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/common.hpp>
#include <optional>

namespace delegsim
{
/// ERC-4337 style user operation, reduced to the fields the model needs.
struct UserOperation
{
    Address sender;
    uint64_t op_nonce = 0;
    Address call_target;
    Amount call_value = 0;
    bytes call_data;
    std::optional<Address> paymaster;
    uint64_t gas_budget = 100000;

    friend bool operator==(const UserOperation&, const UserOperation&) = default;
};
}  // namespace delegsim
