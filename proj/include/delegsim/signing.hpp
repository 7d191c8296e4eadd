// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <delegsim/codec.hpp>
#include <cstddef>

namespace delegsim
{
/// secp256k1 secret scalar in [1, n-1].
class PrivateKey
{
public:
    /// Throws Errc::invalid_key when the scalar is zero or >= n.
    explicit PrivateKey(const Bytes32& scalar);

    static PrivateKey from_hex(std::string_view text);

    [[nodiscard]] const Bytes32& scalar() const noexcept { return scalar_; }

    friend bool operator==(const PrivateKey&, const PrivateKey&) = default;

private:
    Bytes32 scalar_;
};

/// The secp256k1 group order n.
const Bytes32& secp256k1_order() noexcept;

/// n - s, for building high-s twins of canonical signatures.
Bytes32 negate_scalar(const Bytes32& s);

/// keccak256(X || Y) of the uncompressed public key, last 20 bytes.
Address derive_address(const PrivateKey& key);

/// Deterministic (RFC 6979, HMAC-SHA256) ECDSA signature normalized to low-s.
/// Every call is recorded in the signing audit under the signer's address.
RecoverableSignature sign_digest(const PrivateKey& key, const Hash32& digest);

/// ecrecover. Throws Errc::recovery_failure for out-of-range r / s or a point that
/// does not lie on the curve, Errc::non_canonical_signature when s > n/2.
Address recover_authority(const Hash32& digest, const RecoverableSignature& sig);

/// Counts sign_digest invocations per signer, so tests can prove that no new
/// victim signature was produced during a scenario.
namespace signing_audit
{
size_t count(const Address& signer);
void reset();
}  // namespace signing_audit

/// Builds a fully signed authorization tuple.
AuthorizationTuple sign_authorization(const PrivateKey& key, uint64_t chain_id,
    const Address& target, uint64_t nonce, uint8_t magic = default_auth_magic);
}  // namespace delegsim
