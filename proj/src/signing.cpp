// delegsim: EIP-7702 delegation simulator
// Copyright 2026 The delegsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include <delegsim/signing.hpp>
#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>
#include <map>
#include <memory>
#include <mutex>

namespace delegsim
{
namespace
{
struct BnDeleter
{
    void operator()(BIGNUM* p) const noexcept { BN_clear_free(p); }
};
struct CtxDeleter
{
    void operator()(BN_CTX* p) const noexcept { BN_CTX_free(p); }
};
struct PointDeleter
{
    void operator()(EC_POINT* p) const noexcept { EC_POINT_clear_free(p); }
};
struct GroupDeleter
{
    void operator()(EC_GROUP* p) const noexcept { EC_GROUP_free(p); }
};

using Bn = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtx = std::unique_ptr<BN_CTX, CtxDeleter>;
using Point = std::unique_ptr<EC_POINT, PointDeleter>;

const EC_GROUP& curve()
{
    static const std::unique_ptr<EC_GROUP, GroupDeleter> group{
        EC_GROUP_new_by_curve_name(NID_secp256k1)};
    return *group;
}

const Bytes32 order_n = Bytes32::from_hex(
    "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
const Bytes32 half_n = Bytes32::from_hex(
    "7fffffffffffffffffffffffffffffff5d576e7357a4501ddfe92f46681b20a0");

Bn new_bn()
{
    Bn bn{BN_new()};
    if (!bn)
        throw std::bad_alloc{};
    return bn;
}

Bn to_bn(const Bytes32& v)
{
    Bn bn{BN_bin2bn(v.bytes.data(), 32, nullptr)};
    if (!bn)
        throw std::bad_alloc{};
    return bn;
}

Bytes32 from_bn(const BIGNUM& bn)
{
    Bytes32 out;
    BN_bn2binpad(&bn, out.bytes.data(), 32);
    return out;
}

Point new_point()
{
    Point p{EC_POINT_new(&curve())};
    if (!p)
        throw std::bad_alloc{};
    return p;
}

Address address_of(const EC_POINT& pub, BN_CTX* ctx)
{
    auto x = new_bn();
    auto y = new_bn();
    EC_POINT_get_affine_coordinates(&curve(), &pub, x.get(), y.get(), ctx);
    uint8_t xy[64];
    BN_bn2binpad(x.get(), xy, 32);
    BN_bn2binpad(y.get(), xy + 32, 32);
    const auto h = keccak256({xy, sizeof(xy)});
    return Address::from_view(h.view().substr(12));
}

using Mac = std::array<uint8_t, 32>;

Mac hmac_sha256(const Mac& key, bytes_view data)
{
    Mac out{};
    unsigned len = 0;
    HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
        out.data(), &len);
    return out;
}

bytes cat(std::initializer_list<bytes_view> parts)
{
    bytes out;
    for (const auto p : parts)
        out += p;
    return out;
}

/// RFC 6979 HMAC-DRBG producing candidate nonces for (x, h1).
class NonceGenerator
{
public:
    NonceGenerator(const Bytes32& x, const Bytes32& h1_mod_n)
    {
        v_.fill(0x01);
        k_.fill(0x00);
        const uint8_t zero = 0x00;
        const uint8_t one = 0x01;
        k_ = hmac_sha256(k_, cat({view(v_), {&zero, 1}, x.view(), h1_mod_n.view()}));
        v_ = hmac_sha256(k_, view(v_));
        k_ = hmac_sha256(k_, cat({view(v_), {&one, 1}, x.view(), h1_mod_n.view()}));
        v_ = hmac_sha256(k_, view(v_));
    }

    Bytes32 next()
    {
        if (!first_)
        {
            const uint8_t zero = 0x00;
            k_ = hmac_sha256(k_, cat({view(v_), {&zero, 1}}));
            v_ = hmac_sha256(k_, view(v_));
        }
        first_ = false;
        v_ = hmac_sha256(k_, view(v_));
        Bytes32 out;
        out.bytes = v_;
        return out;
    }

private:
    static bytes_view view(const Mac& m) { return {m.data(), m.size()}; }

    Mac v_{};
    Mac k_{};
    bool first_ = true;
};

bool in_range(const Bytes32& v) noexcept
{
    return !v.is_zero() && v < order_n;
}

std::mutex audit_mutex;
std::map<Address, size_t> audit_counts;
}  // namespace

PrivateKey::PrivateKey(const Bytes32& scalar) : scalar_{scalar}
{
    if (!in_range(scalar))
        throw Error{Errc::invalid_key, "private key scalar out of range"};
}

PrivateKey PrivateKey::from_hex(std::string_view text)
{
    bytes raw;
    try
    {
        raw = delegsim::from_hex(text);
    }
    catch (const Error&)
    {
        throw Error{Errc::invalid_key, "private key is not valid hex"};
    }
    if (raw.size() != 32)
        throw Error{Errc::invalid_key, "private key must be 32 bytes"};
    return PrivateKey{Bytes32::from_view(raw)};
}

const Bytes32& secp256k1_order() noexcept
{
    return order_n;
}

Bytes32 negate_scalar(const Bytes32& s)
{
    BnCtx ctx{BN_CTX_new()};
    auto n = to_bn(order_n);
    auto v = to_bn(s);
    auto out = new_bn();
    BN_sub(out.get(), n.get(), v.get());
    return from_bn(*out);
}

Address derive_address(const PrivateKey& key)
{
    BnCtx ctx{BN_CTX_new()};
    auto d = to_bn(key.scalar());
    auto pub = new_point();
    if (EC_POINT_mul(&curve(), pub.get(), d.get(), nullptr, nullptr, ctx.get()) != 1)
        throw Error{Errc::invalid_key, "public key derivation failed"};
    return address_of(*pub, ctx.get());
}

RecoverableSignature sign_digest(const PrivateKey& key, const Hash32& digest)
{
    BnCtx ctx{BN_CTX_new()};
    auto n = to_bn(order_n);
    auto d = to_bn(key.scalar());

    auto e = to_bn(Bytes32{digest});
    BN_nnmod(e.get(), e.get(), n.get(), ctx.get());

    NonceGenerator nonces{key.scalar(), from_bn(*e)};
    auto rx = new_bn();
    auto ry = new_bn();
    auto r = new_bn();
    auto s = new_bn();
    auto kinv = new_bn();
    auto tmp = new_bn();
    auto point = new_point();

    for (;;)
    {
        const auto candidate = nonces.next();
        if (!in_range(candidate))
            continue;
        auto k = to_bn(candidate);

        EC_POINT_mul(&curve(), point.get(), k.get(), nullptr, nullptr, ctx.get());
        EC_POINT_get_affine_coordinates(&curve(), point.get(), rx.get(), ry.get(), ctx.get());
        // R.x >= n would need the extra recovery-id bit, which the tuple cannot carry.
        if (BN_cmp(rx.get(), n.get()) >= 0)
            continue;
        BN_copy(r.get(), rx.get());
        if (BN_is_zero(r.get()))
            continue;

        // s = k^-1 (e + r d) mod n
        BN_mod_inverse(kinv.get(), k.get(), n.get(), ctx.get());
        BN_mod_mul(tmp.get(), r.get(), d.get(), n.get(), ctx.get());
        BN_mod_add(tmp.get(), tmp.get(), e.get(), n.get(), ctx.get());
        BN_mod_mul(s.get(), kinv.get(), tmp.get(), n.get(), ctx.get());
        if (BN_is_zero(s.get()))
            continue;

        RecoverableSignature sig;
        sig.y_parity = static_cast<uint8_t>(BN_is_odd(ry.get()) ? 1 : 0);
        sig.r = from_bn(*r);
        sig.s = from_bn(*s);
        if (sig.s > half_n)
        {
            sig.s = negate_scalar(sig.s);
            sig.y_parity ^= 1;
        }

        {
            const std::lock_guard lock{audit_mutex};
            ++audit_counts[derive_address(key)];
        }
        return sig;
    }
}

Address recover_authority(const Hash32& digest, const RecoverableSignature& sig)
{
    if (sig.y_parity > 1)
        throw Error{Errc::recovery_failure, "y_parity must be 0 or 1"};
    if (!in_range(sig.r))
        throw Error{Errc::recovery_failure, "r out of range"};
    if (sig.s.is_zero())
        throw Error{Errc::recovery_failure, "s out of range"};
    if (sig.s > half_n)
        throw Error{Errc::non_canonical_signature, "s exceeds n/2"};

    BnCtx ctx{BN_CTX_new()};
    auto n = to_bn(order_n);
    auto r = to_bn(sig.r);
    auto s = to_bn(sig.s);

    auto big_r = new_point();
    if (EC_POINT_set_compressed_coordinates(&curve(), big_r.get(), r.get(), sig.y_parity,
            ctx.get()) != 1)
        throw Error{Errc::recovery_failure, "r is not the x-coordinate of a curve point"};

    auto e = to_bn(Bytes32{digest});
    BN_nnmod(e.get(), e.get(), n.get(), ctx.get());

    // Q = r^-1 (s R - e G) = (-e r^-1) G + (s r^-1) R
    auto rinv = new_bn();
    BN_mod_inverse(rinv.get(), r.get(), n.get(), ctx.get());
    auto u1 = new_bn();
    auto u2 = new_bn();
    BN_mod_mul(u1.get(), e.get(), rinv.get(), n.get(), ctx.get());
    BN_mod_sub(u1.get(), n.get(), u1.get(), n.get(), ctx.get());
    BN_mod_mul(u2.get(), s.get(), rinv.get(), n.get(), ctx.get());

    auto q = new_point();
    if (EC_POINT_mul(&curve(), q.get(), u1.get(), big_r.get(), u2.get(), ctx.get()) != 1 ||
        EC_POINT_is_at_infinity(&curve(), q.get()))
        throw Error{Errc::recovery_failure, "recovered point is at infinity"};

    return address_of(*q, ctx.get());
}

namespace signing_audit
{
size_t count(const Address& signer)
{
    const std::lock_guard lock{audit_mutex};
    const auto it = audit_counts.find(signer);
    return it == audit_counts.end() ? 0 : it->second;
}

void reset()
{
    const std::lock_guard lock{audit_mutex};
    audit_counts.clear();
}
}  // namespace signing_audit

AuthorizationTuple sign_authorization(const PrivateKey& key, uint64_t chain_id,
    const Address& target, uint64_t nonce, uint8_t magic)
{
    AuthorizationTuple t;
    t.chain_id = chain_id;
    t.target = target;
    t.nonce = nonce;
    t.signature = sign_digest(key, auth_message(chain_id, target, nonce, magic));
    return t;
}
}  // namespace delegsim
