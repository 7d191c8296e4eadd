#!/usr/bin/env python3
# delegsim: EIP-7702 delegation simulator
# Copyright 2026 The delegsim Authors.
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the frozen test vectors in tests/data from reference libraries.

Requires pycryptodome (keccak), rlp (pyrlp) and coincurve (libsecp256k1).
The output is deterministic for a given seed.
"""

import argparse
import json
import pathlib
import random

import coincurve
import rlp
from Crypto.Hash import keccak

SECP256K1_N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141


def keccak256(data: bytes) -> bytes:
    return keccak.new(digest_bits=256, data=data).digest()


def address_of(key: coincurve.PrivateKey) -> bytes:
    return keccak256(key.public_key.format(compressed=False)[1:])[12:]


def random_bytes(rng: random.Random, n: int) -> bytes:
    return bytes(rng.getrandbits(8) for _ in range(n))


def keccak_vectors(rng: random.Random, count: int):
    # Rate boundaries for keccak-256 are multiples of 136 bytes.
    fixed = [0, 1, 55, 56, 135, 136, 137, 271, 272, 273, 1000]
    lengths = fixed + [rng.randrange(0, 600) for _ in range(count - len(fixed))]
    return [
        {"input": data.hex(), "digest": keccak256(data).hex()}
        for data in (random_bytes(rng, n) for n in lengths)
    ]


def random_item(rng: random.Random, depth: int = 0):
    roll = rng.random()
    if depth < 4 and roll < 0.3:
        return [random_item(rng, depth + 1) for _ in range(rng.randrange(0, 6))]
    shape = rng.random()
    if shape < 0.15:
        return b""
    if shape < 0.35:
        return bytes([rng.randrange(0, 256)])
    if shape < 0.85:
        return random_bytes(rng, rng.randrange(2, 56))
    return random_bytes(rng, rng.randrange(56, 300))


def item_json(item):
    if isinstance(item, list):
        return [item_json(i) for i in item]
    return "0x" + item.hex()


def rlp_vectors(rng: random.Random, count: int):
    out = []
    # A few long lists so the long-list prefix is always covered.
    for _ in range(5):
        item = [random_bytes(rng, 30) for _ in range(4)]
        out.append({"item": item_json(item), "encoding": rlp.encode(item).hex()})
    while len(out) < count:
        item = random_item(rng)
        out.append({"item": item_json(item), "encoding": rlp.encode(item).hex()})
    return out


def invalid_rlp():
    cases = [
        "",            # empty input
        "81",          # truncated string
        "8100",        # single byte < 0x80 wrapped
        "817f",        # single byte < 0x80 wrapped
        "b800",        # long form for empty
        "b83700" + "00" * 0x37,  # long form for 55 bytes
        "b90000",      # leading zero in length
        "c1",          # truncated list
        "c28100",      # nested non-canonical
        "8000",        # trailing bytes
        "c0c0",        # trailing list
        "f800",        # long list form for empty payload
        "bf" + "ff" * 8,  # absurd length
    ]
    out = []
    for c in cases:
        try:
            rlp.decode(bytes.fromhex(c), strict=True)
        except Exception:  # noqa: BLE001 - any rejection is what we want
            out.append(c)
        else:
            raise SystemExit(f"reference decoder accepted {c}")
    return out


def signing_vectors(rng: random.Random, count: int):
    out = []
    for _ in range(count):
        while True:
            secret = rng.getrandbits(256)
            if 0 < secret < SECP256K1_N:
                break
        key = coincurve.PrivateKey(secret.to_bytes(32, "big"))
        digest = random_bytes(rng, 32)
        sig = key.sign_recoverable(digest, hasher=None)
        out.append({
            "key": secret.to_bytes(32, "big").hex(),
            "address": address_of(key).hex(),
            "digest": digest.hex(),
            "y_parity": sig[64],
            "r": sig[:32].hex(),
            "s": sig[32:64].hex(),
        })
    return out


def auth_vectors(rng: random.Random, count: int):
    chain_ids = [0, 1, 1337, 2337, 3337, 31337, 2**64 - 1]
    out = []
    for i in range(count):
        secret = rng.getrandbits(255) | 1
        key = coincurve.PrivateKey(secret.to_bytes(32, "big"))
        chain_id = chain_ids[i % len(chain_ids)] if i < 2 * len(chain_ids) else rng.getrandbits(rng.choice([8, 16, 32, 64]))
        target = random_bytes(rng, 20)
        nonce = rng.choice([0, 1, 2, 127, 128, 255, 256, 2**64 - 1, rng.getrandbits(40)])
        message = keccak256(b"\x05" + rlp.encode([chain_id, target, nonce]))
        sig = key.sign_recoverable(message, hasher=None)
        tuple_rlp = rlp.encode([chain_id, target, nonce, sig[64],
                                int.from_bytes(sig[:32], "big"), int.from_bytes(sig[32:64], "big")])
        out.append({
            "key": secret.to_bytes(32, "big").hex(),
            "authority": address_of(key).hex(),
            "chain_id": str(chain_id),
            "target": target.hex(),
            "nonce": str(nonce),
            "message": message.hex(),
            "tuple_hex": "0x" + tuple_rlp.hex(),
        })
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7702)
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path(__file__).resolve().parent.parent / "data")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    files = {
        "keccak_vectors.json": keccak_vectors(rng, 1000),
        "rlp_vectors.json": {"valid": rlp_vectors(rng, 1000), "invalid": invalid_rlp()},
        "signing_vectors.json": signing_vectors(rng, 100),
        "auth_vectors.json": auth_vectors(rng, 50),
    }
    for name, payload in files.items():
        (args.out / name).write_text(json.dumps(payload, indent=1) + "\n")
        print(f"wrote {args.out / name}")


if __name__ == "__main__":
    main()
