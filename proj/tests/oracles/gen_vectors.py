#!/usr/bin/env python3
"""Independent oracle for the frozen test vectors in tests/oracle_vectors.hpp.

Uses the `cryptography` package's DES (as single-key TripleDES) and a
from-scratch reimplementation of the hash, salt and toy cipher, so that none
of the expected values come from the C++ code under test.

    python3 tests/oracles/gen_vectors.py > tests/oracle_vectors.hpp
"""
import ipaddress
import math
import random

from cryptography.hazmat.decrepit.ciphers.algorithms import TripleDES
from cryptography.hazmat.primitives.ciphers import Cipher, modes

M64 = (1 << 64) - 1


def djb2(addr: str) -> int:
    h = 5381
    for b in ipaddress.IPv6Address(addr).packed:
        h = (h * 33 + b) & M64
    return h


def des_enc(key: int, block: int) -> int:
    k = key.to_bytes(8, "big")
    e = Cipher(TripleDES(k * 3), modes.ECB()).encryptor()
    return int.from_bytes(e.update(block.to_bytes(8, "big")), "big")


def des_dec(key: int, block: int) -> int:
    k = key.to_bytes(8, "big")
    d = Cipher(TripleDES(k * 3), modes.ECB()).decryptor()
    return int.from_bytes(d.update(block.to_bytes(8, "big")), "big")


AES_SBOX = None


def aes_sbox():
    # Derived from the GF(2^8) inverse plus affine map, not copied from a table.
    global AES_SBOX
    if AES_SBOX is not None:
        return AES_SBOX

    def gmul(a, b):
        p = 0
        for _ in range(8):
            if b & 1:
                p ^= a
            hi = a & 0x80
            a = (a << 1) & 0xFF
            if hi:
                a ^= 0x1B
            b >>= 1
        return p

    inv = [0] * 256
    for a in range(1, 256):
        for b in range(1, 256):
            if gmul(a, b) == 1:
                inv[a] = b
                break
    box = []
    for a in range(256):
        x = inv[a]
        s = x
        for r in range(1, 5):
            s ^= ((x << r) | (x >> (8 - r))) & 0xFF
        box.append(s ^ 0x63)
    AES_SBOX = box
    return box


TOY_ROUNDS = 6
TOY_RC = [0x00, 0x3B, 0x76, 0xB1, 0xEC, 0x27]  # (i * 0x3B) & 0xFF


def toy_enc(key: int, block: int) -> int:
    k = [(key >> 8) & 0xFF, key & 0xFF]
    box = aes_sbox()
    left, right = block >> 8, block & 0xFF
    for i in range(TOY_ROUNDS):
        rk = k[i % 2] ^ ((i * 0x3B) & 0xFF)
        left, right = right, left ^ box[right ^ rk]
    return (left << 8) | right


def gen(sa, prefix64, key, t0, step, now):
    salt = (now - t0) // step
    p = djb2(sa) ^ salt
    c = des_enc(key, p)
    return (prefix64 << 64) | c


def verify(sa, da, prefix64, key, t0, step, lo, hi, now):
    if da >> 64 != prefix64:
        return False
    p = des_dec(key, da & M64)
    salt = p ^ djb2(sa)
    ts = salt * step + t0
    if ts > (1 << 63) - 1:
        return False
    return lo < now - ts < hi


def h(v, width=16):
    return "0x%0*XULL" % (width, v)


def main():
    out = []
    w = out.append
    w("// Generated by tests/oracles/gen_vectors.py. Do not edit by hand.")
    w("#pragma once")
    w("#include <cstdint>")
    w("")
    w("namespace oracle {")
    w("")
    w(f"inline constexpr std::uint64_t kDjbZero = {h(djb2('::'))};")
    w(f"inline constexpr std::uint64_t kDjbDoc1 = {h(djb2('2001:db8::1'))};  // 2001:db8::1")
    w(f"inline constexpr std::uint64_t kDjbDoc2 = {h(djb2('2001:db8::2'))};  // 2001:db8::2")
    w("")

    rng = random.Random(20240611)
    w("struct DesVector { std::uint64_t key, plain, cipher; };")
    w("inline constexpr DesVector kDesVectors[] = {")
    w(f"    {{0x0123456789ABCDEFULL, 0x4E6F772069732074ULL, {h(des_enc(0x0123456789ABCDEF, 0x4E6F772069732074))}}},")
    for _ in range(8):
        k, p = rng.getrandbits(64), rng.getrandbits(64)
        c = des_enc(k, p)
        assert des_dec(k, c) == p
        w(f"    {{{h(k)}, {h(p)}, {h(c)}}},")
    w("};")
    w("")

    w("struct ToyVector { std::uint16_t key, plain, cipher; };")
    w("inline constexpr ToyVector kToyVectors[] = {")
    for k, p in [(0x0000, 0x0000), (0x1A2B, 0x0000), (0x1A2B, 0xBEEF), (0xFFFF, 0x1234)] + [
        (rng.getrandbits(16), rng.getrandbits(16)) for _ in range(4)
    ]:
        w(f"    {{{h(k, 4)}, {h(p, 4)}, {h(toy_enc(k, p), 4)}}},")
    w("};")
    perm = {toy_enc(0x1A2B, x) for x in range(1 << 16)}
    assert len(perm) == 1 << 16
    w("")

    # Full composition vector.
    sa, key, t0, step, now = "2001:db8::a", 0x0123456789ABCDEF, 1600000000000, 5, 1700000000123
    prefix64 = int(ipaddress.IPv6Address("2001:da8::")) >> 64
    da = gen(sa, prefix64, key, t0, step, now)
    assert verify(sa, da, prefix64, key, t0, step, 0, 10000, now + 50)
    flipped = da ^ 1
    flip_ok = verify(sa, flipped, prefix64, key, t0, step, 0, 10000, now)
    w("// sa 2001:db8::a, prefix 2001:da8::/64, key 0123456789abcdef,")
    w(f"// t0 {t0}, X {step} ms, now {now}")
    w(f"inline constexpr std::int64_t kFullT0 = {t0};")
    w(f"inline constexpr std::int64_t kFullStep = {step};")
    w(f"inline constexpr std::int64_t kFullNow = {now};")
    w(f"inline constexpr std::uint64_t kFullSalt = {(now - t0) // step}ULL;")
    w(f"inline constexpr std::uint64_t kFullSuffix = {h(da & M64)};")
    w(f'inline constexpr const char* kFullAddress = "{ipaddress.IPv6Address(da).compressed}";')
    w(f"inline constexpr bool kFlippedBitVerifies = {'true' if flip_ok else 'false'};")
    w("")

    # Entropy (3,1) example: -(0.75 log2 0.75 + 0.25 log2 0.25) / 4
    e31 = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25)) / 4
    w(f"inline constexpr double kEntropyThreeOne = {e31!r};")
    # Brute-force cross-check of the closed form by counting.
    counts = {}
    for s in [0xA, 0xA, 0xA, 0x5]:
        counts[s] = counts.get(s, 0) + 1
    bf = -sum(c / 4 * math.log(c / 4, 16) for c in counts.values())
    assert abs(bf - e31) < 1e-12
    w(f"inline constexpr double kChiOneCell2560 = {255 * 10 + (2560 - 10) ** 2 / 10!r};")
    w(f"inline constexpr double kScanTime64P1e4 = {3 * 2 ** (64 - 32) / (4 * 10000)!r};")
    w(f"inline constexpr double kMargin64P1e4 = {64 - math.log2(10000)!r};")
    w(f"inline constexpr double kMargin50P1e4 = {50 - math.log2(10000)!r};")
    w(f"inline constexpr double kMargin48P1e4 = {48 - math.log2(10000)!r};")
    w("")
    w("}  // namespace oracle")
    print("\n".join(out))


if __name__ == "__main__":
    main()
