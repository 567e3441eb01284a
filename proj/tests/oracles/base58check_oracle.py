#!/usr/bin/env python3
"""Independent Base58Check / Bech32 decoder used to freeze test vectors.

Run manually; the printed verdicts are hardcoded into the C++ unit tests.
Uses only hashlib -- no project code.
"""
import hashlib

ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"


def b58decode(s: str) -> bytes:
    num = 0
    for c in s:
        idx = ALPHABET.find(c)
        if idx < 0:
            raise ValueError(f"bad char {c!r}")
        num = num * 58 + idx
    body = num.to_bytes((num.bit_length() + 7) // 8, "big")
    pad = 0
    for c in s:
        if c == "1":
            pad += 1
        else:
            break
    return b"\x00" * pad + body


def b58check_ok(s: str) -> bool:
    try:
        raw = b58decode(s)
    except ValueError:
        return False
    if len(raw) != 25:
        return False
    payload, chk = raw[:21], raw[21:]
    h = hashlib.sha256(hashlib.sha256(payload).digest()).digest()
    return h[:4] == chk


BECH32_CHARSET = "qpzry9x8gf2tvdw0s3jn54khce6mua7l"


def bech32_polymod(values):
    gen = [0x3B6A57B2, 0x26508E6D, 0x1EA119FA, 0x3D4233DD, 0x2A1462B3]
    chk = 1
    for v in values:
        top = chk >> 25
        chk = (chk & 0x1FFFFFF) << 5 ^ v
        for i in range(5):
            chk ^= gen[i] if ((top >> i) & 1) else 0
    return chk


def bech32_ok(s: str) -> bool:
    if s != s.lower() or len(s) > 90:
        return False
    pos = s.rfind("1")
    if pos < 1 or pos + 7 > len(s):
        return False
    hrp, data = s[:pos], s[pos + 1:]
    if any(c not in BECH32_CHARSET for c in data):
        return False
    vals = [ord(c) >> 5 for c in hrp] + [0] + [ord(c) & 31 for c in hrp]
    vals += [BECH32_CHARSET.find(c) for c in data]
    return bech32_polymod(vals) == 1


VECTORS = [
    "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa",   # expect True
    "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNb",   # expect False (last char altered)
    "3J98t1WpEZ73CNmQviecrnyiWrnqRhWNLy",   # expect True
    "1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN3",   # expect False (corrupted)
    "1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN2",   # expect True
]

BECH32_VECTORS = [
    "bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t4",  # expect True
    "bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t5",  # expect False
]

if __name__ == "__main__":
    for v in VECTORS:
        print(f"base58check {v} -> {b58check_ok(v)}")
    for v in BECH32_VECTORS:
        print(f"bech32      {v} -> {bech32_ok(v)}")
