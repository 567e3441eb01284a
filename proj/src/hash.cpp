#include "scamtrace/hash.hpp"

#include <openssl/evp.h>

#include <cstring>

namespace scamtrace {

std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t len) {
    std::array<std::uint8_t, 32> out{};
    unsigned int outlen = 0;
    EVP_Digest(data, len, out.data(), &outlen, EVP_sha256(), nullptr);
    return out;
}

std::array<std::uint8_t, 32> sha256d(const std::uint8_t* data, std::size_t len) {
    auto h = sha256(data, len);
    return sha256(h.data(), h.size());
}

namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

constexpr int kRotation[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55, 20, 3,  10, 43,
                               25, 39, 41, 45, 15, 21, 8,  18, 2,  61, 56, 14};

inline std::uint64_t rotl(std::uint64_t x, int n) {
    return n == 0 ? x : (x << n) | (x >> (64 - n));
}

void keccak_f1600(std::uint64_t a[25]) {
    for (int round = 0; round < 24; ++round) {
        std::uint64_t c[5], d[5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x) d[x] = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
        for (int i = 0; i < 25; ++i) a[i] ^= d[i % 5];

        std::uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(a[x + 5 * y], kRotation[x + 5 * y]);

        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                a[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
        a[0] ^= kRoundConstants[round];
    }
}

}  // namespace

std::array<std::uint8_t, 32> keccak256(const std::uint8_t* data, std::size_t len) {
    constexpr std::size_t kRate = 136;
    std::uint64_t state[25] = {};
    std::uint8_t block[kRate];

    while (len >= kRate) {
        for (std::size_t i = 0; i < kRate / 8; ++i) {
            std::uint64_t lane;
            std::memcpy(&lane, data + 8 * i, 8);  // little-endian host assumed
            state[i] ^= lane;
        }
        keccak_f1600(state);
        data += kRate;
        len -= kRate;
    }

    std::memset(block, 0, kRate);
    std::memcpy(block, data, len);
    block[len] = 0x01;
    block[kRate - 1] |= 0x80;
    for (std::size_t i = 0; i < kRate / 8; ++i) {
        std::uint64_t lane;
        std::memcpy(&lane, block + 8 * i, 8);
        state[i] ^= lane;
    }
    keccak_f1600(state);

    std::array<std::uint8_t, 32> out{};
    std::memcpy(out.data(), state, 32);
    return out;
}

std::array<std::uint8_t, 32> keccak256(const std::string& s) {
    return keccak256(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

std::string to_hex(const std::uint8_t* data, std::size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (std::size_t i = 0; i < len; ++i) {
        out[2 * i] = digits[data[i] >> 4];
        out[2 * i + 1] = digits[data[i] & 0xf];
    }
    return out;
}

}  // namespace scamtrace
