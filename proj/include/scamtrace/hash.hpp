#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace scamtrace {

std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t len);
std::array<std::uint8_t, 32> sha256d(const std::uint8_t* data, std::size_t len);

// Original Keccak-256 (pad byte 0x01), as used by Ethereum. Not SHA3-256.
std::array<std::uint8_t, 32> keccak256(const std::uint8_t* data, std::size_t len);
std::array<std::uint8_t, 32> keccak256(const std::string& s);

std::string to_hex(const std::uint8_t* data, std::size_t len);

}  // namespace scamtrace
