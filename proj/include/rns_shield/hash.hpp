#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rns_shield/bigint.hpp"

namespace rns_shield {

// Stable algorithm ids, recorded in container headers.
inline constexpr std::uint16_t kHashTestStub8 = 0;  // 8-bit stub, tests only
inline constexpr std::uint16_t kHashSha512 = 1;     // default

/// Digest width in bits; throws UnknownAlgorithm.
std::size_t hash_digest_bits(std::uint16_t algorithm);

/// A digest split into equal-width sub-codes.
class HashCode {
public:
  HashCode(std::vector<std::uint8_t> digest, std::size_t sub_code_count);

  std::span<const std::uint8_t> digest() const { return digest_; }
  std::size_t sub_code_count() const { return sub_code_count_; }
  std::size_t sub_code_bits() const { return digest_.size() * 8 / sub_code_count_; }

  /// Sub-code t as an integer (big-endian bit slice of the digest).
  BigInt sub_code(std::size_t t) const;

  bool operator==(const HashCode& other) const = default;

private:
  std::vector<std::uint8_t> digest_;
  std::size_t sub_code_count_;
};

/// Hash a block and split the digest into sub_code_count sub-codes.
/// Deterministic per algorithm id; throws UnknownAlgorithm.
HashCode hash_block(std::span<const std::uint8_t> block,
                    std::uint16_t algorithm, std::size_t sub_code_count);

}  // namespace rns_shield
