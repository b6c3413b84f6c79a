#include "rns_shield/hash.hpp"

#include <openssl/evp.h>

#include "rns_shield/bitio.hpp"
#include "rns_shield/errors.hpp"

namespace rns_shield {

std::size_t hash_digest_bits(std::uint16_t algorithm) {
  switch (algorithm) {
    case kHashTestStub8:
      return 8;
    case kHashSha512:
      return 512;
    default:
      throw UnknownAlgorithm("unknown hash algorithm id " +
                             std::to_string(algorithm));
  }
}

HashCode::HashCode(std::vector<std::uint8_t> digest,
                   std::size_t sub_code_count)
    : digest_(std::move(digest)), sub_code_count_(sub_code_count) {
  if (sub_code_count_ == 0 || (digest_.size() * 8) % sub_code_count_ != 0)
    throw ConfigInvalid("sub-code count must divide the digest width");
}

BigInt HashCode::sub_code(std::size_t t) const {
  const std::size_t width = sub_code_bits();
  return read_bits(digest_, t * width, width);
}

namespace {

std::vector<std::uint8_t> sha512_digest(std::span<const std::uint8_t> block) {
  std::vector<std::uint8_t> out(64);
  unsigned int written = 0;
  if (EVP_Digest(block.data(), block.size(), out.data(), &written,
                 EVP_sha512(), nullptr) != 1 ||
      written != out.size())
    throw Error("SHA-512 digest failed");
  return out;
}

// Tiny keyless mixing function for toy-geometry tests. Not a real hash.
std::vector<std::uint8_t> stub8_digest(std::span<const std::uint8_t> block) {
  std::uint8_t h = 0xA5;
  for (std::uint8_t b : block) {
    h = static_cast<std::uint8_t>((h << 3) | (h >> 5));
    h ^= b;
    h = static_cast<std::uint8_t>(h + 0x3B);
  }
  return {h};
}

}  // namespace

HashCode hash_block(std::span<const std::uint8_t> block,
                    std::uint16_t algorithm, std::size_t sub_code_count) {
  switch (algorithm) {
    case kHashTestStub8:
      return HashCode(stub8_digest(block), sub_code_count);
    case kHashSha512:
      return HashCode(sha512_digest(block), sub_code_count);
    default:
      throw UnknownAlgorithm("unknown hash algorithm id " +
                             std::to_string(algorithm));
  }
}

}  // namespace rns_shield
