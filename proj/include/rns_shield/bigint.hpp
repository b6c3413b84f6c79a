#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rns_shield/errors.hpp"

namespace rns_shield {

using BigInt = boost::multiprecision::cpp_int;

/// Number of significant bits; 0 for zero.
inline std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return boost::multiprecision::msb(v) + 1;
}

inline BigInt pow2(std::size_t bits) { return BigInt(1) << bits; }

/// Multiplicative inverse of a modulo m via the extended Euclidean
/// algorithm. Throws NotCoprime when gcd(a, m) != 1.
BigInt mod_inverse(const BigInt& a, const BigInt& m);

/// Big-endian bytes -> nonnegative integer. Empty span decodes to 0.
BigInt bytes_to_bigint(std::span<const std::uint8_t> bytes);

/// Minimal big-endian encoding (no leading zero bytes; 0 -> empty).
std::vector<std::uint8_t> bigint_to_bytes(const BigInt& v);

}  // namespace rns_shield
