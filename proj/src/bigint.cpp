#include "rns_shield/bigint.hpp"

namespace rns_shield {

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  if (m <= 0) throw Error("mod_inverse: modulus must be positive");
  // Iterative extended Euclid on (a mod m, m), tracking only the
  // coefficient of a.
  BigInt r0 = m;
  BigInt r1 = a % m;
  if (r1 < 0) r1 += m;
  BigInt t0 = 0;
  BigInt t1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    BigInt t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) throw NotCoprime("mod_inverse: arguments are not coprime");
  if (t0 < 0) t0 += m;
  return t0;
}

BigInt bytes_to_bigint(std::span<const std::uint8_t> bytes) {
  BigInt v = 0;
  for (std::uint8_t b : bytes) {
    v <<= 8;
    v |= b;
  }
  return v;
}

std::vector<std::uint8_t> bigint_to_bytes(const BigInt& v) {
  std::vector<std::uint8_t> out;
  BigInt x = v;
  while (x > 0) {
    out.push_back(static_cast<std::uint8_t>(x & 0xFF));
    x >>= 8;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace rns_shield
