#include "rns_shield/bitio.hpp"

#include <cassert>

namespace rns_shield {

BigInt read_bits(std::span<const std::uint8_t> buf, std::size_t bit_offset,
                 std::size_t bit_count) {
  assert(bit_offset + bit_count <= buf.size() * 8);
  if (bit_count == 0) return 0;
  const std::size_t first = bit_offset / 8;
  const std::size_t last = (bit_offset + bit_count + 7) / 8;  // exclusive
  BigInt v = bytes_to_bigint(buf.subspan(first, last - first));
  const std::size_t tail = last * 8 - (bit_offset + bit_count);
  v >>= tail;
  v &= pow2(bit_count) - 1;
  return v;
}

void write_bits(std::span<std::uint8_t> buf, std::size_t bit_offset,
                std::size_t bit_count, const BigInt& value) {
  assert(bit_offset + bit_count <= buf.size() * 8);
  assert(bit_length(value) <= bit_count);
  if (bit_count == 0) return;
  const std::size_t first = bit_offset / 8;
  const std::size_t last = (bit_offset + bit_count + 7) / 8;  // exclusive
  const std::size_t tail = last * 8 - (bit_offset + bit_count);
  BigInt window = bytes_to_bigint(buf.subspan(first, last - first));
  const BigInt mask = (pow2(bit_count) - 1) << tail;
  window &= ~mask;
  window |= value << tail;
  // Spell the window back out over the same bytes, high byte first.
  for (std::size_t idx = last; idx-- > first;) {
    buf[idx] = static_cast<std::uint8_t>(window & 0xFF);
    window >>= 8;
  }
}

}  // namespace rns_shield
