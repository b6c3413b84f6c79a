#pragma once

#include <cstdint>
#include <span>

#include "rns_shield/bigint.hpp"

namespace rns_shield {

// MSB-first bit addressing: bit 0 is the high bit of byte 0. Values are
// stored big-endian within their bit window.

/// Read bit_count bits starting at bit_offset.
BigInt read_bits(std::span<const std::uint8_t> buf, std::size_t bit_offset,
                 std::size_t bit_count);

/// Write value into the bit_count-wide window at bit_offset.
/// value must satisfy bit_length(value) <= bit_count.
void write_bits(std::span<std::uint8_t> buf, std::size_t bit_offset,
                std::size_t bit_count, const BigInt& value);

}  // namespace rns_shield
