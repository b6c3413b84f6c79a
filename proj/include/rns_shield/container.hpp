#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rns_shield/scheme.hpp"

namespace rns_shield {

inline constexpr std::array<std::uint8_t, 4> kMagic{'R', 'N', 'S', 'I'};
inline constexpr std::uint16_t kFormatVersion = 1;

/// Self-describing volume header. All integers big-endian; moduli are
/// length-prefixed minimal big-endian. A CRC-32 over every preceding
/// header byte closes the header.
struct ContainerHeader {
  std::uint16_t format_version = kFormatVersion;
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t sub_block_bits = 0;
  std::size_t cell_width = 0;
  std::uint16_t hash_algorithm = kHashSha512;
  MaskMode mask_mode = MaskMode::Paired;
  std::vector<BigInt> moduli;  // information group first, then control
  std::uint64_t original_length = 0;
  std::uint64_t super_block_count = 0;

  static ContainerHeader from_config(const SchemeConfig& cfg,
                                     std::uint64_t original_length,
                                     std::uint64_t super_block_count);
  SchemeConfig to_config() const;
};

std::vector<std::uint8_t> serialize_header(const ContainerHeader& header);

/// Serialized super-block width in bytes (payload stride).
std::size_t super_block_bytes(const SchemeConfig& cfg);
/// Source bytes protected per super-block.
std::size_t data_bytes_per_super_block(const SchemeConfig& cfg);

std::vector<std::uint8_t> serialize_super_block(const ProtectedSuperBlock& sb,
                                                const SchemeConfig& cfg);
ProtectedSuperBlock deserialize_super_block(std::span<const std::uint8_t> buf,
                                            const SchemeConfig& cfg);

/// Protect a byte stream: slice into 512-bit rows, group n rows per
/// super-block, zero-pad the tail, and serialize. Deterministic for
/// identical input and config.
std::vector<std::uint8_t> write_volume(std::span<const std::uint8_t> source,
                                       const SchemeConfig& cfg);

/// Validated view over a serialized volume. The header is checked in full
/// (magic, version, structure, checksum, parameter invariants, payload
/// size) before any payload can be reached; super-blocks decode lazily.
/// Does not own the bytes.
class VolumeReader {
public:
  explicit VolumeReader(std::span<const std::uint8_t> bytes);

  const ContainerHeader& header() const { return header_; }
  const SchemeConfig& config() const { return config_; }
  std::uint64_t super_block_count() const { return header_.super_block_count; }
  std::size_t header_size() const { return header_size_; }

  ProtectedSuperBlock super_block(std::uint64_t index) const;
  std::span<const std::uint8_t> super_block_bytes_at(
      std::uint64_t index) const;
  std::size_t super_block_offset(std::uint64_t index) const;

private:
  std::span<const std::uint8_t> bytes_;
  ContainerHeader header_;
  SchemeConfig config_;
  std::size_t header_size_ = 0;
  std::size_t sb_bytes_ = 0;
};

/// Concatenate the data grids and trim to the recorded original length.
std::vector<std::uint8_t> reassemble_source(const VolumeReader& reader);

}  // namespace rns_shield
