#include "rns_shield/container.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>

#include "rns_shield/bitio.hpp"
#include "rns_shield/errors.hpp"

namespace rns_shield {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>(v >> shift));
}

class HeaderParser {
public:
  explicit HeaderParser(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(
        (bytes_[pos_] << 8) | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 8;
    return v;
  }
  std::span<const std::uint8_t> raw(std::size_t count) {
    need(count);
    auto out = bytes_.subspan(pos_, count);
    pos_ += count;
    return out;
  }
  std::size_t position() const { return pos_; }

private:
  void need(std::size_t count) const {
    if (pos_ + count > bytes_.size())
      throw Truncated("container header truncated", 0);
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0, bytes.data(), static_cast<uInt>(bytes.size())));
}

}  // namespace

ContainerHeader ContainerHeader::from_config(const SchemeConfig& cfg,
                                             std::uint64_t original_length,
                                             std::uint64_t super_block_count) {
  ContainerHeader h;
  h.n = cfg.n;
  h.r = cfg.r;
  h.sub_block_bits = cfg.sub_block_bits;
  h.cell_width = cfg.cell_width;
  h.hash_algorithm = cfg.hash_algorithm;
  h.mask_mode = cfg.mask_mode;
  h.moduli.assign(cfg.moduli->moduli().begin(), cfg.moduli->moduli().end());
  h.original_length = original_length;
  h.super_block_count = super_block_count;
  return h;
}

SchemeConfig ContainerHeader::to_config() const {
  if (moduli.size() != n + r)
    throw ConfigInvalid("header moduli count does not match n + r");
  SchemeConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.sub_block_bits = sub_block_bits;
  cfg.block_bits = n * sub_block_bits;
  cfg.cell_width = cell_width;
  cfg.hash_algorithm = hash_algorithm;
  cfg.mask_mode = mask_mode;
  std::vector<BigInt> info(moduli.begin(), moduli.begin() + n);
  std::vector<BigInt> control(moduli.begin() + n, moduli.end());
  cfg.moduli = make_moduli_set(std::move(info), std::move(control));
  cfg.validate();
  return cfg;
}

std::vector<std::uint8_t> serialize_header(const ContainerHeader& header) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put_u16(out, header.format_version);
  put_u16(out, static_cast<std::uint16_t>(header.n));
  put_u16(out, static_cast<std::uint16_t>(header.r));
  put_u16(out, static_cast<std::uint16_t>(header.sub_block_bits));
  put_u16(out, static_cast<std::uint16_t>(header.cell_width));
  put_u16(out, header.hash_algorithm);
  out.push_back(static_cast<std::uint8_t>(header.mask_mode));
  put_u16(out, static_cast<std::uint16_t>(header.moduli.size()));
  for (const BigInt& m : header.moduli) {
    const std::vector<std::uint8_t> bytes = bigint_to_bytes(m);
    put_u16(out, static_cast<std::uint16_t>(bytes.size()));
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  put_u64(out, header.original_length);
  put_u64(out, header.super_block_count);
  put_u32(out, crc32_of(out));
  return out;
}

std::size_t data_bytes_per_super_block(const SchemeConfig& cfg) {
  const std::size_t bits = cfg.n * cfg.block_bits;
  if (bits % 8 != 0)
    throw ConfigInvalid("super-block data region must be whole bytes");
  return bits / 8;
}

namespace {

std::size_t super_block_payload_bits(const SchemeConfig& cfg) {
  std::size_t bits = cfg.n * cfg.block_bits;         // data grid
  bits += cfg.n * cfg.n * cfg.cell_width;            // masked-hash region
  if (cfg.mask_mode == MaskMode::Plain)
    bits += cfg.n * cfg.r * cfg.cell_width;          // residue section
  return bits;
}

}  // namespace

std::size_t super_block_bytes(const SchemeConfig& cfg) {
  return (super_block_payload_bits(cfg) + 7) / 8;
}

std::vector<std::uint8_t> serialize_super_block(const ProtectedSuperBlock& sb,
                                                const SchemeConfig& cfg) {
  std::vector<std::uint8_t> out(super_block_bytes(cfg), 0);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    write_bits(out, pos, cfg.block_bits, read_bits(sb.rows[i], 0, cfg.block_bits));
    pos += cfg.block_bits;
  }
  for (std::size_t i = 0; i < cfg.n; ++i)
    for (std::size_t t = 0; t < cfg.n; ++t) {
      write_bits(out, pos, cfg.cell_width, sb.masked[i].cells[t]);
      pos += cfg.cell_width;
    }
  if (cfg.mask_mode == MaskMode::Plain)
    for (std::size_t j = 0; j < cfg.n; ++j)
      for (std::size_t c = 0; c < cfg.r; ++c) {
        write_bits(out, pos, cfg.cell_width, sb.residue_store[j][c]);
        pos += cfg.cell_width;
      }
  return out;
}

ProtectedSuperBlock deserialize_super_block(std::span<const std::uint8_t> buf,
                                            const SchemeConfig& cfg) {
  if (buf.size() != super_block_bytes(cfg))
    throw ContainerError("super-block payload has the wrong size");
  ProtectedSuperBlock sb;
  std::size_t pos = 0;
  sb.rows.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    std::vector<std::uint8_t> row(cfg.block_bytes(), 0);
    write_bits(row, 0, cfg.block_bits, read_bits(buf, pos, cfg.block_bits));
    pos += cfg.block_bits;
    sb.rows.push_back(std::move(row));
  }
  sb.masked.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    MaskedHashRow row;
    row.cell_width = cfg.cell_width;
    row.cells.reserve(cfg.n);
    for (std::size_t t = 0; t < cfg.n; ++t) {
      row.cells.push_back(read_bits(buf, pos, cfg.cell_width));
      pos += cfg.cell_width;
    }
    sb.masked.push_back(std::move(row));
  }
  if (cfg.mask_mode == MaskMode::Plain) {
    sb.residue_store.reserve(cfg.n);
    for (std::size_t j = 0; j < cfg.n; ++j) {
      std::vector<BigInt> col;
      col.reserve(cfg.r);
      for (std::size_t c = 0; c < cfg.r; ++c) {
        col.push_back(read_bits(buf, pos, cfg.cell_width));
        pos += cfg.cell_width;
      }
      sb.residue_store.push_back(std::move(col));
    }
  }
  return sb;
}

std::vector<std::uint8_t> write_volume(std::span<const std::uint8_t> source,
                                       const SchemeConfig& cfg) {
  cfg.validate();
  const std::size_t per_sb = data_bytes_per_super_block(cfg);
  const std::uint64_t count = (source.size() + per_sb - 1) / per_sb;

  std::vector<std::uint8_t> out = serialize_header(
      ContainerHeader::from_config(cfg, source.size(), count));
  out.reserve(out.size() + count * super_block_bytes(cfg));

  std::vector<std::uint8_t> chunk(per_sb, 0);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const std::size_t offset = idx * per_sb;
    const std::size_t take = std::min(per_sb, source.size() - offset);
    std::fill(chunk.begin(), chunk.end(), 0);
    std::memcpy(chunk.data(), source.data() + offset, take);
    const std::vector<std::uint8_t> sb_bytes =
        serialize_super_block(build(chunk, cfg), cfg);
    out.insert(out.end(), sb_bytes.begin(), sb_bytes.end());
  }
  return out;
}

VolumeReader::VolumeReader(std::span<const std::uint8_t> bytes)
    : bytes_(bytes) {
  HeaderParser p(bytes);
  const auto magic = p.raw(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin()))
    throw BadMagic("not a protected volume (bad magic)");
  header_.format_version = p.u16();
  if (header_.format_version != kFormatVersion)
    throw UnsupportedVersion("unsupported container format version " +
                             std::to_string(header_.format_version));
  header_.n = p.u16();
  header_.r = p.u16();
  header_.sub_block_bits = p.u16();
  header_.cell_width = p.u16();
  header_.hash_algorithm = p.u16();
  const std::uint8_t mode = p.raw(1)[0];
  if (mode > 1) throw ContainerError("unknown mask mode");
  header_.mask_mode = static_cast<MaskMode>(mode);
  const std::uint16_t moduli_count = p.u16();
  header_.moduli.reserve(moduli_count);
  for (std::uint16_t i = 0; i < moduli_count; ++i) {
    const std::uint16_t len = p.u16();
    header_.moduli.push_back(bytes_to_bigint(p.raw(len)));
  }
  header_.original_length = p.u64();
  header_.super_block_count = p.u64();
  const std::size_t crc_start = p.position();
  const std::uint32_t stored_crc = p.u32();
  if (crc32_of(bytes.first(crc_start)) != stored_crc)
    throw ChecksumMismatch("header checksum mismatch");
  header_size_ = p.position();

  config_ = header_.to_config();  // throws ConfigInvalid on bad parameters
  sb_bytes_ = super_block_bytes(config_);

  const std::size_t payload = bytes_.size() - header_size_;
  const std::uint64_t available = payload / sb_bytes_;
  if (available < header_.super_block_count)
    throw Truncated("volume payload truncated at super-block " +
                        std::to_string(available),
                    available);
  if (payload != header_.super_block_count * sb_bytes_)
    throw ContainerError("trailing bytes after the last super-block");

  const std::size_t per_sb = data_bytes_per_super_block(config_);
  if (header_.super_block_count == 0) {
    if (header_.original_length != 0)
      throw ContainerError("nonzero length with no super-blocks");
  } else if (header_.original_length > header_.super_block_count * per_sb ||
             header_.original_length <=
                 (header_.super_block_count - 1) * per_sb) {
    throw ContainerError("original length inconsistent with super-block "
                         "count");
  }
}

std::size_t VolumeReader::super_block_offset(std::uint64_t index) const {
  return header_size_ + static_cast<std::size_t>(index) * sb_bytes_;
}

std::span<const std::uint8_t> VolumeReader::super_block_bytes_at(
    std::uint64_t index) const {
  if (index >= header_.super_block_count)
    throw ContainerError("super-block index out of range");
  return bytes_.subspan(super_block_offset(index), sb_bytes_);
}

ProtectedSuperBlock VolumeReader::super_block(std::uint64_t index) const {
  return deserialize_super_block(super_block_bytes_at(index), config_);
}

std::vector<std::uint8_t> reassemble_source(const VolumeReader& reader) {
  const SchemeConfig& cfg = reader.config();
  const std::size_t per_sb = data_bytes_per_super_block(cfg);
  std::vector<std::uint8_t> out;
  out.reserve(reader.header().original_length);
  for (std::uint64_t idx = 0; idx < reader.super_block_count(); ++idx) {
    // The data region sits bit-identical at the front of each payload.
    const auto sb_bytes = reader.super_block_bytes_at(idx);
    out.insert(out.end(), sb_bytes.begin(), sb_bytes.begin() + per_sb);
  }
  out.resize(reader.header().original_length);
  return out;
}

}  // namespace rns_shield
