#include "rns_shield/mask.hpp"

#include "rns_shield/errors.hpp"

namespace rns_shield {

MaskedHashRow mask_row(const HashCode& hash,
                       std::span<const BigInt> control_residues,
                       std::size_t cell_width) {
  if (control_residues.empty())
    throw ConfigInvalid("mask_row needs at least one control residue");
  if (hash.sub_code_bits() > cell_width)
    throw ConfigInvalid("cell width below hash sub-code width");
  for (const BigInt& res : control_residues)
    if (bit_length(res) > cell_width)
      throw CellOverflow("control residue wider than a cell");

  MaskedHashRow row;
  row.cell_width = cell_width;
  row.cells.reserve(hash.sub_code_count());
  for (std::size_t t = 0; t < hash.sub_code_count(); ++t)
    row.cells.push_back(hash.sub_code(t) ^
                        control_residues[t % control_residues.size()]);
  return row;
}

std::vector<BigInt> UnmaskResult::sub_codes(std::size_t sub_code_bits) const {
  const BigInt mask = pow2(sub_code_bits) - 1;
  std::vector<BigInt> out;
  out.reserve(recovered.size());
  for (const BigInt& cell : recovered) out.push_back(cell & mask);
  return out;
}

UnmaskResult unmask_row(const MaskedHashRow& masked,
                        std::span<const BigInt> control_residues,
                        std::size_t sub_code_bits) {
  if (control_residues.empty())
    throw ConfigInvalid("unmask_row needs at least one control residue");
  UnmaskResult out;
  out.recovered.reserve(masked.cells.size());
  for (std::size_t t = 0; t < masked.cells.size(); ++t) {
    BigInt cell = masked.cells[t] ^
                  control_residues[t % control_residues.size()];
    if (bit_length(cell) > sub_code_bits) out.truncation_loss = true;
    out.recovered.push_back(std::move(cell));
  }
  return out;
}

std::vector<BigInt> residue_copies(const MaskedHashRow& masked,
                                   const HashCode& hash) {
  std::vector<BigInt> out;
  out.reserve(masked.cells.size());
  for (std::size_t t = 0; t < masked.cells.size(); ++t)
    out.push_back(masked.cells[t] ^ hash.sub_code(t));
  return out;
}

}  // namespace rns_shield
