#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rns_shield/bigint.hpp"
#include "rns_shield/hash.hpp"

namespace rns_shield {

/// One stored row of the masked-hash region: n cells of cell_width bits.
struct MaskedHashRow {
  std::vector<BigInt> cells;
  std::size_t cell_width = 0;

  bool operator==(const MaskedHashRow& other) const = default;
};

/// Cell t = zero-extended hash sub-code t XOR control residue (t mod r).
/// Cyclic reuse pairs n sub-codes with r residues for any r in [1, n];
/// with r == n each sub-code meets its own residue.
/// Throws CellOverflow when a residue does not fit in cell_width bits.
MaskedHashRow mask_row(const HashCode& hash,
                       std::span<const BigInt> control_residues,
                       std::size_t cell_width);

struct UnmaskResult {
  // True when some recovered cell kept bits above the sub-code width:
  // the G cell or the residues used for unmasking do not match how the
  // row was masked.
  bool truncation_loss = false;
  // Recovered cells before truncation; equal to the zero-extended
  // sub-codes of the original hash when nothing was corrupted.
  std::vector<BigInt> recovered;

  /// Sub-codes truncated to width; only faithful when !truncation_loss.
  std::vector<BigInt> sub_codes(std::size_t sub_code_bits) const;
};

/// Inverse of mask_row with the same residues.
UnmaskResult unmask_row(const MaskedHashRow& masked,
                        std::span<const BigInt> control_residues,
                        std::size_t sub_code_bits);

/// XOR the row with a hash instead of residues: each cell then claims to
/// be a copy of stored control residue (t mod r). Used to recover the
/// residues a row was masked with, given the hash of the paired row.
std::vector<BigInt> residue_copies(const MaskedHashRow& masked,
                                   const HashCode& hash);

}  // namespace rns_shield
