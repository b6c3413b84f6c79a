#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rns_shield/bigint.hpp"
#include "rns_shield/hash.hpp"
#include "rns_shield/mask.hpp"
#include "rns_shield/rns.hpp"

namespace rns_shield {

enum class MaskMode : std::uint8_t {
  // Masked-hash cells hold hash sub-codes XORed with the paired column's
  // control residues. Hash and residues are cryptographically bound: a
  // diagonal data cell or a masked-hash cell cannot be repaired, only
  // detected.
  Paired = 0,
  // Hash sub-codes stored as-is plus an explicit residue section. Every
  // single-cell error is repairable, but the binding property is gone.
  Plain = 1,
};

struct SchemeConfig {
  std::size_t n = 0;               // sub-blocks per row/column
  std::size_t r = 0;               // control moduli
  std::size_t block_bits = 0;      // row block width (512 in production)
  std::size_t sub_block_bits = 0;  // w = block_bits / n
  std::size_t cell_width = 0;      // bits per masked cell / control residue
  std::uint16_t hash_algorithm = kHashSha512;
  MaskMode mask_mode = MaskMode::Paired;
  ModuliSetPtr moduli;  // one set governs every column

  std::size_t block_bytes() const { return (block_bits + 7) / 8; }
  std::size_t sub_code_bits() const {
    return hash_digest_bits(hash_algorithm) / n;
  }
  /// Throws ConfigInvalid when any invariant fails.
  void validate() const;
};

/// Production config: 512-bit rows, the n distinct primes immediately
/// above 2^w as information moduli and the next r primes as control
/// moduli. Fully determined by (n, r), so any party recomputes the same
/// set.
SchemeConfig make_config(std::size_t n = 8, std::size_t r = 2,
                         std::uint16_t hash_algorithm = kHashSha512,
                         MaskMode mask_mode = MaskMode::Paired);

/// Tiny test geometry: moduli {2,3,5,7}+{11,13}, 4-bit rows of 1-bit
/// sub-blocks, 8-bit stub hash. Mirrors the worked-example moduli.
SchemeConfig make_toy_config(MaskMode mask_mode = MaskMode::Paired);

/// Deterministic prime generation helper (Miller-Rabin with a fixed
/// witness set, exact for the word-scale widths used here).
std::vector<BigInt> consecutive_primes_above(const BigInt& floor,
                                             std::size_t count);

/// One protected unit: an n x n grid of sub-blocks whose rows are
/// hash-protected blocks and whose columns are RNS codewords, plus the
/// stored masked-hash rows (and, in plain mode, the explicit per-column
/// control residues).
struct ProtectedSuperBlock {
  std::vector<std::vector<std::uint8_t>> rows;  // n rows, block_bytes each
  std::vector<MaskedHashRow> masked;            // n rows of n cells
  std::vector<std::vector<BigInt>> residue_store;  // plain mode: n cols x r

  BigInt data_cell(const SchemeConfig& cfg, std::size_t i,
                   std::size_t j) const;
  void set_data_cell(const SchemeConfig& cfg, std::size_t i, std::size_t j,
                     const BigInt& value);
  std::vector<BigInt> column_residues(const SchemeConfig& cfg,
                                      std::size_t j) const;

  bool operator==(const ProtectedSuperBlock& other) const = default;
};

enum class RowVerdict : std::uint8_t { Intact, HashMismatch };
enum class ColumnVerdict : std::uint8_t { InRange, OutOfRange };

enum class Region : std::uint8_t { Data, MaskedHash, ResidueStore };

/// Coordinates of a suspected or repaired cell.
///   Data:         (row, col) in the data grid
///   MaskedHash:   row = grid row, col = masked cell index
///   ResidueStore: row = grid column, col = control residue index
struct Cell {
  Region region = Region::Data;
  std::size_t row = 0;
  std::size_t col = 0;

  auto operator<=>(const Cell&) const = default;
};

std::string to_string(const Cell& cell);

/// How a column's stored control residues were obtained during verify.
enum class ResidueRecovery : std::uint8_t {
  Direct,       // plain mode: read from the residue section
  Consensus,    // paired mode: unmasked copies agreed (or majority did)
  NoConsensus,  // paired mode: copies irreconcilable; stored residues
                // unknown (the recovery row's own data changed)
};

struct ColumnAnalysis {
  ResidueRecovery recovery = ResidueRecovery::Direct;
  std::vector<BigInt> stored_residues;     // resolved; empty if NoConsensus
  std::vector<std::size_t> minority_cells; // masked cells outvoted by the rest
  std::optional<RangeCheckResult> range;   // present when resolvable
  std::optional<LocalizeResult> rns;       // present when out of range
};

struct RepairRecord {
  Cell cell;
  bool repaired = false;
  std::string reason;  // empty when repaired

  bool operator==(const RepairRecord&) const = default;
};

struct IntegrityReport {
  std::vector<RowVerdict> row_verdicts;
  std::vector<ColumnVerdict> column_verdicts;
  std::vector<ColumnAnalysis> columns;
  std::vector<Cell> localized_cells;
  std::vector<RepairRecord> repairs;
  std::optional<bool> post_repair_valid;

  bool clean() const;
  std::vector<std::size_t> flagged_rows() const;
  std::vector<std::size_t> flagged_columns() const;
};

/// Build a protected super-block from n row blocks (contiguous,
/// n * block_bits bits). Control residues come from base extension of
/// each data column; row i's hash is masked with column i's residues.
ProtectedSuperBlock build(std::span<const std::uint8_t> blocks,
                          const SchemeConfig& cfg);

/// Two-dimensional check, no mutation. Row verdicts compare the unmasked
/// stored hash (using freshly base-extended residues) against the current
/// row hash. Column verdicts range-check the column codeword against the
/// stored control residues recovered through the paired row's hash.
///
/// Recovered residue copies are reconciled per control index: unanimous
/// or majority copies win, a tie is broken by agreement with the
/// recomputed residues, and when nothing agrees the recovery is
/// NoConsensus — the stored residues are unreachable because the paired
/// row itself changed. A NoConsensus column is reported OutOfRange only
/// when its own row is flagged and no other out-of-range column's
/// localization already explains that flag; this pins the diagonal-cell
/// signature without false-flagging the column paired with an
/// off-diagonal corruption.
IntegrityReport verify(const ProtectedSuperBlock& sb, const SchemeConfig& cfg);

/// Turn verify verdicts into suspected cells: RNS localization names the
/// row inside each out-of-range column, NoConsensus columns map to their
/// diagonal cell, and flagged rows with no RNS evidence map to
/// masked-hash cells (the outvoted copies when consensus identified
/// them). Fills report.localized_cells and returns it.
std::vector<Cell> localize(IntegrityReport& report,
                           const ProtectedSuperBlock& sb,
                           const SchemeConfig& cfg);

/// Repair the named cells (data cells via projection-based residue
/// correction; hash/residue cells only in plain mode), then re-verify.
/// Passes repeat while progress is made so that corruptions in distinct
/// columns coupled through shared rows unwind; each pass corrects at most
/// one residue per column. post_repair_valid reflects the final verify.
std::pair<ProtectedSuperBlock, IntegrityReport> repair(
    const ProtectedSuperBlock& sb, const std::vector<Cell>& cells,
    const SchemeConfig& cfg);

struct RedundancyReport {
  double k_red = 0.0;            // structural ratio r / n
  double mirror_baseline = 1.0;  // full-copy backup reference
  std::uint64_t control_bits_per_super_block = 0;  // r * cell_width * n
};

RedundancyReport redundancy_factor(const SchemeConfig& cfg);

}  // namespace rns_shield
