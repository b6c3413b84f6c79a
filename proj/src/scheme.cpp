#include "rns_shield/scheme.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include <boost/multiprecision/integer.hpp>

#include "rns_shield/bitio.hpp"
#include "rns_shield/errors.hpp"

namespace rns_shield {

// ---------------------------------------------------------------------------
// configuration

void SchemeConfig::validate() const {
  if (n == 0) throw ConfigInvalid("n must be positive");
  if (r == 0) throw ConfigInvalid("at least one control modulus required");
  if (block_bits == 0 || sub_block_bits == 0 ||
      sub_block_bits * n != block_bits)
    throw ConfigInvalid("block width must equal n * sub-block width");
  if (!moduli) throw ConfigInvalid("missing moduli set");
  if (moduli->info_count() != n || moduli->control_count() != r)
    throw ConfigInvalid("moduli set does not match (n, r)");
  if (hash_digest_bits(hash_algorithm) % n != 0)
    throw ConfigInvalid("n must divide the hash digest width");
  if (sub_code_bits() > cell_width)
    throw ConfigInvalid("cell width below hash sub-code width");
  const BigInt min_info = pow2(sub_block_bits);
  for (const BigInt& p : moduli->info_moduli())
    if (p < min_info)
      throw ConfigInvalid(
          "information modulus too small for the sub-block width");
  for (const BigInt& p : moduli->control_moduli())
    if (bit_length(p) > cell_width)
      throw ConfigInvalid("cell width below a control modulus");
}

namespace {

bool is_prime(const BigInt& n) {
  static constexpr int kWitnesses[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                       31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                       73};
  if (n < 2) return false;
  for (int p : kWitnesses) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  BigInt d = n - 1;
  std::size_t s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (int a : kWitnesses) {
    BigInt x = boost::multiprecision::powm(BigInt(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (std::size_t i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace

std::vector<BigInt> consecutive_primes_above(const BigInt& floor,
                                             std::size_t count) {
  std::vector<BigInt> out;
  out.reserve(count);
  BigInt c = floor < 1 ? BigInt(1) : floor;
  ++c;
  while (out.size() < count) {
    if (is_prime(c)) out.push_back(c);
    ++c;
  }
  return out;
}

SchemeConfig make_config(std::size_t n, std::size_t r,
                         std::uint16_t hash_algorithm, MaskMode mask_mode) {
  if (n == 0 || 512 % n != 0)
    throw ConfigInvalid("n must divide 512");
  if (r == 0) throw ConfigInvalid("r must be positive");
  SchemeConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.block_bits = 512;
  cfg.sub_block_bits = 512 / n;
  cfg.hash_algorithm = hash_algorithm;
  cfg.mask_mode = mask_mode;
  std::vector<BigInt> primes =
      consecutive_primes_above(pow2(cfg.sub_block_bits) - 1, n + r);
  std::vector<BigInt> info(primes.begin(), primes.begin() + n);
  std::vector<BigInt> control(primes.begin() + n, primes.end());
  cfg.cell_width = bit_length(control.back());
  cfg.moduli = make_moduli_set(std::move(info), std::move(control));
  cfg.validate();
  return cfg;
}

SchemeConfig make_toy_config(MaskMode mask_mode) {
  SchemeConfig cfg;
  cfg.n = 4;
  cfg.r = 2;
  cfg.block_bits = 4;
  cfg.sub_block_bits = 1;
  cfg.hash_algorithm = kHashTestStub8;
  cfg.mask_mode = mask_mode;
  cfg.moduli = make_moduli_set({2, 3, 5, 7}, {11, 13});
  cfg.cell_width = bit_length(cfg.moduli->modulus(5));  // 13 -> 4 bits
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// super-block accessors

BigInt ProtectedSuperBlock::data_cell(const SchemeConfig& cfg, std::size_t i,
                                      std::size_t j) const {
  return read_bits(rows[i], j * cfg.sub_block_bits, cfg.sub_block_bits);
}

void ProtectedSuperBlock::set_data_cell(const SchemeConfig& cfg,
                                        std::size_t i, std::size_t j,
                                        const BigInt& value) {
  write_bits(rows[i], j * cfg.sub_block_bits, cfg.sub_block_bits, value);
}

std::vector<BigInt> ProtectedSuperBlock::column_residues(
    const SchemeConfig& cfg, std::size_t j) const {
  std::vector<BigInt> out;
  out.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) out.push_back(data_cell(cfg, i, j));
  return out;
}

std::string to_string(const Cell& cell) {
  const char* tag = cell.region == Region::Data ? "data"
                    : cell.region == Region::MaskedHash ? "ghash"
                                                        : "residue";
  return std::string(tag) + "(" + std::to_string(cell.row) + "," +
         std::to_string(cell.col) + ")";
}

bool IntegrityReport::clean() const {
  for (RowVerdict v : row_verdicts)
    if (v != RowVerdict::Intact) return false;
  for (ColumnVerdict v : column_verdicts)
    if (v != ColumnVerdict::InRange) return false;
  return true;
}

std::vector<std::size_t> IntegrityReport::flagged_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < row_verdicts.size(); ++i)
    if (row_verdicts[i] == RowVerdict::HashMismatch) out.push_back(i);
  return out;
}

std::vector<std::size_t> IntegrityReport::flagged_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < column_verdicts.size(); ++j)
    if (column_verdicts[j] == ColumnVerdict::OutOfRange) out.push_back(j);
  return out;
}

// ---------------------------------------------------------------------------
// build

namespace {

void check_dimensions(const ProtectedSuperBlock& sb, const SchemeConfig& cfg) {
  if (sb.rows.size() != cfg.n || sb.masked.size() != cfg.n)
    throw ConfigInvalid("super-block dimensions do not match config");
  for (const auto& row : sb.rows)
    if (row.size() != cfg.block_bytes())
      throw ConfigInvalid("row byte width does not match config");
  for (const auto& m : sb.masked)
    if (m.cells.size() != cfg.n || m.cell_width != cfg.cell_width)
      throw ConfigInvalid("masked row does not match config");
  if (cfg.mask_mode == MaskMode::Plain) {
    if (sb.residue_store.size() != cfg.n)
      throw ConfigInvalid("missing residue store");
    for (const auto& col : sb.residue_store)
      if (col.size() != cfg.r)
        throw ConfigInvalid("residue store column does not match config");
  } else if (!sb.residue_store.empty()) {
    throw ConfigInvalid("unexpected residue store under paired masking");
  }
}

std::vector<HashCode> row_hashes(const ProtectedSuperBlock& sb,
                                 const SchemeConfig& cfg) {
  std::vector<HashCode> out;
  out.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i)
    out.push_back(hash_block(sb.rows[i], cfg.hash_algorithm, cfg.n));
  return out;
}

std::vector<std::vector<BigInt>> recomputed_controls(
    const ProtectedSuperBlock& sb, const SchemeConfig& cfg) {
  std::vector<std::vector<BigInt>> out;
  out.reserve(cfg.n);
  for (std::size_t j = 0; j < cfg.n; ++j)
    out.push_back(base_extend(sb.column_residues(cfg, j), *cfg.moduli));
  return out;
}

MaskedHashRow plain_hash_row(const HashCode& hash, std::size_t n,
                             std::size_t cell_width) {
  MaskedHashRow row;
  row.cell_width = cell_width;
  row.cells.reserve(n);
  for (std::size_t t = 0; t < n; ++t) row.cells.push_back(hash.sub_code(t));
  return row;
}

}  // namespace

ProtectedSuperBlock build(std::span<const std::uint8_t> blocks,
                          const SchemeConfig& cfg) {
  cfg.validate();
  const std::size_t total_bits = cfg.n * cfg.block_bits;
  if (blocks.size() != (total_bits + 7) / 8)
    throw ConfigInvalid("build expects exactly n blocks");

  ProtectedSuperBlock sb;
  sb.rows.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    std::vector<std::uint8_t> row(cfg.block_bytes(), 0);
    write_bits(row, 0, cfg.block_bits,
               read_bits(blocks, i * cfg.block_bits, cfg.block_bits));
    sb.rows.push_back(std::move(row));
  }

  const std::vector<HashCode> hashes = row_hashes(sb, cfg);
  const std::vector<std::vector<BigInt>> controls =
      recomputed_controls(sb, cfg);

  sb.masked.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    if (cfg.mask_mode == MaskMode::Paired)
      sb.masked.push_back(mask_row(hashes[i], controls[i], cfg.cell_width));
    else
      sb.masked.push_back(plain_hash_row(hashes[i], cfg.n, cfg.cell_width));
  }
  if (cfg.mask_mode == MaskMode::Plain) sb.residue_store = controls;
  return sb;
}

// ---------------------------------------------------------------------------
// verify

namespace {

// Reconcile the n recovered copies of a column's stored control residues.
// Returns false when some control index has no defensible value.
bool reconcile_copies(const std::vector<BigInt>& copies,
                      const std::vector<BigInt>& recomputed,
                      const SchemeConfig& cfg, std::vector<BigInt>& resolved,
                      std::vector<std::size_t>& minority) {
  const std::size_t n = cfg.n;
  const std::size_t r = cfg.r;
  resolved.assign(r, BigInt(0));
  minority.clear();
  for (std::size_t c = 0; c < r; ++c) {
    const BigInt& modulus = cfg.moduli->modulus(n + c);
    std::map<BigInt, std::size_t> votes;
    std::size_t class_size = 0;
    for (std::size_t t = c; t < n; t += r) {
      ++class_size;
      if (copies[t] < modulus) ++votes[copies[t]];
    }
    const BigInt* winner = nullptr;
    std::size_t best = 0;
    for (const auto& [value, count] : votes)
      if (count > best) {
        best = count;
        winner = &value;
      }
    if (winner != nullptr && best * 2 > class_size) {
      resolved[c] = *winner;
    } else if (votes.count(recomputed[c]) > 0) {
      // No majority; the copies that agree with the freshly base-extended
      // residue are the credible ones.
      resolved[c] = recomputed[c];
    } else {
      return false;
    }
    for (std::size_t t = c; t < n; t += r)
      if (copies[t] != resolved[c]) minority.push_back(t);
  }
  std::sort(minority.begin(), minority.end());
  return true;
}

std::vector<BigInt> column_codeword(const ProtectedSuperBlock& sb,
                                    const SchemeConfig& cfg, std::size_t j,
                                    const std::vector<BigInt>& stored) {
  std::vector<BigInt> residues = sb.column_residues(cfg, j);
  residues.insert(residues.end(), stored.begin(), stored.end());
  return residues;
}

// Stored residues may be out of domain after corruption (plain mode).
// Positions listed in `invalid` are clamped so that projections excluding
// them stay computable; they must never be used unclamped.
ResidueVector make_workable_vector(const SchemeConfig& cfg,
                                   std::vector<BigInt> residues) {
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const BigInt& p = cfg.moduli->modulus(i);
    if (residues[i] >= p) residues[i] %= p;
  }
  return ResidueVector(cfg.moduli, std::move(residues));
}

std::vector<std::size_t> out_of_domain_controls(
    const SchemeConfig& cfg, const std::vector<BigInt>& stored) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < stored.size(); ++c)
    if (stored[c] >= cfg.moduli->modulus(cfg.n + c)) out.push_back(c);
  return out;
}

}  // namespace

IntegrityReport verify(const ProtectedSuperBlock& sb,
                       const SchemeConfig& cfg) {
  cfg.validate();
  check_dimensions(sb, cfg);

  IntegrityReport report;
  report.row_verdicts.assign(cfg.n, RowVerdict::Intact);
  report.column_verdicts.assign(cfg.n, ColumnVerdict::InRange);
  report.columns.assign(cfg.n, ColumnAnalysis{});

  const std::vector<HashCode> hashes = row_hashes(sb, cfg);
  const std::vector<std::vector<BigInt>> recomputed =
      recomputed_controls(sb, cfg);

  // Row dimension: unmask the stored row with the residues recomputed from
  // the paired column and compare against the current row hash. A
  // corrupted row, a corrupted paired column, and a corrupted stored cell
  // all surface here as a mismatch.
  for (std::size_t i = 0; i < cfg.n; ++i) {
    bool intact = true;
    if (cfg.mask_mode == MaskMode::Paired) {
      const UnmaskResult un =
          unmask_row(sb.masked[i], recomputed[i], cfg.sub_code_bits());
      for (std::size_t t = 0; t < cfg.n && intact; ++t)
        intact = un.recovered[t] == hashes[i].sub_code(t);
    } else {
      for (std::size_t t = 0; t < cfg.n && intact; ++t)
        intact = sb.masked[i].cells[t] == hashes[i].sub_code(t);
    }
    if (!intact) report.row_verdicts[i] = RowVerdict::HashMismatch;
  }

  // Column dimension: range-check each codeword against the stored
  // control residues.
  std::vector<std::size_t> deferred;
  for (std::size_t j = 0; j < cfg.n; ++j) {
    ColumnAnalysis& an = report.columns[j];
    if (cfg.mask_mode == MaskMode::Plain) {
      an.recovery = ResidueRecovery::Direct;
      an.stored_residues = sb.residue_store[j];
      const std::vector<std::size_t> invalid =
          out_of_domain_controls(cfg, an.stored_residues);
      if (!invalid.empty()) {
        // An out-of-domain stored residue is a corruption proof in
        // itself; localization is immediate when it is the only one.
        report.column_verdicts[j] = ColumnVerdict::OutOfRange;
        if (invalid.size() == 1) {
          LocalizeResult loc;
          loc.kind = LocalizeResult::Kind::Localized;
          loc.index = cfg.n + invalid.front();
          loc.candidates = {loc.index};
          an.rns = loc;
        }
        continue;
      }
    } else {
      an.recovery = ResidueRecovery::Consensus;
      const std::vector<BigInt> copies =
          residue_copies(sb.masked[j], hashes[j]);
      std::vector<BigInt> resolved;
      if (!reconcile_copies(copies, recomputed[j], cfg, resolved,
                            an.minority_cells)) {
        an.recovery = ResidueRecovery::NoConsensus;
        deferred.push_back(j);
        continue;
      }
      an.stored_residues = std::move(resolved);
    }

    const ResidueVector vec = make_workable_vector(
        cfg, column_codeword(sb, cfg, j, an.stored_residues));
    an.range = range_check(vec);
    if (!an.range->in_range) {
      report.column_verdicts[j] = ColumnVerdict::OutOfRange;
      an.rns = localize_residue_error(vec);
    }
  }

  // A NoConsensus column means its paired row's data changed, so the
  // stored residues are sealed behind an unknowable hash. If another
  // column's localization already names that row the flag is explained
  // (off-diagonal corruption); otherwise the change sits in this very
  // column — the diagonal signature — and the column is flagged.
  if (!deferred.empty()) {
    std::set<std::size_t> explained;
    for (std::size_t j = 0; j < cfg.n; ++j) {
      const ColumnAnalysis& an = report.columns[j];
      if (report.column_verdicts[j] != ColumnVerdict::OutOfRange || !an.rns)
        continue;
      if (an.rns->kind == LocalizeResult::Kind::Localized &&
          an.rns->index < cfg.n)
        explained.insert(an.rns->index);
      if (an.rns->kind == LocalizeResult::Kind::Ambiguous)
        for (std::size_t cand : an.rns->candidates)
          if (cand < cfg.n) explained.insert(cand);
    }
    for (std::size_t j : deferred)
      if (report.row_verdicts[j] == RowVerdict::HashMismatch &&
          explained.count(j) == 0)
        report.column_verdicts[j] = ColumnVerdict::OutOfRange;
  }

  return report;
}

// ---------------------------------------------------------------------------
// localize

namespace {

void add_masked_cells(std::set<Cell>& cells, const ColumnAnalysis& an,
                      const SchemeConfig& cfg, std::size_t grid_row,
                      std::size_t control_index_or_all) {
  // Prefer the copies that lost the vote; fall back to the whole class
  // (or the whole row when no class is singled out).
  std::vector<std::size_t> targets;
  for (std::size_t t : an.minority_cells)
    if (control_index_or_all >= cfg.r || t % cfg.r == control_index_or_all)
      targets.push_back(t);
  if (targets.empty()) {
    for (std::size_t t = 0; t < cfg.n; ++t)
      if (control_index_or_all >= cfg.r || t % cfg.r == control_index_or_all)
        targets.push_back(t);
  }
  for (std::size_t t : targets)
    cells.insert(Cell{Region::MaskedHash, grid_row, t});
}

}  // namespace

std::vector<Cell> localize(IntegrityReport& report,
                           const ProtectedSuperBlock& sb,
                           const SchemeConfig& cfg) {
  const std::vector<std::size_t> rf = report.flagged_rows();
  const std::set<std::size_t> flagged_rows(rf.begin(), rf.end());
  std::set<Cell> cells;

  for (std::size_t j = 0; j < cfg.n; ++j) {
    if (report.column_verdicts[j] != ColumnVerdict::OutOfRange) continue;
    const ColumnAnalysis& an = report.columns[j];

    if (an.recovery == ResidueRecovery::NoConsensus) {
      cells.insert(Cell{Region::Data, j, j});
      continue;
    }
    if (!an.rns) {
      // Plain mode, several stored residues out of domain.
      for (std::size_t c :
           out_of_domain_controls(cfg, an.stored_residues))
        cells.insert(Cell{Region::ResidueStore, j, c});
      continue;
    }

    switch (an.rns->kind) {
      case LocalizeResult::Kind::Localized: {
        const std::size_t p = an.rns->index;
        if (p < cfg.n) {
          cells.insert(Cell{Region::Data, p, j});
        } else if (cfg.mask_mode == MaskMode::Plain) {
          cells.insert(Cell{Region::ResidueStore, j, p - cfg.n});
        } else {
          add_masked_cells(cells, an, cfg, j, p - cfg.n);
        }
        break;
      }
      case LocalizeResult::Kind::Ambiguous: {
        // Keep the candidates consistent with the row-flag signature;
        // a unique survivor is repairable, several are reported as-is.
        std::vector<std::size_t> filtered;
        for (std::size_t p : an.rns->candidates)
          if (p < cfg.n && flagged_rows.count(p) > 0) filtered.push_back(p);
        if (filtered.empty())
          for (std::size_t p : an.rns->candidates)
            if (p < cfg.n) filtered.push_back(p);
        for (std::size_t p : filtered) cells.insert(Cell{Region::Data, p, j});
        break;
      }
      case LocalizeResult::Kind::Unlocalizable: {
        bool named = false;
        for (std::size_t i : rf)
          if (i != j) {
            cells.insert(Cell{Region::Data, i, j});
            named = true;
          }
        if (!named) {
          if (cfg.mask_mode == MaskMode::Plain)
            for (std::size_t c = 0; c < cfg.r; ++c)
              cells.insert(Cell{Region::ResidueStore, j, c});
          else
            add_masked_cells(cells, an, cfg, j, cfg.r);
        }
        break;
      }
      case LocalizeResult::Kind::NoError:
        break;
    }
  }

  // Flagged rows with no data-cell or column explanation point at the
  // stored hash region itself.
  for (std::size_t i : rf) {
    bool covered = report.column_verdicts[i] == ColumnVerdict::OutOfRange;
    for (const Cell& c : cells) {
      if (covered) break;
      covered = (c.region == Region::Data && c.row == i) ||
                (c.region == Region::MaskedHash && c.row == i);
    }
    if (covered) continue;
    if (cfg.mask_mode == MaskMode::Plain) {
      const HashCode h = hash_block(sb.rows[i], cfg.hash_algorithm, cfg.n);
      for (std::size_t t = 0; t < cfg.n; ++t)
        if (sb.masked[i].cells[t] != h.sub_code(t))
          cells.insert(Cell{Region::MaskedHash, i, t});
    } else {
      add_masked_cells(cells, report.columns[i], cfg, i, cfg.r);
    }
  }

  report.localized_cells.assign(cells.begin(), cells.end());
  return report.localized_cells;
}

// ---------------------------------------------------------------------------
// repair

namespace {

constexpr const char* kReasonDiagonal =
    "diagonal cell under paired masking: stored residues unreachable";
constexpr const char* kReasonMaskedCell =
    "masked-hash cell cannot be independently repaired under paired masking";
constexpr const char* kReasonAmbiguous =
    "ambiguous localization: several candidate cells in one column";
constexpr const char* kReasonProjection =
    "projection outside working range: wrong position or multiple errors";
constexpr const char* kReasonOverflow =
    "corrected residue does not fit the sub-block width";
constexpr const char* kReasonArbitrate =
    "cannot arbitrate between data and stored hash while a column is "
    "out of range";
constexpr const char* kReasonResidueBlocked =
    "another control residue of the column is out of domain";

struct RepairPass {
  bool progress = false;
  std::vector<RepairRecord> records;

  void note(const Cell& cell, bool ok, std::string reason = {}) {
    records.push_back(RepairRecord{cell, ok, std::move(reason)});
  }
};

void repair_data_cell(ProtectedSuperBlock& sb, const SchemeConfig& cfg,
                      const IntegrityReport& rep, const Cell& cell,
                      RepairPass& pass) {
  const std::size_t p = cell.row;
  const std::size_t j = cell.col;
  const ColumnAnalysis& an = rep.columns[j];

  if (an.recovery == ResidueRecovery::NoConsensus) {
    pass.note(cell, false, kReasonDiagonal);
    return;
  }
  if (!out_of_domain_controls(cfg, an.stored_residues).empty()) {
    pass.note(cell, false, kReasonResidueBlocked);
    return;
  }
  const ResidueVector vec = make_workable_vector(
      cfg, column_codeword(sb, cfg, j, an.stored_residues));
  try {
    const ResidueVector fixed = correct_residue(vec, p);
    const BigInt& value = fixed[p];
    if (bit_length(value) > cfg.sub_block_bits) {
      pass.note(cell, false, kReasonOverflow);
      return;
    }
    if (value != vec[p]) {
      sb.set_data_cell(cfg, p, j, value);
      pass.progress = true;
    }
    pass.note(cell, true);
  } catch (const ProjectionOutOfRange&) {
    pass.note(cell, false, kReasonProjection);
  }
}

void repair_residue_cell(ProtectedSuperBlock& sb, const SchemeConfig& cfg,
                         const IntegrityReport& rep, const Cell& cell,
                         RepairPass& pass) {
  const std::size_t j = cell.row;
  const std::size_t c = cell.col;
  const ColumnAnalysis& an = rep.columns[j];
  for (std::size_t other : out_of_domain_controls(cfg, an.stored_residues))
    if (other != c) {
      pass.note(cell, false, kReasonResidueBlocked);
      return;
    }
  const ResidueVector vec = make_workable_vector(
      cfg, column_codeword(sb, cfg, j, an.stored_residues));
  try {
    const ResidueVector fixed = correct_residue(vec, cfg.n + c);
    if (fixed[cfg.n + c] != an.stored_residues[c]) {
      sb.residue_store[j][c] = fixed[cfg.n + c];
      pass.progress = true;
    }
    pass.note(cell, true);
  } catch (const ProjectionOutOfRange&) {
    pass.note(cell, false, kReasonProjection);
  }
}

void repair_hash_cell(ProtectedSuperBlock& sb, const SchemeConfig& cfg,
                      const IntegrityReport& rep, const Cell& cell,
                      RepairPass& pass) {
  if (cfg.mask_mode == MaskMode::Paired) {
    pass.note(cell, false, kReasonMaskedCell);
    return;
  }
  // Plain mode: the RNS dimension vouches for the data, so a clean set of
  // column verdicts convicts the stored hash.
  for (ColumnVerdict v : rep.column_verdicts)
    if (v != ColumnVerdict::InRange) {
      pass.note(cell, false, kReasonArbitrate);
      return;
    }
  const HashCode h = hash_block(sb.rows[cell.row], cfg.hash_algorithm, cfg.n);
  const BigInt expect = h.sub_code(cell.col);
  if (sb.masked[cell.row].cells[cell.col] != expect) {
    sb.masked[cell.row].cells[cell.col] = expect;
    pass.progress = true;
  }
  pass.note(cell, true);
}

}  // namespace

std::pair<ProtectedSuperBlock, IntegrityReport> repair(
    const ProtectedSuperBlock& sb, const std::vector<Cell>& cells,
    const SchemeConfig& cfg) {
  ProtectedSuperBlock result = sb;
  std::map<Cell, RepairRecord> outcome;

  std::vector<Cell> current = cells;
  for (std::size_t pass_index = 0; pass_index <= cfg.n + 2; ++pass_index) {
    IntegrityReport rep = verify(result, cfg);
    if (rep.clean()) break;
    if (pass_index > 0) current = localize(rep, result, cfg);
    if (current.empty()) break;

    RepairPass pass;

    // One corrected residue per column and pass; competing data cells in
    // the same column stay untouched rather than guessing.
    std::map<std::size_t, std::vector<Cell>> data_by_column;
    for (const Cell& cell : current) {
      if (cell.region != Region::Data) continue;
      if (cell.row >= cfg.n || cell.col >= cfg.n)
        throw ConfigInvalid("repair cell out of bounds");
      data_by_column[cell.col].push_back(cell);
    }
    for (const auto& [j, list] : data_by_column) {
      if (list.size() > 1) {
        for (const Cell& cell : list) pass.note(cell, false, kReasonAmbiguous);
        continue;
      }
      repair_data_cell(result, cfg, rep, list.front(), pass);
    }
    for (const Cell& cell : current) {
      if (cell.region == Region::ResidueStore) {
        if (cfg.mask_mode != MaskMode::Plain || cell.row >= cfg.n ||
            cell.col >= cfg.r)
          throw ConfigInvalid("repair cell out of bounds");
        repair_residue_cell(result, cfg, rep, cell, pass);
      } else if (cell.region == Region::MaskedHash) {
        if (cell.row >= cfg.n || cell.col >= cfg.n)
          throw ConfigInvalid("repair cell out of bounds");
        repair_hash_cell(result, cfg, rep, cell, pass);
      }
    }

    for (RepairRecord& rec : pass.records) outcome[rec.cell] = std::move(rec);
    if (!pass.progress) break;
  }

  IntegrityReport final_report = verify(result, cfg);
  if (!final_report.clean()) localize(final_report, result, cfg);
  final_report.repairs.reserve(outcome.size());
  for (auto& [cell, rec] : outcome) final_report.repairs.push_back(rec);
  final_report.post_repair_valid = final_report.clean();
  return {std::move(result), std::move(final_report)};
}

RedundancyReport redundancy_factor(const SchemeConfig& cfg) {
  cfg.validate();
  RedundancyReport out;
  out.k_red = static_cast<double>(cfg.r) / static_cast<double>(cfg.n);
  out.mirror_baseline = 1.0;
  out.control_bits_per_super_block = static_cast<std::uint64_t>(cfg.r) *
                                     cfg.cell_width * cfg.n;
  return out;
}

}  // namespace rns_shield
