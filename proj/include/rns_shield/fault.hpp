#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rns_shield/scheme.hpp"

namespace rns_shield {

enum class FaultKind : std::uint8_t { BitFlip, CellRandomize, CellZero, Burst };
enum class TargetRegion : std::uint8_t { Data, MaskedHash, Header };

std::string to_string(FaultKind kind);
std::string to_string(TargetRegion region);

/// A reproducible corruption recipe. Identical scenarios applied to
/// identical volumes produce identical corruptions on every platform.
struct FaultScenario {
  std::uint64_t seed = 0;
  FaultKind kind = FaultKind::BitFlip;
  TargetRegion region = TargetRegion::Data;
  std::size_t burst_cells = 1;            // Burst only, >= 1
  std::uint32_t faults_per_super_block = 1;
  double super_block_fraction = 1.0;      // share of super-blocks hit
};

/// Ground truth for one corrupted cell (or header byte). Values are the
/// cell contents before and after; header faults use byte granularity
/// with row = byte offset.
struct FaultRecord {
  std::uint64_t super_block = 0;
  TargetRegion region = TargetRegion::Data;
  std::size_t row = 0;
  std::size_t col = 0;
  BigInt before;
  BigInt after;
};

struct FaultLog {
  std::vector<FaultRecord> records;

  bool empty() const { return records.empty(); }
};

/// Corrupt a serialized volume per scenario. The log records exactly what
/// changed; cells that would be no-ops (zeroing an already-zero cell) are
/// skipped, so every record is a real corruption.
std::pair<std::vector<std::uint8_t>, FaultLog> inject(
    std::span<const std::uint8_t> volume, const FaultScenario& scenario);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::size_t faults = 0;
  bool detected = false;
  bool localized_exactly = false;
  bool repaired = false;
  bool detected_unrepairable = false;
  bool silent_failure = false;
};

struct CampaignReport {
  std::uint64_t trials = 0;
  std::uint64_t faulted_trials = 0;   // trials where the log was non-empty
  std::uint64_t detected = 0;
  std::uint64_t localized_exactly = 0;
  std::uint64_t repaired = 0;
  std::uint64_t detected_unrepairable = 0;
  std::uint64_t silent_failures = 0;
  double k_red = 0.0;
  double baseline_k_red = 1.0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;

  /// detected + untouched trials account for everything; silent failures
  /// split into undetected corruption and false repair claims.
  bool counters_consistent() const;
};

/// Repeat inject -> verify -> localize -> repair against a pristine copy
/// of the volume, scoring every trial against the injection ground truth.
/// Trial i uses a child seed derived from (scenario.seed, i). Trials run
/// in parallel; the report is schedule-independent.
CampaignReport run_campaign(std::span<const std::uint8_t> volume,
                            const FaultScenario& scenario,
                            std::uint64_t trials, std::size_t workers = 0);

}  // namespace rns_shield
