#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rns_shield/container.hpp"
#include "rns_shield/scheme.hpp"

namespace rns_shield {

struct SuperBlockFinding {
  std::uint64_t index = 0;
  IntegrityReport report;
};

struct VolumeReport {
  std::uint64_t super_blocks = 0;
  std::vector<SuperBlockFinding> flagged;  // only super-blocks with findings
  std::uint64_t repaired_cells = 0;
  std::uint64_t unrepairable_cells = 0;
  bool repair_attempted = false;
  bool post_repair_valid = false;

  bool all_clean() const { return flagged.empty(); }
};

/// Verify + localize every super-block; super-blocks run in parallel,
/// findings come back ordered by index.
VolumeReport verify_volume(std::span<const std::uint8_t> container,
                           std::size_t workers = 0);

/// Verify, repair flagged super-blocks in place, and re-verify. Returns
/// the (possibly partially) repaired container bytes and the outcome.
std::pair<std::vector<std::uint8_t>, VolumeReport> repair_volume(
    std::span<const std::uint8_t> container, std::size_t workers = 0);

}  // namespace rns_shield
