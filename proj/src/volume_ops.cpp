#include "rns_shield/volume_ops.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "rns_shield/pool.hpp"

namespace rns_shield {

std::size_t default_worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RNS_SHIELD_WORKERS")) {
    const long v = std::atol(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, 16);
}

VolumeReport verify_volume(std::span<const std::uint8_t> container,
                           std::size_t workers) {
  const VolumeReader reader(container);
  const SchemeConfig& cfg = reader.config();
  VolumeReport out;
  out.super_blocks = reader.super_block_count();

  std::mutex merge;
  parallel_for(out.super_blocks, default_worker_count(workers),
               [&](std::size_t idx) {
                 ProtectedSuperBlock sb = reader.super_block(idx);
                 IntegrityReport rep = verify(sb, cfg);
                 if (rep.clean()) return;
                 localize(rep, sb, cfg);
                 std::lock_guard lock(merge);
                 out.flagged.push_back(SuperBlockFinding{idx, std::move(rep)});
               });
  std::sort(out.flagged.begin(), out.flagged.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  return out;
}

std::pair<std::vector<std::uint8_t>, VolumeReport> repair_volume(
    std::span<const std::uint8_t> container, std::size_t workers) {
  const VolumeReader reader(container);
  const SchemeConfig& cfg = reader.config();
  std::vector<std::uint8_t> bytes(container.begin(), container.end());

  VolumeReport out;
  out.super_blocks = reader.super_block_count();
  out.repair_attempted = true;

  std::mutex merge;
  parallel_for(
      out.super_blocks, default_worker_count(workers), [&](std::size_t idx) {
        ProtectedSuperBlock sb = reader.super_block(idx);
        IntegrityReport rep = verify(sb, cfg);
        if (rep.clean()) return;
        localize(rep, sb, cfg);
        auto [fixed, final_rep] = repair(sb, rep.localized_cells, cfg);
        const std::vector<std::uint8_t> encoded =
            serialize_super_block(fixed, cfg);
        std::memcpy(bytes.data() + reader.super_block_offset(idx),
                    encoded.data(), encoded.size());
        std::lock_guard lock(merge);
        out.flagged.push_back(SuperBlockFinding{idx, std::move(final_rep)});
      });
  std::sort(out.flagged.begin(), out.flagged.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });

  out.post_repair_valid = true;
  for (const SuperBlockFinding& f : out.flagged) {
    if (!f.report.post_repair_valid.value_or(false))
      out.post_repair_valid = false;
    for (const RepairRecord& rec : f.report.repairs) {
      if (rec.repaired)
        ++out.repaired_cells;
      else
        ++out.unrepairable_cells;
    }
  }
  return {std::move(bytes), std::move(out)};
}

}  // namespace rns_shield
