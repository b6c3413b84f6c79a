#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rns_shield/bigint.hpp"

namespace rns_shield {

class ModuliSet;
using ModuliSetPtr = std::shared_ptr<const ModuliSet>;

/// An ordered set of pairwise-coprime moduli split into an information
/// group and a control (redundant) group, with every derived constant the
/// codec needs precomputed at construction: working and full ranges,
/// orthogonal bases for the full and information-only systems, and the
/// per-excluded-index projection table (reduced ranges plus reduced
/// orthogonal bases, diagonal entries zero).
///
/// Immutable after construction; safe to share across threads.
class ModuliSet {
public:
  ModuliSet(std::vector<BigInt> info, std::vector<BigInt> control);

  std::size_t size() const { return moduli_.size(); }        // k
  std::size_t info_count() const { return info_count_; }     // n
  std::size_t control_count() const { return size() - info_count_; }  // r

  const BigInt& modulus(std::size_t i) const { return moduli_[i]; }
  std::span<const BigInt> moduli() const { return moduli_; }
  std::span<const BigInt> info_moduli() const {
    return std::span(moduli_).first(info_count_);
  }
  std::span<const BigInt> control_moduli() const {
    return std::span(moduli_).subspan(info_count_);
  }

  const BigInt& working_range() const { return working_range_; }  // P_n
  const BigInt& full_range() const { return full_range_; }        // P_k

  const BigInt& orthogonal_basis(std::size_t i) const { return ortho_[i]; }
  std::span<const BigInt> orthogonal_bases() const { return ortho_; }

  /// Basis of the information-only system, used for base extension.
  const BigInt& info_orthogonal_basis(std::size_t i) const {
    return info_ortho_[i];
  }

  /// Reduced range P_k / p_excluded.
  const BigInt& projection_range(std::size_t excluded) const {
    return proj_range_[excluded];
  }
  /// Reduced orthogonal basis of modulus i in the system that excludes
  /// index `excluded`; zero when i == excluded.
  const BigInt& projection_basis(std::size_t i, std::size_t excluded) const {
    return proj_[excluded][i];
  }

private:
  std::vector<BigInt> moduli_;  // info group first, then control group
  std::size_t info_count_;
  BigInt working_range_;
  BigInt full_range_;
  std::vector<BigInt> ortho_;
  std::vector<BigInt> info_ortho_;
  std::vector<BigInt> proj_range_;
  std::vector<std::vector<BigInt>> proj_;
};

/// Validates coprimality and group ordering, then precomputes all tables.
/// Throws NotCoprime or OrderingViolation. The control group may be empty
/// (plain CRT codec); error localization then refuses to run.
ModuliSetPtr make_moduli_set(std::vector<BigInt> info,
                             std::vector<BigInt> control);

/// A codeword: one residue per modulus of the governing set.
class ResidueVector {
public:
  ResidueVector(ModuliSetPtr set, std::vector<BigInt> residues);

  const ModuliSet& set() const { return *set_; }
  ModuliSetPtr set_ptr() const { return set_; }
  std::span<const BigInt> residues() const { return residues_; }
  const BigInt& operator[](std::size_t i) const { return residues_[i]; }
  std::size_t size() const { return residues_.size(); }

  /// Copy with one residue replaced (revalidates the domain).
  ResidueVector with_residue(std::size_t i, BigInt value) const;

  bool operator==(const ResidueVector& other) const {
    return residues_ == other.residues_;
  }

private:
  ModuliSetPtr set_;
  std::vector<BigInt> residues_;
};

struct RangeCheckResult {
  bool in_range;
  BigInt value;  // the reconstructed integer either way
};

struct LocalizeResult {
  enum class Kind { NoError, Localized, Ambiguous, Unlocalizable };
  Kind kind = Kind::NoError;
  std::size_t index = 0;               // valid when Localized
  std::vector<std::size_t> candidates; // every in-range projection index
};

/// Residues of value on every modulus. Requires 0 <= value < full range.
ResidueVector to_residues(const BigInt& value, ModuliSetPtr set);

/// The unique integer in [0, P_k) with the given residues, computed as
/// |sum residue_i * B_i|_{P_k}.
BigInt crt_reconstruct(const ResidueVector& v);

/// Control residues of the value encoded by the information residues.
std::vector<BigInt> base_extend(std::span<const BigInt> info_residues,
                                const ModuliSet& set);

/// In range iff the reconstruction lies inside the working range.
RangeCheckResult range_check(const ResidueVector& v);

/// Reconstruction over all moduli except `excluded`, reduced mod the
/// projection range of that index.
BigInt project_excluding(const ResidueVector& v, std::size_t excluded);

/// Single-residue error localization by projection: collects every index
/// whose exclusion brings the reconstruction back into the working range.
/// All indices are tried in ascending order and all hits reported, so a
/// genuine ambiguity surfaces instead of silently picking a favorite.
LocalizeResult localize_residue_error(const ResidueVector& v);

/// Replace residue `bad` with the value implied by the other residues.
/// Requires the projection excluding `bad` to be a working-range value;
/// throws ProjectionOutOfRange otherwise.
ResidueVector correct_residue(const ResidueVector& v, std::size_t bad);

}  // namespace rns_shield
