#include "rns_shield/rns.hpp"

#include <algorithm>
#include <utility>

#include <boost/multiprecision/integer.hpp>

namespace rns_shield {

namespace {

// Orthogonal basis of modulus i in the system with product `range`:
// (range/p_i) * |(range/p_i)^-1|_{p_i}, the constant that is 1 mod p_i and
// 0 mod every other modulus of the system.
BigInt orthogonal_basis_for(const BigInt& range, const BigInt& p) {
  const BigInt quotient = range / p;
  return quotient * mod_inverse(quotient % p, p) % range;
}

}  // namespace

ModuliSet::ModuliSet(std::vector<BigInt> info, std::vector<BigInt> control) {
  if (info.empty()) throw ConfigInvalid("moduli set needs information moduli");
  for (const BigInt& p : info)
    if (p < 2) throw ConfigInvalid("modulus below 2");
  for (const BigInt& p : control)
    if (p < 2) throw ConfigInvalid("modulus below 2");

  // Every information modulus below every control modulus, control group
  // strictly increasing.
  const BigInt info_max = *std::max_element(info.begin(), info.end());
  for (std::size_t c = 0; c < control.size(); ++c) {
    if (control[c] <= info_max)
      throw OrderingViolation("control modulus not above information group");
    if (c > 0 && control[c] <= control[c - 1])
      throw OrderingViolation("control moduli not strictly increasing");
  }

  info_count_ = info.size();
  moduli_ = std::move(info);
  moduli_.insert(moduli_.end(), control.begin(), control.end());

  for (std::size_t i = 0; i < moduli_.size(); ++i)
    for (std::size_t j = i + 1; j < moduli_.size(); ++j)
      if (boost::multiprecision::gcd(moduli_[i], moduli_[j]) != 1)
        throw NotCoprime("moduli share a factor");

  working_range_ = 1;
  for (std::size_t i = 0; i < info_count_; ++i) working_range_ *= moduli_[i];
  full_range_ = working_range_;
  for (std::size_t i = info_count_; i < moduli_.size(); ++i)
    full_range_ *= moduli_[i];

  const std::size_t k = moduli_.size();
  ortho_.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    ortho_.push_back(orthogonal_basis_for(full_range_, moduli_[i]));

  info_ortho_.reserve(info_count_);
  for (std::size_t i = 0; i < info_count_; ++i)
    info_ortho_.push_back(orthogonal_basis_for(working_range_, moduli_[i]));

  // Projection table: one row per excluded index.
  proj_range_.reserve(k);
  proj_.reserve(k);
  for (std::size_t ex = 0; ex < k; ++ex) {
    const BigInt reduced = full_range_ / moduli_[ex];
    proj_range_.push_back(reduced);
    std::vector<BigInt> row(k, BigInt(0));
    if (k > 1) {
      for (std::size_t i = 0; i < k; ++i) {
        if (i == ex) continue;
        row[i] = reduced == 1 ? BigInt(0)
                              : orthogonal_basis_for(reduced, moduli_[i]);
      }
    }
    proj_.push_back(std::move(row));
  }
}

ModuliSetPtr make_moduli_set(std::vector<BigInt> info,
                             std::vector<BigInt> control) {
  return std::make_shared<const ModuliSet>(std::move(info),
                                           std::move(control));
}

ResidueVector::ResidueVector(ModuliSetPtr set, std::vector<BigInt> residues)
    : set_(std::move(set)), residues_(std::move(residues)) {
  if (!set_) throw ConfigInvalid("residue vector without a moduli set");
  if (residues_.size() != set_->size())
    throw ConfigInvalid("residue count does not match moduli set");
  for (std::size_t i = 0; i < residues_.size(); ++i)
    if (residues_[i] < 0 || residues_[i] >= set_->modulus(i))
      throw ConfigInvalid("residue outside its modulus");
}

ResidueVector ResidueVector::with_residue(std::size_t i, BigInt value) const {
  std::vector<BigInt> out(residues_.begin(), residues_.end());
  out[i] = std::move(value);
  return ResidueVector(set_, std::move(out));
}

ResidueVector to_residues(const BigInt& value, ModuliSetPtr set) {
  if (value < 0 || value >= set->full_range())
    throw ValueOutOfFullRange("value outside [0, full range)");
  std::vector<BigInt> residues;
  residues.reserve(set->size());
  for (std::size_t i = 0; i < set->size(); ++i)
    residues.push_back(value % set->modulus(i));
  return ResidueVector(std::move(set), std::move(residues));
}

BigInt crt_reconstruct(const ResidueVector& v) {
  const ModuliSet& set = v.set();
  BigInt acc = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    acc += v[i] * set.orthogonal_basis(i);
  return acc % set.full_range();
}

std::vector<BigInt> base_extend(std::span<const BigInt> info_residues,
                                const ModuliSet& set) {
  if (info_residues.size() != set.info_count())
    throw ConfigInvalid("base_extend: wrong information residue count");
  BigInt acc = 0;
  for (std::size_t i = 0; i < info_residues.size(); ++i) {
    if (info_residues[i] < 0 || info_residues[i] >= set.modulus(i))
      throw ConfigInvalid("base_extend: residue outside its modulus");
    acc += info_residues[i] * set.info_orthogonal_basis(i);
  }
  acc %= set.working_range();
  std::vector<BigInt> control;
  control.reserve(set.control_count());
  for (const BigInt& p : set.control_moduli()) control.push_back(acc % p);
  return control;
}

RangeCheckResult range_check(const ResidueVector& v) {
  BigInt value = crt_reconstruct(v);
  const bool in = value < v.set().working_range();
  return {in, std::move(value)};
}

BigInt project_excluding(const ResidueVector& v, std::size_t excluded) {
  const ModuliSet& set = v.set();
  BigInt acc = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i == excluded) continue;
    acc += v[i] * set.projection_basis(i, excluded);
  }
  return acc % set.projection_range(excluded);
}

LocalizeResult localize_residue_error(const ResidueVector& v) {
  const ModuliSet& set = v.set();
  if (set.control_count() == 0)
    throw ConfigInvalid("localization needs at least one control modulus");

  if (range_check(v).in_range) return {LocalizeResult::Kind::NoError, 0, {}};

  LocalizeResult out;
  for (std::size_t ex = 0; ex < set.size(); ++ex)
    if (project_excluding(v, ex) < set.working_range())
      out.candidates.push_back(ex);

  if (out.candidates.empty()) {
    out.kind = LocalizeResult::Kind::Unlocalizable;
  } else if (out.candidates.size() == 1) {
    out.kind = LocalizeResult::Kind::Localized;
    out.index = out.candidates.front();
  } else {
    out.kind = LocalizeResult::Kind::Ambiguous;
  }
  return out;
}

ResidueVector correct_residue(const ResidueVector& v, std::size_t bad) {
  const ModuliSet& set = v.set();
  if (set.control_count() == 0)
    throw ConfigInvalid("correction needs at least one control modulus");
  const BigInt projected = project_excluding(v, bad);
  if (projected >= set.working_range())
    throw ProjectionOutOfRange(
        "projection outside the working range: wrong index or multiple "
        "errors");
  return v.with_residue(bad, projected % set.modulus(bad));
}

}  // namespace rns_shield
