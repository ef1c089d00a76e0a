#include "dnc/weight.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dnc/error.hpp"

namespace dnc {

WeightBasis::WeightBasis(std::vector<WeightAtom> atoms) : atoms_(std::move(atoms)) {
  std::set<std::string_view> seen;
  for (const auto& a : atoms_) {
    if (a.name.empty()) throw AlgebraError("weight atom with empty name");
    if (!(a.value > 0.0) || !std::isfinite(a.value))
      throw AlgebraError("weight atom '" + a.name + "' must have a finite positive value");
    if (!seen.insert(a.name).second) throw AlgebraError("duplicate weight atom '" + a.name + "'");
  }
}

std::shared_ptr<const WeightBasis> WeightBasis::make(std::vector<WeightAtom> atoms) {
  return std::make_shared<const WeightBasis>(std::move(atoms));
}

std::optional<std::size_t> WeightBasis::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].name == name) return i;
  return std::nullopt;
}

WeightVector::WeightVector(std::vector<std::uint32_t> multiplicities)
    : mult_(std::move(multiplicities)) {
  trim();
}

WeightVector WeightVector::atom(std::size_t index, std::uint32_t multiplicity) {
  std::vector<std::uint32_t> m(index + 1, 0);
  m[index] = multiplicity;
  return WeightVector(std::move(m));
}

void WeightVector::trim() {
  while (!mult_.empty() && mult_.back() == 0) mult_.pop_back();
}

WeightVector& WeightVector::operator+=(const WeightVector& other) {
  if (other.mult_.size() > mult_.size()) mult_.resize(other.mult_.size(), 0);
  for (std::size_t i = 0; i < other.mult_.size(); ++i) mult_[i] += other.mult_[i];
  return *this;
}

WeightVector WeightVector::scaled(std::uint32_t k) const {
  std::vector<std::uint32_t> m = mult_;
  for (auto& x : m) x *= k;
  return WeightVector(std::move(m));
}

std::optional<WeightVector> WeightVector::minus(const WeightVector& other) const {
  if (other.mult_.size() > mult_.size()) return std::nullopt;
  std::vector<std::uint32_t> m = mult_;
  for (std::size_t i = 0; i < other.mult_.size(); ++i) {
    if (other.mult_[i] > m[i]) return std::nullopt;
    m[i] -= other.mult_[i];
  }
  return WeightVector(std::move(m));
}

double WeightVector::value(const WeightBasis& basis) const {
  double v = 0.0;
  for (std::size_t i = 0; i < mult_.size(); ++i)
    if (mult_[i] != 0) v += static_cast<double>(mult_[i]) * basis[i].value;
  return v;
}

std::string to_string(const WeightVector& w, const WeightBasis& basis) {
  if (w.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < w.extent(); ++i) {
    if (w[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (w[i] != 1) out += std::to_string(w[i]) + "·";
    out += basis[i].name;
  }
  return out;
}

}  // namespace dnc
