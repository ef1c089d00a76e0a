#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dnc {

struct WeightAtom {
  std::string name;
  double value = 0.0;

  bool operator==(const WeightAtom&) const = default;
};

/// Ordered set of named positive reals. Every exponent in the library is an
/// integer combination of these atoms.
class WeightBasis {
 public:
  WeightBasis() = default;
  /// Throws AlgebraError on duplicate names, empty names or non-positive values.
  explicit WeightBasis(std::vector<WeightAtom> atoms);

  static std::shared_ptr<const WeightBasis> make(std::vector<WeightAtom> atoms);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<WeightAtom>& atoms() const noexcept { return atoms_; }
  const WeightAtom& operator[](std::size_t i) const { return atoms_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const WeightBasis&) const = default;

 private:
  std::vector<WeightAtom> atoms_;
};

using BasisPtr = std::shared_ptr<const WeightBasis>;

/// Exact exponent: nonnegative multiplicity per basis atom. Stored with
/// trailing zeros trimmed, so equality and ordering are structural.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<std::uint32_t> multiplicities);

  static WeightVector atom(std::size_t index, std::uint32_t multiplicity = 1);

  std::uint32_t operator[](std::size_t i) const noexcept {
    return i < mult_.size() ? mult_[i] : 0;
  }
  /// Number of stored multiplicities (index of last nonzero + 1).
  std::size_t extent() const noexcept { return mult_.size(); }
  bool is_zero() const noexcept { return mult_.empty(); }
  const std::vector<std::uint32_t>& multiplicities() const noexcept { return mult_; }

  WeightVector& operator+=(const WeightVector& other);
  friend WeightVector operator+(WeightVector a, const WeightVector& b) { return a += b; }
  WeightVector scaled(std::uint32_t k) const;

  /// `*this - other` when every component stays nonnegative.
  std::optional<WeightVector> minus(const WeightVector& other) const;

  /// Numeric value Σ multiplicity·atom.value, summed in atom order.
  double value(const WeightBasis& basis) const;

  /// Lexicographic on multiplicities (zero-padded).
  std::strong_ordering operator<=>(const WeightVector&) const = default;
  bool operator==(const WeightVector&) const = default;

 private:
  void trim();
  std::vector<std::uint32_t> mult_;
};

/// Total order used for every weight-sorted structure: numeric value first,
/// then lexicographic multiplicities for numerically tied vectors.
struct WeightOrder {
  const WeightBasis* basis;

  bool operator()(const WeightVector& a, const WeightVector& b) const {
    const double va = a.value(*basis);
    const double vb = b.value(*basis);
    if (va != vb) return va < vb;
    return a < b;
  }
};

/// "2·one + pi" style rendering; "0" for the zero vector.
std::string to_string(const WeightVector& w, const WeightBasis& basis);

}  // namespace dnc
