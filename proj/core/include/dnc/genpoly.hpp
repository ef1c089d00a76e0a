#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dnc/weight.hpp"

namespace dnc {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Finite sum Σ c·y^w with integer coefficients and exact exponents.
/// Zero coefficients are never stored.
class GeneralizedPolynomial {
 public:
  using TermMap = std::map<WeightVector, Integer>;

  explicit GeneralizedPolynomial(BasisPtr basis);
  GeneralizedPolynomial(BasisPtr basis, TermMap terms);

  static GeneralizedPolynomial constant(BasisPtr basis, Integer c);
  static GeneralizedPolynomial monomial(BasisPtr basis, WeightVector w, Integer c = 1);

  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  const WeightBasis& basis() const noexcept { return *basis_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Integer coefficient(const WeightVector& w) const;
  Integer constant_term() const { return coefficient(WeightVector{}); }

  /// Terms sorted by WeightOrder (numeric exponent, then structural tiebreak).
  std::vector<std::pair<WeightVector, Integer>> sorted_terms() const;

  bool same_basis(const GeneralizedPolynomial& other) const;

  GeneralizedPolynomial operator-() const;
  GeneralizedPolynomial& operator+=(const GeneralizedPolynomial& other);
  GeneralizedPolynomial& operator-=(const GeneralizedPolynomial& other);

  /// Σ c·y^{value(w)}. 0^0 = 1. Throws OverflowError on a non-finite result.
  double eval(double y) const;
  /// Σ |c|·y^{value(w)}; magnitude scale for cancellation tests.
  double eval_abs(double y) const;

  bool operator==(const GeneralizedPolynomial& other) const;

 private:
  void add_term(const WeightVector& w, const Integer& c);

  BasisPtr basis_;
  TermMap terms_;
};

/// Throws AlgebraError on basis mismatch.
GeneralizedPolynomial gp_add(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b);
GeneralizedPolynomial gp_sub(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b);
GeneralizedPolynomial gp_mul(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b);
double gp_eval(const GeneralizedPolynomial& p, double y);

inline GeneralizedPolynomial operator+(const GeneralizedPolynomial& a,
                                       const GeneralizedPolynomial& b) {
  return gp_add(a, b);
}
inline GeneralizedPolynomial operator-(const GeneralizedPolynomial& a,
                                       const GeneralizedPolynomial& b) {
  return gp_sub(a, b);
}
inline GeneralizedPolynomial operator*(const GeneralizedPolynomial& a,
                                       const GeneralizedPolynomial& b) {
  return gp_mul(a, b);
}

/// "1 + y^{pi} - 2·y^{2·one}"
std::string to_string(const GeneralizedPolynomial& p);

/// Quotient of two generalized polynomials. The denominator's constant term
/// is nonzero and normalized positive.
class RationalGF {
 public:
  /// Throws AlgebraError on basis mismatch or zero denominator constant term
  /// ("not a DNC generating function").
  RationalGF(GeneralizedPolynomial numerator, GeneralizedPolynomial denominator);

  const GeneralizedPolynomial& numerator() const noexcept { return num_; }
  const GeneralizedPolynomial& denominator() const noexcept { return den_; }
  const BasisPtr& basis_ptr() const noexcept { return num_.basis_ptr(); }

  double eval(double y) const;

  bool operator==(const RationalGF&) const = default;

 private:
  GeneralizedPolynomial num_;
  GeneralizedPolynomial den_;
};

struct SeriesEntry {
  WeightVector weight;
  Integer count;

  bool operator==(const SeriesEntry&) const = default;
};

/// Weight-sorted (w_k, N[w_k]) pairs up to a cutoff.
struct CoefficientSeries {
  BasisPtr basis;
  double cutoff = 0.0;
  std::vector<SeriesEntry> entries;

  /// Same weights and counts; cutoff and basis identity are not compared.
  bool same_entries(const CoefficientSeries& other) const { return entries == other.entries; }

  Integer total() const;
  GeneralizedPolynomial as_polynomial() const;
};

struct ExpandOptions {
  std::size_t term_limit = 1'000'000;
};

/// Weight w is within cutoff when value(w) <= cutoff up to a 1e-12 relative slack.
bool within_cutoff(double weight_value, double cutoff);

/// Exact coefficients of the series of `gf` with numeric weight <= cutoff.
/// Throws AlgebraError when a count is negative or non-integral,
/// ResourceError when the support exceeds `options.term_limit`.
CoefficientSeries expand_series(const RationalGF& gf, double cutoff,
                                const ExpandOptions& options = {});

}  // namespace dnc
