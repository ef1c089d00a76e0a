#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnc/channel_spec.hpp"
#include "dnc/genpoly.hpp"

namespace dnc {

/// c(y) = Σ c_i y^i with c_i = 1 iff the suffix of the pattern starting at
/// position 1+i equals its prefix of length k-i.
struct AutocorrelationPolynomial {
  std::vector<std::string> pattern;
  std::vector<std::uint8_t> coefficients;  // c_0 .. c_{k-1}; c_0 == 1

  /// c(y^step) as a generalized polynomial.
  GeneralizedPolynomial to_polynomial(const BasisPtr& basis, const WeightVector& step) const;
};

/// Throws BuildError on an empty pattern.
AutocorrelationPolynomial autocorrelation(const std::vector<std::string>& pattern);

/// Single forbidden pattern over two symbols of equal weight u:
/// c(y^u) / (y^{k·u} + (1 - 2y^u)·c(y^u)).
RationalGF gf_pattern_avoidance(const ChannelSpec& spec);

/// ε→1, a→y^{w(a)}, union→sum, concatenation→product, S*→1/(1-gf_S),
/// combined over common denominators without reduction.
RationalGF gf_from_regex(const RegexNode& expr, const ChannelSpec& spec);

/// 1 / (1 - Σ_i y^{w(a_i)}).
RationalGF gf_free_monoid(const ChannelSpec& spec);

/// Dispatches on the constraint kind. The result satisfies gf(0) = 1.
RationalGF build_gf(const ChannelSpec& spec);

}  // namespace dnc
