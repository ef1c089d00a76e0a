#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnc/genpoly.hpp"

namespace dnc {

enum class CapacityMethod { CharacteristicRoot, SmallestPole, OracleEstimate };

std::string_view to_string(CapacityMethod m);

struct CapacityReport {
  CapacityMethod method = CapacityMethod::CharacteristicRoot;
  double radius_or_pole = 1.0;
  /// Certified bracket around radius_or_pole (analytic methods).
  double bracket_lo = 1.0;
  double bracket_hi = 1.0;
  double capacity_nats = 0.0;
  /// Bracket width propagated through -ln; heuristic spread for the oracle.
  double error_bound = 0.0;
  int iterations = 0;
  /// False when no positive singularity exists in the search range.
  bool singularity_found = true;
  std::string note;
};

struct Bracket {
  double lo;
  double hi;
};

struct RootOptions {
  double tolerance = 1e-12;
  int max_doublings = 64;
  int max_iterations = 400;
};

struct RootResult {
  double root;
  double lo;
  double hi;
  /// p(lo) - target and p(hi) - target; opposite signs (or hi exact).
  double f_lo;
  double f_hi;
  int iterations;

  double width() const { return hi - lo; }
};

/// Smallest positive root of p(y) = target for p increasing on (0, ∞) with
/// p(0) < target. Bisection on (0, 1], the upper end doubled while
/// p(hi) < target. Throws SolverError("root not bracketed").
RootResult smallest_positive_root(const GeneralizedPolynomial& p, double target,
                                  std::optional<Bracket> bracket_hint = std::nullopt,
                                  const RootOptions& options = {});

/// Denominator of the form 1 - E with E having positive coefficients on
/// positive exponents.
bool is_star_form(const RationalGF& gf);

/// R = root of E(y) = 1, C = -ln R. Throws SolverError unless is_star_form.
CapacityReport capacity_from_characteristic(const RationalGF& gf, const RootOptions& options = {});

struct PoleOptions {
  double y_max = 1.0;
  double grid_step = 1e-3;
  double tolerance = 1e-12;
  /// A root y0 is a pole iff |N(y0)| > removability · Σ|n_i| y0^{w_i}.
  double removability = 1e-9;
};

/// Smallest positive real pole P of gf on (0, y_max], C = -ln P. When none
/// exists, singularity_found is false and the capacity is reported as 0.
CapacityReport smallest_positive_pole(const RationalGF& gf, const PoleOptions& options = {});

struct DensityOptions {
  /// Exponential growth is flagged when SSE(ln count ~ n) < margin·SSE(ln count ~ ln n).
  double margin = 0.5;
};

struct DensityReport {
  double cutoff = 0.0;
  std::vector<std::pair<long long, long long>> counts_below_n;
  double fitted_exponent = 0.0;
  double growth_rate = 0.0;  // slope of ln count against n
  double sse_power = 0.0;
  double sse_exponential = 0.0;
  bool exponential_flag = false;
};

/// Heuristic "not too dense" check on a sorted list of distinct weight values.
/// Throws SolverError("insufficient range") with fewer than 4 usable n.
DensityReport check_density(std::span<const double> weights, double cutoff,
                            const DensityOptions& options = {});

/// Roots of an ordinary polynomial in y^{atom}: every exponent must be a
/// multiple of one atom. Companion-matrix eigenvalues; the returned roots are
/// in the variable y^{atom}.
std::vector<std::complex<double>> polynomial_roots(const GeneralizedPolynomial& p);

}  // namespace dnc
