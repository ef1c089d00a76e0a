#include "dnc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "dnc/error.hpp"

namespace dnc {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Bisection on [lo, hi] where f(lo) and f(hi) differ in sign (f(hi) may be 0).
template <typename F>
RootResult bisect(F&& f, double lo, double hi, double flo, double fhi, double tol, int max_iter) {
  const int slo = sign_of(flo);
  int it = 0;
  while (fhi != 0.0 && hi - lo > tol && it < max_iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    ++it;
    if (fm != 0.0 && sign_of(fm) == slo) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  if (fhi == 0.0) {
    // Exact hit: the certified bracket shrinks to [hi - ulp, hi].
    lo = std::nextafter(hi, 0.0);
    flo = f(lo);
    return {hi, lo, hi, flo, fhi, it};
  }
  return {lo + 0.5 * (hi - lo), lo, hi, flo, fhi, it};
}

CapacityReport analytic_report(CapacityMethod method, const RootResult& r) {
  CapacityReport rep;
  rep.method = method;
  rep.radius_or_pole = r.root;
  rep.bracket_lo = r.lo;
  rep.bracket_hi = r.hi;
  rep.capacity_nats = r.root == 1.0 ? 0.0 : -std::log(r.root);
  rep.error_bound = r.lo > 0.0 ? std::log(r.hi / r.lo) : std::numeric_limits<double>::infinity();
  rep.iterations = r.iterations;
  return rep;
}

bool numerator_vanishes(const GeneralizedPolynomial& num, double y, double removability) {
  return std::abs(num.eval(y)) <= removability * num.eval_abs(y);
}

// Golden-section minimisation of |f| on [a, b].
template <typename F>
std::pair<double, double> minimise_abs(F&& f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = std::abs(f(c));
  double fd = std::abs(f(d));
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = std::abs(f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = std::abs(f(d));
    }
  }
  return {a, b};
}

struct LineFit {
  double slope;
  double sse;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - icpt - slope * xs[i];
    sse += r * r;
  }
  return {slope, sse};
}

}  // namespace

std::string_view to_string(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::CharacteristicRoot: return "characteristic-root";
    case CapacityMethod::SmallestPole: return "smallest-pole";
    case CapacityMethod::OracleEstimate: return "oracle-estimate";
  }
  return "unknown";
}

RootResult smallest_positive_root(const GeneralizedPolynomial& p, double target,
                                  std::optional<Bracket> bracket_hint, const RootOptions& options) {
  auto f = [&](double y) { return p.eval(y) - target; };
  double lo = bracket_hint ? bracket_hint->lo : 0.0;
  double hi = bracket_hint ? bracket_hint->hi : 1.0;
  if (!(lo >= 0.0) || !(hi > lo)) throw SolverError("invalid bracket");

  const double flo = f(lo);
  if (flo >= 0.0) throw SolverError("root not bracketed: p(lo) >= target");
  double fhi = f(hi);
  for (int i = 0; fhi < 0.0; ++i) {
    if (i >= options.max_doublings) throw SolverError("root not bracketed");
    lo = hi;
    hi *= 2.0;
    fhi = f(hi);
  }
  return bisect(f, lo, hi, f(lo), fhi, options.tolerance, options.max_iterations);
}

bool is_star_form(const RationalGF& gf) {
  const auto& den = gf.denominator();
  if (den.constant_term() != 1 || den.size() < 2) return false;
  for (const auto& [w, c] : den.terms())
    if (!w.is_zero() && c >= 0) return false;
  return true;
}

CapacityReport capacity_from_characteristic(const RationalGF& gf, const RootOptions& options) {
  if (!is_star_form(gf))
    throw SolverError("denominator is not of the form 1 - E(y) with positive E");
  const GeneralizedPolynomial e = GeneralizedPolynomial::constant(gf.basis_ptr(), 1) - gf.denominator();
  const RootResult r = smallest_positive_root(e, 1.0, std::nullopt, options);
  if (numerator_vanishes(gf.numerator(), r.root, 1e-9))
    throw SolverError("numerator vanishes at the characteristic root; use the pole method");
  return analytic_report(CapacityMethod::CharacteristicRoot, r);
}

CapacityReport smallest_positive_pole(const RationalGF& gf, const PoleOptions& options) {
  const auto& num = gf.numerator();
  const auto& den = gf.denominator();
  if (den.is_zero()) throw SolverError("denominator is identically zero");
  if (!(options.y_max > 0.0) || !(options.grid_step > 0.0)) throw SolverError("invalid scan range");

  auto f = [&](double y) { return den.eval(y); };
  const auto steps = static_cast<long>(std::ceil(options.y_max / options.grid_step));
  auto grid = [&](long i) { return options.y_max * static_cast<double>(i) / static_cast<double>(steps); };

  int iterations = 0;
  double y2 = 0.0, f2 = f(0.0);  // two grid points back
  double y1 = y2, f1 = f2;       // previous grid point
  for (long i = 1; i <= steps; ++i) {
    const double y = grid(i);
    const double fy = f(y);
    std::optional<RootResult> candidate;
    if (fy == 0.0) {
      candidate = bisect(f, y1, y, f1, fy, options.tolerance, 0);
    } else if (f1 != 0.0 && sign_of(fy) != sign_of(f1)) {
      candidate = bisect(f, y1, y, f1, fy, options.tolerance, 400);
    } else if (i >= 2 && sign_of(f2) == sign_of(f1) && sign_of(f1) == sign_of(fy) &&
               std::abs(f1) < std::abs(f2) && std::abs(f1) <= std::abs(fy)) {
      // |D| dips without a sign change: possible root of even multiplicity.
      const auto [a, b] = minimise_abs(f, y2, y, options.tolerance);
      const double ym = 0.5 * (a + b);
      if (std::abs(f(ym)) <= 1e-10 * den.eval_abs(ym)) {
        // Location is only determined to about sqrt(machine epsilon).
        const double halfwidth = std::max(b - a, 1e-8 * ym);
        candidate = RootResult{ym, ym - halfwidth, ym + halfwidth, f(ym), f(ym), 0};
      }
    }
    if (candidate) {
      iterations += candidate->iterations;
      if (!numerator_vanishes(num, candidate->root, options.removability)) {
        CapacityReport rep = analytic_report(CapacityMethod::SmallestPole, *candidate);
        rep.iterations = iterations;
        return rep;
      }
    }
    y2 = y1;
    f2 = f1;
    y1 = y;
    f1 = fy;
  }

  CapacityReport rep;
  rep.method = CapacityMethod::SmallestPole;
  rep.radius_or_pole = options.y_max;
  rep.bracket_lo = options.y_max;
  rep.bracket_hi = options.y_max;
  rep.capacity_nats = 0.0;
  rep.error_bound = options.y_max < 1.0 ? -std::log(options.y_max) : 0.0;
  rep.iterations = iterations;
  rep.singularity_found = false;
  rep.note = "no positive pole in (0, y_max]: capacity <= -ln y_max; a channel with finitely "
             "many strings has capacity 0 by convention";
  return rep;
}

DensityReport check_density(std::span<const double> weights, double cutoff,
                            const DensityOptions& options) {
  if (!std::is_sorted(weights.begin(), weights.end()))
    throw SolverError("density check needs weights sorted ascending");
  DensityReport rep;
  rep.cutoff = cutoff;
  const auto n_max = static_cast<long long>(std::floor(cutoff));
  for (long long n = 1; n <= n_max; ++n) {
    const auto below = std::lower_bound(weights.begin(), weights.end(), static_cast<double>(n)) -
                       weights.begin();
    rep.counts_below_n.emplace_back(n, static_cast<long long>(below));
  }

  std::vector<double> ln_n, n_lin, ln_count;
  const long long first = (n_max + 1) / 2;
  for (const auto& [n, count] : rep.counts_below_n) {
    if (n < std::max(first, 1LL) || count <= 0) continue;
    ln_n.push_back(std::log(static_cast<double>(n)));
    n_lin.push_back(static_cast<double>(n));
    ln_count.push_back(std::log(static_cast<double>(count)));
  }
  if (ln_n.size() < 4) throw SolverError("insufficient range for the density check");

  const LineFit power = least_squares(ln_n, ln_count);
  const LineFit expo = least_squares(n_lin, ln_count);
  rep.fitted_exponent = power.slope;
  rep.growth_rate = expo.slope;
  rep.sse_power = power.sse;
  rep.sse_exponential = expo.sse;
  rep.exponential_flag = expo.sse < options.margin * power.sse;
  return rep;
}

std::vector<std::complex<double>> polynomial_roots(const GeneralizedPolynomial& p) {
  std::optional<std::size_t> atom;
  std::size_t degree = 0;
  for (const auto& [w, c] : p.terms()) {
    for (std::size_t i = 0; i < w.extent(); ++i) {
      if (w[i] == 0) continue;
      if (atom && *atom != i)
        throw SolverError("complex roots are only computed for polynomials in a single atom");
      atom = i;
      degree = std::max<std::size_t>(degree, w[i]);
    }
  }
  if (degree == 0) return {};

  std::vector<double> coeff(degree + 1, 0.0);
  for (const auto& [w, c] : p.terms()) coeff[atom ? w[*atom] : 0] = c.convert_to<double>();

  const auto n = static_cast<Eigen::Index>(degree);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -coeff[static_cast<std::size_t>(i)] / coeff[degree];

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw SolverError("companion eigenvalue computation failed");
  std::vector<std::complex<double>> roots;
  for (Eigen::Index i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()[i]);
  return roots;
}

}  // namespace dnc
