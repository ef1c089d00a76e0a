#include "dnc/genpoly.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dnc/error.hpp"

namespace dnc {

namespace {

void require_same_basis(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b) {
  if (!a.same_basis(b)) throw AlgebraError("generalized polynomials over different weight bases");
}

}  // namespace

GeneralizedPolynomial::GeneralizedPolynomial(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw AlgebraError("generalized polynomial without a weight basis");
}

GeneralizedPolynomial::GeneralizedPolynomial(BasisPtr basis, TermMap terms)
    : GeneralizedPolynomial(std::move(basis)) {
  for (auto& [w, c] : terms) {
    if (w.extent() > basis_->size())
      throw AlgebraError("weight vector references an atom outside the basis");
    if (c != 0) terms_.emplace(w, std::move(c));
  }
}

GeneralizedPolynomial GeneralizedPolynomial::constant(BasisPtr basis, Integer c) {
  return monomial(std::move(basis), WeightVector{}, std::move(c));
}

GeneralizedPolynomial GeneralizedPolynomial::monomial(BasisPtr basis, WeightVector w, Integer c) {
  TermMap t;
  t.emplace(std::move(w), std::move(c));
  return GeneralizedPolynomial(std::move(basis), std::move(t));
}

Integer GeneralizedPolynomial::coefficient(const WeightVector& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Integer(0) : it->second;
}

std::vector<std::pair<WeightVector, Integer>> GeneralizedPolynomial::sorted_terms() const {
  std::vector<std::pair<WeightVector, Integer>> out(terms_.begin(), terms_.end());
  WeightOrder order{basis_.get()};
  std::sort(out.begin(), out.end(),
            [&](const auto& a, const auto& b) { return order(a.first, b.first); });
  return out;
}

bool GeneralizedPolynomial::same_basis(const GeneralizedPolynomial& other) const {
  return basis_ == other.basis_ || *basis_ == *other.basis_;
}

void GeneralizedPolynomial::add_term(const WeightVector& w, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

GeneralizedPolynomial GeneralizedPolynomial::operator-() const {
  GeneralizedPolynomial out(basis_);
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
  return out;
}

GeneralizedPolynomial& GeneralizedPolynomial::operator+=(const GeneralizedPolynomial& other) {
  require_same_basis(*this, other);
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

GeneralizedPolynomial& GeneralizedPolynomial::operator-=(const GeneralizedPolynomial& other) {
  require_same_basis(*this, other);
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

double GeneralizedPolynomial::eval(double y) const {
  long double sum = 0.0L;
  for (const auto& [w, c] : terms_) {
    const long double p = std::pow(static_cast<long double>(y), w.value(*basis_));
    sum += c.convert_to<long double>() * p;
  }
  const double out = static_cast<double>(sum);
  if (!std::isfinite(out)) throw OverflowError("generalized polynomial evaluation overflowed");
  return out;
}

double GeneralizedPolynomial::eval_abs(double y) const {
  long double sum = 0.0L;
  for (const auto& [w, c] : terms_) {
    const long double p = std::pow(static_cast<long double>(y), w.value(*basis_));
    sum += abs(c).convert_to<long double>() * p;
  }
  const double out = static_cast<double>(sum);
  if (!std::isfinite(out)) throw OverflowError("generalized polynomial evaluation overflowed");
  return out;
}

bool GeneralizedPolynomial::operator==(const GeneralizedPolynomial& other) const {
  return same_basis(other) && terms_ == other.terms_;
}

GeneralizedPolynomial gp_add(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b) {
  GeneralizedPolynomial out = a;
  out += b;
  return out;
}

GeneralizedPolynomial gp_sub(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b) {
  GeneralizedPolynomial out = a;
  out -= b;
  return out;
}

GeneralizedPolynomial gp_mul(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b) {
  require_same_basis(a, b);
  GeneralizedPolynomial::TermMap acc;
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) acc[wa + wb] += ca * cb;
  return GeneralizedPolynomial(a.basis_ptr(), std::move(acc));
}

double gp_eval(const GeneralizedPolynomial& p, double y) { return p.eval(y); }

std::string to_string(const GeneralizedPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [w, c] : p.sorted_terms()) {
    const bool negative = c < 0;
    const Integer mag = negative ? Integer(-c) : c;
    if (out.empty())
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    if (w.is_zero()) {
      out += mag.str();
      continue;
    }
    if (mag != 1) out += mag.str() + "·";
    out += "y^{" + to_string(w, p.basis()) + "}";
  }
  return out;
}

RationalGF::RationalGF(GeneralizedPolynomial numerator, GeneralizedPolynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  require_same_basis(num_, den_);
  const Integer d0 = den_.constant_term();
  if (d0 == 0)
    throw AlgebraError("not a DNC generating function: denominator has no constant term");
  if (d0 < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

double RationalGF::eval(double y) const { return num_.eval(y) / den_.eval(y); }

Integer CoefficientSeries::total() const {
  Integer t = 0;
  for (const auto& e : entries) t += e.count;
  return t;
}

GeneralizedPolynomial CoefficientSeries::as_polynomial() const {
  GeneralizedPolynomial::TermMap t;
  for (const auto& e : entries) t.emplace(e.weight, e.count);
  return GeneralizedPolynomial(basis, std::move(t));
}

bool within_cutoff(double weight_value, double cutoff) {
  return weight_value <= cutoff + 1e-12 * std::max(1.0, std::abs(cutoff));
}

CoefficientSeries expand_series(const RationalGF& gf, double cutoff, const ExpandOptions& options) {
  if (!std::isfinite(cutoff) || cutoff < 0.0)
    throw AlgebraError("series cutoff must be finite and nonnegative");

  const GeneralizedPolynomial& num = gf.numerator();
  const GeneralizedPolynomial& den = gf.denominator();
  const WeightBasis& basis = num.basis();
  const WeightOrder order{&basis};

  // D = d0 - E with E carrying only strictly positive exponents, so
  // d0·S = N + E·S determines S weight by weight.
  const Integer d0 = den.constant_term();
  std::vector<std::pair<WeightVector, Integer>> shift;
  for (const auto& [w, c] : den.terms())
    if (!w.is_zero()) shift.emplace_back(w, -c);

  std::set<WeightVector, WeightOrder> support(order);
  std::vector<WeightVector> pending;
  auto visit = [&](const WeightVector& w) {
    if (!within_cutoff(w.value(basis), cutoff)) return;
    if (support.insert(w).second) {
      if (support.size() > options.term_limit)
        throw ResourceError("series expansion exceeded the term limit of " +
                            std::to_string(options.term_limit));
      pending.push_back(w);
    }
  };
  for (const auto& [w, c] : num.terms()) visit(w);
  while (!pending.empty()) {
    const WeightVector w = std::move(pending.back());
    pending.pop_back();
    for (const auto& [e, c] : shift) visit(w + e);
  }

  CoefficientSeries out;
  out.basis = gf.basis_ptr();
  out.cutoff = cutoff;

  auto emit = [&](const WeightVector& w, const Integer& count) {
    if (count < 0)
      throw AlgebraError("not a DNC generating function: negative coefficient at weight " +
                         to_string(w, basis));
    if (count != 0) out.entries.push_back({w, count});
  };

  if (d0 == 1) {
    std::map<WeightVector, Integer> s;
    for (const auto& w : support) {
      Integer v = num.coefficient(w);
      for (const auto& [e, c] : shift)
        if (auto rest = w.minus(e)) {
          auto it = s.find(*rest);
          if (it != s.end()) v += c * it->second;
        }
      emit(w, v);
      s.emplace(w, std::move(v));
    }
    return out;
  }

  std::map<WeightVector, Rational> s;
  for (const auto& w : support) {
    Rational v = Rational(num.coefficient(w));
    for (const auto& [e, c] : shift)
      if (auto rest = w.minus(e)) {
        auto it = s.find(*rest);
        if (it != s.end()) v += Rational(c) * it->second;
      }
    v /= Rational(d0);
    if (denominator(v) != 1)
      throw AlgebraError("series coefficient at weight " + to_string(w, basis) +
                         " is not an integer; the channel description is ambiguous or invalid");
    emit(w, numerator(v));
    s.emplace(w, std::move(v));
  }
  return out;
}

}  // namespace dnc
