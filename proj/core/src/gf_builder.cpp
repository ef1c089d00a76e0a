#include "dnc/gf_builder.hpp"

#include "dnc/error.hpp"

namespace dnc {

namespace {

GeneralizedPolynomial one(const BasisPtr& basis) { return GeneralizedPolynomial::constant(basis, 1); }

const Symbol& lookup(const ChannelSpec& spec, const std::string& name) {
  const auto idx = spec.symbol_index(name);
  if (!idx) throw BuildError("undeclared symbol '" + name + "'");
  return spec.symbols[*idx];
}

RationalGF translate(const RegexNode& n, const ChannelSpec& spec) {
  const BasisPtr& basis = spec.basis;
  switch (n.kind) {
    case RegexNode::Kind::Epsilon:
      return {one(basis), one(basis)};
    case RegexNode::Kind::Symbol:
      return {GeneralizedPolynomial::monomial(basis, lookup(spec, n.symbol).weight), one(basis)};
    case RegexNode::Kind::Union: {
      RationalGF acc = translate(n.children.front(), spec);
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        const RationalGF rhs = translate(n.children[i], spec);
        acc = RationalGF(acc.numerator() * rhs.denominator() + rhs.numerator() * acc.denominator(),
                         acc.denominator() * rhs.denominator());
      }
      return acc;
    }
    case RegexNode::Kind::Concat: {
      RationalGF acc = translate(n.children.front(), spec);
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        const RationalGF rhs = translate(n.children[i], spec);
        acc = RationalGF(acc.numerator() * rhs.numerator(), acc.denominator() * rhs.denominator());
      }
      return acc;
    }
    case RegexNode::Kind::Star: {
      const RationalGF inner = translate(n.children.front(), spec);
      // ε ∈ S iff gf_S(0) != 0; the denominator's constant term is nonzero.
      if (inner.numerator().constant_term() != 0)
        throw BuildError("star of nullable expression: the starred sub-expression accepts ε");
      return {inner.denominator(), inner.denominator() - inner.numerator()};
    }
  }
  throw BuildError("corrupt regular expression tree");
}

void require_unit_at_zero(const RationalGF& gf) {
  if (gf.numerator().constant_term() != gf.denominator().constant_term())
    throw BuildError("the channel must accept the empty string exactly once (gf(0) = 1)");
}

}  // namespace

GeneralizedPolynomial AutocorrelationPolynomial::to_polynomial(const BasisPtr& basis,
                                                               const WeightVector& step) const {
  GeneralizedPolynomial::TermMap t;
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    if (coefficients[i]) t.emplace(step.scaled(static_cast<std::uint32_t>(i)), 1);
  return GeneralizedPolynomial(basis, std::move(t));
}

AutocorrelationPolynomial autocorrelation(const std::vector<std::string>& pattern) {
  if (pattern.empty()) throw BuildError("autocorrelation of an empty pattern");
  const std::size_t k = pattern.size();
  AutocorrelationPolynomial out{pattern, std::vector<std::uint8_t>(k, 0)};
  for (std::size_t i = 0; i < k; ++i) {
    bool match = true;
    for (std::size_t j = 0; j + i < k && match; ++j) match = pattern[i + j] == pattern[j];
    out.coefficients[i] = match ? 1 : 0;
  }
  return out;
}

RationalGF gf_pattern_avoidance(const ChannelSpec& spec) {
  const auto* fp = std::get_if<ForbiddenPatterns>(&spec.constraint);
  if (!fp) throw BuildError("pattern-avoidance construction needs a forbidden-pattern constraint");
  if (spec.symbols.size() != 2 || fp->patterns.size() != 1 ||
      spec.symbols[0].weight != spec.symbols[1].weight)
    throw BuildError(
        "the autocorrelation construction covers exactly one forbidden pattern over two symbols "
        "of equal weight; describe this channel with a regex constraint instead");

  const BasisPtr& basis = spec.basis;
  const WeightVector& u = spec.symbols[0].weight;
  const auto& pattern = fp->patterns.front();
  for (const auto& s : pattern) lookup(spec, s);

  const GeneralizedPolynomial c = autocorrelation(pattern).to_polynomial(basis, u);
  const auto k = static_cast<std::uint32_t>(pattern.size());
  const GeneralizedPolynomial yk = GeneralizedPolynomial::monomial(basis, u.scaled(k));
  const GeneralizedPolynomial one_minus_2y =
      one(basis) - GeneralizedPolynomial::monomial(basis, u, 2);
  return {c, yk + one_minus_2y * c};
}

RationalGF gf_from_regex(const RegexNode& expr, const ChannelSpec& spec) {
  RationalGF gf = translate(expr, spec);
  require_unit_at_zero(gf);
  return gf;
}

RationalGF gf_free_monoid(const ChannelSpec& spec) {
  if (spec.symbols.empty()) throw BuildError("free monoid over an empty alphabet");
  GeneralizedPolynomial den = one(spec.basis);
  for (const auto& s : spec.symbols) den -= GeneralizedPolynomial::monomial(spec.basis, s.weight);
  return {one(spec.basis), std::move(den)};
}

RationalGF build_gf(const ChannelSpec& spec) {
  return std::visit(
      [&](const auto& c) -> RationalGF {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, FreeConstraint>)
          return gf_free_monoid(spec);
        else if constexpr (std::is_same_v<T, ForbiddenPatterns>)
          return gf_pattern_avoidance(spec);
        else
          return gf_from_regex(c.expr, spec);
      },
      spec.constraint);
}

}  // namespace dnc
