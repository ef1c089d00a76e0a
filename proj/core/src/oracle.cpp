#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "dnc/oracle.hpp"

namespace dnc {

namespace {

double log_of(const Integer& n) {
  const std::size_t bits = msb(n) + 1;
  if (bits < 1000) return std::log(n.convert_to<double>());
  const std::size_t shift = bits - 64;
  const Integer top = n >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", w);
  return buf;
}

}  // namespace

CoefficientSeries enumerate_by_weight(const ChannelSpec& spec, double cutoff,
                                      const EnumerateOptions& options) {
  if (!std::isfinite(cutoff) || cutoff < 0.0)
    throw SolverError("enumeration cutoff must be finite and nonnegative");
  const ConstraintAutomaton automaton = build_automaton(spec, options.automaton);
  const WeightBasis& basis = *spec.basis;

  CoefficientSeries out;
  out.basis = spec.basis;
  out.cutoff = cutoff;

  // Frontier keyed by exact weight; the smallest key is final once reached
  // because every symbol weight is strictly positive.
  using StateCounts = std::map<int, Integer>;
  std::map<WeightVector, StateCounts, WeightOrder> frontier(WeightOrder{&basis});
  std::size_t pending = 1;
  frontier[WeightVector{}][automaton.initial] = 1;

  while (!frontier.empty()) {
    auto node = frontier.extract(frontier.begin());
    const WeightVector& w = node.key();
    pending -= node.mapped().size();

    Integer accepted = 0;
    for (const auto& [state, count] : node.mapped()) {
      if (automaton.accepting[static_cast<std::size_t>(state)]) accepted += count;
      for (std::size_t x = 0; x < spec.symbols.size(); ++x) {
        const int t = automaton.next(state, x);
        if (t == ConstraintAutomaton::kReject) continue;
        WeightVector nw = w + spec.symbols[x].weight;
        if (!within_cutoff(nw.value(basis), cutoff)) continue;
        auto [it, fresh] = frontier[std::move(nw)].try_emplace(t, 0);
        if (fresh) ++pending;
        it->second += count;
      }
    }
    if (accepted != 0) out.entries.push_back({w, std::move(accepted)});
    if (pending > options.config_limit)
      throw EnumerationLimitError("enumeration frontier exceeded " +
                                      std::to_string(options.config_limit) + " configurations",
                                  std::move(out));
  }
  return out;
}

CapacityReport estimate_capacity(const CoefficientSeries& series) {
  const auto& entries = series.entries;
  if (entries.size() < 2) throw SolverError("capacity estimate needs at least two series entries");
  const WeightBasis& basis = *series.basis;

  std::vector<double> weight(entries.size()), best_log(entries.size()), best_weight(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    weight[i] = entries[i].weight.value(basis);
    const double lg = log_of(entries[i].count);
    if (i == 0 || lg > best_log[i - 1]) {
      best_log[i] = lg;
      best_weight[i] = weight[i];
    } else {
      best_log[i] = best_log[i - 1];
      best_weight[i] = best_weight[i - 1];
    }
  }

  // Index of the last entry with weight <= x.
  auto upto = [&](double x) -> std::ptrdiff_t {
    auto it = std::upper_bound(weight.begin(), weight.end(), x,
                               [](double v, double w) { return !within_cutoff(w, v); });
    return (it - weight.begin()) - 1;
  };
  auto quotient = [&](double x) {
    const auto hi = upto(x);
    const auto lo = upto(0.5 * x);
    if (hi < 0 || lo < 0) return 0.0;
    const double gap = best_weight[static_cast<std::size_t>(hi)] - best_weight[static_cast<std::size_t>(lo)];
    if (gap <= 0.0) return 0.0;
    return (best_log[static_cast<std::size_t>(hi)] - best_log[static_cast<std::size_t>(lo)]) / gap;
  };

  const double top = weight.back();
  const double estimate = quotient(top);
  double qmin = estimate, qmax = estimate;
  for (double w : weight)
    if (w >= 0.5 * top && w > 0.0) {
      const double q = quotient(w);
      qmin = std::min(qmin, q);
      qmax = std::max(qmax, q);
    }

  CapacityReport rep;
  rep.method = CapacityMethod::OracleEstimate;
  rep.capacity_nats = estimate;
  rep.error_bound = std::max(qmax - qmin, DBL_EPSILON * std::max(1.0, std::abs(estimate)));
  rep.radius_or_pole = std::exp(-estimate);
  rep.bracket_lo = std::exp(-(estimate + rep.error_bound));
  rep.bracket_hi = std::exp(-(estimate - rep.error_bound));
  rep.note = "finite-sample estimate from enumerated counts up to weight " + format_weight(top);
  return rep;
}

}  // namespace dnc
