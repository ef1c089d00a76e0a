#pragma once

#include <cstddef>
#include <vector>

#include "dnc/channel_spec.hpp"
#include "dnc/error.hpp"
#include "dnc/genpoly.hpp"
#include "dnc/solver.hpp"

namespace dnc {

/// Deterministic membership automaton over symbol indices. States that cannot
/// reach acceptance are removed; a missing transition means rejection.
struct ConstraintAutomaton {
  static constexpr int kReject = -1;

  std::size_t num_symbols = 0;
  int initial = 0;
  std::vector<bool> accepting;
  std::vector<int> transitions;  // state * num_symbols + symbol

  std::size_t num_states() const { return accepting.size(); }
  int next(int state, std::size_t symbol) const {
    return transitions[static_cast<std::size_t>(state) * num_symbols + symbol];
  }
  bool accepts(const std::vector<std::size_t>& word) const;
};

struct AutomatonOptions {
  std::size_t state_limit = 10'000;
};

/// Free: one state. Forbidden patterns: failure-function (Aho–Corasick)
/// automaton. Regex: position automaton, then subset construction.
ConstraintAutomaton build_automaton(const ChannelSpec& spec, const AutomatonOptions& options = {});

struct EnumerateOptions {
  /// Maximum number of pending (state, weight) configurations.
  std::size_t config_limit = 2'000'000;
  AutomatonOptions automaton;
};

/// Thrown when the frontier outgrows its limit. `partial` holds every entry
/// below the weight at which enumeration stopped; those entries are exact.
class EnumerationLimitError : public ResourceError {
 public:
  EnumerationLimitError(const std::string& what, CoefficientSeries partial)
      : ResourceError(what), partial_(std::move(partial)) {}
  const CoefficientSeries& partial() const noexcept { return partial_; }

 private:
  CoefficientSeries partial_;
};

/// Counts every accepted string of weight <= cutoff exactly once, in
/// increasing weight order.
CoefficientSeries enumerate_by_weight(const ChannelSpec& spec, double cutoff,
                                      const EnumerateOptions& options = {});

/// Finite-sample growth estimate. With M(X) the largest ln N[w] over
/// weights <= X (attained at w*(X)), the estimate is
/// (M(W) - M(W/2)) / (w*(W) - w*(W/2)) at the top weight W; the error bound
/// is the spread of the same quotient over the upper half of the weights.
/// Heuristic; throws SolverError with fewer than two entries.
CapacityReport estimate_capacity(const CoefficientSeries& series);

}  // namespace dnc
