#pragma once

// Synthetic inputs for the density check.

#include <cmath>
#include <vector>

namespace dnc::testing {

/// Sorted weights with exactly ceil(1.5^n) distinct values below each integer n <= n_max.
inline std::vector<double> dense_weights(int n_max) {
  std::vector<double> w;
  for (int n = 1; n <= n_max; ++n) {
    const auto target = static_cast<std::size_t>(std::ceil(std::pow(1.5, n)));
    const std::size_t fresh = target - w.size();
    for (std::size_t i = 0; i < fresh; ++i)
      w.push_back(n - 1 + static_cast<double>(i) / static_cast<double>(fresh));
  }
  return w;
}

}  // namespace dnc::testing
