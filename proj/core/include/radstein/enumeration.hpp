#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "radstein/functional.hpp"
#include "radstein/space.hpp"

namespace radstein {

inline constexpr int kDefaultEnumerationCap = 24;

/// Raised when an exact computation is requested beyond the enumeration cap.
class cap_error : public std::runtime_error {
 public:
  cap_error(int m, int cap)
      : std::runtime_error("index count " + std::to_string(m) + " exceeds enumeration cap " +
                           std::to_string(cap) + "; use the Monte Carlo mode instead") {}
};

inline void check_cap(int m, int cap) {
  if (m > cap) throw cap_error(m, cap);
}

/// Sum over all 2^m configurations of P(w) f(w). Deterministic; partitioned
/// into fixed chunks combined in index order.
double expectation_exact(const RademacherSpace& space, const Functional& f,
                         int cap = kDefaultEnumerationCap, int threads = 1);

/// Per-configuration probability weights indexed by bitmask.
std::vector<double> enumerate_weights(const RademacherSpace& space, int cap = kDefaultEnumerationCap);

/// Per-configuration values of f indexed by bitmask.
std::vector<double> enumerate_values(const RademacherSpace& space, const Functional& f,
                                     int cap = kDefaultEnumerationCap, int threads = 1);

/// The full law of f as (value, probability) pairs with values merged to
/// within `merge_tol` and sorted increasingly.
std::vector<std::pair<double, double>> enumerate_distribution(const RademacherSpace& space,
                                                              const Functional& f,
                                                              int cap = kDefaultEnumerationCap,
                                                              double merge_tol = 1e-12);

/// Exact mean and standard deviation of f under the product measure.
std::pair<double, double> exact_mean_stddev(const RademacherSpace& space, const Functional& f,
                                            int cap = kDefaultEnumerationCap);

}  // namespace radstein
