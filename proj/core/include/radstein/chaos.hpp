#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "radstein/enumeration.hpp"
#include "radstein/functional.hpp"
#include "radstein/space.hpp"

namespace radstein {

/// Symmetric kernel of order n vanishing on diagonals, stored sparsely on its
/// canonical representatives: strictly increasing index tuples.
struct Kernel {
  int order = 0;
  std::map<std::vector<int>, double> entries;

  double value(std::vector<int> tuple) const;
  /// Full l^2 norm over ordered tuples (order! times the representative sum).
  double norm_squared() const;
  double inner(const Kernel& other) const;
};

/// F = mean + sum_n J_n(f_n) with f_n symmetric and diagonal-free.
struct ChaosDecomposition {
  int index_count = 0;
  double mean = 0.0;
  std::vector<Kernel> kernels;  // kernels[i] has order i+1

  const Kernel* kernel(int order) const {
    return (order >= 1 && order <= static_cast<int>(kernels.size())) ? &kernels[order - 1]
                                                                     : nullptr;
  }
  /// Var[F] = sum_n n! ||f_n||^2.
  double variance() const;
};

/// Kernels via Stroock's identity f_n(k_1..k_n) = E[F Y_{k_1}...Y_{k_n}] / n!,
/// computed exactly by a fast basis transform over all 2^m configurations.
ChaosDecomposition stroock_decompose(const RademacherSpace& space, const Functional& f,
                                     int cap = kDefaultEnumerationCap, double drop_tol = 1e-13);

/// J_n(f) = n! sum_{i_1<...<i_n} f(i_1..i_n) Y_{i_1}...Y_{i_n} as a functional.
Functional multiple_integral(const RademacherSpace& space, const Kernel& kernel);

/// Pointwise reconstruction mean + sum_n J_n(f_n).
Functional to_functional(const RademacherSpace& space, const ChaosDecomposition& decomp);

enum class OuMode { L, LInverse, Semigroup };

/// Coefficientwise Ornstein-Uhlenbeck calculus: L scales order n by -n,
/// L^{-1} by -1/n (centred input required), the semigroup P_t by e^{-nt}.
ChaosDecomposition ou_transform(const ChaosDecomposition& decomp, OuMode mode, double t = 0.0);

/// D_k F = sum_n n J_{n-1}(f_n(., k)) at the coefficient level.
ChaosDecomposition gradient_via_chaos(const ChaosDecomposition& decomp, int k);

/// Divergence of the process u = (u_0..u_{m-1}): kernels of each component are
/// grouped into g_{n+1}(., k), symmetrized and restricted off the diagonal.
Functional divergence(const RademacherSpace& space, const std::vector<Functional>& u,
                      int cap = kDefaultEnumerationCap);

/// Same computation, returning the decomposition of delta(u).
ChaosDecomposition divergence_decomposition(const RademacherSpace& space,
                                            const std::vector<Functional>& u,
                                            int cap = kDefaultEnumerationCap);

/// Monte Carlo evaluation of P_t f at a fixed configuration via the
/// Ornstein-Uhlenbeck process: each coordinate is redrawn independently with
/// probability 1 - e^{-t} (the mean-one exponential clock having rung by t)
/// and kept otherwise. Returns (estimate, standard error).
std::pair<double, double> mehler_estimate(const RademacherSpace& space, const Functional& f,
                                          double t, const Configuration& base_config,
                                          std::int64_t samples, std::uint64_t seed);

/// Dense chaos coefficients indexed by coordinate subsets (bitmask): the
/// fast-transform backend behind Stroock decomposition and the exact
/// Malliavin-Stein evaluator.
namespace dense {

/// coeffs[S] = E[F prod_{k in S} Y_k] from per-configuration values.
std::vector<double> chaos_coefficients(const RademacherSpace& space,
                                       const std::vector<double>& values);

/// Inverse: values[w] = sum_S coeffs[S] prod_{k in S} Y_k(w).
std::vector<double> evaluate_coefficients(const RademacherSpace& space,
                                          const std::vector<double>& coeffs);

}  // namespace dense

}  // namespace radstein
