#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "radstein/enumeration.hpp"
#include "radstein/functional.hpp"
#include "radstein/montecarlo.hpp"
#include "radstein/orbits.hpp"
#include "radstein/space.hpp"

namespace radstein {

/// Conjugate exponents with 1/r + 1/s + 1/t = 1, used by the fourth term of
/// the second-order bound.
struct HolderTriple {
  double r = 2.0;
  double s = 4.0;
  double t = 4.0;

  bool valid(double tol = 1e-12) const;
};

/// Exponent triple for a target rate parameter alpha in [0,1): r is the
/// smallest even integer >= max{2, 4(2*alpha-1)/(1-alpha)}, s = t = 2r/(r-1).
HolderTriple holder_select(double alpha);

enum class BoundMode { Exact, MonteCarlo };

/// Centring and scaling applied to the raw statistic before bounding.
struct Normalization {
  double mean = 0.0;
  double stddev = 1.0;
  bool estimated = false;  // true when obtained from a pilot sample
};

/// The seven-term Kolmogorov-distance bound, each term carrying its own
/// constant so that total = sum of terms.
struct BoundBreakdown {
  std::array<double, 7> terms{};
  std::array<double, 7> stderrs{};  // all zero in exact mode
  double total = 0.0;
  double total_stderr = 0.0;
  HolderTriple triple;
  BoundMode mode = BoundMode::Exact;
  Normalization normalization;
};

struct McParams {
  SampleSpec spec;
  int threads = 1;
  /// Pilot sample size for normalization, as a multiple of spec.count.
  std::int64_t pilot_multiplier = 10;
  /// When set, used instead of running a pilot.
  std::optional<Normalization> normalization;
  /// Tuple grouping; defaults to one class per tuple via the interaction
  /// oracle when null.
  const SymmetryOrbits* orbits = nullptr;
  /// Optional sink for the normalized statistic at every sampled
  /// configuration (sample order), for empirical distance estimates sharing
  /// the bound's sample set.
  std::vector<double>* f_samples = nullptr;
};

/// Second-order Poincare-type Kolmogorov bound for a centred, unit-variance
/// functional. Exact mode enumerates every expectation (f must already be
/// normalized to 1e-6); Monte Carlo mode requires gradient, second-gradient
/// and interaction oracles, normalizes internally from a pilot sample, and
/// reports batch-means standard errors per term.
BoundBreakdown second_order_bound(const RademacherSpace& space, const Functional& f,
                                  const HolderTriple& triple, BoundMode mode,
                                  const McParams& mc = {}, int cap = kDefaultEnumerationCap);

/// The four-term bound underlying the seven-term one, evaluated exactly
/// through the chaos representation of -D L^{-1} F: the covariance-defect
/// term E|1 - <DF, -DL^{-1}F>|, two cubic terms, and a supremum over
/// indicator gradients taken over the attained values of F.
struct SteinBreakdown {
  std::array<double, 4> terms{};
  double total = 0.0;
};
SteinBreakdown malliavin_stein_bound(const RademacherSpace& space, const Functional& f,
                                     int cap = kDefaultEnumerationCap);

/// E[||DF||^2] = sum_k E[(D_k F)^2], an upper bound for Var[F]. Exact by
/// enumeration.
double poincare_upper(const RademacherSpace& space, const Functional& f,
                      int cap = kDefaultEnumerationCap);
/// Monte Carlo variant; requires a gradient oracle.
MomentEstimate poincare_upper_mc(const RademacherSpace& space, const Functional& f,
                                 const SampleSpec& spec, int threads = 1);

/// Standard normal CDF (via erfc; absolute error well below 1e-10).
double normal_cdf(double x);

/// sup_x |F_N(x) - Phi(x)| of the empirical CDF of sorted samples.
double empirical_kolmogorov(const std::vector<double>& sorted_samples);

/// Same supremum for a finite distribution given as sorted (value, prob)
/// atoms; the ground-truth distance for enumerable statistics.
double exact_kolmogorov(const std::vector<std::pair<double, double>>& distribution);

}  // namespace radstein
