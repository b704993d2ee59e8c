#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "radstein/bounds.hpp"
#include "radstein/orbits.hpp"
#include "radstein/stats/erdos_renyi.hpp"
#include "radstein/stats/rates.hpp"
#include "radstein/stats/tree.hpp"

namespace radstein {

/// A rate-study request: one statistic family swept across sizes.
struct RateStudyConfig {
  StatisticKind kind = StatisticKind::Triangles;
  double alpha = 0.0;   // edge probability p = theta * n^{-alpha}
  double theta = 0.3;
  int degree = 0;       // target degree for the degree-count statistic
  SubgraphPattern pattern = SubgraphPattern::triangle();
  int tree_degree = 2;  // offspring count of the regular percolation tree
  double tree_p = 0.5;
  std::vector<int> sizes;  // vertex counts, or depths for trees
  std::size_t samples = 100000;
  int batches = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  std::int64_t pilot_multiplier = 10;
  std::optional<HolderTriple> triple;  // defaults to holder_select(alpha)
  BoundMode mode = BoundMode::MonteCarlo;

  HolderTriple effective_triple() const;
  /// Throws std::invalid_argument unless sizes are strictly increasing with
  /// at least three entries.
  void validate() const;
};

/// A statistic instantiated at one size, ready for bounding.
struct BuiltStatistic {
  RademacherSpace space;
  Functional f;  // raw (un-normalized) statistic
  SymmetryOrbits orbits;
  int size = 0;       // the configured size (n or depth)
  double x = 0.0;     // abscissa for slope fits: n, or edge count for trees
  double p = 0.0;     // per-coordinate success probability
  std::string name;   // CSV statistic label
};

BuiltStatistic build_statistic(const RateStudyConfig& config, int size);

/// One evaluated size: the seven bound terms plus the empirical (or exact)
/// Kolmogorov distance measured on the same sample set.
struct BoundRow {
  std::string statistic;
  int n = 0;
  double p = 0.0;
  std::array<double, 7> terms{};
  double total = 0.0;
  double dk_emp = 0.0;
  double dk_stderr = 0.0;
  std::string mode;  // "exact" or "mc"
  std::uint64_t seed = 0;
};

/// When `breakdown` is given, it receives the full per-term report
/// (standard errors, normalization) beyond what the row carries.
BoundRow run_bound(const RateStudyConfig& config, int size,
                   BoundBreakdown* breakdown = nullptr);

struct RateReport {
  std::vector<BoundRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;  // per-row log-total residual from the fit
  double dk_slope = 0.0;
  double theoretical = 0.0;  // NaN when outside the statistic's window
};

RateReport run_rate(const RateStudyConfig& config);

/// Ordinary least squares fit y = intercept + slope * x; returns
/// (slope, intercept, r_squared).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// CSV serialization, re-parseable without loss.
std::string rate_csv_header();
std::string to_csv_row(const BoundRow& row);
std::string to_csv(const RateReport& report);
std::vector<BoundRow> parse_csv_rows(const std::string& csv);

/// JSON serialization (mirrors the CSV schema, plus fit summary).
std::string to_json(const BoundRow& row);
std::string to_json(const RateReport& report);
BoundRow bound_row_from_json(const std::string& text);
std::vector<BoundRow> rate_rows_from_json(const std::string& text);

/// Line-oriented key=value configuration, '#' comments allowed.
RateStudyConfig parse_config(std::istream& in);
RateStudyConfig parse_config_file(const std::string& path);

}  // namespace radstein
