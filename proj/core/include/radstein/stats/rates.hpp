#pragma once

#include <string>

namespace radstein {

enum class StatisticKind { Triangles, Subgraph, Degrees, TreePercolation };

StatisticKind statistic_kind_from_string(const std::string& name);
std::string to_string(StatisticKind kind);

/// The expected convergence-rate exponent of the Kolmogorov distance: the
/// bound decays like n^exponent (for graphs, in the vertex count with
/// p = theta * n^{-alpha}) or like |edges|^exponent for tree percolation.
/// Throws on parameters outside the known validity window.
double theoretical_rate(StatisticKind kind, double alpha = 0.0, int d = -1);

}  // namespace radstein
