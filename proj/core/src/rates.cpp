#include <stdexcept>

#include "radstein/stats/rates.hpp"

namespace radstein {

StatisticKind statistic_kind_from_string(const std::string& name) {
  if (name == "triangles") return StatisticKind::Triangles;
  if (name == "subgraph") return StatisticKind::Subgraph;
  if (name == "degrees") return StatisticKind::Degrees;
  if (name == "tree") return StatisticKind::TreePercolation;
  throw std::invalid_argument("unknown statistic kind: " + name);
}

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::Triangles: return "triangles";
    case StatisticKind::Subgraph: return "subgraph";
    case StatisticKind::Degrees: return "degrees";
    case StatisticKind::TreePercolation: return "tree";
  }
  return "unknown";
}

double theoretical_rate(StatisticKind kind, double alpha, int d) {
  switch (kind) {
    case StatisticKind::Triangles:
      if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("theoretical_rate: triangles need alpha in [0,1)");
      if (alpha <= 0.5) return -1.0 + alpha;
      if (alpha <= 2.0 / 3.0) return -0.75 + alpha / 2.0;
      return -5.0 * (1.0 - alpha) / 4.0;
    case StatisticKind::Subgraph:
      if (alpha != 0.0)
        throw std::invalid_argument("theoretical_rate: subgraph counts need fixed p (alpha = 0)");
      return -1.0;
    case StatisticKind::Degrees:
      if (d < 0) throw std::invalid_argument("theoretical_rate: degrees need d >= 0");
      if (d == 0) {
        if (!(alpha >= 0.0 && alpha < 2.0))
          throw std::invalid_argument("theoretical_rate: degree d=0 needs alpha in [0,2)");
        return -1.0 + alpha / 2.0;
      }
      if (!(alpha >= 1.0 &&
            alpha < (3.0 * d - 1.0) / (3.0 * d - 2.0)))
        throw std::invalid_argument(
            "theoretical_rate: degree d>=1 needs alpha in [1,(3d-1)/(3d-2))");
      return 0.5 - 1.5 * d - alpha + 1.5 * alpha * d;
    case StatisticKind::TreePercolation:
      return -0.5;  // in the edge count
  }
  throw std::invalid_argument("theoretical_rate: unknown statistic kind");
}

}  // namespace radstein
