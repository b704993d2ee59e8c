#pragma once

#include <utility>
#include <vector>

#include "radstein/functional.hpp"
#include "radstein/orbits.hpp"
#include "radstein/space.hpp"

namespace radstein {

/// G(n, p) with p = theta * n^{-alpha}, identified with C(n,2) Rademacher
/// coordinates through the lexicographic edge indexer on (min, max) vertex
/// pairs. Vertices and edge labels are 0-based.
class ErdosRenyiModel {
 public:
  ErdosRenyiModel(int n, double alpha, double theta);
  static ErdosRenyiModel fixed_p(int n, double p) { return {n, 0.0, p}; }

  int vertex_count() const { return n_; }
  int edge_count() const { return m_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  double p() const { return p_; }

  int edge_index(int i, int j) const;
  std::pair<int, int> edge(int k) const { return edges_[k]; }

  RademacherSpace space() const { return RademacherSpace(m_, p_); }

  /// Labels of edges sharing at least one vertex with edge k.
  std::vector<int> interaction_neighborhood(int k) const;

 private:
  int n_;
  double alpha_, theta_, p_;
  int m_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> pair_index_;  // n x n lookup
};

/// Number of triangles, as a raw (unnormalized) functional with analytic
/// first/second gradient oracles and the edge-adjacency interaction set.
Functional triangle_statistic(const ErdosRenyiModel& model);

/// A simple pattern graph with at least one edge; vertices 0..vertex_count-1.
struct SubgraphPattern {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;

  static SubgraphPattern triangle();
  static SubgraphPattern path(int vertices);  // path on `vertices` vertices
  static SubgraphPattern cycle(int vertices);

  /// Automorphism count by brute force; vertex_count <= 8.
  int automorphism_count() const;
  /// True when some pair of pattern edges is vertex-disjoint (widens the
  /// interaction set of the count statistic to every other edge).
  bool has_disjoint_edge_pair() const;
};

/// Number of copies of the pattern (subgraphs isomorphic to it), computed as
/// injective embeddings divided by the automorphism count.
Functional subgraph_statistic(const ErdosRenyiModel& model, const SubgraphPattern& pattern);

/// Number of vertices with degree exactly d.
Functional degree_statistic(const ErdosRenyiModel& model, int d);

/// Moment classes under vertex relabeling: the symmetric group acts
/// transitively on edges, so single-index sums collapse to one class and
/// pair/triple sums to a handful, counted from one anchored edge. Valid for
/// any vertex-relabeling-invariant statistic of the model.
SymmetryOrbits edge_transitive_orbits(const ErdosRenyiModel& model, const Functional& f);

}  // namespace radstein
