#pragma once

#include <iosfwd>
#include <vector>

#include "radstein/functional.hpp"
#include "radstein/space.hpp"

namespace radstein {

/// A finite rooted tree with breadth-first edge labels: vertex 0 is the root,
/// vertices are numbered layer by layer, and edge k joins vertex k+1 to its
/// parent. All labels are 0-based.
class TreeModel {
 public:
  /// Rooted D-ary tree truncated at `depth`: the root and every internal
  /// vertex have `degree` children.
  static TreeModel regular(int degree, int depth);

  /// Line-oriented "parent child" pairs with 1-based vertex numbers and the
  /// root implicit as vertex 1; relabeled breadth-first internally.
  static TreeModel from_stream(std::istream& in);

  int edge_count() const { return static_cast<int>(parent_.size()) - 1; }
  int vertex_count() const { return static_cast<int>(parent_.size()); }
  /// Parent vertex of vertex v (v >= 1).
  int parent(int v) const { return parent_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  /// Depth of the child endpoint of edge k (root layer is 0).
  int edge_depth(int k) const { return depth_[k + 1]; }
  int max_depth() const;

  RademacherSpace space(double p) const { return RademacherSpace(edge_count(), p); }

  /// Labels of edges sharing a vertex with edge k.
  std::vector<int> interaction_neighborhood(int k) const;

 private:
  explicit TreeModel(std::vector<int> parent);

  std::vector<int> parent_;  // parent_[0] = -1
  std::vector<int> depth_;   // per vertex
  std::vector<std::vector<int>> children_;
};

/// Number of connected components with at least one edge under bond
/// percolation with retention probability p, with analytic gradient oracles.
Functional percolation_statistic(const TreeModel& tree, double p);

}  // namespace radstein
