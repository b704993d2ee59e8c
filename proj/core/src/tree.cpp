#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "radstein/stats/tree.hpp"

namespace radstein {

TreeModel::TreeModel(std::vector<int> parent) : parent_(std::move(parent)) {
  const int v = static_cast<int>(parent_.size());
  if (v < 2) throw std::invalid_argument("TreeModel: need at least one edge");
  depth_.assign(v, 0);
  children_.assign(v, {});
  for (int u = 1; u < v; ++u) {
    if (parent_[u] < 0 || parent_[u] >= u)
      throw std::invalid_argument("TreeModel: vertices must be numbered breadth-first");
    depth_[u] = depth_[parent_[u]] + 1;
    children_[parent_[u]].push_back(u);
  }
}

TreeModel TreeModel::regular(int degree, int depth) {
  if (degree < 1) throw std::invalid_argument("TreeModel::regular: degree must be >= 1");
  if (depth < 1) throw std::invalid_argument("TreeModel::regular: depth must be >= 1");
  std::vector<int> parent{-1};
  std::vector<int> layer{0};
  for (int level = 0; level < depth; ++level) {
    std::vector<int> next;
    for (int v : layer)
      for (int c = 0; c < degree; ++c) {
        next.push_back(static_cast<int>(parent.size()));
        parent.push_back(v);
      }
    layer = std::move(next);
  }
  return TreeModel(std::move(parent));
}

TreeModel TreeModel::from_stream(std::istream& in) {
  std::map<int, std::vector<int>> children;  // 1-based input labels
  int a = 0, b = 0;
  int max_label = 1;
  while (in >> a >> b) {
    if (a < 1 || b < 1 || a == b) throw std::invalid_argument("TreeModel: invalid edge line");
    children[a].push_back(b);
    max_label = std::max({max_label, a, b});
  }
  // Relabel breadth-first from the root (input vertex 1).
  std::vector<int> parent{-1};
  std::map<int, int> relabel{{1, 0}};
  std::queue<int> queue;
  queue.push(1);
  int visited = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    auto it = children.find(v);
    if (it == children.end()) continue;
    for (int c : it->second) {
      if (relabel.contains(c)) throw std::invalid_argument("TreeModel: vertex has two parents");
      relabel[c] = static_cast<int>(parent.size());
      parent.push_back(relabel.at(v));
      queue.push(c);
      ++visited;
    }
  }
  if (visited != max_label)
    throw std::invalid_argument("TreeModel: input is not a single tree rooted at vertex 1");
  return TreeModel(std::move(parent));
}

int TreeModel::max_depth() const {
  return *std::max_element(depth_.begin(), depth_.end());
}

std::vector<int> TreeModel::interaction_neighborhood(int k) const {
  if (k < 0 || k >= edge_count())
    throw std::out_of_range("interaction_neighborhood: invalid edge label");
  const int child = k + 1;
  const int par = parent_[child];
  std::vector<int> out;
  for (int c : children_[child]) out.push_back(c - 1);  // edges below the child end
  if (par > 0) out.push_back(par - 1);                  // edge above the parent end
  for (int c : children_[par])
    if (c != child) out.push_back(c - 1);  // sibling edges
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> root, size;
  explicit UnionFind(int n) : root(n), size(n, 1) { std::iota(root.begin(), root.end(), 0); }
  int find(int v) {
    while (root[v] != v) {
      root[v] = root[root[v]];
      v = root[v];
    }
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    root[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

Functional percolation_statistic(const TreeModel& tree, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("percolation_statistic: p must lie in (0,1)");
  auto shared = std::make_shared<TreeModel>(tree);
  const int m = tree.edge_count();
  const int nv = tree.vertex_count();
  const double sigma = std::sqrt(p * (1.0 - p));

  // Any present edge incident to vertex v other than the skipped labels?
  auto incident_present = [](const TreeModel& t, const Configuration& c, int v, int skip1,
                             int skip2) {
    if (v > 0) {
      const int up = v - 1;  // edge to the parent
      if (up != skip1 && up != skip2 && c.get(up)) return true;
    }
    for (int child : t.children(v)) {
      const int down = child - 1;
      if (down != skip1 && down != skip2 && c.get(down)) return true;
    }
    return false;
  };

  Functional f;
  f.index_count = m;
  f.evaluate = [shared, m, nv](const Configuration& c) {
    UnionFind uf(nv);
    for (int k = 0; k < m; ++k)
      if (c.get(k)) uf.unite(k + 1, shared->parent(k + 1));
    std::vector<char> seen(nv, 0);
    int components = 0;
    for (int k = 0; k < m; ++k)
      if (c.get(k)) {
        const int r = uf.find(k + 1);
        if (!seen[r]) {
          seen[r] = 1;
          ++components;
        }
      }
    return static_cast<double>(components);
  };
  // Inserting edge k creates a component unless either endpoint already
  // touches one; then it extends or merges instead.
  f.gradient_oracle = [shared, incident_present, sigma](const Configuration& c, int k) {
    const TreeModel& t = *shared;
    const int child = k + 1;
    const int raw = 1 - incident_present(t, c, child, k, -1) -
                    incident_present(t, c, t.parent(child), k, -1);
    return sigma * raw;
  };
  // Only the indicator at the shared endpoint responds to both flips, and
  // only when no third edge meets that vertex.
  f.second_gradient_oracle = [shared, incident_present, sigma](const Configuration& c, int k,
                                                               int l) {
    if (k == l) return 0.0;
    const TreeModel& t = *shared;
    const int ck = k + 1, cl = l + 1;
    int shared_vertex = -1;
    if (ck == t.parent(cl) || t.parent(ck) == cl)
      shared_vertex = std::min(ck, cl);
    else if (t.parent(ck) == t.parent(cl))
      shared_vertex = t.parent(ck);
    else
      return 0.0;
    return incident_present(t, c, shared_vertex, k, l) ? 0.0 : -sigma * sigma;
  };
  f.interaction_oracle = [shared](int k) { return shared->interaction_neighborhood(k); };
  return f;
}

}  // namespace radstein
