#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "radstein/stats/erdos_renyi.hpp"

namespace radstein {

ErdosRenyiModel::ErdosRenyiModel(int n, double alpha, double theta)
    : n_(n), alpha_(alpha), theta_(theta) {
  if (n < 2) throw std::invalid_argument("ErdosRenyiModel: need at least 2 vertices");
  if (alpha < 0.0) throw std::invalid_argument("ErdosRenyiModel: alpha must be >= 0");
  p_ = theta * std::pow(static_cast<double>(n), -alpha);
  if (!(p_ > 0.0 && p_ < 1.0))
    throw std::invalid_argument("ErdosRenyiModel: theta*n^-alpha must lie in (0,1)");
  m_ = n * (n - 1) / 2;
  edges_.reserve(m_);
  pair_index_.assign(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      pair_index_[static_cast<std::size_t>(i) * n + j] =
          pair_index_[static_cast<std::size_t>(j) * n + i] =
              static_cast<int>(edges_.size());
      edges_.emplace_back(i, j);
    }
}

int ErdosRenyiModel::edge_index(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j)
    throw std::out_of_range("edge_index: invalid vertex pair");
  return pair_index_[static_cast<std::size_t>(i) * n_ + j];
}

std::vector<int> ErdosRenyiModel::interaction_neighborhood(int k) const {
  if (k < 0 || k >= m_) throw std::out_of_range("interaction_neighborhood: invalid edge label");
  const auto [i, j] = edges_[k];
  std::vector<int> out;
  out.reserve(2 * (n_ - 2));
  for (int v = 0; v < n_; ++v) {
    if (v == i || v == j) continue;
    out.push_back(edge_index(i, v));
    out.push_back(edge_index(j, v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Adjacency rows as bitsets, rebuilt per evaluation.
struct HostGraph {
  int n = 0, words = 0;
  std::vector<std::uint64_t> adj;  // row i at [i*words, (i+1)*words)

  explicit HostGraph(int vertices)
      : n(vertices), words((vertices + 63) / 64), adj(static_cast<std::size_t>(n) * words, 0) {}

  void add_edge(int i, int j) {
    adj[static_cast<std::size_t>(i) * words + (j >> 6)] |= std::uint64_t{1} << (j & 63);
    adj[static_cast<std::size_t>(j) * words + (i >> 6)] |= std::uint64_t{1} << (i & 63);
  }
  const std::uint64_t* row(int i) const { return &adj[static_cast<std::size_t>(i) * words]; }
  bool has(int i, int j) const {
    return (row(i)[j >> 6] >> (j & 63)) & 1u;
  }
};

HostGraph build_host(const ErdosRenyiModel& model, const Configuration& c) {
  HostGraph host(model.vertex_count());
  for (int k = 0; k < model.edge_count(); ++k)
    if (c.get(k)) {
      const auto [i, j] = model.edge(k);
      host.add_edge(i, j);
    }
  return host;
}

// The host depends only on the vertex count and the edge bitmask, so a
// one-entry per-thread cache lets the many oracle calls made at a single
// sampled configuration share one rebuild.
const HostGraph& cached_host(const ErdosRenyiModel& model, const Configuration& c) {
  thread_local int key_n = -1;
  thread_local std::vector<std::uint64_t> key_words;
  thread_local HostGraph host(0);
  if (key_n != model.vertex_count() || key_words != c.words()) {
    host = build_host(model, c);
    key_n = model.vertex_count();
    key_words = c.words();
  }
  return host;
}

double count_triangles(const ErdosRenyiModel& model, const Configuration& c) {
  const HostGraph& host = cached_host(model, c);
  const int words = host.words;
  double total = 0.0;
  for (int k = 0; k < model.edge_count(); ++k) {
    if (!c.get(k)) continue;
    const auto [i, j] = model.edge(k);  // i < j; count common neighbors v > j
    const std::uint64_t* ri = host.row(i);
    const std::uint64_t* rj = host.row(j);
    for (int word = j >> 6; word < words; ++word) {
      std::uint64_t common = ri[word] & rj[word];
      if (word == (j >> 6)) common &= ~((std::uint64_t{2} << (j & 63)) - 1);  // keep bits > j
      total += std::popcount(common);
    }
  }
  return total;
}

}  // namespace

Functional triangle_statistic(const ErdosRenyiModel& model) {
  if (model.vertex_count() < 3) throw std::invalid_argument("triangle_statistic: need n >= 3");
  auto shared = std::make_shared<ErdosRenyiModel>(model);
  const double sigma = std::sqrt(model.p() * (1.0 - model.p()));
  Functional f;
  f.index_count = model.edge_count();
  f.evaluate = [shared](const Configuration& c) { return count_triangles(*shared, c); };
  // Flipping edge (i,j) changes the count by the number of wedges i-v-j.
  f.gradient_oracle = [shared, sigma](const Configuration& c, int k) {
    const auto [i, j] = shared->edge(k);
    int wedges = 0;
    for (int v = 0; v < shared->vertex_count(); ++v) {
      if (v == i || v == j) continue;
      if (c.get(shared->edge_index(i, v)) && c.get(shared->edge_index(j, v))) ++wedges;
    }
    return sigma * wedges;
  };
  // Nonzero only for edges sharing one vertex; then it indicates the closing
  // edge of the triangle spanned by the two.
  f.second_gradient_oracle = [shared, sigma](const Configuration& c, int k, int l) {
    if (k == l) return 0.0;
    const auto [i, j] = shared->edge(k);
    const auto [u, v] = shared->edge(l);
    int a = -1, b = -1;  // non-shared endpoints
    if (i == u) a = j, b = v;
    else if (i == v) a = j, b = u;
    else if (j == u) a = i, b = v;
    else if (j == v) a = i, b = u;
    else return 0.0;
    return c.get(shared->edge_index(a, b)) ? sigma * sigma : 0.0;
  };
  f.interaction_oracle = [shared](int k) { return shared->interaction_neighborhood(k); };
  return f;
}

SubgraphPattern SubgraphPattern::triangle() { return {3, {{0, 1}, {1, 2}, {0, 2}}}; }

SubgraphPattern SubgraphPattern::path(int vertices) {
  if (vertices < 2) throw std::invalid_argument("path: need at least 2 vertices");
  SubgraphPattern p;
  p.vertex_count = vertices;
  for (int i = 0; i + 1 < vertices; ++i) p.edges.emplace_back(i, i + 1);
  return p;
}

SubgraphPattern SubgraphPattern::cycle(int vertices) {
  if (vertices < 3) throw std::invalid_argument("cycle: need at least 3 vertices");
  SubgraphPattern p = path(vertices);
  p.edges.emplace_back(vertices - 1, 0);
  return p;
}

int SubgraphPattern::automorphism_count() const {
  if (vertex_count < 1 || vertex_count > 8)
    throw std::invalid_argument("automorphism_count: 1 <= vertex_count <= 8 required");
  std::vector<std::vector<bool>> adj(vertex_count, std::vector<bool>(vertex_count, false));
  for (const auto& [a, b] : edges) adj[a][b] = adj[b][a] = true;
  std::vector<int> perm(vertex_count);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    bool ok = true;
    for (const auto& [a, b] : edges)
      if (!adj[perm[a]][perm[b]]) {
        ok = false;
        break;
      }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

bool SubgraphPattern::has_disjoint_edge_pair() const {
  for (std::size_t a = 0; a < edges.size(); ++a)
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      const auto& [i, j] = edges[a];
      const auto& [u, v] = edges[b];
      if (i != u && i != v && j != u && j != v) return true;
    }
  return false;
}

namespace {

// Backtracking counter for injective pattern embeddings into a host graph,
// honoring a partial pre-assignment.
struct EmbeddingCounter {
  const SubgraphPattern& pattern;
  const HostGraph& host;
  std::vector<int> assign;          // pattern vertex -> host vertex or -1
  std::vector<std::uint64_t> used;  // host-vertex bitset
  std::vector<std::vector<int>> padj;

  std::vector<std::uint64_t> cand_depth;  // one candidate buffer per depth

  EmbeddingCounter(const SubgraphPattern& p, const HostGraph& h)
      : pattern(p), host(h), assign(p.vertex_count, -1), used(h.words, 0),
        padj(p.vertex_count),
        cand_depth(static_cast<std::size_t>(p.vertex_count) * h.words) {
    for (const auto& [a, b] : p.edges) {
      padj[a].push_back(b);
      padj[b].push_back(a);
    }
  }

  bool mark(int hv) {
    used[hv >> 6] |= std::uint64_t{1} << (hv & 63);
    return true;
  }
  void unmark(int hv) { used[hv >> 6] &= ~(std::uint64_t{1} << (hv & 63)); }
  bool is_used(int hv) const { return (used[hv >> 6] >> (hv & 63)) & 1u; }

  // True when the pre-assignment is locally consistent (injectivity is the
  // caller's responsibility via mark()).
  bool consistent() const {
    for (const auto& [a, b] : pattern.edges)
      if (assign[a] >= 0 && assign[b] >= 0 && !host.has(assign[a], assign[b])) return false;
    return true;
  }

  double count() { return count_at(0); }

  double count_at(int depth) {
    int next = -1, best = -1, unassigned = 0;
    for (int v = 0; v < pattern.vertex_count; ++v) {
      if (assign[v] >= 0) continue;
      ++unassigned;
      int assigned_nbrs = 0;
      for (int w : padj[v])
        if (assign[w] >= 0) ++assigned_nbrs;
      if (assigned_nbrs > best) {
        best = assigned_nbrs;
        next = v;
      }
    }
    if (next < 0) return 1.0;  // complete embedding
    // All pattern edges at `next` point to assigned vertices exactly when its
    // assigned-neighbor count equals its degree; if it is also the last
    // unassigned vertex, each candidate bit is a full embedding.
    const bool leaf = unassigned == 1 && best == static_cast<int>(padj[next].size());
    // With two vertices left, the trailing one can often be counted by a
    // popcount per candidate of `next` instead of a recursive call.
    int tail = -1;
    bool tail_adj_next = false;
    if (unassigned == 2) {
      for (int v = 0; v < pattern.vertex_count; ++v)
        if (assign[v] < 0 && v != next) tail = v;
      bool fusible = true;
      for (int w : padj[tail]) {
        if (w == next) tail_adj_next = true;
        else if (assign[w] < 0) fusible = false;
      }
      if (!fusible) tail = -1;
    }
    // Candidate hosts: intersection of neighbor rows of the already-assigned
    // pattern neighbors, minus used vertices.
    std::uint64_t* cand = &cand_depth[static_cast<std::size_t>(depth) * host.words];
    for (int word = 0; word < host.words; ++word) cand[word] = ~std::uint64_t{0};
    for (int w : padj[next])
      if (assign[w] >= 0) {
        const std::uint64_t* row = host.row(assign[w]);
        for (int word = 0; word < host.words; ++word) cand[word] &= row[word];
      }
    std::uint64_t* base = nullptr;
    if (tail >= 0) {
      base = &cand_depth[static_cast<std::size_t>(depth + 1) * host.words];
      for (int word = 0; word < host.words; ++word) base[word] = ~std::uint64_t{0};
      for (int w : padj[tail])
        if (w != next) {
          const std::uint64_t* row = host.row(assign[w]);
          for (int word = 0; word < host.words; ++word) base[word] &= row[word];
        }
      if (host.n % 64 != 0)
        base[host.words - 1] &= (std::uint64_t{1} << (host.n % 64)) - 1;
    }
    double total = 0.0;
    for (int word = 0; word < host.words; ++word) {
      std::uint64_t bits = cand[word] & ~used[word];
      if (word == host.words - 1 && host.n % 64 != 0)
        bits &= (std::uint64_t{1} << (host.n % 64)) - 1;
      if (leaf) {
        total += std::popcount(bits);
        continue;
      }
      while (bits) {
        const int hv = word * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        if (base) {
          const std::uint64_t* row = tail_adj_next ? host.row(hv) : nullptr;
          for (int w2 = 0; w2 < host.words; ++w2) {
            std::uint64_t t = base[w2] & ~used[w2];
            if (row) t &= row[w2];
            if (w2 == word) t &= ~(std::uint64_t{1} << (hv & 63));
            total += std::popcount(t);
          }
          continue;
        }
        assign[next] = hv;
        mark(hv);
        total += count_at(depth + 1);
        unmark(hv);
        assign[next] = -1;
      }
    }
    return total;
  }
};

// Embeddings placing some pattern edge exactly onto the host edge (i, j).
double anchored_embeddings(const SubgraphPattern& pattern, const HostGraph& host, int i, int j) {
  double total = 0.0;
  for (const auto& [a, b] : pattern.edges)
    for (int orient = 0; orient < 2; ++orient) {
      const int hi = orient == 0 ? i : j, hj = orient == 0 ? j : i;
      EmbeddingCounter counter(pattern, host);
      counter.assign[a] = hi;
      counter.assign[b] = hj;
      counter.mark(hi);
      counter.mark(hj);
      if (counter.consistent()) total += counter.count();
    }
  return total;
}

// Embeddings covering both host edges simultaneously.
double doubly_anchored_embeddings(const SubgraphPattern& pattern, const HostGraph& host,
                                  std::pair<int, int> e1, std::pair<int, int> e2) {
  double total = 0.0;
  const int ne = static_cast<int>(pattern.edges.size());
  for (int x = 0; x < ne; ++x)
    for (int y = 0; y < ne; ++y) {
      if (x == y) continue;
      const auto [a, b] = pattern.edges[x];
      const auto [c, d] = pattern.edges[y];
      for (int o1 = 0; o1 < 2; ++o1)
        for (int o2 = 0; o2 < 2; ++o2) {
          const std::array<int, 4> pv = {a, b, c, d};
          const std::array<int, 4> hv = {o1 == 0 ? e1.first : e1.second,
                                         o1 == 0 ? e1.second : e1.first,
                                         o2 == 0 ? e2.first : e2.second,
                                         o2 == 0 ? e2.second : e2.first};
          EmbeddingCounter counter(pattern, host);
          bool ok = true;
          for (int idx = 0; idx < 4 && ok; ++idx) {
            const int v = pv[idx], h = hv[idx];
            if (counter.assign[v] == h) continue;
            if (counter.assign[v] >= 0 || counter.is_used(h)) {
              ok = false;
              break;
            }
            counter.assign[v] = h;
            counter.mark(h);
          }
          if (ok && counter.consistent()) total += counter.count();
        }
    }
  return total;
}

}  // namespace

Functional subgraph_statistic(const ErdosRenyiModel& model, const SubgraphPattern& pattern) {
  if (pattern.edges.empty())
    throw std::invalid_argument("subgraph_statistic: pattern needs at least one edge");
  if (pattern.vertex_count > model.vertex_count())
    throw std::invalid_argument("subgraph_statistic: pattern larger than host");
  for (const auto& [a, b] : pattern.edges)
    if (a < 0 || b < 0 || a >= pattern.vertex_count || b >= pattern.vertex_count || a == b)
      throw std::invalid_argument("subgraph_statistic: invalid pattern edge");
  auto shared = std::make_shared<ErdosRenyiModel>(model);
  auto pat = std::make_shared<SubgraphPattern>(pattern);
  const double aut = pattern.automorphism_count();
  const double sigma = std::sqrt(model.p() * (1.0 - model.p()));

  Functional f;
  f.index_count = model.edge_count();
  f.evaluate = [shared, pat, aut](const Configuration& c) {
    EmbeddingCounter counter(*pat, cached_host(*shared, c));
    return counter.count() / aut;
  };
  f.gradient_oracle = [shared, pat, aut, sigma](const Configuration& c, int k) {
    const auto [i, j] = shared->edge(k);
    HostGraph host = cached_host(*shared, c);
    host.add_edge(i, j);  // force the edge present; the difference is the
                          // number of copies through it
    return sigma * anchored_embeddings(*pat, host, i, j) / aut;
  };
  f.second_gradient_oracle = [shared, pat, aut, sigma](const Configuration& c, int k, int l) {
    if (k == l) return 0.0;
    const auto e1 = shared->edge(k);
    const auto e2 = shared->edge(l);
    HostGraph host = cached_host(*shared, c);
    host.add_edge(e1.first, e1.second);
    host.add_edge(e2.first, e2.second);
    return sigma * sigma * doubly_anchored_embeddings(*pat, host, e1, e2) / aut;
  };
  const bool wide = pattern.has_disjoint_edge_pair();
  const int m = model.edge_count();
  f.interaction_oracle = [shared, wide, m](int k) {
    if (!wide) return shared->interaction_neighborhood(k);
    std::vector<int> out;
    out.reserve(m - 1);
    for (int l = 0; l < m; ++l)
      if (l != k) out.push_back(l);
    return out;
  };
  return f;
}

Functional degree_statistic(const ErdosRenyiModel& model, int d) {
  if (d < 0 || d > model.vertex_count() - 1)
    throw std::invalid_argument("degree_statistic: d out of range");
  auto shared = std::make_shared<ErdosRenyiModel>(model);
  const double sigma = std::sqrt(model.p() * (1.0 - model.p()));
  const int n = model.vertex_count();

  // Degree of vertex v, optionally ignoring up to two edge labels.
  auto degree_without = [](const ErdosRenyiModel& mdl, const Configuration& c, int v, int skip1,
                           int skip2) {
    int deg = 0;
    for (int u = 0; u < mdl.vertex_count(); ++u) {
      if (u == v) continue;
      const int k = mdl.edge_index(v, u);
      if (k == skip1 || k == skip2) continue;
      if (c.get(k)) ++deg;
    }
    return deg;
  };

  Functional f;
  f.index_count = model.edge_count();
  f.evaluate = [shared, d, n](const Configuration& c) {
    std::vector<int> deg(n, 0);
    for (int k = 0; k < shared->edge_count(); ++k)
      if (c.get(k)) {
        const auto [i, j] = shared->edge(k);
        ++deg[i];
        ++deg[j];
      }
    int count = 0;
    for (int v = 0; v < n; ++v)
      if (deg[v] == d) ++count;
    return static_cast<double>(count);
  };
  // Only the two endpoint degrees respond to an edge flip.
  f.gradient_oracle = [shared, degree_without, d, sigma](const Configuration& c, int k) {
    const auto [i, j] = shared->edge(k);
    const int di = degree_without(*shared, c, i, k, -1);
    const int dj = degree_without(*shared, c, j, k, -1);
    const int diff = (di + 1 == d) - (di == d) + (dj + 1 == d) - (dj == d);
    return sigma * diff;
  };
  // Only a shared endpoint responds to both flips: a discrete second
  // difference of the indicator {degree == d} at that vertex.
  f.second_gradient_oracle = [shared, degree_without, d, sigma](const Configuration& c, int k,
                                                                int l) {
    if (k == l) return 0.0;
    const auto [i, j] = shared->edge(k);
    const auto [u, v] = shared->edge(l);
    int shared_vertex = -1;
    if (i == u || i == v) shared_vertex = i;
    else if (j == u || j == v) shared_vertex = j;
    else return 0.0;
    const int d0 = degree_without(*shared, c, shared_vertex, k, l);
    const int diff = (d0 + 2 == d) - 2 * (d0 + 1 == d) + (d0 == d);
    return sigma * sigma * diff;
  };
  f.interaction_oracle = [shared](int k) { return shared->interaction_neighborhood(k); };
  return f;
}

SymmetryOrbits edge_transitive_orbits(const ErdosRenyiModel& model, const Functional& f) {
  if (!f.has_interaction_oracle())
    throw std::invalid_argument("edge_transitive_orbits: interaction oracle required");
  if (f.index_count != model.edge_count())
    throw std::invalid_argument("edge_transitive_orbits: functional does not match model");
  const int m = model.edge_count();
  const double md = static_cast<double>(m);
  SymmetryOrbits orbits;
  orbits.index_count = m;
  orbits.singles.push_back({0, md});  // anchor: edge 0 = (0,1)

  auto overlap = [&](int a, int b) {
    const auto [i, j] = model.edge(a);
    const auto [u, v] = model.edge(b);
    return static_cast<int>(i == u) + static_cast<int>(i == v) + static_cast<int>(j == u) +
           static_cast<int>(j == v);
  };

  const std::vector<int> anchor_nbrs = f.interaction_oracle(0);

  // Ordered pairs (0, l): the vertex-relabeling orbit is fixed by the overlap
  // of the two edges.
  {
    std::map<int, std::pair<int, double>> classes;  // overlap -> (rep l, count)
    for (int l : anchor_nbrs) {
      auto [it, inserted] = classes.try_emplace(overlap(0, l), std::pair{l, 0.0});
      it->second.second += 1.0;
    }
    for (const auto& [sig, rc] : classes)
      orbits.second_pairs.push_back({{0, rc.first}, md * rc.second, 0});
  }

  // Ordered triples (j, k, l) with l anchored at edge 0 and j, k from its
  // interaction set; the orbit signature is the overlap pattern of the three
  // edges plus the number of distinct vertices.
  std::map<int, int> grad_pair_class;  // keyed by |e_j cap e_k|
  auto grad_pair = [&](int j, int k) {
    const int sig = j == k ? 2 : overlap(j, k);
    auto it = grad_pair_class.find(sig);
    if (it != grad_pair_class.end()) return it->second;
    const int idx = static_cast<int>(orbits.grad_pairs.size());
    orbits.grad_pairs.push_back({{j, k}});
    grad_pair_class.emplace(sig, idx);
    return idx;
  };

  struct TripleAcc {
    std::array<int, 3> rep{};
    double count = 0;
    int jk_pair = 0;
  };
  std::map<std::array<int, 5>, TripleAcc> triple_classes;
  for (std::size_t a = 0; a < anchor_nbrs.size(); ++a)
    for (std::size_t b = a; b < anchor_nbrs.size(); ++b) {
      const int j = anchor_nbrs[a], k = anchor_nbrs[b];
      const int oj = overlap(j, 0), ok = overlap(k, 0);
      const int ojk = j == k ? 2 : overlap(j, k);
      // Distinct vertices across the three edges.
      std::vector<int> verts;
      for (int e : {j, k, 0}) {
        verts.push_back(model.edge(e).first);
        verts.push_back(model.edge(e).second);
      }
      std::sort(verts.begin(), verts.end());
      verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
      const std::array<int, 5> sig = {std::min(oj, ok), std::max(oj, ok), ojk,
                                      static_cast<int>(verts.size()),
                                      static_cast<int>(j == k)};
      auto [it, inserted] = triple_classes.try_emplace(sig);
      if (inserted) {
        it->second.rep = {j, k, 0};
        it->second.jk_pair = grad_pair(j, k);
      }
      it->second.count += md * (j == k ? 1.0 : 2.0);  // both orderings of (j,k)
    }
  for (const auto& [sig, acc] : triple_classes)
    orbits.triples.push_back({acc.rep, acc.count, acc.jk_pair});
  return orbits;
}

}  // namespace radstein
