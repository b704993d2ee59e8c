#include <map>
#include <stdexcept>
#include <utility>

#include "radstein/orbits.hpp"

namespace radstein {

SymmetryOrbits direct_orbits(const Functional& f) {
  if (!f.has_interaction_oracle())
    throw std::invalid_argument("direct_orbits: interaction oracle required");
  const int m = f.index_count;
  SymmetryOrbits orbits;
  orbits.index_count = m;

  orbits.singles.reserve(m);
  for (int k = 0; k < m; ++k) orbits.singles.push_back({k, 1.0});

  std::map<std::pair<int, int>, int> pair_index;
  auto grad_pair = [&](int j, int k) {
    const std::pair<int, int> key = j <= k ? std::pair{j, k} : std::pair{k, j};
    auto it = pair_index.find(key);
    if (it != pair_index.end()) return it->second;
    const int idx = static_cast<int>(orbits.grad_pairs.size());
    orbits.grad_pairs.push_back({{key.first, key.second}});
    pair_index.emplace(key, idx);
    return idx;
  };

  for (int k = 0; k < m; ++k) {
    const std::vector<int> nbrs = f.interaction_oracle(k);
    for (int l : nbrs) orbits.second_pairs.push_back({{k, l}, 1.0, k});
    // Ordered pairs (j,k) from the interaction set of l=k; symmetric moments
    // let the unordered representative carry a count of 2.
    for (std::size_t a = 0; a < nbrs.size(); ++a)
      for (std::size_t b = a; b < nbrs.size(); ++b) {
        const double count = a == b ? 1.0 : 2.0;
        orbits.triples.push_back(
            {{nbrs[a], nbrs[b], k}, count, grad_pair(nbrs[a], nbrs[b])});
      }
  }
  return orbits;
}

}  // namespace radstein
