#pragma once

#include <array>
#include <vector>

#include "radstein/functional.hpp"

namespace radstein {

/// Index tuples grouped into equivalence classes over which the moment
/// expectations entering the second-order bound are constant. Monte Carlo
/// estimation then evaluates gradients only at one representative per class
/// and multiplies by the class size, instead of walking every tuple.
///
/// A grouping is valid when the joint law of the referenced gradients is
/// invariant under some symmetry mapping any class member to its
/// representative (and p is constant across each class). The trivial builder
/// `direct_orbits` puts every tuple in its own class and is always valid.
struct SymmetryOrbits {
  int index_count = 0;

  /// Classes of single coordinates k (third, fourth and fifth term, and the
  /// first-gradient factor of the sixth).
  struct Single {
    int rep = 0;
    double count = 0;
  };
  std::vector<Single> singles;

  /// Classes of unordered coordinate pairs {j,k} (j == k allowed) for the
  /// cross moment E[(D_j F)^2 (D_k F)^2]; referenced by triples, so no
  /// counts are needed.
  struct GradPair {
    std::array<int, 2> rep{};
  };
  std::vector<GradPair> grad_pairs;

  /// Classes of ordered pairs (k, l), l != k, with D_l D_k F not identically
  /// zero, for E[(D_l D_k F)^4] (sixth and seventh term).
  struct SecondPair {
    std::array<int, 2> rep{};  // (k, l)
    double count = 0;
    int k_single = 0;  // class of k among `singles`
  };
  std::vector<SecondPair> second_pairs;

  /// Classes of ordered triples (j, k, l) with l interacting with both j and
  /// k, for E[(D_l D_j F)^2 (D_l D_k F)^2] (first and second term).
  struct Triple {
    std::array<int, 3> rep{};  // (j, k, l)
    double count = 0;
    int jk_pair = 0;  // class of {j,k} among `grad_pairs`
  };
  std::vector<Triple> triples;
};

/// One class per tuple (counts all 1), enumerated from the functional's
/// interaction oracle. Requires the oracle.
SymmetryOrbits direct_orbits(const Functional& f);

}  // namespace radstein
