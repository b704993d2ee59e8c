#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "radstein/space.hpp"

namespace radstein {

/// An evaluatable map {-1,+1}^m -> R, optionally carrying analytic oracles for
/// the discrete gradient D_k, the iterated gradient D_l D_k, and the sparsity
/// structure of the latter. Oracles, when present, must agree with the pathwise
/// definitions; the verify suite cross-checks them.
struct Functional {
  int index_count = 0;
  std::function<double(const Configuration&)> evaluate;
  /// D_k F = sqrt(p_k q_k) (F with bit k set - F with bit k cleared).
  std::function<double(const Configuration&, int)> gradient_oracle;
  std::function<double(const Configuration&, int, int)> second_gradient_oracle;
  /// Labels l != k with D_l D_k F not identically zero.
  std::function<std::vector<int>(int)> interaction_oracle;

  bool has_gradient_oracle() const { return static_cast<bool>(gradient_oracle); }
  bool has_second_gradient_oracle() const { return static_cast<bool>(second_gradient_oracle); }
  bool has_interaction_oracle() const { return static_cast<bool>(interaction_oracle); }

  double operator()(const Configuration& c) const { return evaluate(c); }

  static Functional constant(int m, double c) {
    Functional f;
    f.index_count = m;
    f.evaluate = [c](const Configuration&) { return c; };
    f.gradient_oracle = [](const Configuration&, int) { return 0.0; };
    f.second_gradient_oracle = [](const Configuration&, int, int) { return 0.0; };
    f.interaction_oracle = [](int) { return std::vector<int>{}; };
    return f;
  }

  /// The normalized coordinate Y_k as a functional.
  static Functional coordinate(const RademacherSpace& space, int k);

  /// Table-backed functional for m <= 24: values indexed by bitmask.
  static Functional from_table(int m, std::vector<double> values);
};

/// Pathwise discrete gradient D_k F as a functional; independent of bit k.
Functional gradient(const RademacherSpace& space, const Functional& f, int k);

/// Pathwise iterated gradient D_l (D_k F); symmetric in (k, l), zero for k == l.
Functional second_gradient(const RademacherSpace& space, const Functional& f, int k, int l);

/// Evaluates D_k f at a configuration, preferring the analytic oracle.
double gradient_value(const RademacherSpace& space, const Functional& f, Configuration& scratch,
                      int k);
double second_gradient_value(const RademacherSpace& space, const Functional& f,
                             Configuration& scratch, int k, int l);

/// (f - mean) / stddev with gradient oracles rescaled by 1/stddev.
Functional normalize(const Functional& f, double mean, double stddev);

/// Pointwise sum c1*f1 + c2*f2 (evaluation only; oracles combine linearly when both present).
Functional linear_combination(double c1, const Functional& f1, double c2, const Functional& f2);

/// Pointwise product f1*f2 (evaluation only).
Functional product(const Functional& f1, const Functional& f2);

}  // namespace radstein
