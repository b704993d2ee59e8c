#include "radstein/functional.hpp"

#include <memory>
#include <stdexcept>

namespace radstein {

Functional Functional::coordinate(const RademacherSpace& space, int k) {
  space.check_index(k);
  const double yp = space.normalized_sign(+1, k);
  const double ym = space.normalized_sign(-1, k);
  Functional f;
  f.index_count = space.size();
  f.evaluate = [k, yp, ym](const Configuration& c) { return c.get(k) ? yp : ym; };
  f.gradient_oracle = [k](const Configuration&, int j) { return j == k ? 1.0 : 0.0; };
  f.second_gradient_oracle = [](const Configuration&, int, int) { return 0.0; };
  f.interaction_oracle = [](int) { return std::vector<int>{}; };
  return f;
}

Functional Functional::from_table(int m, std::vector<double> values) {
  if (m > 24) throw std::invalid_argument("from_table: m too large for a value table");
  if (values.size() != (std::size_t{1} << m))
    throw std::invalid_argument("from_table: table size must be 2^m");
  auto table = std::make_shared<std::vector<double>>(std::move(values));
  Functional f;
  f.index_count = m;
  f.evaluate = [table](const Configuration& c) { return (*table)[c.words()[0]]; };
  return f;
}

Functional gradient(const RademacherSpace& space, const Functional& f, int k) {
  space.check_index(k);
  const double s = space.sigma(k);
  auto eval = f.evaluate;
  Functional g;
  g.index_count = f.index_count;
  g.evaluate = [eval, k, s](const Configuration& c) {
    Configuration plus = c;
    plus.set(k, true);
    Configuration minus = c;
    minus.set(k, false);
    return s * (eval(plus) - eval(minus));
  };
  return g;
}

Functional second_gradient(const RademacherSpace& space, const Functional& f, int k, int l) {
  return gradient(space, gradient(space, f, k), l);
}

double gradient_value(const RademacherSpace& space, const Functional& f, Configuration& scratch,
                      int k) {
  if (f.has_gradient_oracle()) return f.gradient_oracle(scratch, k);
  const bool old = scratch.get(k);
  scratch.set(k, true);
  const double fp = f.evaluate(scratch);
  scratch.set(k, false);
  const double fm = f.evaluate(scratch);
  scratch.set(k, old);
  return space.sigma(k) * (fp - fm);
}

double second_gradient_value(const RademacherSpace& space, const Functional& f,
                             Configuration& scratch, int k, int l) {
  if (k == l) return 0.0;
  if (f.has_second_gradient_oracle()) return f.second_gradient_oracle(scratch, k, l);
  const bool old = scratch.get(l);
  scratch.set(l, true);
  const double gp = gradient_value(space, f, scratch, k);
  scratch.set(l, false);
  const double gm = gradient_value(space, f, scratch, k);
  scratch.set(l, old);
  return space.sigma(l) * (gp - gm);
}

Functional normalize(const Functional& f, double mean, double stddev) {
  if (!(stddev > 0.0)) throw std::invalid_argument("normalize: stddev must be positive");
  Functional g;
  g.index_count = f.index_count;
  auto eval = f.evaluate;
  g.evaluate = [eval, mean, stddev](const Configuration& c) { return (eval(c) - mean) / stddev; };
  if (f.gradient_oracle) {
    auto go = f.gradient_oracle;
    g.gradient_oracle = [go, stddev](const Configuration& c, int k) { return go(c, k) / stddev; };
  }
  if (f.second_gradient_oracle) {
    auto so = f.second_gradient_oracle;
    g.second_gradient_oracle = [so, stddev](const Configuration& c, int k, int l) {
      return so(c, k, l) / stddev;
    };
  }
  g.interaction_oracle = f.interaction_oracle;
  return g;
}

Functional linear_combination(double c1, const Functional& f1, double c2, const Functional& f2) {
  Functional g;
  g.index_count = f1.index_count;
  auto e1 = f1.evaluate, e2 = f2.evaluate;
  g.evaluate = [c1, e1, c2, e2](const Configuration& c) { return c1 * e1(c) + c2 * e2(c); };
  return g;
}

Functional product(const Functional& f1, const Functional& f2) {
  Functional g;
  g.index_count = f1.index_count;
  auto e1 = f1.evaluate, e2 = f2.evaluate;
  g.evaluate = [e1, e2](const Configuration& c) { return e1(c) * e2(c); };
  return g;
}

}  // namespace radstein
