#include "radstein/enumeration.hpp"

#include <algorithm>
#include <cmath>

#include "radstein/parallel.hpp"

namespace radstein {

namespace {
constexpr int kEnumerationChunks = 64;
}

std::vector<double> enumerate_weights(const RademacherSpace& space, int cap) {
  const int m = space.size();
  check_cap(m, cap);
  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<double> w(total);
  // Doubling construction: weights for k coordinates extend to k+1.
  w[0] = 1.0;
  std::uint64_t filled = 1;
  for (int k = 0; k < m; ++k) {
    const double p = space.p(k), q = 1.0 - p;
    for (std::uint64_t i = 0; i < filled; ++i) {
      w[i | (std::uint64_t{1} << k)] = w[i] * p;
      w[i] *= q;
    }
    filled <<= 1;
  }
  return w;
}

std::vector<double> enumerate_values(const RademacherSpace& space, const Functional& f, int cap,
                                     int threads) {
  const int m = space.size();
  check_cap(m, cap);
  const std::int64_t total = std::int64_t{1} << m;
  std::vector<double> v(total);
  parallel_chunks(total, kEnumerationChunks, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    Configuration c(m);
    for (std::int64_t mask = lo; mask < hi; ++mask) {
      c.assign_low_word(static_cast<std::uint64_t>(mask));
      v[mask] = f.evaluate(c);
    }
  });
  return v;
}

double expectation_exact(const RademacherSpace& space, const Functional& f, int cap, int threads) {
  const int m = space.size();
  check_cap(m, cap);
  const std::vector<double> w = enumerate_weights(space, cap);
  const std::int64_t total = std::int64_t{1} << m;
  std::vector<double> partial(kEnumerationChunks, 0.0);
  parallel_chunks(total, kEnumerationChunks, threads, [&](int c, std::int64_t lo, std::int64_t hi) {
    Configuration conf(m);
    double acc = 0.0;
    for (std::int64_t mask = lo; mask < hi; ++mask) {
      conf.assign_low_word(static_cast<std::uint64_t>(mask));
      acc += w[mask] * f.evaluate(conf);
    }
    partial[c] = acc;
  });
  double sum = 0.0;
  for (double s : partial) sum += s;
  return sum;
}

std::vector<std::pair<double, double>> enumerate_distribution(const RademacherSpace& space,
                                                              const Functional& f, int cap,
                                                              double merge_tol) {
  const std::vector<double> w = enumerate_weights(space, cap);
  const std::vector<double> v = enumerate_values(space, f, cap);
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<std::pair<double, double>> dist;
  for (std::size_t i : order) {
    if (!dist.empty() && v[i] - dist.back().first <= merge_tol)
      dist.back().second += w[i];
    else
      dist.emplace_back(v[i], w[i]);
  }
  return dist;
}

std::pair<double, double> exact_mean_stddev(const RademacherSpace& space, const Functional& f,
                                            int cap) {
  const std::vector<double> w = enumerate_weights(space, cap);
  const std::vector<double> v = enumerate_values(space, f, cap);
  double mean = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) mean += w[i] * v[i];
  double var = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) var += w[i] * (v[i] - mean) * (v[i] - mean);
  return {mean, std::sqrt(std::max(var, 0.0))};
}

}  // namespace radstein
