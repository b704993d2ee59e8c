#include "radstein/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "radstein/parallel.hpp"

namespace radstein {

Configuration sample_configuration(const RademacherSpace& space, std::int64_t sample_index,
                                   std::uint64_t seed) {
  const int m = space.size();
  Configuration c(m);
  for (int k = 0; k < m; ++k)
    c.set(k, rng::uniform(seed, static_cast<std::uint64_t>(sample_index),
                          static_cast<std::uint64_t>(k)) < space.p(k));
  return c;
}

FunctionalStats estimate_functional_stats(const RademacherSpace& space, const Functional& f,
                                          const SampleSpec& spec,
                                          const std::vector<double>& moments, int threads) {
  if (spec.count < 1) throw std::invalid_argument("sample count must be >= 1");
  const int B = std::max(1, std::min<int>(spec.batches, static_cast<int>(spec.count)));
  const std::size_t nm = moments.size();
  // Per-batch sums: f, f^2, then one slot per requested |f|^r.
  std::vector<std::vector<double>> sums(B, std::vector<double>(2 + nm, 0.0));
  std::vector<std::int64_t> batch_n(B, 0);
  parallel_chunks(spec.count, B, threads, [&](int b, std::int64_t lo, std::int64_t hi) {
    auto& s = sums[b];
    for (std::int64_t i = lo; i < hi; ++i) {
      const Configuration c = sample_configuration(space, i, spec.seed);
      const double v = f.evaluate(c);
      s[0] += v;
      s[1] += v * v;
      for (std::size_t j = 0; j < nm; ++j) s[2 + j] += std::pow(std::fabs(v), moments[j]);
    }
    batch_n[b] = hi - lo;
  });

  const double n = static_cast<double>(spec.count);
  std::vector<double> pooled(2 + nm, 0.0);
  for (int b = 0; b < B; ++b)
    for (std::size_t j = 0; j < pooled.size(); ++j) pooled[j] += sums[b][j];

  auto batch_stderr = [&](auto per_batch_value) {
    if (B < 2) return 0.0;
    double mu = 0.0;
    for (int b = 0; b < B; ++b) mu += per_batch_value(b);
    mu /= B;
    double ss = 0.0;
    for (int b = 0; b < B; ++b) {
      const double d = per_batch_value(b) - mu;
      ss += d * d;
    }
    return std::sqrt(ss / (B - 1) / B);
  };

  FunctionalStats out;
  out.count = spec.count;
  out.mean.value = pooled[0] / n;
  out.mean.stderr_ = batch_stderr([&](int b) { return sums[b][0] / batch_n[b]; });
  const double mean = out.mean.value;
  out.variance.value = std::max(pooled[1] / n - mean * mean, 0.0);
  out.variance.stderr_ = batch_stderr([&](int b) {
    const double bm = sums[b][0] / batch_n[b];
    return sums[b][1] / batch_n[b] - bm * bm;
  });
  for (std::size_t j = 0; j < nm; ++j) {
    MomentEstimate e;
    e.value = pooled[2 + j] / n;
    e.stderr_ = batch_stderr([&](int b) { return sums[b][2 + j] / batch_n[b]; });
    out.raw_moments[moments[j]] = e;
  }
  return out;
}

}  // namespace radstein
