#include "radstein/chaos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "radstein/montecarlo.hpp"

namespace radstein {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<int> sorted_tuple(std::vector<int> t) {
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

double Kernel::value(std::vector<int> tuple) const {
  tuple = sorted_tuple(std::move(tuple));
  for (std::size_t i = 1; i < tuple.size(); ++i)
    if (tuple[i] == tuple[i - 1]) return 0.0;  // diagonal
  auto it = entries.find(tuple);
  return it == entries.end() ? 0.0 : it->second;
}

double Kernel::norm_squared() const {
  double s = 0.0;
  for (const auto& [t, v] : entries) s += v * v;
  // Each representative stands for the order! ordered tuples of the full
  // symmetric tensor, so the l^2 norm carries that multiplicity.
  return factorial(order) * s;
}

double Kernel::inner(const Kernel& other) const {
  if (order != other.order) return 0.0;
  // Iterate over the smaller map.
  const Kernel& a = entries.size() <= other.entries.size() ? *this : other;
  const Kernel& b = &a == this ? other : *this;
  double s = 0.0;
  for (const auto& [t, v] : a.entries) {
    auto it = b.entries.find(t);
    if (it != b.entries.end()) s += v * it->second;
  }
  return factorial(order) * s;
}

double ChaosDecomposition::variance() const {
  double s = 0.0;
  for (const Kernel& kern : kernels) s += factorial(kern.order) * kern.norm_squared();
  return s;
}

namespace dense {

std::vector<double> chaos_coefficients(const RademacherSpace& space,
                                       const std::vector<double>& values) {
  const int m = space.size();
  std::vector<double> a = values;
  if (a.size() != (std::size_t{1} << m))
    throw std::invalid_argument("chaos_coefficients: values size must be 2^m");
  // One butterfly pass per coordinate. After pass k, bit k of the index means
  // "k belongs to the subset S" rather than "x_k = +1":
  //   out_{k not in S} = q f(-) + p f(+)          (marginalize coordinate k)
  //   out_{k in S}     = Y^- q f(-) + Y^+ p f(+) = sigma (f(+) - f(-)).
  for (int k = 0; k < m; ++k) {
    const double p = space.p(k), q = space.q(k), sigma = space.sigma(k);
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t base = 0; base < a.size(); base += 2 * bit)
      for (std::size_t i = base; i < base + bit; ++i) {
        const double lo = a[i], hi = a[i + bit];
        a[i] = q * lo + p * hi;
        a[i + bit] = sigma * (hi - lo);
      }
  }
  return a;
}

std::vector<double> evaluate_coefficients(const RademacherSpace& space,
                                          const std::vector<double>& coeffs) {
  const int m = space.size();
  std::vector<double> a = coeffs;
  if (a.size() != (std::size_t{1} << m))
    throw std::invalid_argument("evaluate_coefficients: coeffs size must be 2^m");
  for (int k = 0; k < m; ++k) {
    const double yminus = space.normalized_sign(-1, k);
    const double yplus = space.normalized_sign(+1, k);
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t base = 0; base < a.size(); base += 2 * bit)
      for (std::size_t i = base; i < base + bit; ++i) {
        const double c0 = a[i], c1 = a[i + bit];
        a[i] = c0 + yminus * c1;
        a[i + bit] = c0 + yplus * c1;
      }
  }
  return a;
}

}  // namespace dense

ChaosDecomposition stroock_decompose(const RademacherSpace& space, const Functional& f, int cap,
                                     double drop_tol) {
  const int m = space.size();
  check_cap(m, cap);
  const std::vector<double> coeffs = dense::chaos_coefficients(space, enumerate_values(space, f, cap));

  ChaosDecomposition decomp;
  decomp.index_count = m;
  decomp.mean = coeffs[0];
  decomp.kernels.resize(m);
  for (int n = 1; n <= m; ++n) decomp.kernels[n - 1].order = n;

  for (std::size_t mask = 1; mask < coeffs.size(); ++mask) {
    const double c = coeffs[mask];
    if (std::abs(c) <= drop_tol) continue;
    const int n = std::popcount(mask);
    std::vector<int> tuple;
    tuple.reserve(n);
    for (int k = 0; k < m; ++k)
      if (mask & (std::size_t{1} << k)) tuple.push_back(k);
    decomp.kernels[n - 1].entries.emplace(std::move(tuple), c / factorial(n));
  }
  while (!decomp.kernels.empty() && decomp.kernels.back().entries.empty())
    decomp.kernels.pop_back();
  return decomp;
}

Functional multiple_integral(const RademacherSpace& space, const Kernel& kernel) {
  const int m = space.size();
  const double scale = factorial(kernel.order);
  // Copy the entries into flat arrays for evaluation.
  std::vector<std::vector<int>> tuples;
  std::vector<double> weights;
  tuples.reserve(kernel.entries.size());
  for (const auto& [t, v] : kernel.entries) {
    for (int k : t) space.check_index(k);
    tuples.push_back(t);
    weights.push_back(scale * v);
  }
  std::vector<double> yminus(m), yplus(m);
  for (int k = 0; k < m; ++k) {
    yminus[k] = space.normalized_sign(-1, k);
    yplus[k] = space.normalized_sign(+1, k);
  }
  Functional f;
  f.index_count = m;
  f.evaluate = [tuples = std::move(tuples), weights = std::move(weights),
                yminus = std::move(yminus), yplus = std::move(yplus)](const Configuration& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      double prod = weights[i];
      for (int k : tuples[i]) prod *= c.get(k) ? yplus[k] : yminus[k];
      s += prod;
    }
    return s;
  };
  return f;
}

Functional to_functional(const RademacherSpace& space, const ChaosDecomposition& decomp) {
  if (decomp.index_count != space.size())
    throw std::invalid_argument("to_functional: index count mismatch");
  std::vector<Functional> parts;
  parts.reserve(decomp.kernels.size());
  for (const Kernel& kern : decomp.kernels) parts.push_back(multiple_integral(space, kern));
  const double mean = decomp.mean;
  Functional f;
  f.index_count = space.size();
  f.evaluate = [mean, parts = std::move(parts)](const Configuration& c) {
    double s = mean;
    for (const Functional& part : parts) s += part(c);
    return s;
  };
  return f;
}

ChaosDecomposition ou_transform(const ChaosDecomposition& decomp, OuMode mode, double t) {
  ChaosDecomposition out;
  out.index_count = decomp.index_count;
  switch (mode) {
    case OuMode::L:
      out.mean = 0.0;  // L annihilates constants
      break;
    case OuMode::LInverse:
      if (std::abs(decomp.mean) > 1e-9)
        throw std::invalid_argument("ou_transform: L^{-1} requires a centred input");
      out.mean = 0.0;
      break;
    case OuMode::Semigroup:
      out.mean = decomp.mean;
      break;
  }
  out.kernels = decomp.kernels;
  for (Kernel& kern : out.kernels) {
    double factor = 1.0;
    switch (mode) {
      case OuMode::L:
        factor = -static_cast<double>(kern.order);
        break;
      case OuMode::LInverse:
        factor = -1.0 / static_cast<double>(kern.order);
        break;
      case OuMode::Semigroup:
        factor = std::exp(-static_cast<double>(kern.order) * t);
        break;
    }
    for (auto& [tuple, v] : kern.entries) v *= factor;
  }
  return out;
}

ChaosDecomposition gradient_via_chaos(const ChaosDecomposition& decomp, int k) {
  ChaosDecomposition out;
  out.index_count = decomp.index_count;
  out.mean = 0.0;
  for (const Kernel& kern : decomp.kernels) {
    const int n = kern.order;
    Kernel reduced;
    reduced.order = n - 1;
    for (const auto& [tuple, v] : kern.entries) {
      auto it = std::find(tuple.begin(), tuple.end(), k);
      if (it == tuple.end()) continue;
      std::vector<int> rest;
      rest.reserve(tuple.size() - 1);
      for (int idx : tuple)
        if (idx != k) rest.push_back(idx);
      // D_k J_n(f_n) = n J_{n-1}(f_n(., k)).
      reduced.entries[std::move(rest)] += n * v;
    }
    if (n == 1) {
      auto it = reduced.entries.find({});
      if (it != reduced.entries.end()) {
        out.mean += it->second;
        reduced.entries.erase(it);
      }
    }
    if (!reduced.entries.empty()) {
      if (static_cast<int>(out.kernels.size()) < n - 1) out.kernels.resize(n - 1);
      Kernel& target = out.kernels[n - 2];
      target.order = n - 1;
      for (auto& [tuple, v] : reduced.entries) target.entries[tuple] += v;
    }
  }
  for (std::size_t i = 0; i < out.kernels.size(); ++i) out.kernels[i].order = static_cast<int>(i) + 1;
  while (!out.kernels.empty() && out.kernels.back().entries.empty()) out.kernels.pop_back();
  return out;
}

ChaosDecomposition divergence_decomposition(const RademacherSpace& space,
                                            const std::vector<Functional>& u, int cap) {
  const int m = space.size();
  if (static_cast<int>(u.size()) != m)
    throw std::invalid_argument("divergence: process must have one component per coordinate");
  ChaosDecomposition out;
  out.index_count = m;
  out.mean = 0.0;
  for (int k = 0; k < m; ++k) {
    const ChaosDecomposition dk = stroock_decompose(space, u[k], cap);
    // Mean of u_k contributes its order-0 kernel g_1(k) = E[u_k].
    if (dk.mean != 0.0) {
      if (out.kernels.empty()) out.kernels.resize(1);
      out.kernels[0].order = 1;
      out.kernels[0].entries[{k}] += dk.mean;
    }
    for (const Kernel& kern : dk.kernels) {
      const int n = kern.order;
      for (const auto& [tuple, v] : kern.entries) {
        // Terms hitting the diagonal {k} x tuple are annihilated.
        if (std::find(tuple.begin(), tuple.end(), k) != tuple.end()) continue;
        std::vector<int> merged = tuple;
        merged.push_back(k);
        std::sort(merged.begin(), merged.end());
        if (static_cast<int>(out.kernels.size()) < n + 1) out.kernels.resize(n + 1);
        // Symmetrization over which slot carries k: 1/(n+1) per contribution.
        out.kernels[n].entries[std::move(merged)] += v / static_cast<double>(n + 1);
      }
    }
  }
  for (std::size_t i = 0; i < out.kernels.size(); ++i) out.kernels[i].order = static_cast<int>(i) + 1;
  while (!out.kernels.empty() && out.kernels.back().entries.empty()) out.kernels.pop_back();
  return out;
}

Functional divergence(const RademacherSpace& space, const std::vector<Functional>& u, int cap) {
  return to_functional(space, divergence_decomposition(space, u, cap));
}

std::pair<double, double> mehler_estimate(const RademacherSpace& space, const Functional& f,
                                          double t, const Configuration& base_config,
                                          std::int64_t samples, std::uint64_t seed) {
  if (t < 0.0) throw std::invalid_argument("mehler_estimate: t must be >= 0");
  if (samples < 1) throw std::invalid_argument("mehler_estimate: samples must be >= 1");
  const int m = space.size();
  const double resample_prob = 1.0 - std::exp(-t);
  double sum = 0.0, sum_sq = 0.0;
  Configuration c(m);
  for (std::int64_t i = 0; i < samples; ++i) {
    c = base_config;
    for (int k = 0; k < m; ++k) {
      if (rng::uniform(seed, static_cast<std::uint64_t>(i), 2 * static_cast<std::uint64_t>(k)) <
          resample_prob)
        c.set(k, rng::uniform(seed, static_cast<std::uint64_t>(i),
                              2 * static_cast<std::uint64_t>(k) + 1) < space.p(k));
    }
    const double v = f(c);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  const double se = samples > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return {mean, se};
}

}  // namespace radstein
