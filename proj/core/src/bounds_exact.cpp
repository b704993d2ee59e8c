#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "radstein/bounds.hpp"
#include "radstein/parallel.hpp"

namespace radstein {

bool HolderTriple::valid(double tol) const {
  return r > 1.0 && s > 1.0 && t > 1.0 && std::abs(1.0 / r + 1.0 / s + 1.0 / t - 1.0) <= tol;
}

HolderTriple holder_select(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("holder_select: alpha must lie in [0,1)");
  const double r_min = std::max(2.0, 4.0 * (2.0 * alpha - 1.0) / (1.0 - alpha));
  int r = 2 * static_cast<int>(std::ceil(r_min / 2.0 - 1e-12));
  if (r < 2) r = 2;
  HolderTriple triple;
  triple.r = r;
  triple.s = triple.t = 2.0 * r / (r - 1.0);
  return triple;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double empirical_kolmogorov(const std::vector<double>& sorted_samples) {
  if (sorted_samples.empty()) throw std::invalid_argument("empirical_kolmogorov: empty input");
  const double n = static_cast<double>(sorted_samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
    const double phi = normal_cdf(sorted_samples[i]);
    sup = std::max(sup, std::abs((i + 1) / n - phi));
    sup = std::max(sup, std::abs(i / n - phi));
  }
  return sup;
}

double exact_kolmogorov(const std::vector<std::pair<double, double>>& distribution) {
  if (distribution.empty()) throw std::invalid_argument("exact_kolmogorov: empty input");
  double sup = 0.0, cdf = 0.0;
  for (const auto& [value, prob] : distribution) {
    const double phi = normal_cdf(value);
    sup = std::max(sup, std::abs(cdf - phi));  // left limit at the jump
    cdf += prob;
    sup = std::max(sup, std::abs(cdf - phi));
  }
  return sup;
}

double poincare_upper(const RademacherSpace& space, const Functional& f, int cap) {
  const int m = space.size();
  check_cap(m, cap);
  const std::vector<double> vals = enumerate_values(space, f, cap);
  const std::vector<double> w = enumerate_weights(space, cap);
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    const double sigma = space.sigma(k);
    const std::size_t bit = std::size_t{1} << k;
    double s = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double d = sigma * (vals[i | bit] - vals[i & ~bit]);
      s += w[i] * d * d;
    }
    total += s;
  }
  return total;
}

MomentEstimate poincare_upper_mc(const RademacherSpace& space, const Functional& f,
                                 const SampleSpec& spec, int threads) {
  if (!f.has_gradient_oracle())
    throw std::invalid_argument("poincare_upper_mc: gradient oracle required");
  const int m = space.size();
  const int batches = std::max(1, std::min<int>(spec.batches, static_cast<int>(spec.count)));
  std::vector<double> batch_mean(batches, 0.0);
  std::vector<std::int64_t> batch_n(batches, 0);
  parallel_chunks(spec.count, batches, threads, [&](int b, std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      Configuration c = sample_configuration(space, i, spec.seed);
      double norm2 = 0.0;
      for (int k = 0; k < m; ++k) {
        const double d = f.gradient_oracle(c, k);
        norm2 += d * d;
      }
      s += norm2;
    }
    batch_mean[b] = hi > lo ? s / static_cast<double>(hi - lo) : 0.0;
    batch_n[b] = hi - lo;
  });
  double pooled = 0.0;
  for (int b = 0; b < batches; ++b) pooled += batch_mean[b] * static_cast<double>(batch_n[b]);
  pooled /= static_cast<double>(spec.count);
  double ss = 0.0;
  for (int b = 0; b < batches; ++b) {
    const double d = batch_mean[b] - pooled;
    ss += d * d;
  }
  MomentEstimate out;
  out.value = pooled;
  out.stderr_ = batches > 1 ? std::sqrt(ss / (batches - 1.0) / batches) : 0.0;
  return out;
}

namespace detail {

BoundBreakdown second_order_bound_exact(const RademacherSpace& space, const Functional& f,
                                        const HolderTriple& triple, int cap, int threads) {
  if (!triple.valid()) throw std::invalid_argument("second_order_bound: invalid exponent triple");
  const int m = space.size();
  check_cap(m, cap);
  const std::vector<double> vals = enumerate_values(space, f, cap, threads);
  const std::vector<double> w = enumerate_weights(space, cap);
  const std::size_t full = vals.size();

  double mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i < full; ++i) {
    mean += w[i] * vals[i];
    second += w[i] * vals[i] * vals[i];
  }
  if (std::abs(mean) > 1e-6 || std::abs(second - mean * mean - 1.0) > 1e-6)
    throw std::invalid_argument(
        "second_order_bound: exact mode requires a centred, unit-variance functional; normalize "
        "first");

  // Single-coordinate moments of D_k F.
  std::vector<double> m3(m), m2s(m), mt(m), m4(m);
  for (int k = 0; k < m; ++k) {
    const double sigma = space.sigma(k);
    const std::size_t bit = std::size_t{1} << k;
    double a3 = 0.0, a2s = 0.0, at = 0.0, a4 = 0.0;
    for (std::size_t i = 0; i < full; ++i) {
      const double d = sigma * (vals[i | bit] - vals[i & ~bit]);
      const double ad = std::abs(d);
      a3 += w[i] * ad * ad * ad;
      a2s += w[i] * std::pow(ad, 2.0 * triple.s);
      at += w[i] * std::pow(ad, triple.t);
      a4 += w[i] * d * d * d * d;
    }
    m3[k] = a3;
    m2s[k] = a2s;
    mt[k] = at;
    m4[k] = a4;
  }
  double f_r = 0.0;
  for (std::size_t i = 0; i < full; ++i) f_r += w[i] * std::pow(std::abs(vals[i]), triple.r);

  // Interaction sets: oracle when supplied, otherwise every other index.
  std::vector<std::vector<int>> inter(m);
  for (int k = 0; k < m; ++k) {
    if (f.has_interaction_oracle()) {
      inter[k] = f.interaction_oracle(k);
    } else {
      for (int l = 0; l < m; ++l)
        if (l != k) inter[k].push_back(l);
    }
    std::sort(inter[k].begin(), inter[k].end());
  }

  auto second_diff = [&](std::size_t i, int l, int j) {
    const std::size_t bl = std::size_t{1} << l, bj = std::size_t{1} << j;
    return space.sigma(l) * space.sigma(j) *
           (vals[i | bl | bj] - vals[(i | bj) & ~bl] - vals[(i | bl) & ~bj] +
            vals[i & ~bl & ~bj]);
  };

  // E[(D_l D_k F)^4] on interacting unordered pairs.
  std::vector<std::vector<double>> h4(m, std::vector<double>(m, 0.0));
  for (int l = 0; l < m; ++l)
    for (int j : inter[l]) {
      if (j < l) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < full; ++i) {
        const double h = second_diff(i, l, j);
        s += w[i] * h * h * h * h;
      }
      h4[l][j] = h4[j][l] = s;
    }

  // Lazily computed cross moments E[(D_j F)^2 (D_k F)^2].
  std::vector<std::vector<double>> m2cross(m, std::vector<double>(m, -1.0));
  auto cross = [&](int j, int k) {
    if (m2cross[j][k] >= 0.0) return m2cross[j][k];
    const std::size_t bj = std::size_t{1} << j, bk = std::size_t{1} << k;
    const double sj = space.sigma(j), sk = space.sigma(k);
    double s = 0.0;
    for (std::size_t i = 0; i < full; ++i) {
      const double dj = sj * (vals[i | bj] - vals[i & ~bj]);
      const double dk = sk * (vals[i | bk] - vals[i & ~bk]);
      s += w[i] * dj * dj * dk * dk;
    }
    m2cross[j][k] = m2cross[k][j] = s;
    return s;
  };

  // Triple sums over l and ordered pairs (j,k) from its interaction set;
  // materialize the second differences per l when the memory cost is small.
  double sum_a1 = 0.0, sum_a2 = 0.0;
  for (int l = 0; l < m; ++l) {
    const std::vector<int>& I = inter[l];
    if (I.empty()) continue;
    const bool materialize = static_cast<double>(I.size()) * static_cast<double>(full) * 8.0 <
                             512.0 * 1024.0 * 1024.0;
    std::vector<std::vector<double>> hl;
    if (materialize) {
      hl.assign(I.size(), std::vector<double>(full));
      for (std::size_t a = 0; a < I.size(); ++a)
        for (std::size_t i = 0; i < full; ++i) hl[a][i] = second_diff(i, l, I[a]);
    }
    const double inv_sl2 = 1.0 / (space.sigma(l) * space.sigma(l));
    for (std::size_t a = 0; a < I.size(); ++a)
      for (std::size_t b = a; b < I.size(); ++b) {
        double t2 = 0.0;
        if (materialize) {
          const std::vector<double>&ha = hl[a], &hb = hl[b];
          for (std::size_t i = 0; i < full; ++i) {
            const double x = ha[i], y = hb[i];
            t2 += w[i] * x * x * y * y;
          }
        } else {
          for (std::size_t i = 0; i < full; ++i) {
            const double x = second_diff(i, l, I[a]);
            const double y = second_diff(i, l, I[b]);
            t2 += w[i] * x * x * y * y;
          }
        }
        const double mult = a == b ? 1.0 : 2.0;  // ordered pairs (j,k) and (k,j)
        sum_a1 += mult * std::sqrt(cross(I[a], I[b])) * std::sqrt(t2);
        sum_a2 += mult * inv_sl2 * t2;
      }
  }

  double sum_a6 = 0.0, sum_a7 = 0.0;
  for (int k = 0; k < m; ++k) {
    const double inv_sk2 = 1.0 / (space.sigma(k) * space.sigma(k));
    for (int l : inter[k]) {
      const double inv_sl2 = 1.0 / (space.sigma(l) * space.sigma(l));
      sum_a6 += inv_sk2 * std::sqrt(m4[k]) * std::sqrt(h4[k][l]);
      sum_a7 += inv_sk2 * inv_sl2 * h4[k][l];
    }
  }

  BoundBreakdown out;
  out.triple = triple;
  out.mode = BoundMode::Exact;
  out.normalization = Normalization{0.0, 1.0, false};
  out.terms[0] = std::sqrt(15.0 / 4.0 * sum_a1);
  out.terms[1] = std::sqrt(3.0 / 4.0 * sum_a2);
  const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
  double a3 = 0.0, a4 = 0.0, a5 = 0.0;
  for (int k = 0; k < m; ++k) {
    const double sigma = space.sigma(k);
    a3 += m3[k] / sigma;
    a4 += std::pow(m2s[k], 1.0 / triple.s) * std::pow(mt[k], 1.0 / triple.t) / sigma;
    a5 += m4[k] / (sigma * sigma);
  }
  out.terms[2] = sqrt_2pi / 8.0 * a3;
  out.terms[3] = 0.5 * std::pow(f_r, 1.0 / triple.r) * a4;
  out.terms[4] = std::sqrt(a5);
  out.terms[5] = std::sqrt(6.0 * sum_a6);
  out.terms[6] = std::sqrt(3.0 * sum_a7);
  out.total = 0.0;
  for (double term : out.terms) out.total += term;
  return out;
}

BoundBreakdown second_order_bound_mc(const RademacherSpace& space, const Functional& f,
                                     const HolderTriple& triple, const McParams& mc);

}  // namespace detail

BoundBreakdown second_order_bound(const RademacherSpace& space, const Functional& f,
                                  const HolderTriple& triple, BoundMode mode, const McParams& mc,
                                  int cap) {
  if (mode == BoundMode::Exact)
    return detail::second_order_bound_exact(space, f, triple, cap, mc.threads);
  return detail::second_order_bound_mc(space, f, triple, mc);
}

}  // namespace radstein
