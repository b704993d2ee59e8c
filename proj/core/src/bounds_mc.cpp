#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "radstein/bounds.hpp"
#include "radstein/parallel.hpp"

namespace radstein {
namespace detail {

namespace {

Normalization pilot_normalization(const RademacherSpace& space, const Functional& f,
                                  const McParams& mc) {
  const std::int64_t count = std::max<std::int64_t>(1, mc.pilot_multiplier * mc.spec.count);
  const std::uint64_t pilot_seed = rng::mix64(mc.spec.seed ^ 0x70696c6f74ULL);
  constexpr int kChunks = 64;
  std::vector<double> sums(kChunks, 0.0), sq_sums(kChunks, 0.0);
  parallel_chunks(count, kChunks, mc.threads, [&](int chunk, std::int64_t lo, std::int64_t hi) {
    double s = 0.0, ss = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const double v = f(sample_configuration(space, i, pilot_seed));
      s += v;
      ss += v * v;
    }
    sums[chunk] = s;
    sq_sums[chunk] = ss;
  });
  double s = 0.0, ss = 0.0;
  for (int c = 0; c < kChunks; ++c) {
    s += sums[c];
    ss += sq_sums[c];
  }
  const double mean = s / static_cast<double>(count);
  const double var = std::max(0.0, ss / static_cast<double>(count) - mean * mean);
  if (!(var > 0.0))
    throw std::invalid_argument("second_order_bound: pilot sample found zero variance");
  return Normalization{mean, std::sqrt(var), true};
}

}  // namespace

BoundBreakdown second_order_bound_mc(const RademacherSpace& space, const Functional& f,
                                     const HolderTriple& triple, const McParams& mc) {
  if (!triple.valid()) throw std::invalid_argument("second_order_bound: invalid exponent triple");
  if (!f.has_gradient_oracle() || !f.has_second_gradient_oracle())
    throw std::invalid_argument(
        "second_order_bound: Monte Carlo mode requires gradient and second-gradient oracles");
  SymmetryOrbits local_orbits;
  const SymmetryOrbits* orbits = mc.orbits;
  if (orbits == nullptr) {
    local_orbits = direct_orbits(f);  // needs the interaction oracle
    orbits = &local_orbits;
  }
  if (orbits->index_count != space.size())
    throw std::invalid_argument("second_order_bound: orbit index count mismatch");

  const Normalization norm =
      mc.normalization ? *mc.normalization : pilot_normalization(space, f, mc);
  const Functional g = normalize(f, norm.mean, norm.stddev);

  const std::int64_t count = mc.spec.count;
  if (count < 1) throw std::invalid_argument("second_order_bound: sample count must be >= 1");
  const int batches = std::max(1, std::min<int>(mc.spec.batches, static_cast<int>(count)));

  // Distinct coordinates whose first gradient is sampled.
  std::vector<int> grad_indices;
  {
    std::map<int, int> slot;
    auto add = [&](int k) {
      if (!slot.contains(k)) {
        slot.emplace(k, static_cast<int>(grad_indices.size()));
        grad_indices.push_back(k);
      }
    };
    for (const auto& s : orbits->singles) add(s.rep);
    for (const auto& p : orbits->grad_pairs) {
      add(p.rep[0]);
      add(p.rep[1]);
    }
  }
  std::map<int, int> grad_slot;
  for (std::size_t i = 0; i < grad_indices.size(); ++i)
    grad_slot.emplace(grad_indices[i], static_cast<int>(i));

  // Distinct unordered coordinate pairs whose second gradient is sampled
  // (D_l D_k = D_k D_l).
  std::vector<std::pair<int, int>> hess_pairs;
  std::map<std::pair<int, int>, int> hess_slot;
  auto add_pair = [&](int k, int l) {
    const std::pair<int, int> key = k <= l ? std::pair{k, l} : std::pair{l, k};
    if (!hess_slot.contains(key)) {
      hess_slot.emplace(key, static_cast<int>(hess_pairs.size()));
      hess_pairs.push_back(key);
    }
  };
  for (const auto& p : orbits->second_pairs) add_pair(p.rep[0], p.rep[1]);
  for (const auto& tr : orbits->triples) {
    add_pair(tr.rep[0], tr.rep[2]);
    add_pair(tr.rep[1], tr.rep[2]);
  }

  // Resolve every class to flat slot indices up front; the sampling loop then
  // touches only contiguous arrays.
  auto gslot = [&](int k) { return static_cast<std::size_t>(grad_slot.at(k)); };
  auto hslot = [&](int k, int l) {
    return static_cast<std::size_t>(
        hess_slot.at(k <= l ? std::pair{k, l} : std::pair{l, k}));
  };
  std::vector<std::size_t> single_slot, gp_j, gp_k, sp_slot, tr_j, tr_k;
  for (const auto& s : orbits->singles) single_slot.push_back(gslot(s.rep));
  for (const auto& p : orbits->grad_pairs) {
    gp_j.push_back(gslot(p.rep[0]));
    gp_k.push_back(gslot(p.rep[1]));
  }
  for (const auto& p : orbits->second_pairs) sp_slot.push_back(hslot(p.rep[0], p.rep[1]));
  for (const auto& tr : orbits->triples) {
    tr_j.push_back(hslot(tr.rep[0], tr.rep[2]));
    tr_k.push_back(hslot(tr.rep[1], tr.rep[2]));
  }

  // Per-sample moment quantities, accumulated per batch:
  //   [0]                         |F|^r
  //   [1 + 4i .. 4i+4]            |d|^3, |d|^{2s}, |d|^t, d^4 per single class
  //   [base_gp + i]               d_j^2 d_k^2 per grad pair class
  //   [base_sp + i]               h^4 per second pair class
  //   [base_tr + i]               h_{lj}^2 h_{lk}^2 per triple class
  const std::size_t n_singles = orbits->singles.size();
  const std::size_t base_gp = 1 + 4 * n_singles;
  const std::size_t base_sp = base_gp + orbits->grad_pairs.size();
  const std::size_t base_tr = base_sp + orbits->second_pairs.size();
  const std::size_t n_q = base_tr + orbits->triples.size();

  std::vector<double> batch_sums(static_cast<std::size_t>(batches) * n_q, 0.0);
  std::vector<std::int64_t> batch_counts(batches, 0);
  if (mc.f_samples) mc.f_samples->assign(static_cast<std::size_t>(count), 0.0);

  const double s_exp = 2.0 * triple.s, t_exp = triple.t, r_exp = triple.r;
  parallel_chunks(count, batches, mc.threads, [&](int b, std::int64_t lo, std::int64_t hi) {
    std::vector<double> acc(n_q, 0.0);
    std::vector<double> d(grad_indices.size());
    std::vector<double> h(hess_pairs.size());
    for (std::int64_t i = lo; i < hi; ++i) {
      const Configuration c = sample_configuration(space, i, mc.spec.seed);
      const double v = g(c);
      if (mc.f_samples) (*mc.f_samples)[static_cast<std::size_t>(i)] = v;
      acc[0] += std::pow(std::abs(v), r_exp);
      for (std::size_t a = 0; a < grad_indices.size(); ++a)
        d[a] = g.gradient_oracle(c, grad_indices[a]);
      for (std::size_t a = 0; a < hess_pairs.size(); ++a)
        h[a] = g.second_gradient_oracle(c, hess_pairs[a].first, hess_pairs[a].second);
      for (std::size_t a = 0; a < n_singles; ++a) {
        const double dk = d[single_slot[a]];
        const double ad = std::abs(dk);
        double* out = &acc[1 + 4 * a];
        out[0] += ad * ad * ad;
        out[1] += std::pow(ad, s_exp);
        out[2] += std::pow(ad, t_exp);
        out[3] += dk * dk * dk * dk;
      }
      for (std::size_t a = 0; a < gp_j.size(); ++a) {
        const double dj = d[gp_j[a]], dk = d[gp_k[a]];
        acc[base_gp + a] += dj * dj * dk * dk;
      }
      for (std::size_t a = 0; a < sp_slot.size(); ++a) {
        const double hv = h[sp_slot[a]];
        acc[base_sp + a] += hv * hv * hv * hv;
      }
      for (std::size_t a = 0; a < tr_j.size(); ++a) {
        const double hj = h[tr_j[a]], hk = h[tr_k[a]];
        acc[base_tr + a] += hj * hj * hk * hk;
      }
    }
    std::copy(acc.begin(), acc.end(), batch_sums.begin() + static_cast<std::size_t>(b) * n_q);
    batch_counts[b] = hi - lo;
  });

  // Assemble the seven terms from a vector of moment means.
  auto assemble = [&](const std::vector<double>& q) {
    std::array<double, 7> terms{};
    const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
    double a3 = 0.0, a4 = 0.0, a5 = 0.0;
    for (std::size_t a = 0; a < n_singles; ++a) {
      const auto& cls = orbits->singles[a];
      const double sigma = space.sigma(cls.rep);
      const double* mom = &q[1 + 4 * a];
      a3 += cls.count / sigma * mom[0];
      a4 += cls.count / sigma * std::pow(std::max(0.0, mom[1]), 1.0 / triple.s) *
            std::pow(std::max(0.0, mom[2]), 1.0 / triple.t);
      a5 += cls.count / (sigma * sigma) * mom[3];
    }
    double sum_a1 = 0.0, sum_a2 = 0.0;
    for (std::size_t a = 0; a < orbits->triples.size(); ++a) {
      const auto& cls = orbits->triples[a];
      const double t2 = std::max(0.0, q[base_tr + a]);
      const double m2 = std::max(0.0, q[base_gp + static_cast<std::size_t>(cls.jk_pair)]);
      sum_a1 += cls.count * std::sqrt(m2) * std::sqrt(t2);
      const double sl = space.sigma(cls.rep[2]);
      sum_a2 += cls.count / (sl * sl) * t2;
    }
    double sum_a6 = 0.0, sum_a7 = 0.0;
    for (std::size_t a = 0; a < orbits->second_pairs.size(); ++a) {
      const auto& cls = orbits->second_pairs[a];
      const double h4 = std::max(0.0, q[base_sp + a]);
      const double m4 = std::max(0.0, q[1 + 4 * static_cast<std::size_t>(cls.k_single) + 3]);
      const double sk = space.sigma(cls.rep[0]);
      const double sl = space.sigma(cls.rep[1]);
      sum_a6 += cls.count / (sk * sk) * std::sqrt(m4) * std::sqrt(h4);
      sum_a7 += cls.count / (sk * sk * sl * sl) * h4;
    }
    terms[0] = std::sqrt(15.0 / 4.0 * std::max(0.0, sum_a1));
    terms[1] = std::sqrt(3.0 / 4.0 * std::max(0.0, sum_a2));
    terms[2] = sqrt_2pi / 8.0 * a3;
    terms[3] = 0.5 * std::pow(std::max(0.0, q[0]), 1.0 / triple.r) * a4;
    terms[4] = std::sqrt(std::max(0.0, a5));
    terms[5] = std::sqrt(6.0 * std::max(0.0, sum_a6));
    terms[6] = std::sqrt(3.0 * std::max(0.0, sum_a7));
    return terms;
  };

  std::vector<double> pooled(n_q, 0.0);
  for (int b = 0; b < batches; ++b)
    for (std::size_t qi = 0; qi < n_q; ++qi)
      pooled[qi] += batch_sums[static_cast<std::size_t>(b) * n_q + qi];
  for (std::size_t qi = 0; qi < n_q; ++qi) pooled[qi] /= static_cast<double>(count);

  BoundBreakdown out;
  out.triple = triple;
  out.mode = BoundMode::MonteCarlo;
  out.normalization = norm;
  out.terms = assemble(pooled);
  out.total = 0.0;
  for (double term : out.terms) out.total += term;

  if (batches > 1) {
    std::vector<double> q(n_q);
    std::array<double, 7> term_ss{};
    double total_ss = 0.0;
    std::vector<std::array<double, 7>> batch_terms(batches);
    for (int b = 0; b < batches; ++b) {
      for (std::size_t qi = 0; qi < n_q; ++qi)
        q[qi] = batch_sums[static_cast<std::size_t>(b) * n_q + qi] /
                static_cast<double>(batch_counts[b]);
      batch_terms[b] = assemble(q);
    }
    std::array<double, 7> term_mean{};
    std::vector<double> batch_total(batches, 0.0);
    double total_mean = 0.0;
    for (int b = 0; b < batches; ++b) {
      for (int j = 0; j < 7; ++j) {
        term_mean[j] += batch_terms[b][j];
        batch_total[b] += batch_terms[b][j];
      }
      total_mean += batch_total[b];
    }
    for (int j = 0; j < 7; ++j) term_mean[j] /= batches;
    total_mean /= batches;
    for (int b = 0; b < batches; ++b) {
      for (int j = 0; j < 7; ++j) {
        const double dv = batch_terms[b][j] - term_mean[j];
        term_ss[j] += dv * dv;
      }
      const double dv = batch_total[b] - total_mean;
      total_ss += dv * dv;
    }
    for (int j = 0; j < 7; ++j)
      out.stderrs[j] = std::sqrt(term_ss[j] / (batches - 1.0) / batches);
    out.total_stderr = std::sqrt(total_ss / (batches - 1.0) / batches);
  }
  return out;
}

}  // namespace detail
}  // namespace radstein
