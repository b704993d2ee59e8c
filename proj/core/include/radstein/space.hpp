#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace radstein {

/// A point of {-1,+1}^m stored as a bitmask; bit k set <=> coordinate k is +1.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(int m) : m_(m), words_((m + 63) / 64, 0) {}

  static Configuration zeros(int m) { return Configuration(m); }
  static Configuration ones(int m) {
    Configuration c(m);
    for (int k = 0; k < m; ++k) c.set(k, true);
    return c;
  }
  static Configuration from_mask(int m, std::uint64_t mask) {
    Configuration c(m);
    if (!c.words_.empty()) c.words_[0] = mask;
    return c;
  }

  int size() const { return m_; }

  bool get(int k) const { return (words_[k >> 6] >> (k & 63)) & 1u; }
  void set(int k, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (k & 63);
    if (v)
      words_[k >> 6] |= bit;
    else
      words_[k >> 6] &= ~bit;
  }
  void flip(int k) { words_[k >> 6] ^= std::uint64_t{1} << (k & 63); }

  /// Coordinate value as a sign, +1 or -1.
  int sign(int k) const { return get(k) ? 1 : -1; }

  /// Overwrites the low word; used by enumeration loops with m <= 64.
  void assign_low_word(std::uint64_t mask) { words_[0] = mask; }

  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const Configuration& o) const {
    return m_ == o.m_ && words_ == o.words_;
  }

 private:
  int m_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Finite product Rademacher space: m coordinates, P(X_k = +1) = p_k.
class RademacherSpace {
 public:
  RademacherSpace(int m, double p) : RademacherSpace(std::vector<double>(m, p)) {}

  explicit RademacherSpace(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("RademacherSpace: m must be >= 1");
    sigma_.reserve(probs_.size());
    for (double p : probs_) {
      if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("RademacherSpace: every p_k must lie strictly in (0,1)");
      sigma_.push_back(std::sqrt(p * (1.0 - p)));
    }
  }

  int size() const { return static_cast<int>(probs_.size()); }
  double p(int k) const { return probs_[k]; }
  double q(int k) const { return 1.0 - probs_[k]; }
  /// sqrt(p_k q_k), half the standard deviation of X_k.
  double sigma(int k) const { return sigma_[k]; }

  /// Y_k = (x_k - p_k + q_k) / (2 sqrt(p_k q_k)), the centred unit-variance coordinate.
  double normalized_value(const Configuration& config, int k) const {
    check_index(k);
    return normalized_sign(config.sign(k), k);
  }

  double normalized_sign(int sign, int k) const {
    return (static_cast<double>(sign) - probs_[k] + (1.0 - probs_[k])) / (2.0 * sigma_[k]);
  }

  /// Product-measure probability of a configuration.
  double probability(const Configuration& config) const {
    double w = 1.0;
    for (int k = 0; k < size(); ++k) w *= config.get(k) ? probs_[k] : 1.0 - probs_[k];
    return w;
  }

  void check_index(int k) const {
    if (k < 0 || k >= size()) throw std::out_of_range("coordinate index out of range");
  }

 private:
  std::vector<double> probs_;
  std::vector<double> sigma_;
};

}  // namespace radstein
