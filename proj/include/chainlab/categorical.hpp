#ifndef CHAINLAB_CATEGORICAL_HPP
#define CHAINLAB_CATEGORICAL_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "chainlab/errors.hpp"
#include "chainlab/log_space.hpp"

namespace chainlab {

/// Tolerance for |sum - 1| of probability rows supplied as input (model
/// construction, file loading).
inline constexpr double kInputProbTolerance = 1e-12;

/// Tolerance for derived quantities, where accumulated round-off is expected.
inline constexpr double kDerivedProbTolerance = 1e-10;

/// Probability distribution over a finite alphabet: nonnegative entries
/// summing to 1 within kInputProbTolerance. Stores both linear probabilities
/// (the serialization currency) and their logs (the inference currency).
class Categorical {
 public:
  explicit Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ValidationError("empty probability vector");
    double sum = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (!(probs_[i] >= 0.0)) {  // negated comparison also rejects NaN
        throw ValidationError("probability entry " + std::to_string(i) +
                              " is negative or not a number");
      }
      sum += probs_[i];
    }
    if (!(std::abs(sum - 1.0) <= kInputProbTolerance)) {
      throw ValidationError("probabilities sum to " + std::to_string(sum) + ", not 1");
    }
    log_probs_.resize(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) log_probs_[i] = safe_log(probs_[i]);
  }

  static Categorical uniform(std::size_t size) {
    return Categorical(std::vector<double>(size, 1.0 / static_cast<double>(size)));
  }

  static Categorical point_mass(std::size_t size, std::size_t index) {
    std::vector<double> p(size, 0.0);
    p.at(index) = 1.0;
    return Categorical(std::move(p));
  }

  std::size_t size() const { return probs_.size(); }

  double prob(std::size_t i) const {
    check(i);
    return probs_[i];
  }

  double log_prob(std::size_t i) const {
    check(i);
    return log_probs_[i];
  }

  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& log_probs() const { return log_probs_; }

  bool strictly_positive() const {
    for (double p : probs_) {
      if (p <= 0.0) return false;
    }
    return true;
  }

  friend bool operator==(const Categorical& a, const Categorical& b) {
    return a.probs_ == b.probs_;
  }

 private:
  void check(std::size_t i) const {
    if (i >= probs_.size()) {
      throw IndexError("categorical index " + std::to_string(i) + " out of range (size " +
                       std::to_string(probs_.size()) + ")");
    }
  }

  std::vector<double> probs_;
  std::vector<double> log_probs_;
};

}  // namespace chainlab

#endif  // CHAINLAB_CATEGORICAL_HPP
