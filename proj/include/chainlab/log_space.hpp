#ifndef CHAINLAB_LOG_SPACE_HPP
#define CHAINLAB_LOG_SPACE_HPP

#include <cmath>
#include <limits>
#include <span>

namespace chainlab {

/// log 0. Zero probabilities are represented as -inf; -inf plus any finite
/// value stays -inf, and log_sum_exp of an all-(-inf) span is -inf, so
/// degenerate and deterministic models need no special casing.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log p with p <= 0 mapped to -inf.
inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

/// log(sum_i exp(v[i])), max-shifted. Empty input yields -inf.
inline double log_sum_exp(std::span<const double> values) {
  double max = kNegInf;
  for (double v : values) {
    if (v > max) max = v;
  }
  if (max == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

/// log(exp(a) + exp(b)).
inline double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == kNegInf) return kNegInf;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace chainlab

#endif  // CHAINLAB_LOG_SPACE_HPP
