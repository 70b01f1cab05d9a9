#ifndef CHAINLAB_ORACLE_HPP
#define CHAINLAB_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/crf.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/matrix.hpp"
#include "chainlab/potential_chain.hpp"

/// Brute-force reference implementations by exhaustive enumeration.
///
/// Everything here works in plain linear-space arithmetic over explicitly
/// enumerated tuples, on purpose: these functions are the ground truth the
/// fast log-space recursions are tested against, so they share no code and
/// no numeric domain with them. Instances are capped; anything bigger is a
/// TooLargeError, never an attempt.
namespace chainlab::oracle {

inline constexpr std::size_t kDefaultCap = 1'000'000;

namespace detail {

inline void check_cap(double count, std::size_t cap, const std::string& what) {
  if (count > static_cast<double>(cap)) {
    throw TooLargeError(what + " would enumerate about " + std::to_string(count) +
                        " configurations, exceeding the cap of " + std::to_string(cap));
  }
}

}  // namespace detail

/// All index tuples of the given length with entries in [0, base), in
/// lexicographic order. Length 0 yields the single empty tuple.
inline std::vector<std::vector<std::size_t>> index_tuples(std::size_t base, std::size_t length) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < length; ++i) total *= base;
  std::vector<std::size_t> places(length, 1);
  for (std::size_t i = length; i-- > 1;) places[i - 1] = places[i] * base;

  std::vector<std::vector<std::size_t>> tuples;
  tuples.reserve(total);
  for (std::size_t rank = 0; rank < total; ++rank) {
    std::vector<std::size_t> tuple(length);
    for (std::size_t i = 0; i < length; ++i) tuple[i] = (rank / places[i]) % base;
    tuples.push_back(std::move(tuple));
  }
  return tuples;
}

/// p(x, y) as the direct product of the model's stored linear probabilities.
inline double joint_prob(const HmmModel& model, std::span<const std::size_t> labels,
                         std::span<const std::size_t> observations) {
  if (labels.size() != observations.size() || labels.empty()) {
    throw DimensionError("label and observation sequences must be nonempty and equal-length");
  }
  double p = model.initial().prob(labels[0]) * model.emission_at(0).at(labels[0], observations[0]);
  for (std::size_t t = 0; t + 1 < labels.size(); ++t) {
    p *= model.transition_at(t).at(labels[t], labels[t + 1]) *
         model.emission_at(t + 1).at(labels[t + 1], observations[t + 1]);
  }
  return p;
}

/// The chain-CRF path weight exp[sum V + sum U], evaluated as a product of
/// individually exponentiated factors.
inline double crf_weight(const LcCrfModel& crf, std::span<const std::size_t> labels,
                         std::span<const std::size_t> observations) {
  if (labels.size() != observations.size()) {
    throw DimensionError("label and observation sequences must have equal length");
  }
  crf.check_sequence_length(labels.size());
  double w = std::exp(crf.unary_score(0, labels[0], observations[0]));
  for (std::size_t t = 0; t + 1 < labels.size(); ++t) {
    w *= std::exp(crf.pairwise_score(t, labels[t], labels[t + 1])) *
         std::exp(crf.unary_score(t + 1, labels[t + 1], observations[t + 1]));
  }
  return w;
}

struct JointEntry {
  std::vector<std::size_t> labels;
  std::vector<std::size_t> observations;
  double prob = 0.0;
};

/// Every (x, y) pair of the given length with its joint probability.
inline std::vector<JointEntry> enumerate_joint(const HmmModel& model, std::size_t length,
                                               std::size_t cap = kDefaultCap) {
  model.check_sequence_length(length);
  const double lcount = std::pow(static_cast<double>(model.num_labels()),
                                 static_cast<double>(length));
  const double ocount = std::pow(static_cast<double>(model.num_observations()),
                                 static_cast<double>(length));
  detail::check_cap(lcount * ocount, cap, "joint enumeration");

  std::vector<JointEntry> entries;
  const auto label_tuples = index_tuples(model.num_labels(), length);
  const auto obs_tuples = index_tuples(model.num_observations(), length);
  entries.reserve(label_tuples.size() * obs_tuples.size());
  for (const auto& x : label_tuples) {
    for (const auto& y : obs_tuples) {
      entries.push_back(JointEntry{x, y, joint_prob(model, x, y)});
    }
  }
  return entries;
}

/// p(y) by summing the joint over all label tuples.
inline double sequence_prob(const HmmModel& model, std::span<const std::size_t> y,
                            std::size_t cap = kDefaultCap) {
  model.check_sequence_length(y.size());
  detail::check_cap(
      std::pow(static_cast<double>(model.num_labels()), static_cast<double>(y.size())), cap,
      "label enumeration");
  double total = 0.0;
  for (const auto& x : index_tuples(model.num_labels(), y.size())) {
    total += joint_prob(model, x, y);
  }
  return total;
}

/// Posterior p(x | y) for every label tuple, in index_tuples order.
inline std::vector<double> posterior_table(const HmmModel& model, std::span<const std::size_t> y,
                                           std::size_t cap = kDefaultCap) {
  model.check_sequence_length(y.size());
  detail::check_cap(
      std::pow(static_cast<double>(model.num_labels()), static_cast<double>(y.size())), cap,
      "label enumeration");
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& x : index_tuples(model.num_labels(), y.size())) {
    weights.push_back(joint_prob(model, x, y));
    total += weights.back();
  }
  if (total <= 0.0) {
    throw ImpossibleEvidenceError("observation sequence has probability zero under the model");
  }
  for (double& w : weights) w /= total;
  return weights;
}

/// Conditional law of the CRF for every label tuple, in index_tuples order.
inline std::vector<double> crf_posterior_table(const LcCrfModel& crf,
                                               std::span<const std::size_t> y,
                                               std::size_t cap = kDefaultCap) {
  crf.check_sequence_length(y.size());
  detail::check_cap(
      std::pow(static_cast<double>(crf.num_labels()), static_cast<double>(y.size())), cap,
      "label enumeration");
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& x : index_tuples(crf.num_labels(), y.size())) {
    weights.push_back(crf_weight(crf, x, y));
    total += weights.back();
  }
  for (double& w : weights) w /= total;
  return weights;
}

namespace detail {

inline std::vector<std::vector<double>> marginalize(const std::vector<std::vector<std::size_t>>& tuples,
                                                    const std::vector<double>& probs,
                                                    std::size_t length, std::size_t num_labels) {
  std::vector<std::vector<double>> out(length, std::vector<double>(num_labels, 0.0));
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    for (std::size_t t = 0; t < length; ++t) out[t][tuples[i][t]] += probs[i];
  }
  return out;
}

}  // namespace detail

/// Per-position posterior label marginals by enumeration.
inline std::vector<std::vector<double>> marginals(const HmmModel& model,
                                                  std::span<const std::size_t> y,
                                                  std::size_t cap = kDefaultCap) {
  const std::vector<double> table = posterior_table(model, y, cap);
  return detail::marginalize(index_tuples(model.num_labels(), y.size()), table, y.size(),
                             model.num_labels());
}

/// Per-position conditional label marginals of the CRF by enumeration.
inline std::vector<std::vector<double>> crf_marginals(const LcCrfModel& crf,
                                                      std::span<const std::size_t> y,
                                                      std::size_t cap = kDefaultCap) {
  const std::vector<double> table = crf_posterior_table(crf, y, cap);
  return detail::marginalize(index_tuples(crf.num_labels(), y.size()), table, y.size(),
                             crf.num_labels());
}

/// Label-prior marginals p(x_t) of the hidden chain alone (no observations),
/// by enumerating label tuples.
inline std::vector<std::vector<double>> chain_prior_marginals(const HmmModel& model,
                                                              std::size_t length,
                                                              std::size_t cap = kDefaultCap) {
  model.check_sequence_length(length);
  detail::check_cap(
      std::pow(static_cast<double>(model.num_labels()), static_cast<double>(length)), cap,
      "label enumeration");
  const auto tuples = index_tuples(model.num_labels(), length);
  std::vector<double> probs;
  probs.reserve(tuples.size());
  for (const auto& x : tuples) {
    double p = model.initial().prob(x[0]);
    for (std::size_t t = 0; t + 1 < length; ++t) p *= model.transition_at(t).at(x[t], x[t + 1]);
    probs.push_back(p);
  }
  return detail::marginalize(tuples, probs, length, model.num_labels());
}

/// The full set of jointly maximizing label paths (ties included) and the
/// attained maximum, for tie-aware comparisons against max-sum decoders.
struct MapSet {
  double max_prob = 0.0;
  std::vector<std::vector<std::size_t>> paths;

  bool contains(std::span<const std::size_t> path) const {
    for (const auto& p : paths) {
      if (p.size() == path.size() && std::equal(p.begin(), p.end(), path.begin())) return true;
    }
    return false;
  }
};

inline MapSet map_paths(const HmmModel& model, std::span<const std::size_t> y,
                        std::size_t cap = kDefaultCap) {
  model.check_sequence_length(y.size());
  detail::check_cap(
      std::pow(static_cast<double>(model.num_labels()), static_cast<double>(y.size())), cap,
      "label enumeration");
  MapSet result;
  for (const auto& x : index_tuples(model.num_labels(), y.size())) {
    const double p = joint_prob(model, x, y);
    if (p > result.max_prob) {
      result.max_prob = p;
      result.paths.clear();
      result.paths.push_back(x);
    } else if (p == result.max_prob && p > 0.0) {
      result.paths.push_back(x);
    }
  }
  if (result.max_prob <= 0.0) {
    throw ImpossibleEvidenceError("observation sequence has probability zero under the model");
  }
  return result;
}

inline MapSet crf_map_paths(const LcCrfModel& crf, std::span<const std::size_t> y,
                            std::size_t cap = kDefaultCap) {
  crf.check_sequence_length(y.size());
  detail::check_cap(
      std::pow(static_cast<double>(crf.num_labels()), static_cast<double>(y.size())), cap,
      "label enumeration");
  MapSet result;
  for (const auto& x : index_tuples(crf.num_labels(), y.size())) {
    const double w = crf_weight(crf, x, y);
    if (w > result.max_prob) {
      result.max_prob = w;
      result.paths.clear();
      result.paths.push_back(x);
    } else if (w == result.max_prob && w > 0.0) {
      result.paths.push_back(x);
    }
  }
  return result;
}

/// Linear-space suffix sums of a potential chain: out[t][w] is the sum over
/// all state suffixes starting in w at position t of the product of the
/// traversed potentials.
inline std::vector<std::vector<double>> potential_suffix_sums(const PotentialChain& chain,
                                                              std::size_t cap = kDefaultCap) {
  const std::size_t N = chain.length();
  const std::size_t D = chain.num_states();
  std::vector<std::vector<double>> out(N, std::vector<double>(D, 0.0));
  for (std::size_t t = 0; t < N; ++t) {
    const std::size_t suffix_len = N - 1 - t;
    detail::check_cap(std::pow(static_cast<double>(D), static_cast<double>(suffix_len)), cap,
                      "suffix enumeration");
    for (std::size_t w = 0; w < D; ++w) {
      double total = 0.0;
      for (const auto& suffix : index_tuples(D, suffix_len)) {
        double prod = 1.0;
        std::size_t prev = w;
        for (std::size_t i = 0; i < suffix_len; ++i) {
          prod *= std::exp(chain.log_potential(t + i, prev, suffix[i]));
          prev = suffix[i];
        }
        total += prod;
      }
      out[t][w] = total;
    }
  }
  return out;
}

/// Linear-space suffix sums of a chain CRF: out[t](x, y) is the sum over all
/// (label, observation) suffixes of the product of exponentiated scores,
/// with the position-0 table additionally carrying its own unary factor.
inline std::vector<Matrix> crf_suffix_sums(const LcCrfModel& crf, std::size_t cap = kDefaultCap) {
  const std::size_t N = crf.length();
  const std::size_t L = crf.num_labels();
  const std::size_t O = crf.num_observations();
  std::vector<Matrix> out(N, Matrix(L, O, 0.0));
  for (std::size_t t = 0; t < N; ++t) {
    const std::size_t suffix_len = N - 1 - t;
    detail::check_cap(std::pow(static_cast<double>(L * O), static_cast<double>(suffix_len)), cap,
                      "suffix enumeration");
    const auto label_suffixes = index_tuples(L, suffix_len);
    const auto obs_suffixes = index_tuples(O, suffix_len);
    for (std::size_t x = 0; x < L; ++x) {
      for (std::size_t y = 0; y < O; ++y) {
        double total = 0.0;
        for (const auto& xs : label_suffixes) {
          for (const auto& ys : obs_suffixes) {
            double prod = 1.0;
            std::size_t prev = x;
            for (std::size_t i = 0; i < suffix_len; ++i) {
              prod *= std::exp(crf.pairwise_score(t + i, prev, xs[i])) *
                      std::exp(crf.unary_score(t + i + 1, xs[i], ys[i]));
              prev = xs[i];
            }
            total += prod;
          }
        }
        out[t](x, y) = (t == 0) ? total * std::exp(crf.unary_score(0, x, y)) : total;
      }
    }
  }
  return out;
}

}  // namespace chainlab::oracle

#endif  // CHAINLAB_ORACLE_HPP
