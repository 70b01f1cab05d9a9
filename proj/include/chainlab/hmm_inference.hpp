#ifndef CHAINLAB_HMM_INFERENCE_HPP
#define CHAINLAB_HMM_INFERENCE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/categorical.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/log_space.hpp"

namespace chainlab {

/// Per-position log-value columns produced by the forward, backward, and
/// max-sum passes. log_values[t][x] is the log quantity for label x at
/// position t; backpointers is filled only by max-sum passes.
struct TrellisTable {
  std::vector<std::vector<double>> log_values;
  std::vector<std::vector<std::size_t>> backpointers;
};

/// A decoded maximizing path with its log score. min_argmax_margin is the
/// smallest gap, over every argmax taken during decoding (all states at all
/// steps, plus the final one), between the winner and its best rival:
/// +infinity when no decision ever had a rival, and a caller wanting only
/// tie-free decodes can filter on it.
struct MapResult {
  std::vector<std::size_t> path;
  double log_score = 0.0;
  double min_argmax_margin = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Index of the maximum, ties broken toward the smallest index (strict >
/// while scanning upward). Also reports the winner-minus-runner-up gap.
struct ArgmaxResult {
  std::size_t index = 0;
  double margin = std::numeric_limits<double>::infinity();
};

inline ArgmaxResult argmax_smallest(std::span<const double> values) {
  ArgmaxResult result;
  double best = values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > best) {
      result.margin = values[i] - best;
      best = values[i];
      result.index = i;
    } else {
      const double gap = best - values[i];
      if (gap < result.margin) result.margin = gap;
    }
  }
  return result;
}

inline void check_observation_sequence(const HmmModel& model, std::span<const std::size_t> y) {
  model.check_sequence_length(y.size());
  check_indices(y, model.num_observations(), "observation");
}

}  // namespace detail

/// Forward pass: log_values[t][x] = log p(x_t = x, y_0..y_t).
inline TrellisTable forward(const HmmModel& model, std::span<const std::size_t> y) {
  detail::check_observation_sequence(model, y);
  const std::size_t N = y.size();
  const std::size_t L = model.num_labels();

  TrellisTable trellis;
  trellis.log_values.assign(N, std::vector<double>(L, kNegInf));
  for (std::size_t x = 0; x < L; ++x) {
    trellis.log_values[0][x] = model.log_initial(x) + model.log_emission(0, x, y[0]);
  }
  std::vector<double> terms(L);
  for (std::size_t t = 0; t + 1 < N; ++t) {
    for (std::size_t to = 0; to < L; ++to) {
      for (std::size_t from = 0; from < L; ++from) {
        terms[from] = trellis.log_values[t][from] + model.log_transition(t, from, to);
      }
      trellis.log_values[t + 1][to] =
          log_sum_exp(terms) + model.log_emission(t + 1, to, y[t + 1]);
    }
  }
  return trellis;
}

/// Backward pass: log_values[t][x] = log p(y_{t+1}..y_{N-1} | x_t = x), with
/// the last column identically 1.
inline TrellisTable backward(const HmmModel& model, std::span<const std::size_t> y) {
  detail::check_observation_sequence(model, y);
  const std::size_t N = y.size();
  const std::size_t L = model.num_labels();

  TrellisTable trellis;
  trellis.log_values.assign(N, std::vector<double>(L, 0.0));
  std::vector<double> terms(L);
  for (std::size_t t = N - 1; t-- > 0;) {
    for (std::size_t from = 0; from < L; ++from) {
      for (std::size_t to = 0; to < L; ++to) {
        terms[to] = model.log_transition(t, from, to) +
                    model.log_emission(t + 1, to, y[t + 1]) + trellis.log_values[t + 1][to];
      }
      trellis.log_values[t][from] = log_sum_exp(terms);
    }
  }
  return trellis;
}

/// log p(y_0..y_{N-1}) under the model.
inline double hmm_log_evidence(const HmmModel& model, std::span<const std::size_t> y) {
  const TrellisTable alpha = forward(model, y);
  return log_sum_exp(alpha.log_values.back());
}

namespace detail {

/// Shared tail of the two posterior-marginal computations: combine per-label
/// log alpha + log beta columns into per-position Categoricals, normalizing
/// in linear space after a max shift.
inline std::vector<Categorical> combine_posterior_columns(
    const std::vector<std::vector<double>>& log_alpha,
    const std::vector<std::vector<double>>& log_beta) {
  const std::size_t N = log_alpha.size();
  const std::size_t L = log_alpha[0].size();
  std::vector<Categorical> marginals;
  marginals.reserve(N);
  std::vector<double> column(L);
  for (std::size_t t = 0; t < N; ++t) {
    double max_log = kNegInf;
    for (std::size_t x = 0; x < L; ++x) {
      column[x] = log_alpha[t][x] + log_beta[t][x];
      if (column[x] > max_log) max_log = column[x];
    }
    if (max_log == kNegInf) {
      throw ImpossibleEvidenceError("observation sequence has probability zero under the model");
    }
    std::vector<double> probs(L);
    double sum = 0.0;
    for (std::size_t x = 0; x < L; ++x) {
      probs[x] = std::exp(column[x] - max_log);
      sum += probs[x];
    }
    for (double& p : probs) p /= sum;
    marginals.emplace_back(std::move(probs));
  }
  return marginals;
}

inline std::vector<std::size_t> argmax_per_position(const std::vector<Categorical>& marginals) {
  std::vector<std::size_t> path;
  path.reserve(marginals.size());
  for (const Categorical& m : marginals) path.push_back(argmax_smallest(m.probs()).index);
  return path;
}

}  // namespace detail

/// Per-position posterior label laws p(x_t | y_0..y_{N-1}).
inline std::vector<Categorical> posterior_marginals(const HmmModel& model,
                                                    std::span<const std::size_t> y) {
  const TrellisTable alpha = forward(model, y);
  const TrellisTable beta = backward(model, y);
  return detail::combine_posterior_columns(alpha.log_values, beta.log_values);
}

/// Maximum-posterior-marginal decoding: per-position argmax of the posterior
/// marginals, ties toward the smallest label index.
inline std::vector<std::size_t> mpm_decode(const HmmModel& model, std::span<const std::size_t> y) {
  return detail::argmax_per_position(posterior_marginals(model, y));
}

/// Max-sum (Viterbi) decoding: a path maximizing p(x, y) jointly, with its
/// log score. Per-step ties break toward the smallest label index.
inline MapResult map_decode(const HmmModel& model, std::span<const std::size_t> y) {
  detail::check_observation_sequence(model, y);
  const std::size_t N = y.size();
  const std::size_t L = model.num_labels();

  std::vector<std::vector<double>> delta(N, std::vector<double>(L, kNegInf));
  std::vector<std::vector<std::size_t>> back(N, std::vector<std::size_t>(L, 0));
  for (std::size_t x = 0; x < L; ++x) {
    delta[0][x] = model.log_initial(x) + model.log_emission(0, x, y[0]);
  }

  MapResult result;
  std::vector<double> candidates(L);
  for (std::size_t t = 0; t + 1 < N; ++t) {
    for (std::size_t to = 0; to < L; ++to) {
      for (std::size_t from = 0; from < L; ++from) {
        candidates[from] = delta[t][from] + model.log_transition(t, from, to);
      }
      const detail::ArgmaxResult best = detail::argmax_smallest(candidates);
      if (best.margin < result.min_argmax_margin) result.min_argmax_margin = best.margin;
      back[t + 1][to] = best.index;
      delta[t + 1][to] = candidates[best.index] + model.log_emission(t + 1, to, y[t + 1]);
    }
  }

  const detail::ArgmaxResult final_best = detail::argmax_smallest(delta[N - 1]);
  if (final_best.margin < result.min_argmax_margin) result.min_argmax_margin = final_best.margin;
  result.log_score = delta[N - 1][final_best.index];
  if (result.log_score == kNegInf) {
    throw ImpossibleEvidenceError("observation sequence has probability zero under the model");
  }
  result.path.assign(N, 0);
  result.path[N - 1] = final_best.index;
  for (std::size_t t = N - 1; t-- > 0;) result.path[t] = back[t + 1][result.path[t + 1]];
  return result;
}

}  // namespace chainlab

#endif  // CHAINLAB_HMM_INFERENCE_HPP
