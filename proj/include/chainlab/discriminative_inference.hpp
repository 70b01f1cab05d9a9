#ifndef CHAINLAB_DISCRIMINATIVE_INFERENCE_HPP
#define CHAINLAB_DISCRIMINATIVE_INFERENCE_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/categorical.hpp"
#include "chainlab/discriminative.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/hmm_inference.hpp"
#include "chainlab/log_space.hpp"
#include "chainlab/matrix.hpp"

namespace chainlab {

/// Invert a generative HMM into the parameters the discriminative decoders
/// consume:
///   - prior marginals by chain propagation, p_{t+1} = p_t * T_t
///     (renormalized each step to absorb floating-point drift),
///   - transitions copied,
///   - label-given-observation laws by Bayes inversion,
///       p(x | y at t) = p(y|x) p_t(x) / sum_x' p(y|x') p_t(x').
///
/// The result matches the source model exactly: decoding with it reproduces
/// the generative posterior for every observation sequence of the derived
/// length.
///
/// `length` handling: a per-position model fixes its own length (passing a
/// different one is an error). A stationary model needs `length` to know how
/// far to propagate the priors; it may be omitted only when the initial law
/// is already a fixed point of the transition matrix, in which case the
/// result is itself stationary.
///
/// Throws DegeneratePriorError if any propagated prior entry at positions
/// 1.. is zero (those positions' priors sit in denominators of the
/// discriminative recursions), and ValidationError if some observation has
/// zero marginal probability at some position (its conditional label law
/// would be 0/0).
inline DiscriminativeParams derive_disc_params(const HmmModel& model,
                                               std::optional<std::size_t> length = std::nullopt) {
  const std::size_t L = model.num_labels();
  const std::size_t O = model.num_observations();

  const auto bayes_invert = [&](const Categorical& prior, const Matrix& emission,
                                std::size_t position) {
    Matrix inverted(O, L);
    for (std::size_t y = 0; y < O; ++y) {
      double denom = 0.0;
      for (std::size_t x = 0; x < L; ++x) {
        inverted(y, x) = emission(x, y) * prior.prob(x);
        denom += inverted(y, x);
      }
      if (denom <= 0.0) {
        throw ValidationError("observation " + std::to_string(y) +
                              " has zero marginal probability at position " +
                              std::to_string(position) +
                              "; its conditional label law is undefined");
      }
      for (std::size_t x = 0; x < L; ++x) inverted(y, x) /= denom;
    }
    return inverted;
  };

  if (model.is_stationary() && !length.has_value()) {
    // Stationary in, stationary out: only sound when the prior never moves.
    const Categorical& prior = model.initial();
    const Matrix& trans = model.transition_at(0);
    for (std::size_t to = 0; to < L; ++to) {
      double propagated = 0.0;
      for (std::size_t from = 0; from < L; ++from) {
        propagated += prior.prob(from) * trans(from, to);
      }
      if (std::abs(propagated - prior.prob(to)) > kDerivedProbTolerance) {
        throw ValidationError(
            "stationary model's initial law is not a fixed point of its transition matrix; "
            "pass an explicit length to derive per-position parameters");
      }
    }
    if (!prior.strictly_positive()) {
      throw DegeneratePriorError("stationary prior marginal has a zero entry");
    }
    return DiscriminativeParams::stationary(model.label_alphabet(), model.obs_alphabet(), prior,
                                            trans, bayes_invert(prior, model.emission_at(0), 0),
                                            PriorConsistency::kChainConsistent);
  }

  std::size_t N = 0;
  if (model.is_stationary()) {
    N = *length;
  } else {
    N = model.length().value();
    if (length.has_value() && *length != N) {
      throw DimensionError("requested length " + std::to_string(*length) +
                           " does not match model length " + std::to_string(N));
    }
  }
  if (N == 0) throw DimensionError("empty sequence");

  std::vector<Categorical> priors;
  priors.reserve(N);
  priors.push_back(model.initial());
  for (std::size_t t = 0; t + 1 < N; ++t) {
    const Matrix& trans = model.transition_at(t);
    std::vector<double> next(L, 0.0);
    double sum = 0.0;
    for (std::size_t to = 0; to < L; ++to) {
      for (std::size_t from = 0; from < L; ++from) {
        next[to] += priors[t].prob(from) * trans(from, to);
      }
      sum += next[to];
    }
    for (double& p : next) p /= sum;
    priors.emplace_back(std::move(next));
  }
  for (std::size_t t = 1; t < N; ++t) {
    if (!priors[t].strictly_positive()) {
      throw DegeneratePriorError("prior marginal at position " + std::to_string(t) +
                                 " has a zero entry; discriminative recursions divide by it");
    }
  }

  std::vector<Matrix> transitions;
  transitions.reserve(N - 1);
  for (std::size_t t = 0; t + 1 < N; ++t) transitions.push_back(model.transition_at(t));

  std::vector<Matrix> label_given_obs;
  label_given_obs.reserve(N);
  for (std::size_t t = 0; t < N; ++t) {
    label_given_obs.push_back(bayes_invert(priors[t], model.emission_at(t), t));
  }

  return DiscriminativeParams(model.label_alphabet(), model.obs_alphabet(), std::move(priors),
                              std::move(transitions), std::move(label_given_obs),
                              PriorConsistency::kChainConsistent);
}

namespace detail {

inline void check_disc_sequence(const DiscriminativeParams& params,
                                std::span<const std::size_t> y) {
  params.check_sequence_length(y.size());
  check_indices(y, params.num_observations(), "observation");
  // Positions 1.. contribute 1 / p(x_t) factors; a zero there would turn the
  // recursions into 0 * inf. Refuse up front instead.
  const std::size_t checks = params.is_stationary() ? (y.size() > 1 ? 1 : 0) : y.size() - 1;
  for (std::size_t i = 0; i < checks; ++i) {
    const std::size_t t = params.is_stationary() ? 0 : i + 1;
    if (!params.prior_at(t).strictly_positive()) {
      throw DegeneratePriorError("prior marginal at position " + std::to_string(i + 1) +
                                 " has a zero entry; discriminative recursions divide by it");
    }
  }
}

}  // namespace detail

/// Discriminative forward pass. The recursion uses only p(x_t | y_t),
/// p(x_{t+1} | x_t) and the prior marginals:
///   alpha_0(x) = p(x | y_0)
///   alpha_{t+1}(x') = [p(x' | y_{t+1}) / p_{t+1}(x')] * sum_x alpha_t(x) p(x'|x)
///
/// The columns are NOT the generative p(x_t, y_0..y_t) — each level carries
/// an extra constant factor — but normalized products alpha * beta still
/// yield the exact posterior marginals.
///
/// `log_scale` multiplies the bracketed emission-like factor (and the base
/// case) by a constant exp(log_scale); every choice yields the same
/// marginals and decodes, which the property tests exercise.
inline TrellisTable disc_forward(const DiscriminativeParams& params, std::span<const std::size_t> y,
                                 double log_scale = 0.0) {
  detail::check_disc_sequence(params, y);
  const std::size_t N = y.size();
  const std::size_t L = params.num_labels();

  TrellisTable trellis;
  trellis.log_values.assign(N, std::vector<double>(L, kNegInf));
  for (std::size_t x = 0; x < L; ++x) {
    trellis.log_values[0][x] = params.log_label_given_obs(0, y[0], x) + log_scale;
  }
  std::vector<double> terms(L);
  for (std::size_t t = 0; t + 1 < N; ++t) {
    for (std::size_t to = 0; to < L; ++to) {
      for (std::size_t from = 0; from < L; ++from) {
        terms[from] = trellis.log_values[t][from] + params.log_transition(t, from, to);
      }
      trellis.log_values[t + 1][to] = log_sum_exp(terms) +
                                      params.log_label_given_obs(t + 1, y[t + 1], to) -
                                      params.log_prior(t + 1, to) + log_scale;
    }
  }
  return trellis;
}

/// Discriminative backward pass, the mirror of disc_forward:
///   beta_{N-1}(x) = 1
///   beta_t(x) = sum_x' p(x'|x) [p(x' | y_{t+1}) / p_{t+1}(x')] beta_{t+1}(x')
inline TrellisTable disc_backward(const DiscriminativeParams& params,
                                  std::span<const std::size_t> y, double log_scale = 0.0) {
  detail::check_disc_sequence(params, y);
  const std::size_t N = y.size();
  const std::size_t L = params.num_labels();

  TrellisTable trellis;
  trellis.log_values.assign(N, std::vector<double>(L, 0.0));
  std::vector<double> terms(L);
  for (std::size_t t = N - 1; t-- > 0;) {
    for (std::size_t from = 0; from < L; ++from) {
      for (std::size_t to = 0; to < L; ++to) {
        terms[to] = params.log_transition(t, from, to) +
                    params.log_label_given_obs(t + 1, y[t + 1], to) -
                    params.log_prior(t + 1, to) + log_scale + trellis.log_values[t + 1][to];
      }
      trellis.log_values[t][from] = log_sum_exp(terms);
    }
  }
  return trellis;
}

/// Posterior label marginals p(x_t | y_0..y_{N-1}) computed without any
/// emission law or observation marginal.
inline std::vector<Categorical> disc_posterior_marginals(const DiscriminativeParams& params,
                                                         std::span<const std::size_t> y,
                                                         double log_scale = 0.0) {
  const TrellisTable alpha = disc_forward(params, y, log_scale);
  const TrellisTable beta = disc_backward(params, y, log_scale);
  return detail::combine_posterior_columns(alpha.log_values, beta.log_values);
}

/// Per-position argmax of disc_posterior_marginals, smallest-index ties.
inline std::vector<std::size_t> disc_mpm_decode(const DiscriminativeParams& params,
                                                std::span<const std::size_t> y,
                                                double log_scale = 0.0) {
  return detail::argmax_per_position(disc_posterior_marginals(params, y, log_scale));
}

/// Discriminative max-sum decoding:
///   delta_0(x) = p(x | y_0)
///   delta_{t+1}(x') = [p(x' | y_{t+1}) / p_{t+1}(x')] * max_x delta_t(x) p(x'|x)
///
/// Returns a maximizing path and its log score. The score is unnormalized:
/// it differs from the generative log p(x, y) by the observation-only
/// constant sum_t log p(y_t), so the argmax (and hence the path, under the
/// shared smallest-index tie-break) agrees with generative max-sum decoding
/// while the score itself is not a log probability.
inline MapResult disc_viterbi(const DiscriminativeParams& params, std::span<const std::size_t> y,
                              double log_scale = 0.0) {
  detail::check_disc_sequence(params, y);
  const std::size_t N = y.size();
  const std::size_t L = params.num_labels();

  std::vector<std::vector<double>> delta(N, std::vector<double>(L, kNegInf));
  std::vector<std::vector<std::size_t>> back(N, std::vector<std::size_t>(L, 0));
  for (std::size_t x = 0; x < L; ++x) {
    delta[0][x] = params.log_label_given_obs(0, y[0], x) + log_scale;
  }

  MapResult result;
  std::vector<double> candidates(L);
  for (std::size_t t = 0; t + 1 < N; ++t) {
    for (std::size_t to = 0; to < L; ++to) {
      for (std::size_t from = 0; from < L; ++from) {
        candidates[from] = delta[t][from] + params.log_transition(t, from, to);
      }
      const detail::ArgmaxResult best = detail::argmax_smallest(candidates);
      if (best.margin < result.min_argmax_margin) result.min_argmax_margin = best.margin;
      back[t + 1][to] = best.index;
      delta[t + 1][to] = candidates[best.index] +
                         params.log_label_given_obs(t + 1, y[t + 1], to) -
                         params.log_prior(t + 1, to) + log_scale;
    }
  }

  const detail::ArgmaxResult final_best = detail::argmax_smallest(delta[N - 1]);
  if (final_best.margin < result.min_argmax_margin) result.min_argmax_margin = final_best.margin;
  result.log_score = delta[N - 1][final_best.index];
  if (result.log_score == kNegInf) {
    throw ImpossibleEvidenceError("observation sequence has probability zero under the parameters");
  }
  result.path.assign(N, 0);
  result.path[N - 1] = final_best.index;
  for (std::size_t t = N - 1; t-- > 0;) result.path[t] = back[t + 1][result.path[t + 1]];
  return result;
}

}  // namespace chainlab

#endif  // CHAINLAB_DISCRIMINATIVE_INFERENCE_HPP
