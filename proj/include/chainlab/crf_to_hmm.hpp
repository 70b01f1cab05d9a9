#ifndef CHAINLAB_CRF_TO_HMM_HPP
#define CHAINLAB_CRF_TO_HMM_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/categorical.hpp"
#include "chainlab/crf.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/log_space.hpp"
#include "chainlab/matrix.hpp"

namespace chainlab {

/// Backward suffix sums used by the chain-CRF-to-HMM construction: one
/// |labels| x |observations| matrix of log gamma_t(x, y) per position.
///
/// gamma at the last position is identically 1 (all-zero log matrix) whenever
/// the chain has at least two positions; interior tables are constant across
/// the observation axis, and the table at position 0 additionally absorbs the
/// first unary score. For a single-position chain the table is just the unary
/// score matrix, which keeps the posterior equivalence below intact.
struct GammaTable {
  std::vector<Matrix> log_gamma;

  std::size_t length() const { return log_gamma.size(); }
  const Matrix& at(std::size_t position) const {
    if (position >= log_gamma.size()) {
      throw IndexError("gamma position " + std::to_string(position) + " out of range [0, " +
                       std::to_string(log_gamma.size()) + ")");
    }
    return log_gamma[position];
  }
};

/// Backward recursion producing the suffix-sum tables:
///   gamma_{N-1}(x, y) = 1
///   gamma_t(x, y)     = sum_{(x', y')} exp[V_t(x, x') + U_{t+1}(x', y')] * gamma_{t+1}(x', y')
///                       for t = N-2 .. 1
///   gamma_0(x, y)     = exp[U_0(x, y)] * (same sum as above at t = 0)
///
/// gamma_t(x, y) is the total unnormalized mass of all (label, observation)
/// suffixes starting from label x at position t — the first unary score is
/// only folded in at position 0 because no earlier step's recursion absorbs
/// it. Everything is computed and stored in log-space.
inline GammaTable gamma_backward(const LcCrfModel& crf) {
  const std::size_t N = crf.length();
  const std::size_t L = crf.num_labels();
  const std::size_t O = crf.num_observations();

  std::vector<Matrix> log_gamma(N, Matrix(L, O, 0.0));
  if (N == 1) {
    for (std::size_t x = 0; x < L; ++x) {
      for (std::size_t y = 0; y < O; ++y) log_gamma[0](x, y) = crf.unary_score(0, x, y);
    }
    return GammaTable{std::move(log_gamma)};
  }

  std::vector<double> terms(L * O);
  for (std::size_t t = N - 1; t-- > 0;) {
    // The summand never involves y_t, so the suffix sum is one number per
    // label, replicated across the observation axis.
    for (std::size_t x = 0; x < L; ++x) {
      std::size_t k = 0;
      for (std::size_t xn = 0; xn < L; ++xn) {
        for (std::size_t yn = 0; yn < O; ++yn) {
          terms[k++] =
              crf.pairwise_score(t, x, xn) + crf.unary_score(t + 1, xn, yn) + log_gamma[t + 1](xn, yn);
        }
      }
      const double suffix = log_sum_exp(terms);
      for (std::size_t y = 0; y < O; ++y) {
        log_gamma[t](x, y) = (t == 0) ? crf.unary_score(0, x, y) + suffix : suffix;
      }
    }
  }
  return GammaTable{std::move(log_gamma)};
}

/// log psi for the step from position `step` to `step + 1`:
///   psi(x') = sum_{y'} exp[U_{step+1}(x', y')] * gamma_{step+1}(x', y'),
/// one value per label x' at position step + 1.
inline std::vector<double> log_psi(const GammaTable& gamma, const LcCrfModel& crf,
                                   std::size_t step) {
  const std::size_t N = crf.length();
  if (step + 1 >= N) {
    throw IndexError("step " + std::to_string(step) + " out of range [0, " + std::to_string(N - 1) +
                     ")");
  }
  const std::size_t L = crf.num_labels();
  const std::size_t O = crf.num_observations();
  const Matrix& g = gamma.at(step + 1);
  std::vector<double> result(L);
  std::vector<double> terms(O);
  for (std::size_t x = 0; x < L; ++x) {
    for (std::size_t y = 0; y < O; ++y) terms[y] = crf.unary_score(step + 1, x, y) + g(x, y);
    result[x] = log_sum_exp(terms);
  }
  return result;
}

namespace detail {

/// Exponentiate log-weights shifted by their log-sum, then renormalize. The
/// shift makes each row sum to 1 up to floating-point dust; anything beyond
/// kInputProbTolerance indicates a real numerical problem, not dust.
inline void exp_normalize_row(std::span<const double> log_weights, std::span<double> out,
                              const std::string& what) {
  const double log_norm = log_sum_exp(log_weights);
  double sum = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    out[i] = std::exp(log_weights[i] - log_norm);
    sum += out[i];
  }
  if (std::abs(sum - 1.0) > kInputProbTolerance) {
    throw NumericError(what + ": renormalization residual " + std::to_string(std::abs(sum - 1.0)) +
                       " exceeds tolerance");
  }
  for (std::size_t i = 0; i < log_weights.size(); ++i) out[i] /= sum;
}

}  // namespace detail

/// Build the hidden Markov model whose label posterior p(x | y) coincides,
/// for every observation sequence y, with the conditional law defined by the
/// chain CRF:
///
///   q(x_0)           proportional to sum_y gamma_0(x_0, y)
///   q(y_0 | x_0)     = gamma_0(x_0, y_0) / sum_y gamma_0(x_0, y)
///   q(x_{t+1} | x_t) proportional to psi(x_{t+1}) * exp[V_t(x_t, x_{t+1})]
///   q(y_{t+1} | x_{t+1}) = exp[U_{t+1}(x_{t+1}, y_{t+1})] * gamma_{t+1}(...) / psi(x_{t+1})
///
/// The output is per-position even for a stationary CRF, because the suffix
/// sums vary with position. Each row is computed as exact log-ratios,
/// exponentiated, and renormalized (residual beyond 1e-12 raises
/// NumericError).
inline HmmModel convert_crf_to_hmm(const LcCrfModel& crf) {
  const std::size_t N = crf.length();
  const std::size_t L = crf.num_labels();
  const std::size_t O = crf.num_observations();
  const GammaTable gamma = gamma_backward(crf);

  // Initial law and first emission row block, both from gamma_0.
  const Matrix& g0 = gamma.at(0);
  std::vector<double> log_row_sums(L);
  for (std::size_t x = 0; x < L; ++x) log_row_sums[x] = log_sum_exp(g0.row(x));
  std::vector<double> initial(L);
  detail::exp_normalize_row(log_row_sums, initial, "initial law");

  std::vector<Matrix> emissions;
  emissions.reserve(N);
  {
    Matrix em(L, O);
    std::vector<double> logits(O);
    for (std::size_t x = 0; x < L; ++x) {
      for (std::size_t y = 0; y < O; ++y) logits[y] = g0(x, y);
      detail::exp_normalize_row(logits, em.row(x), "emission row at position 0");
    }
    emissions.push_back(std::move(em));
  }

  std::vector<Matrix> transitions;
  transitions.reserve(N - 1);
  for (std::size_t t = 0; t + 1 < N; ++t) {
    const std::vector<double> psi = log_psi(gamma, crf, t);

    Matrix trans(L, L);
    std::vector<double> logits(L);
    for (std::size_t from = 0; from < L; ++from) {
      for (std::size_t to = 0; to < L; ++to) logits[to] = psi[to] + crf.pairwise_score(t, from, to);
      detail::exp_normalize_row(logits, trans.row(from),
                                "transition row at step " + std::to_string(t));
    }
    transitions.push_back(std::move(trans));

    const Matrix& g = gamma.at(t + 1);
    Matrix em(L, O);
    std::vector<double> em_logits(O);
    for (std::size_t x = 0; x < L; ++x) {
      for (std::size_t y = 0; y < O; ++y) em_logits[y] = crf.unary_score(t + 1, x, y) + g(x, y);
      detail::exp_normalize_row(em_logits, em.row(x),
                                "emission row at position " + std::to_string(t + 1));
    }
    emissions.push_back(std::move(em));
  }

  return HmmModel(crf.label_alphabet(), crf.obs_alphabet(), Categorical(std::move(initial)),
                  std::move(transitions), std::move(emissions));
}

/// The reverse embedding: an HMM's posterior is itself a chain CRF with
/// pairwise scores log p(x_{t+1} | x_t), unary scores log p(y_t | x_t), and
/// the initial law folded into the first unary score. Requires every
/// probability that gets logged to be strictly positive (a zero would need a
/// -inf potential, which the CRF type rejects).
inline LcCrfModel crf_from_hmm(const HmmModel& model, std::size_t length) {
  model.check_sequence_length(length);
  const std::size_t L = model.num_labels();
  const std::size_t O = model.num_observations();

  std::vector<Matrix> pairwise;
  pairwise.reserve(length > 0 ? length - 1 : 0);
  for (std::size_t t = 0; t + 1 < length; ++t) {
    Matrix v(L, L);
    for (std::size_t from = 0; from < L; ++from) {
      for (std::size_t to = 0; to < L; ++to) v(from, to) = model.log_transition(t, from, to);
    }
    pairwise.push_back(std::move(v));
  }

  std::vector<Matrix> unary;
  unary.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    Matrix u(L, O);
    for (std::size_t x = 0; x < L; ++x) {
      for (std::size_t y = 0; y < O; ++y) {
        u(x, y) = model.log_emission(t, x, y);
        if (t == 0) u(x, y) += model.log_initial(x);
      }
    }
    unary.push_back(std::move(u));
  }

  return LcCrfModel(model.label_alphabet(), model.obs_alphabet(), std::move(pairwise),
                    std::move(unary));
}

}  // namespace chainlab

#endif  // CHAINLAB_CRF_TO_HMM_HPP
