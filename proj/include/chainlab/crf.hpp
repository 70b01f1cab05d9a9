#ifndef CHAINLAB_CRF_HPP
#define CHAINLAB_CRF_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/alphabet.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/log_space.hpp"
#include "chainlab/matrix.hpp"

namespace chainlab {

/// Linear-chain conditional random field of fixed length N:
///
///   p(x | y) = exp[ sum_s V_s(x_s, x_{s+1}) + sum_t U_t(x_t, y_t) ] / kappa(y)
///
/// with pairwise potentials V_s (|L|x|L|, steps s = 0..N-2) and unary
/// potentials U_t (|L|x|O|, positions t = 0..N-1). Potentials are
/// unconstrained finite log-space scores.
class LcCrfModel {
 public:
  LcCrfModel(Alphabet label_alphabet, Alphabet obs_alphabet, std::vector<Matrix> pairwise,
             std::vector<Matrix> unary)
      : labels_(std::move(label_alphabet)),
        obs_(std::move(obs_alphabet)),
        pairwise_(std::move(pairwise)),
        unary_(std::move(unary)) {
    if (labels_.empty() || obs_.empty()) {
      throw ValidationError("model alphabets must be nonempty");
    }
    if (unary_.empty()) throw ValidationError("a CRF needs length >= 1");
    if (pairwise_.size() + 1 != unary_.size()) {
      throw DimensionError("expected " + std::to_string(unary_.size() - 1) +
                           " pairwise potential matrices, got " +
                           std::to_string(pairwise_.size()));
    }
    const std::size_t L = labels_.size();
    const std::size_t O = obs_.size();
    for (std::size_t s = 0; s < pairwise_.size(); ++s) {
      const Matrix& v = pairwise_[s];
      if (v.rows() != L || v.cols() != L) {
        throw DimensionError("pairwise potential " + std::to_string(s) + " is " +
                             std::to_string(v.rows()) + "x" + std::to_string(v.cols()) +
                             ", expected " + std::to_string(L) + "x" + std::to_string(L));
      }
      if (!v.all_finite()) {
        throw ValidationError("pairwise potential " + std::to_string(s) +
                              " has a non-finite entry");
      }
    }
    for (std::size_t t = 0; t < unary_.size(); ++t) {
      const Matrix& u = unary_[t];
      if (u.rows() != L || u.cols() != O) {
        throw DimensionError("unary potential " + std::to_string(t) + " is " +
                             std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                             ", expected " + std::to_string(L) + "x" + std::to_string(O));
      }
      if (!u.all_finite()) {
        throw ValidationError("unary potential " + std::to_string(t) +
                              " has a non-finite entry");
      }
    }
  }

  /// Convenience for stationary potentials: the shared matrices are
  /// replicated to the requested length.
  static LcCrfModel stationary(Alphabet label_alphabet, Alphabet obs_alphabet, Matrix pairwise,
                               Matrix unary, std::size_t length) {
    if (length == 0) throw ValidationError("a CRF needs length >= 1");
    std::vector<Matrix> vs(length >= 1 ? length - 1 : 0, pairwise);
    std::vector<Matrix> us(length, unary);
    return LcCrfModel(std::move(label_alphabet), std::move(obs_alphabet), std::move(vs),
                      std::move(us));
  }

  std::size_t length() const { return unary_.size(); }
  std::size_t num_labels() const { return labels_.size(); }
  std::size_t num_observations() const { return obs_.size(); }
  const Alphabet& label_alphabet() const { return labels_; }
  const Alphabet& obs_alphabet() const { return obs_; }

  const Matrix& pairwise_at(std::size_t step) const { return pairwise_[step]; }
  const Matrix& unary_at(std::size_t position) const { return unary_[position]; }

  double pairwise_score(std::size_t step, std::size_t from, std::size_t to) const {
    return pairwise_[step](from, to);
  }
  double unary_score(std::size_t position, std::size_t x, std::size_t y) const {
    return unary_[position](x, y);
  }

  std::size_t check_sequence_length(std::size_t n) const {
    if (n != unary_.size()) {
      throw DimensionError("sequence length " + std::to_string(n) +
                           " does not match CRF length " + std::to_string(unary_.size()));
    }
    return n;
  }

 private:
  Alphabet labels_;
  Alphabet obs_;
  std::vector<Matrix> pairwise_;
  std::vector<Matrix> unary_;
};

/// The bracket of the CRF law before normalization:
/// sum of pairwise scores along (x_t, x_{t+1}) plus unary scores at (x_t, y_t).
inline double crf_unnormalized_log_score(const LcCrfModel& model,
                                         std::span<const std::size_t> labels,
                                         std::span<const std::size_t> observations) {
  if (labels.size() != observations.size()) {
    throw DimensionError("label sequence length " + std::to_string(labels.size()) +
                         " != observation sequence length " +
                         std::to_string(observations.size()));
  }
  const std::size_t n = model.check_sequence_length(labels.size());
  detail::check_indices(labels, model.num_labels(), "label");
  detail::check_indices(observations, model.num_observations(), "observation");

  double score = 0.0;
  for (std::size_t t = 0; t < n; ++t) score += model.unary_score(t, labels[t], observations[t]);
  for (std::size_t s = 0; s + 1 < n; ++s) {
    score += model.pairwise_score(s, labels[s], labels[s + 1]);
  }
  return score;
}

/// log kappa(y): log of the sum over all label paths of the exponentiated
/// score, computed by a forward pass with log-sum-exp (never by enumeration).
inline double crf_log_partition(const LcCrfModel& model,
                                std::span<const std::size_t> observations) {
  const std::size_t n = model.check_sequence_length(observations.size());
  detail::check_indices(observations, model.num_observations(), "observation");
  const std::size_t L = model.num_labels();

  std::vector<double> alpha(L), next(L), terms(L);
  for (std::size_t x = 0; x < L; ++x) alpha[x] = model.unary_score(0, x, observations[0]);
  for (std::size_t s = 0; s + 1 < n; ++s) {
    for (std::size_t to = 0; to < L; ++to) {
      for (std::size_t from = 0; from < L; ++from) {
        terms[from] = alpha[from] + model.pairwise_score(s, from, to);
      }
      next[to] = log_sum_exp(terms) + model.unary_score(s + 1, to, observations[s + 1]);
    }
    alpha.swap(next);
  }
  return log_sum_exp(alpha);
}

/// log p(x | y) = score - log kappa(y).
inline double crf_posterior_log_prob(const LcCrfModel& model, std::span<const std::size_t> labels,
                                     std::span<const std::size_t> observations) {
  return crf_unnormalized_log_score(model, labels, observations) -
         crf_log_partition(model, observations);
}

}  // namespace chainlab

#endif  // CHAINLAB_CRF_HPP
