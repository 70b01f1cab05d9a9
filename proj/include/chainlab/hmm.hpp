#ifndef CHAINLAB_HMM_HPP
#define CHAINLAB_HMM_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/alphabet.hpp"
#include "chainlab/categorical.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/log_space.hpp"
#include "chainlab/matrix.hpp"

namespace chainlab {

namespace detail {

/// Every row must be a valid probability distribution (input tolerance).
inline void validate_stochastic_rows(const Matrix& m, const std::string& what) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    try {
      Categorical row(std::vector<double>(m.row(r).begin(), m.row(r).end()));
    } catch (const ValidationError& e) {
      throw ValidationError(what + ", row " + std::to_string(r) + ": " + e.what());
    }
  }
}

inline Matrix log_matrix(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = safe_log(m(r, c));
  }
  return out;
}

}  // namespace detail

/// Hidden Markov model over label alphabet L and observation alphabet O:
/// an initial law p(x_1), row-stochastic transition matrices p(x_{t+1}|x_t)
/// and row-stochastic emission matrices p(y_t|x_t).
///
/// Storage is either per-position (a fixed length N with one transition
/// matrix per step and one emission matrix per position) or stationary (one
/// matrix of each kind, reused at every step; such a model accepts sequences
/// of any length). transition_at()/emission_at() hide the difference.
///
/// Positions are 0-based: t = 0..N-1. Transition step s connects position s
/// to position s+1, s = 0..N-2.
///
/// Probabilities are kept in linear space exactly as supplied (that is what
/// serialization writes back) alongside precomputed elementwise logs used by
/// the inference routines.
class HmmModel {
 public:
  /// Per-position model. transitions.size() == emissions.size() - 1.
  HmmModel(Alphabet label_alphabet, Alphabet obs_alphabet, Categorical initial,
           std::vector<Matrix> transitions, std::vector<Matrix> emissions)
      : labels_(std::move(label_alphabet)),
        obs_(std::move(obs_alphabet)),
        initial_(std::move(initial)),
        transitions_(std::move(transitions)),
        emissions_(std::move(emissions)),
        stationary_(false) {
    if (emissions_.empty()) throw ValidationError("per-position model needs length >= 1");
    if (transitions_.size() + 1 != emissions_.size()) {
      throw DimensionError("expected " + std::to_string(emissions_.size() - 1) +
                           " transition matrices, got " + std::to_string(transitions_.size()));
    }
    validate_common();
  }

  /// Stationary model: one transition and one emission matrix, any length.
  static HmmModel stationary(Alphabet label_alphabet, Alphabet obs_alphabet,
                             Categorical initial, Matrix transition, Matrix emission) {
    return HmmModel(std::move(label_alphabet), std::move(obs_alphabet), std::move(initial),
                    std::move(transition), std::move(emission), StationaryTag{});
  }

  bool is_stationary() const { return stationary_; }

  /// Fixed length for per-position models; nullopt for stationary ones.
  std::optional<std::size_t> length() const {
    if (stationary_) return std::nullopt;
    return emissions_.size();
  }

  std::size_t num_labels() const { return labels_.size(); }
  std::size_t num_observations() const { return obs_.size(); }
  const Alphabet& label_alphabet() const { return labels_; }
  const Alphabet& obs_alphabet() const { return obs_; }

  const Categorical& initial() const { return initial_; }

  const Matrix& transition_at(std::size_t step) const {
    return stationary_ ? transitions_[0] : transitions_[step];
  }
  const Matrix& emission_at(std::size_t position) const {
    return stationary_ ? emissions_[0] : emissions_[position];
  }

  double log_initial(std::size_t x) const { return initial_.log_prob(x); }
  double log_transition(std::size_t step, std::size_t from, std::size_t to) const {
    return stationary_ ? log_transitions_[0](from, to) : log_transitions_[step](from, to);
  }
  double log_emission(std::size_t position, std::size_t x, std::size_t y) const {
    return stationary_ ? log_emissions_[0](x, y) : log_emissions_[position](x, y);
  }

  /// Throws unless the model can score a sequence of length n. Returns n.
  std::size_t check_sequence_length(std::size_t n) const {
    if (n == 0) throw DimensionError("empty sequence");
    if (!stationary_ && n != emissions_.size()) {
      throw DimensionError("sequence length " + std::to_string(n) +
                           " does not match model length " + std::to_string(emissions_.size()));
    }
    return n;
  }

 private:
  struct StationaryTag {};

  HmmModel(Alphabet label_alphabet, Alphabet obs_alphabet, Categorical initial,
           Matrix transition, Matrix emission, StationaryTag)
      : labels_(std::move(label_alphabet)),
        obs_(std::move(obs_alphabet)),
        initial_(std::move(initial)),
        transitions_{std::move(transition)},
        emissions_{std::move(emission)},
        stationary_(true) {
    validate_common();
  }

  void validate_common() {
    if (labels_.empty() || obs_.empty()) {
      throw ValidationError("model alphabets must be nonempty");
    }
    const std::size_t L = labels_.size();
    const std::size_t O = obs_.size();
    if (initial_.size() != L) {
      throw DimensionError("initial law has size " + std::to_string(initial_.size()) +
                           ", expected " + std::to_string(L));
    }
    for (std::size_t s = 0; s < transitions_.size(); ++s) {
      const Matrix& t = transitions_[s];
      if (t.rows() != L || t.cols() != L) {
        throw DimensionError("transition matrix " + std::to_string(s) + " is " +
                             std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                             ", expected " + std::to_string(L) + "x" + std::to_string(L));
      }
      detail::validate_stochastic_rows(t, "transition matrix " + std::to_string(s));
    }
    for (std::size_t p = 0; p < emissions_.size(); ++p) {
      const Matrix& e = emissions_[p];
      if (e.rows() != L || e.cols() != O) {
        throw DimensionError("emission matrix " + std::to_string(p) + " is " +
                             std::to_string(e.rows()) + "x" + std::to_string(e.cols()) +
                             ", expected " + std::to_string(L) + "x" + std::to_string(O));
      }
      detail::validate_stochastic_rows(e, "emission matrix " + std::to_string(p));
    }
    log_transitions_.reserve(transitions_.size());
    for (const Matrix& t : transitions_) log_transitions_.push_back(detail::log_matrix(t));
    log_emissions_.reserve(emissions_.size());
    for (const Matrix& e : emissions_) log_emissions_.push_back(detail::log_matrix(e));
  }

  Alphabet labels_;
  Alphabet obs_;
  Categorical initial_;
  std::vector<Matrix> transitions_;
  std::vector<Matrix> emissions_;
  std::vector<Matrix> log_transitions_;
  std::vector<Matrix> log_emissions_;
  bool stationary_ = false;
};

namespace detail {

inline void check_indices(std::span<const std::size_t> seq, std::size_t bound,
                          const std::string& what) {
  for (std::size_t v : seq) {
    if (v >= bound) {
      throw IndexError(what + " index " + std::to_string(v) + " out of range (size " +
                       std::to_string(bound) + ")");
    }
  }
}

}  // namespace detail

/// log p(x, y) under the model: initial times emissions times transitions,
/// all in log space. -inf when any factor is zero.
inline double hmm_joint_log_prob(const HmmModel& model, std::span<const std::size_t> labels,
                                 std::span<const std::size_t> observations) {
  if (labels.size() != observations.size()) {
    throw DimensionError("label sequence length " + std::to_string(labels.size()) +
                         " != observation sequence length " +
                         std::to_string(observations.size()));
  }
  const std::size_t n = model.check_sequence_length(labels.size());
  detail::check_indices(labels, model.num_labels(), "label");
  detail::check_indices(observations, model.num_observations(), "observation");

  double log_p = model.log_initial(labels[0]) + model.log_emission(0, labels[0], observations[0]);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    log_p += model.log_transition(t, labels[t], labels[t + 1]);
    log_p += model.log_emission(t + 1, labels[t + 1], observations[t + 1]);
  }
  return log_p;
}

}  // namespace chainlab

#endif  // CHAINLAB_HMM_HPP
