#ifndef CHAINLAB_DISCRIMINATIVE_HPP
#define CHAINLAB_DISCRIMINATIVE_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/alphabet.hpp"
#include "chainlab/categorical.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/matrix.hpp"

namespace chainlab {

/// Whether the per-position prior marginals are consistent with the chain
/// they sit next to (p_{t+1} = p_t * T_t). Externally estimated parameters
/// (e.g. an empirical unigram reused at every position) carry kRaw and skip
/// that check.
enum class PriorConsistency { kChainConsistent, kRaw };

/// The three ingredient families of the discriminative decoders:
///   - prior label marginals p(x_t), one Categorical per position,
///   - transitions p(x_{t+1} | x_t), row-stochastic |L|x|L| per step,
///   - conditional label laws p(x_t | y_t), an |O|x|L| matrix per position
///     whose rows (indexed by the observation) are Categorical over labels.
///
/// No emission law and no observation marginal appear anywhere; these
/// parameters are all the discriminative forward-backward and Viterbi
/// routines consume.
///
/// Like HmmModel, storage is per-position (fixed length) or stationary.
class DiscriminativeParams {
 public:
  DiscriminativeParams(Alphabet label_alphabet, Alphabet obs_alphabet,
                       std::vector<Categorical> prior_marginals, std::vector<Matrix> transitions,
                       std::vector<Matrix> label_given_obs, PriorConsistency consistency)
      : labels_(std::move(label_alphabet)),
        obs_(std::move(obs_alphabet)),
        priors_(std::move(prior_marginals)),
        transitions_(std::move(transitions)),
        label_given_obs_(std::move(label_given_obs)),
        consistency_(consistency),
        stationary_(false) {
    if (priors_.empty()) throw ValidationError("per-position parameters need length >= 1");
    if (transitions_.size() + 1 != priors_.size()) {
      throw DimensionError("expected " + std::to_string(priors_.size() - 1) +
                           " transition matrices, got " + std::to_string(transitions_.size()));
    }
    if (label_given_obs_.size() != priors_.size()) {
      throw DimensionError("expected " + std::to_string(priors_.size()) +
                           " label-given-observation matrices, got " +
                           std::to_string(label_given_obs_.size()));
    }
    validate_common();
    if (consistency_ == PriorConsistency::kChainConsistent) check_chain_consistency();
  }

  static DiscriminativeParams stationary(Alphabet label_alphabet, Alphabet obs_alphabet,
                                         Categorical prior, Matrix transition,
                                         Matrix label_given_obs, PriorConsistency consistency) {
    return DiscriminativeParams(std::move(label_alphabet), std::move(obs_alphabet),
                                std::move(prior), std::move(transition),
                                std::move(label_given_obs), consistency, StationaryTag{});
  }

  bool is_stationary() const { return stationary_; }

  std::optional<std::size_t> length() const {
    if (stationary_) return std::nullopt;
    return priors_.size();
  }

  std::size_t num_labels() const { return labels_.size(); }
  std::size_t num_observations() const { return obs_.size(); }
  const Alphabet& label_alphabet() const { return labels_; }
  const Alphabet& obs_alphabet() const { return obs_; }
  PriorConsistency consistency() const { return consistency_; }
  bool chain_consistent() const { return consistency_ == PriorConsistency::kChainConsistent; }

  const Categorical& prior_at(std::size_t position) const {
    return stationary_ ? priors_[0] : priors_[position];
  }
  const Matrix& transition_at(std::size_t step) const {
    return stationary_ ? transitions_[0] : transitions_[step];
  }
  const Matrix& label_given_obs_at(std::size_t position) const {
    return stationary_ ? label_given_obs_[0] : label_given_obs_[position];
  }

  double log_prior(std::size_t position, std::size_t x) const {
    return prior_at(position).log_prob(x);
  }
  double log_transition(std::size_t step, std::size_t from, std::size_t to) const {
    return stationary_ ? log_transitions_[0](from, to) : log_transitions_[step](from, to);
  }
  /// log p(x | y) at a position; row index is the observation.
  double log_label_given_obs(std::size_t position, std::size_t y, std::size_t x) const {
    return stationary_ ? log_label_given_obs_[0](y, x) : log_label_given_obs_[position](y, x);
  }

  std::size_t check_sequence_length(std::size_t n) const {
    if (n == 0) throw DimensionError("empty sequence");
    if (!stationary_ && n != priors_.size()) {
      throw DimensionError("sequence length " + std::to_string(n) +
                           " does not match parameter length " + std::to_string(priors_.size()));
    }
    return n;
  }

 private:
  struct StationaryTag {};

  DiscriminativeParams(Alphabet label_alphabet, Alphabet obs_alphabet, Categorical prior,
                       Matrix transition, Matrix label_given_obs, PriorConsistency consistency,
                       StationaryTag)
      : labels_(std::move(label_alphabet)),
        obs_(std::move(obs_alphabet)),
        priors_{std::move(prior)},
        transitions_{std::move(transition)},
        label_given_obs_{std::move(label_given_obs)},
        consistency_(consistency),
        stationary_(true) {
    validate_common();
    // A stationary chain-consistent prior must be a fixed point of the
    // transition kernel.
    if (consistency_ == PriorConsistency::kChainConsistent) check_chain_consistency();
  }

  void validate_common() {
    if (labels_.empty() || obs_.empty()) {
      throw ValidationError("model alphabets must be nonempty");
    }
    const std::size_t L = labels_.size();
    const std::size_t O = obs_.size();
    for (const Categorical& p : priors_) {
      if (p.size() != L) {
        throw DimensionError("prior marginal has size " + std::to_string(p.size()) +
                             ", expected " + std::to_string(L));
      }
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
    for (std::size_t p = 0; p < label_given_obs_.size(); ++p) {
      const Matrix& m = label_given_obs_[p];
      if (m.rows() != O || m.cols() != L) {
        throw DimensionError("label-given-observation matrix " + std::to_string(p) + " is " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             ", expected " + std::to_string(O) + "x" + std::to_string(L));
      }
      detail::validate_stochastic_rows(m, "label-given-observation matrix " + std::to_string(p));
    }
    log_transitions_.reserve(transitions_.size());
    for (const Matrix& t : transitions_) log_transitions_.push_back(detail::log_matrix(t));
    log_label_given_obs_.reserve(label_given_obs_.size());
    for (const Matrix& m : label_given_obs_) log_label_given_obs_.push_back(detail::log_matrix(m));
  }

  void check_chain_consistency() const {
    const std::size_t L = labels_.size();
    const std::size_t steps = stationary_ ? 1 : transitions_.size();
    for (std::size_t s = 0; s < steps; ++s) {
      const Categorical& cur = stationary_ ? priors_[0] : priors_[s];
      const Categorical& nxt = stationary_ ? priors_[0] : priors_[s + 1];
      const Matrix& t = transitions_[s];
      for (std::size_t to = 0; to < L; ++to) {
        double propagated = 0.0;
        for (std::size_t from = 0; from < L; ++from) propagated += cur.prob(from) * t(from, to);
        if (std::abs(propagated - nxt.prob(to)) > kDerivedProbTolerance) {
          throw ValidationError(
              "prior marginals are not chain-consistent at step " + std::to_string(s) +
              ": propagated " + std::to_string(propagated) + " vs stored " +
              std::to_string(nxt.prob(to)) + "; construct with PriorConsistency::kRaw if intended");
        }
      }
    }
  }

  Alphabet labels_;
  Alphabet obs_;
  std::vector<Categorical> priors_;
  std::vector<Matrix> transitions_;
  std::vector<Matrix> label_given_obs_;
  std::vector<Matrix> log_transitions_;
  std::vector<Matrix> log_label_given_obs_;
  PriorConsistency consistency_;
  bool stationary_ = false;
};

}  // namespace chainlab

#endif  // CHAINLAB_DISCRIMINATIVE_HPP
