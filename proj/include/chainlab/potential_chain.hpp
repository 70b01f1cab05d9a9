#ifndef CHAINLAB_POTENTIAL_CHAIN_HPP
#define CHAINLAB_POTENTIAL_CHAIN_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/alphabet.hpp"
#include "chainlab/categorical.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/log_space.hpp"
#include "chainlab/matrix.hpp"

namespace chainlab {

/// A chain of strictly positive pairwise potentials phi_0..phi_{N-2} over a
/// common state alphabet, stored as log-potentials. Such a chain determines a
/// Markov chain whose joint law is proportional to the product of the
/// potentials; markov_from_potentials() recovers that chain explicitly.
///
/// Potentials cross this boundary in log-space only; entries must be finite
/// (a zero potential has no finite log and is rejected up front, since the
/// normalization below divides by the backward sums).
class PotentialChain {
 public:
  PotentialChain(Alphabet state_alphabet, std::vector<Matrix> log_potentials)
      : states_(std::move(state_alphabet)), log_potentials_(std::move(log_potentials)) {
    if (states_.empty()) throw ValidationError("state alphabet must be nonempty");
    const std::size_t D = states_.size();
    for (std::size_t s = 0; s < log_potentials_.size(); ++s) {
      const Matrix& m = log_potentials_[s];
      if (m.rows() != D || m.cols() != D) {
        throw DimensionError("potential matrix " + std::to_string(s) + " is " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             ", expected " + std::to_string(D) + "x" + std::to_string(D));
      }
      if (!m.all_finite()) {
        throw ValidationError("potential matrix " + std::to_string(s) +
                              " has a non-finite log entry; potentials must be strictly "
                              "positive and finite");
      }
    }
  }

  /// Number of positions N (one more than the number of potential matrices).
  std::size_t length() const { return log_potentials_.size() + 1; }
  std::size_t num_states() const { return states_.size(); }
  const Alphabet& state_alphabet() const { return states_; }
  const std::vector<Matrix>& log_potentials() const { return log_potentials_; }

  /// log phi_s(from, to) for the step from position s to s+1.
  double log_potential(std::size_t step, std::size_t from, std::size_t to) const {
    if (step >= log_potentials_.size()) {
      throw IndexError("potential step " + std::to_string(step) + " out of range [0, " +
                       std::to_string(log_potentials_.size()) + ")");
    }
    return log_potentials_[step].at(from, to);
  }

 private:
  Alphabet states_;
  std::vector<Matrix> log_potentials_;
};

/// A finite-horizon Markov chain: initial law plus one row-stochastic
/// transition matrix per step.
struct MarkovChain {
  Categorical initial;
  std::vector<Matrix> transitions;

  /// log p(w) of a full-length path under the chain.
  double path_log_prob(std::span<const std::size_t> path) const {
    if (path.size() != transitions.size() + 1) {
      throw DimensionError("path length " + std::to_string(path.size()) +
                           " does not match chain length " +
                           std::to_string(transitions.size() + 1));
    }
    double total = initial.log_prob(path[0]);
    for (std::size_t s = 0; s < transitions.size(); ++s) {
      total += safe_log(transitions[s].at(path[s], path[s + 1]));
    }
    return total;
  }
};

/// Backward pass over the potentials: one log-beta vector per position.
///
/// beta at the last position is identically 1, and earlier positions
/// accumulate beta_t(w) = sum_{w'} phi_t(w, w') * beta_{t+1}(w'), evaluated in
/// log-space. beta_t(w) is the total potential mass of all suffixes starting
/// in state w at position t.
inline std::vector<std::vector<double>> potential_backward(const PotentialChain& chain) {
  const std::size_t N = chain.length();
  const std::size_t D = chain.num_states();
  std::vector<std::vector<double>> log_beta(N, std::vector<double>(D, 0.0));
  std::vector<double> terms(D);
  for (std::size_t t = N - 1; t-- > 0;) {
    const Matrix& phi = chain.log_potentials()[t];
    for (std::size_t w = 0; w < D; ++w) {
      for (std::size_t next = 0; next < D; ++next) {
        terms[next] = phi(w, next) + log_beta[t + 1][next];
      }
      log_beta[t][w] = log_sum_exp(terms);
    }
  }
  return log_beta;
}

/// Recover the Markov chain induced by a potential chain:
///   p(w_0)          = beta_0(w_0) / sum_w beta_0(w)
///   p(w_{t+1}|w_t)  = phi_t(w_t, w_{t+1}) * beta_{t+1}(w_{t+1}) / beta_t(w_t)
///
/// The induced joint p(w_0) * prod_t p(w_{t+1}|w_t) is proportional to the
/// product of the potentials along the path. Rows are normalized explicitly
/// so each transition row sums to exactly 1 in floating point.
inline MarkovChain markov_from_potentials(const PotentialChain& chain) {
  const std::size_t N = chain.length();
  const std::size_t D = chain.num_states();
  const std::vector<std::vector<double>> log_beta = potential_backward(chain);

  std::vector<double> initial(D);
  const double log_norm = log_sum_exp(log_beta[0]);
  double initial_sum = 0.0;
  for (std::size_t w = 0; w < D; ++w) {
    initial[w] = std::exp(log_beta[0][w] - log_norm);
    initial_sum += initial[w];
  }
  for (double& p : initial) p /= initial_sum;

  std::vector<Matrix> transitions;
  transitions.reserve(N - 1);
  for (std::size_t t = 0; t + 1 < N; ++t) {
    const Matrix& phi = chain.log_potentials()[t];
    Matrix trans(D, D);
    for (std::size_t from = 0; from < D; ++from) {
      double row_sum = 0.0;
      for (std::size_t to = 0; to < D; ++to) {
        trans(from, to) = std::exp(phi(from, to) + log_beta[t + 1][to] - log_beta[t][from]);
        row_sum += trans(from, to);
      }
      for (std::size_t to = 0; to < D; ++to) trans(from, to) /= row_sum;
    }
    transitions.push_back(std::move(trans));
  }

  return MarkovChain{Categorical(std::move(initial)), std::move(transitions)};
}

}  // namespace chainlab

#endif  // CHAINLAB_POTENTIAL_CHAIN_HPP
