#ifndef CHAINLAB_RANDOM_HPP
#define CHAINLAB_RANDOM_HPP

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "chainlab/alphabet.hpp"
#include "chainlab/categorical.hpp"
#include "chainlab/crf.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/matrix.hpp"
#include "chainlab/potential_chain.hpp"

/// Deterministic generators for randomized test instances.
///
/// All draws go through uniform_unit, which maps raw mt19937_64 output to
/// [0, 1) by fixed bit arithmetic. Standard-library distributions are
/// avoided on purpose: their output may differ across standard library
/// implementations, and seeded suites must reproduce identically everywhere.
namespace chainlab::rnd {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1): the top 53 bits of one raw draw.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Uniform index in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(n));
  return i < n ? i : n - 1;
}

/// Alphabet {prefix0, prefix1, ...}.
inline Alphabet indexed_alphabet(const std::string& prefix, std::size_t n) {
  std::vector<std::string> symbols;
  symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) symbols.push_back(prefix + std::to_string(i));
  return Alphabet(std::move(symbols));
}

/// Random strictly positive distribution: each raw weight is at least
/// min_mass before normalization, so no entry can come out zero.
inline Categorical random_categorical(Rng& rng, std::size_t n, double min_mass = 0.1) {
  std::vector<double> weights(n);
  double sum = 0.0;
  for (double& w : weights) {
    w = min_mass + uniform_unit(rng);
    sum += w;
  }
  for (double& w : weights) w /= sum;
  return Categorical(std::move(weights));
}

inline Matrix random_stochastic(Rng& rng, std::size_t rows, std::size_t cols,
                                double min_mass = 0.1) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Categorical row = random_categorical(rng, cols, min_mass);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row.prob(c);
  }
  return m;
}

inline Matrix random_scores(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = uniform_in(rng, lo, hi);
  }
  return m;
}

/// Per-position HMM with strictly positive rows.
inline HmmModel random_hmm(Rng& rng, std::size_t length, std::size_t num_labels,
                           std::size_t num_obs, double min_mass = 0.1) {
  std::vector<Matrix> transitions;
  transitions.reserve(length - 1);
  for (std::size_t t = 0; t + 1 < length; ++t) {
    transitions.push_back(random_stochastic(rng, num_labels, num_labels, min_mass));
  }
  std::vector<Matrix> emissions;
  emissions.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    emissions.push_back(random_stochastic(rng, num_labels, num_obs, min_mass));
  }
  return HmmModel(indexed_alphabet("x", num_labels), indexed_alphabet("y", num_obs),
                  random_categorical(rng, num_labels, min_mass), std::move(transitions),
                  std::move(emissions));
}

inline HmmModel random_stationary_hmm(Rng& rng, std::size_t num_labels, std::size_t num_obs,
                                      double min_mass = 0.1) {
  return HmmModel::stationary(indexed_alphabet("x", num_labels), indexed_alphabet("y", num_obs),
                              random_categorical(rng, num_labels, min_mass),
                              random_stochastic(rng, num_labels, num_labels, min_mass),
                              random_stochastic(rng, num_labels, num_obs, min_mass));
}

/// Per-position chain CRF with scores i.i.d. uniform on [lo, hi].
inline LcCrfModel random_crf(Rng& rng, std::size_t length, std::size_t num_labels,
                             std::size_t num_obs, double lo = -2.0, double hi = 2.0) {
  std::vector<Matrix> pairwise;
  pairwise.reserve(length - 1);
  for (std::size_t t = 0; t + 1 < length; ++t) {
    pairwise.push_back(random_scores(rng, num_labels, num_labels, lo, hi));
  }
  std::vector<Matrix> unary;
  unary.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    unary.push_back(random_scores(rng, num_labels, num_obs, lo, hi));
  }
  return LcCrfModel(indexed_alphabet("x", num_labels), indexed_alphabet("y", num_obs),
                    std::move(pairwise), std::move(unary));
}

inline PotentialChain random_potential_chain(Rng& rng, std::size_t length, std::size_t num_states,
                                             double lo = -2.0, double hi = 2.0) {
  std::vector<Matrix> potentials;
  potentials.reserve(length - 1);
  for (std::size_t t = 0; t + 1 < length; ++t) {
    potentials.push_back(random_scores(rng, num_states, num_states, lo, hi));
  }
  return PotentialChain(indexed_alphabet("w", num_states), std::move(potentials));
}

inline std::vector<std::size_t> random_indices(Rng& rng, std::size_t length, std::size_t bound) {
  std::vector<std::size_t> out(length);
  for (std::size_t& v : out) v = uniform_index(rng, bound);
  return out;
}

}  // namespace chainlab::rnd

#endif  // CHAINLAB_RANDOM_HPP
