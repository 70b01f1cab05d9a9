#ifndef CHAINLAB_VERIFY_HPP
#define CHAINLAB_VERIFY_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chainlab/crf.hpp"
#include "chainlab/crf_to_hmm.hpp"
#include "chainlab/discriminative.hpp"
#include "chainlab/discriminative_inference.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/hmm_inference.hpp"
#include "chainlab/log_space.hpp"
#include "chainlab/oracle.hpp"
#include "chainlab/potential_chain.hpp"
#include "chainlab/random.hpp"
#include "chainlab/serialize.hpp"

/// Certification checks: randomized cross-validation of every equivalence
/// the library claims, against the enumeration oracle and across
/// independent algorithms. The CLI `verify` command and the acceptance
/// harness both run exactly these functions, so "verified" means the same
/// thing everywhere.
namespace chainlab::verify {

/// Absolute tolerance on probabilities compared across algorithms/oracles.
inline constexpr double kProbTol = 1e-10;
/// Absolute tolerance on log-score comparisons across decoders.
inline constexpr double kLogScoreTol = 1e-10;
/// Relative tolerance for forward-backward column-sum constancy.
inline constexpr double kConstancyRelTol = 1e-9;
/// Tolerance on the standard deviation of per-path log-ratios.
inline constexpr double kProportionalityTol = 1e-10;
/// An argmax decision counts as tie-free when the winner leads every rival
/// by more than this margin; only such decodes are required to agree
/// path-for-path across algorithms.
inline constexpr double kUniqueArgmaxMargin = 1e-9;
/// Wall-clock budget per sequence for the large-instance check.
inline constexpr double kLargeInstanceSecondsPerSeq = 5.0;

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const CheckResult& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckResult& c : checks) {
      nlohmann::json item;
      item["name"] = c.name;
      item["passed"] = c.passed;
      item["max_deviation"] = c.max_deviation;
      item["tolerance"] = c.tolerance;
      item["cases"] = c.cases;
      item["note"] = c.note;
      arr.push_back(std::move(item));
    }
    nlohmann::json j;
    j["checks"] = std::move(arr);
    j["all_passed"] = all_passed();
    return j;
  }
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

/// All observation sequences when the space is small, otherwise a fixed
/// number of sampled ones.
inline std::vector<std::vector<std::size_t>> observation_suite(std::size_t num_obs,
                                                               std::size_t length, rnd::Rng& rng,
                                                               std::size_t exhaustive_cap = 4096,
                                                               std::size_t sample_count = 50) {
  const double total = std::pow(static_cast<double>(num_obs), static_cast<double>(length));
  if (total <= static_cast<double>(exhaustive_cap)) {
    return oracle::index_tuples(num_obs, length);
  }
  std::vector<std::vector<std::size_t>> sampled;
  sampled.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    sampled.push_back(rnd::random_indices(rng, length, num_obs));
  }
  return sampled;
}

inline void track(CheckResult& r, double deviation) {
  if (deviation > r.max_deviation) r.max_deviation = deviation;
}

struct SuiteSizes {
  std::size_t length;
  std::size_t num_labels;
  std::size_t num_obs;
};

inline SuiteSizes draw_sizes(rnd::Rng& rng) {
  return SuiteSizes{2 + rnd::uniform_index(rng, 4), 1 + rnd::uniform_index(rng, 3),
                    1 + rnd::uniform_index(rng, 3)};
}

/// Shared generator for the random-HMM suite so that the equivalence,
/// decoder-agreement, and forward-backward checks all see the same models
/// for the same seed.
inline std::pair<HmmModel, std::vector<std::vector<std::size_t>>> draw_hmm_case(rnd::Rng& rng) {
  const SuiteSizes s = draw_sizes(rng);
  HmmModel model = rnd::random_hmm(rng, s.length, s.num_labels, s.num_obs);
  rnd::Rng ys_rng(rng());
  auto ys = observation_suite(s.num_obs, s.length, ys_rng);
  return {std::move(model), std::move(ys)};
}

}  // namespace detail

/// Check 1: converting a random chain CRF to an HMM preserves the posterior,
/// with both posteriors computed by the enumeration oracle.
inline CheckResult check_crf_hmm_equivalence(std::uint64_t seed, std::size_t num_models = 100) {
  rnd::Rng rng(seed);
  CheckResult r;
  r.name = "crf-to-hmm posterior equivalence (oracle both sides)";
  r.tolerance = kProbTol;
  for (std::size_t i = 0; i < num_models; ++i) {
    const detail::SuiteSizes s = detail::draw_sizes(rng);
    const LcCrfModel crf = rnd::random_crf(rng, s.length, s.num_labels, s.num_obs, -2.0, 2.0);
    const HmmModel hmm = convert_crf_to_hmm(crf);
    for (const auto& y : oracle::index_tuples(s.num_obs, s.length)) {
      const std::vector<double> crf_post = oracle::crf_posterior_table(crf, y);
      const std::vector<double> hmm_post = oracle::posterior_table(hmm, y);
      for (std::size_t k = 0; k < crf_post.size(); ++k) {
        detail::track(r, std::abs(crf_post[k] - hmm_post[k]));
      }
      ++r.cases;
    }
  }
  r.passed = r.max_deviation < r.tolerance;
  return r;
}

/// Check 2: discriminative forward-backward marginals on parameters derived
/// from a random HMM equal the generative posterior marginals.
inline CheckResult check_disc_generative_equivalence(std::uint64_t seed,
                                                     std::size_t num_models = 200) {
  rnd::Rng rng(seed);
  CheckResult r;
  r.name = "discriminative vs generative posterior marginals";
  r.tolerance = kProbTol;
  for (std::size_t i = 0; i < num_models; ++i) {
    const auto [model, ys] = detail::draw_hmm_case(rng);
    const DiscriminativeParams params = derive_disc_params(model);
    for (const auto& y : ys) {
      const std::vector<Categorical> gen = posterior_marginals(model, y);
      const std::vector<Categorical> disc = disc_posterior_marginals(params, y);
      for (std::size_t t = 0; t < gen.size(); ++t) {
        for (std::size_t x = 0; x < gen[t].size(); ++x) {
          detail::track(r, std::abs(gen[t].prob(x) - disc[t].prob(x)));
        }
      }
      ++r.cases;
    }
  }
  r.passed = r.max_deviation < r.tolerance;
  return r;
}

/// Check 3: the discriminative max-sum path attains the generative max-sum
/// score; on tie-free decodes the paths are identical.
inline CheckResult check_disc_viterbi_agreement(std::uint64_t seed, std::size_t num_models = 200) {
  rnd::Rng rng(seed);
  CheckResult r;
  r.name = "discriminative vs generative max-sum decoding";
  r.tolerance = kLogScoreTol;
  std::size_t tie_free = 0;
  std::size_t path_mismatches = 0;
  for (std::size_t i = 0; i < num_models; ++i) {
    const auto [model, ys] = detail::draw_hmm_case(rng);
    const DiscriminativeParams params = derive_disc_params(model);
    for (const auto& y : ys) {
      const MapResult gen = map_decode(model, y);
      const MapResult disc = disc_viterbi(params, y);
      detail::track(r, std::abs(hmm_joint_log_prob(model, disc.path, y) - gen.log_score));
      if (gen.min_argmax_margin > kUniqueArgmaxMargin &&
          disc.min_argmax_margin > kUniqueArgmaxMargin) {
        ++tie_free;
        if (gen.path != disc.path) ++path_mismatches;
      }
      ++r.cases;
    }
  }
  r.note = "paths identical on " + std::to_string(tie_free - path_mismatches) + "/" +
           std::to_string(tie_free) + " tie-free decodes";
  r.passed = r.max_deviation < r.tolerance && path_mismatches == 0;
  return r;
}

/// Check 4: the Markov chain recovered from random positive potentials has a
/// joint law proportional to the potential product (per-path log-ratio
/// standard deviation over all paths).
inline CheckResult check_potential_chain_proportionality(std::uint64_t seed, std::size_t num_chains = 100) {
  rnd::Rng rng(seed);
  CheckResult r;
  r.name = "potential chain to Markov chain proportionality";
  r.tolerance = kProportionalityTol;
  for (std::size_t i = 0; i < num_chains; ++i) {
    const std::size_t N = 2 + rnd::uniform_index(rng, 4);
    const std::size_t D = 1 + rnd::uniform_index(rng, 4);
    const PotentialChain chain = rnd::random_potential_chain(rng, N, D);
    const MarkovChain mc = markov_from_potentials(chain);

    std::vector<double> log_ratios;
    for (const auto& path : oracle::index_tuples(D, N)) {
      double log_product = 0.0;
      for (std::size_t t = 0; t + 1 < N; ++t) {
        log_product += chain.log_potential(t, path[t], path[t + 1]);
      }
      log_ratios.push_back(mc.path_log_prob(path) - log_product);
    }
    double mean = 0.0;
    for (double v : log_ratios) mean += v;
    mean /= static_cast<double>(log_ratios.size());
    double var = 0.0;
    for (double v : log_ratios) var += (v - mean) * (v - mean);
    var /= static_cast<double>(log_ratios.size());
    detail::track(r, std::sqrt(var));
    ++r.cases;
  }
  r.passed = r.max_deviation < r.tolerance;
  return r;
}

/// Check 5: forward-backward column sums are constant across positions
/// (relative) and equal the enumerated sequence probability (absolute), on
/// the same random-HMM suite as check 2.
inline CheckResult check_forward_backward(std::uint64_t seed, std::size_t num_models = 200) {
  rnd::Rng rng(seed);
  CheckResult r;
  r.name = "forward-backward column sums vs enumerated evidence";
  r.tolerance = kProbTol;
  double max_rel_constancy = 0.0;
  for (std::size_t i = 0; i < num_models; ++i) {
    const auto [model, ys] = detail::draw_hmm_case(rng);
    for (const auto& y : ys) {
      const TrellisTable alpha = forward(model, y);
      const TrellisTable beta = backward(model, y);
      const std::size_t N = y.size();
      const std::size_t L = model.num_labels();
      std::vector<double> column(L);
      std::vector<double> log_sums(N);
      for (std::size_t t = 0; t < N; ++t) {
        for (std::size_t x = 0; x < L; ++x) {
          column[x] = alpha.log_values[t][x] + beta.log_values[t][x];
        }
        log_sums[t] = log_sum_exp(column);
      }
      for (std::size_t t = 1; t < N; ++t) {
        const double rel = std::abs(std::exp(log_sums[t] - log_sums[0]) - 1.0);
        if (rel > max_rel_constancy) max_rel_constancy = rel;
      }
      detail::track(r, std::abs(std::exp(log_sums[0]) - oracle::sequence_prob(model, y)));
      ++r.cases;
    }
  }
  r.note = "max relative column-sum drift " + detail::sci(max_rel_constancy) + " (tol " +
           detail::sci(kConstancyRelTol) + ")";
  r.passed = r.max_deviation < r.tolerance && max_rel_constancy < kConstancyRelTol;
  return r;
}

/// Check 6: scaling the label-given-observation factor by a positive
/// constant changes neither the marginals nor any decoded sequence.
inline CheckResult check_scale_invariance(std::uint64_t seed, std::size_t num_models = 50) {
  rnd::Rng rng(seed);
  CheckResult r;
  r.name = "constant-factor invariance of discriminative inference";
  r.tolerance = kProbTol;
  const double scales[] = {1e-6, 1.0, 1e6};
  for (std::size_t i = 0; i < num_models; ++i) {
    const auto [model, ys] = detail::draw_hmm_case(rng);
    const DiscriminativeParams params = derive_disc_params(model);
    for (const auto& y : ys) {
      const std::vector<Categorical> base = disc_posterior_marginals(params, y);
      const std::vector<std::size_t> base_mpm = disc_mpm_decode(params, y);
      const MapResult base_map = disc_viterbi(params, y);
      for (double c : scales) {
        const double log_scale = std::log(c);
        const std::vector<Categorical> scaled = disc_posterior_marginals(params, y, log_scale);
        for (std::size_t t = 0; t < base.size(); ++t) {
          for (std::size_t x = 0; x < base[t].size(); ++x) {
            detail::track(r, std::abs(base[t].prob(x) - scaled[t].prob(x)));
          }
        }
        if (disc_mpm_decode(params, y, log_scale) != base_mpm ||
            disc_viterbi(params, y, log_scale).path != base_map.path) {
          r.note = "decoded sequence changed under scaling";
          r.passed = false;
          return r;
        }
      }
      ++r.cases;
    }
  }
  r.passed = r.max_deviation < r.tolerance;
  return r;
}

/// Check 7: long-sequence robustness. On a stationary model with 10 labels,
/// 50 observations, and sequences of length 1000, every decoder runs with
/// finite outputs, generative and discriminative MPM decodes agree exactly,
/// and each sequence stays within the wall-clock budget.
inline CheckResult check_large_instance(std::uint64_t seed, std::size_t num_sequences = 3,
                                        std::size_t length = 1000) {
  rnd::Rng rng(seed);
  CheckResult r;
  r.name = "length-1000 robustness and generative/discriminative agreement";
  r.tolerance = 0.0;  // exact agreement required
  const HmmModel model = rnd::random_stationary_hmm(rng, 10, 50);
  const DiscriminativeParams params = derive_disc_params(model, length);

  bool all_finite = true;
  bool mpm_identical = true;
  double max_seconds = 0.0;
  for (std::size_t i = 0; i < num_sequences; ++i) {
    const std::vector<std::size_t> y = rnd::random_indices(rng, length, 50);
    const auto start = std::chrono::steady_clock::now();

    const std::vector<Categorical> gen_marginals = posterior_marginals(model, y);
    const std::vector<Categorical> disc_marginals = disc_posterior_marginals(params, y);
    const std::vector<std::size_t> gen_mpm = mpm_decode(model, y);
    const std::vector<std::size_t> disc_mpm = disc_mpm_decode(params, y);
    const MapResult gen_map = map_decode(model, y);
    const MapResult disc_map = disc_viterbi(params, y);

    const auto stop = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(stop - start).count();
    if (seconds > max_seconds) max_seconds = seconds;

    for (std::size_t t = 0; t < length; ++t) {
      for (std::size_t x = 0; x < 10; ++x) {
        if (!std::isfinite(gen_marginals[t].prob(x)) || !std::isfinite(disc_marginals[t].prob(x))) {
          all_finite = false;
        }
      }
    }
    if (!std::isfinite(gen_map.log_score) || !std::isfinite(disc_map.log_score)) {
      all_finite = false;
    }
    if (gen_mpm != disc_mpm) mpm_identical = false;
    ++r.cases;
  }
  r.note = "max " + detail::sci(max_seconds) + " s/seq (budget " +
           detail::sci(kLargeInstanceSecondsPerSeq) + " s)";
  r.passed = all_finite && mpm_identical && max_seconds < kLargeInstanceSecondsPerSeq;
  if (!all_finite) r.note += "; non-finite value encountered";
  if (!mpm_identical) r.note += "; MPM decodes diverged";
  return r;
}

/// The full randomized certification suite.
inline VerifyReport run_standard_suite(std::uint64_t seed) {
  VerifyReport report;
  report.checks.push_back(check_crf_hmm_equivalence(seed));
  report.checks.push_back(check_disc_generative_equivalence(seed));
  report.checks.push_back(check_disc_viterbi_agreement(seed));
  report.checks.push_back(check_potential_chain_proportionality(seed));
  report.checks.push_back(check_forward_backward(seed));
  report.checks.push_back(check_scale_invariance(seed));
  report.checks.push_back(check_large_instance(seed));
  return report;
}

namespace detail {

inline bool under_cap(double count) { return count <= static_cast<double>(oracle::kDefaultCap); }

}  // namespace detail

/// Sequence length used for file-model checks when the model is stationary
/// (per-position models fix their own length).
inline constexpr std::size_t kDefaultStationaryCheckLength = 6;

/// File-model checks: certify one HMM against its own derived parameters and
/// (when small enough) the enumeration oracle.
inline std::vector<CheckResult> verify_hmm_model(
    const HmmModel& model, std::uint64_t seed,
    std::size_t stationary_length = kDefaultStationaryCheckLength) {
  rnd::Rng rng(seed);
  const std::size_t N = model.is_stationary() ? stationary_length : model.length().value();
  const std::size_t L = model.num_labels();
  const std::size_t O = model.num_observations();
  rnd::Rng ys_rng(rng());
  const auto ys = detail::observation_suite(O, N, ys_rng);

  std::vector<CheckResult> results;

  CheckResult fb;
  fb.name = "forward-backward column-sum constancy";
  fb.tolerance = kConstancyRelTol;
  std::size_t skipped = 0;

  CheckResult orc;
  orc.name = "posterior marginals vs enumeration oracle";
  orc.tolerance = kProbTol;
  const bool oracle_feasible =
      detail::under_cap(std::pow(static_cast<double>(L), static_cast<double>(N)));

  for (const auto& y : ys) {
    try {
      const TrellisTable alpha = forward(model, y);
      const TrellisTable beta = backward(model, y);
      std::vector<double> column(L);
      double first = 0.0;
      for (std::size_t t = 0; t < N; ++t) {
        for (std::size_t x = 0; x < L; ++x) {
          column[x] = alpha.log_values[t][x] + beta.log_values[t][x];
        }
        const double s = log_sum_exp(column);
        if (t == 0) {
          first = s;
          if (first == kNegInf) throw ImpossibleEvidenceError("zero-probability sequence");
        } else {
          detail::track(fb, std::abs(std::exp(s - first) - 1.0));
        }
      }
      ++fb.cases;

      if (oracle_feasible) {
        const std::vector<Categorical> fast = posterior_marginals(model, y);
        const std::vector<std::vector<double>> slow = oracle::marginals(model, y);
        for (std::size_t t = 0; t < N; ++t) {
          for (std::size_t x = 0; x < L; ++x) {
            detail::track(orc, std::abs(fast[t].prob(x) - slow[t][x]));
          }
        }
        ++orc.cases;
      }
    } catch (const ImpossibleEvidenceError&) {
      ++skipped;
    }
  }
  if (skipped > 0) fb.note = std::to_string(skipped) + " zero-probability sequences skipped";
  fb.passed = fb.max_deviation < fb.tolerance;
  results.push_back(std::move(fb));
  if (oracle_feasible) {
    orc.passed = orc.max_deviation < orc.tolerance;
    results.push_back(std::move(orc));
  }

  CheckResult disc;
  disc.name = "derived discriminative parameters reproduce generative decoding";
  disc.tolerance = kProbTol;
  try {
    const DiscriminativeParams params = derive_disc_params(
        model, model.is_stationary() ? std::optional<std::size_t>(N) : std::nullopt);
    bool paths_agree = true;
    for (const auto& y : ys) {
      try {
        const std::vector<Categorical> gen = posterior_marginals(model, y);
        const std::vector<Categorical> dm = disc_posterior_marginals(params, y);
        for (std::size_t t = 0; t < N; ++t) {
          for (std::size_t x = 0; x < L; ++x) {
            detail::track(disc, std::abs(gen[t].prob(x) - dm[t].prob(x)));
          }
        }
        const MapResult gen_map = map_decode(model, y);
        const MapResult disc_map = disc_viterbi(params, y);
        if (std::abs(hmm_joint_log_prob(model, disc_map.path, y) - gen_map.log_score) >
            kLogScoreTol) {
          paths_agree = false;
        }
        ++disc.cases;
      } catch (const ImpossibleEvidenceError&) {
        // Already counted by the forward-backward loop.
      }
    }
    disc.passed = disc.max_deviation < disc.tolerance && paths_agree;
    if (!paths_agree) disc.note = "max-sum score disagreement";
  } catch (const Error& e) {
    // The model does not support discriminative derivation (degenerate
    // priors or an impossible observation column); that is a property of
    // the model, not a certification failure.
    disc.passed = true;
    disc.note = std::string("skipped: ") + e.what();
  }
  results.push_back(std::move(disc));
  return results;
}

/// File-model checks for a chain CRF: conversion must preserve the posterior.
inline std::vector<CheckResult> verify_crf_model(const LcCrfModel& crf, std::uint64_t seed) {
  rnd::Rng rng(seed);
  const std::size_t N = crf.length();
  const std::size_t L = crf.num_labels();
  const std::size_t O = crf.num_observations();
  const HmmModel hmm = convert_crf_to_hmm(crf);
  rnd::Rng ys_rng(rng());
  const auto ys = detail::observation_suite(O, N, ys_rng);

  CheckResult log_check;
  log_check.name = "converted model matches conditional law (log domain, sampled paths)";
  log_check.tolerance = 1e-9;
  for (const auto& y : ys) {
    const double evidence = hmm_log_evidence(hmm, y);
    for (std::size_t k = 0; k < 20; ++k) {
      const std::vector<std::size_t> x = rnd::random_indices(ys_rng, N, L);
      const double hmm_log_post = hmm_joint_log_prob(hmm, x, y) - evidence;
      detail::track(log_check, std::abs(hmm_log_post - crf_posterior_log_prob(crf, x, y)));
    }
    ++log_check.cases;
  }
  log_check.passed = log_check.max_deviation < log_check.tolerance;

  std::vector<CheckResult> results{std::move(log_check)};

  if (detail::under_cap(std::pow(static_cast<double>(L), static_cast<double>(N)))) {
    CheckResult orc;
    orc.name = "conversion equivalence vs enumeration oracle";
    orc.tolerance = kProbTol;
    for (const auto& y : ys) {
      const std::vector<double> a = oracle::crf_posterior_table(crf, y);
      const std::vector<double> b = oracle::posterior_table(hmm, y);
      for (std::size_t k = 0; k < a.size(); ++k) detail::track(orc, std::abs(a[k] - b[k]));
      ++orc.cases;
    }
    orc.passed = orc.max_deviation < orc.tolerance;
    results.push_back(std::move(orc));
  }
  return results;
}

/// File-model checks for discriminative parameters: decoding runs, marginal
/// rows are proper distributions, and column sums stay constant.
inline std::vector<CheckResult> verify_disc_model(
    const DiscriminativeParams& params, std::uint64_t seed,
    std::size_t stationary_length = kDefaultStationaryCheckLength) {
  rnd::Rng rng(seed);
  const std::size_t N = params.is_stationary() ? stationary_length : params.length().value();
  const std::size_t L = params.num_labels();
  rnd::Rng ys_rng(rng());
  const auto ys = detail::observation_suite(params.num_observations(), N, ys_rng);

  CheckResult r;
  r.name = "discriminative forward-backward column-sum constancy";
  r.tolerance = kConstancyRelTol;
  try {
    for (const auto& y : ys) {
      const TrellisTable alpha = disc_forward(params, y);
      const TrellisTable beta = disc_backward(params, y);
      std::vector<double> column(L);
      double first = 0.0;
      for (std::size_t t = 0; t < N; ++t) {
        for (std::size_t x = 0; x < L; ++x) {
          column[x] = alpha.log_values[t][x] + beta.log_values[t][x];
        }
        const double s = log_sum_exp(column);
        if (t == 0) {
          first = s;
        } else if (first != kNegInf) {
          detail::track(r, std::abs(std::exp(s - first) - 1.0));
        }
      }
      ++r.cases;
    }
    r.passed = r.max_deviation < r.tolerance;
  } catch (const Error& e) {
    r.passed = false;
    r.note = e.what();
  }
  return {std::move(r)};
}

/// File-model checks for a potential chain: the recovered Markov chain is
/// row-stochastic and proportional to the potential product.
inline std::vector<CheckResult> verify_potential_chain(const PotentialChain& chain,
                                                       std::uint64_t seed) {
  rnd::Rng rng(seed);
  const std::size_t N = chain.length();
  const std::size_t D = chain.num_states();
  const MarkovChain mc = markov_from_potentials(chain);

  CheckResult rows;
  rows.name = "recovered transition rows are stochastic";
  rows.tolerance = kProbTol;
  for (const Matrix& t : mc.transitions) {
    for (std::size_t r = 0; r < t.rows(); ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < t.cols(); ++c) sum += t(r, c);
      detail::track(rows, std::abs(sum - 1.0));
    }
    ++rows.cases;
  }
  rows.passed = rows.max_deviation < rows.tolerance;

  CheckResult prop;
  prop.name = "induced joint proportional to potential product";
  prop.tolerance = kProportionalityTol;
  std::vector<std::vector<std::size_t>> paths;
  if (detail::under_cap(std::pow(static_cast<double>(D), static_cast<double>(N))) &&
      std::pow(static_cast<double>(D), static_cast<double>(N)) <= 4096.0) {
    paths = oracle::index_tuples(D, N);
  } else {
    for (std::size_t i = 0; i < 200; ++i) paths.push_back(rnd::random_indices(rng, N, D));
  }
  std::vector<double> log_ratios;
  log_ratios.reserve(paths.size());
  for (const auto& path : paths) {
    double log_product = 0.0;
    for (std::size_t t = 0; t + 1 < N; ++t) {
      log_product += chain.log_potential(t, path[t], path[t + 1]);
    }
    log_ratios.push_back(mc.path_log_prob(path) - log_product);
  }
  double mean = 0.0;
  for (double v : log_ratios) mean += v;
  mean /= static_cast<double>(log_ratios.size());
  double var = 0.0;
  for (double v : log_ratios) var += (v - mean) * (v - mean);
  var /= static_cast<double>(log_ratios.size());
  prop.max_deviation = std::sqrt(var);
  prop.cases = paths.size();
  prop.passed = prop.max_deviation < prop.tolerance;

  return {std::move(rows), std::move(prop)};
}

/// Dispatch the per-kind file checks.
inline std::vector<CheckResult> verify_model(
    const AnyModel& model, std::uint64_t seed,
    std::size_t stationary_length = kDefaultStationaryCheckLength) {
  return std::visit(
      [seed, stationary_length](const auto& m) -> std::vector<CheckResult> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HmmModel>) {
          return verify_hmm_model(m, seed, stationary_length);
        }
        if constexpr (std::is_same_v<T, LcCrfModel>) return verify_crf_model(m, seed);
        if constexpr (std::is_same_v<T, DiscriminativeParams>) {
          return verify_disc_model(m, seed, stationary_length);
        }
        if constexpr (std::is_same_v<T, PotentialChain>) return verify_potential_chain(m, seed);
      },
      model);
}

}  // namespace chainlab::verify

#endif  // CHAINLAB_VERIFY_HPP
