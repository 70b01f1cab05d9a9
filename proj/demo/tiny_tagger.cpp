/// Builds a two-state weather tagger by hand and walks it through every
/// inference routine: sequence likelihood, per-position posteriors,
/// posterior-mode decoding, and best-path decoding.
///
/// Run from anywhere; the program takes no arguments.

#include <chainlab/chainlab.hpp>

#include <cstdio>
#include <string>
#include <vector>

int main() {
  using namespace chainlab;

  // Hidden state: the weather. Observation: what a friend reports doing.
  Alphabet weather({"Rainy", "Sunny"});
  Alphabet activity({"walk", "shop", "clean"});

  HmmModel model = HmmModel::stationary(
      weather, activity,
      Categorical({0.6, 0.4}),
      Matrix::from_rows({{0.7, 0.3},
                         {0.4, 0.6}}),
      Matrix::from_rows({{0.1, 0.4, 0.5},
                         {0.6, 0.3, 0.1}}));

  const std::vector<std::string> reported = {"walk", "shop", "clean", "walk"};
  std::vector<std::size_t> y;
  for (const std::string& token : reported) y.push_back(activity.index(token));

  std::printf("observations:");
  for (const std::string& token : reported) std::printf(" %s", token.c_str());
  std::printf("\n\n");

  std::printf("log P(observations) = %.12f\n\n", hmm_log_evidence(model, y));

  const std::vector<Categorical> posterior = posterior_marginals(model, y);
  std::printf("posterior per position:\n");
  std::printf("  %-8s %10s %10s\n", "", "P(Rainy)", "P(Sunny)");
  for (std::size_t t = 0; t < posterior.size(); ++t) {
    std::printf("  %-8s %10.6f %10.6f\n", reported[t].c_str(),
                posterior[t].prob(0), posterior[t].prob(1));
  }
  std::printf("\n");

  const std::vector<std::size_t> mode_path = mpm_decode(model, y);
  std::printf("posterior-mode path:");
  for (std::size_t x : mode_path) std::printf(" %s", weather.symbol(x).c_str());
  std::printf("\n");

  const MapResult best = map_decode(model, y);
  std::printf("best joint path:    ");
  for (std::size_t x : best.path) std::printf(" %s", weather.symbol(x).c_str());
  std::printf("   (joint log-score %.12f)\n", best.log_score);

  // The two decoders optimize different objectives (per-position posterior
  // mass vs. whole-path joint probability) and may legitimately disagree.
  const bool same = mode_path == best.path;
  std::printf("\nthe two decoders %s on this sequence\n",
              same ? "agree" : "disagree");
  return 0;
}
