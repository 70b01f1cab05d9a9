#include "test_util.hpp"

using namespace chainlab;

namespace {

double path_log_potential(const PotentialChain& chain, const std::vector<std::size_t>& path) {
  double sum = 0.0;
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    sum += chain.log_potential(t, path[t], path[t + 1]);
  }
  return sum;
}

}  // namespace

TEST_CASE("backward recursion with constant potentials counts successors") {
  // N=2, three states, every potential equal to 1 (log 0).
  const PotentialChain chain(testutil::xs(3), {Matrix(3, 3, 0.0)});
  const auto log_beta = potential_backward(chain);
  REQUIRE(log_beta.size() == 2);
  for (std::size_t w = 0; w < 3; ++w) {
    REQUIRE(log_beta[1][w] == 0.0);
    REQUIRE(log_beta[0][w] == Catch::Approx(std::log(3.0)).margin(1e-14));
  }
}

TEST_CASE("backward recursion sums rows of a two-state potential") {
  // Potential matrix diag(2,2) with off-diagonal 1: row sums are 3.
  const Matrix phi = Matrix::from_rows({{std::log(2.0), 0.0}, {0.0, std::log(2.0)}});
  const PotentialChain chain(testutil::xs(2), {phi});
  const auto log_beta = potential_backward(chain);
  REQUIRE(std::exp(log_beta[0][0]) == Catch::Approx(3.0).margin(1e-13));
  REQUIRE(std::exp(log_beta[0][1]) == Catch::Approx(3.0).margin(1e-13));
}

TEST_CASE("backward recursion matches the suffix enumeration oracle") {
  rnd::Rng rng(123);
  const PotentialChain chain = rnd::random_potential_chain(rng, 5, 3);
  const auto log_beta = potential_backward(chain);
  const auto suffix = oracle::potential_suffix_sums(chain);
  REQUIRE(log_beta.size() == suffix.size());
  for (std::size_t t = 0; t < log_beta.size(); ++t) {
    for (std::size_t w = 0; w < 3; ++w) {
      REQUIRE(std::exp(log_beta[t][w]) == Catch::Approx(suffix[t][w]).epsilon(1e-10));
    }
  }
}

TEST_CASE("constant potentials induce the uniform chain") {
  const PotentialChain chain(testutil::xs(3), {Matrix(3, 3, 0.0), Matrix(3, 3, 0.0)});
  const MarkovChain mc = markov_from_potentials(chain);
  for (std::size_t w = 0; w < 3; ++w) {
    REQUIRE(mc.initial.prob(w) == Catch::Approx(1.0 / 3.0).margin(1e-15));
  }
  for (const Matrix& t : mc.transitions) {
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        REQUIRE(t(r, c) == Catch::Approx(1.0 / 3.0).margin(1e-15));
      }
    }
  }
}

TEST_CASE("singleton state space gives the trivial chain") {
  const PotentialChain chain(testutil::xs(1), {Matrix(1, 1, 0.7)});
  const MarkovChain mc = markov_from_potentials(chain);
  REQUIRE(mc.initial.prob(0) == 1.0);
  REQUIRE(mc.transitions.size() == 1);
  REQUIRE(mc.transitions[0](0, 0) == 1.0);
  const std::vector<std::size_t> path{0, 0};
  REQUIRE(mc.path_log_prob(path) == 0.0);
}

TEST_CASE("induced joint equals the normalized potential product") {
  rnd::Rng rng(321);
  const PotentialChain chain = rnd::random_potential_chain(rng, 4, 3);
  const MarkovChain mc = markov_from_potentials(chain);

  const auto paths = oracle::index_tuples(3, 4);
  double total = 0.0;
  std::vector<double> products;
  for (const auto& path : paths) products.push_back(std::exp(path_log_potential(chain, path)));
  for (double p : products) total += p;

  for (std::size_t k = 0; k < paths.size(); ++k) {
    REQUIRE(std::exp(mc.path_log_prob(paths[k])) ==
            Catch::Approx(products[k] / total).margin(1e-10));
  }
}

TEST_CASE("per-path log ratio is constant (proportionality)") {
  rnd::Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t N = 2 + rnd::uniform_index(rng, 4);
    const std::size_t D = 1 + rnd::uniform_index(rng, 4);
    const PotentialChain chain = rnd::random_potential_chain(rng, N, D);
    const MarkovChain mc = markov_from_potentials(chain);

    double mean = 0.0;
    std::vector<double> ratios;
    for (const auto& path : oracle::index_tuples(D, N)) {
      ratios.push_back(mc.path_log_prob(path) - path_log_potential(chain, path));
      mean += ratios.back();
    }
    mean /= static_cast<double>(ratios.size());
    double var = 0.0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    REQUIRE(std::sqrt(var / static_cast<double>(ratios.size())) < 1e-10);
  }
}

TEST_CASE("scaling one potential matrix does not change the chain") {
  rnd::Rng rng(456);
  const PotentialChain chain = rnd::random_potential_chain(rng, 4, 3);
  std::vector<Matrix> scaled = chain.log_potentials();
  const double log_c = std::log(37.5);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) scaled[1](r, c) += log_c;
  }
  const MarkovChain a = markov_from_potentials(chain);
  const MarkovChain b = markov_from_potentials(PotentialChain(chain.state_alphabet(), scaled));

  REQUIRE(testutil::max_abs_diff(a.initial.probs(), b.initial.probs()) < 1e-10);
  for (std::size_t t = 0; t < a.transitions.size(); ++t) {
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        REQUIRE(a.transitions[t](r, c) == Catch::Approx(b.transitions[t](r, c)).margin(1e-10));
      }
    }
  }
}

TEST_CASE("recovered transition rows are stochastic") {
  rnd::Rng rng(654);
  const PotentialChain chain = rnd::random_potential_chain(rng, 5, 4);
  const MarkovChain mc = markov_from_potentials(chain);
  for (const Matrix& t : mc.transitions) {
    for (std::size_t r = 0; r < t.rows(); ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < t.cols(); ++c) sum += t(r, c);
      REQUIRE(sum == Catch::Approx(1.0).margin(1e-10));
    }
  }
}

TEST_CASE("potential chain construction rejects non-positive potentials") {
  Matrix zero_entry(2, 2, 0.0);
  zero_entry(0, 1) = kNegInf;  // a potential of exactly 0
  REQUIRE_THROWS_AS(PotentialChain(testutil::xs(2), {zero_entry}), ValidationError);

  Matrix nan_entry(2, 2, 0.0);
  nan_entry(1, 0) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(PotentialChain(testutil::xs(2), {nan_entry}), ValidationError);

  REQUIRE_THROWS_AS(PotentialChain(testutil::xs(2), {Matrix(2, 3, 0.0)}), DimensionError);
  REQUIRE_THROWS_AS(PotentialChain(Alphabet(), {}), ValidationError);
}

TEST_CASE("potential chain accessors") {
  const PotentialChain chain(testutil::xs(2), {Matrix(2, 2, 0.5)});
  REQUIRE(chain.length() == 2);
  REQUIRE(chain.num_states() == 2);
  REQUIRE(chain.log_potential(0, 1, 1) == 0.5);
  REQUIRE_THROWS_AS(chain.log_potential(1, 0, 0), IndexError);
  REQUIRE_THROWS_AS(chain.log_potential(0, 2, 0), IndexError);
}
