#include "test_util.hpp"

using namespace chainlab;

TEST_CASE("joint log probability of a single-position point-mass model") {
  // p(x1) puts all mass on label 0, which emits observation 0 surely.
  const HmmModel model(testutil::xs(2), testutil::ys(2), Categorical::point_mass(2, 0), {},
                       {Matrix::from_rows({{1.0, 0.0}, {0.5, 0.5}})});
  const std::vector<std::size_t> x{0}, y{0};
  REQUIRE(hmm_joint_log_prob(model, x, y) == 0.0);

  const std::vector<std::size_t> x1{1};
  REQUIRE(hmm_joint_log_prob(model, x1, y) == kNegInf);
}

TEST_CASE("joint log probability of the uniform two-position model") {
  const HmmModel model = testutil::uniform_hmm(2, 2, 2);
  for (const auto& x : oracle::index_tuples(2, 2)) {
    for (const auto& y : oracle::index_tuples(2, 2)) {
      REQUIRE(hmm_joint_log_prob(model, x, y) ==
              Catch::Approx(-4.0 * std::log(2.0)).margin(1e-14));
    }
  }
}

TEST_CASE("joint log probability matches the oracle's linear product") {
  rnd::Rng rng(314);
  const HmmModel model = rnd::random_hmm(rng, 4, 3, 2);
  for (const auto& x : oracle::index_tuples(3, 4)) {
    for (const auto& y : oracle::index_tuples(2, 4)) {
      REQUIRE(std::exp(hmm_joint_log_prob(model, x, y)) ==
              Catch::Approx(oracle::joint_prob(model, x, y)).margin(1e-12));
    }
  }
}

TEST_CASE("joint log probability input validation") {
  const HmmModel model = testutil::uniform_hmm(2, 2, 3);
  const std::vector<std::size_t> x{0, 1, 0}, y{0, 0, 0};
  const std::vector<std::size_t> short_y{0, 0};
  const std::vector<std::size_t> bad_y{0, 0, 7};
  REQUIRE_THROWS_AS(hmm_joint_log_prob(model, x, short_y), DimensionError);
  REQUIRE_THROWS_AS(hmm_joint_log_prob(model, x, bad_y), IndexError);
}

TEST_CASE("joint law sums to one over all label/observation pairs") {
  rnd::Rng rng(2718);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t N = 2 + rnd::uniform_index(rng, 3);  // 2..4
    const std::size_t L = 1 + rnd::uniform_index(rng, 3);
    const std::size_t O = 1 + rnd::uniform_index(rng, 3);
    const HmmModel model = rnd::random_hmm(rng, N, L, O);
    double total = 0.0;
    for (const auto& x : oracle::index_tuples(L, N)) {
      for (const auto& y : oracle::index_tuples(O, N)) {
        total += std::exp(hmm_joint_log_prob(model, x, y));
      }
    }
    REQUIRE(total == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("stationary models reuse one table at every position") {
  const HmmModel model = testutil::stationary_uniform_hmm(2, 3);
  REQUIRE(model.is_stationary());
  REQUIRE(model.length() == std::nullopt);
  REQUIRE(&model.transition_at(0) == &model.transition_at(7));
  REQUIRE(&model.emission_at(0) == &model.emission_at(9));
  REQUIRE_NOTHROW(model.check_sequence_length(100));
  REQUIRE_THROWS_AS(model.check_sequence_length(0), DimensionError);

  const HmmModel fixed = testutil::uniform_hmm(2, 3, 4);
  REQUIRE_FALSE(fixed.is_stationary());
  REQUIRE(fixed.length() == std::size_t{4});
  REQUIRE_NOTHROW(fixed.check_sequence_length(4));
  REQUIRE_THROWS_AS(fixed.check_sequence_length(3), DimensionError);
}

TEST_CASE("model construction validates shapes and stochasticity") {
  const Alphabet lab = testutil::xs(2), obs = testutil::ys(2);
  const Matrix good = testutil::uniform_matrix(2, 2);

  // Row that does not sum to 1.
  REQUIRE_THROWS_AS(HmmModel::stationary(lab, obs, Categorical::uniform(2),
                                         Matrix::from_rows({{0.5, 0.6}, {0.5, 0.5}}), good),
                    ValidationError);
  // Transition matrix with the wrong shape.
  REQUIRE_THROWS_AS(HmmModel::stationary(lab, obs, Categorical::uniform(2),
                                         testutil::uniform_matrix(2, 3), good),
                    DimensionError);
  // Initial law of the wrong size.
  REQUIRE_THROWS_AS(HmmModel::stationary(lab, obs, Categorical::uniform(3), good, good),
                    DimensionError);
  // Per-position model with mismatched table counts.
  REQUIRE_THROWS_AS(HmmModel(lab, obs, Categorical::uniform(2), {good, good}, {good, good}),
                    DimensionError);
}

TEST_CASE("evaluation is pure and bit-stable") {
  rnd::Rng rng(99);
  const HmmModel model = rnd::random_hmm(rng, 5, 3, 3);
  const std::vector<std::size_t> x{0, 2, 1, 0, 2}, y{1, 0, 2, 2, 1};
  const double a = hmm_joint_log_prob(model, x, y);
  const double b = hmm_joint_log_prob(model, x, y);
  REQUIRE(a == b);
}
