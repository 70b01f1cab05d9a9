#include "test_util.hpp"

using namespace chainlab;

TEST_CASE("unnormalized score of zero potentials is zero") {
  const LcCrfModel crf = testutil::zero_crf(2, 2, 3);
  for (const auto& x : oracle::index_tuples(2, 3)) {
    for (const auto& y : oracle::index_tuples(2, 3)) {
      REQUIRE(crf_unnormalized_log_score(crf, x, y) == 0.0);
    }
  }
}

TEST_CASE("unnormalized score with a single nonzero pairwise term") {
  Matrix pairwise(2, 2, 0.0);
  pairwise(0, 1) = 1.0;
  const LcCrfModel crf(testutil::xs(2), testutil::ys(2), {pairwise},
                       {Matrix(2, 2, 0.0), Matrix(2, 2, 0.0)});
  const std::vector<std::size_t> x{0, 1};
  for (const auto& y : oracle::index_tuples(2, 2)) {
    REQUIRE(crf_unnormalized_log_score(crf, x, y) == 1.0);
  }
  const std::vector<std::size_t> x2{1, 0}, y0{0, 0};
  REQUIRE(crf_unnormalized_log_score(crf, x2, y0) == 0.0);
}

TEST_CASE("unnormalized score matches the oracle's factor product") {
  rnd::Rng rng(5150);
  const LcCrfModel crf = rnd::random_crf(rng, 4, 3, 2);
  for (const auto& x : oracle::index_tuples(3, 4)) {
    for (const auto& y : oracle::index_tuples(2, 4)) {
      REQUIRE(std::exp(crf_unnormalized_log_score(crf, x, y)) ==
              Catch::Approx(oracle::crf_weight(crf, x, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log partition of zero potentials counts paths") {
  const LcCrfModel crf = testutil::zero_crf(2, 2, 3);
  const std::vector<std::size_t> y{0, 1, 0};
  REQUIRE(crf_log_partition(crf, y) == Catch::Approx(3.0 * std::log(2.0)).margin(1e-14));
}

TEST_CASE("log partition with a single label is that path's score") {
  rnd::Rng rng(77);
  const LcCrfModel crf = rnd::random_crf(rng, 3, 1, 2);
  const std::vector<std::size_t> x{0, 0, 0}, y{1, 0, 1};
  REQUIRE(crf_log_partition(crf, y) ==
          Catch::Approx(crf_unnormalized_log_score(crf, x, y)).margin(1e-12));
}

TEST_CASE("log partition equals the brute-force path sum") {
  rnd::Rng rng(31337);
  const LcCrfModel crf = rnd::random_crf(rng, 5, 3, 2);
  const std::vector<std::size_t> y{0, 1, 1, 0, 1};
  double total = 0.0;
  for (const auto& x : oracle::index_tuples(3, 5)) total += oracle::crf_weight(crf, x, y);
  REQUIRE(crf_log_partition(crf, y) == Catch::Approx(std::log(total)).margin(1e-10));
}

TEST_CASE("posterior log probability basics") {
  SECTION("zero potentials give a uniform posterior") {
    const LcCrfModel crf = testutil::zero_crf(2, 2, 2);
    for (const auto& x : oracle::index_tuples(2, 2)) {
      const std::vector<std::size_t> y{1, 0};
      REQUIRE(crf_posterior_log_prob(crf, x, y) ==
              Catch::Approx(std::log(0.25)).margin(1e-14));
    }
  }
  SECTION("singleton label space is certain") {
    rnd::Rng rng(8);
    const LcCrfModel crf = rnd::random_crf(rng, 4, 1, 3);
    const std::vector<std::size_t> x{0, 0, 0, 0}, y{2, 0, 1, 2};
    REQUIRE(crf_posterior_log_prob(crf, x, y) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("matches the oracle's normalized enumeration") {
    rnd::Rng rng(4242);
    const LcCrfModel crf = rnd::random_crf(rng, 4, 3, 2);
    for (const auto& y : oracle::index_tuples(2, 4)) {
      const std::vector<double> table = oracle::crf_posterior_table(crf, y);
      const auto tuples = oracle::index_tuples(3, 4);
      for (std::size_t k = 0; k < tuples.size(); ++k) {
        REQUIRE(std::exp(crf_posterior_log_prob(crf, tuples[k], y)) ==
                Catch::Approx(table[k]).margin(1e-10));
      }
    }
  }
}

TEST_CASE("posterior probabilities sum to one over labels") {
  rnd::Rng rng(515);
  for (int rep = 0; rep < 5; ++rep) {
    const LcCrfModel crf = rnd::random_crf(rng, 4, 3, 2);
    const std::vector<std::size_t> y = rnd::random_indices(rng, 4, 2);
    double total = 0.0;
    for (const auto& x : oracle::index_tuples(3, 4)) {
      total += std::exp(crf_posterior_log_prob(crf, x, y));
    }
    REQUIRE(total == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("adding a constant to one unary table is a gauge transformation") {
  rnd::Rng rng(616);
  const LcCrfModel crf = rnd::random_crf(rng, 4, 2, 2);
  std::vector<Matrix> unary;
  for (std::size_t t = 0; t < 4; ++t) unary.push_back(crf.unary_at(t));
  for (std::size_t r = 0; r < unary[2].rows(); ++r) {
    for (std::size_t c = 0; c < unary[2].cols(); ++c) unary[2](r, c) += 3.7;
  }
  std::vector<Matrix> pairwise;
  for (std::size_t t = 0; t + 1 < 4; ++t) pairwise.push_back(crf.pairwise_at(t));
  const LcCrfModel shifted(crf.label_alphabet(), crf.obs_alphabet(), std::move(pairwise),
                           std::move(unary));

  for (const auto& y : oracle::index_tuples(2, 4)) {
    for (const auto& x : oracle::index_tuples(2, 4)) {
      REQUIRE(std::exp(crf_posterior_log_prob(crf, x, y)) ==
              Catch::Approx(std::exp(crf_posterior_log_prob(shifted, x, y))).margin(1e-10));
    }
  }
}

TEST_CASE("CRF construction validates input") {
  const Alphabet lab = testutil::xs(2), obs = testutil::ys(2);
  // Non-finite potential entries are rejected.
  Matrix bad(2, 2, 0.0);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(LcCrfModel(lab, obs, {}, {bad}), ValidationError);
  // Mismatched table counts.
  REQUIRE_THROWS_AS(LcCrfModel(lab, obs, {Matrix(2, 2, 0.0)}, {Matrix(2, 2, 0.0)}),
                    DimensionError);
  // Wrong shapes.
  REQUIRE_THROWS_AS(LcCrfModel(lab, obs, {Matrix(3, 2, 0.0)},
                               {Matrix(2, 2, 0.0), Matrix(2, 2, 0.0)}),
                    DimensionError);

  const LcCrfModel crf = testutil::zero_crf(2, 2, 3);
  const std::vector<std::size_t> x{0, 1, 0}, y{0, 0, 0}, short_y{0, 0};
  REQUIRE_THROWS_AS(crf_unnormalized_log_score(crf, x, short_y), DimensionError);
  const std::vector<std::size_t> bad_x{0, 1, 5};
  REQUIRE_THROWS_AS(crf_unnormalized_log_score(crf, bad_x, y), IndexError);
}
