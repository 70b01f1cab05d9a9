#include "test_util.hpp"

#include <filesystem>
#include <fstream>

using namespace chainlab;

namespace {

/// Temp-file path helper; files are removed by each test that creates them.
std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("chainlab_test_" + name)).string();
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("generative model JSON round trips exactly") {
  rnd::Rng rng(1);
  SECTION("per-position model") {
    const HmmModel model = rnd::random_hmm(rng, 3, 2, 3);
    const nlohmann::json j = hmm_to_json(model);
    REQUIRE(j["format"] == kHmmFormat);
    REQUIRE(j["stationary"] == false);
    REQUIRE(j["transitions"].size() == std::size_t{2});
    REQUIRE(j["emissions"].size() == std::size_t{3});
    const HmmModel back = hmm_from_json(j);
    // Doubles survive the JSON text representation bit-for-bit.
    REQUIRE(hmm_to_json(back).dump() == j.dump());
    REQUIRE(back.initial() == model.initial());
    REQUIRE(back.transition_at(1) == model.transition_at(1));
    REQUIRE(back.emission_at(2) == model.emission_at(2));
    REQUIRE(back.label_alphabet() == model.label_alphabet());
  }
  SECTION("stationary model stores one matrix per family") {
    const HmmModel model = rnd::random_stationary_hmm(rng, 3, 4);
    const nlohmann::json j = hmm_to_json(model);
    REQUIRE(j["stationary"] == true);
    REQUIRE(j["transitions"].size() == std::size_t{1});
    const HmmModel back = hmm_from_json(j);
    REQUIRE(back.is_stationary());
    REQUIRE(hmm_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("chain-CRF JSON round trips exactly") {
  rnd::Rng rng(2);
  const LcCrfModel crf = rnd::random_crf(rng, 4, 3, 2);
  const nlohmann::json j = crf_to_json(crf);
  REQUIRE(j["format"] == kCrfFormat);
  REQUIRE(j["pairwise"].size() == std::size_t{3});
  REQUIRE(j["unary"].size() == std::size_t{4});
  const LcCrfModel back = crf_from_json(j);
  REQUIRE(crf_to_json(back).dump() == j.dump());
  REQUIRE(back.pairwise_at(2) == crf.pairwise_at(2));
  REQUIRE(back.unary_at(0) == crf.unary_at(0));
}

TEST_CASE("discriminative parameter JSON keeps the consistency flag") {
  rnd::Rng rng(3);
  SECTION("derived parameters round trip as chain-consistent") {
    const DiscriminativeParams params = derive_disc_params(rnd::random_hmm(rng, 3, 2, 2));
    const nlohmann::json j = disc_to_json(params);
    REQUIRE(j["consistency"] == "chain");
    const DiscriminativeParams back = disc_from_json(j);
    REQUIRE(back.chain_consistent());
    REQUIRE(disc_to_json(back).dump() == j.dump());
  }
  SECTION("raw stationary parameters round trip as raw") {
    std::istringstream corpus_text("a\tX\nb\tY\n\nb\tY\n");
    const DiscriminativeParams params = fit_disc_params(load_corpus(corpus_text));
    const nlohmann::json j = disc_to_json(params);
    REQUIRE(j["consistency"] == "raw");
    REQUIRE(j["stationary"] == true);
    REQUIRE(j["priors"].size() == std::size_t{1});
    const DiscriminativeParams back = disc_from_json(j);
    REQUIRE(back.is_stationary());
    REQUIRE_FALSE(back.chain_consistent());
    REQUIRE(disc_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("potential-chain JSON round trips exactly") {
  rnd::Rng rng(4);
  const PotentialChain chain = rnd::random_potential_chain(rng, 4, 3);
  const nlohmann::json j = potential_chain_to_json(chain);
  REQUIRE(j["format"] == kPotentialChainFormat);
  REQUIRE(j["log_potentials"].size() == std::size_t{3});
  const PotentialChain back = potential_chain_from_json(j);
  REQUIRE(potential_chain_to_json(back).dump() == j.dump());
}

TEST_CASE("malformed model JSON is a parse error") {
  rnd::Rng rng(5);
  const nlohmann::json good = hmm_to_json(rnd::random_hmm(rng, 2, 2, 2));

  SECTION("missing or unknown format") {
    nlohmann::json j = good;
    j.erase("format");
    REQUIRE_THROWS_AS(hmm_from_json(j), ParseError);
    j["format"] = "chainlab-mystery-v1";
    REQUIRE_THROWS_AS(model_from_json(j), ParseError);
  }
  SECTION("a typed reader rejects the wrong kind") {
    REQUIRE_THROWS_AS(crf_from_json(good), ParseError);
  }
  SECTION("missing fields are named") {
    nlohmann::json j = good;
    j.erase("initial");
    try {
      hmm_from_json(j);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      REQUIRE(std::string(e.what()).find("initial") != std::string::npos);
    }
  }
  SECTION("non-numeric matrix entries") {
    nlohmann::json j = good;
    j["transitions"][0][0][0] = "high";
    REQUIRE_THROWS_AS(hmm_from_json(j), ParseError);
  }
  SECTION("stationary count mismatch") {
    nlohmann::json j = good;
    j["stationary"] = true;
    REQUIRE_THROWS_AS(hmm_from_json(j), ParseError);
  }
  SECTION("a bad consistency name") {
    const nlohmann::json base = disc_to_json(derive_disc_params(rnd::random_hmm(rng, 2, 2, 2)));
    nlohmann::json j = base;
    j["consistency"] = "loose";
    REQUIRE_THROWS_AS(disc_from_json(j), ParseError);
  }
  SECTION("valid JSON violating a model invariant reports the origin") {
    nlohmann::json j = good;
    j["initial"] = {0.9, 0.9};
    try {
      model_from_json(j, "bundle.json");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      const std::string what = e.what();
      REQUIRE(what.find("bundle.json") != std::string::npos);
      REQUIRE(what.find("invalid model") != std::string::npos);
    }
  }
}

TEST_CASE("model files round trip through disk") {
  rnd::Rng rng(6);
  SECTION("typed save and load") {
    const FileGuard f{temp_path("hmm.json")};
    const HmmModel model = rnd::random_hmm(rng, 3, 2, 2);
    save_model(f.path, model);
    const HmmModel back = load_hmm(f.path);
    REQUIRE(hmm_to_json(back).dump() == hmm_to_json(model).dump());
  }
  SECTION("the generic loader dispatches on the format field") {
    const FileGuard f1{temp_path("any_crf.json")};
    const FileGuard f2{temp_path("any_pot.json")};
    const FileGuard f3{temp_path("any_disc.json")};
    save_model(f1.path, rnd::random_crf(rng, 2, 2, 2));
    save_model(f2.path, rnd::random_potential_chain(rng, 3, 2));
    save_model(f3.path, derive_disc_params(rnd::random_hmm(rng, 2, 2, 2)));
    REQUIRE(std::holds_alternative<LcCrfModel>(load_any_model(f1.path)));
    REQUIRE(std::holds_alternative<PotentialChain>(load_any_model(f2.path)));
    REQUIRE(std::holds_alternative<DiscriminativeParams>(load_any_model(f3.path)));
  }
  SECTION("missing and unparsable files name the path") {
    REQUIRE_THROWS_AS(load_any_model("/no/such/model.json"), ParseError);
    const FileGuard f{temp_path("garbage.json")};
    std::ofstream(f.path) << "not json at all";
    try {
      load_any_model(f.path);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      REQUIRE(std::string(e.what()).find(f.path) != std::string::npos);
    }
  }
  SECTION("files end with a newline and are stable across saves") {
    const FileGuard f1{temp_path("stable1.json")};
    const FileGuard f2{temp_path("stable2.json")};
    const PotentialChain chain = rnd::random_potential_chain(rng, 3, 3);
    save_model(f1.path, chain);
    save_model(f2.path, chain);
    std::ifstream in1(f1.path), in2(f2.path);
    std::stringstream s1, s2;
    s1 << in1.rdbuf();
    s2 << in2.rdbuf();
    REQUIRE(s1.str() == s2.str());
    REQUIRE_FALSE(s1.str().empty());
    REQUIRE(s1.str().back() == '\n');
  }
}
