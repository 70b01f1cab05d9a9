#include "test_util.hpp"

#include <filesystem>
#include <sstream>

#include "subprocess_util.hpp"

using namespace chainlab;

namespace {

const std::string kBin = CHAINLAB_CLI_BIN;
const std::string kDataDir = CHAINLAB_DATA_DIR;

std::string data_file(const std::string& name) { return kDataDir + "/" + name; }

subprocess::RunResult cli(const std::string& args, const std::string& stdin_file = "") {
  return subprocess::run("'" + kBin + "' " + args, stdin_file);
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::filesystem::remove(path); }
};

/// Stationary model whose observation reveals its label: uniform initial and
/// transitions, identity emissions over labels {A, B} and tokens {a, b}.
HmmModel revealing_file_model() {
  return HmmModel::stationary(Alphabet({"A", "B"}), Alphabet({"a", "b"}), Categorical::uniform(2),
                              testutil::uniform_matrix(2, 2),
                              Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  REQUIRE(cli("").exit_code == 1);
  REQUIRE(cli("frobnicate").exit_code == 1);
  REQUIRE(cli("fit").exit_code == 1);                       // missing required flags
  REQUIRE(cli("tag --model x.json --decoder fancy").exit_code == 1);
}

TEST_CASE("help exits 0 and documents the file formats") {
  const subprocess::RunResult r = cli("--help");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("fit") != std::string::npos);
  REQUIRE(r.out.find("verify") != std::string::npos);
  REQUIRE(r.out.find("chainlab-hmm-v1") != std::string::npos);
}

TEST_CASE("fit reproduces the library estimate bit-for-bit") {
  const FileGuard out{subprocess::temp_file("fit_hmm.json")};
  const subprocess::RunResult r =
      cli("fit --corpus '" + data_file("toy_pos.tsv") + "' --out '" + out.path + "' --k 0.1");
  REQUIRE(r.exit_code == 0);

  const HmmModel from_cli = load_hmm(out.path);
  const HmmModel direct = fit_hmm(load_corpus(data_file("toy_pos.tsv")), 0.1);
  REQUIRE(hmm_to_json(from_cli).dump() == hmm_to_json(direct).dump());

  const FileGuard disc_out{subprocess::temp_file("fit_disc.json")};
  REQUIRE(cli("fit --kind disc --corpus '" + data_file("toy_pos.tsv") + "' --out '" +
              disc_out.path + "'")
              .exit_code == 0);
  const DiscriminativeParams disc_cli = load_disc(disc_out.path);
  const DiscriminativeParams disc_direct = fit_disc_params(load_corpus(data_file("toy_pos.tsv")));
  REQUIRE(disc_to_json(disc_cli).dump() == disc_to_json(disc_direct).dump());
}

TEST_CASE("fit on a missing corpus exits 2 with a message") {
  const subprocess::RunResult r =
      cli("fit --corpus /no/such/corpus.tsv --out /tmp/never_written.json");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.err.find("corpus not found") != std::string::npos);
}

TEST_CASE("convert rewrites a zero-potential chain CRF as the uniform model") {
  const FileGuard crf_file{subprocess::temp_file("zero_crf.json")};
  const FileGuard hmm_file{subprocess::temp_file("converted.json")};
  save_model(crf_file.path, testutil::zero_crf(2, 2, 3));
  REQUIRE(cli("convert --in '" + crf_file.path + "' --out '" + hmm_file.path + "'").exit_code ==
          0);
  const HmmModel hmm = load_hmm(hmm_file.path);
  REQUIRE(hmm.initial().prob(0) == Catch::Approx(0.5).margin(1e-15));
  for (std::size_t t = 0; t + 1 < 3; ++t) {
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        REQUIRE(hmm.transition_at(t)(i, j) == Catch::Approx(0.5).margin(1e-15));
        REQUIRE(hmm.emission_at(t)(i, j) == Catch::Approx(0.5).margin(1e-15));
      }
    }
  }
}

TEST_CASE("convert rejects malformed JSON with exit 2") {
  const FileGuard bad{subprocess::temp_file("bad.json")};
  subprocess::write_file(bad.path, "{ this is not json");
  const FileGuard out{subprocess::temp_file("never.json")};
  const subprocess::RunResult r = cli("convert --in '" + bad.path + "' --out '" + out.path + "'");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.err.find("invalid JSON") != std::string::npos);
}

TEST_CASE("converted random models pass their certification checks") {
  rnd::Rng rng(2024);
  const FileGuard crf_file{subprocess::temp_file("random_crf.json")};
  const FileGuard hmm_file{subprocess::temp_file("random_converted.json")};
  save_model(crf_file.path, rnd::random_crf(rng, 3, 2, 2));
  REQUIRE(cli("convert --in '" + crf_file.path + "' --out '" + hmm_file.path + "'").exit_code ==
          0);
  const subprocess::RunResult r = cli("verify '" + hmm_file.path + "'");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("checks passed") != std::string::npos);
}

TEST_CASE("tagging with an observation-revealing model forces the tags") {
  const FileGuard model{subprocess::temp_file("revealing.json")};
  save_model(model.path, revealing_file_model());
  const FileGuard input{subprocess::temp_file("one_token.txt")};
  subprocess::write_file(input.path, "a\n");

  SECTION("posterior-mode decoding") {
    const subprocess::RunResult r =
        cli("tag --model '" + model.path + "' --input '" + input.path + "'");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "a\tA\n");
  }
  SECTION("best-path decoding prints the score as a comment") {
    const subprocess::RunResult r =
        cli("tag --decoder map --model '" + model.path + "' --input '" + input.path + "'");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("# log-score: -0.693147") == std::size_t{0});
    REQUIRE(r.out.find("\na\tA\n") != std::string::npos);
  }
  SECTION("discriminative mode derives parameters with a notice") {
    const subprocess::RunResult r = cli("tag --mode discriminative --model '" + model.path +
                                        "' --input '" + input.path + "'");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "a\tA\n");
    REQUIRE(r.err.find("deriving discriminative parameters") != std::string::npos);
  }
  SECTION("discriminative best-path labels its score unnormalized") {
    const subprocess::RunResult r = cli("tag --decoder map --mode discriminative --model '" +
                                        model.path + "' --input '" + input.path + "'");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("# unnormalized log-score:") == std::size_t{0});
  }
  SECTION("stdin is the default input") {
    const subprocess::RunResult r = cli("tag --model '" + model.path + "'", input.path);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "a\tA\n");
  }
}

TEST_CASE("tag separates output sequences with blank lines like its input") {
  const FileGuard model{subprocess::temp_file("revealing2.json")};
  save_model(model.path, revealing_file_model());
  const FileGuard input{subprocess::temp_file("two_seqs.txt")};
  subprocess::write_file(input.path, "a\nb\n\nb\n");
  const subprocess::RunResult r =
      cli("tag --model '" + model.path + "' --input '" + input.path + "'");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out == "a\tA\nb\tB\n\nb\tB\n");
}

TEST_CASE("tagging empty input produces empty output and exit 0") {
  const FileGuard model{subprocess::temp_file("revealing3.json")};
  save_model(model.path, revealing_file_model());
  const FileGuard input{subprocess::temp_file("empty.txt")};
  subprocess::write_file(input.path, "");
  const subprocess::RunResult r =
      cli("tag --model '" + model.path + "' --input '" + input.path + "'");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.empty());
}

TEST_CASE("unknown tokens require an unknown-token entry") {
  const FileGuard model{subprocess::temp_file("revealing4.json")};
  save_model(model.path, revealing_file_model());
  const FileGuard input{subprocess::temp_file("oov.txt")};
  subprocess::write_file(input.path, "z\n");
  SECTION("a model without the entry rejects the token") {
    const subprocess::RunResult r =
        cli("tag --model '" + model.path + "' --input '" + input.path + "'");
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.err.find("not in the model vocabulary") != std::string::npos);
  }
  SECTION("a fitted model falls back to its unknown entry") {
    const FileGuard fitted{subprocess::temp_file("fitted.json")};
    REQUIRE(cli("fit --corpus '" + data_file("toy_pos.tsv") + "' --out '" + fitted.path + "'")
                .exit_code == 0);
    const subprocess::RunResult r =
        cli("tag --model '" + fitted.path + "' --input '" + input.path + "'");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.rfind("z\t", 0) == 0);
  }
}

TEST_CASE("tag modes require compatible model kinds") {
  rnd::Rng rng(77);
  const FileGuard input{subprocess::temp_file("in.txt")};
  subprocess::write_file(input.path, "x\n");

  const FileGuard disc_file{subprocess::temp_file("params.json")};
  save_model(disc_file.path, derive_disc_params(rnd::random_hmm(rng, 2, 2, 2)));
  const subprocess::RunResult gen_on_disc =
      cli("tag --mode generative --model '" + disc_file.path + "' --input '" + input.path + "'");
  REQUIRE(gen_on_disc.exit_code == 2);
  REQUIRE(gen_on_disc.err.find("generative mode requires") != std::string::npos);

  const FileGuard crf_file{subprocess::temp_file("crf.json")};
  save_model(crf_file.path, rnd::random_crf(rng, 2, 2, 2));
  REQUIRE(cli("tag --model '" + crf_file.path + "' --input '" + input.path + "'").exit_code == 2);
  REQUIRE(cli("tag --mode discriminative --model '" + crf_file.path + "' --input '" + input.path +
              "'")
              .exit_code == 2);
}

TEST_CASE("repeated runs are byte-identical") {
  const FileGuard fitted{subprocess::temp_file("fitted_det.json")};
  REQUIRE(cli("fit --corpus '" + data_file("toy_pos.tsv") + "' --out '" + fitted.path + "'")
              .exit_code == 0);
  const FileGuard input{subprocess::temp_file("det_in.txt")};
  subprocess::write_file(input.path, "the\nquick\nfox\n\na\nbird\nsings\n");
  const std::string args = "tag --decoder map --model '" + fitted.path + "' --input '" +
                           input.path + "'";
  const subprocess::RunResult first = cli(args);
  const subprocess::RunResult second = cli(args);
  REQUIRE(first.exit_code == 0);
  REQUIRE(first.out == second.out);
  REQUIRE_FALSE(first.out.empty());
}

TEST_CASE("verify on the uniform model reports vanishing deviations") {
  const FileGuard model{subprocess::temp_file("uniform.json")};
  save_model(model.path, testutil::stationary_uniform_hmm(2, 2));
  const subprocess::RunResult r = cli("verify --max-n 4 '" + model.path + "'");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t dev_lines = 0;
  while (std::getline(lines, line)) {
    const std::size_t at = line.find("max-dev=");
    if (at == std::string::npos) continue;
    ++dev_lines;
    // Zero up to log-space rounding dust (see the library's own checks for
    // why the column-sum deviation is a few ulps rather than exactly zero).
    REQUIRE(std::stod(line.substr(at + 8)) < 1e-12);
    REQUIRE(line.find("[PASS]") == std::size_t{0});
  }
  REQUIRE(dev_lines == std::size_t{3});
}

TEST_CASE("verify writes a machine-readable report") {
  rnd::Rng rng(99);
  const FileGuard model{subprocess::temp_file("chain.json")};
  save_model(model.path, rnd::random_potential_chain(rng, 4, 3));
  const FileGuard report{subprocess::temp_file("report.json")};
  const subprocess::RunResult r =
      cli("verify --seed 17 --report '" + report.path + "' '" + model.path + "'");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(subprocess::read_file(report.path));
  REQUIRE(j["all_passed"] == true);
  REQUIRE(j["seed"] == 17);
  REQUIRE(j["checks"].is_array());
  REQUIRE_FALSE(j["checks"].empty());
  REQUIRE(j["checks"][0]["name"].get<std::string>().find(model.path) != std::string::npos);
}

TEST_CASE("verify flags failing parameters with exit 5") {
  const FileGuard model{subprocess::temp_file("undecodable.json")};
  save_model(model.path, DiscriminativeParams::stationary(
                             testutil::xs(2), testutil::ys(2), Categorical({1.0, 0.0}),
                             testutil::uniform_matrix(2, 2), testutil::uniform_matrix(2, 2),
                             PriorConsistency::kRaw));
  const subprocess::RunResult r = cli("verify '" + model.path + "'");
  REQUIRE(r.exit_code == 5);
  REQUIRE(r.out.find("[FAIL]") != std::string::npos);
}

TEST_CASE("verify rejects the corrupted fixture at load time") {
  const subprocess::RunResult r = cli("verify '" + data_file("corrupt_hmm.json") + "'");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.err.find("invalid model") != std::string::npos);
}

TEST_CASE("eval reports token accuracy") {
  const FileGuard gold{subprocess::temp_file("gold.tsv")};
  subprocess::write_file(gold.path, "a\tX\nb\tY\n\nb\tY\na\tX\n");
  SECTION("perfect agreement") {
    const subprocess::RunResult r =
        cli("eval --gold '" + gold.path + "' --pred '" + gold.path + "'");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "accuracy\t1\n");
  }
  SECTION("one error in four") {
    const FileGuard pred{subprocess::temp_file("pred.tsv")};
    subprocess::write_file(pred.path, "a\tX\nb\tY\n\nb\tY\na\tY\n");
    const subprocess::RunResult r =
        cli("eval --gold '" + gold.path + "' --pred '" + pred.path + "'");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "accuracy\t0.75\n");
  }
  SECTION("tags outside the gold tagset count as errors") {
    const FileGuard pred{subprocess::temp_file("pred_z.tsv")};
    subprocess::write_file(pred.path, "a\tX\nb\tZ\n\nb\tY\na\tX\n");
    const subprocess::RunResult r =
        cli("eval --gold '" + gold.path + "' --pred '" + pred.path + "'");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "accuracy\t0.75\n");
  }
  SECTION("token mismatches exit 2") {
    const FileGuard pred{subprocess::temp_file("pred_tok.tsv")};
    subprocess::write_file(pred.path, "a\tX\nq\tY\n\nb\tY\na\tX\n");
    REQUIRE(cli("eval --gold '" + gold.path + "' --pred '" + pred.path + "'").exit_code == 2);
  }
  SECTION("sequence-count mismatches exit 4") {
    const FileGuard pred{subprocess::temp_file("pred_short.tsv")};
    subprocess::write_file(pred.path, "a\tX\nb\tY\n");
    REQUIRE(cli("eval --gold '" + gold.path + "' --pred '" + pred.path + "'").exit_code == 4);
  }
}

TEST_CASE("golden fixture: fixed model and input give byte-identical output") {
  const std::string model = data_file("golden_hmm.json");
  const std::string input = data_file("golden_input.txt");
  REQUIRE(std::filesystem::exists(model));
  REQUIRE(std::filesystem::exists(input));

  const subprocess::RunResult mpm = cli("tag --model '" + model + "' --input '" + input + "'");
  REQUIRE(mpm.exit_code == 0);
  REQUIRE(mpm.out == subprocess::read_file(data_file("golden_output.tsv")));

  const subprocess::RunResult map =
      cli("tag --decoder map --model '" + model + "' --input '" + input + "'");
  REQUIRE(map.exit_code == 0);
  REQUIRE(map.out == subprocess::read_file(data_file("golden_output_map.tsv")));
}
