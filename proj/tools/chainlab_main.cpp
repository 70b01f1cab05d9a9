// chainlab: exact inference for discrete chain models.
//
// Subcommands:
//   fit      estimate a model from a tagged TSV corpus
//   convert  rewrite a chain-CRF model file as the equivalent HMM
//   tag      decode token sequences (MPM or max-sum, generative or
//            discriminative parameterization)
//   verify   run certification checks (randomized suite or per model file)
//   eval     token accuracy of a predicted tagging against a gold tagging
//
// Exit codes: 0 success, 1 usage, 2 input/parse, 3 instance too large,
// 4 numeric/degenerate model or data, 5 verification check failed.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include <chainlab/chainlab.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitTooLarge = 3;
constexpr int kExitRuntime = 4;
constexpr int kExitCheckFailed = 5;

constexpr std::uint64_t kDefaultSeed = 1729;

const char* kFormatHelp = R"(File formats:

  Corpus TSV (fit, eval): one "token<TAB>tag" pair per line, blank line
  between sequences, '#' starts a comment line.

  Token input (tag): one token per line (text after a tab is ignored, so
  tagged TSV is accepted), blank line between sequences; reads stdin when
  --input is omitted.

  Model JSON: an object whose "format" field selects the kind —
    "chainlab-hmm-v1":      {format, labels, observations, stationary,
                             initial, transitions: [matrix...],
                             emissions: [matrix...]}
    "chainlab-crf-v1":      {format, labels, observations,
                             pairwise: [matrix...], unary: [matrix...]}
    "chainlab-disc-v1":     {format, labels, observations, stationary,
                             consistency: "chain"|"raw",
                             priors: [vector...], transitions: [matrix...],
                             label_given_obs: [matrix...]}
    "chainlab-potchain-v1": {format, states, log_potentials: [matrix...]}
  Matrices are arrays of equal-length rows of numbers. Stationary models
  carry exactly one matrix per table and apply it at every position.)";

int cmd_fit(const std::string& corpus_path, const std::string& out_path, const std::string& kind,
            double k) {
  if (!std::filesystem::exists(corpus_path)) {
    throw chainlab::ParseError("corpus not found: " + corpus_path);
  }
  const chainlab::TaggedCorpus corpus = chainlab::load_corpus(corpus_path);
  if (kind == "hmm") {
    chainlab::save_model(out_path, chainlab::fit_hmm(corpus, k));
  } else {
    const chainlab::DiscriminativeParams params = chainlab::fit_disc_params(corpus, k);
    if (!params.prior_at(0).strictly_positive()) {
      std::fprintf(stderr,
                   "warning: some label never occurs and k = 0, so the label prior has zero "
                   "entries; discriminative decoding with this model will fail\n");
    }
    chainlab::save_model(out_path, params);
  }
  return kExitOk;
}

int cmd_convert(const std::string& in_path, const std::string& out_path) {
  const chainlab::LcCrfModel crf = chainlab::load_crf(in_path);
  chainlab::save_model(out_path, chainlab::convert_crf_to_hmm(crf));
  return kExitOk;
}

/// Map tokens to observation indices, falling back to the unknown-token
/// entry when the alphabet has one.
std::vector<std::size_t> tokens_to_indices(const std::vector<std::string>& tokens,
                                           const chainlab::Alphabet& obs) {
  const std::optional<std::size_t> unk = obs.find(chainlab::kUnknownToken);
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    if (const std::optional<std::size_t> idx = obs.find(tok)) {
      out.push_back(*idx);
    } else if (unk) {
      out.push_back(*unk);
    } else {
      throw chainlab::ParseError("token '" + tok + "' is not in the model vocabulary and the "
                                 "model has no '" + chainlab::kUnknownToken + "' entry");
    }
  }
  return out;
}

void print_tagged(const std::vector<std::string>& tokens, const std::vector<std::size_t>& tags,
                  const chainlab::Alphabet& labels) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::printf("%s\t%s\n", tokens[i].c_str(), labels.symbol(tags[i]).c_str());
  }
}

int cmd_tag(const std::string& model_path, const std::string& input_path,
            const std::string& decoder, const std::string& mode) {
  const chainlab::AnyModel any = chainlab::load_any_model(model_path);

  std::vector<std::vector<std::string>> sequences;
  if (input_path.empty()) {
    sequences = chainlab::read_token_sequences(std::cin);
  } else {
    std::ifstream in(input_path);
    if (!in) throw chainlab::ParseError("cannot open input file '" + input_path + "'");
    sequences = chainlab::read_token_sequences(in);
  }

  const bool generative = (mode == "generative");
  const chainlab::HmmModel* hmm = std::get_if<chainlab::HmmModel>(&any);
  const chainlab::DiscriminativeParams* disc = std::get_if<chainlab::DiscriminativeParams>(&any);

  if (generative && hmm == nullptr) {
    throw chainlab::ParseError("generative mode requires a hidden-Markov model file (convert "
                               "chain-CRF models first)");
  }
  if (!generative && hmm == nullptr && disc == nullptr) {
    throw chainlab::ParseError("discriminative mode requires a discriminative-parameter or "
                               "hidden-Markov model file");
  }

  // Discriminative decoding from a generative model derives the
  // label-given-observation parameterization on the fly, one derivation per
  // distinct sequence length.
  std::map<std::size_t, chainlab::DiscriminativeParams> derived;
  bool notice_printed = false;

  bool first = true;
  for (const std::vector<std::string>& tokens : sequences) {
    if (!first) std::printf("\n");
    first = false;

    const chainlab::Alphabet& obs_alphabet = generative || disc == nullptr
                                                 ? hmm->obs_alphabet()
                                                 : disc->obs_alphabet();
    const chainlab::Alphabet& label_alphabet = generative || disc == nullptr
                                                   ? hmm->label_alphabet()
                                                   : disc->label_alphabet();
    const std::vector<std::size_t> y = tokens_to_indices(tokens, obs_alphabet);

    if (generative) {
      if (decoder == "mpm") {
        print_tagged(tokens, chainlab::mpm_decode(*hmm, y), label_alphabet);
      } else {
        const chainlab::MapResult r = chainlab::map_decode(*hmm, y);
        std::printf("# log-score: %.17g\n", r.log_score);
        print_tagged(tokens, r.path, label_alphabet);
      }
      continue;
    }

    const chainlab::DiscriminativeParams* params = disc;
    if (params == nullptr) {
      if (!notice_printed) {
        std::fprintf(stderr,
                     "note: deriving discriminative parameters from the generative model "
                     "(one derivation per sequence length)\n");
        notice_printed = true;
      }
      auto it = derived.find(y.size());
      if (it == derived.end()) {
        it = derived.emplace(y.size(), chainlab::derive_disc_params(*hmm, y.size())).first;
      }
      params = &it->second;
    }

    if (decoder == "mpm") {
      print_tagged(tokens, chainlab::disc_mpm_decode(*params, y), label_alphabet);
    } else {
      const chainlab::MapResult r = chainlab::disc_viterbi(*params, y);
      std::printf("# unnormalized log-score: %.17g\n", r.log_score);
      print_tagged(tokens, r.path, label_alphabet);
    }
  }
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& model_paths, std::uint64_t seed,
               const std::string& report_path, std::size_t max_n) {
  chainlab::verify::VerifyReport report;
  if (model_paths.empty()) {
    report = chainlab::verify::run_standard_suite(seed);
  } else {
    for (const std::string& path : model_paths) {
      const chainlab::AnyModel model = chainlab::load_any_model(path);
      for (chainlab::verify::CheckResult r : chainlab::verify::verify_model(model, seed, max_n)) {
        r.name = path + ": " + r.name;
        report.checks.push_back(std::move(r));
      }
    }
  }

  for (const chainlab::verify::CheckResult& c : report.checks) {
    std::printf("[%s] %s max-dev=%.3e tol=%.0e cases=%zu%s%s\n", c.passed ? "PASS" : "FAIL",
                c.name.c_str(), c.max_deviation, c.tolerance, c.cases,
                c.note.empty() ? "" : " | ", c.note.c_str());
  }
  const std::size_t total = report.checks.size();
  std::size_t passed = 0;
  for (const auto& c : report.checks) {
    if (c.passed) ++passed;
  }
  std::printf("%zu/%zu checks passed\n", passed, total);

  if (!report_path.empty()) {
    nlohmann::json j = report.to_json();
    j["seed"] = seed;
    chainlab::detail::write_json_file(report_path, j);
  }
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path) {
  const chainlab::TaggedCorpus gold = chainlab::load_corpus(gold_path);
  const chainlab::TaggedCorpus pred = chainlab::load_corpus(pred_path);

  if (pred.sequences().size() != gold.sequences().size()) {
    throw chainlab::DimensionError("prediction has " + std::to_string(pred.sequences().size()) +
                                   " sequences, gold has " +
                                   std::to_string(gold.sequences().size()));
  }
  const std::size_t impossible = gold.label_alphabet().size();
  std::vector<std::vector<std::size_t>> predicted;
  predicted.reserve(pred.sequences().size());
  for (std::size_t i = 0; i < pred.sequences().size(); ++i) {
    const chainlab::LabeledSequence& ps = pred.sequences()[i];
    const chainlab::LabeledSequence& gs = gold.sequences()[i];
    if (!ps.has_labels()) {
      throw chainlab::ParseError("prediction sequence " + std::to_string(i) + " is untagged");
    }
    if (ps.size() != gs.size()) {
      throw chainlab::DimensionError("sequence " + std::to_string(i) + ": prediction has " +
                                     std::to_string(ps.size()) + " tokens, gold has " +
                                     std::to_string(gs.size()));
    }
    std::vector<std::size_t> labels;
    labels.reserve(ps.size());
    for (std::size_t t = 0; t < ps.size(); ++t) {
      const std::string& gold_tok = gold.obs_alphabet().symbol(gs.observations[t]);
      const std::string& pred_tok = pred.obs_alphabet().symbol(ps.observations[t]);
      if (gold_tok != pred_tok) {
        throw chainlab::ParseError("sequence " + std::to_string(i) + " position " +
                                   std::to_string(t) + ": token '" + pred_tok +
                                   "' does not match gold token '" + gold_tok + "'");
      }
      const std::string& tag = pred.label_alphabet().symbol((*ps.labels)[t]);
      // Tags outside the gold tagset are counted as plain errors.
      labels.push_back(gold.label_alphabet().find(tag).value_or(impossible));
    }
    predicted.push_back(std::move(labels));
  }
  std::printf("accuracy\t%.17g\n", chainlab::evaluate_accuracy(gold, predicted));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chainlab: exact inference for discrete chain models"};
  app.footer(kFormatHelp);
  app.require_subcommand(1);

  std::string corpus_path, out_path, in_path, model_path, input_path;
  std::string gold_path, pred_path, report_path;
  std::string kind = "hmm";
  std::string decoder = "mpm";
  std::string mode = "generative";
  double k = chainlab::kDefaultSmoothing;
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_n = chainlab::verify::kDefaultStationaryCheckLength;
  std::vector<std::string> verify_models;

  CLI::App* fit = app.add_subcommand("fit", "Estimate a model from a tagged TSV corpus");
  fit->add_option("--corpus", corpus_path, "Tagged TSV corpus")->required();
  fit->add_option("--out", out_path, "Output model JSON path")->required();
  fit->add_option("--kind", kind, "Model kind to fit")
      ->check(CLI::IsMember({"hmm", "disc"}))
      ->capture_default_str();
  fit->add_option("--k", k, "Additive smoothing weight")->capture_default_str();

  CLI::App* convert =
      app.add_subcommand("convert", "Rewrite a chain-CRF model file as the equivalent HMM");
  convert->add_option("--in", in_path, "Chain-CRF model JSON")->required();
  convert->add_option("--out", out_path, "Output HMM JSON path")->required();

  CLI::App* tag = app.add_subcommand("tag", "Decode token sequences to tagged TSV on stdout");
  tag->add_option("--model", model_path, "Model JSON (HMM or discriminative parameters)")
      ->required();
  tag->add_option("--input", input_path, "Token file, one token per line (default: stdin)");
  tag->add_option("--decoder", decoder, "Decoding rule: per-position posterior mode (mpm) "
                                        "or best full sequence (map)")
      ->check(CLI::IsMember({"mpm", "map"}))
      ->capture_default_str();
  tag->add_option("--mode", mode, "Parameterization to decode with")
      ->check(CLI::IsMember({"generative", "discriminative"}))
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand(
      "verify", "Run certification checks: randomized cross-validation suite when no "
                "model files are given, per-model checks otherwise");
  verify->add_option("models", verify_models, "Model JSON files to check");
  verify->add_option("--seed", seed, "Seed for all randomized checks")->capture_default_str();
  verify->add_option("--max-n", max_n, "Sequence length used to check stationary models")
      ->capture_default_str();
  verify->add_option("--report", report_path, "Write a JSON report here");

  CLI::App* eval = app.add_subcommand("eval", "Token accuracy of predicted vs gold tagging");
  eval->add_option("--gold", gold_path, "Gold tagged TSV")->required();
  eval->add_option("--pred", pred_path, "Predicted tagged TSV")->required();

  int result = kExitOk;
  fit->callback([&]() { result = cmd_fit(corpus_path, out_path, kind, k); });
  convert->callback([&]() { result = cmd_convert(in_path, out_path); });
  tag->callback([&]() { result = cmd_tag(model_path, input_path, decoder, mode); });
  verify->callback([&]() { result = cmd_verify(verify_models, seed, report_path, max_n); });
  eval->callback([&]() { result = cmd_eval(gold_path, pred_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const chainlab::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  } catch (const chainlab::TooLargeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitTooLarge;
  } catch (const chainlab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return result;
}
