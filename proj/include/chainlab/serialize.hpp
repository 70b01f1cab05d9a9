#ifndef CHAINLAB_SERIALIZE_HPP
#define CHAINLAB_SERIALIZE_HPP

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chainlab/alphabet.hpp"
#include "chainlab/categorical.hpp"
#include "chainlab/crf.hpp"
#include "chainlab/discriminative.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/matrix.hpp"
#include "chainlab/potential_chain.hpp"

/// Versioned JSON model files.
///
/// Common schema rules ("format" identifies the kind):
///   - alphabets are arrays of strings,
///   - matrices are row-major arrays of arrays of finite doubles,
///   - probabilities are stored in linear space and converted to log-space
///     on load; CRF and potential-chain scores are stored as the log-space
///     values they natively are,
///   - stationary models store exactly one matrix per family and set
///     "stationary": true.
///
/// Loading validates through the normal model constructors, so a file that
/// parses as JSON but violates a model invariant (bad row sum, ragged
/// matrix, mismatched counts) is reported as a ParseError naming the file.
namespace chainlab {

inline constexpr const char* kHmmFormat = "chainlab-hmm-v1";
inline constexpr const char* kCrfFormat = "chainlab-crf-v1";
inline constexpr const char* kDiscFormat = "chainlab-disc-v1";
inline constexpr const char* kPotentialChainFormat = "chainlab-potchain-v1";

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

inline std::vector<std::string> string_array(const nlohmann::json& j, const char* name) {
  const nlohmann::json& field = require_field(j, name);
  if (!field.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
  std::vector<std::string> out;
  out.reserve(field.size());
  for (const auto& item : field) {
    if (!item.is_string()) {
      throw ParseError(std::string("field '") + name + "' must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

inline std::vector<double> double_array(const nlohmann::json& field, const std::string& what) {
  if (!field.is_array()) throw ParseError(what + " must be an array");
  std::vector<double> out;
  out.reserve(field.size());
  for (const auto& item : field) {
    if (!item.is_number()) throw ParseError(what + " must contain only numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

inline Matrix matrix_field(const nlohmann::json& field, const std::string& what) {
  if (!field.is_array() || field.empty()) {
    throw ParseError(what + " must be a nonempty array of rows");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(field.size());
  for (std::size_t r = 0; r < field.size(); ++r) {
    rows.push_back(double_array(field[r], what + " row " + std::to_string(r)));
  }
  return Matrix::from_rows(rows);
}

inline std::vector<Matrix> matrix_list(const nlohmann::json& j, const char* name) {
  const nlohmann::json& field = require_field(j, name);
  if (!field.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
  std::vector<Matrix> out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    out.push_back(matrix_field(field[i], std::string(name) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

inline bool bool_field(const nlohmann::json& j, const char* name) {
  const nlohmann::json& field = require_field(j, name);
  if (!field.is_boolean()) throw ParseError(std::string("field '") + name + "' must be a boolean");
  return field.get<bool>();
}

inline std::string format_of(const nlohmann::json& j) {
  const nlohmann::json& field = require_field(j, "format");
  if (!field.is_string()) throw ParseError("field 'format' must be a string");
  return field.get<std::string>();
}

inline void expect_format(const nlohmann::json& j, const char* format) {
  const std::string found = format_of(j);
  if (found != format) {
    throw ParseError("expected format '" + std::string(format) + "', found '" + found + "'");
  }
}

}  // namespace detail

inline nlohmann::json hmm_to_json(const HmmModel& model) {
  nlohmann::json j;
  j["format"] = kHmmFormat;
  j["labels"] = model.label_alphabet().symbols();
  j["observations"] = model.obs_alphabet().symbols();
  j["stationary"] = model.is_stationary();
  j["initial"] = model.initial().probs();
  nlohmann::json transitions = nlohmann::json::array();
  nlohmann::json emissions = nlohmann::json::array();
  if (model.is_stationary()) {
    transitions.push_back(detail::matrix_to_json(model.transition_at(0)));
    emissions.push_back(detail::matrix_to_json(model.emission_at(0)));
  } else {
    const std::size_t N = model.length().value();
    for (std::size_t t = 0; t + 1 < N; ++t) {
      transitions.push_back(detail::matrix_to_json(model.transition_at(t)));
    }
    for (std::size_t t = 0; t < N; ++t) {
      emissions.push_back(detail::matrix_to_json(model.emission_at(t)));
    }
  }
  j["transitions"] = std::move(transitions);
  j["emissions"] = std::move(emissions);
  return j;
}

inline HmmModel hmm_from_json(const nlohmann::json& j) {
  detail::expect_format(j, kHmmFormat);
  Alphabet labels{detail::string_array(j, "labels")};
  Alphabet obs{detail::string_array(j, "observations")};
  Categorical initial{detail::double_array(detail::require_field(j, "initial"), "field 'initial'")};
  std::vector<Matrix> transitions = detail::matrix_list(j, "transitions");
  std::vector<Matrix> emissions = detail::matrix_list(j, "emissions");
  if (detail::bool_field(j, "stationary")) {
    if (transitions.size() != 1 || emissions.size() != 1) {
      throw ParseError("stationary model must have exactly one transition and one emission matrix");
    }
    return HmmModel::stationary(std::move(labels), std::move(obs), std::move(initial),
                                std::move(transitions[0]), std::move(emissions[0]));
  }
  return HmmModel(std::move(labels), std::move(obs), std::move(initial), std::move(transitions),
                  std::move(emissions));
}

inline nlohmann::json crf_to_json(const LcCrfModel& crf) {
  nlohmann::json j;
  j["format"] = kCrfFormat;
  j["labels"] = crf.label_alphabet().symbols();
  j["observations"] = crf.obs_alphabet().symbols();
  nlohmann::json pairwise = nlohmann::json::array();
  nlohmann::json unary = nlohmann::json::array();
  for (std::size_t t = 0; t + 1 < crf.length(); ++t) {
    pairwise.push_back(detail::matrix_to_json(crf.pairwise_at(t)));
  }
  for (std::size_t t = 0; t < crf.length(); ++t) {
    unary.push_back(detail::matrix_to_json(crf.unary_at(t)));
  }
  j["pairwise"] = std::move(pairwise);
  j["unary"] = std::move(unary);
  return j;
}

inline LcCrfModel crf_from_json(const nlohmann::json& j) {
  detail::expect_format(j, kCrfFormat);
  return LcCrfModel(Alphabet{detail::string_array(j, "labels")},
                    Alphabet{detail::string_array(j, "observations")},
                    detail::matrix_list(j, "pairwise"), detail::matrix_list(j, "unary"));
}

inline nlohmann::json disc_to_json(const DiscriminativeParams& params) {
  nlohmann::json j;
  j["format"] = kDiscFormat;
  j["labels"] = params.label_alphabet().symbols();
  j["observations"] = params.obs_alphabet().symbols();
  j["stationary"] = params.is_stationary();
  j["consistency"] = params.chain_consistent() ? "chain" : "raw";
  nlohmann::json priors = nlohmann::json::array();
  nlohmann::json transitions = nlohmann::json::array();
  nlohmann::json label_given_obs = nlohmann::json::array();
  const std::size_t N = params.is_stationary() ? 1 : params.length().value();
  for (std::size_t t = 0; t < N; ++t) {
    priors.push_back(params.prior_at(t).probs());
    label_given_obs.push_back(detail::matrix_to_json(params.label_given_obs_at(t)));
  }
  const std::size_t steps = params.is_stationary() ? 1 : N - 1;
  for (std::size_t t = 0; t < steps; ++t) {
    transitions.push_back(detail::matrix_to_json(params.transition_at(t)));
  }
  j["priors"] = std::move(priors);
  j["transitions"] = std::move(transitions);
  j["label_given_obs"] = std::move(label_given_obs);
  return j;
}

inline DiscriminativeParams disc_from_json(const nlohmann::json& j) {
  detail::expect_format(j, kDiscFormat);
  Alphabet labels{detail::string_array(j, "labels")};
  Alphabet obs{detail::string_array(j, "observations")};
  const nlohmann::json& consistency_field = detail::require_field(j, "consistency");
  if (!consistency_field.is_string()) throw ParseError("field 'consistency' must be a string");
  const std::string consistency_name = consistency_field.get<std::string>();
  PriorConsistency consistency;
  if (consistency_name == "chain") {
    consistency = PriorConsistency::kChainConsistent;
  } else if (consistency_name == "raw") {
    consistency = PriorConsistency::kRaw;
  } else {
    throw ParseError("field 'consistency' must be \"chain\" or \"raw\"");
  }

  const nlohmann::json& priors_field = detail::require_field(j, "priors");
  if (!priors_field.is_array() || priors_field.empty()) {
    throw ParseError("field 'priors' must be a nonempty array");
  }
  std::vector<Categorical> priors;
  priors.reserve(priors_field.size());
  for (std::size_t i = 0; i < priors_field.size(); ++i) {
    priors.emplace_back(
        detail::double_array(priors_field[i], "priors[" + std::to_string(i) + "]"));
  }
  std::vector<Matrix> transitions = detail::matrix_list(j, "transitions");
  std::vector<Matrix> label_given_obs = detail::matrix_list(j, "label_given_obs");

  if (detail::bool_field(j, "stationary")) {
    if (priors.size() != 1 || transitions.size() != 1 || label_given_obs.size() != 1) {
      throw ParseError("stationary parameters must have exactly one entry per family");
    }
    return DiscriminativeParams::stationary(std::move(labels), std::move(obs),
                                            std::move(priors[0]), std::move(transitions[0]),
                                            std::move(label_given_obs[0]), consistency);
  }
  return DiscriminativeParams(std::move(labels), std::move(obs), std::move(priors),
                              std::move(transitions), std::move(label_given_obs), consistency);
}

inline nlohmann::json potential_chain_to_json(const PotentialChain& chain) {
  nlohmann::json j;
  j["format"] = kPotentialChainFormat;
  j["states"] = chain.state_alphabet().symbols();
  nlohmann::json potentials = nlohmann::json::array();
  for (const Matrix& m : chain.log_potentials()) potentials.push_back(detail::matrix_to_json(m));
  j["log_potentials"] = std::move(potentials);
  return j;
}

inline PotentialChain potential_chain_from_json(const nlohmann::json& j) {
  detail::expect_format(j, kPotentialChainFormat);
  return PotentialChain(Alphabet{detail::string_array(j, "states")},
                        detail::matrix_list(j, "log_potentials"));
}

using AnyModel = std::variant<HmmModel, LcCrfModel, DiscriminativeParams, PotentialChain>;

namespace detail {

inline nlohmann::json parse_model_json(std::istream& in, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw ParseError(origin + ": top-level JSON value must be an object");
  return j;
}

template <typename Fn>
auto with_parse_context(const std::string& origin, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  } catch (const Error& e) {
    // Invariant violations inside model constructors mean the *file* is bad.
    throw ParseError(origin + ": invalid model: " + e.what());
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  return in;
}

}  // namespace detail

inline AnyModel model_from_json(const nlohmann::json& j, const std::string& origin = "model") {
  return detail::with_parse_context(origin, [&]() -> AnyModel {
    const std::string format = detail::format_of(j);
    if (format == kHmmFormat) return hmm_from_json(j);
    if (format == kCrfFormat) return crf_from_json(j);
    if (format == kDiscFormat) return disc_from_json(j);
    if (format == kPotentialChainFormat) return potential_chain_from_json(j);
    throw ParseError("unknown format '" + format + "'");
  });
}

inline AnyModel load_any_model(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  return model_from_json(detail::parse_model_json(in, path), path);
}

inline HmmModel load_hmm(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  const nlohmann::json j = detail::parse_model_json(in, path);
  return detail::with_parse_context(path, [&] { return hmm_from_json(j); });
}

inline LcCrfModel load_crf(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  const nlohmann::json j = detail::parse_model_json(in, path);
  return detail::with_parse_context(path, [&] { return crf_from_json(j); });
}

inline DiscriminativeParams load_disc(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  const nlohmann::json j = detail::parse_model_json(in, path);
  return detail::with_parse_context(path, [&] { return disc_from_json(j); });
}

inline PotentialChain load_potential_chain(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  const nlohmann::json j = detail::parse_model_json(in, path);
  return detail::with_parse_context(path, [&] { return potential_chain_from_json(j); });
}

namespace detail {

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw ParseError("failed writing '" + path + "'");
}

}  // namespace detail

inline void save_model(const std::string& path, const HmmModel& model) {
  detail::write_json_file(path, hmm_to_json(model));
}
inline void save_model(const std::string& path, const LcCrfModel& crf) {
  detail::write_json_file(path, crf_to_json(crf));
}
inline void save_model(const std::string& path, const DiscriminativeParams& params) {
  detail::write_json_file(path, disc_to_json(params));
}
inline void save_model(const std::string& path, const PotentialChain& chain) {
  detail::write_json_file(path, potential_chain_to_json(chain));
}

}  // namespace chainlab

#endif  // CHAINLAB_SERIALIZE_HPP
