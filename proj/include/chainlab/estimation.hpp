#ifndef CHAINLAB_ESTIMATION_HPP
#define CHAINLAB_ESTIMATION_HPP

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/alphabet.hpp"
#include "chainlab/categorical.hpp"
#include "chainlab/discriminative.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/hmm.hpp"
#include "chainlab/matrix.hpp"
#include "chainlab/sequence.hpp"

namespace chainlab {

/// Reserved observation symbol standing in for test-time tokens that never
/// occurred in training data. Fitting appends it to the observation alphabet
/// when absent so decoders stay total over arbitrary input.
inline constexpr const char* kUnknownToken = "<unk>";

/// Default add-k smoothing weight.
inline constexpr double kDefaultSmoothing = 0.1;

namespace detail {

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace detail

/// Parse a tagged corpus from a TSV stream: one "token<TAB>TAG" per line,
/// blank lines between sequences, '#'-prefixed lines ignored. Alphabets are
/// induced from the data (sorted lexicographically for determinism) unless
/// fixed ones are supplied, in which case unseen symbols are a
/// VocabularyError. Malformed lines raise ParseError with the line number.
inline TaggedCorpus load_corpus(std::istream& in, std::optional<Alphabet> obs_alphabet = std::nullopt,
                                std::optional<Alphabet> label_alphabet = std::nullopt) {
  std::vector<std::vector<std::pair<std::string, std::string>>> raw_sequences;
  std::vector<std::pair<std::string, std::string>> current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(std::move(line));
    if (!line.empty() && line[0] == '#') continue;
    if (detail::is_blank(line)) {
      if (!current.empty()) raw_sequences.push_back(std::move(current));
      current.clear();
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected exactly one tab separating token and tag");
    }
    std::string token = line.substr(0, tab);
    std::string tag = line.substr(tab + 1);
    if (token.empty() || tag.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty token or tag");
    }
    current.emplace_back(std::move(token), std::move(tag));
  }
  if (!current.empty()) raw_sequences.push_back(std::move(current));

  if (!obs_alphabet.has_value()) {
    std::set<std::string> tokens;
    for (const auto& seq : raw_sequences) {
      for (const auto& [token, tag] : seq) tokens.insert(token);
    }
    obs_alphabet = Alphabet(std::vector<std::string>(tokens.begin(), tokens.end()));
  }
  if (!label_alphabet.has_value()) {
    std::set<std::string> tags;
    for (const auto& seq : raw_sequences) {
      for (const auto& [token, tag] : seq) tags.insert(tag);
    }
    label_alphabet = Alphabet(std::vector<std::string>(tags.begin(), tags.end()));
  }

  std::vector<LabeledSequence> sequences;
  sequences.reserve(raw_sequences.size());
  for (const auto& raw : raw_sequences) {
    LabeledSequence seq;
    seq.labels.emplace();
    seq.observations.reserve(raw.size());
    seq.labels->reserve(raw.size());
    for (const auto& [token, tag] : raw) {
      seq.observations.push_back(obs_alphabet->index(token));
      seq.labels->push_back(label_alphabet->index(tag));
    }
    sequences.push_back(std::move(seq));
  }
  return TaggedCorpus(std::move(*obs_alphabet), std::move(*label_alphabet), std::move(sequences));
}

inline TaggedCorpus load_corpus(const std::string& path,
                                std::optional<Alphabet> obs_alphabet = std::nullopt,
                                std::optional<Alphabet> label_alphabet = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file '" + path + "'");
  return load_corpus(in, std::move(obs_alphabet), std::move(label_alphabet));
}

/// Write a corpus in the same TSV dialect load_corpus reads; loading the
/// result reproduces the corpus exactly. Unlabeled sequences are not
/// representable and raise ValidationError.
inline void save_corpus(std::ostream& out, const TaggedCorpus& corpus) {
  bool first = true;
  for (const auto& seq : corpus.sequences()) {
    if (!seq.has_labels()) {
      throw ValidationError("cannot save a sequence without labels as tagged TSV");
    }
    if (!first) out << '\n';
    first = false;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      out << corpus.obs_alphabet().symbol(seq.observations[i]) << '\t'
          << corpus.label_alphabet().symbol((*seq.labels)[i]) << '\n';
    }
  }
}

inline void save_corpus(const std::string& path, const TaggedCorpus& corpus) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  save_corpus(out, corpus);
}

/// Read plain token sequences for tagging: one token per line (anything
/// after a tab is ignored, so tagged TSV is accepted too), blank lines
/// between sequences, '#'-prefixed lines ignored.
inline std::vector<std::vector<std::string>> read_token_sequences(std::istream& in) {
  std::vector<std::vector<std::string>> sequences;
  std::vector<std::string> current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(std::move(line));
    if (!line.empty() && line[0] == '#') continue;
    if (detail::is_blank(line)) {
      if (!current.empty()) sequences.push_back(std::move(current));
      current.clear();
      continue;
    }
    std::string token = line.substr(0, line.find('\t'));
    if (token.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty token");
    }
    current.push_back(std::move(token));
  }
  if (!current.empty()) sequences.push_back(std::move(current));
  return sequences;
}

namespace detail {

struct CorpusCounts {
  Alphabet obs_alphabet;   // corpus tokens plus kUnknownToken
  Alphabet label_alphabet;
  std::vector<double> initial;       // sequence-initial label counts
  std::vector<double> unigram;       // label occurrence counts
  Matrix bigram;                     // label -> next label
  Matrix emission;                   // label -> token
  Matrix label_by_token;             // token -> label
  double num_sequences = 0.0;
  double num_tokens = 0.0;
};

inline CorpusCounts count_corpus(const TaggedCorpus& corpus) {
  if (corpus.empty()) throw EstimationError("cannot fit on an empty corpus");
  if (!corpus.fully_labeled()) throw EstimationError("cannot fit on unlabeled sequences");
  if (corpus.label_alphabet().empty() || corpus.obs_alphabet().empty()) {
    throw EstimationError("cannot fit with empty alphabets");
  }

  CorpusCounts c;
  std::vector<std::string> tokens = corpus.obs_alphabet().symbols();
  if (!corpus.obs_alphabet().contains(kUnknownToken)) tokens.push_back(kUnknownToken);
  c.obs_alphabet = Alphabet(std::move(tokens));
  c.label_alphabet = corpus.label_alphabet();

  const std::size_t L = c.label_alphabet.size();
  const std::size_t O = c.obs_alphabet.size();
  c.initial.assign(L, 0.0);
  c.unigram.assign(L, 0.0);
  c.bigram = Matrix(L, L, 0.0);
  c.emission = Matrix(L, O, 0.0);
  c.label_by_token = Matrix(O, L, 0.0);

  for (const auto& seq : corpus.sequences()) {
    const auto& labels = *seq.labels;
    c.num_sequences += 1.0;
    c.initial[labels[0]] += 1.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      c.num_tokens += 1.0;
      c.unigram[labels[i]] += 1.0;
      c.emission(labels[i], seq.observations[i]) += 1.0;
      c.label_by_token(seq.observations[i], labels[i]) += 1.0;
      if (i + 1 < seq.size()) c.bigram(labels[i], labels[i + 1]) += 1.0;
    }
  }
  return c;
}

/// Add-k smoothed row. A row whose raw total is zero with k = 0 becomes
/// uniform, the k -> 0 limit of the smoothed estimate.
inline std::vector<double> smoothed_row(std::span<const double> counts, double k) {
  const std::size_t n = counts.size();
  double total = 0.0;
  for (double c : counts) total += c;
  const double denom = total + k * static_cast<double>(n);
  std::vector<double> row(n);
  if (denom <= 0.0) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(n));
    return row;
  }
  for (std::size_t i = 0; i < n; ++i) row[i] = (counts[i] + k) / denom;
  return row;
}

inline Matrix smoothed_rows(const Matrix& counts, double k) {
  Matrix out(counts.rows(), counts.cols());
  for (std::size_t r = 0; r < counts.rows(); ++r) {
    const std::vector<double> row = smoothed_row(counts.row(r), k);
    for (std::size_t c = 0; c < counts.cols(); ++c) out(r, c) = row[c];
  }
  return out;
}

}  // namespace detail

/// Fit a stationary hidden Markov model by add-k smoothed relative
/// frequencies: the initial law from sequence-initial labels, transitions
/// from label bigrams, emissions from (label, token) pairs. The observation
/// alphabet gains the reserved unknown token when absent; its emission
/// counts are zero, so it receives only smoothing mass.
inline HmmModel fit_hmm(const TaggedCorpus& corpus, double k = kDefaultSmoothing) {
  if (k < 0.0) throw EstimationError("smoothing weight must be nonnegative");
  const detail::CorpusCounts c = detail::count_corpus(corpus);
  return HmmModel::stationary(c.label_alphabet, c.obs_alphabet,
                              Categorical(detail::smoothed_row(c.initial, k)),
                              detail::smoothed_rows(c.bigram, k),
                              detail::smoothed_rows(c.emission, k));
}

/// Fit stationary discriminative parameters directly from counts: the prior
/// is the smoothed label unigram reused at every position (hence the raw
/// flag — it is not the propagated marginal of the fitted transitions),
/// transitions are as in fit_hmm, and p(label | token) is the smoothed
/// relative frequency per token. The unknown token's row is the smoothed
/// unigram itself, since an unseen token carries no label information.
///
/// With k = 0 a label absent from the data gets a zero prior; fitting
/// succeeds but decoders will reject the parameters with a degenerate-prior
/// error.
inline DiscriminativeParams fit_disc_params(const TaggedCorpus& corpus,
                                            double k = kDefaultSmoothing) {
  if (k < 0.0) throw EstimationError("smoothing weight must be nonnegative");
  const detail::CorpusCounts c = detail::count_corpus(corpus);
  const std::size_t L = c.label_alphabet.size();
  const std::size_t O = c.obs_alphabet.size();

  const std::vector<double> unigram = detail::smoothed_row(c.unigram, k);
  Matrix label_given_obs = detail::smoothed_rows(c.label_by_token, k);
  // A token with no occurrences — the reserved unknown token, or an unseen
  // symbol under a fixed alphabet — carries no label information; its row is
  // the smoothed unigram rather than the uniform row the 0-count smoothing
  // formula would produce.
  for (std::size_t y = 0; y < O; ++y) {
    double total = 0.0;
    for (std::size_t x = 0; x < L; ++x) total += c.label_by_token(y, x);
    if (total == 0.0) {
      for (std::size_t x = 0; x < L; ++x) label_given_obs(y, x) = unigram[x];
    }
  }

  return DiscriminativeParams::stationary(c.label_alphabet, c.obs_alphabet, Categorical(unigram),
                                          detail::smoothed_rows(c.bigram, k),
                                          std::move(label_given_obs), PriorConsistency::kRaw);
}

/// Per-token accuracy of predicted label sequences against a gold corpus.
inline double evaluate_accuracy(const TaggedCorpus& gold,
                                const std::vector<std::vector<std::size_t>>& predicted) {
  if (predicted.size() != gold.sequences().size()) {
    throw DimensionError("predicted " + std::to_string(predicted.size()) + " sequences for " +
                         std::to_string(gold.sequences().size()) + " gold sequences");
  }
  double correct = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s < predicted.size(); ++s) {
    const LabeledSequence& seq = gold.sequences()[s];
    if (!seq.has_labels()) throw EstimationError("gold sequence " + std::to_string(s) +
                                                 " has no labels");
    if (predicted[s].size() != seq.size()) {
      throw DimensionError("sequence " + std::to_string(s) + ": predicted length " +
                           std::to_string(predicted[s].size()) + " vs gold length " +
                           std::to_string(seq.size()));
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
      total += 1.0;
      if (predicted[s][i] == (*seq.labels)[i]) correct += 1.0;
    }
  }
  if (total == 0.0) throw EstimationError("no tokens to evaluate");
  return correct / total;
}

}  // namespace chainlab

#endif  // CHAINLAB_ESTIMATION_HPP
